use std::collections::HashMap;

use super::tree::{Node, ParityDecisionTree};
use crate::error::{cap_exceeded, Result};
use crate::f2::parity;
use crate::fourier::PseudoBooleanFunction;

/// Largest `n` accepted by [`optimal_depth`].
pub const OPT_MAX_N: usize = 5;

struct Solver {
    ones: u64,
    halves: Vec<(u64, u64)>,
    memo: HashMap<u64, (usize, u64)>,
}

impl Solver {
    fn constant(&self, r: u64) -> Option<bool> {
        if r & self.ones == 0 {
            Some(false)
        } else if r & !self.ones == 0 {
            Some(true)
        } else {
            None
        }
    }

    /// Optimal depth on the restriction `r` (a point set), memoized.
    fn solve(&mut self, r: u64) -> usize {
        if self.constant(r).is_some() {
            return 0;
        }
        if let Some(&(d, _)) = self.memo.get(&r) {
            return d;
        }
        let mut best = (usize::MAX, 0);
        for i in 0..self.halves.len() {
            let (mask, h) = self.halves[i];
            let (r0, r1) = (r & !h, r & h);
            if r0 == 0 || r1 == 0 {
                continue;
            }
            let d0 = self.solve(r0);
            if 1 + d0 >= best.0 {
                continue;
            }
            let d = 1 + d0.max(self.solve(r1));
            if d < best.0 {
                best = (d, mask);
                if d == 1 {
                    break;
                }
            }
        }
        self.memo.insert(r, best);
        best.0
    }

    fn build(&self, r: u64) -> Node {
        if let Some(b) = self.constant(r) {
            return Node::leaf(b);
        }
        let (_, mask) = self.memo[&r];
        let h = self.halves[(mask - 1) as usize].1;
        Node::query(mask, self.build(r & !h), self.build(r & h))
    }
}

/// Minimum depth of a parity decision tree computing the 0/1 table `f`,
/// with a witness tree. Ties go to the numerically smallest parity mask.
pub fn optimal_depth(f: &PseudoBooleanFunction) -> Result<(usize, ParityDecisionTree)> {
    let n = f.n();
    if n > OPT_MAX_N {
        return Err(cap_exceeded(format!("optimal depth over {n} variables"), n, OPT_MAX_N));
    }
    if !f.is_boolean() {
        return Err(crate::Error::InvalidParameter("optimal depth needs a 0/1 table".into()));
    }
    let points = 1u64 << n;
    let cube = if points == 64 { u64::MAX } else { (1u64 << points) - 1 };
    let ones = (0..points).filter(|&x| f.bit(x)).fold(0u64, |a, x| a | 1 << x);
    let halves = (1..points)
        .map(|mask| {
            let h = (0..points).filter(|&x| parity(mask & x)).fold(0u64, |a, x| a | 1 << x);
            (mask, h)
        })
        .collect();
    let mut s = Solver {
        ones,
        halves,
        memo: HashMap::new(),
    };
    let d = s.solve(cube);
    let tree = ParityDecisionTree::new(n, s.build(cube))?;
    debug_assert_eq!(tree.depth(), d);
    Ok((d, tree))
}
