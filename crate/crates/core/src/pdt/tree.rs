use num_bigint::BigUint;
use num_traits::{One, ToPrimitive};
use serde::{Deserialize, Serialize};

use crate::distribution::CubeDistribution;
use crate::error::{cap_exceeded, Error, Result};
use crate::f2::{parity, AffineSubspace, F2Vector};
use crate::fourier::PseudoBooleanFunction;
use crate::rational::Rational;

/// Largest `n` a tree may have (queries are `u64` masks).
pub const MAX_TREE_N: usize = 64;

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Node {
    Leaf {
        leaf: bool,
    },
    /// Queries `<mask, x>` and follows `zero` or `one`.
    Query {
        mask: u64,
        zero: Box<Node>,
        one: Box<Node>,
    },
}

impl Node {
    pub fn leaf(b: bool) -> Self {
        Node::Leaf { leaf: b }
    }

    pub fn query(mask: u64, zero: Node, one: Node) -> Self {
        Node::Query {
            mask,
            zero: Box::new(zero),
            one: Box::new(one),
        }
    }

    fn depth(&self) -> usize {
        match self {
            Node::Leaf { .. } => 0,
            Node::Query { zero, one, .. } => 1 + zero.depth().max(one.depth()),
        }
    }

    fn check(&self, n: usize) -> Result<()> {
        match self {
            Node::Leaf { .. } => Ok(()),
            Node::Query { mask, zero, one } => {
                if *mask == 0 {
                    return Err(Error::InvalidParameter("empty parity query".into()));
                }
                if n < 64 && mask >> n != 0 {
                    return Err(Error::InvalidParameter(format!(
                        "query {mask:#x} outside {n} variables"
                    )));
                }
                zero.check(n)?;
                one.check(n)
            }
        }
    }
}

/// A parity decision tree over `{0,1}^n`. Every query is a nonempty parity.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "TreeJson")]
pub struct ParityDecisionTree {
    n: usize,
    root: Node,
}

#[derive(Deserialize)]
struct TreeJson {
    n: usize,
    root: Node,
}

impl TryFrom<TreeJson> for ParityDecisionTree {
    type Error = Error;
    fn try_from(j: TreeJson) -> Result<Self> {
        Self::new(j.n, j.root)
    }
}

impl ParityDecisionTree {
    pub fn new(n: usize, root: Node) -> Result<Self> {
        if n > MAX_TREE_N {
            return Err(Error::InvalidParameter(format!("trees need n <= {MAX_TREE_N}")));
        }
        root.check(n)?;
        Ok(Self { n, root })
    }

    pub fn constant(n: usize, b: bool) -> Self {
        Self { n, root: Node::leaf(b) }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn root(&self) -> &Node {
        &self.root
    }

    pub fn depth(&self) -> usize {
        self.root.depth()
    }

    pub fn eval(&self, x: u64) -> bool {
        let mut node = &self.root;
        loop {
            match node {
                Node::Leaf { leaf } => return *leaf,
                Node::Query { mask, zero, one } => {
                    node = if parity(mask & x) { one } else { zero };
                }
            }
        }
    }

    /// The inputs reaching each (reachable) leaf, with the leaf label.
    pub fn leaf_regions(&self) -> Result<Vec<(AffineSubspace, bool)>> {
        let mut out = Vec::new();
        let mut lines = Vec::new();
        let mut values = Vec::new();
        self.collect(&self.root, &mut lines, &mut values, &mut out)?;
        Ok(out)
    }

    fn collect(
        &self,
        node: &Node,
        lines: &mut Vec<F2Vector>,
        values: &mut Vec<bool>,
        out: &mut Vec<(AffineSubspace, bool)>,
    ) -> Result<()> {
        match node {
            Node::Leaf { leaf } => {
                if let Some(w) = AffineSubspace::from_constraints(self.n, lines, values)? {
                    out.push((w, *leaf));
                }
            }
            Node::Query { mask, zero, one } => {
                lines.push(F2Vector::from_mask(self.n, *mask));
                for (b, child) in [(false, zero), (true, one)] {
                    values.push(b);
                    self.collect(child, lines, values, out)?;
                    values.pop();
                }
                lines.pop();
            }
        }
        Ok(())
    }

    /// Does the tree agree with the 0/1 table `f` on every input?
    pub fn soundness_check(&self, f: &PseudoBooleanFunction) -> bool {
        f.n() == self.n && (0..1u64 << self.n).all(|x| self.eval(x) == f.bit(x))
    }
}

/// `mu({x : T(x) != f(x)})`, exactly.
pub fn distributional_error(
    tree: &ParityDecisionTree,
    f: &PseudoBooleanFunction,
    mu: &CubeDistribution,
) -> Rational {
    mu.mass_where(|x| tree.eval(x) != f.bit(x))
}

/// Number of trees of depth at most `depth` over `n` variables.
pub fn count_trees(n: usize, depth: usize) -> BigUint {
    let queries = (BigUint::one() << n) - 1u32;
    let mut t = BigUint::from(2u32);
    for _ in 0..depth {
        t = BigUint::from(2u32) + &queries * &t * &t;
    }
    t
}

/// Every parity decision tree of depth at most `depth`, refusing when the
/// count exceeds `cap`.
pub fn enumerate_trees(n: usize, depth: usize, cap: u64) -> Result<Vec<ParityDecisionTree>> {
    let count = count_trees(n, depth);
    if count > BigUint::from(cap) {
        return Err(cap_exceeded(
            format!("enumerating {count} trees of depth <= {depth} over {n} variables"),
            &count,
            cap,
        ));
    }
    let mut nodes = vec![Node::leaf(false), Node::leaf(true)];
    for _ in 0..depth {
        let mut next = vec![Node::leaf(false), Node::leaf(true)];
        for mask in 1..1u64 << n {
            for a in &nodes {
                for b in &nodes {
                    next.push(Node::query(mask, a.clone(), b.clone()));
                }
            }
        }
        nodes = next;
    }
    debug_assert_eq!(Some(nodes.len()), count.to_usize());
    Ok(nodes.into_iter().map(|root| ParityDecisionTree { n, root }).collect())
}
