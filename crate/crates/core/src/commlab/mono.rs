use rand::seq::SliceRandom;
use serde::Serialize;

use super::sets::{PointSet, Rectangle};
use crate::error::{cap_exceeded, Result};
use crate::fourier::PseudoBooleanFunction;
use crate::rng;

/// Largest `n` accepted by [`mono_rectangle_search`].
pub const MONO_MAX_N: usize = 14;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MonoRectangle {
    pub rectangle: Rectangle,
    /// The constant value of `f(x ⊕ y)` on the rectangle.
    pub value: bool,
    /// `|A| * |B|`.
    pub size: u128,
    pub steps: u64,
}

/// Greedy growth of a rectangle on which `f(x ⊕ y)` is constant.
///
/// Starts from `{0} x {0}` and offers `budget` candidate points, in a seeded
/// shuffle of the cube, first to `A` and then to `B`; a point joins a side
/// when the rectangle stays monochromatic. Heuristic only.
pub fn mono_rectangle_search(f: &PseudoBooleanFunction, budget: u64, seed: u64) -> Result<MonoRectangle> {
    let n = f.n();
    if n > MONO_MAX_N {
        return Err(cap_exceeded(format!("rectangle search over {n} variables"), n, MONO_MAX_N));
    }
    let value = f.bit(0);
    let mut a_pts = vec![0u64];
    let mut b_pts = vec![0u64];
    let mut a = PointSet::from_points(n, [0])?;
    let mut b = PointSet::from_points(n, [0])?;
    let mut r = rng::seeded(seed);
    let mut order: Vec<u64> = (0..1u64 << n).collect();
    let mut cursor = order.len();
    for _ in 0..budget {
        if cursor == order.len() {
            order.shuffle(&mut r);
            cursor = 0;
        }
        let p = order[cursor];
        cursor += 1;
        if !a.contains(p) && b_pts.iter().all(|&q| f.bit(p ^ q) == value) {
            a.insert(p);
            a_pts.push(p);
        }
        if !b.contains(p) && a_pts.iter().all(|&q| f.bit(p ^ q) == value) {
            b.insert(p);
            b_pts.push(p);
        }
    }
    let rectangle = Rectangle::new(a, b)?;
    Ok(MonoRectangle {
        size: rectangle.size(),
        rectangle,
        value,
        steps: budget,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn examples() {
        let c = PseudoBooleanFunction::constant(4, 1).unwrap();
        let out = mono_rectangle_search(&c, 16, 0).unwrap();
        assert_eq!(out.size, 256);
        let z = mono_rectangle_search(&c, 0, 0).unwrap();
        assert_eq!(z.size, 1);
        let p = PseudoBooleanFunction::parity(4, 0b1111).unwrap();
        let out = mono_rectangle_search(&p, 16, 3).unwrap();
        assert_eq!(out.size, 64);
        for x in out.rectangle.a.iter() {
            for y in out.rectangle.b.iter() {
                assert!(!p.bit(x ^ y));
            }
        }
    }
}
