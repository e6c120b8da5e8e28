//! The two subspace facts behind the lower bound: random subspaces meet
//! trivially with high probability, and an affine subspace either misses
//! another one or meets it in a large fraction.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::rational::{self, pow2, Rational};

use super::AffineSubspace;

/// Lower bound `1 - n 2^(d1 + d2 - n)` on `Pr[S ∩ T = {0}]`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IntersectionBound {
    /// The formula value, possibly negative.
    #[serde(with = "rational")]
    pub raw: Rational,
    /// `raw` clamped to `[0, 1]`.
    #[serde(with = "rational")]
    pub value: Rational,
    /// True when the bound says nothing (`raw <= 0`).
    pub vacuous: bool,
}

pub fn trivial_intersection_prob_bound(n: usize, d1: usize, d2: usize) -> IntersectionBound {
    let e = (d1 + d2) as i64 - n as i64;
    let term = if e >= 0 {
        BigRational::from_integer(BigInt::from(n) * BigInt::from(pow2(e as usize)))
    } else {
        BigRational::new(BigInt::from(n), BigInt::from(pow2((-e) as usize)))
    };
    let raw = BigRational::one() - term;
    let vacuous = raw <= BigRational::zero();
    let value = if vacuous { BigRational::zero() } else { raw.clone() };
    IntersectionBound { raw, value, vacuous }
}

/// Exact `Pr_T[S ∩ T = {0}]` for a fixed `d1`-dimensional `S` and uniform
/// `d2`-dimensional `T`: `prod_{i=1..d2} (2^n - 2^(d1+i-1)) / (2^n - 2^(i-1))`.
pub fn exact_trivial_intersection_prob(n: usize, d1: usize, d2: usize) -> Rational {
    if d1 + d2 > n {
        return BigRational::zero();
    }
    let full = BigInt::from(pow2(n));
    (1..=d2).fold(BigRational::one(), |acc, i| {
        let num = &full - BigInt::from(pow2(d1 + i - 1));
        let den = &full - BigInt::from(pow2(i - 1));
        acc * BigRational::new(num, den)
    })
}

/// Outcome of comparing two affine subspaces `V`, `W`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum Avoidance {
    Disjoint,
    /// `|V ∩ W| / |V|`, which is always at least `|W| / 2^n`.
    Intersecting(#[serde(with = "rational")] Rational),
}

/// Decides whether `|V ∩ W| / |W| < |V| / 2^n`, in which case the two are
/// disjoint; otherwise returns `|V ∩ W| / |V|`.
pub fn affine_avoidance_check(v: &AffineSubspace, w: &AffineSubspace) -> Result<Avoidance> {
    let n = v.ambient_dim();
    let inter = v.intersect(w)?;
    // sizes as exponents of two; empty intersection is "size 0"
    let lhs = match &inter {
        Some(i) => rational::inv_pow2(w.dim() - i.dim()),
        None => BigRational::zero(),
    };
    let rhs = rational::inv_pow2(n - v.dim());
    if lhs < rhs {
        if inter.is_some() {
            return Err(Error::InvalidParameter(
                "avoidance premise holds but the subspaces intersect".into(),
            ));
        }
        return Ok(Avoidance::Disjoint);
    }
    let i = inter.expect("premise fails only for nonempty intersections");
    let ratio = rational::inv_pow2(v.dim() - i.dim());
    debug_assert!(ratio >= rational::inv_pow2(n - w.dim()));
    Ok(Avoidance::Intersecting(ratio))
}
