use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive, Zero};
use serde::Serialize;

use super::sets::{PointSet, Rectangle};
use crate::designs::SubspaceFamily;
use crate::distribution::CubeDistribution;
use crate::error::{Error, Result};
use crate::f2::MaskSubspace;
use crate::rational::{self, Rational};

/// Weights of the coset labels `0 .. 2^codim` under a pushforward.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CosetHistogram {
    pub codim: usize,
    pub counts: Vec<u128>,
    pub total: u128,
}

impl CosetHistogram {
    pub fn mass(&self, label: u64) -> Rational {
        rational::ratio(BigInt::from(self.counts[label as usize]), BigInt::from(self.total))
    }
}

/// Pushforward of the uniform distribution on `a` through the coset map of `v`.
pub fn coset_pushforward_set(a: &PointSet, v: &MaskSubspace) -> CosetHistogram {
    let mut counts = vec![0u128; 1 << v.codim()];
    let mut total = 0;
    for x in a.iter() {
        counts[v.label(x) as usize] += 1;
        total += 1;
    }
    CosetHistogram {
        codim: v.codim(),
        counts,
        total,
    }
}

/// Pushforward of `x` through the coset map of `v`.
pub fn coset_pushforward(x: &CubeDistribution, v: &MaskSubspace) -> Result<CosetHistogram> {
    if x.n() != v.n {
        return Err(Error::DimensionMismatch {
            expected: v.n,
            found: x.n(),
        });
    }
    let overflow = || Error::Overflow("distribution weights exceed 128 bits".into());
    if x.total_weight().bits() > 127 {
        return Err(overflow());
    }
    let mut counts = vec![0u128; 1 << v.codim()];
    for (&p, w) in x.weights() {
        counts[v.label(p) as usize] += w.to_u128().ok_or_else(overflow)?;
    }
    Ok(CosetHistogram {
        codim: v.codim(),
        counts,
        total: x.total_weight().to_u128().ok_or_else(overflow)?,
    })
}

/// `‖h - U_{2^codim}‖₁`, exactly.
pub fn l1_to_uniform(h: &CosetHistogram) -> Rational {
    let labels = BigInt::from(1u128 << h.codim);
    let total = BigInt::from(h.total);
    let num: BigInt = h
        .counts
        .iter()
        .map(|&c| (BigInt::from(c) * &labels - &total).abs())
        .sum();
    rational::ratio(num, total * labels)
}

/// `‖h - g‖₁` between two histograms over the same labels.
pub fn l1_distance(h: &CosetHistogram, g: &CosetHistogram) -> Rational {
    let (th, tg) = (BigInt::from(h.total), BigInt::from(g.total));
    let num: BigInt = h
        .counts
        .iter()
        .zip(&g.counts)
        .map(|(&a, &b)| (BigInt::from(a) * &tg - BigInt::from(b) * &th).abs())
        .sum();
    rational::ratio(num, th * tg)
}

/// `Pr[x' = y']` for independent `x' ~ h`, `y' ~ g`.
pub fn collision(h: &CosetHistogram, g: &CosetHistogram) -> Rational {
    let num: BigInt = h
        .counts
        .iter()
        .zip(&g.counts)
        .map(|(&a, &b)| BigInt::from(a) * BigInt::from(b))
        .sum();
    rational::ratio(num, BigInt::from(h.total) * BigInt::from(g.total))
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MemberProjection {
    pub index: usize,
    pub codim: usize,
    #[serde(with = "rational")]
    pub collision: Rational,
    #[serde(with = "rational")]
    pub d_a: Rational,
    #[serde(with = "rational")]
    pub d_b: Rational,
    pub far: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ProjectionReport {
    pub n: usize,
    pub size_a: usize,
    pub size_b: usize,
    #[serde(with = "rational")]
    pub alpha: Rational,
    /// Members with `max(d_a, d_b) >= alpha`.
    pub far_count: usize,
    pub members: Vec<MemberProjection>,
}

/// Per-member collision probability and distances of the two coset
/// pushforwards of `r` from uniform.
pub fn rectangle_analysis(r: &Rectangle, fam: &SubspaceFamily, alpha: &Rational) -> Result<ProjectionReport> {
    r.require_nonempty()?;
    if r.n() != fam.n() {
        return Err(Error::DimensionMismatch {
            expected: fam.n(),
            found: r.n(),
        });
    }
    let members = fam
        .mask_members()?
        .iter()
        .enumerate()
        .map(|(index, v)| {
            let ha = coset_pushforward_set(&r.a, v);
            let hb = coset_pushforward_set(&r.b, v);
            let d_a = l1_to_uniform(&ha);
            let d_b = l1_to_uniform(&hb);
            MemberProjection {
                index,
                codim: v.codim(),
                collision: collision(&ha, &hb),
                far: d_a >= *alpha || d_b >= *alpha,
                d_a,
                d_b,
            }
        })
        .collect::<Vec<_>>();
    Ok(ProjectionReport {
        n: r.n(),
        size_a: r.a.len(),
        size_b: r.b.len(),
        alpha: alpha.clone(),
        far_count: members.iter().filter(|m| m.far).count(),
        members,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ChainCheck {
    #[serde(with = "rational")]
    pub collision: Rational,
    /// `(1 - alpha)^2 / 4 * 2^-codim`.
    #[serde(with = "rational")]
    pub threshold: Rational,
    /// Collision below the threshold, so the implication is in force.
    pub applies: bool,
    #[serde(with = "rational")]
    pub ab_distance: Rational,
    #[serde(with = "rational")]
    pub d_a: Rational,
    #[serde(with = "rational")]
    pub d_b: Rational,
    /// For `S = {y' : B_V(y') >= (1 - alpha) / 2 * 2^-codim}`: `(A_V(S), B_V(S))`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub s_set: Option<(String, String)>,
    pub holds: bool,
}

/// Largest `n` at which [`appendix_chain_check`] also evaluates the S set.
pub const S_SET_MAX_N: usize = 8;

/// Checks that a small collision probability forces
/// `‖A_V - B_V‖₁ >= 2 alpha` and `max(d_A, d_B) >= alpha`.
pub fn appendix_chain_check(r: &Rectangle, v: &MaskSubspace, alpha: &Rational) -> Result<ChainCheck> {
    r.require_nonempty()?;
    let zero = Rational::zero();
    let one = rational::int(1);
    if alpha <= &zero || alpha >= &one {
        return Err(Error::InvalidParameter(format!("alpha must lie in (0, 1), got {alpha}")));
    }
    let ha = coset_pushforward_set(&r.a, v);
    let hb = coset_pushforward_set(&r.b, v);
    let col = collision(&ha, &hb);
    let gap = &one - alpha;
    let threshold = &gap * &gap / rational::int(4) * rational::inv_pow2(v.codim());
    let applies = col < threshold;
    let ab = l1_distance(&ha, &hb);
    let d_a = l1_to_uniform(&ha);
    let d_b = l1_to_uniform(&hb);
    let two_alpha = rational::int(2) * alpha;
    let mut holds = !applies || (ab >= two_alpha && (&d_a >= alpha || &d_b >= alpha));
    let mut s_set = None;
    if r.n() <= S_SET_MAX_N {
        let cut = &gap / rational::int(2) * rational::inv_pow2(v.codim());
        let in_s: Vec<bool> = (0..1u64 << v.codim()).map(|l| hb.mass(l) >= cut).collect();
        let mass_in = |h: &CosetHistogram| -> Rational {
            let c: u128 = h.counts.iter().zip(&in_s).filter(|(_, &s)| s).map(|(c, _)| c).sum();
            rational::ratio(BigInt::from(c), BigInt::from(h.total))
        };
        let (a_s, b_s) = (mass_in(&ha), mass_in(&hb));
        let half_gap = &gap / rational::int(2);
        if applies {
            holds &= a_s < half_gap && b_s >= &one - &half_gap;
        }
        s_set = Some((a_s.to_string(), b_s.to_string()));
    }
    Ok(ChainCheck {
        collision: col,
        threshold,
        applies,
        ab_distance: ab,
        d_a,
        d_b,
        s_set,
        holds,
    })
}
