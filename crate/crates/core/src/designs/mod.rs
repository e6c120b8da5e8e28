//! Families of subspaces and their (dual) subspace-design parameters.
//!
//! A family `{V_1, ..., V_m}` is an `(s, h)`-dual subspace design when, for
//! every subspace `W` of codimension at most `s`, at most `h` members fail to
//! be independent of `W`. Equivalently, every subspace of dimension at most
//! `s` meets at most `h` of the duals `V_i^⊥` nontrivially.

mod enumerate;

use num_bigint::BigUint;
use serde::{Deserialize, Serialize};

use crate::error::{cap_exceeded, Error, Result};
use crate::f2::{mask_rank, random_subspace, AffineSubspace, MaskSubspace, Subspace};
use crate::rng;

pub use enumerate::{
    count_affine_codim_at_most, count_codim_at_most, gaussian_binomial, RrefSubspaces,
};
pub(crate) use enumerate::par_map_ordered;

/// Default ceiling on the number of subspaces an exhaustive scan may visit.
pub const DEFAULT_ENUMERATION_CAP: u64 = 10_000_000;

const BATCH: usize = 4096;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FamilyMeta {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    pub seed: Option<u64>,
    pub dim: Option<usize>,
    pub m: usize,
}

/// An ordered list of `m >= 1` subspaces of a common `F_2^n`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "FamilyJson", into = "FamilyJson")]
pub struct SubspaceFamily {
    n: usize,
    members: Vec<Subspace>,
    meta: FamilyMeta,
}

#[derive(Serialize, Deserialize)]
struct FamilyJson {
    n: usize,
    members: Vec<Subspace>,
    meta: FamilyMeta,
}

impl From<SubspaceFamily> for FamilyJson {
    fn from(f: SubspaceFamily) -> Self {
        Self {
            n: f.n,
            members: f.members,
            meta: f.meta,
        }
    }
}

impl TryFrom<FamilyJson> for SubspaceFamily {
    type Error = Error;

    fn try_from(j: FamilyJson) -> Result<Self> {
        if j.meta.m != j.members.len() {
            return Err(Error::Parse(format!(
                "meta.m = {} but {} members listed",
                j.meta.m,
                j.members.len()
            )));
        }
        let mut fam = SubspaceFamily::new(j.n, j.members)?;
        fam.meta = j.meta;
        Ok(fam)
    }
}

impl SubspaceFamily {
    pub fn new(n: usize, members: Vec<Subspace>) -> Result<Self> {
        if members.is_empty() {
            return Err(Error::InvalidParameter("a family needs at least one member".into()));
        }
        if let Some(bad) = members.iter().find(|s| s.ambient_dim() != n) {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: bad.ambient_dim(),
            });
        }
        let m = members.len();
        let common_dim = members[0].dim();
        let dim = members.iter().all(|s| s.dim() == common_dim).then_some(common_dim);
        Ok(Self {
            n,
            members,
            meta: FamilyMeta {
                name: None,
                seed: None,
                dim,
                m,
            },
        })
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.meta.name = Some(name.into());
        self
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.members.len()
    }

    pub fn members(&self) -> &[Subspace] {
        &self.members
    }

    pub fn meta(&self) -> &FamilyMeta {
        &self.meta
    }

    pub fn mask_members(&self) -> Result<Vec<MaskSubspace>> {
        self.members.iter().map(Subspace::to_masks).collect()
    }
}

/// Paper presets for the random construction: `dim = floor(2n/5)`, `m = 100n`.
pub fn paper_preset(n: usize) -> (usize, usize) {
    (2 * n / 5, 100 * n)
}

/// `m` independent uniform `dim`-dimensional subspaces of `F_2^n`.
pub fn random_design(n: usize, dim: usize, m: usize, seed: u64) -> Result<SubspaceFamily> {
    if dim > n {
        return Err(Error::InvalidParameter(format!("dim {dim} exceeds n {n}")));
    }
    let mut r = rng::seeded(seed);
    let members = (0..m).map(|_| random_subspace(n, dim, &mut r)).collect();
    let mut fam = SubspaceFamily::new(n, members)?;
    fam.meta = FamilyMeta {
        name: Some("random".into()),
        seed: Some(seed),
        dim: Some(dim),
        m,
    };
    Ok(fam)
}

/// Default number of redraws allowed per member in [`random_pairwise_trivial_design`].
pub const DEFAULT_REDRAWS: u64 = 10_000;

/// `m` uniform `dim`-dimensional subspaces drawn in sequence, each redrawn
/// until it meets every earlier member only at zero. The result is
/// pairwise trivial but not a uniform sample of such families.
pub fn random_pairwise_trivial_design(
    n: usize,
    dim: usize,
    m: usize,
    seed: u64,
    redraws: u64,
) -> Result<SubspaceFamily> {
    if dim > n {
        return Err(Error::InvalidParameter(format!("dim {dim} exceeds n {n}")));
    }
    if m > 1 && 2 * dim > n {
        return Err(Error::InvalidParameter(format!(
            "two {dim}-dimensional subspaces of F_2^{n} always meet nontrivially"
        )));
    }
    let mut r = rng::seeded(seed);
    let mut members: Vec<Subspace> = Vec::with_capacity(m);
    while members.len() < m {
        let mut tries = 0;
        let v = loop {
            if tries == redraws {
                return Err(cap_exceeded(
                    format!("redraws for member {} of a pairwise-trivial family", members.len() + 1),
                    format!("more than {redraws}"),
                    redraws,
                ));
            }
            tries += 1;
            let v = random_subspace(n, dim, &mut r);
            if members.iter().all(|u| u.meets_trivially(&v).expect("same n")) {
                break v;
            }
        };
        members.push(v);
    }
    let mut fam = SubspaceFamily::new(n, members)?;
    fam.meta = FamilyMeta {
        name: Some("pairwise-trivial".into()),
        seed: Some(seed),
        dim: Some(dim),
        m,
    };
    Ok(fam)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PairwiseReport {
    pub trivial: bool,
    /// First pair `(i, j)`, `i < j`, 1-based, whose intersection is nonzero.
    pub first_violation: Option<(usize, usize)>,
}

/// Do all pairs of members intersect only at zero?
pub fn pairwise_trivial(fam: &SubspaceFamily) -> PairwiseReport {
    let ms = &fam.members;
    for i in 0..ms.len() {
        for j in i + 1..ms.len() {
            if !ms[i].meets_trivially(&ms[j]).expect("members share n") {
                return PairwiseReport {
                    trivial: false,
                    first_violation: Some((i + 1, j + 1)),
                };
            }
        }
    }
    PairwiseReport {
        trivial: true,
        first_violation: None,
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum CertificateMode {
    /// Every subspace of codimension at most `s` was checked.
    Exhaustive { subspaces_checked: String },
    /// Statistical evidence, not a proof: `trials` uniform subspaces of
    /// codimension exactly `s` were sampled and none violated the bound.
    MonteCarlo {
        trials: u64,
        seed: u64,
        /// One-sided 95% upper bound on the fraction of violating subspaces,
        /// `1 - 0.05^(1/trials)`.
        violation_rate_upper_95: f64,
    },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DesignCertificate {
    pub n: usize,
    pub m: usize,
    pub s: usize,
    pub h: usize,
    pub mode: CertificateMode,
    pub pairwise_trivial: bool,
    /// A subspace attaining the largest number of non-independent members.
    pub worst_witness: Option<AffineSubspace>,
    pub worst_count: usize,
}

impl DesignCertificate {
    pub fn is_exhaustive(&self) -> bool {
        matches!(self.mode, CertificateMode::Exhaustive { .. })
    }

    /// An `(s, h)` design is also an `(s', h')` design for `s' <= s`, `h' >= h`.
    pub fn implies(&self, s: usize, h: usize) -> bool {
        s <= self.s && h >= self.h
    }
}

fn check_cap(n: usize, s: usize, cap: u64) -> Result<BigUint> {
    let count = count_codim_at_most(n, s);
    if count > BigUint::from(cap) {
        return Err(cap_exceeded(
            format!("exhaustive scan over {count} subspaces of codimension <= {s} in F_2^{n}"),
            &count,
            cap,
        ));
    }
    Ok(count)
}

/// Members `V` with `V + W != F_2^n`, for `W` given by fully reduced echelon
/// rows whose pivots are their lowest bits.
fn non_independent_count(members: &[MaskSubspace], w_rows: &[u64], n: usize) -> usize {
    let pivots: Vec<u64> = w_rows.iter().map(|&r| r & r.wrapping_neg()).collect();
    let need = n - w_rows.len();
    members
        .iter()
        .filter(|v| {
            v.basis.len() < need || {
                let reduced = v.basis.iter().map(|&b| {
                    w_rows
                        .iter()
                        .zip(&pivots)
                        .fold(b, |x, (&row, &p)| if x & p != 0 { x ^ row } else { x })
                });
                mask_rank(reduced) < need
            }
        })
        .count()
}

/// Minimal `h` for which `fam` is an `(s, h)`-dual subspace design, found by
/// checking every linear `W` of codimension at most `s` for independence
/// (`V + W = F_2^n`) against every member. Affine shifts need no separate
/// treatment: independence is a property of the linear part.
pub fn certify_dual_design_exhaustive(
    fam: &SubspaceFamily,
    s: usize,
    cap: u64,
) -> Result<DesignCertificate> {
    let n = fam.n;
    if s > n {
        return Err(Error::InvalidParameter(format!("s = {s} exceeds n = {n}")));
    }
    let checked = check_cap(n, s, cap)?;
    let members = fam.mask_members()?;
    let mut best: Option<(usize, Vec<u64>)> = None;
    for c in 0..=s {
        par_map_ordered(
            RrefSubspaces::new(n, n - c),
            BATCH,
            |w| non_independent_count(&members, w, n),
            |w, count| {
                if best.as_ref().is_none_or(|(b, _)| count > *b) {
                    best = Some((count, w));
                }
                true
            },
        );
    }
    let (h, w) = best.expect("codimension 0 is always scanned");
    Ok(DesignCertificate {
        n,
        m: fam.m(),
        s,
        h,
        mode: CertificateMode::Exhaustive {
            subspaces_checked: checked.to_string(),
        },
        pairwise_trivial: pairwise_trivial(fam).trivial,
        worst_witness: Some(AffineSubspace::linear(Subspace::from_masks(n, &w))),
        worst_count: h,
    })
}

/// The same minimal `h`, computed from the definition on the dual side: the
/// largest number of duals `V_i^⊥` met nontrivially by one subspace `T` of
/// dimension at most `s`. Returns `h` and the first maximizing `T`.
pub fn dual_side_h(fam: &SubspaceFamily, s: usize, cap: u64) -> Result<(usize, Subspace)> {
    let n = fam.n;
    check_cap(n, s, cap)?;
    let duals: Vec<Vec<u64>> = fam
        .mask_members()?
        .into_iter()
        .map(|v| v.dual)
        .collect();
    let mut best: Option<(usize, Vec<u64>)> = None;
    for k in 0..=s.min(n) {
        par_map_ordered(
            RrefSubspaces::new(n, k),
            BATCH,
            |t| {
                duals
                    .iter()
                    .filter(|d| mask_rank(d.iter().chain(t.iter()).copied()) < d.len() + t.len())
                    .count()
            },
            |t, count| {
                if best.as_ref().is_none_or(|(b, _)| count > *b) {
                    best = Some((count, t));
                }
                true
            },
        );
    }
    let (h, t) = best.expect("dimension 0 is always scanned");
    Ok((h, Subspace::from_masks(n, &t)))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DesignViolation {
    /// 0-based index of the first violating trial.
    pub trial: u64,
    pub seed: u64,
    pub s: usize,
    pub h: usize,
    pub witness: AffineSubspace,
    pub non_independent: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "outcome", rename_all = "snake_case")]
pub enum MonteCarloOutcome {
    Certified(DesignCertificate),
    Violation(DesignViolation),
}

/// Samples `trials` uniform `W` of codimension exactly `s` (as duals of
/// uniform `s`-dimensional subspaces) and reports the first one with more
/// than `h` non-independent members. Trial `t` draws from stream `t` of
/// `seed`, so the outcome does not depend on the thread count.
pub fn certify_dual_design_montecarlo(
    fam: &SubspaceFamily,
    s: usize,
    h: usize,
    trials: u64,
    seed: u64,
) -> Result<MonteCarloOutcome> {
    let n = fam.n;
    if trials == 0 {
        return Err(Error::InvalidParameter("trials must be at least 1".into()));
    }
    if s > n {
        return Err(Error::InvalidParameter(format!("s = {s} exceeds n = {n}")));
    }
    let duals: Vec<Subspace> = fam.members.iter().map(Subspace::dual).collect();
    let mut violation = None;
    let mut worst: Option<(usize, Subspace)> = None;
    par_map_ordered(
        0..trials,
        BATCH,
        |&t| {
            let tee = random_subspace(n, s, &mut rng::stream(seed, t));
            let count = duals
                .iter()
                .filter(|d| !d.meets_trivially(&tee).expect("same n"))
                .count();
            (tee, count)
        },
        |t, (tee, count)| {
            if count > h {
                violation = Some(DesignViolation {
                    trial: t,
                    seed,
                    s,
                    h,
                    witness: AffineSubspace::linear(tee.dual()),
                    non_independent: count,
                });
                return false;
            }
            if worst.as_ref().is_none_or(|(b, _)| count > *b) {
                worst = Some((count, tee));
            }
            true
        },
    );
    if let Some(v) = violation {
        return Ok(MonteCarloOutcome::Violation(v));
    }
    let (worst_count, tee) = worst.expect("trials >= 1");
    Ok(MonteCarloOutcome::Certified(DesignCertificate {
        n,
        m: fam.m(),
        s,
        h,
        mode: CertificateMode::MonteCarlo {
            trials,
            seed,
            violation_rate_upper_95: 1.0 - 0.05f64.powf(1.0 / trials as f64),
        },
        pairwise_trivial: pairwise_trivial(fam).trivial,
        worst_witness: Some(AffineSubspace::linear(tee.dual())),
        worst_count,
    }))
}

/// Number of members that meet the affine subspace `w`.
pub fn hitting_check(fam: &SubspaceFamily, w: &AffineSubspace) -> Result<usize> {
    let mut count = 0;
    for v in &fam.members {
        if AffineSubspace::linear(v.clone()).meets(w)? {
            count += 1;
        }
    }
    Ok(count)
}
