use num_bigint::{BigInt, BigUint};
use num_traits::{ToPrimitive, Zero};
use serde::{Serialize, Serializer};

use crate::designs::{
    count_affine_codim_at_most, par_map_ordered, DesignCertificate, RrefSubspaces, SubspaceFamily,
};
use crate::distribution::CubeDistribution;
use crate::error::{cap_exceeded, Error, Result};
use crate::f2::{parity, AffineSubspace, F2Vector};
use crate::fourier::{union_function, PseudoBooleanFunction};
use crate::rational::{self, Rational};

/// Default ceiling on affine subspaces visited by [`corruption_scan`].
pub const DEFAULT_SCAN_CAP: u64 = 10_000_000;

/// Largest `n` for a dense scan.
pub const SCAN_MAX_N: usize = 24;

/// Half the mass uniform on `f^{-1}(0)`, half on a uniform point of a
/// uniform member, where `f` is the union of the members.
pub fn hard_distribution_mu(fam: &SubspaceFamily) -> Result<CubeDistribution> {
    let f = union_function(fam)?;
    let n = fam.n();
    let zeros: Vec<u64> = (0..1u64 << n).filter(|&x| !f.bit(x)).collect();
    if zeros.is_empty() {
        return Err(Error::UndefinedDistribution(
            "the union covers the cube, so f^{-1}(0) is empty".into(),
        ));
    }
    let m = fam.m();
    let dmax = fam.members().iter().map(|v| v.dim()).max().unwrap_or(0);
    let z = BigUint::from(zeros.len());
    let d = rational::lcm(&(&z * 2u32), &(BigUint::from(2 * m) << dmax));
    let zero_w = &d / (&z * 2u32);
    let mut weights: Vec<(u64, BigUint)> = zeros.into_iter().map(|x| (x, zero_w.clone())).collect();
    for v in fam.members() {
        let w = &d / (BigUint::from(2 * m) << v.dim());
        for x in v.to_masks()?.elements()? {
            weights.push((x, w.clone()));
        }
    }
    CubeDistribution::from_weights(n, weights)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CorruptionWitness {
    #[serde(rename = "W")]
    pub w: AffineSubspace,
    /// `mu(W ∩ f^{-1}(1))`.
    #[serde(with = "rational")]
    pub one_mass: Rational,
    /// `mu(W)`.
    #[serde(with = "rational")]
    pub total_mass: Rational,
    #[serde(with = "rational")]
    pub epsilon: Rational,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ScanVerdict {
    /// A witness of this codimension exists and none of smaller codimension.
    Witness(usize),
    /// No witness of codimension at most this value.
    NoWitness(usize),
}

impl std::fmt::Display for ScanVerdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            ScanVerdict::Witness(c) => write!(f, "Witness({c})"),
            ScanVerdict::NoWitness(c) => write!(f, "NoWitness({c})"),
        }
    }
}

impl Serialize for ScanVerdict {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ScanReport {
    #[serde(with = "rational")]
    pub epsilon: Rational,
    pub c_scanned: usize,
    pub verdict: ScanVerdict,
    pub witness: Option<CorruptionWitness>,
}

/// Per-label `(one weight, total weight)` for the coset labelling of `lines`.
fn bucket(lines: &[u64], weights: &[u128], ones: &[bool]) -> Vec<(u128, u128)> {
    let mut out = vec![(0u128, 0u128); 1 << lines.len()];
    for (x, (&w, &one)) in weights.iter().zip(ones).enumerate() {
        if w == 0 {
            continue;
        }
        let label = lines
            .iter()
            .enumerate()
            .fold(0usize, |a, (i, &l)| a | ((parity(l & x as u64) as usize) << i));
        let b = &mut out[label];
        b.1 += w;
        if one {
            b.0 += w;
        }
    }
    out
}

/// Smallest codimension `c <= c_max` of an affine `W` with
/// `mu(W ∩ f^{-1}(1)) <= 4 epsilon mu(W)`, scanning constraint spaces in
/// canonical order and their cosets by label. The reported witness is the
/// first one in that order.
pub fn corruption_scan(
    f: &PseudoBooleanFunction,
    mu: &CubeDistribution,
    epsilon: &Rational,
    c_max: usize,
    cap: u64,
) -> Result<ScanReport> {
    let n = f.n();
    if mu.n() != n {
        return Err(Error::DimensionMismatch { expected: n, found: mu.n() });
    }
    if n > SCAN_MAX_N {
        return Err(cap_exceeded(format!("corruption scan over {n} variables"), n, SCAN_MAX_N));
    }
    if !f.is_boolean() {
        return Err(Error::InvalidParameter("corruption scan needs a 0/1 table".into()));
    }
    if epsilon < &rational::int(0) {
        return Err(Error::InvalidParameter("epsilon must be nonnegative".into()));
    }
    let c_max = c_max.min(n);
    let count = count_affine_codim_at_most(n, c_max);
    if count > BigUint::from(cap) {
        return Err(cap_exceeded(
            format!("scanning {count} affine subspaces of codimension <= {c_max} in F_2^{n}"),
            &count,
            cap,
        ));
    }
    let overflow = || Error::Overflow("distribution weights exceed 128 bits".into());
    if mu.total_weight().bits() > 120 {
        return Err(overflow());
    }
    let mut weights = vec![0u128; 1 << n];
    for (&x, w) in mu.weights() {
        weights[x as usize] = w.to_u128().ok_or_else(overflow)?;
    }
    let ones: Vec<bool> = (0..1u64 << n).map(|x| f.bit(x)).collect();
    // one * q <= 4 p * total, with epsilon = p / q
    let p = epsilon.numer().to_biguint().expect("nonnegative");
    let q = epsilon.denom().to_biguint().expect("positive");
    let four_p = p * 4u32;
    let is_witness = |one: u128, total: u128| BigUint::from(one) * &q <= &four_p * BigUint::from(total);

    for c in 0..=c_max {
        let mut found: Option<(Vec<u64>, usize, u128, u128)> = None;
        par_map_ordered(
            RrefSubspaces::new(n, c),
            1024,
            |lines| {
                bucket(lines, &weights, &ones)
                    .into_iter()
                    .enumerate()
                    .find(|&(_, (one, total))| total > 0 && is_witness(one, total))
                    .map(|(label, (one, total))| (label, one, total))
            },
            |lines, hit| match hit {
                Some((label, one, total)) => {
                    found = Some((lines, label, one, total));
                    false
                }
                None => true,
            },
        );
        if let Some((lines, label, one, total)) = found {
            let vecs: Vec<F2Vector> = lines.iter().map(|&l| F2Vector::from_mask(n, l)).collect();
            let values: Vec<bool> = (0..c).map(|i| label >> i & 1 == 1).collect();
            let w = AffineSubspace::from_constraints(n, &vecs, &values)?
                .expect("independent constraints are consistent");
            let tw = mu.total_weight();
            return Ok(ScanReport {
                epsilon: epsilon.clone(),
                c_scanned: c,
                verdict: ScanVerdict::Witness(c),
                witness: Some(CorruptionWitness {
                    w,
                    one_mass: rational::from_biguint(&BigUint::from(one), tw),
                    total_mass: rational::from_biguint(&BigUint::from(total), tw),
                    epsilon: epsilon.clone(),
                }),
            });
        }
    }
    Ok(ScanReport {
        epsilon: epsilon.clone(),
        c_scanned: c_max,
        verdict: ScanVerdict::NoWitness(c_max),
        witness: None,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Threshold {
    /// `(m - h) / (8m) * |f^{-1}(0)| / 2^n`.
    #[serde(with = "rational")]
    pub epsilon_star: Rational,
    /// Predicted lower bound on the query cost for `epsilon < epsilon_star`.
    pub s: usize,
    pub m: usize,
    pub h: usize,
    pub zeros: u64,
    /// True when `epsilon_star = 0`, so no epsilon qualifies.
    pub vacuous: bool,
}

pub fn theorem_threshold(fam: &SubspaceFamily, cert: &DesignCertificate) -> Result<Threshold> {
    if cert.n != fam.n() || cert.m != fam.m() {
        return Err(Error::InvalidParameter(format!(
            "certificate is for (n, m) = ({}, {}), family has ({}, {})",
            cert.n,
            cert.m,
            fam.n(),
            fam.m()
        )));
    }
    let n = fam.n();
    let f = union_function(fam)?;
    let zeros = (0..1u64 << n).filter(|&x| !f.bit(x)).count() as u64;
    let m = fam.m();
    let h = cert.h.min(m);
    let eps = rational::ratio(BigInt::from(m - h), BigInt::from(8 * m))
        * rational::from_biguint(&BigUint::from(zeros), &rational::pow2(n));
    Ok(Threshold {
        vacuous: eps.is_zero(),
        epsilon_star: eps,
        s: cert.s,
        m,
        h,
        zeros,
    })
}
