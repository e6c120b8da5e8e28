//! Exact probability distributions on `{0,1}^n`.
//!
//! A distribution is a map from points to positive integer weights; the mass
//! of `x` is `weight(x) / total`. Any rational distribution has this form
//! over a common denominator, so masses, pushforwards and L1 distances stay
//! exact.

use std::collections::BTreeMap;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::f2::{AffineSubspace, F2Vector};
use crate::rational::{self, Rational};

/// Largest `n` for which point indices are `u64` and the cube is enumerable.
pub const MAX_CUBE_N: usize = 32;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CubeDistribution {
    n: usize,
    weights: BTreeMap<u64, BigUint>,
    total: BigUint,
}

fn check_cube_n(n: usize) -> Result<()> {
    if n > MAX_CUBE_N {
        return Err(Error::InvalidParameter(format!(
            "cube distributions need n <= {MAX_CUBE_N}, got {n}"
        )));
    }
    Ok(())
}

impl CubeDistribution {
    /// From positive weights; zero weights are dropped, duplicates add up.
    pub fn from_weights(n: usize, weights: impl IntoIterator<Item = (u64, BigUint)>) -> Result<Self> {
        check_cube_n(n)?;
        let mut map: BTreeMap<u64, BigUint> = BTreeMap::new();
        for (x, w) in weights {
            if n < 64 && x >> n != 0 {
                return Err(Error::InvalidParameter(format!("point {x:#x} outside the {n}-cube")));
            }
            if !w.is_zero() {
                *map.entry(x).or_default() += w;
            }
        }
        let total: BigUint = map.values().sum();
        if total.is_zero() {
            return Err(Error::UndefinedDistribution("all weights are zero".into()));
        }
        Ok(Self { n, weights: map, total })
    }

    pub fn from_masses(n: usize, masses: impl IntoIterator<Item = (u64, Rational)>) -> Result<Self> {
        let masses: Vec<(u64, Rational)> = masses.into_iter().collect();
        let mut sum = BigRational::zero();
        let mut den = BigInt::one();
        for (_, p) in &masses {
            if p < &BigRational::zero() {
                return Err(Error::InvalidParameter("negative probability mass".into()));
            }
            sum += p;
            den = den.lcm(p.denom());
        }
        if sum != BigRational::one() {
            return Err(Error::InvalidParameter(format!("masses sum to {sum}, not 1")));
        }
        let weights = masses.into_iter().map(|(x, p)| {
            let w = p.numer() * (&den / p.denom());
            (x, w.to_biguint().expect("nonnegative"))
        });
        Self::from_weights(n, weights)
    }

    pub fn uniform_on(n: usize, points: impl IntoIterator<Item = u64>) -> Result<Self> {
        // duplicates are ignored: support set semantics
        let set: std::collections::BTreeSet<u64> = points.into_iter().collect();
        Self::from_weights(n, set.into_iter().map(|x| (x, BigUint::one())))
    }

    pub fn uniform_cube(n: usize) -> Result<Self> {
        check_cube_n(n)?;
        Self::uniform_on(n, 0..(1u64 << n))
    }

    pub fn point_mass(n: usize, x: u64) -> Result<Self> {
        Self::from_weights(n, [(x, BigUint::one())])
    }

    pub fn uniform_affine(w: &AffineSubspace) -> Result<Self> {
        let n = w.ambient_dim();
        check_cube_n(n)?;
        let pts = w
            .elements()?
            .map(|v| v.to_mask().expect("n <= 32"))
            .collect::<Vec<_>>();
        Self::uniform_on(n, pts)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn total_weight(&self) -> &BigUint {
        &self.total
    }

    pub fn weights(&self) -> &BTreeMap<u64, BigUint> {
        &self.weights
    }

    pub fn weight(&self, x: u64) -> BigUint {
        self.weights.get(&x).cloned().unwrap_or_default()
    }

    pub fn support_size(&self) -> usize {
        self.weights.len()
    }

    pub fn mass(&self, x: u64) -> Rational {
        rational::from_biguint(&self.weight(x), &self.total)
    }

    /// Mass of the points satisfying `pred`.
    pub fn mass_where(&self, mut pred: impl FnMut(u64) -> bool) -> Rational {
        let w: BigUint = self
            .weights
            .iter()
            .filter(|(x, _)| pred(**x))
            .map(|(_, w)| w)
            .sum();
        rational::from_biguint(&w, &self.total)
    }

    pub fn total_mass(&self) -> Rational {
        self.mass_where(|_| true)
    }

    /// Is every support point equally likely?
    pub fn is_uniform(&self) -> bool {
        let mut it = self.weights.values();
        let first = it.next();
        it.all(|w| Some(w) == first)
    }

    /// Shannon entropy in bits; exactly `log2 |support|` when uniform.
    pub fn entropy(&self) -> f64 {
        if self.is_uniform() {
            return (self.weights.len() as f64).log2();
        }
        let total = big_to_f64(&self.total);
        let log_total = big_log2(&self.total);
        let weighted: f64 = self
            .weights
            .values()
            .map(|w| big_to_f64(w) / total * (log_total - big_log2(w)))
            .sum();
        weighted.max(0.0)
    }

    pub fn to_json(&self) -> DistributionJson {
        DistributionJson {
            n: self.n,
            points: self
                .weights
                .keys()
                .map(|&x| F2Vector::from_mask(self.n, x).to_hex())
                .collect(),
            masses: self
                .weights
                .keys()
                .map(|&x| self.mass(x).to_string())
                .collect(),
        }
    }

    pub fn from_json(j: &DistributionJson) -> Result<Self> {
        check_cube_n(j.n)?;
        if j.points.len() != j.masses.len() {
            return Err(Error::Parse("points and masses differ in length".into()));
        }
        let masses = j
            .points
            .iter()
            .zip(&j.masses)
            .map(|(p, m)| {
                let x = F2Vector::from_hex(j.n, p)?.to_mask().expect("n <= 32");
                Ok((x, rational::parse(m)?))
            })
            .collect::<Result<Vec<_>>>()?;
        Self::from_masses(j.n, masses)
    }
}

/// `{ "n", "points": [hex], "masses": ["p/q"] }`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DistributionJson {
    pub n: usize,
    pub points: Vec<String>,
    pub masses: Vec<String>,
}

pub(crate) fn big_to_f64(x: &BigUint) -> f64 {
    x.to_f64().unwrap_or(f64::INFINITY)
}

pub(crate) fn big_log2(x: &BigUint) -> f64 {
    let bits = x.bits();
    if bits <= 1000 {
        return big_to_f64(x).log2();
    }
    let shift = bits - 64;
    ((x >> shift).to_f64().expect("64-bit")).log2() + shift as f64
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::f2::Subspace;
    use crate::rational::ratio;

    #[test]
    fn uniform_entropies() {
        assert_eq!(CubeDistribution::uniform_cube(6).unwrap().entropy(), 6.0);
        assert_eq!(CubeDistribution::point_mass(6, 5).unwrap().entropy(), 0.0);
        let w = AffineSubspace::new(
            Subspace::from_bitstrs(&["110000", "001100", "000011"]).unwrap(),
            F2Vector::from_bitstr("100000").unwrap(),
        )
        .unwrap();
        let x = CubeDistribution::uniform_affine(&w).unwrap();
        assert_eq!(x.support_size(), 8);
        assert_eq!(x.entropy(), 3.0);
        assert_eq!(x.entropy(), (6 - w.codim()) as f64);
    }

    #[test]
    fn masses_are_exact() {
        let d = CubeDistribution::from_masses(2, [(0, ratio(1, 2)), (3, ratio(1, 3)), (1, ratio(1, 6))]).unwrap();
        assert_eq!(d.total_mass(), BigRational::one());
        assert_eq!(d.mass(3), ratio(1, 3));
        assert_eq!(d.mass(2), BigRational::zero());
        assert!((d.entropy() - 1.459_147_917_027_245).abs() < 1e-12);
        let j = d.to_json();
        assert_eq!(CubeDistribution::from_json(&j).unwrap(), d);
    }

    #[test]
    fn rejects_bad_input() {
        assert!(CubeDistribution::from_masses(2, [(0, ratio(1, 2))]).is_err());
        assert!(CubeDistribution::from_weights(2, [(4, BigUint::one())]).is_err());
        assert!(CubeDistribution::from_weights(2, [(1, BigUint::zero())]).is_err());
    }
}
