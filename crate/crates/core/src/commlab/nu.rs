use num_bigint::{BigInt, BigUint};
use num_traits::Zero;
use rand::Rng;
use serde::Serialize;

use super::sets::Rectangle;
use crate::designs::SubspaceFamily;
use crate::distribution::CubeDistribution;
use crate::error::{Error, Result};
use crate::f2::{F2Vector, MaskSubspace, Subspace};
use crate::fourier::{union_function, PseudoBooleanFunction};
use crate::pdt::hard_distribution_mu;
use crate::rational::{self, Rational};

/// Is `(x, y)` in `S_V`, i.e. `x ⊕ y ∈ V`?
pub fn sv_membership(v: &Subspace, x: &F2Vector, y: &F2Vector) -> Result<bool> {
    let n = v.ambient_dim();
    for z in [x, y] {
        if z.len() != n {
            return Err(Error::DimensionMismatch { expected: n, found: z.len() });
        }
    }
    Ok(v.contains(&(x ^ y)))
}

/// `|S_V| = 2^n |V|`.
pub fn sv_size(v: &Subspace) -> BigUint {
    rational::pow2(v.ambient_dim() + v.dim())
}

/// The hard distribution on pairs for `F = f ∘ XOR`, `f` the union of the
/// members. Its mass at `(x, y)` equals `mu(x ⊕ y) / 2^n`, where `mu` is the
/// single-input hard distribution, so only `mu` is stored.
#[derive(Clone, Debug)]
pub struct NuDistribution {
    n: usize,
    f: PseudoBooleanFunction,
    mu: CubeDistribution,
    zeros: Vec<u64>,
    members: Vec<MaskSubspace>,
}

impl NuDistribution {
    pub fn new(fam: &SubspaceFamily) -> Result<Self> {
        let f = union_function(fam)?;
        let mu = hard_distribution_mu(fam)?;
        let zeros = (0..1u64 << fam.n()).filter(|&x| !f.bit(x)).collect();
        Ok(Self {
            n: fam.n(),
            f,
            mu,
            zeros,
            members: fam.mask_members()?,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn f(&self) -> &PseudoBooleanFunction {
        &self.f
    }

    /// `F(x, y) = f(x ⊕ y)`.
    pub fn lift(&self, x: u64, y: u64) -> bool {
        self.f.bit(x ^ y)
    }

    pub fn mass(&self, x: u64, y: u64) -> Rational {
        self.mu.mass(x ^ y) * rational::inv_pow2(self.n)
    }

    /// `nu(F^{-1}(0))`.
    pub fn zero_side_mass(&self) -> Rational {
        self.mu.mass_where(|z| !self.f.bit(z))
    }

    /// `(nu(R ∩ F^{-1}(1)), nu(R))`, via the XOR convolution of `A` and `B`.
    pub fn rectangle_masses(&self, r: &Rectangle) -> Result<(Rational, Rational)> {
        if r.n() != self.n {
            return Err(Error::DimensionMismatch { expected: self.n, found: r.n() });
        }
        let conv = xor_convolution_counts(r);
        let mut one = BigUint::zero();
        let mut total = BigUint::zero();
        for (z, &c) in conv.iter().enumerate() {
            if c == 0 {
                continue;
            }
            let w = self.mu.weight(z as u64) * BigUint::from(c);
            if self.f.bit(z as u64) {
                one += &w;
            }
            total += w;
        }
        let den = self.mu.total_weight() << self.n;
        Ok((rational::from_biguint(&one, &den), rational::from_biguint(&total, &den)))
    }

    /// One draw `(x, y)`: a fair coin picks a uniform zero of `F` or a
    /// uniform point of `S_V` for a uniform member `V`.
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> (u64, u64) {
        let x = rng.gen_range(0..1u64 << self.n);
        let z = if rng.gen::<bool>() {
            self.zeros[rng.gen_range(0..self.zeros.len())]
        } else {
            let v = &self.members[rng.gen_range(0..self.members.len())];
            v.basis
                .iter()
                .filter(|_| rng.gen::<bool>())
                .fold(0u64, |acc, b| acc ^ b)
        };
        (x, x ^ z)
    }
}

/// `conv[z] = #{(a, b) ∈ A x B : a ⊕ b = z}`.
pub fn xor_convolution_counts(r: &Rectangle) -> Vec<u64> {
    let n = r.n();
    let mut conv = vec![0u64; 1 << n];
    if r.a.len() <= r.b.len() {
        for a in r.a.iter() {
            for b in r.b.iter() {
                conv[(a ^ b) as usize] += 1;
            }
        }
    } else {
        for b in r.b.iter() {
            for a in r.a.iter() {
                conv[(a ^ b) as usize] += 1;
            }
        }
    }
    conv
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RectangleCorruption {
    #[serde(with = "rational")]
    pub one_mass: Rational,
    #[serde(with = "rational")]
    pub total_mass: Rational,
    #[serde(with = "rational")]
    pub epsilon: Rational,
    /// `nu(R ∩ F^{-1}(1)) <= 4 epsilon nu(R)`.
    pub corrupted_bound: bool,
    /// `2^{-c-3}`.
    #[serde(with = "rational")]
    pub size_threshold: Rational,
    pub large: bool,
    /// Both conditions hold.
    pub witness: bool,
}

/// Statement-level check of the two rectangle conditions for a cost-`c` protocol.
pub fn corruption_rectangle_check(
    r: &Rectangle,
    nu: &NuDistribution,
    epsilon: &Rational,
    c: usize,
) -> Result<RectangleCorruption> {
    let (one, total) = nu.rectangle_masses(r)?;
    let bound = &one <= &(rational::int(4) * epsilon * &total);
    let size_threshold = rational::inv_pow2(c + 3);
    let large = total >= size_threshold;
    Ok(RectangleCorruption {
        one_mass: one,
        total_mass: total,
        epsilon: epsilon.clone(),
        corrupted_bound: bound,
        size_threshold,
        large,
        witness: bound && large,
    })
}

/// Full `2^n x 2^n` table of `nu` masses as `(numerators, denominator)`.
pub fn nu_table(nu: &NuDistribution) -> Result<(Vec<Vec<BigInt>>, BigInt)> {
    if nu.n > 6 {
        return Err(crate::error::cap_exceeded("dense table of pair masses", nu.n, 6));
    }
    let den = BigInt::from(nu.mu.total_weight().clone()) << nu.n;
    let size = 1u64 << nu.n;
    let table = (0..size)
        .map(|x| (0..size).map(|y| BigInt::from(nu.mu.weight(x ^ y))).collect())
        .collect();
    Ok((table, den))
}

/// `Pr[F = 1]` estimated from `samples` draws, for sanity checks of the sampler.
pub fn sampled_one_rate<R: Rng + ?Sized>(nu: &NuDistribution, samples: u64, rng: &mut R) -> f64 {
    let ones = (0..samples)
        .filter(|_| {
            let (x, y) = nu.sample(rng);
            nu.lift(x, y)
        })
        .count();
    ones as f64 / samples.max(1) as f64
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::commlab::sets::PointSet;

    fn three_planes() -> SubspaceFamily {
        let sp = |r: &[&str]| Subspace::from_bitstrs(r).unwrap();
        SubspaceFamily::new(3, vec![sp(&["100", "010"]), sp(&["010", "001"]), sp(&["100", "001"])]).unwrap()
    }

    #[test]
    fn sv_examples() {
        let n = 3;
        for v in [Subspace::full(n), Subspace::zero(n), Subspace::from_bitstrs(&["110"]).unwrap()] {
            let mut count = 0u32;
            for x in 0..8 {
                for y in 0..8 {
                    let (xv, yv) = (F2Vector::from_mask(n, x), F2Vector::from_mask(n, y));
                    count += sv_membership(&v, &xv, &yv).unwrap() as u32;
                }
            }
            assert_eq!(BigUint::from(count), sv_size(&v));
        }
        assert_eq!(sv_size(&Subspace::from_bitstrs(&["110"]).unwrap()), BigUint::from(16u32));
    }

    #[test]
    fn nu_on_three_planes() {
        let nu = NuDistribution::new(&three_planes()).unwrap();
        assert_eq!(nu.zero_side_mass(), rational::ratio(1, 2));
        let (t, den) = nu_table(&nu).unwrap();
        let sum: BigInt = t.iter().flatten().sum();
        assert_eq!(sum, den);
        // zeros of F: x ⊕ y = 111, 8 pairs sharing 1/2
        assert_eq!(nu.mass(0, 0b111), rational::ratio(1, 16));
        // (0, 0): x ⊕ y = 0 lies in all three planes, each |S_V| = 32
        assert_eq!(nu.mass(0, 0), rational::ratio(1, 64));
        let (one, total) = nu.rectangle_masses(&Rectangle::full(3).unwrap()).unwrap();
        assert_eq!((one, total), (rational::ratio(1, 2), rational::int(1)));
    }

    #[test]
    fn rectangle_checks() {
        let nu = NuDistribution::new(&three_planes()).unwrap();
        let full = Rectangle::full(3).unwrap();
        let c = corruption_rectangle_check(&full, &nu, &rational::ratio(1, 9), 0).unwrap();
        assert!(!c.corrupted_bound);
        // A = {0}, B = {111}: the single pair is a zero of F
        let r = Rectangle::new(PointSet::from_points(3, [0]).unwrap(), PointSet::from_points(3, [7]).unwrap()).unwrap();
        let c = corruption_rectangle_check(&r, &nu, &rational::int(0), 1).unwrap();
        assert!(c.corrupted_bound);
        assert!(c.one_mass.is_zero());
    }

    #[test]
    fn sampler_hits_half() {
        let nu = NuDistribution::new(&three_planes()).unwrap();
        let mut r = crate::rng::seeded(4);
        let rate = sampled_one_rate(&nu, 20_000, &mut r);
        assert!((rate - 0.5).abs() < 0.03, "{rate}");
    }
}
