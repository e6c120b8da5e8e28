use num_bigint::BigInt;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::error::{cap_exceeded, Error, Result};
use crate::rational::{self, Dyadic, Rational};

/// Default ceiling on `n` for transforms (`2^24` table entries).
pub const DEFAULT_MAX_N: usize = 24;

/// Hard ceiling on `n` for any dense table.
pub const MAX_TABLE_N: usize = 30;

fn check_table(n: usize, len: usize) -> Result<()> {
    if n > MAX_TABLE_N {
        return Err(cap_exceeded(format!("dense table over {n} variables"), n, MAX_TABLE_N));
    }
    if len != 1usize << n {
        return Err(Error::InvalidParameter(format!(
            "table over {n} variables needs {} entries, got {len}",
            1usize << n
        )));
    }
    Ok(())
}

/// Value comparison of two scaled integer tables.
fn same_values(sa: u32, a: &[i64], sb: u32, b: &[i64]) -> bool {
    if a.len() != b.len() {
        return false;
    }
    let top = sa.max(sb);
    if top - sa.min(sb) > 64 {
        return a.iter().zip(b).all(|(&x, &y)| x == 0 && y == 0);
    }
    a.iter().zip(b).all(|(&x, &y)| {
        ((x as i128) << (top - sa)) == ((y as i128) << (top - sb))
    })
}

/// Divides out common factors of two from a scaled table.
fn normalize(scale: &mut u32, values: &mut [i64]) {
    let tz = values
        .iter()
        .filter(|&&v| v != 0)
        .map(|v| v.trailing_zeros())
        .min()
        .unwrap_or(u32::MAX)
        .min(*scale);
    if tz > 0 {
        for v in values.iter_mut() {
            *v >>= tz;
        }
        *scale -= tz;
    }
}

/// In-place unnormalized Walsh–Hadamard butterfly.
pub(crate) fn butterfly(a: &mut [i64]) {
    let mut h = 1;
    while h < a.len() {
        for block in a.chunks_mut(2 * h) {
            let (lo, hi) = block.split_at_mut(h);
            for (u, v) in lo.iter_mut().zip(hi.iter_mut()) {
                let (x, y) = (*u, *v);
                *u = x + y;
                *v = x - y;
            }
        }
        h *= 2;
    }
}

fn check_headroom(n: usize, values: &[i64]) -> Result<()> {
    let max = values.iter().map(|v| v.unsigned_abs()).max().unwrap_or(0);
    let bits = 64 - max.leading_zeros() as usize;
    if bits + n > 62 {
        return Err(Error::Overflow(format!(
            "transform of {bits}-bit entries over {n} variables"
        )));
    }
    Ok(())
}

/// A function `{0,1}^n -> Q` with dyadic values `values[x] / 2^scale_pow2`.
/// Input `x` is the mask with bit `i` holding `x_{i+1}`.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(try_from = "TableJson", into = "TableJson")]
pub struct PseudoBooleanFunction {
    n: usize,
    scale_pow2: u32,
    values: Vec<i64>,
}

/// Fourier coefficients `coeffs[S] / 2^scale_pow2`, indexed by the mask of `S`.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(try_from = "TableJson", into = "TableJson")]
pub struct FourierSpectrum {
    n: usize,
    scale_pow2: u32,
    coeffs: Vec<i64>,
}

#[derive(Serialize, Deserialize)]
pub struct TableJson {
    pub n: usize,
    pub scale_pow2: u32,
    pub values: Vec<i64>,
}

impl TryFrom<TableJson> for PseudoBooleanFunction {
    type Error = Error;
    fn try_from(j: TableJson) -> Result<Self> {
        Self::new(j.n, j.scale_pow2, j.values)
    }
}

impl From<PseudoBooleanFunction> for TableJson {
    fn from(f: PseudoBooleanFunction) -> Self {
        Self {
            n: f.n,
            scale_pow2: f.scale_pow2,
            values: f.values,
        }
    }
}

impl TryFrom<TableJson> for FourierSpectrum {
    type Error = Error;
    fn try_from(j: TableJson) -> Result<Self> {
        Self::new(j.n, j.scale_pow2, j.values)
    }
}

impl From<FourierSpectrum> for TableJson {
    fn from(f: FourierSpectrum) -> Self {
        Self {
            n: f.n,
            scale_pow2: f.scale_pow2,
            values: f.coeffs,
        }
    }
}

impl PartialEq for PseudoBooleanFunction {
    fn eq(&self, other: &Self) -> bool {
        self.n == other.n && same_values(self.scale_pow2, &self.values, other.scale_pow2, &other.values)
    }
}

impl PartialEq for FourierSpectrum {
    fn eq(&self, other: &Self) -> bool {
        self.n == other.n && same_values(self.scale_pow2, &self.coeffs, other.scale_pow2, &other.coeffs)
    }
}

impl PseudoBooleanFunction {
    pub fn new(n: usize, scale_pow2: u32, values: Vec<i64>) -> Result<Self> {
        check_table(n, values.len())?;
        Ok(Self { n, scale_pow2, values })
    }

    /// Integer-valued table.
    pub fn from_ints(n: usize, values: Vec<i64>) -> Result<Self> {
        Self::new(n, 0, values)
    }

    pub fn from_fn(n: usize, f: impl Fn(u64) -> bool) -> Result<Self> {
        check_table(n, 1usize << n.min(MAX_TABLE_N))?;
        Ok(Self {
            n,
            scale_pow2: 0,
            values: (0..1u64 << n).map(|x| f(x) as i64).collect(),
        })
    }

    pub fn constant(n: usize, c: i64) -> Result<Self> {
        Self::from_ints(n, vec![c; 1usize << n.min(MAX_TABLE_N)])
    }

    /// Parity of the bits selected by `mask`, as a 0/1 function.
    pub fn parity(n: usize, mask: u64) -> Result<Self> {
        Self::from_fn(n, |x| (x & mask).count_ones() % 2 == 1)
    }

    /// The character `chi_S` as a `±1` table.
    pub fn character(n: usize, mask: u64) -> Result<Self> {
        Self::from_ints(
            n,
            (0..1u64 << n)
                .map(|x| if (x & mask).count_ones() % 2 == 0 { 1 } else { -1 })
                .collect(),
        )
    }

    pub fn and(n: usize) -> Result<Self> {
        let all = (1u64 << n) - 1;
        Self::from_fn(n, |x| x == all)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn scale_pow2(&self) -> u32 {
        self.scale_pow2
    }

    pub fn raw_values(&self) -> &[i64] {
        &self.values
    }

    pub fn value(&self, x: u64) -> Dyadic {
        Dyadic::new(self.values[x as usize] as i128, self.scale_pow2)
    }

    /// Values in `{0,1}`?
    pub fn is_boolean(&self) -> bool {
        self.scale_pow2 == 0 && self.values.iter().all(|&v| v == 0 || v == 1)
    }

    pub fn is_constant(&self) -> bool {
        self.values.windows(2).all(|w| w[0] == w[1])
    }

    /// Boolean value at `x`; meaningful for 0/1 tables.
    pub fn bit(&self, x: u64) -> bool {
        self.values[x as usize] != 0
    }

    pub fn normalized(mut self) -> Self {
        normalize(&mut self.scale_pow2, &mut self.values);
        self
    }

    /// `2^-n * sum_x f(x)^2`, exactly.
    pub fn mean_square(&self) -> Rational {
        let sum: BigInt = self.values.iter().map(|&v| BigInt::from(v) * v).sum();
        rational::from_bigint_pow2(sum, self.n + 2 * self.scale_pow2 as usize)
    }

    /// Pointwise `self - other`.
    pub fn sub(&self, other: &Self) -> Result<Self> {
        if self.n != other.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                found: other.n,
            });
        }
        let top = self.scale_pow2.max(other.scale_pow2);
        let (sa, sb) = (top - self.scale_pow2, top - other.scale_pow2);
        let values = self
            .values
            .iter()
            .zip(&other.values)
            .map(|(&a, &b)| {
                a.checked_shl(sa)
                    .zip(b.checked_shl(sb))
                    .and_then(|(a, b)| a.checked_sub(b))
                    .ok_or_else(|| Error::Overflow("table difference".into()))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self {
            n: self.n,
            scale_pow2: top,
            values,
        })
    }

    /// `max_x |f(x)|`, exactly.
    pub fn sup_norm(&self) -> Dyadic {
        let m = self.values.iter().map(|v| v.unsigned_abs()).max().unwrap_or(0);
        Dyadic::new(m as i128, self.scale_pow2)
    }
}

impl FourierSpectrum {
    pub fn new(n: usize, scale_pow2: u32, coeffs: Vec<i64>) -> Result<Self> {
        check_table(n, coeffs.len())?;
        Ok(Self { n, scale_pow2, coeffs })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn scale_pow2(&self) -> u32 {
        self.scale_pow2
    }

    pub fn raw_coeffs(&self) -> &[i64] {
        &self.coeffs
    }

    pub fn coeff(&self, s: u64) -> Dyadic {
        Dyadic::new(self.coeffs[s as usize] as i128, self.scale_pow2)
    }

    /// `‖f̂‖₀`.
    pub fn sparsity(&self) -> usize {
        self.coeffs.iter().filter(|&&c| c != 0).count()
    }

    pub fn support(&self) -> impl Iterator<Item = u64> + '_ {
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, &c)| c != 0)
            .map(|(s, _)| s as u64)
    }

    /// `‖f̂‖₁`, exactly.
    pub fn spectral_norm(&self) -> Dyadic {
        let sum: i128 = self.coeffs.iter().map(|&c| c.unsigned_abs() as i128).sum();
        Dyadic::new(sum, self.scale_pow2)
    }

    /// `sum_S f̂(S)^2`, exactly.
    pub fn sum_squares(&self) -> Rational {
        let sum: BigInt = self.coeffs.iter().map(|&c| BigInt::from(c) * c).sum();
        rational::from_bigint_pow2(sum, 2 * self.scale_pow2 as usize)
    }

    pub fn normalized(mut self) -> Self {
        normalize(&mut self.scale_pow2, &mut self.coeffs);
        self
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }
}

/// Forward transform with the default cap.
pub fn wht(f: &PseudoBooleanFunction) -> Result<FourierSpectrum> {
    wht_capped(f, DEFAULT_MAX_N)
}

/// `f̂(S) = 2^-n sum_x f(x) chi_S(x)` via the butterfly; refuses `n > max_n`.
pub fn wht_capped(f: &PseudoBooleanFunction, max_n: usize) -> Result<FourierSpectrum> {
    if f.n > max_n {
        return Err(cap_exceeded(format!("transform over {} variables", f.n), f.n, max_n));
    }
    check_headroom(f.n, &f.values)?;
    let mut coeffs = f.values.clone();
    butterfly(&mut coeffs);
    Ok(FourierSpectrum {
        n: f.n,
        scale_pow2: f.scale_pow2 + f.n as u32,
        coeffs,
    })
}

/// `f(x) = sum_S f̂(S) chi_S(x)`.
pub fn inverse_wht(spec: &FourierSpectrum) -> Result<PseudoBooleanFunction> {
    inverse_wht_capped(spec, DEFAULT_MAX_N)
}

pub fn inverse_wht_capped(spec: &FourierSpectrum, max_n: usize) -> Result<PseudoBooleanFunction> {
    if spec.n > max_n {
        return Err(cap_exceeded(format!("transform over {} variables", spec.n), spec.n, max_n));
    }
    check_headroom(spec.n, &spec.coeffs)?;
    let mut values = spec.coeffs.clone();
    butterfly(&mut values);
    Ok(PseudoBooleanFunction {
        n: spec.n,
        scale_pow2: spec.scale_pow2,
        values,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn direct(f: &PseudoBooleanFunction, s: u64) -> Rational {
        let n = f.n();
        let mut acc = Rational::zero();
        for x in 0..1u64 << n {
            let v = f.value(x).to_rational();
            if (x & s).count_ones() % 2 == 0 {
                acc += v;
            } else {
                acc -= v;
            }
        }
        acc * rational::inv_pow2(n)
    }

    #[test]
    fn constant_and_character() {
        let one = PseudoBooleanFunction::constant(4, 1).unwrap();
        let s = wht(&one).unwrap();
        assert_eq!(s.coeff(0), Dyadic::new(1, 0));
        assert_eq!(s.sparsity(), 1);
        let chi = PseudoBooleanFunction::character(4, 0b1010).unwrap();
        let s = wht(&chi).unwrap();
        assert_eq!(s.support().collect::<Vec<_>>(), vec![0b1010]);
        assert_eq!(s.coeff(0b1010).to_string(), "1");
    }

    #[test]
    fn and2_matches_inner_products() {
        let f = PseudoBooleanFunction::and(2).unwrap();
        let s = wht(&f).unwrap();
        let got: Vec<String> = (0..4).map(|m| s.coeff(m).to_string()).collect();
        assert_eq!(got, ["1/4", "-1/4", "-1/4", "1/4"]);
        for m in 0..4 {
            assert_eq!(s.coeff(m).to_rational(), direct(&f, m));
        }
    }

    #[test]
    fn double_butterfly_scales_by_2n() {
        let v: Vec<i64> = (0..32).map(|i| (i * 7 % 11) - 5).collect();
        let mut a = v.clone();
        butterfly(&mut a);
        butterfly(&mut a);
        assert!(a.iter().zip(&v).all(|(x, y)| *x == 32 * y));
    }

    #[test]
    fn round_trip_and_parseval() {
        let f = PseudoBooleanFunction::new(3, 2, vec![1, -3, 0, 5, 7, 2, -1, 4]).unwrap();
        let s = wht(&f).unwrap();
        assert_eq!(inverse_wht(&s).unwrap(), f);
        assert_eq!(s.sum_squares(), f.mean_square());
        for m in 0..8 {
            assert_eq!(s.coeff(m).to_rational(), direct(&f, m));
        }
    }

    #[test]
    fn cap_and_shape() {
        let f = PseudoBooleanFunction::constant(5, 1).unwrap();
        assert!(matches!(wht_capped(&f, 4), Err(Error::CapExceeded { .. })));
        assert!(PseudoBooleanFunction::new(3, 0, vec![0; 7]).is_err());
        let json = serde_json::to_string(&PseudoBooleanFunction::and(2).unwrap()).unwrap();
        assert_eq!(json, r#"{"n":2,"scale_pow2":0,"values":[0,0,0,1]}"#);
    }

    #[test]
    fn overflow_is_refused() {
        let f = PseudoBooleanFunction::from_ints(4, vec![1 << 60; 16]).unwrap();
        assert!(matches!(wht(&f), Err(Error::Overflow(_))));
    }
}
