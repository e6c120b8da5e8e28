use rand::Rng;
use serde::Serialize;

use super::table::{butterfly, wht_capped, FourierSpectrum, PseudoBooleanFunction, DEFAULT_MAX_N};
use crate::error::{Error, Result};
use crate::rational::{self, Rational};
use crate::rng;

#[derive(Clone, Debug)]
pub struct SparsifyConfig {
    /// Constant in the sample budget `C * ‖p̂‖₁² * n / (delta - epsilon)²`.
    pub c: Rational,
    /// First sample count tried; also the sparsity below which `p` is returned as is.
    pub t0: u64,
    pub max_n: usize,
}

impl Default for SparsifyConfig {
    fn default() -> Self {
        Self {
            c: rational::int(4),
            t0: 64,
            max_n: DEFAULT_MAX_N,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SparsifyMethod {
    /// `g` is the constant `p̂(∅)`.
    Constant,
    /// `p` was already sparse enough and is returned unchanged.
    Exact,
    /// `g` averages sampled signed characters.
    Sampled,
}

#[derive(Clone, Debug)]
pub struct Sparsified {
    pub g: PseudoBooleanFunction,
    pub spectrum: FourierSpectrum,
    pub method: SparsifyMethod,
    /// Number of sampled characters (0 unless `Sampled`).
    pub samples: u64,
    pub rounds: u32,
    pub sparsity: usize,
    /// Verified `‖g - f‖_∞`.
    pub sup_distance: Rational,
    pub sample_budget: Rational,
}

fn sup_distance(a: &PseudoBooleanFunction, b: &PseudoBooleanFunction) -> Result<Rational> {
    Ok(a.sub(b)?.sup_norm().to_rational())
}

/// Sparse `delta`-approximation of `f` by sampling characters of an
/// `epsilon`-approximator `p` (default `p = f`, `epsilon = 0`) with
/// probability proportional to `|p̂(S)|`.
///
/// The sample count starts at `t0` and doubles while it stays within the
/// budget; every candidate is checked against `f` on the whole cube, so a
/// returned `g` always satisfies `‖g - f‖_∞ <= delta`. Round `r` draws from
/// stream `r` of `seed`.
pub fn grolmusz_sparsify(
    f: &PseudoBooleanFunction,
    approximator: Option<&PseudoBooleanFunction>,
    epsilon: &Rational,
    delta: &Rational,
    seed: u64,
    config: &SparsifyConfig,
) -> Result<Sparsified> {
    if delta <= epsilon || epsilon < &rational::int(0) {
        return Err(Error::InvalidParameter(format!(
            "need delta > epsilon >= 0, got delta = {delta}, epsilon = {epsilon}"
        )));
    }
    let p = approximator.unwrap_or(f);
    if p.n() != f.n() {
        return Err(Error::DimensionMismatch {
            expected: f.n(),
            found: p.n(),
        });
    }
    let p_dist = sup_distance(p, f)?;
    if &p_dist > epsilon {
        return Err(Error::InvalidParameter(format!(
            "approximator is {p_dist} from f, more than epsilon = {epsilon}"
        )));
    }
    let n = f.n();
    let spec = wht_capped(p, config.max_n)?;
    let norm = spec.spectral_norm().to_rational();
    let gap = delta - epsilon;
    let budget = &config.c * &norm * &norm * rational::int(n as u64) / (&gap * &gap);

    let c0 = spec.coeff(0);
    let constant = PseudoBooleanFunction::new(
        n,
        c0.pow2,
        vec![i64::try_from(c0.num).map_err(|_| Error::Overflow("constant term".into()))?; 1 << n],
    )?;
    let d = sup_distance(&constant, f)?;
    if &d <= delta {
        let mut coeffs = vec![0i64; 1 << n];
        coeffs[0] = c0.num as i64;
        return Ok(Sparsified {
            spectrum: FourierSpectrum::new(n, c0.pow2, coeffs)?,
            g: constant,
            method: SparsifyMethod::Constant,
            samples: 0,
            rounds: 0,
            sparsity: (c0.num != 0) as usize,
            sup_distance: d,
            sample_budget: budget,
        });
    }
    if spec.sparsity() as u64 <= config.t0 {
        return Ok(Sparsified {
            g: p.clone(),
            sparsity: spec.sparsity(),
            spectrum: spec,
            method: SparsifyMethod::Exact,
            samples: 0,
            rounds: 0,
            sup_distance: p_dist,
            sample_budget: budget,
        });
    }

    let support: Vec<u64> = spec.support().collect();
    let mut cumulative = Vec::with_capacity(support.len());
    let mut total: u128 = 0;
    for &s in &support {
        total += spec.raw_coeffs()[s as usize].unsigned_abs() as u128;
        cumulative.push(total);
    }
    let total_i64 =
        i64::try_from(total).map_err(|_| Error::Overflow("spectral mass".into()))?;

    let mut t = config.t0.max(1).next_power_of_two();
    while t > 1 && rational::int(t) > budget {
        t /= 2;
    }
    let mut rounds = 0u32;
    let mut best: Option<Rational> = None;
    let mut last_t = 0;
    while rational::int(t) <= budget || rounds == 0 {
        let mut r = rng::stream(seed, rounds as u64);
        rounds += 1;
        last_t = t;
        let mut counts = vec![0i64; 1 << n];
        for _ in 0..t {
            let u = r.gen_range(0..total);
            let i = cumulative.partition_point(|&c| c <= u);
            let s = support[i] as usize;
            counts[s] += spec.raw_coeffs()[s].signum();
        }
        let log_t = t.trailing_zeros();
        let scale = spec.scale_pow2() + log_t;
        let coeffs: Vec<i64> = counts
            .iter()
            .map(|&k| k.checked_mul(total_i64))
            .collect::<Option<_>>()
            .ok_or_else(|| Error::Overflow("sampled coefficients".into()))?;
        let mut values = counts.clone();
        butterfly(&mut values);
        let values: Vec<i64> = values
            .iter()
            .map(|&k| k.checked_mul(total_i64))
            .collect::<Option<_>>()
            .ok_or_else(|| Error::Overflow("sampled values".into()))?;
        let g = PseudoBooleanFunction::new(n, scale, values)?;
        let d = sup_distance(&g, f)?;
        if &d <= delta {
            let spectrum = FourierSpectrum::new(n, scale, coeffs)?;
            return Ok(Sparsified {
                g: g.normalized(),
                sparsity: spectrum.sparsity(),
                spectrum: spectrum.normalized(),
                method: SparsifyMethod::Sampled,
                samples: t,
                rounds,
                sup_distance: d,
                sample_budget: budget,
            });
        }
        if best.as_ref().is_none_or(|b| &d < b) {
            best = Some(d);
        }
        t *= 2;
    }
    Err(Error::SparsifyFailed {
        samples: last_t,
        sup_distance: best.map(|b| b.to_string()).unwrap_or_default(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sparse_input_is_returned() {
        let f = PseudoBooleanFunction::parity(6, 0b101).unwrap();
        let out = grolmusz_sparsify(&f, None, &rational::int(0), &rational::ratio(1, 10), 0, &SparsifyConfig::default()).unwrap();
        assert_eq!(out.method, SparsifyMethod::Exact);
        assert_eq!(out.g, f);
        assert_eq!(out.sparsity, 2);
    }

    #[test]
    fn constant_shortcut() {
        // AND_6 is within 1/64 of the constant 1/64
        let f = PseudoBooleanFunction::and(6).unwrap();
        let out = grolmusz_sparsify(&f, None, &rational::int(0), &rational::ratio(1, 1), 0, &SparsifyConfig::default()).unwrap();
        assert_eq!(out.method, SparsifyMethod::Constant);
        assert_eq!(out.sup_distance, rational::ratio(63, 64));
    }

    #[test]
    fn sampled_approximator_is_verified() {
        let f = PseudoBooleanFunction::from_fn(8, |x| x.count_ones() >= 5).unwrap();
        let cfg = SparsifyConfig { t0: 16, ..Default::default() };
        let delta = rational::ratio(1, 3);
        let out = grolmusz_sparsify(&f, None, &rational::int(0), &delta, 9, &cfg).unwrap();
        assert_eq!(out.method, SparsifyMethod::Sampled);
        assert!(out.sup_distance <= delta);
        assert!(rational::int(out.samples) <= out.sample_budget);
        // independent check of the sup norm
        for x in 0..256u64 {
            let diff = out.g.value(x).to_rational() - f.value(x).to_rational();
            assert!(rational::abs(&diff) <= delta);
        }
        assert_eq!(super::super::wht(&out.g).unwrap(), out.spectrum);
    }

    #[test]
    fn bad_approximator_is_rejected() {
        let f = PseudoBooleanFunction::and(3).unwrap();
        let p = PseudoBooleanFunction::constant(3, 0).unwrap();
        let e = grolmusz_sparsify(&f, Some(&p), &rational::ratio(1, 2), &rational::int(1), 0, &SparsifyConfig::default());
        assert!(e.is_err());
    }
}
