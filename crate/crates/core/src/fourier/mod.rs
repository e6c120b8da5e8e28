//! Exact Fourier analysis over `{0,1}^n`.
//!
//! Tables hold integers over a shared power-of-two denominator, so every
//! transform, sparsity count and spectral norm is exact.

mod grolmusz;
mod rank;
mod table;

use serde::Serialize;

use crate::designs::SubspaceFamily;
use crate::error::{Error, Result};
use crate::f2::{MaskSubspace, Subspace};
use crate::rational::{self, Dyadic, Rational};

pub use grolmusz::{grolmusz_sparsify, SparsifyConfig, SparsifyMethod, Sparsified};
pub use rank::{xor_lift_rank, XOR_LIFT_MAX_N};
pub use table::{
    inverse_wht, inverse_wht_capped, wht, wht_capped, FourierSpectrum, PseudoBooleanFunction,
    TableJson, DEFAULT_MAX_N, MAX_TABLE_N,
};

fn mask_view(v: &Subspace) -> Result<MaskSubspace> {
    if v.ambient_dim() > MAX_TABLE_N {
        return Err(crate::error::cap_exceeded(
            format!("dense table over {} variables", v.ambient_dim()),
            v.ambient_dim(),
            MAX_TABLE_N,
        ));
    }
    v.to_masks()
}

/// `1_V` together with its closed-form spectrum: `2^-codim(V)` on every
/// element of the dual, zero elsewhere.
pub fn subspace_indicator(v: &Subspace) -> Result<(PseudoBooleanFunction, FourierSpectrum)> {
    let m = mask_view(v)?;
    let n = v.ambient_dim();
    let f = PseudoBooleanFunction::from_fn(n, |x| m.contains(x))?;
    let dual = MaskSubspace::new(&v.dual())?;
    let mut coeffs = vec![0i64; 1usize << n];
    for l in dual.elements()? {
        coeffs[l as usize] = 1;
    }
    let spec = FourierSpectrum::new(n, m.codim() as u32, coeffs)?;
    Ok((f, spec))
}

/// Indicator of the union of the members.
pub fn union_function(fam: &SubspaceFamily) -> Result<PseudoBooleanFunction> {
    let n = fam.n();
    let mut values = vec![0i64; 1usize << n.min(MAX_TABLE_N)];
    for v in fam.members() {
        for x in mask_view(v)?.elements()? {
            values[x as usize] = 1;
        }
    }
    PseudoBooleanFunction::from_ints(n, values)
}

/// `sum_V 1_V - (m-1) 1_{0}` as an integer table.
pub fn inclusion_exclusion(fam: &SubspaceFamily) -> Result<PseudoBooleanFunction> {
    let n = fam.n();
    let mut values = vec![0i64; 1usize << n.min(MAX_TABLE_N)];
    for v in fam.members() {
        for x in mask_view(v)?.elements()? {
            values[x as usize] += 1;
        }
    }
    values[0] -= fam.m() as i64 - 1;
    PseudoBooleanFunction::from_ints(n, values)
}

/// Spectrum of [`inclusion_exclusion`] assembled from the closed-form
/// member spectra; `1_{0}` contributes `2^-n` at every character.
pub fn inclusion_exclusion_spectrum(fam: &SubspaceFamily) -> Result<FourierSpectrum> {
    let n = fam.n();
    let mut coeffs = vec![0i64; 1usize << n.min(MAX_TABLE_N)];
    for v in fam.members() {
        let dual = MaskSubspace::new(&v.dual())?;
        let weight = 1i64 << (n - dual.dim());
        for l in dual.elements()? {
            coeffs[l as usize] += weight;
        }
    }
    let point = fam.m() as i64 - 1;
    for c in coeffs.iter_mut() {
        *c -= point;
    }
    FourierSpectrum::new(n, n as u32, coeffs)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ApproxSparsity {
    #[serde(with = "rational")]
    pub epsilon: Rational,
    #[serde(with = "rational")]
    pub delta: Rational,
    /// Sparsity of the verified `delta`-approximator.
    pub approx_sparsity_bound: usize,
    pub samples: u64,
    pub method: SparsifyMethod,
    #[serde(with = "rational")]
    pub sup_distance: Rational,
    #[serde(with = "rational")]
    pub sample_budget: Rational,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SpectralReport {
    pub n: usize,
    pub sparsity: usize,
    pub spectral_norm: Dyadic,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub approx: Option<ApproxSparsity>,
}

/// Exact `‖f̂‖₀` and `‖f̂‖₁`.
pub fn exact_report(f: &PseudoBooleanFunction, max_n: usize) -> Result<SpectralReport> {
    let spec = wht_capped(f, max_n)?;
    Ok(SpectralReport {
        n: f.n(),
        sparsity: spec.sparsity(),
        spectral_norm: spec.spectral_norm(),
        approx: None,
    })
}

/// Exact measures plus a sampled `delta`-approximator of `f`, starting from
/// `f` itself as the `epsilon = 0` approximator.
pub fn spectral_report(
    f: &PseudoBooleanFunction,
    epsilon: &Rational,
    delta: &Rational,
    seed: u64,
    config: &SparsifyConfig,
) -> Result<SpectralReport> {
    if delta <= epsilon {
        return Err(Error::InvalidParameter(format!(
            "need delta > epsilon, got delta = {delta}, epsilon = {epsilon}"
        )));
    }
    let mut report = exact_report(f, config.max_n)?;
    let out = grolmusz_sparsify(f, None, epsilon, delta, seed, config)?;
    report.approx = Some(ApproxSparsity {
        epsilon: epsilon.clone(),
        delta: delta.clone(),
        approx_sparsity_bound: out.sparsity,
        samples: out.samples,
        method: out.method,
        sup_distance: out.sup_distance,
        sample_budget: out.sample_budget,
    });
    Ok(report)
}
