//! `report`: a family summary, or one of the seeded experiment sweeps as JSON lines.

use anyhow::{bail, Context, Result};
use rand::{Rng, RngCore};
use serde::Serialize;

use larclab::commlab::{family_stats, FamilyStats};
use larclab::designs::{
    certify_dual_design_exhaustive, dual_side_h, hitting_check, pairwise_trivial, random_pairwise_trivial_design, DesignCertificate,
    DEFAULT_REDRAWS,
    FamilyMeta, PairwiseReport, RrefSubspaces, SubspaceFamily,
};
use larclab::f2::{affine_avoidance_check, random_affine, random_subspace, AffineSubspace, Avoidance, F2Vector};
use larclab::fourier::{
    exact_report, inclusion_exclusion, inverse_wht, subspace_indicator, union_function, wht, xor_lift_rank,
    PseudoBooleanFunction, SpectralReport,
};
use larclab::pdt::{optimal_depth, theorem_threshold, Threshold};
use larclab::rational::{self, Dyadic};
use larclab::rng;

use crate::commands::par_trials;
use crate::io::{emit_document, emit_line, read_family, require_n, require_seed};
use crate::{Experiment, ReportArgs, Status};

#[derive(Serialize)]
struct FamilyReport {
    n: usize,
    m: usize,
    meta: FamilyMeta,
    pairwise: PairwiseReport,
    stats: FamilyStats,
    spectral: SpectralReport,
    /// `2m - 1`, the spectral-norm bound for pairwise-trivial families.
    norm_bound: usize,
    /// `f = sum 1_V - (m-1) 1_{0}` pointwise.
    inclusion_exclusion: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    certificate: Option<DesignCertificate>,
    #[serde(skip_serializing_if = "Option::is_none")]
    threshold: Option<Threshold>,
}

pub fn run(a: &ReportArgs, max_n: usize) -> Result<Status> {
    if let Some(p) = &a.design {
        return family_report(&read_family(p)?, a, max_n);
    }
    let e = a.experiment.expect("clap enforces one of --design, --experiment");
    let status = match e {
        Experiment::PdtDepths => pdt_depths()?,
        _ => {
            let seed = require_seed(a.seed, "this experiment")?;
            match e {
                Experiment::WhtExactness => wht_exactness(seed, a.trials.unwrap_or(200))?,
                Experiment::SubspaceSpectra => subspace_spectra(seed, a.trials.unwrap_or(100))?,
                Experiment::UnionNorm => union_norm(seed, a.trials.unwrap_or(20))?,
                Experiment::RankIdentity => rank_identity(seed, a.trials.unwrap_or(50))?,
                Experiment::Intersection => intersection(seed, a.trials.unwrap_or(10_000))?,
                Experiment::AffineDichotomy => affine_dichotomy(seed, a.trials.unwrap_or(10_000))?,
                Experiment::CertifyCoherence => certify_coherence(seed, a.trials.unwrap_or(200), a.cap)?,
                Experiment::Hitting => hitting(seed, a.trials.unwrap_or(100), a.cap)?,
                Experiment::PdtDepths => unreachable!(),
            }
        }
    };
    Ok(status)
}

fn family_report(fam: &SubspaceFamily, a: &ReportArgs, max_n: usize) -> Result<Status> {
    require_n(fam.n(), max_n, "report")?;
    let f = union_function(fam)?;
    let pairwise = pairwise_trivial(fam);
    let certificate = match a.s {
        Some(s) => Some(certify_dual_design_exhaustive(fam, s, a.cap)?),
        None => None,
    };
    let threshold = match &certificate {
        Some(c) => Some(theorem_threshold(fam, c)?),
        None => None,
    };
    emit_document(
        &FamilyReport {
            n: fam.n(),
            m: fam.m(),
            meta: fam.meta().clone(),
            inclusion_exclusion: pairwise.trivial && inclusion_exclusion(fam)? == f,
            pairwise,
            stats: family_stats(fam)?,
            spectral: exact_report(&f, max_n)?,
            norm_bound: 2 * fam.m() - 1,
            certificate,
            threshold,
        },
        None,
    )?;
    Ok(Status::Ok)
}

fn verdict_status(ok: bool) -> Status {
    if ok {
        Status::Ok
    } else {
        Status::Violation
    }
}

#[derive(Serialize)]
struct Done {
    kind: &'static str,
    experiment: &'static str,
    trials: u64,
    failures: u64,
    ok: bool,
}

fn finish(experiment: &'static str, trials: u64, failures: u64) -> Result<Status> {
    emit_line(&Done {
        kind: "summary",
        experiment,
        trials,
        failures,
        ok: failures == 0,
    })?;
    Ok(verdict_status(failures == 0))
}

#[derive(Serialize)]
struct WhtLine {
    trial: u64,
    n: usize,
    roundtrip: bool,
    parseval: bool,
}

fn wht_exactness(seed: u64, trials: u64) -> Result<Status> {
    let n = 12;
    let mut failures = 0;
    par_trials(
        trials,
        |t| -> larclab::Result<WhtLine> {
            let mut r = rng::stream(seed, t);
            let values = (0..1 << n).map(|_| r.gen_range(-(1i64 << 20)..=1 << 20)).collect();
            let f = PseudoBooleanFunction::new(n, 0, values)?;
            let spec = wht(&f)?;
            let back = inverse_wht(&spec)?;
            Ok(WhtLine {
                trial: t,
                n,
                roundtrip: back == f,
                parseval: spec.sum_squares() == f.mean_square(),
            })
        },
        |_, line| {
            let line = line?;
            failures += u64::from(!(line.roundtrip && line.parseval));
            emit_line(&line)?;
            Ok(true)
        },
    )?;
    finish("wht-exactness", trials, failures)
}

#[derive(Serialize)]
struct SpectrumLine {
    trial: u64,
    n: usize,
    dim: usize,
    sparsity: usize,
    expected_sparsity: u64,
    spectral_norm: Dyadic,
    matches_closed_form: bool,
}

fn subspace_spectra(seed: u64, trials: u64) -> Result<Status> {
    let mut failures = 0;
    par_trials(
        trials,
        |t| -> larclab::Result<SpectrumLine> {
            let mut r = rng::stream(seed, t);
            let n = r.gen_range(8..=16);
            let dim = r.gen_range(0..=n);
            let v = random_subspace(n, dim, &mut r);
            let (f, closed) = subspace_indicator(&v)?;
            let spec = wht(&f)?;
            Ok(SpectrumLine {
                trial: t,
                n,
                dim,
                sparsity: spec.sparsity(),
                expected_sparsity: 1 << v.codim(),
                spectral_norm: spec.spectral_norm(),
                matches_closed_form: spec == closed,
            })
        },
        |_, line| {
            let line = line?;
            let ok = line.sparsity as u64 == line.expected_sparsity
                && line.spectral_norm == Dyadic::new(1, 0)
                && line.matches_closed_form;
            failures += u64::from(!ok);
            emit_line(&line)?;
            Ok(true)
        },
    )?;
    finish("subspace-spectra", trials, failures)
}

#[derive(Serialize)]
struct UnionLine {
    trial: u64,
    design_seed: u64,
    pairwise_trivial: bool,
    identity: bool,
    spectral_norm: Dyadic,
    bound: usize,
    within_bound: bool,
}

fn union_norm(seed: u64, trials: u64) -> Result<Status> {
    let (n, dim, m) = (16, 6, 32);
    let mut failures = 0;
    par_trials(
        trials,
        |t| -> larclab::Result<UnionLine> {
            let design_seed = rng::stream(seed, t).next_u64();
            let fam = random_pairwise_trivial_design(n, dim, m, design_seed, DEFAULT_REDRAWS)?;
            let f = union_function(&fam)?;
            let norm = wht(&f)?.spectral_norm();
            let bound = 2 * m - 1;
            Ok(UnionLine {
                trial: t,
                design_seed,
                pairwise_trivial: pairwise_trivial(&fam).trivial,
                identity: inclusion_exclusion(&fam)? == f,
                spectral_norm: norm,
                bound,
                within_bound: norm.to_rational() <= rational::int(bound as u64),
            })
        },
        |_, line| {
            let line = line?;
            failures += u64::from(!(line.pairwise_trivial && line.identity && line.within_bound));
            emit_line(&line)?;
            Ok(true)
        },
    )?;
    finish("union-norm", trials, failures)
}

#[derive(Serialize)]
struct RankLine {
    n: usize,
    index: u64,
    rank: usize,
    sparsity: usize,
}

fn rank_identity(seed: u64, trials: u64) -> Result<Status> {
    let mut failures = 0;
    let total = 256 + trials;
    par_trials(
        total,
        |i| -> larclab::Result<RankLine> {
            let (n, f) = if i < 256 {
                (3, PseudoBooleanFunction::from_fn(3, |x| i >> x & 1 == 1)?)
            } else {
                let mut r = rng::stream(seed, i - 256);
                let table: u64 = r.gen_range(0..1 << 16);
                (4, PseudoBooleanFunction::from_fn(4, |x| table >> x & 1 == 1)?)
            };
            Ok(RankLine {
                n,
                index: i,
                rank: xor_lift_rank(&f)?,
                sparsity: wht(&f)?.sparsity(),
            })
        },
        |_, line| {
            let line = line?;
            failures += u64::from(line.rank != line.sparsity);
            emit_line(&line)?;
            Ok(true)
        },
    )?;
    finish("rank-identity", total, failures)
}

#[derive(Serialize)]
struct IntersectionSummary {
    kind: &'static str,
    experiment: &'static str,
    n: usize,
    d1: usize,
    d2: usize,
    trials: u64,
    nontrivial: u64,
    rate: f64,
    /// `n 2^(d1 + d2 - n)`.
    failure_bound: String,
    /// Exact probability of a nontrivial intersection.
    exact: String,
    limit: f64,
    ok: bool,
}

fn intersection(seed: u64, trials: u64) -> Result<Status> {
    let (n, d1, d2) = (20, 6, 6);
    let mut nontrivial = 0u64;
    par_trials(
        trials,
        |t| {
            let mut r = rng::stream(seed, t);
            let s = random_subspace(n, d1, &mut r);
            let tt = random_subspace(n, d2, &mut r);
            !s.meets_trivially(&tt).expect("same n")
        },
        |_, hit| {
            nontrivial += u64::from(hit);
            Ok(true)
        },
    )?;
    let bound = rational::int(1) - larclab::f2::trivial_intersection_prob_bound(n, d1, d2).raw;
    let exact = rational::int(1) - larclab::f2::exact_trivial_intersection_prob(n, d1, d2);
    let p = rational::to_f64(&bound);
    let sigma = (p * (1.0 - p) / trials as f64).sqrt();
    let rate = nontrivial as f64 / trials as f64;
    let limit = p + 3.0 * sigma;
    let ok = rate <= limit;
    emit_line(&IntersectionSummary {
        kind: "summary",
        experiment: "intersection",
        n,
        d1,
        d2,
        trials,
        nontrivial,
        rate,
        failure_bound: bound.to_string(),
        exact: exact.to_string(),
        limit,
        ok,
    })?;
    Ok(verdict_status(ok))
}

#[derive(Serialize)]
struct DichotomySummary {
    kind: &'static str,
    experiment: &'static str,
    n: usize,
    trials: u64,
    disjoint: u64,
    intersecting: u64,
    mismatches: u64,
    ok: bool,
}

/// Enumerated `|V ∩ W|`, from the smaller of the two.
fn enumerated_intersection(v: &AffineSubspace, w: &AffineSubspace) -> larclab::Result<usize> {
    let (small, big) = if v.dim() <= w.dim() { (v, w) } else { (w, v) };
    Ok(small.elements()?.filter(|x| big.contains(x)).count())
}

fn affine_dichotomy(seed: u64, trials: u64) -> Result<Status> {
    let n = 10;
    let (mut disjoint, mut intersecting, mut mismatches) = (0, 0, 0);
    par_trials(
        trials,
        |t| -> larclab::Result<(Avoidance, usize, usize)> {
            let mut r = rng::stream(seed, t);
            let v = random_affine(n, r.gen_range(0..=n), &mut r);
            let w = random_affine(n, r.gen_range(0..=n), &mut r);
            Ok((affine_avoidance_check(&v, &w)?, enumerated_intersection(&v, &w)?, v.dim()))
        },
        |_, out| {
            let (status, count, v_dim) = out?;
            let agree = match &status {
                Avoidance::Disjoint => {
                    disjoint += 1;
                    count == 0
                }
                Avoidance::Intersecting(ratio) => {
                    intersecting += 1;
                    count > 0 && *ratio == rational::ratio(count as u64, 1u64 << v_dim)
                }
            };
            mismatches += u64::from(!agree);
            Ok(true)
        },
    )?;
    emit_line(&DichotomySummary {
        kind: "summary",
        experiment: "affine-dichotomy",
        n,
        trials,
        disjoint,
        intersecting,
        mismatches,
        ok: mismatches == 0,
    })?;
    Ok(verdict_status(mismatches == 0))
}

/// A small random family: `n` in 2..=6, 1 to 4 members of random dimension, and `s`.
fn small_family(seed: u64, t: u64) -> larclab::Result<(SubspaceFamily, usize)> {
    let mut r = rng::stream(seed, t);
    let n = r.gen_range(2..=6);
    let m = r.gen_range(1..=4);
    let members = (0..m)
        .map(|_| {
            let d = r.gen_range(0..=n);
            random_subspace(n, d, &mut r)
        })
        .collect();
    let s = r.gen_range(0..=n);
    Ok((SubspaceFamily::new(n, members)?, s))
}

#[derive(Serialize)]
struct CoherenceLine {
    trial: u64,
    n: usize,
    m: usize,
    s: usize,
    h_independence: usize,
    h_dual: usize,
}

fn certify_coherence(seed: u64, trials: u64, cap: u64) -> Result<Status> {
    let mut failures = 0;
    par_trials(
        trials,
        |t| -> larclab::Result<CoherenceLine> {
            let (fam, s) = small_family(seed, t)?;
            Ok(CoherenceLine {
                trial: t,
                n: fam.n(),
                m: fam.m(),
                s,
                h_independence: certify_dual_design_exhaustive(&fam, s, cap)?.h,
                h_dual: dual_side_h(&fam, s, cap)?.0,
            })
        },
        |_, line| {
            let line = line?;
            failures += u64::from(line.h_independence != line.h_dual);
            emit_line(&line)?;
            Ok(true)
        },
    )?;
    finish("certify-coherence", trials, failures)
}

#[derive(Serialize)]
struct HittingLine {
    trial: u64,
    n: usize,
    m: usize,
    s: usize,
    h: usize,
    affine_checked: u64,
    min_hits: usize,
}

/// Every affine subspace of codimension at most `s`, as constraint systems
/// over the RREF constraint spaces.
fn min_hits(fam: &SubspaceFamily, s: usize) -> larclab::Result<(u64, usize)> {
    let n = fam.n();
    let mut checked = 0;
    let mut least = usize::MAX;
    for c in 0..=s {
        for rows in RrefSubspaces::new(n, c) {
            let lines: Vec<F2Vector> = rows.iter().map(|&r| F2Vector::from_mask(n, r)).collect();
            for label in 0..1u64 << c {
                let values: Vec<bool> = (0..c).map(|i| label >> i & 1 == 1).collect();
                let w = AffineSubspace::from_constraints(n, &lines, &values)?.expect("independent lines");
                least = least.min(hitting_check(fam, &w)?);
                checked += 1;
            }
        }
    }
    Ok((checked, least))
}

fn hitting(seed: u64, trials: u64, cap: u64) -> Result<Status> {
    let mut failures = 0;
    par_trials(
        trials,
        |t| -> larclab::Result<HittingLine> {
            let (fam, s) = small_family(seed, t)?;
            let h = certify_dual_design_exhaustive(&fam, s, cap)?.h;
            let (affine_checked, least) = min_hits(&fam, s)?;
            Ok(HittingLine {
                trial: t,
                n: fam.n(),
                m: fam.m(),
                s,
                h,
                affine_checked,
                min_hits: least,
            })
        },
        |_, line| {
            let line = line?;
            failures += u64::from(line.min_hits + line.h < line.m);
            emit_line(&line)?;
            Ok(true)
        },
    )?;
    finish("hitting", trials, failures)
}

#[derive(Serialize)]
struct DepthLine {
    function: &'static str,
    n: usize,
    depth: usize,
    expected: usize,
}

fn pdt_depths() -> Result<Status> {
    let mut cases: Vec<(&'static str, usize, PseudoBooleanFunction, usize)> = Vec::new();
    for n in 1..=5 {
        cases.push(("constant", n, PseudoBooleanFunction::constant(n, 1)?, 0));
        cases.push(("parity", n, PseudoBooleanFunction::parity(n, (1 << n) - 1)?, 1));
    }
    for n in 1..=4 {
        cases.push(("and", n, PseudoBooleanFunction::and(n)?, n));
    }
    let mut failures = 0;
    for (name, n, f, expected) in &cases {
        let (depth, tree) = optimal_depth(f).with_context(|| format!("{name} on {n} variables"))?;
        if !tree.soundness_check(f) {
            bail!("solver returned an unsound tree for {name} on {n} variables");
        }
        failures += u64::from(depth != *expected);
        emit_line(&DepthLine {
            function: name,
            n: *n,
            depth,
            expected: *expected,
        })?;
    }
    finish("pdt-depths", cases.len() as u64, failures)
}
