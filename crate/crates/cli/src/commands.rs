use anyhow::{bail, Context, Result};
use rand::{Rng, RngCore};
use rayon::prelude::*;
use serde::Serialize;

use larclab::commlab::{
    appendix_chain_check, conjecture2_check, conjecture_check, corruption_rectangle_check, counterexample_search,
    mono_rectangle_search, rectangle_analysis, ConjectureParams, ConjectureReport, NuDistribution, PointSet,
    ProjectionReport, Rectangle, RectangleCorruption, SearchConfig, SearchInit, Verdict, MAX_SET_N,
};
use larclab::designs::{
    certify_dual_design_exhaustive, certify_dual_design_montecarlo, paper_preset, random_design,
    random_pairwise_trivial_design, MonteCarloOutcome, SubspaceFamily, DEFAULT_REDRAWS,
};
use larclab::distribution::{CubeDistribution, DistributionJson};
use larclab::f2::{random_affine, random_subspace, MaskSubspace, Subspace};
use larclab::fourier::{
    exact_report, spectral_report, subspace_indicator, union_function, wht_capped, PseudoBooleanFunction,
    SparsifyConfig,
};
use larclab::pdt::{corruption_scan, hard_distribution_mu};
use larclab::rational::Rational;
use larclab::rng;

use crate::io::{emit_document, emit_line, rational_arg, read_family, read_json, require_n, require_seed};
use crate::{
    CertMode, Cli, Command, ConjectureArgs, FourierArgs, GenDesignArgs, PdtLbArgs, Preset, RectArgs, Status, Variant,
    VerifyDesignArgs,
};

/// Trials evaluated in parallel per batch before their results are emitted in order.
const BATCH: u64 = 1024;

/// Runs `f` on `0..trials` in parallel batches and feeds the results to
/// `sink` in index order; `sink` returning `false` stops early.
pub fn par_trials<T: Send>(
    trials: u64,
    f: impl Fn(u64) -> T + Sync,
    mut sink: impl FnMut(u64, T) -> Result<bool>,
) -> Result<()> {
    let mut start = 0;
    while start < trials {
        let end = (start + BATCH).min(trials);
        let out: Vec<T> = (start..end).into_par_iter().map(&f).collect();
        for (t, item) in (start..end).zip(out) {
            if !sink(t, item)? {
                return Ok(());
            }
        }
        start = end;
    }
    Ok(())
}

pub fn run(cli: &Cli) -> Result<Status> {
    match &cli.command {
        Command::GenDesign(a) => gen_design(a),
        Command::VerifyDesign(a) => verify_design(a),
        Command::Fourier(a) => fourier(a, cli.max_n),
        Command::PdtLb(a) => pdt_lb(a, cli.max_n),
        Command::Conjecture(a) => conjecture(a, cli.max_n),
        Command::Rect(a) => rect(a, cli.max_n),
        Command::Report(a) => crate::report::run(a, cli.max_n),
    }
}

fn gen_design(a: &GenDesignArgs) -> Result<Status> {
    let seed = require_seed(a.seed, "gen-design")?;
    let (dim, m, preset) = match a.preset {
        Some(Preset::Paper) => {
            let (d, m) = paper_preset(a.n);
            (d, m, true)
        }
        None => (
            a.dim.context("--dim is required without --preset")?,
            a.m.context("--m is required without --preset")?,
            false,
        ),
    };
    let mut fam = if a.pairwise_trivial {
        random_pairwise_trivial_design(a.n, dim, m, seed, DEFAULT_REDRAWS)?
    } else {
        random_design(a.n, dim, m, seed)?
    };
    if preset {
        fam = fam.with_name("paper-preset");
    }
    emit_document(&fam, a.out.as_deref())?;
    Ok(Status::Ok)
}

fn verify_design(a: &VerifyDesignArgs) -> Result<Status> {
    let fam = read_family(&a.input)?;
    match a.mode {
        CertMode::Exhaustive => {
            let cert = certify_dual_design_exhaustive(&fam, a.s, a.cap)?;
            emit_document(&cert, None)?;
            Ok(match a.h {
                Some(h) if cert.h > h => Status::Violation,
                _ => Status::Ok,
            })
        }
        CertMode::MonteCarlo => {
            let h = a.h.context("--mode monte-carlo requires --h")?;
            let trials = a.trials.context("--mode monte-carlo requires --trials")?;
            let seed = require_seed(a.seed, "--mode monte-carlo")?;
            let outcome = certify_dual_design_montecarlo(&fam, a.s, h, trials, seed)?;
            emit_document(&outcome, None)?;
            Ok(match outcome {
                MonteCarloOutcome::Certified(_) => Status::Ok,
                MonteCarloOutcome::Violation(_) => Status::Violation,
            })
        }
    }
}

fn fourier(a: &FourierArgs, max_n: usize) -> Result<Status> {
    let f: PseudoBooleanFunction = if let Some(p) = &a.function {
        read_json(p)?
    } else if let Some(p) = &a.from_design {
        let fam = read_family(p)?;
        require_n(fam.n(), max_n, "fourier")?;
        union_function(&fam)?
    } else {
        let v: Subspace = read_json(a.subspace.as_ref().expect("clap enforces one source"))?;
        require_n(v.ambient_dim(), max_n, "fourier")?;
        subspace_indicator(&v)?.0
    };
    require_n(f.n(), max_n, "fourier")?;
    let eps = rational_arg("eps", &a.eps)?;
    let report = match &a.delta {
        Some(d) => {
            let delta = rational_arg("delta", d)?;
            let seed = require_seed(a.seed, "--delta")?;
            let config = SparsifyConfig {
                max_n,
                ..SparsifyConfig::default()
            };
            spectral_report(&f, &eps, &delta, seed, &config)?
        }
        None => {
            if eps != Rational::from_integer(0.into()) {
                bail!("--eps only applies together with --delta");
            }
            exact_report(&f, max_n)?
        }
    };
    if let Some(p) = &a.spectrum_out {
        emit_document(&wht_capped(&f, max_n)?, Some(p))?;
    }
    emit_document(&report, None)?;
    Ok(Status::Ok)
}

fn pdt_lb(a: &PdtLbArgs, max_n: usize) -> Result<Status> {
    let fam = read_family(&a.design)?;
    require_n(fam.n(), max_n, "pdt-lb")?;
    let eps = rational_arg("eps", &a.eps)?;
    let f = union_function(&fam)?;
    let mu = hard_distribution_mu(&fam)?;
    let report = corruption_scan(&f, &mu, &eps, a.cmax, a.cap)?;
    emit_document(&report, None)?;
    Ok(Status::Ok)
}

#[derive(Serialize)]
struct DistLine<'a> {
    kind: &'static str,
    seed: Option<u64>,
    #[serde(flatten)]
    report: &'a ConjectureReport,
}

#[derive(Serialize)]
struct SanityLine<'a> {
    kind: &'static str,
    seed: u64,
    trial: u64,
    codim: usize,
    h: usize,
    #[serde(flatten)]
    report: &'a ConjectureReport,
    /// `H(X) = n - codim(W)` with no tolerance.
    entropy_exact: bool,
    far_within_h: bool,
}

#[derive(Serialize)]
struct TraceLine {
    kind: &'static str,
    seed: u64,
    restart: u64,
    iteration: u64,
    score: f64,
    far_count: usize,
    entropy: f64,
}

#[derive(Serialize)]
struct ResultLine<'a> {
    kind: &'static str,
    seed: u64,
    restart: u64,
    #[serde(flatten)]
    report: &'a ConjectureReport,
    best_score: f64,
    support_size: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    best: Option<DistributionJson>,
}

#[derive(Serialize)]
struct SummaryLine {
    kind: &'static str,
    seed: u64,
    trials: u64,
    vacuous: u64,
    consistent: u64,
    candidates: u64,
    /// Trials failing a sanity property (affine mode only).
    failures: u64,
}

fn conjecture(a: &ConjectureArgs, max_n: usize) -> Result<Status> {
    let fam = read_family(&a.design)?;
    require_n(fam.n(), max_n, "conjecture")?;
    let h = match a.h {
        Some(h) => h,
        None => certify_dual_design_exhaustive(&fam, a.s, a.cap)?.h,
    };
    let params = ConjectureParams::new(rational_arg("alpha", &a.alpha)?, a.beta, rational_arg("k", &a.k)?, a.s, h)?;
    if let Some(p) = &a.dist {
        let x = CubeDistribution::from_json(&read_json::<DistributionJson>(p)?)?;
        let report = match a.variant {
            Variant::Design => conjecture_check(&x, &fam, &params)?,
            Variant::Random => conjecture2_check(&x, &fam, &params.alpha, params.beta)?,
        };
        emit_line(&DistLine {
            kind: "dist",
            seed: None,
            report: &report,
        })?;
        return Ok(status_of(report.verdict));
    }
    if a.variant != Variant::Design {
        bail!("--variant random is only supported with --dist");
    }
    if a.affine_sanity {
        affine_sanity(a, &fam, &params)
    } else {
        search(a, &fam, &params)
    }
}

fn status_of(v: Verdict) -> Status {
    if v == Verdict::CounterexampleCandidate {
        Status::Violation
    } else {
        Status::Ok
    }
}

#[derive(Default)]
struct Tally {
    vacuous: u64,
    consistent: u64,
    candidates: u64,
    failures: u64,
}

impl Tally {
    fn add(&mut self, v: Verdict) {
        match v {
            Verdict::Vacuous => self.vacuous += 1,
            Verdict::Consistent => self.consistent += 1,
            Verdict::CounterexampleCandidate => self.candidates += 1,
        }
    }

    fn summary(&self, seed: u64, trials: u64) -> SummaryLine {
        SummaryLine {
            kind: "summary",
            seed,
            trials,
            vacuous: self.vacuous,
            consistent: self.consistent,
            candidates: self.candidates,
            failures: self.failures,
        }
    }
}

/// Uniform `X` on a random affine `W` of codimension `c <= s`: the entropy is
/// exactly `n - c`, and a member is far only if it is not independent of `W`.
fn affine_sanity(a: &ConjectureArgs, fam: &SubspaceFamily, params: &ConjectureParams) -> Result<Status> {
    let seed = require_seed(a.seed, "--affine-sanity")?;
    let n = fam.n();
    if params.s > n {
        bail!("s = {} exceeds n = {n}", params.s);
    }
    let mut tally = Tally::default();
    par_trials(
        a.trials,
        |t| -> larclab::Result<(usize, ConjectureReport)> {
            let mut r = rng::stream(seed, t);
            let codim = r.gen_range(0..=params.s);
            let w = random_affine(n, n - codim, &mut r);
            let x = CubeDistribution::uniform_affine(&w)?;
            Ok((codim, conjecture_check(&x, fam, params)?))
        },
        |t, out| {
            let (codim, report) = out?;
            let entropy_exact = report.entropy == (n - codim) as f64;
            let far_within_h = report.far_count <= params.h;
            tally.add(report.verdict);
            if !(entropy_exact && far_within_h) {
                tally.failures += 1;
            }
            emit_line(&SanityLine {
                kind: "affine-sanity",
                seed,
                trial: t,
                codim,
                h: params.h,
                report: &report,
                entropy_exact,
                far_within_h,
            })?;
            Ok(true)
        },
    )?;
    emit_line(&tally.summary(seed, a.trials))?;
    Ok(if tally.candidates + tally.failures > 0 {
        Status::Violation
    } else {
        Status::Ok
    })
}

fn search(a: &ConjectureArgs, fam: &SubspaceFamily, params: &ConjectureParams) -> Result<Status> {
    let seed = require_seed(a.seed, "--search")?;
    if let Some(j) = a.init_member {
        if j >= fam.m() {
            bail!("--init-member {j} out of range for m = {}", fam.m());
        }
    }
    let mut tally = Tally::default();
    par_trials(
        a.restarts,
        |r| {
            let run_seed = rng::stream(seed, r).next_u64();
            let init = SearchInit::Member(a.init_member.unwrap_or(r as usize % fam.m()));
            let config = SearchConfig {
                budget: a.budget,
                tilt_budget: a.tilt_budget,
                initial_temperature: a.temperature,
                seed: run_seed,
            };
            counterexample_search(fam, params, &init, &config).map(|o| (run_seed, o))
        },
        |restart, out| {
            let (run_seed, outcome) = out?;
            for e in &outcome.trace {
                emit_line(&TraceLine {
                    kind: "trace",
                    seed: run_seed,
                    restart,
                    iteration: e.iteration,
                    score: e.score,
                    far_count: e.far_count,
                    entropy: e.entropy,
                })?;
            }
            let candidate = outcome.report.verdict == Verdict::CounterexampleCandidate;
            tally.add(outcome.report.verdict);
            emit_line(&ResultLine {
                kind: "result",
                seed: run_seed,
                restart,
                report: &outcome.report,
                best_score: outcome.best_score,
                support_size: outcome.best.support_size(),
                best: candidate.then(|| outcome.best.to_json()),
            })?;
            Ok(true)
        },
    )?;
    emit_line(&tally.summary(seed, a.restarts))?;
    Ok(if tally.candidates > 0 { Status::Violation } else { Status::Ok })
}

#[derive(Serialize)]
struct RectReport {
    projection: ProjectionReport,
    #[serde(skip_serializing_if = "Option::is_none")]
    corruption: Option<RectangleCorruption>,
}

#[derive(Serialize)]
struct ChainViolation {
    kind: &'static str,
    seed: u64,
    trial: u64,
    rectangle: Rectangle,
    subspace: Subspace,
    check: larclab::commlab::ChainCheck,
}

#[derive(Serialize)]
struct ChainSummary {
    kind: &'static str,
    seed: u64,
    n: usize,
    trials: u64,
    /// Instances with collision below the threshold.
    applied: u64,
    violations: u64,
    /// Smallest `max(d_A, d_B)` over applied instances.
    #[serde(skip_serializing_if = "Option::is_none")]
    min_far_distance: Option<String>,
}

fn rect(a: &RectArgs, max_n: usize) -> Result<Status> {
    let alpha = rational_arg("alpha", &a.alpha)?;
    if a.chain {
        return chain(a, &alpha, max_n);
    }
    let fam = read_family(a.design.as_ref().context("--design is required with --rect and --search")?)?;
    require_n(fam.n(), max_n.min(MAX_SET_N), "rect")?;
    if let Some(p) = &a.rect {
        let r: Rectangle = read_json(p)?;
        let projection = rectangle_analysis(&r, &fam, &alpha)?;
        let corruption = match &a.eps {
            Some(e) => {
                let nu = NuDistribution::new(&fam)?;
                let cost = a.cost.expect("clap requires --cost with --eps");
                Some(corruption_rectangle_check(&r, &nu, &rational_arg("eps", e)?, cost)?)
            }
            None => None,
        };
        emit_document(&RectReport { projection, corruption }, None)?;
        return Ok(Status::Ok);
    }
    let seed = require_seed(a.seed, "rect --search")?;
    let f = union_function(&fam)?;
    emit_document(&mono_rectangle_search(&f, a.budget, seed)?, None)?;
    Ok(Status::Ok)
}

/// A random instance for the chain check: `V` of codimension 1 to 4, and
/// sides drawn inside random unions of cosets of `V` at a random density,
/// so that small collision probabilities actually occur.
pub fn chain_instance<R: Rng + ?Sized>(n: usize, r: &mut R) -> larclab::Result<(Rectangle, Subspace)> {
    let codim = r.gen_range(1..=4.min(n));
    let v = random_subspace(n, n - codim, r);
    let masks = v.to_masks()?;
    let a = side(n, &masks, r)?;
    let b = side(n, &masks, r)?;
    Ok((Rectangle::new(a, b)?, v))
}

fn side<R: Rng + ?Sized>(n: usize, v: &MaskSubspace, r: &mut R) -> larclab::Result<PointSet> {
    let labels = 1u64 << v.codim();
    let chosen: Vec<bool> = (0..labels).map(|_| r.gen::<bool>()).collect();
    let density = [1.0, 0.5, 0.25][r.gen_range(0..3)];
    let mut s = PointSet::empty(n)?;
    for x in 0..1u64 << n {
        if chosen[v.label(x) as usize] && r.gen_bool(density) {
            s.insert(x);
        }
    }
    if s.is_empty() {
        s.insert(r.gen_range(0..1u64 << n));
    }
    Ok(s)
}

fn chain(a: &RectArgs, alpha: &Rational, max_n: usize) -> Result<Status> {
    let seed = require_seed(a.seed, "rect --chain")?;
    require_n(a.n, max_n.min(MAX_SET_N), "rect --chain")?;
    if a.n == 0 {
        bail!("--n must be at least 1");
    }
    let mut applied = 0;
    let mut violations = 0;
    let mut min_far: Option<Rational> = None;
    par_trials(
        a.trials,
        |t| -> larclab::Result<_> {
            let (r, v) = chain_instance(a.n, &mut rng::stream(seed, t))?;
            let check = appendix_chain_check(&r, &v.to_masks()?, alpha)?;
            Ok((r, v, check))
        },
        |t, out| {
            let (r, v, check) = out?;
            if check.applies {
                applied += 1;
                let far = rational_max(&check.d_a, &check.d_b);
                if min_far.as_ref().is_none_or(|m| &far < m) {
                    min_far = Some(far);
                }
            }
            if !check.holds {
                violations += 1;
                emit_line(&ChainViolation {
                    kind: "violation",
                    seed,
                    trial: t,
                    rectangle: r,
                    subspace: v,
                    check,
                })?;
            }
            Ok(true)
        },
    )?;
    emit_line(&ChainSummary {
        kind: "summary",
        seed,
        n: a.n,
        trials: a.trials,
        applied,
        violations,
        min_far_distance: min_far.map(|m| m.to_string()),
    })?;
    Ok(if violations > 0 { Status::Violation } else { Status::Ok })
}

fn rational_max(a: &Rational, b: &Rational) -> Rational {
    if a >= b {
        a.clone()
    } else {
        b.clone()
    }
}
