use num_bigint::BigUint;
use num_traits::{ToPrimitive, Zero};
use rand::Rng;
use serde::Serialize;

use super::projection::{coset_pushforward, l1_to_uniform};
use crate::designs::SubspaceFamily;
use crate::distribution::CubeDistribution;
use crate::error::{Error, Result};
use crate::f2::{AffineSubspace, MaskSubspace};
use crate::rational::{self, Rational};
use crate::rng;

/// Entropy slack used when comparing against the bound, in bits.
pub const ENTROPY_SLACK: f64 = 1e-9;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ConjectureParams {
    #[serde(with = "rational")]
    pub alpha: Rational,
    pub beta: f64,
    #[serde(with = "rational")]
    pub k: Rational,
    pub s: usize,
    pub h: usize,
}

impl ConjectureParams {
    pub fn new(alpha: Rational, beta: f64, k: Rational, s: usize, h: usize) -> Result<Self> {
        if alpha <= Rational::zero() || alpha >= rational::int(1) {
            return Err(Error::InvalidParameter(format!("alpha must lie in (0, 1), got {alpha}")));
        }
        if !(beta > 0.0 && beta.is_finite()) {
            return Err(Error::InvalidParameter(format!("beta must be positive, got {beta}")));
        }
        if k < rational::int(1) {
            return Err(Error::InvalidParameter(format!("k must be at least 1, got {k}")));
        }
        Ok(Self { alpha, beta, k, s, h })
    }

    /// Smallest far count exceeding `k h`.
    pub fn required_far(&self) -> usize {
        let kh = &self.k * rational::int(self.h as u64);
        (kh.floor().to_integer() + 1u32).to_usize().unwrap_or(usize::MAX)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "SCREAMING-KEBAB-CASE")]
pub enum Verdict {
    /// Too few far members: the hypothesis does not apply.
    Vacuous,
    /// Hypothesis applies and the entropy bound holds.
    Consistent,
    /// Hypothesis applies and the entropy exceeds the bound, for these
    /// concrete parameters only.
    CounterexampleCandidate,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ConjectureReport {
    pub n: usize,
    pub far_count: usize,
    pub required_far: usize,
    pub entropy: f64,
    pub bound: f64,
    /// `bound - entropy`; negative margins with the hypothesis in force are candidates.
    pub margin: f64,
    pub consistent: bool,
    pub verdict: Verdict,
}

/// `#{i : ‖B_i(X) - U‖₁ >= alpha}`, exactly.
pub fn far_count(x: &CubeDistribution, members: &[MaskSubspace], alpha: &Rational) -> Result<usize> {
    let mut c = 0;
    for v in members {
        if &l1_to_uniform(&coset_pushforward(x, v)?) >= alpha {
            c += 1;
        }
    }
    Ok(c)
}

fn verdict(far: usize, required: usize, entropy: f64, bound: f64) -> (bool, Verdict) {
    if far < required {
        (true, Verdict::Vacuous)
    } else if entropy <= bound + ENTROPY_SLACK {
        (true, Verdict::Consistent)
    } else {
        (false, Verdict::CounterexampleCandidate)
    }
}

fn report(n: usize, far: usize, required: usize, entropy: f64, bound: f64) -> ConjectureReport {
    let (consistent, verdict) = verdict(far, required, entropy, bound);
    ConjectureReport {
        n,
        far_count: far,
        required_far: required,
        entropy,
        bound,
        margin: bound - entropy,
        consistent,
        verdict,
    }
}

/// Evaluates the entropy-loss statement for one `(family, X)` pair: if more
/// than `k h` coset maps push `X` at least `alpha` away from uniform, is
/// `H(X) <= n - beta s`?
pub fn conjecture_check(
    x: &CubeDistribution,
    fam: &SubspaceFamily,
    params: &ConjectureParams,
) -> Result<ConjectureReport> {
    check_dims(x, fam)?;
    let far = far_count(x, &fam.mask_members()?, &params.alpha)?;
    let n = fam.n();
    Ok(report(n, far, params.required_far(), x.entropy(), n as f64 - params.beta * params.s as f64))
}

/// The random-subspace specialization: at least `m/3` far members and the
/// bound `n - beta n`.
pub fn conjecture2_check(
    x: &CubeDistribution,
    fam: &SubspaceFamily,
    alpha: &Rational,
    beta: f64,
) -> Result<ConjectureReport> {
    check_dims(x, fam)?;
    let far = far_count(x, &fam.mask_members()?, alpha)?;
    let n = fam.n();
    let required = fam.m().div_ceil(3);
    Ok(report(n, far, required, x.entropy(), n as f64 - beta * n as f64))
}

fn check_dims(x: &CubeDistribution, fam: &SubspaceFamily) -> Result<()> {
    if x.n() != fam.n() {
        return Err(Error::DimensionMismatch {
            expected: fam.n(),
            found: x.n(),
        });
    }
    Ok(())
}

/// Starting point of a search.
#[derive(Clone, Debug)]
pub enum SearchInit {
    /// Uniform over member `j`.
    Member(usize),
    /// Uniform over an affine subspace.
    Affine(AffineSubspace),
    /// Uniform over the listed points.
    Support(Vec<u64>),
}

#[derive(Clone, Debug)]
pub struct SearchConfig {
    pub budget: u64,
    /// Extra iterations that perturb integer weights on the final support.
    pub tilt_budget: u64,
    pub initial_temperature: f64,
    pub seed: u64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TraceEntry {
    pub iteration: u64,
    pub score: f64,
    pub far_count: usize,
    pub entropy: f64,
}

#[derive(Clone, Debug)]
pub struct SearchOutcome {
    pub best: CubeDistribution,
    pub report: ConjectureReport,
    pub best_score: f64,
    /// Every improvement of the best score, in order.
    pub trace: Vec<TraceEntry>,
}

/// Incrementally maintained state: integer weights on a support, and per
/// member the weight of every coset label.
struct State<'a> {
    members: &'a [MaskSubspace],
    weights: Vec<u64>,
    support: Vec<u64>,
    position: Vec<usize>,
    labels: Vec<Vec<u64>>,
    total: u64,
}

const ABSENT: usize = usize::MAX;

impl<'a> State<'a> {
    fn new(n: usize, members: &'a [MaskSubspace], points: &[u64]) -> Self {
        let mut s = Self {
            members,
            weights: vec![0; 1 << n],
            support: Vec::new(),
            position: vec![ABSENT; 1 << n],
            labels: members.iter().map(|v| vec![0; 1 << v.codim()]).collect(),
            total: 0,
        };
        for &p in points {
            if s.weights[p as usize] == 0 {
                s.add(p, 1);
            }
        }
        s
    }

    fn add(&mut self, p: u64, w: u64) {
        if self.weights[p as usize] == 0 {
            self.position[p as usize] = self.support.len();
            self.support.push(p);
        }
        self.weights[p as usize] += w;
        self.total += w;
        for (v, l) in self.members.iter().zip(self.labels.iter_mut()) {
            l[v.label(p) as usize] += w;
        }
    }

    fn take(&mut self, p: u64, w: u64) {
        self.weights[p as usize] -= w;
        self.total -= w;
        for (v, l) in self.members.iter().zip(self.labels.iter_mut()) {
            l[v.label(p) as usize] -= w;
        }
        if self.weights[p as usize] == 0 {
            let i = self.position[p as usize];
            let last = self.support.pop().expect("nonempty");
            if last != p {
                self.support[i] = last;
                self.position[last as usize] = i;
            }
            self.position[p as usize] = ABSENT;
        }
    }

    /// `far_count` against `alpha = a / b`: `sum |c 2^k - T| >= alpha T 2^k`.
    fn far_count(&self, a: u128, b: u128) -> usize {
        let t = self.total as u128;
        self.labels
            .iter()
            .filter(|l| {
                let k = l.len() as u128;
                let num: u128 = l.iter().map(|&c| (c as u128 * k).abs_diff(t)).sum();
                num * b >= a * t * k
            })
            .count()
    }

    fn entropy(&self) -> f64 {
        let t = self.total as f64;
        let uniform = self.support.iter().all(|&p| self.weights[p as usize] == self.weights[self.support[0] as usize]);
        if uniform {
            return (self.support.len() as f64).log2();
        }
        self.support
            .iter()
            .map(|&p| {
                let q = self.weights[p as usize] as f64 / t;
                -q * q.log2()
            })
            .sum::<f64>()
            .max(0.0)
    }

    fn distribution(&self, n: usize) -> Result<CubeDistribution> {
        let mut pts = self.support.clone();
        pts.sort_unstable();
        CubeDistribution::from_weights(n, pts.into_iter().map(|p| (p, BigUint::from(self.weights[p as usize]))))
    }
}

/// Largest `n` for dense searches.
pub const SEARCH_MAX_N: usize = 16;

/// Simulated annealing for a distribution with high entropy whose coset
/// pushforwards are far from uniform for more than `k h` members.
///
/// The main phase keeps `X` uniform on a support set and moves by adding,
/// removing or swapping one point. The score is the entropy when the
/// hypothesis holds and is penalized by `n` bits per missing far member
/// otherwise. An optional tilt phase then perturbs integer weights. The run
/// is a function of the seed alone, and it only ever reports candidates.
pub fn counterexample_search(
    fam: &SubspaceFamily,
    params: &ConjectureParams,
    init: &SearchInit,
    config: &SearchConfig,
) -> Result<SearchOutcome> {
    let n = fam.n();
    if n > SEARCH_MAX_N {
        return Err(crate::error::cap_exceeded(format!("dense search over {n} variables"), n, SEARCH_MAX_N));
    }
    let members = fam.mask_members()?;
    let start: Vec<u64> = match init {
        SearchInit::Member(j) => members
            .get(*j)
            .ok_or_else(|| Error::InvalidParameter(format!("no member {j}")))?
            .elements()?,
        SearchInit::Affine(w) => {
            if w.ambient_dim() != n {
                return Err(Error::DimensionMismatch { expected: n, found: w.ambient_dim() });
            }
            w.elements()?.map(|v| v.to_mask().expect("n <= 16")).collect()
        }
        SearchInit::Support(pts) => pts.clone(),
    };
    if start.is_empty() || start.iter().any(|&p| p >> n != 0) {
        return Err(Error::InvalidParameter("initial support must be a nonempty subset of the cube".into()));
    }
    let a = params.alpha.numer().to_u128().ok_or_else(|| Error::Overflow("alpha".into()))?;
    let b = params.alpha.denom().to_u128().ok_or_else(|| Error::Overflow("alpha".into()))?;
    let required = params.required_far();
    let score_of = |far: usize, h: f64| -> f64 {
        if far >= required {
            h
        } else {
            h - n as f64 * (required - far) as f64
        }
    };

    let mut state = State::new(n, &members, &start);
    let mut rng = rng::seeded(config.seed);
    let mut far = state.far_count(a, b);
    let mut ent = state.entropy();
    let mut score = score_of(far, ent);
    let mut best = (score, state.distribution(n)?);
    let mut trace = vec![TraceEntry {
        iteration: 0,
        score,
        far_count: far,
        entropy: ent,
    }];
    let cube = 1u64 << n;
    let total_iters = config.budget + config.tilt_budget;

    for it in 0..total_iters {
        let tilting = it >= config.budget;
        let temperature =
            config.initial_temperature * (1.0 - it as f64 / total_iters as f64).max(1e-3);
        // proposal, applied in place, with its undo
        let undo: Vec<(u64, i64)> = if tilting {
            let p = state.support[rng.gen_range(0..state.support.len())];
            if rng.gen::<bool>() || state.weights[p as usize] == 1 {
                state.add(p, 1);
                vec![(p, -1)]
            } else {
                state.take(p, 1);
                vec![(p, 1)]
            }
        } else {
            match rng.gen_range(0..3u8) {
                0 if (state.support.len() as u64) < cube => {
                    let p = loop {
                        let p = rng.gen_range(0..cube);
                        if state.weights[p as usize] == 0 {
                            break p;
                        }
                    };
                    state.add(p, 1);
                    vec![(p, -1)]
                }
                1 if state.support.len() > 1 => {
                    let p = state.support[rng.gen_range(0..state.support.len())];
                    let w = state.weights[p as usize];
                    state.take(p, w);
                    vec![(p, w as i64)]
                }
                _ if (state.support.len() as u64) < cube => {
                    let out = state.support[rng.gen_range(0..state.support.len())];
                    let p = loop {
                        let p = rng.gen_range(0..cube);
                        if state.weights[p as usize] == 0 {
                            break p;
                        }
                    };
                    let w = state.weights[out as usize];
                    state.add(p, w);
                    state.take(out, w);
                    vec![(out, w as i64), (p, -(w as i64))]
                }
                _ => Vec::new(),
            }
        };
        if undo.is_empty() {
            continue;
        }
        let new_far = state.far_count(a, b);
        let new_ent = state.entropy();
        let new_score = score_of(new_far, new_ent);
        let delta = new_score - score;
        if delta >= 0.0 || rng.gen::<f64>() < (delta / temperature).exp() {
            far = new_far;
            ent = new_ent;
            score = new_score;
            if score > best.0 {
                best = (score, state.distribution(n)?);
                trace.push(TraceEntry {
                    iteration: it + 1,
                    score,
                    far_count: far,
                    entropy: ent,
                });
            }
        } else {
            for &(p, w) in undo.iter().rev() {
                if w > 0 {
                    state.add(p, w as u64);
                } else {
                    state.take(p, (-w) as u64);
                }
            }
        }
    }
    let report = conjecture_check(&best.1, fam, params)?;
    Ok(SearchOutcome {
        best: best.1,
        report,
        best_score: best.0,
        trace,
    })
}

/// Exact thresholds for the conditional communication bound: `epsilon` must
/// lie below `(1 - alpha)^2 / 4 * (m - 2kh) / (8m) * (1 - gamma)`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CommThreshold {
    #[serde(with = "rational")]
    pub epsilon_bound: Rational,
    #[serde(with = "rational")]
    pub gamma: Rational,
    /// `m <= 2kh`, so no epsilon qualifies.
    pub vacuous: bool,
    /// `beta s + log2(1 - gamma)`, the claimed cost bound if the hypothesis holds.
    pub cost_bound: f64,
}

pub fn comm_threshold(fam: &SubspaceFamily, params: &ConjectureParams) -> Result<CommThreshold> {
    let stats = super::family_stats(fam)?;
    let m = rational::int(fam.m() as u64);
    let two_kh = rational::int(2) * &params.k * rational::int(params.h as u64);
    let one = rational::int(1);
    let gap = &one - &params.alpha;
    let factor = &m - &two_kh;
    let vacuous = factor <= Rational::zero() || stats.gamma >= one;
    let eps = if vacuous {
        Rational::zero()
    } else {
        &gap * &gap / rational::int(4) * factor / (rational::int(8) * &m) * (&one - &stats.gamma)
    };
    let cost = params.beta * params.s as f64 + rational::to_f64(&(&one - &stats.gamma)).log2();
    Ok(CommThreshold {
        epsilon_bound: eps,
        gamma: stats.gamma,
        vacuous,
        cost_bound: cost,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::designs::random_design;
    use crate::f2::{random_affine, Subspace};

    fn params(s: usize, h: usize) -> ConjectureParams {
        ConjectureParams::new(rational::ratio(1, 2), 0.1, rational::int(1), s, h).unwrap()
    }

    #[test]
    fn param_validation() {
        assert!(ConjectureParams::new(rational::int(1), 0.1, rational::int(1), 1, 1).is_err());
        assert!(ConjectureParams::new(rational::ratio(1, 2), 0.0, rational::int(1), 1, 1).is_err());
        assert!(ConjectureParams::new(rational::ratio(1, 2), 0.1, rational::ratio(1, 2), 1, 1).is_err());
        assert_eq!(params(1, 3).required_far(), 4);
        let p = ConjectureParams::new(rational::ratio(1, 2), 0.1, rational::ratio(3, 2), 1, 3).unwrap();
        assert_eq!(p.required_far(), 5);
    }

    #[test]
    fn uniform_cube_is_vacuous() {
        let fam = random_design(8, 3, 10, 1).unwrap();
        let x = CubeDistribution::uniform_cube(8).unwrap();
        let r = conjecture_check(&x, &fam, &params(2, 1)).unwrap();
        assert_eq!(r.far_count, 0);
        assert_eq!(r.entropy, 8.0);
        assert!(r.consistent);
    }

    #[test]
    fn concentrated_on_member() {
        let fam = random_design(8, 3, 10, 2).unwrap();
        let v = fam.members()[0].to_masks().unwrap();
        let x = CubeDistribution::uniform_on(8, v.elements().unwrap()).unwrap();
        let r = conjecture_check(&x, &fam, &params(2, 1)).unwrap();
        assert!(r.far_count >= 1);
        assert!(r.entropy <= 3.0);
    }

    #[test]
    fn uniform_affine_has_exact_entropy() {
        let mut g = rng::seeded(3);
        let w = random_affine(8, 5, &mut g);
        let x = CubeDistribution::uniform_affine(&w).unwrap();
        let fam = SubspaceFamily::new(8, vec![Subspace::full(8)]).unwrap();
        let r = conjecture_check(&x, &fam, &params(3, 0)).unwrap();
        assert_eq!(r.entropy, 5.0);
    }

    #[test]
    fn search_budget_zero_returns_initial() {
        let fam = random_design(6, 2, 6, 5).unwrap();
        let cfg = SearchConfig { budget: 0, tilt_budget: 0, initial_temperature: 1.0, seed: 0 };
        let out = counterexample_search(&fam, &params(1, 1), &SearchInit::Member(0), &cfg).unwrap();
        assert_eq!(out.best.support_size(), 4);
        assert_eq!(out.trace.len(), 1);
        let direct = conjecture_check(&out.best, &fam, &params(1, 1)).unwrap();
        assert_eq!(direct, out.report);
    }

    #[test]
    fn search_is_reproducible_and_consistent_with_exact_check() {
        let fam = random_design(8, 3, 8, 7).unwrap();
        let cfg = SearchConfig { budget: 400, tilt_budget: 100, initial_temperature: 1.0, seed: 11 };
        let a = counterexample_search(&fam, &params(2, 1), &SearchInit::Member(1), &cfg).unwrap();
        let b = counterexample_search(&fam, &params(2, 1), &SearchInit::Member(1), &cfg).unwrap();
        assert_eq!(a.trace, b.trace);
        assert_eq!(a.best, b.best);
        let far = far_count(&a.best, &fam.mask_members().unwrap(), &rational::ratio(1, 2)).unwrap();
        assert_eq!(far, a.report.far_count);
    }
}
