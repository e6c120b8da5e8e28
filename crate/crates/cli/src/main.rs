//! `larclab`: command-line front end for the union-of-subspaces laboratory.

mod commands;
mod io;
mod report;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use larclab::fourier::DEFAULT_MAX_N;

#[derive(Parser, Debug)]
#[command(name = "larclab", version, about = "Union-of-subspaces Boolean function laboratory")]
pub struct Cli {
    /// Worker threads for parallel scans (default: one per core).
    #[arg(long, global = true)]
    pub threads: Option<usize>,

    /// Largest n for which dense truth tables are built.
    #[arg(long, global = true, env = "LARCLAB_MAX_N", default_value_t = DEFAULT_MAX_N)]
    pub max_n: usize,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Sample a family of random subspaces.
    GenDesign(GenDesignArgs),
    /// Certify the dual-design parameters of a family.
    VerifyDesign(VerifyDesignArgs),
    /// Exact spectral measures, optionally with a sampled sparse approximator.
    Fourier(FourierArgs),
    /// Corruption scan of the union function under its hard distribution.
    PdtLb(PdtLbArgs),
    /// Evaluate or search the entropy-loss conjecture.
    Conjecture(ConjectureArgs),
    /// Rectangle analysis of the XOR-lifted union function.
    Rect(RectArgs),
    /// Family summaries and seeded experiment reports.
    Report(ReportArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Preset {
    Paper,
}

#[derive(Args, Debug)]
pub struct GenDesignArgs {
    #[arg(long)]
    pub n: usize,
    #[arg(long, conflicts_with = "preset")]
    pub dim: Option<usize>,
    #[arg(long, conflicts_with = "preset")]
    pub m: Option<usize>,
    /// `paper`: dim = floor(2n/5), m = 100n.
    #[arg(long, value_enum)]
    pub preset: Option<Preset>,
    /// Redraw each member until it meets all earlier ones only at zero.
    #[arg(long)]
    pub pairwise_trivial: bool,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum CertMode {
    Exhaustive,
    MonteCarlo,
}

#[derive(Args, Debug)]
pub struct VerifyDesignArgs {
    /// Family JSON.
    #[arg(long = "in", alias = "design")]
    pub input: PathBuf,
    #[arg(long)]
    pub s: usize,
    /// Claimed h; required for Monte Carlo, optional for the exhaustive scan.
    #[arg(long)]
    pub h: Option<usize>,
    #[arg(long, value_enum, default_value = "exhaustive")]
    pub mode: CertMode,
    #[arg(long)]
    pub trials: Option<u64>,
    #[arg(long)]
    pub seed: Option<u64>,
    /// Largest number of subspaces an exhaustive scan may visit.
    #[arg(long, default_value_t = larclab::designs::DEFAULT_ENUMERATION_CAP)]
    pub cap: u64,
}

#[derive(Args, Debug)]
#[group(skip)]
#[command(group(clap::ArgGroup::new("source").required(true).multiple(false)))]
pub struct FourierArgs {
    /// Truth table JSON `{n, scale_pow2, values}`.
    #[arg(long, group = "source")]
    pub function: Option<PathBuf>,
    /// Family JSON; analyzes the indicator of the union of its members.
    #[arg(long, group = "source")]
    pub from_design: Option<PathBuf>,
    /// Subspace JSON; analyzes its indicator.
    #[arg(long, group = "source")]
    pub subspace: Option<PathBuf>,
    #[arg(long, default_value = "0")]
    pub eps: String,
    /// Target sup distance of the sparse approximator; enables sampling.
    #[arg(long)]
    pub delta: Option<String>,
    #[arg(long)]
    pub seed: Option<u64>,
    /// Also write the exact spectrum to this file.
    #[arg(long)]
    pub spectrum_out: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct PdtLbArgs {
    #[arg(long)]
    pub design: PathBuf,
    #[arg(long)]
    pub eps: String,
    #[arg(long, default_value_t = 1)]
    pub cmax: usize,
    #[arg(long, default_value_t = larclab::pdt::DEFAULT_SCAN_CAP)]
    pub cap: u64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Variant {
    /// More than k h far members, bound n - beta s.
    Design,
    /// At least m/3 far members, bound n - beta n.
    Random,
}

#[derive(Args, Debug)]
#[group(skip)]
#[command(group(clap::ArgGroup::new("mode").required(true).multiple(false)))]
pub struct ConjectureArgs {
    #[arg(long)]
    pub design: PathBuf,
    #[arg(long)]
    pub s: usize,
    /// Design parameter h; computed by an exhaustive scan when omitted.
    #[arg(long)]
    pub h: Option<usize>,
    /// Experimental knob: distance from uniform that counts as far.
    #[arg(long, default_value = "1/2")]
    pub alpha: String,
    /// Experimental knob: entropy-loss rate.
    #[arg(long, default_value_t = 0.1)]
    pub beta: f64,
    /// Experimental knob: far-count multiplier.
    #[arg(long, default_value = "1")]
    pub k: String,
    #[arg(long, value_enum, default_value = "design")]
    pub variant: Variant,
    /// Distribution JSON `{n, points, masses}`.
    #[arg(long, group = "mode")]
    pub dist: Option<PathBuf>,
    /// Simulated-annealing search for a counterexample candidate.
    #[arg(long, group = "mode")]
    pub search: bool,
    /// Uniform distributions on random affine subspaces of codimension <= s.
    #[arg(long, group = "mode")]
    pub affine_sanity: bool,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long, default_value_t = 50)]
    pub trials: u64,
    #[arg(long, default_value_t = 20_000)]
    pub budget: u64,
    #[arg(long, default_value_t = 0)]
    pub tilt_budget: u64,
    #[arg(long, default_value_t = 1.0)]
    pub temperature: f64,
    #[arg(long, default_value_t = 1)]
    pub restarts: u64,
    /// Start the search uniform on member j (0-based).
    #[arg(long)]
    pub init_member: Option<usize>,
    #[arg(long, default_value_t = larclab::designs::DEFAULT_ENUMERATION_CAP)]
    pub cap: u64,
}

#[derive(Args, Debug)]
#[group(skip)]
#[command(group(clap::ArgGroup::new("mode").required(true).multiple(false)))]
pub struct RectArgs {
    /// Family JSON; required with --rect and --search.
    #[arg(long)]
    pub design: Option<PathBuf>,
    /// Rectangle JSON `{n, A, B}`.
    #[arg(long, group = "mode")]
    pub rect: Option<PathBuf>,
    /// Greedy search for a large monochromatic rectangle.
    #[arg(long, group = "mode")]
    pub search: bool,
    /// Check the collision-to-distance chain on random instances.
    #[arg(long, group = "mode")]
    pub chain: bool,
    #[arg(long, default_value = "1/2")]
    pub alpha: String,
    /// With --rect: also check the corruption conditions at this epsilon.
    #[arg(long, requires = "cost")]
    pub eps: Option<String>,
    /// Protocol cost for the rectangle size condition.
    #[arg(long)]
    pub cost: Option<usize>,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long, default_value_t = 4096)]
    pub budget: u64,
    /// Ambient dimension for --chain.
    #[arg(long, default_value_t = 10)]
    pub n: usize,
    #[arg(long, default_value_t = 10_000)]
    pub trials: u64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Experiment {
    WhtExactness,
    SubspaceSpectra,
    UnionNorm,
    RankIdentity,
    Intersection,
    AffineDichotomy,
    CertifyCoherence,
    Hitting,
    PdtDepths,
}

#[derive(Args, Debug)]
#[group(skip)]
#[command(group(clap::ArgGroup::new("what").required(true).multiple(false)))]
pub struct ReportArgs {
    /// Family JSON to summarize.
    #[arg(long, group = "what")]
    pub design: Option<PathBuf>,
    /// With --design: certify at this s by exhaustive scan and derive the threshold.
    #[arg(long)]
    pub s: Option<usize>,
    #[arg(long, group = "what", value_enum)]
    pub experiment: Option<Experiment>,
    #[arg(long)]
    pub seed: Option<u64>,
    /// Number of trials; each experiment has its own default.
    #[arg(long)]
    pub trials: Option<u64>,
    #[arg(long, default_value_t = larclab::designs::DEFAULT_ENUMERATION_CAP)]
    pub cap: u64,
}

/// What a successful run found.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Status {
    Ok,
    /// A certified violation or a counterexample candidate.
    Violation,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    if let Some(t) = cli.threads {
        if t == 0 {
            eprintln!("error: --threads must be at least 1");
            return ExitCode::from(1);
        }
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(t).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(1);
        }
    }
    match commands::run(&cli) {
        Ok(Status::Ok) => ExitCode::SUCCESS,
        Ok(Status::Violation) => ExitCode::from(2),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
