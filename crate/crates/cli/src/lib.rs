//! `qwalk` command-line front end.
//!
//! Each subcommand resolves its flags into a [`RunRequest`], runs it, and
//! writes CSV tables plus a `manifest.json` into the `--out` directory.
//! `qwalk replay --manifest DIR/manifest.json --out OTHER` reruns a stored
//! request and reproduces the same CSV bytes.

pub mod angle;
pub mod error;
pub mod manifest;
pub mod request;
pub mod table;

use std::collections::BTreeSet;
use std::ffi::OsString;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use qwalk_core::ensemble::{resolve_workers, DEFAULT_REALIZATIONS};
use qwalk_core::otoc::Normalization;
use qwalk_core::{AngleDistribution, Axis, AxisPair, DisorderKind, DisorderSpec, InitialSpinor};

pub use crate::error::{CliError, Result};
pub use crate::manifest::{Manifest, MANIFEST_FILE};
pub use crate::request::{Emission, RunOutput, RunRequest, WalkRequest};

#[derive(Debug, Parser)]
#[command(name = "qwalk", version, about = "Scrambling diagnostics for discrete-time quantum walks")]
pub struct Cli {
    /// Worker threads for disorder ensembles [env: QWALK_WORKERS]
    #[arg(long, global = true)]
    pub workers: Option<usize>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Continuum dispersion ω(k), group velocity, v_B and ζ(θ)
    Dispersion(DispersionArgs),
    /// Position distribution and inverse participation ratio
    Evolve(EvolveArgs),
    /// Out-of-time-ordered correlators C_{μν}(l, t)
    Otoc(OtocArgs),
    /// Gram matrix, Krylov norms, amplitudes and K-complexity
    Krylov(KrylovArgs),
    /// Rerun the request stored in a manifest
    Replay(ReplayArgs),
}

#[derive(Debug, Args)]
pub struct DispersionArgs {
    /// Coin angle, radians or a multiple of pi ("0.25pi")
    #[arg(long, value_parser = angle::parse_angle, allow_hyphen_values = true)]
    pub theta: f64,
    #[arg(long, default_value_t = 2001)]
    pub k_points: usize,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum DisorderArg {
    Clean,
    Spatial,
    Temporal,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum DistributionArg {
    Uniform,
    Binary,
}

#[derive(Debug, Args)]
pub struct WalkArgs {
    /// Clean or mean coin angle θ0
    #[arg(long, value_parser = angle::parse_angle, allow_hyphen_values = true)]
    pub theta: f64,
    #[arg(long, default_value_t = 100)]
    pub sites: usize,
    #[arg(long, default_value_t = 50)]
    pub steps: usize,
    #[arg(long, value_enum, default_value_t = DisorderArg::Clean)]
    pub disorder: DisorderArg,
    /// Disorder strength W in [0, pi]; ignored for clean walks
    #[arg(long, value_parser = angle::parse_angle, default_value = "0.5pi")]
    pub strength: f64,
    #[arg(long, value_enum, default_value_t = DistributionArg::Uniform)]
    pub distribution: DistributionArg,
    /// Ensemble size [default: 1 for clean, 100 otherwise]
    #[arg(long)]
    pub realizations: Option<usize>,
    /// Base seed; realization r uses a seed derived from (seed, r)
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long)]
    pub out: PathBuf,
}

impl WalkArgs {
    fn resolve(&self) -> Result<WalkRequest> {
        let distribution = match self.distribution {
            DistributionArg::Uniform => AngleDistribution::UniformInterval,
            DistributionArg::Binary => AngleDistribution::Binary,
        };
        let disorder = match self.disorder {
            DisorderArg::Clean => DisorderSpec::clean(self.theta),
            DisorderArg::Spatial => DisorderSpec::spatial(self.theta, self.strength).with_distribution(distribution),
            DisorderArg::Temporal => DisorderSpec::temporal(self.theta, self.strength).with_distribution(distribution),
        };
        let default_n = if disorder.kind == DisorderKind::Clean { 1 } else { DEFAULT_REALIZATIONS };
        let realizations = self.realizations.unwrap_or(default_n);
        if realizations == 0 {
            return Err(CliError::Usage("--realizations must be at least 1".into()));
        }
        Ok(WalkRequest { sites: self.sites, steps: self.steps, disorder, realizations, base_seed: self.seed })
    }
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum InitialArg {
    Symmetric,
    Up,
    Down,
    Plus,
    Minus,
}

#[derive(Debug, Args)]
pub struct EvolveArgs {
    #[command(flatten)]
    pub walk: WalkArgs,
    /// Coin state of the walker, localized at the origin
    #[arg(long, value_enum, default_value_t = InitialArg::Symmetric)]
    pub initial: InitialArg,
}

#[derive(Debug, Args)]
pub struct OtocArgs {
    #[command(flatten)]
    pub walk: WalkArgs,
    /// Comma-separated (μ, ν) pairs such as "xx,zz,xy", or "all"
    #[arg(long, default_value = "xx")]
    pub pairs: String,
    /// inverse-dim (1/2L), half or unit
    #[arg(long, default_value = "inverse-dim")]
    pub norm: String,
    /// Front threshold as a fraction of the grid maximum
    #[arg(long, default_value_t = 0.1)]
    pub front_threshold: f64,
}

#[derive(Debug, Args)]
pub struct KrylovArgs {
    #[command(flatten)]
    pub walk: WalkArgs,
    /// Pauli axis of the initial operator
    #[arg(long, default_value = "x")]
    pub mu: String,
    /// Centered site label of the initial operator
    #[arg(long, default_value_t = 0, allow_hyphen_values = true)]
    pub site: i64,
    /// Comma-separated outputs: gram, norms, phi, k
    #[arg(long, default_value = "k", value_delimiter = ',')]
    pub emit: Vec<Emission>,
    /// Rank tolerance on ‖A_n‖²
    #[arg(long, default_value_t = qwalk_core::krylov::DEFAULT_RANK_EPSILON)]
    pub epsilon: f64,
}

#[derive(Debug, Args)]
pub struct ReplayArgs {
    #[arg(long)]
    pub manifest: PathBuf,
    #[arg(long)]
    pub out: PathBuf,
}

fn usage(e: impl std::fmt::Display) -> CliError {
    CliError::Usage(e.to_string())
}

pub fn parse_pairs(text: &str) -> Result<Vec<AxisPair>> {
    if text.trim().eq_ignore_ascii_case("all") {
        return Ok(AxisPair::all());
    }
    let mut pairs = Vec::new();
    for part in text.split(',').filter(|p| !p.trim().is_empty()) {
        let pair: AxisPair = part.parse().map_err(usage)?;
        if !pairs.contains(&pair) {
            pairs.push(pair);
        }
    }
    if pairs.is_empty() {
        return Err(CliError::Usage("--pairs needs at least one pair".into()));
    }
    Ok(pairs)
}

fn initial_spinor(arg: InitialArg) -> InitialSpinor {
    match arg {
        InitialArg::Symmetric => InitialSpinor::Symmetric,
        InitialArg::Up => InitialSpinor::Up,
        InitialArg::Down => InitialSpinor::Down,
        InitialArg::Plus => InitialSpinor::Plus,
        InitialArg::Minus => InitialSpinor::Minus,
    }
}

/// Resolve a subcommand into its request and output directory.
pub fn resolve(command: &Command) -> Result<(RunRequest, PathBuf)> {
    Ok(match command {
        Command::Dispersion(a) => {
            if a.k_points < 2 {
                return Err(CliError::Usage("--k-points must be at least 2".into()));
            }
            (RunRequest::Dispersion { theta: a.theta, k_points: a.k_points }, a.out.clone())
        }
        Command::Evolve(a) => {
            (RunRequest::Evolve { walk: a.walk.resolve()?, initial: initial_spinor(a.initial) }, a.walk.out.clone())
        }
        Command::Otoc(a) => {
            if !(a.front_threshold > 0.0 && a.front_threshold < 1.0) {
                return Err(CliError::Usage("--front-threshold must lie in (0, 1)".into()));
            }
            let normalization: Normalization = a.norm.parse().map_err(usage)?;
            let request = RunRequest::Otoc {
                walk: a.walk.resolve()?,
                pairs: parse_pairs(&a.pairs)?,
                normalization,
                front_threshold: a.front_threshold,
            };
            (request, a.walk.out.clone())
        }
        Command::Krylov(a) => {
            let mu: Axis = a.mu.parse().map_err(usage)?;
            let walk = a.walk.resolve()?;
            let half = walk.sites as i64 / 2;
            if !(-half..half).contains(&a.site) {
                return Err(CliError::Usage(format!("--site must lie in [{}, {}]", -half, half - 1)));
            }
            if !(a.epsilon > 0.0) {
                return Err(CliError::Usage("--epsilon must be positive".into()));
            }
            let emit: BTreeSet<Emission> = a.emit.iter().copied().collect();
            (RunRequest::Krylov { walk, mu, site: a.site, emit, epsilon: a.epsilon }, a.walk.out.clone())
        }
        Command::Replay(a) => (Manifest::load(&a.manifest)?.request, a.out.clone()),
    })
}

/// What a completed run wrote.
#[derive(Clone, Debug)]
pub struct RunReport {
    pub out_dir: PathBuf,
    pub manifest: Manifest,
}

pub fn run(cli: &Cli) -> Result<RunReport> {
    let (request, out_dir) = resolve(&cli.command)?;
    let workers = resolve_workers(cli.workers);
    log::info!("running {} with {workers} worker(s)", request.command());
    let manifest = manifest::execute_and_write(request, workers, &out_dir)?;
    Ok(RunReport { out_dir, manifest })
}

/// Parse `args` (program name first) and run; clap errors come back as usage errors.
pub fn run_args<I, T>(args: I) -> Result<RunReport>
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = Cli::try_parse_from(args).map_err(usage)?;
    run(&cli)
}

/// Binary entry point; returns the process exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let _ = env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).try_init();
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return e.exit_code();
        }
    };
    match run(&cli) {
        Ok(report) => {
            for name in &report.manifest.outputs {
                println!("{}", report.out_dir.join(name).display());
            }
            0
        }
        Err(e) => {
            eprintln!("error: {e}");
            if e.exit_code() == 3 {
                eprintln!("hint: a looser --epsilon such as 1e-8 truncates the Krylov basis instead");
            }
            e.exit_code()
        }
    }
}
