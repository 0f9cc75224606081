//! Argument parsing, subcommand dispatch and report emission.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand};
use cohere::measures::{c_l1, c_rel_entropy};
use cohere::roof::{roof, roof_bounds_thm4};
use cohere::triangle::{g_values, theorem1_bounds, theorem2_dominance};
use cohere::upper::bound_report;
use cohere::{
    CoherenceError, CoherenceValue, DensityMatrix, Ensemble, GValues, Member, OptimizerConfig, RoofBounds,
    RoofMethod, RoofResult, Theorem2Sides, Tolerances, TriangleBounds,
};
use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::conjecture;
use crate::io::{self, InputError, PureEnsembleOut};
use crate::json;
use crate::suite::{self, SuiteOptions};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_VALIDATION: i32 = 2;
pub const EXIT_NUMERICAL: i32 = 3;
pub const EXIT_SUITE: i32 = 4;

#[derive(Debug, Parser)]
#[command(name = "cohere", version, about = "l1-norm coherence, its convex roof and their bounds")]
struct Cli {
    #[command(flatten)]
    opts: GlobalOpts,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
struct GlobalOpts {
    /// Base seed for every random draw.
    #[arg(long, env = "COHERE_SEED", default_value_t = 0, global = true)]
    seed: u64,
    /// Optimizer random starts per ensemble size.
    #[arg(long, global = true, value_parser = clap::value_parser!(u64).range(1..))]
    starts: Option<u64>,
    /// Largest ensemble size the optimizer tries (default d^2).
    #[arg(long, global = true, value_parser = clap::value_parser!(u64).range(1..))]
    max_ensemble: Option<u64>,
    /// Optimizer iteration cap per smoothing stage.
    #[arg(long, global = true, value_parser = clap::value_parser!(u64).range(1..))]
    max_iters: Option<u64>,
    /// Optimizer stall tolerance.
    #[arg(long, global = true, value_parser = positive)]
    tol: Option<f64>,
    #[arg(long, global = true, value_parser = positive)]
    tol_herm: Option<f64>,
    #[arg(long, global = true, value_parser = positive)]
    tol_trace: Option<f64>,
    #[arg(long, global = true, value_parser = positive)]
    tol_psd: Option<f64>,
    #[arg(long, global = true, value_parser = positive)]
    tol_eig: Option<f64>,
    #[arg(long, global = true, value_parser = positive)]
    tol_norm: Option<f64>,
    #[arg(long, global = true, value_parser = positive)]
    tol_weight: Option<f64>,
    #[arg(long, global = true, value_parser = positive)]
    tol_diag_zero: Option<f64>,
}

fn positive(s: &str) -> Result<f64, String> {
    match s.parse::<f64>() {
        Ok(x) if x.is_finite() && x > 0.0 => Ok(x),
        _ => Err(format!("expected a positive number, got {s:?}")),
    }
}

fn dimension(s: &str) -> Result<usize, String> {
    match s.parse::<usize>() {
        Ok(d) if (2..=16).contains(&d) => Ok(d),
        _ => Err(format!("dimensions must be integers in 2..=16, got {s:?}")),
    }
}

#[derive(Debug, Subcommand)]
enum Command {
    /// l1-norm and relative entropy of coherence of a state file.
    Measure { file: PathBuf },
    /// Decomposition bounds for an ensemble file.
    Triangle { file: PathBuf },
    /// Convex-roof l1-norm of a state file with its certificate.
    Roof {
        file: PathBuf,
        /// Skip the closed forms and run the optimizer.
        #[arg(long)]
        force_optimizer: bool,
    },
    /// Roof bounds for an ensemble of linearly independent pure states.
    RoofBounds {
        file: PathBuf,
        /// Row of the off-diagonal entry (1-based).
        #[arg(long, default_value_t = 1)]
        s: usize,
        /// Column of the off-diagonal entry (1-based).
        #[arg(long, default_value_t = 2)]
        t: usize,
    },
    /// Structural upper bounds for a state file.
    Upper { file: PathBuf },
    /// Randomized invariant battery; exits 4 on any violation.
    Suite {
        /// Cases per check (roof checks run a fraction of this).
        #[arg(long, default_value_t = 50, value_parser = clap::value_parser!(u64).range(1..))]
        cases: u64,
        /// Comma-separated dimensions.
        #[arg(long, value_delimiter = ',', default_values_t = vec![2, 3, 4], value_parser = dimension)]
        dims: Vec<usize>,
    },
    /// Gap between the numerical roof and C_l1 on random qutrits of rank 1 and 3.
    Conjecture {
        /// States per rank.
        #[arg(long, default_value_t = 10, value_parser = clap::value_parser!(u64).range(1..))]
        cases: u64,
    },
}

impl GlobalOpts {
    fn tolerances(&self) -> Tolerances {
        let mut t = Tolerances::default();
        let overrides = [
            (&mut t.herm, self.tol_herm),
            (&mut t.trace, self.tol_trace),
            (&mut t.psd, self.tol_psd),
            (&mut t.eig, self.tol_eig),
            (&mut t.norm, self.tol_norm),
            (&mut t.weight, self.tol_weight),
            (&mut t.diag_zero, self.tol_diag_zero),
        ];
        for (slot, value) in overrides {
            if let Some(v) = value {
                *slot = v;
            }
        }
        t
    }

    fn optimizer(&self) -> OptimizerConfig {
        let d = OptimizerConfig::default();
        OptimizerConfig {
            starts: self.starts.map_or(d.starts, |x| x as usize),
            max_ensemble: self.max_ensemble.map(|x| x as usize),
            seed: self.seed,
            max_iters: self.max_iters.map_or(d.max_iters, |x| x as usize),
            tol: self.tol.unwrap_or(d.tol),
        }
    }
}

#[derive(Serialize)]
struct Report<'a, T: Serialize> {
    command: &'a str,
    #[serde(skip_serializing_if = "Option::is_none")]
    input: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    input_digest: Option<String>,
    tolerances: Tolerances,
    seed: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    optimizer: Option<OptimizerConfig>,
    #[serde(skip_serializing_if = "Option::is_none")]
    wall_time_s: Option<f64>,
    result: &'a T,
}

#[derive(Serialize)]
struct ErrorReport<'a> {
    command: &'a str,
    error: ErrorBody,
}

#[derive(Serialize)]
struct ErrorBody {
    kind: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    location: Option<String>,
    message: String,
}

#[derive(Serialize)]
struct MeasureOut {
    dim: usize,
    c_l1: CoherenceValue,
    c_rel_entropy: CoherenceValue,
}

#[derive(Serialize)]
struct TriangleOut {
    theorem1_bounds: TriangleBounds,
    theorem2_dominance: Theorem2Sides,
    g_values: GValues,
}

#[derive(Serialize)]
struct RoofOut {
    value: f64,
    method: RoofMethod,
    c_l1: f64,
    residual: f64,
    starts: usize,
    seed: u64,
    ensemble_size: usize,
    best_start: usize,
    iterations: usize,
    certificate: PureEnsembleOut,
}

impl RoofOut {
    fn new(r: &RoofResult, rho: &DensityMatrix) -> Self {
        Self {
            value: r.value,
            method: r.method,
            c_l1: c_l1(rho).value,
            residual: r.residual,
            starts: r.starts,
            seed: r.seed,
            ensemble_size: r.ensemble_size,
            best_start: r.best_start,
            iterations: r.iterations,
            certificate: PureEnsembleOut::from(&r.certificate),
        }
    }
}

#[derive(Serialize)]
struct RoofBoundsOut {
    s: usize,
    t: usize,
    bounds: RoofBounds,
    /// Roof of the mixture by the same dispatch as `roof`.
    roof_value: f64,
    roof_method: RoofMethod,
}

enum Failure {
    Input(InputError),
    Domain(CoherenceError),
}

impl From<InputError> for Failure {
    fn from(e: InputError) -> Self {
        Failure::Input(e)
    }
}

impl From<CoherenceError> for Failure {
    fn from(e: CoherenceError) -> Self {
        Failure::Domain(e)
    }
}

impl Failure {
    fn exit_code(&self) -> i32 {
        match self {
            Failure::Input(InputError::Read { .. }) => EXIT_USAGE,
            Failure::Input(_) => EXIT_VALIDATION,
            Failure::Domain(e) if e.is_validation() => EXIT_VALIDATION,
            Failure::Domain(_) => EXIT_NUMERICAL,
        }
    }

    fn body(&self) -> ErrorBody {
        match self {
            Failure::Input(InputError::Read { .. }) => ErrorBody {
                kind: "usage",
                location: None,
                message: self.message(),
            },
            Failure::Input(InputError::Syntax { location, message }) => ErrorBody {
                kind: "syntax",
                location: Some(location.clone()),
                message: message.clone(),
            },
            Failure::Input(InputError::Validation { field, source }) => ErrorBody {
                kind: "validation",
                location: Some(field.clone()),
                message: source.to_string(),
            },
            Failure::Domain(e) => ErrorBody {
                kind: if e.is_validation() { "validation" } else { "numerical" },
                location: None,
                message: e.to_string(),
            },
        }
    }

    fn message(&self) -> String {
        match self {
            Failure::Input(e) => e.to_string(),
            Failure::Domain(e) => e.to_string(),
        }
    }
}

struct Input {
    path: String,
    text: String,
    digest: String,
}

fn load(path: &Path) -> Result<Input, InputError> {
    let (text, bytes) = io::read_input(path)?;
    Ok(Input {
        path: path.display().to_string(),
        text,
        digest: format!("{:x}", Sha256::digest(&bytes)),
    })
}

/// What a subcommand produced: a serialized result plus report metadata.
struct Outcome {
    result: String,
    input: Option<Input>,
    uses_optimizer: bool,
    timed: bool,
    exit: i32,
}

impl Outcome {
    fn new<T: Serialize>(result: &T, input: Input) -> Self {
        Self {
            result: json::to_string(result),
            input: Some(input),
            uses_optimizer: false,
            timed: true,
            exit: EXIT_OK,
        }
    }

    fn with_optimizer(mut self) -> Self {
        self.uses_optimizer = true;
        self
    }
}

fn pure_members(ens: &Ensemble<Member>) -> Result<Ensemble<cohere::PureState>, Failure> {
    ens.as_pure().ok_or_else(|| {
        Failure::Input(InputError::Validation {
            field: "members".into(),
            source: CoherenceError::InvalidInput("every member must be an amplitude vector".into()),
        })
    })
}

fn execute(command: &Command, opts: &GlobalOpts) -> Result<Outcome, Failure> {
    let tol = opts.tolerances();
    let cfg = opts.optimizer();
    match command {
        Command::Measure { file } => {
            let input = load(file)?;
            let rho = io::parse_state(&input.text, &tol)?;
            let out = MeasureOut {
                dim: rho.dim(),
                c_l1: c_l1(&rho),
                c_rel_entropy: c_rel_entropy(&rho, &tol)?,
            };
            Ok(Outcome::new(&out, input))
        }
        Command::Triangle { file } => {
            let input = load(file)?;
            let ens = io::parse_ensemble(&input.text, &tol)?;
            let out = TriangleOut {
                theorem1_bounds: theorem1_bounds(&ens, &tol)?,
                theorem2_dominance: theorem2_dominance(&ens, &tol)?,
                g_values: g_values(&ens, &tol)?,
            };
            Ok(Outcome::new(&out, input))
        }
        Command::Roof { file, force_optimizer } => {
            let input = load(file)?;
            let rho = io::parse_state(&input.text, &tol)?;
            let r = roof(&rho, &cfg, &tol, *force_optimizer)?;
            Ok(Outcome::new(&RoofOut::new(&r, &rho), input).with_optimizer())
        }
        Command::RoofBounds { file, s, t } => {
            let input = load(file)?;
            let ens = pure_members(&io::parse_ensemble(&input.text, &tol)?)?;
            let bounds = roof_bounds_thm4(&ens, *s, *t, &cfg, &tol)?;
            let r = roof(&ens.mixture(), &cfg, &tol, false)?;
            let out = RoofBoundsOut {
                s: *s,
                t: *t,
                bounds,
                roof_value: r.value,
                roof_method: r.method,
            };
            Ok(Outcome::new(&out, input).with_optimizer())
        }
        Command::Upper { file } => {
            let input = load(file)?;
            let rho = io::parse_state(&input.text, &tol)?;
            Ok(Outcome::new(&bound_report(&rho, &tol)?, input))
        }
        Command::Suite { cases, dims } => {
            let report = suite::run(&SuiteOptions {
                seed: opts.seed,
                cases: *cases as usize,
                dims: dims.clone(),
                tol,
                cfg,
            });
            Ok(Outcome {
                result: json::to_string(&report),
                input: None,
                uses_optimizer: true,
                // wall time would break byte-identical reruns
                timed: false,
                exit: if report.passed { EXIT_OK } else { EXIT_SUITE },
            })
        }
        Command::Conjecture { cases } => {
            let report = conjecture::run(opts.seed, *cases as usize, &cfg, &tol)?;
            Ok(Outcome {
                result: json::to_string(&report),
                input: None,
                uses_optimizer: true,
                timed: true,
                exit: EXIT_OK,
            })
        }
    }
}

/// Runs one command line (including the program name) and returns the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let args: Vec<OsString> = args.into_iter().map(Into::into).collect();
    let cli = match Cli::try_parse_from(&args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => EXIT_OK,
                _ => EXIT_USAGE,
            };
            let sink: &mut dyn Write = if code == EXIT_OK { out } else { err };
            let _ = write!(sink, "{}", e.render());
            return code;
        }
    };
    let echo = std::iter::once("cohere".to_string())
        .chain(args.iter().skip(1).map(|a| a.to_string_lossy().into_owned()))
        .collect::<Vec<_>>()
        .join(" ");

    let started = Instant::now();
    match execute(&cli.command, &cli.opts) {
        Ok(outcome) => {
            let elapsed = started.elapsed().as_secs_f64();
            let result: serde_json::Value = serde_json::from_str(&outcome.result).expect("own output is JSON");
            let (input, input_digest) = match outcome.input {
                Some(i) => (Some(i.path), Some(i.digest)),
                None => (None, None),
            };
            let report = Report {
                command: &echo,
                input,
                input_digest,
                tolerances: cli.opts.tolerances(),
                seed: cli.opts.seed,
                optimizer: outcome.uses_optimizer.then(|| cli.opts.optimizer()),
                wall_time_s: outcome.timed.then_some(elapsed),
                result: &result,
            };
            let _ = writeln!(out, "{}", json::to_string(&report));
            outcome.exit
        }
        Err(failure) => {
            let report = ErrorReport {
                command: &echo,
                error: failure.body(),
            };
            let _ = writeln!(out, "{}", json::to_string(&report));
            let _ = writeln!(err, "error: {}", failure.message());
            failure.exit_code()
        }
    }
}
