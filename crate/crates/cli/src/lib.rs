//! Command-line front end for the reduction catalog and verification harness.

mod document;

use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use cone_hilbert::{balance_cone, hilbert_basis};
use invariant_engine::{distinguish, Instance};
use reduction_catalog::{gi_encode, pipeline, step, GiMode, Graph, Pipeline, Reduction, ReductionError};
use thiserror::Error;
use verify_harness::{gi_roundtrip, run_suite, HarnessError, Suite, PEPS_FINGERPRINT_SLOTS};

pub use document::{parse_instance, parse_types, print_instance, Entry, InstanceDocument};

pub const DEFAULT_MAX_SLOTS: usize = 8;
pub const MAX_SLOTS_ENV: &str = "OCI_MAX_SLOTS";
/// Default degree cap for `gi roundtrip`; the smallest cap separating the isospectral 5-vertex pair.
pub const GI_DEFAULT_SLOTS: usize = 10;
/// Largest vertex count for which `gi roundtrip` also compares after gi-to-peps.
pub const GI_PEPS_MAX_VERTICES: usize = 3;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("parse error: {0}")]
    Parse(String),
    #[error("{0}")]
    Schema(String),
    #[error("{0}")]
    Io(String),
    #[error("{0}")]
    Other(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Parse(_) | CliError::Io(_) => 2,
            CliError::Schema(_) | CliError::Other(_) => 3,
        }
    }
}

impl From<ReductionError> for CliError {
    fn from(e: ReductionError) -> Self {
        match e {
            ReductionError::Schema { .. } => CliError::Schema(e.to_string()),
            ReductionError::Graph(_) | ReductionError::UnknownName(_) => CliError::Parse(e.to_string()),
            other => CliError::Other(other.to_string()),
        }
    }
}

impl From<HarnessError> for CliError {
    fn from(e: HarnessError) -> Self {
        match e {
            HarnessError::UnknownReduction(_) | HarnessError::CapExceeded(..) => CliError::Parse(e.to_string()),
            HarnessError::Reduction(r) => r.into(),
            other => CliError::Other(other.to_string()),
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "oci", about = "Reductions between tensor orbit closure problems")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Apply a pipeline or a list of steps to an instance document.
    Reduce(ReduceArgs),
    /// Compare contraction-invariant fingerprints of two instances.
    Fingerprint(FingerprintArgs),
    /// Graph isomorphism encodings and experiments.
    Gi {
        #[command(subcommand)]
        command: GiCommand,
    },
    /// Run verification suites.
    Verify(VerifyArgs),
    /// Hilbert basis of the balance cone of a type list.
    Hilbert {
        #[arg(long)]
        types: String,
    },
}

#[derive(Debug, Args)]
pub struct ReduceArgs {
    #[arg(long, conflicts_with = "step", required_unless_present = "step")]
    pub pipeline: Option<String>,
    #[arg(long, num_args = 1..)]
    pub step: Vec<String>,
    #[arg(long = "in")]
    pub input: PathBuf,
    #[arg(long)]
    pub out: PathBuf,
    #[arg(long)]
    pub certificate: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct FingerprintArgs {
    #[arg(long)]
    pub max_slots: Option<usize>,
    pub a: PathBuf,
    pub b: PathBuf,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Mode {
    Sn,
    Gl,
}

#[derive(Debug, Subcommand)]
pub enum GiCommand {
    /// Write the instance document of a graph.
    Encode {
        #[arg(long, value_enum)]
        mode: Mode,
        graph: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Decide isomorphism by brute force and compare fingerprints.
    Roundtrip {
        g1: PathBuf,
        g2: PathBuf,
        #[arg(long)]
        max_slots: Option<usize>,
    },
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[arg(long, default_value = "all")]
    pub suite: String,
    #[arg(long, default_value = "all")]
    pub reduction: String,
    #[arg(long, value_delimiter = ',', default_value = "1,2")]
    pub dims: Vec<usize>,
    #[arg(long, default_value_t = 25)]
    pub trials: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

/// Exit code and standard output of one command.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: u8,
    pub stdout: String,
}

impl Outcome {
    fn ok(stdout: String) -> Self {
        Outcome { code: 0, stdout }
    }
}

fn read(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))
}

fn write(path: &Path, text: &str) -> Result<(), CliError> {
    fs::write(path, text).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))
}

fn read_instance(path: &Path) -> Result<Instance, CliError> {
    parse_instance(&read(path)?).map_err(|e| match e {
        CliError::Parse(m) => CliError::Parse(format!("{}: {m}", path.display())),
        other => other,
    })
}

fn read_graph(path: &Path) -> Result<Graph, CliError> {
    read(path)?.parse().map_err(|e: ReductionError| CliError::Parse(format!("{}: {e}", path.display())))
}

/// Flag value, else `OCI_MAX_SLOTS`, else `default`.
pub fn max_slots(flag: Option<usize>, default: usize) -> Result<usize, CliError> {
    if let Some(k) = flag {
        return Ok(k);
    }
    match std::env::var(MAX_SLOTS_ENV) {
        Ok(v) => v.trim().parse().map_err(|_| CliError::Parse(format!("{MAX_SLOTS_ENV}={v:?} is not a count"))),
        Err(_) => Ok(default),
    }
}

fn reduce(args: &ReduceArgs) -> Result<Outcome, CliError> {
    let p = match &args.pipeline {
        Some(name) => pipeline(name)?,
        None => {
            let stages = args.step.iter().map(|s| step(s)).collect::<Result<Vec<_>, _>>()?;
            Pipeline::new(args.step.join(","), stages)
        }
    };
    let x = read_instance(&args.input)?;
    let y = p.apply(&x)?;
    write(&args.out, &print_instance(&y))?;
    if let Some(path) = &args.certificate {
        let cert = p.certificate(&x.signature)?;
        write(path, &(serde_json::to_string_pretty(&cert).expect("serializable") + "\n"))?;
    }
    Ok(Outcome::ok(String::new()))
}

fn fingerprint(args: &FingerprintArgs) -> Result<Outcome, CliError> {
    let k = max_slots(args.max_slots, DEFAULT_MAX_SLOTS)?;
    let (x, y) = (read_instance(&args.a)?, read_instance(&args.b)?);
    if x.signature != y.signature {
        return Err(CliError::Schema(format!("signature mismatch: {} vs {}", x.signature, y.signature)));
    }
    match distinguish(&x, &y, k).map_err(|e| CliError::Other(e.to_string()))? {
        Some(w) => Ok(Outcome { code: 1, stdout: format!("DISTINGUISHED {w}\n") }),
        None => Ok(Outcome::ok(format!("UNDISTINGUISHED at slots ≤ {k}\n"))),
    }
}

fn gi(cmd: &GiCommand) -> Result<Outcome, CliError> {
    match cmd {
        GiCommand::Encode { mode, graph, out } => {
            let mode = match mode {
                Mode::Sn => GiMode::Sn,
                Mode::Gl => GiMode::Gl,
            };
            let text = print_instance(&gi_encode(&read_graph(graph)?, mode)?);
            match out {
                Some(path) => {
                    write(path, &text)?;
                    Ok(Outcome::ok(String::new()))
                }
                None => Ok(Outcome::ok(text)),
            }
        }
        GiCommand::Roundtrip { g1, g2, max_slots: flag } => {
            let (a, b) = (read_graph(g1)?, read_graph(g2)?);
            let k = max_slots(*flag, GI_DEFAULT_SLOTS)?;
            let peps = if a.n().max(b.n()) <= GI_PEPS_MAX_VERTICES { PEPS_FINGERPRINT_SLOTS } else { 0 };
            let v = gi_roundtrip(&a, &b, k, peps)?;
            let code = if v.consistent() { 0 } else { 1 };
            Ok(Outcome { code, stdout: format!("{v}\n") })
        }
    }
}

fn verify(args: &VerifyArgs) -> Result<Outcome, CliError> {
    let suite: Suite = args.suite.parse().map_err(CliError::Parse)?;
    if args.dims.is_empty() || args.dims.contains(&0) {
        return Err(CliError::Parse("dims must be positive".into()));
    }
    let reports = run_suite(suite, &args.reduction, &args.dims, args.trials, args.seed)?;
    let mut out = String::new();
    for r in &reports {
        out.push_str(&format!("{r}\n"));
    }
    let failed = reports.iter().filter(|r| !r.passed()).count();
    out.push_str(&format!("{} checks, {failed} failed\n", reports.len()));
    Ok(Outcome { code: if failed == 0 { 0 } else { 1 }, stdout: out })
}

fn hilbert(types: &str) -> Result<Outcome, CliError> {
    let types = parse_types(types)?;
    let cone = balance_cone(&types).map_err(|e| CliError::Parse(e.to_string()))?;
    let basis = hilbert_basis(&cone).map_err(|e| CliError::Other(e.to_string()))?;
    let mut out = String::new();
    for v in &basis.vectors {
        let parts: Vec<String> = v.iter().map(|c| c.to_string()).collect();
        out.push_str(&format!("({})\n", parts.join(",")));
    }
    Ok(Outcome::ok(out))
}

pub fn execute(cli: &Cli) -> Result<Outcome, CliError> {
    match &cli.command {
        Command::Reduce(a) => reduce(a),
        Command::Fingerprint(a) => fingerprint(a),
        Command::Gi { command } => gi(command),
        Command::Verify(a) => verify(a),
        Command::Hilbert { types } => hilbert(types),
    }
}

/// Exit code, standard output and standard error.
pub fn run(cli: &Cli) -> (u8, String, String) {
    match execute(cli) {
        Ok(o) => (o.code, o.stdout, String::new()),
        Err(e) => (e.exit_code(), String::new(), format!("error: {e}\n")),
    }
}
