//! Command-line front end for `symdecomp`.
//!
//! Exit codes: 0 pass, 1 verification failure, 2 usage or config error,
//! 3 resource guard.

pub mod config;
pub mod render;

use std::io::Write;

use clap::{Parser, Subcommand};
use serde::Serialize;
use symdecomp_core::decompose::{FamilyKind, GysFamily};
use symdecomp_core::group::GroupSpec;
use symdecomp_core::report::{ConfigEcho, DecompositionReportFile, VerifyReportFile};
use symdecomp_core::spin::{build_model, SpinNetworkModel};
use symdecomp_core::tensor::counting::{burnside_orbit_count, dim_u_cyclic, dim_u_symmetric, multiplicity_m_k};
use symdecomp_core::Error;
use thiserror::Error as ThisError;

use config::{Format, GroupChoice, RunConfig, RunFlags};

/// Qubit alphabet used by every command.
pub const QUBIT: usize = 2;
/// Largest `n` accepted by the closed-form counts.
pub const MAX_DIMS_N: usize = 60;

#[derive(Debug, ThisError)]
pub enum CliError {
    #[error("usage: {0}")]
    Usage(String),
    #[error("{0}")]
    Core(#[from] Error),
    #[error("io: {0}")]
    Io(#[from] std::io::Error),
    #[error("serialization: {0}")]
    Json(#[from] serde_json::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Core(e) if e.is_resource_guard() => 3,
            CliError::Core(e) if is_verification_error(e) => 1,
            CliError::Core(_) => 2,
            CliError::Io(_) | CliError::Json(_) => 2,
        }
    }
}

fn is_verification_error(e: &Error) -> bool {
    matches!(
        e,
        Error::VerificationFailed(_)
            | Error::SymmetryViolation { .. }
            | Error::RankDeficientTransport { .. }
            | Error::MissingLink { .. }
            | Error::NotUnitary { .. }
            | Error::BlockLeakage { .. }
            | Error::CopyMismatch { .. }
            | Error::NotEssentiallyIdempotent
            | Error::NotHermitianIdempotent { .. }
            | Error::IterationCap { .. }
    )
}

#[derive(Debug, Parser)]
#[command(name = "symdecomp", version, about = "Symmetry-adapted block decomposition of qubit spin networks")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Commutant dimension and Fourier-sector sizes.
    Dims(RunFlags),
    /// Print the symmetrizer family with its verification.
    Gys(RunFlags),
    /// Full pipeline on a spin network model.
    Decompose(RunFlags),
    /// Family verification and commutant oracles only.
    Verify(RunFlags),
}

/// What a command produced, and whether it passed.
pub struct Outcome {
    pub text: String,
    pub pass: bool,
}

fn json<T: Serialize>(value: &T) -> Result<String, CliError> {
    let mut s = serde_json::to_string_pretty(value)?;
    s.push('\n');
    Ok(s)
}

fn family_for(cfg: &RunConfig, group: &GroupSpec) -> Result<GysFamily, CliError> {
    if cfg.classical_symmetrizers {
        return match group {
            GroupSpec::Symmetric(n) => Ok(GysFamily::young(*n, FamilyKind::Classical)?),
            _ => Err(CliError::Usage(
                "--classical-symmetrizers needs the symmetric group".to_owned(),
            )),
        };
    }
    Ok(GysFamily::for_group(group)?)
}

#[derive(Debug, Serialize)]
pub struct DimsReport {
    pub group: String,
    pub n: usize,
    pub commutant_dimension: u128,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub m_k: Option<Vec<u128>>,
}

pub fn cmd_dims(cfg: &RunConfig) -> Result<Outcome, CliError> {
    let group = cfg.group_spec()?;
    let n = group.degree();
    if n > MAX_DIMS_N {
        return Err(Error::OutOfRange {
            what: "n",
            value: n,
            min: 1,
            max: MAX_DIMS_N,
        }
        .into());
    }
    let (commutant_dimension, m_k) = match group {
        GroupSpec::Symmetric(n) => (dim_u_symmetric(n), None),
        GroupSpec::Cyclic(n) => (dim_u_cyclic(n), Some((0..n).map(|k| multiplicity_m_k(n, k)).collect())),
        ref other => (burnside_orbit_count(other, QUBIT * QUBIT)?, None),
    };
    let report = DimsReport {
        group: group.name(),
        n,
        commutant_dimension,
        m_k,
    };
    let text = match cfg.format {
        Format::Json => json(&report)?,
        Format::Csv => render::dims_csv(&report),
        Format::Text => render::dims_text(&report),
    };
    Ok(Outcome { text, pass: true })
}

pub fn cmd_gys(cfg: &RunConfig) -> Result<Outcome, CliError> {
    let group = cfg.group_spec()?;
    let family = family_for(cfg, &group)?;
    let report = VerifyReportFile::build(&family, QUBIT, cfg.tolerances.block_tol)?;
    let text = match cfg.format {
        Format::Json => json(&render::GysListing::new(&family, &report))?,
        Format::Csv => render::gys_csv(&family),
        Format::Text => render::gys_text(&family, &report),
    };
    Ok(Outcome {
        text,
        pass: report.verification.pass,
    })
}

pub fn cmd_verify(cfg: &RunConfig) -> Result<Outcome, CliError> {
    let group = cfg.group_spec()?;
    let family = family_for(cfg, &group)?;
    let report = VerifyReportFile::build(&family, QUBIT, cfg.tolerances.block_tol)?;
    let text = match cfg.format {
        Format::Json => json(&report)?,
        Format::Csv => render::verify_csv(&report),
        Format::Text => render::verify_text(&report),
    };
    Ok(Outcome {
        text,
        pass: report.pass,
    })
}

fn model_for(cfg: &RunConfig) -> Result<SpinNetworkModel, CliError> {
    let topology = cfg.topology()?;
    let model = build_model(topology)?;
    let wanted = match cfg.group_choice()? {
        GroupChoice::Auto => return Ok(model),
        GroupChoice::Symmetric => GroupSpec::Symmetric(topology.sites()),
        GroupChoice::Cyclic => GroupSpec::Cyclic(topology.sites()),
        GroupChoice::Reflection => GroupSpec::Reflection(topology.sites()),
    };
    if wanted == model.symmetry {
        return Ok(model);
    }
    Ok(SpinNetworkModel::new(topology, model.drift, model.controls, wanted)?)
}

pub fn decomposition_report(cfg: &RunConfig) -> Result<DecompositionReportFile, CliError> {
    let model = model_for(cfg)?;
    let family = family_for(cfg, &model.symmetry)?;
    let echo = ConfigEcho {
        topology: model.topology.name().to_owned(),
        n: model.sites(),
        group: cfg.group_choice()?.to_string(),
        tolerances: cfg.tolerances,
        with_lie_closure: cfg.with_lie_closure,
        with_oracles: cfg.with_oracles,
        emit_basis: cfg.emit_basis,
        classical_symmetrizers: cfg.classical_symmetrizers,
    };
    Ok(DecompositionReportFile::build(echo, &model, &family)?)
}

pub fn cmd_decompose(cfg: &RunConfig) -> Result<Outcome, CliError> {
    let report = decomposition_report(cfg)?;
    let text = match cfg.format {
        Format::Json => json(&report)?,
        Format::Csv => render::decompose_csv(&report),
        Format::Text => render::decompose_text(&report),
    };
    Ok(Outcome {
        text,
        pass: report.pass,
    })
}

/// Caps the global worker pool from `SYMDECOMP_THREADS`.
fn configure_threads() -> Result<(), CliError> {
    let Ok(value) = std::env::var("SYMDECOMP_THREADS") else {
        return Ok(());
    };
    let threads: usize = value
        .trim()
        .parse()
        .ok()
        .filter(|&t| t > 0)
        .ok_or_else(|| CliError::Usage(format!("SYMDECOMP_THREADS must be a positive integer, got {value:?}")))?;
    // A second initialization in the same process is harmless.
    let _ = rayon::ThreadPoolBuilder::new().num_threads(threads).build_global();
    Ok(())
}

type Runner = fn(&RunConfig) -> Result<Outcome, CliError>;

fn execute(command: &Command) -> Result<Outcome, CliError> {
    configure_threads()?;
    let (flags, run): (&RunFlags, Runner) = match command {
        Command::Dims(f) => (f, cmd_dims),
        Command::Gys(f) => (f, cmd_gys),
        Command::Decompose(f) => (f, cmd_decompose),
        Command::Verify(f) => (f, cmd_verify),
    };
    let cfg = RunConfig::resolve(flags)?;
    let outcome = run(&cfg)?;
    match &cfg.out {
        Some(path) => std::fs::write(path, &outcome.text)?,
        None => std::io::stdout().write_all(outcome.text.as_bytes())?,
    }
    Ok(outcome)
}

/// Parses `args` and runs the command, returning the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    match execute(&cli.command) {
        Ok(outcome) if outcome.pass => 0,
        Ok(_) => {
            eprintln!("symdecomp: verification failed");
            1
        }
        Err(e) => {
            eprintln!("symdecomp: {e}");
            e.exit_code()
        }
    }
}
