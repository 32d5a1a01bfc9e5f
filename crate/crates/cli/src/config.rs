//! Run configuration: command-line flags layered over an optional
//! `key = value` file.

use std::fmt;
use std::path::{Path, PathBuf};

use clap::{Args, ValueEnum};
use symdecomp_core::decompose::Tolerances;
use symdecomp_core::group::GroupSpec;
use symdecomp_core::spin::Topology;

use crate::CliError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum GroupChoice {
    Auto,
    Symmetric,
    Cyclic,
    Reflection,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum TopologyKind {
    Complete,
    Ring,
    CentralChain,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, ValueEnum)]
pub enum Format {
    #[default]
    Json,
    Csv,
    Text,
}

impl fmt::Display for GroupChoice {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.to_possible_value().expect("no skipped variants").get_name())
    }
}

impl fmt::Display for TopologyKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.to_possible_value().expect("no skipped variants").get_name())
    }
}

/// Flags shared by every subcommand. Everything is optional here so that a
/// config file can fill the gaps.
#[derive(Clone, Debug, Default, Args)]
pub struct RunFlags {
    /// Symmetry group; `auto` follows the topology.
    #[arg(long, value_enum)]
    pub group: Option<GroupChoice>,
    /// Number of sites, or the half-length for a central chain.
    #[arg(long)]
    pub n: Option<usize>,
    /// Total number of sites.
    #[arg(long)]
    pub sites: Option<usize>,
    #[arg(long, value_enum)]
    pub topology: Option<TopologyKind>,
    /// Write output here instead of stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub format: Option<Format>,
    /// Include the full change-of-basis matrix.
    #[arg(long)]
    pub emit_basis: bool,
    #[arg(long)]
    pub with_lie_closure: bool,
    #[arg(long)]
    pub with_oracles: bool,
    /// Use normalized classical symmetrizers; these lose orthogonality
    /// beyond four sites.
    #[arg(long)]
    pub classical_symmetrizers: bool,
    #[arg(long)]
    pub zero_tol: Option<f64>,
    #[arg(long)]
    pub rank_tol: Option<f64>,
    #[arg(long)]
    pub block_tol: Option<f64>,
    /// File of `key = value` lines using the flag names as keys.
    #[arg(long)]
    pub config: Option<PathBuf>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct RunConfig {
    pub group: GroupChoice,
    pub n: Option<usize>,
    pub sites: Option<usize>,
    pub topology: Option<TopologyKind>,
    pub out: Option<PathBuf>,
    pub format: Format,
    pub emit_basis: bool,
    pub with_lie_closure: bool,
    pub with_oracles: bool,
    pub classical_symmetrizers: bool,
    pub tolerances: Tolerances,
}

fn usage(msg: impl Into<String>) -> CliError {
    CliError::Usage(msg.into())
}

fn parse_enum<T: ValueEnum>(key: &str, value: &str) -> Result<T, CliError> {
    T::from_str(value, true).map_err(|_| usage(format!("invalid value {value:?} for {key}")))
}

fn parse_num<T: std::str::FromStr>(key: &str, value: &str) -> Result<T, CliError> {
    value
        .parse()
        .map_err(|_| usage(format!("invalid value {value:?} for {key}")))
}

fn parse_bool(key: &str, value: &str) -> Result<bool, CliError> {
    match value.to_ascii_lowercase().as_str() {
        "true" | "yes" | "1" | "on" => Ok(true),
        "false" | "no" | "0" | "off" => Ok(false),
        _ => Err(usage(format!("invalid boolean {value:?} for {key}"))),
    }
}

/// Parses config text into flags. Blank lines and `#` comments are ignored;
/// keys may use `-` or `_`.
pub fn parse_config_text(text: &str) -> Result<RunFlags, CliError> {
    let mut f = RunFlags::default();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (key, value) = line
            .split_once('=')
            .ok_or_else(|| usage(format!("line {}: expected `key = value`", lineno + 1)))?;
        let key = key.trim().replace('_', "-");
        let value = value.trim().trim_matches('"');
        match key.as_str() {
            "group" => f.group = Some(parse_enum(&key, value)?),
            "n" => f.n = Some(parse_num(&key, value)?),
            "sites" => f.sites = Some(parse_num(&key, value)?),
            "topology" => f.topology = Some(parse_enum(&key, value)?),
            "out" => f.out = Some(PathBuf::from(value)),
            "format" => f.format = Some(parse_enum(&key, value)?),
            "emit-basis" => f.emit_basis = parse_bool(&key, value)?,
            "with-lie-closure" => f.with_lie_closure = parse_bool(&key, value)?,
            "with-oracles" => f.with_oracles = parse_bool(&key, value)?,
            "classical-symmetrizers" => f.classical_symmetrizers = parse_bool(&key, value)?,
            "zero-tol" => f.zero_tol = Some(parse_num(&key, value)?),
            "rank-tol" => f.rank_tol = Some(parse_num(&key, value)?),
            "block-tol" => f.block_tol = Some(parse_num(&key, value)?),
            other => return Err(usage(format!("line {}: unknown key {other:?}", lineno + 1))),
        }
    }
    Ok(f)
}

fn read_config(path: &Path) -> Result<RunFlags, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| usage(format!("cannot read config {}: {e}", path.display())))?;
    parse_config_text(&text)
}

impl RunConfig {
    /// Flags win over the config file.
    pub fn resolve(flags: &RunFlags) -> Result<Self, CliError> {
        let file = match &flags.config {
            Some(p) => read_config(p)?,
            None => RunFlags::default(),
        };
        let defaults = Tolerances::default();
        let tolerances = Tolerances {
            zero_tol: flags.zero_tol.or(file.zero_tol).unwrap_or(defaults.zero_tol),
            rank_tol: flags.rank_tol.or(file.rank_tol).unwrap_or(defaults.rank_tol),
            block_tol: flags.block_tol.or(file.block_tol).unwrap_or(defaults.block_tol),
        };
        for (name, t) in [
            ("zero-tol", tolerances.zero_tol),
            ("rank-tol", tolerances.rank_tol),
            ("block-tol", tolerances.block_tol),
        ] {
            if !(t.is_finite() && t > 0.0) {
                return Err(usage(format!("{name} must be positive, got {t}")));
            }
        }
        Ok(RunConfig {
            group: flags.group.or(file.group).unwrap_or(GroupChoice::Auto),
            n: flags.n.or(file.n),
            sites: flags.sites.or(file.sites),
            topology: flags.topology.or(file.topology),
            out: flags.out.clone().or(file.out),
            format: flags.format.or(file.format).unwrap_or_default(),
            emit_basis: flags.emit_basis || file.emit_basis,
            with_lie_closure: flags.with_lie_closure || file.with_lie_closure,
            with_oracles: flags.with_oracles || file.with_oracles,
            classical_symmetrizers: flags.classical_symmetrizers || file.classical_symmetrizers,
            tolerances,
        })
    }

    /// The topology, either given or implied by the group.
    pub fn topology_kind(&self) -> Result<TopologyKind, CliError> {
        match (self.topology, self.group) {
            (Some(t), _) => Ok(t),
            (None, GroupChoice::Symmetric) => Ok(TopologyKind::Complete),
            (None, GroupChoice::Cyclic) => Ok(TopologyKind::Ring),
            (None, GroupChoice::Reflection) => Ok(TopologyKind::CentralChain),
            (None, GroupChoice::Auto) => Err(usage("need --topology or an explicit --group")),
        }
    }

    /// The group, with `auto` resolved from the topology.
    pub fn group_choice(&self) -> Result<GroupChoice, CliError> {
        match (self.group, self.topology) {
            (GroupChoice::Auto, Some(TopologyKind::Complete)) => Ok(GroupChoice::Symmetric),
            (GroupChoice::Auto, Some(TopologyKind::Ring)) => Ok(GroupChoice::Cyclic),
            (GroupChoice::Auto, Some(TopologyKind::CentralChain)) => Ok(GroupChoice::Reflection),
            (GroupChoice::Auto, None) => Err(usage("need --group or --topology")),
            (g, _) => Ok(g),
        }
    }

    /// Number of sites from `--n`/`--sites`. For a central chain `--n` is
    /// the half-length `h` and the chain has `2h+1` sites.
    pub fn site_count(&self, central_chain: bool) -> Result<usize, CliError> {
        let from_n = self.n.map(|n| if central_chain { 2 * n + 1 } else { n });
        let sites = match (from_n, self.sites) {
            (Some(a), Some(b)) if a != b => {
                return Err(usage(format!("--n implies {a} sites but --sites is {b}")))
            }
            (Some(a), _) => a,
            (None, Some(b)) => b,
            (None, None) => return Err(usage("need --n or --sites")),
        };
        if sites == 0 {
            return Err(usage("need at least one site"));
        }
        Ok(sites)
    }

    /// Group over `sites` points for commands that do not build a model.
    pub fn group_spec(&self) -> Result<GroupSpec, CliError> {
        let choice = self.group_choice()?;
        let sites = self.site_count(self.topology == Some(TopologyKind::CentralChain))?;
        Ok(match choice {
            GroupChoice::Symmetric => GroupSpec::Symmetric(sites),
            GroupChoice::Cyclic => GroupSpec::Cyclic(sites),
            GroupChoice::Reflection => GroupSpec::Reflection(sites),
            GroupChoice::Auto => unreachable!("resolved above"),
        })
    }

    /// Model topology with its size.
    pub fn topology(&self) -> Result<Topology, CliError> {
        let kind = self.topology_kind()?;
        let sites = self.site_count(kind == TopologyKind::CentralChain)?;
        Ok(match kind {
            TopologyKind::Complete => Topology::Complete(sites),
            TopologyKind::Ring => Topology::Ring(sites),
            TopologyKind::CentralChain => {
                if sites % 2 == 0 {
                    return Err(usage(format!("a central chain needs an odd site count, got {sites}")));
                }
                Topology::CentralChain(sites / 2)
            }
        })
    }
}
