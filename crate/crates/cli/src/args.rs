//! Command-line arguments and how they overlay a config.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

use crate::config::{self, Command, CoveringConfig, Format, GeneratePreset, RunConfig};
use crate::error::CliError;

#[derive(Debug, Parser)]
#[command(name = "meandim", version = concat!(env!("CARGO_PKG_VERSION"), " (config schema v1)"))]
#[command(about = "Growth, entropy and mean-dimension estimators for subshifts over product groups")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Sub,
}

#[derive(Debug, Subcommand)]
pub enum Sub {
    /// Ball sizes, growth constants and degree fit of a group.
    Group(Common),
    /// Covering numbers of dynamical windows.
    Count(Common),
    /// Topological and measure-theoretic entropy estimates.
    Entropy(Common),
    /// Metric mean dimension table.
    Mdim(Common),
    /// Hausdorff-dimension upper and mass-certified lower tables.
    Hdim(Common),
    /// Rate-distortion bounds over a list of scales.
    Rdim(Common),
    /// Translate-array selection with verified disjointness and coverage.
    Covering(Common),
    /// Mean dimension against growth constant times entropy.
    #[command(name = "verify-t1")]
    VerifyT1(Common),
    /// Rate-distortion sandwich against growth constant times measure entropy.
    #[command(name = "verify-t2")]
    VerifyT2(Common),
    /// Runs the command named in a config file or preset.
    Run(Common),
    /// Lists the bundled presets.
    Presets,
}

#[derive(Debug, Default, Args)]
pub struct Common {
    /// Bundled preset to start from.
    #[arg(long, conflicts_with = "config")]
    pub preset: Option<String>,
    /// TOML config file to start from.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// File holding the body of a `[group]` table.
    #[arg(long)]
    pub group: Option<PathBuf>,
    /// File holding the body of a `[shift]` table.
    #[arg(long)]
    pub shift: Option<PathBuf>,
    /// File holding the body of a `[measure]` table.
    #[arg(long)]
    pub measure: Option<PathBuf>,
    #[arg(long)]
    pub seed: Option<u64>,
    /// Worker threads; defaults to all cores.
    #[arg(long)]
    pub jobs: Option<usize>,
    #[arg(long, value_enum)]
    pub out: Option<Format>,
    /// Write the report here instead of stdout.
    #[arg(long)]
    pub output: Option<PathBuf>,
    #[arg(long, value_delimiter = ',')]
    pub n_list: Option<Vec<u32>>,
    #[arg(long, value_delimiter = ',')]
    pub m_list: Option<Vec<u32>>,
    #[arg(long, value_delimiter = ',')]
    pub radii: Option<Vec<u32>>,
    #[arg(long, value_delimiter = ',')]
    pub fiber_lengths: Option<Vec<u32>>,
    #[arg(long, visible_alias = "n-max")]
    pub growth_radius: Option<u32>,
    #[arg(long)]
    pub delta: Option<f64>,
    #[arg(long, value_delimiter = ',')]
    pub depths: Option<Vec<u32>>,
    #[arg(long, value_delimiter = ',')]
    pub eps_list: Option<Vec<f64>>,
    #[arg(long)]
    pub r_max: Option<u32>,
    /// Add a Blahut–Arimoto cross-check to verify-t2.
    #[arg(long)]
    pub cross_check: bool,
    /// Add the exhaustive Hausdorff oracle on small windows to hdim.
    #[arg(long)]
    pub exhaustive: bool,
    #[arg(long)]
    pub max_window_cells: Option<usize>,
    /// Translate-array instance file.
    #[arg(long)]
    pub instance: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub generate: Option<GeneratePreset>,
    /// Number of instances for the generated suite.
    #[arg(long)]
    pub instances: Option<usize>,
    #[arg(long)]
    pub restarts: Option<u32>,
}

impl Sub {
    /// The command and its arguments; `None` for `presets`.
    pub fn split(&self) -> Option<(Option<Command>, &Common)> {
        Some(match self {
            Sub::Group(c) => (Some(Command::Group), c),
            Sub::Count(c) => (Some(Command::Count), c),
            Sub::Entropy(c) => (Some(Command::Entropy), c),
            Sub::Mdim(c) => (Some(Command::Mdim), c),
            Sub::Hdim(c) => (Some(Command::Hdim), c),
            Sub::Rdim(c) => (Some(Command::Rdim), c),
            Sub::Covering(c) => (Some(Command::Covering), c),
            Sub::VerifyT1(c) => (Some(Command::VerifyT1), c),
            Sub::VerifyT2(c) => (Some(Command::VerifyT2), c),
            Sub::Run(c) => (None, c),
            Sub::Presets => return None,
        })
    }
}

fn set<T: Clone>(slot: &mut Option<T>, v: &Option<T>) {
    if v.is_some() {
        slot.clone_from(v);
    }
}

/// Starts from the preset or config file, then applies section files and flags.
pub fn resolve(command: Option<Command>, a: &Common) -> Result<RunConfig, CliError> {
    let mut cfg = match (&a.preset, &a.config) {
        (Some(p), _) => config::preset(p)?,
        (None, Some(path)) => config::parse_config(path)?,
        (None, None) => RunConfig::default(),
    };
    if command.is_some() {
        cfg.command = command;
    }
    if cfg.command.is_none() {
        return Err(CliError::Config("run needs a config or preset that names a command".into()));
    }
    if let Some(p) = &a.group {
        cfg.group = Some(config::parse_section(p)?);
    }
    if let Some(p) = &a.shift {
        cfg.shift = Some(config::parse_section(p)?);
    }
    if let Some(p) = &a.measure {
        cfg.measure = Some(config::parse_section(p)?);
    }
    if let Some(s) = a.seed {
        cfg.seed = s;
    }
    let b = &mut cfg.budget;
    set(&mut b.n_list, &a.n_list);
    set(&mut b.m_list, &a.m_list);
    set(&mut b.radii, &a.radii);
    set(&mut b.fiber_lengths, &a.fiber_lengths);
    set(&mut b.growth_radius, &a.growth_radius);
    set(&mut b.delta, &a.delta);
    set(&mut b.depths, &a.depths);
    set(&mut b.eps_list, &a.eps_list);
    set(&mut b.r_max, &a.r_max);
    set(&mut b.max_window_cells, &a.max_window_cells);
    if a.cross_check {
        b.cross_check = Some(true);
    }
    if a.exhaustive {
        b.exhaustive = Some(true);
    }
    if a.instance.is_some() || a.generate.is_some() || a.instances.is_some() || a.restarts.is_some() {
        let c = cfg.covering.get_or_insert_with(CoveringConfig::default);
        if a.instance.is_some() {
            c.instance.clone_from(&a.instance);
            c.generate = None;
        }
        if a.generate.is_some() {
            c.generate = a.generate;
            c.instance = None;
        }
        set(&mut c.instances, &a.instances);
        set(&mut c.restarts, &a.restarts);
    }
    if let Some(f) = a.out {
        cfg.output.format = f;
    }
    if a.output.is_some() {
        cfg.output.path.clone_from(&a.output);
    }
    Ok(cfg)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn flags_override_the_preset() {
        let a = Common {
            preset: Some("z-dihedral-full2".into()),
            n_list: Some(vec![1, 2]),
            seed: Some(9),
            out: Some(Format::Csv),
            ..Common::default()
        };
        let cfg = resolve(Some(Command::Mdim), &a).unwrap();
        assert_eq!(cfg.command, Some(Command::Mdim));
        assert_eq!(cfg.budget.n_list, Some(vec![1, 2]));
        assert_eq!(cfg.budget.m_list, Some(vec![1, 2, 4, 8, 16, 32, 64]));
        assert_eq!((cfg.seed, cfg.output.format), (9, Format::Csv));
    }

    #[test]
    fn run_needs_a_named_command() {
        assert!(resolve(None, &Common::default()).is_err());
        let a = Common { preset: Some("golden-mean".into()), ..Common::default() };
        assert_eq!(resolve(None, &a).unwrap().command, Some(Command::Entropy));
    }

    #[test]
    fn arguments_parse() {
        let cli = Cli::try_parse_from(["meandim", "mdim", "--preset", "z-zz2-full2", "--n-list", "1,4", "--jobs", "2"]).unwrap();
        let (cmd, common) = cli.command.split().unwrap();
        assert_eq!(cmd, Some(Command::Mdim));
        assert_eq!(common.n_list, Some(vec![1, 4]));
        assert!(Cli::try_parse_from(["meandim", "mdim", "--preset", "a", "--config", "b"]).is_err());
    }
}
