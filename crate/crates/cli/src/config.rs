//! The run configuration: a TOML document with optional group, shift, measure,
//! budget, covering and output sections.

use std::path::{Path, PathBuf};

use clap::ValueEnum;
use meandim::covering::SetDescriptor;
use meandim::group::Element;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::CliError;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Command {
    Group,
    Count,
    Entropy,
    Mdim,
    Hdim,
    Rdim,
    Covering,
    VerifyT1,
    VerifyT2,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::Group => "group",
            Command::Count => "count",
            Command::Entropy => "entropy",
            Command::Mdim => "mdim",
            Command::Hdim => "hdim",
            Command::Rdim => "rdim",
            Command::Covering => "covering",
            Command::VerifyT1 => "verify-t1",
            Command::VerifyT2 => "verify-t2",
        }
    }
}

/// A catalog group; `generators` replaces the default generating set of a non-product group.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum GroupConfig {
    Lattice {
        dim: usize,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        generators: Option<Vec<Element>>,
    },
    Cyclic {
        modulus: u64,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        generators: Option<Vec<Element>>,
    },
    Dihedral {
        #[serde(default, skip_serializing_if = "Option::is_none")]
        generators: Option<Vec<Element>>,
    },
    Heisenberg {
        #[serde(default, skip_serializing_if = "Option::is_none")]
        generators: Option<Vec<Element>>,
    },
    Product {
        left: Box<GroupConfig>,
        right: Box<GroupConfig>,
    },
}

/// Alphabet size or explicit labels.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum AlphabetConfig {
    Size(usize),
    Labels(Vec<String>),
}

/// A forbidden pattern of a general SFT: cells `(g₁, g₂)` and their letters.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PatternConfig {
    pub cells: Vec<(Element, Element)>,
    pub letters: Vec<u8>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ShiftConfig {
    Full { alphabet: AlphabetConfig },
    /// Forbidden words along the `G₂ ≅ ℤ` coordinate, as letter indices.
    FiberSft { alphabet: AlphabetConfig, forbidden: Vec<Vec<u8>> },
    GeneralSft { alphabet: AlphabetConfig, forbidden: Vec<PatternConfig> },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum MeasureConfig {
    Uniform,
    /// The measure of maximal entropy where it has a closed form.
    MaxEntropy,
    Bernoulli { probs: Vec<f64> },
    FiberMarkov { transition: Vec<Vec<f64>>, stationary: Vec<f64> },
}

/// Budget knobs; unset fields take per-command defaults.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Budget {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n_list: Option<Vec<u32>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub m_list: Option<Vec<u32>>,
    /// Largest radius for growth tables and growth-constant estimates.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub growth_radius: Option<u32>,
    /// Box radii for entropy estimates.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub radii: Option<Vec<u32>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub fiber_lengths: Option<Vec<u32>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub delta: Option<f64>,
    /// Lower-bound depths for the rate-distortion sandwich.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub depths: Option<Vec<u32>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub eps_list: Option<Vec<f64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub r_max: Option<u32>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub cross_check: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub exhaustive: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub max_window_cells: Option<usize>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum GeneratePreset {
    /// `F = [0, 10⁴)` with interval shapes of lengths 10, 100 and 1000.
    Interval,
    /// One random instance.
    Random,
    /// Many random instances, summarised.
    Suite,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct CoveringConfig {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub instance: Option<PathBuf>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub generate: Option<GeneratePreset>,
    /// Instance count for the suite.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub instances: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub restarts: Option<u32>,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum Format {
    #[default]
    Json,
    Csv,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct OutputConfig {
    pub format: Format,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub path: Option<PathBuf>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    #[serde(default = "schema_version")]
    pub schema: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub command: Option<Command>,
    #[serde(default)]
    pub seed: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub group: Option<GroupConfig>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub shift: Option<ShiftConfig>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub measure: Option<MeasureConfig>,
    #[serde(default)]
    pub budget: Budget,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub covering: Option<CoveringConfig>,
    #[serde(default)]
    pub output: OutputConfig,
}

fn schema_version() -> u32 {
    SCHEMA_VERSION
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            schema: SCHEMA_VERSION,
            command: None,
            seed: 0,
            group: None,
            shift: None,
            measure: None,
            budget: Budget::default(),
            covering: None,
            output: OutputConfig::default(),
        }
    }
}

/// One level of a translate-array instance file.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LevelConfig {
    pub shapes: Vec<ShapeConfig>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ShapeConfig {
    pub shape: SetDescriptor,
    pub bases: SetDescriptor,
}

/// A translate array on disk.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InstanceFile {
    pub group: GroupConfig,
    pub ambient: SetDescriptor,
    pub delta: f64,
    #[serde(default = "default_c")]
    pub c: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub d: Option<SetDescriptor>,
    pub levels: Vec<LevelConfig>,
}

fn default_c() -> f64 {
    2.0
}

/// Bundled presets, by name.
pub const PRESETS: &[(&str, &str)] = &[
    ("z-dihedral-full2", include_str!("../presets/z-dihedral-full2.toml")),
    ("z-zz2-full2", include_str!("../presets/z-zz2-full2.toml")),
    ("z2-dihedral-full2", include_str!("../presets/z2-dihedral-full2.toml")),
    ("heisenberg-dihedral-full2", include_str!("../presets/heisenberg-dihedral-full2.toml")),
    ("z-dihedral-bernoulli", include_str!("../presets/z-dihedral-bernoulli.toml")),
    ("golden-mean", include_str!("../presets/golden-mean.toml")),
    ("hard-square", include_str!("../presets/hard-square.toml")),
    ("heisenberg-growth", include_str!("../presets/heisenberg-growth.toml")),
    ("covering-interval", include_str!("../presets/covering-interval.toml")),
    ("covering-suite", include_str!("../presets/covering-suite.toml")),
];

pub fn preset(name: &str) -> Result<RunConfig, CliError> {
    let (_, text) = PRESETS.iter().find(|(n, _)| *n == name).ok_or_else(|| {
        let names: Vec<&str> = PRESETS.iter().map(|(n, _)| *n).collect();
        CliError::Config(format!("unknown preset {name}; known presets: {}", names.join(", ")))
    })?;
    parse_str(text, &format!("preset:{name}"))
}

fn line_column(text: &str, offset: usize) -> (usize, usize) {
    let before = &text[..offset.min(text.len())];
    let line = before.matches('\n').count() + 1;
    let column = before.rfind('\n').map_or(before.chars().count(), |nl| before[nl + 1..].chars().count()) + 1;
    (line, column)
}

/// Deserialises TOML, reporting the 1-based line and column of any error.
pub fn parse_toml<T: serde::de::DeserializeOwned>(text: &str, origin: &str) -> Result<T, CliError> {
    toml::from_str(text).map_err(|e| {
        let (line, column) = e.span().map_or((1, 1), |s| line_column(text, s.start));
        CliError::Parse { file: origin.to_string(), line, column, message: e.message().trim().to_string() }
    })
}

pub fn parse_str(text: &str, origin: &str) -> Result<RunConfig, CliError> {
    let config: RunConfig = parse_toml(text, origin)?;
    if config.schema != SCHEMA_VERSION {
        return Err(CliError::Config(format!("{origin}: schema {} is not supported (expected {SCHEMA_VERSION})", config.schema)));
    }
    Ok(config)
}

pub(crate) fn read(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|e| CliError::io(path.display(), e))
}

/// Reads a config file; a relative instance path is taken relative to the file.
pub fn parse_config(path: &Path) -> Result<RunConfig, CliError> {
    let mut config = parse_str(&read(path)?, &path.display().to_string())?;
    if let Some(instance) = config.covering.as_mut().and_then(|c| c.instance.as_mut()) {
        if instance.is_relative() {
            if let Some(dir) = path.parent() {
                *instance = dir.join(&*instance);
            }
        }
    }
    Ok(config)
}

/// Reads a file holding just one section, such as a group or a measure.
pub fn parse_section<T: serde::de::DeserializeOwned>(path: &Path) -> Result<T, CliError> {
    parse_toml(&read(path)?, &path.display().to_string())
}

impl RunConfig {
    /// Serialises back to TOML.
    pub fn to_toml(&self) -> Result<String, CliError> {
        toml::to_string(self).map_err(|e| CliError::Config(format!("cannot serialise config: {e}")))
    }

    /// SHA-256 over the canonical JSON of everything that affects results.
    ///
    /// The output section is left out and an instance file contributes its bytes, not its path.
    pub fn hash(&self) -> Result<String, CliError> {
        let mut canonical = self.clone();
        canonical.output = OutputConfig::default();
        let mut instance_bytes = Vec::new();
        if let Some(c) = canonical.covering.as_mut() {
            if let Some(path) = c.instance.take() {
                instance_bytes = std::fs::read(&path).map_err(|e| CliError::io(path.display(), e))?;
            }
        }
        let json = serde_json::to_vec(&canonical).map_err(|e| CliError::Config(e.to_string()))?;
        let mut h = Sha256::new();
        h.update(&json);
        h.update(&instance_bytes);
        Ok(h.finalize().iter().map(|b| format!("{b:02x}")).collect())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_preset_parses_and_round_trips() {
        for (name, _) in PRESETS {
            let c = preset(name).unwrap();
            assert!(c.command.is_some(), "{name}");
            let again = parse_str(&c.to_toml().unwrap(), name).unwrap();
            assert_eq!(again, c, "{name}");
        }
    }

    #[test]
    fn parse_errors_carry_positions() {
        let err = parse_str("seed = 1\ncommand = \"mdim\"\n[budget]\nn_list = [1, x]\nm_list = [1]\n", "x.toml").unwrap_err();
        match err {
            CliError::Parse { line, .. } => assert_eq!(line, 4),
            other => panic!("{other:?}"),
        }
        let err = parse_str("seed = 1\nbogus = 3\n", "x.toml").unwrap_err();
        assert!(matches!(err, CliError::Parse { line: 2, column: 1, .. }), "{err:?}");
    }

    #[test]
    fn hash_ignores_the_output_section() {
        let mut a = preset("z-dihedral-full2").unwrap();
        let h = a.hash().unwrap();
        a.output.format = Format::Csv;
        a.output.path = Some("elsewhere.csv".into());
        assert_eq!(a.hash().unwrap(), h);
        a.seed += 1;
        assert_ne!(a.hash().unwrap(), h);
    }

    #[test]
    fn line_columns_count_characters() {
        assert_eq!(line_column("ab\ncδe", 6), (2, 3));
        assert_eq!(line_column("abc", 0), (1, 1));
    }
}
