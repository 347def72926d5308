use meandim::covering::CoveringError;
use meandim::dimension::DimensionError;
use meandim::group::GroupError;
use meandim::info::InfoError;
use meandim::subshift::SubshiftError;
use serde_json::{json, Value};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("cannot read {path}: {message}")]
    Io { path: String, message: String },
    #[error("{file}:{line}:{column}: {message}")]
    Parse { file: String, line: usize, column: usize, message: String },
    #[error("invalid config: {0}")]
    Config(String),
    #[error("incompatible inputs: {0}")]
    Incompatible(String),
    #[error("{what} needs {needed}, above the cap {cap}")]
    ResourceCap { what: String, needed: String, cap: String },
    #[error("{0}")]
    Computation(String),
}

impl CliError {
    pub fn kind(&self) -> &'static str {
        match self {
            CliError::Io { .. } => "io",
            CliError::Parse { .. } => "parse",
            CliError::Config(_) => "config",
            CliError::Incompatible(_) => "incompatible",
            CliError::ResourceCap { .. } => "resource_cap",
            CliError::Computation(_) => "computation",
        }
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Computation(_) => 1,
            CliError::Parse { .. } | CliError::Config(_) => 2,
            CliError::Incompatible(_) => 3,
            CliError::ResourceCap { .. } => 4,
            CliError::Io { .. } => 5,
        }
    }

    /// The machine-readable object printed on stderr.
    pub fn to_json(&self) -> Value {
        let mut body = json!({ "kind": self.kind(), "message": self.to_string() });
        match self {
            CliError::Parse { file, line, column, .. } => {
                body["file"] = json!(file);
                body["line"] = json!(line);
                body["column"] = json!(column);
            }
            CliError::ResourceCap { what, needed, cap } => {
                body["cap"] = json!({ "what": what, "needed": needed, "limit": cap });
            }
            _ => {}
        }
        json!({ "error": body })
    }

    pub(crate) fn io(path: impl std::fmt::Display, e: std::io::Error) -> CliError {
        CliError::Io { path: path.to_string(), message: e.to_string() }
    }
}

impl From<GroupError> for CliError {
    fn from(e: GroupError) -> Self {
        match e {
            GroupError::ElementCapExceeded { radius, cap } => CliError::ResourceCap {
                what: format!("ball of radius {radius}"),
                needed: "more elements".into(),
                cap: cap.to_string(),
            },
            GroupError::NotAProduct(_) => CliError::Incompatible(e.to_string()),
            other => CliError::Computation(other.to_string()),
        }
    }
}

impl From<SubshiftError> for CliError {
    fn from(e: SubshiftError) -> Self {
        match e {
            SubshiftError::Group(g) => g.into(),
            SubshiftError::Incompatible(m) => CliError::Incompatible(m),
            SubshiftError::InvalidSpec(m) => CliError::Config(m),
            SubshiftError::ResourceCap { what, needed, cap } => {
                CliError::ResourceCap { what, needed: format!("{needed} cells"), cap: cap.to_string() }
            }
            other => CliError::Computation(other.to_string()),
        }
    }
}

impl From<InfoError> for CliError {
    fn from(e: InfoError) -> Self {
        match e {
            InfoError::Subshift(s) => s.into(),
            InfoError::Group(g) => g.into(),
            InfoError::UnsupportedMeasure(m) => CliError::Incompatible(m),
            InfoError::InvalidDistribution(m) => CliError::Config(format!("invalid measure: {m}")),
            InfoError::SupportCap { size, cap } => {
                CliError::ResourceCap { what: "distribution support".into(), needed: size.to_string(), cap: cap.to_string() }
            }
            other => CliError::Computation(other.to_string()),
        }
    }
}

impl From<DimensionError> for CliError {
    fn from(e: DimensionError) -> Self {
        match e {
            DimensionError::Info(i) => i.into(),
            DimensionError::Subshift(s) => s.into(),
            DimensionError::Group(g) => g.into(),
            other => CliError::Computation(other.to_string()),
        }
    }
}

impl From<CoveringError> for CliError {
    fn from(e: CoveringError) -> Self {
        match e {
            CoveringError::Group(g) => g.into(),
            CoveringError::InvalidInstance(m) => CliError::Config(format!("invalid instance: {m}")),
            CoveringError::ResourceCap { what, needed, cap } => {
                CliError::ResourceCap { what, needed: needed.to_string(), cap: cap.to_string() }
            }
            other => CliError::Computation(other.to_string()),
        }
    }
}
