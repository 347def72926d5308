//! Finite information theory and the rate-distortion sandwich. All logarithms are base 2.

mod distribution;
mod lemma;
mod measure;
mod rate;

pub use distribution::{
    binary_entropy, check_data_processing, entropy, entropy_of, mutual_information, mutual_information_by_conditional,
    mutual_information_by_entropies, quantized_mutual_information, DataProcessingWitness, FiniteDistribution,
    JointDistribution, DATA_PROCESSING_SLACK,
};
pub use lemma::{lemma_key_bound, BlockPairDistribution, KeyBound};
pub use measure::{measure_entropy, MeasureSpec};
pub use rate::{
    blahut_arimoto, epsilon_for_depth, lower_depth, rd_cross_check, rd_lower, rd_upper, rd_upper_limit, upper_depth,
    verify_theorem2, window_source, CrossCheck, RdBound, RdPoint, Theorem2Budget, Theorem2Report, Theorem2Row,
    WindowSource, BLAHUT_ARIMOTO_SUPPORT_CAP,
};

use thiserror::Error;

use crate::group::GroupError;
use crate::subshift::SubshiftError;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum InfoError {
    #[error("invalid distribution: {0}")]
    InvalidDistribution(String),
    #[error("hypothesis violated: {0}")]
    HypothesisViolated(String),
    #[error("distortion {target} is below the achievable minimum {minimum}")]
    Infeasible { target: f64, minimum: f64 },
    #[error("unsupported measure: {0}")]
    UnsupportedMeasure(String),
    #[error("support of size {size} exceeds the cap {cap}")]
    SupportCap { size: usize, cap: usize },
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error(transparent)]
    Subshift(#[from] SubshiftError),
    #[error(transparent)]
    Group(#[from] GroupError),
}
