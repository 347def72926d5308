//! Covering numbers, metric mean dimension and scale Hausdorff bounds.

mod covering;
mod exhaustive;
mod growth;
mod mass;
mod theorem;

pub(crate) use covering::slice_log_count;
pub use covering::{covering_number, covering_number_ball, hdim_scale_upper, hdim_scale_upper_ball, mdim_m_estimate, s_rate};
pub use exhaustive::{hdim_scale_exhaustive, EXHAUSTIVE_CELL_CAP};
pub use growth::{growth_constants, growth_constants_with_tail, GrowthConstants};
pub use mass::{
    default_r_max, hdim_scale_lower_mass, hdim_scale_lower_mass_ball, hdim_scale_lower_mass_ball_with, hdim_scale_lower_mass_limit,
    hdim_scale_lower_mass_with, MassBound,
};
pub use theorem::{
    default_measure, h_top_estimate, topological_entropy, verify_theorem1, Theorem1Budget, Theorem1Report,
    SANDWICH_SLACK,
};

use thiserror::Error;

use crate::group::GroupError;
use crate::info::InfoError;
use crate::subshift::SubshiftError;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum DimensionError {
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error("the subshift has no points")]
    EmptySubshift,
    #[error(transparent)]
    Info(#[from] InfoError),
    #[error(transparent)]
    Subshift(#[from] SubshiftError),
    #[error(transparent)]
    Group(#[from] GroupError),
}
