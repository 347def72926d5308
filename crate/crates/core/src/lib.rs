//! Computable dimension theory for subshifts over products of
//! polynomial-growth groups.
//!
//! * [`group`]: word metrics, balls, growth functions and Følner diagnostics.
//! * [`subshift`]: patterns over `G₁ × G₂`, the ultrametric, shifts and exact
//!   pattern counting.
//! * [`dimension`]: covering numbers, metric mean dimension and scale
//!   Hausdorff bounds as convergence tables.
//! * [`info`]: entropy, mutual information and rate-distortion bounds.
//! * [`covering`]: an executable disjoint-subfamily selection with verifiers.

pub mod covering;
pub mod dimension;
pub mod group;
pub mod info;
pub mod subshift;
pub mod table;
pub(crate) mod numeric;

pub use numeric::{kahan_sum, log2_biguint};
