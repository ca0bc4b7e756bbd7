//! Exact minimal-rank analysis of partial matrices.
//!
//! A partial matrix has some entries specified over a field (ℚ or GF(p))
//! and the rest unknown. This crate computes, with exact arithmetic:
//!
//! - the minimal rank over all completions (brute force over prime fields,
//!   closed forms where they exist),
//! - the triangular minimal rank from maximal triangular subpatterns,
//! - the b-fold minimal rank of the tensor with an identity block,
//! - the fractional minimal rank, exactly for minimal-cycle patterns and
//!   as an interval in general,
//!
//! together with certificates: witness completions whose rank is
//! re-checked, never assumed. The `pmrank` binary exposes the analyses
//! over the `.pmx` text format.

pub mod error;
pub mod field;
pub mod jordan;
pub mod matrix;
pub mod minrank;
pub mod partial;
pub mod patterns;
pub mod pmx;
pub mod report;

pub use error::{Error, Result};
