//! Cycle patterns with at least one zero known entry.
//!
//! A zero breaks the multiplicative obstruction around the cycle, and the
//! minimal rank collapses onto the triangular minimal rank, which is at
//! most 2 here. The certificate is a pair: tmr as the lower bound and an
//! explicit completion of that exact rank as the upper bound.
//!
//! The witness comes from the constructions in `construct`: the zero
//! matrix when every known vanishes, a rank-1 weight assignment when the
//! zeros cover consistently, and the two-generator completion otherwise.

use crate::error::{Error, Result};
use crate::matrix::ExactMatrix;
use crate::minrank::construct::{rank1_cycle_completion, rank2_cycle_completion};
use crate::minrank::triangular::tmr_exact;
use crate::partial::PartialMatrix;
use crate::patterns::{recognize_cycle_pattern, DEFAULT_NODE_BUDGET};

/// Exact minimal rank and witness for a cycle with a zero entry. The
/// returned rank always equals the triangular minimal rank.
pub fn zero_case_mr(a: &PartialMatrix) -> Result<(usize, ExactMatrix)> {
    let form = recognize_cycle_pattern(a.pattern()).ok_or(Error::NotACycle)?;
    let _ = form;
    if a.values().all(|(_, v)| !v.is_zero()) {
        return Err(Error::NoZeroEntry);
    }
    let lower = tmr_exact(a, DEFAULT_NODE_BUDGET)?;
    let witness = if a.values().all(|(_, v)| v.is_zero()) {
        ExactMatrix::zeros(a.spec(), a.rows(), a.cols())
    } else if let Some(rank1) = rank1_cycle_completion(a)? {
        rank1
    } else {
        rank2_cycle_completion(a)?
    };
    let achieved = witness.rank();
    if achieved != lower {
        return Err(Error::ConstructionRankFailure(format!(
            "zero-case witness has rank {achieved} but the triangular bound is {lower}"
        )));
    }
    if !a.is_completion(&witness) {
        return Err(Error::ConstructionRankFailure(
            "zero-case witness misses a known entry".into(),
        ));
    }
    Ok((lower, witness))
}
