//! The rank engines: exhaustive minimal rank, the triangular closed form,
//! cycle invariants with their fractional minimal rank, explicit
//! completions, and the report type that ties them together.

pub mod brute;
pub mod construct;
pub mod cycle;
pub mod triangular;
pub mod zero;

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::field::Rational;
use crate::matrix::ExactMatrix;
use crate::partial::{PartialMatrix, Pattern};
use crate::patterns::{is_triangular, recognize_cycle_pattern, DEFAULT_NODE_BUDGET};

#[cfg(feature = "parallel")]
pub use brute::mr_bruteforce_parallel;
pub use brute::{
    mr_b, mr_bruteforce, mr_bruteforce_sequential, BruteForceResult, DEFAULT_SEARCH_BUDGET,
};
pub use construct::{
    complete_block_cycle, construct_cycle_completion, nonzero_cycle_mr_completion,
    rank1_cycle_completion, rank2_cycle_completion,
};
pub use cycle::{
    analyze_cycle, block_cycle_bound, fmr_cycle, scale_to_ah, BlockCycleAnalysis, CycleAnalysis,
    EqualityCase, ScaledCycle,
};
pub use triangular::{tmr, tmr_exact, tmr_of_triangular, TmrOutcome};
pub use zero::zero_case_mr;

/// How an exact minimal rank value was obtained.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MrMethod {
    /// Exhaustive enumeration over a prime field.
    BruteForce,
    /// Closed form for triangular patterns.
    TriangularFormula,
    /// Cycle invariant h of a nonzero cycle.
    CycleInvariant,
    /// Zero-entry cycle analysis (mr = tmr).
    ZeroCycle,
}

#[derive(Clone, Debug)]
pub struct MrValue {
    pub value: usize,
    pub method: MrMethod,
}

/// A completion whose rank backs one of the reported values.
#[derive(Clone, Debug)]
pub struct Witness {
    pub label: String,
    pub claimed_rank: usize,
    pub completion: ExactMatrix,
}

/// Everything the analyses produced for one partial matrix.
#[derive(Clone, Debug, Default)]
pub struct RankReport {
    pub tmr: Option<usize>,
    /// False when the subpattern enumeration was cut short; tmr is then
    /// only a lower bound.
    pub tmr_exhaustive: bool,
    pub mr: Option<MrValue>,
    /// Computed b-fold minimal ranks.
    pub mr_b: BTreeMap<usize, usize>,
    /// Fold factors whose search space exceeded the budget.
    pub mr_b_skipped: Vec<usize>,
    pub fmr_exact: Option<Rational>,
    /// Enclosing interval when no exact value is known:
    /// tmr ≤ fmr ≤ min over computed b of mr_b/b.
    pub fmr_bounds: Option<(Rational, Rational)>,
    pub witnesses: Vec<Witness>,
    /// Maximal triangular subpattern attaining tmr.
    pub tmr_witness: Option<Pattern>,
    pub notes: Vec<String>,
}

impl RankReport {
    /// Re-check every certificate against the partial matrix: witnesses
    /// must complete it at their claimed rank, and the reported values
    /// must satisfy tmr ≤ fmr ≤ mr.
    pub fn verify(&self, a: &PartialMatrix) -> Result<()> {
        for w in &self.witnesses {
            let violations = a.violations(&w.completion)?;
            if let Some(&pos) = violations.first() {
                return Err(Error::NotACompletion { pos });
            }
            let rank = w.completion.rank();
            if rank != w.claimed_rank {
                return Err(Error::ConstructionRankFailure(format!(
                    "witness `{}` claims rank {} but has rank {rank}",
                    w.label, w.claimed_rank
                )));
            }
        }
        let fmr_value = self.fmr_exact.clone().or_else(|| {
            // a bounded interval is checked against its own endpoints
            self.fmr_bounds.clone().map(|(lo, _)| lo)
        });
        if let (Some(tmr), Some(fmr)) = (self.tmr, fmr_value.as_ref()) {
            if self.tmr_exhaustive && Rational::from_usize(tmr) > *fmr {
                return Err(Error::ConstructionRankFailure(format!(
                    "tmr {tmr} exceeds fmr {fmr}"
                )));
            }
        }
        if let (Some(fmr), Some(mr)) = (self.fmr_exact.as_ref(), self.mr.as_ref()) {
            if *fmr > Rational::from_usize(mr.value) {
                return Err(Error::ConstructionRankFailure(format!(
                    "fmr {fmr} exceeds mr {}",
                    mr.value
                )));
            }
        }
        // an exact mr must agree with the one-fold search when both ran
        if let (Some(mr), Some(&b1)) = (self.mr.as_ref(), self.mr_b.get(&1)) {
            if mr.value != b1 {
                return Err(Error::ConstructionRankFailure(format!(
                    "mr {} disagrees with the enumerated mr_1 = {b1}",
                    mr.value
                )));
            }
        }
        // every computed fold ratio sits inside the sandwich
        for (&b, &value) in &self.mr_b {
            let ratio = Rational::ratio(value, b);
            if let Some(tmr) = self.tmr {
                if self.tmr_exhaustive && Rational::from_usize(tmr) > ratio {
                    return Err(Error::ConstructionRankFailure(format!(
                        "tmr {tmr} exceeds mr_{b}/{b}"
                    )));
                }
            }
            if let Some(fmr) = self.fmr_exact.as_ref() {
                if *fmr > ratio {
                    return Err(Error::ConstructionRankFailure(format!(
                        "fmr {fmr} exceeds mr_{b}/{b}"
                    )));
                }
            }
        }
        Ok(())
    }
}

/// Full analysis: exact fractional minimal rank where a closed form
/// applies (triangular patterns, cycles), interval bounds from tmr and the
/// computed mr_b values otherwise.
///
/// `budget` caps each brute-force search space; fold factors that would
/// exceed it are skipped and listed in `mr_b_skipped`.
pub fn fmr_report(a: &PartialMatrix, b_max: usize, budget: u64) -> Result<RankReport> {
    let mut report = RankReport::default();
    let tmr_outcome = tmr(a, DEFAULT_NODE_BUDGET)?;
    report.tmr = Some(tmr_outcome.value);
    report.tmr_exhaustive = tmr_outcome.exhaustive;
    report.tmr_witness = tmr_outcome.witness;
    if !tmr_outcome.exhaustive {
        report
            .notes
            .push("triangular subpattern enumeration hit its budget; tmr is a lower bound".into());
    }

    // b-fold values are informative wherever the field permits them
    let enumerable = !a.spec().is_rationals();
    if enumerable {
        for b in 1..=b_max {
            match mr_b(a, b, budget) {
                Ok(result) => {
                    report.mr_b.insert(b, result.rank);
                    if b == 1 {
                        report.witnesses.push(Witness {
                            label: "brute-force minimizer".into(),
                            claimed_rank: result.rank,
                            completion: result.witness,
                        });
                    }
                }
                Err(Error::BudgetExceeded { .. }) => report.mr_b_skipped.push(b),
                Err(other) => return Err(other),
            }
        }
    }

    if is_triangular(a.pattern()) {
        // minimal rank and fractional minimal rank agree with tmr
        let value = tmr_outcome.value;
        report.mr = Some(MrValue {
            value,
            method: MrMethod::TriangularFormula,
        });
        report.fmr_exact = Some(Rational::from_usize(value));
        return Ok(report);
    }

    if recognize_cycle_pattern(a.pattern()).is_some() {
        let has_zero = a.values().any(|(_, v)| v.is_zero());
        if has_zero {
            let (value, witness) = zero_case_mr(a)?;
            report.mr = Some(MrValue {
                value,
                method: MrMethod::ZeroCycle,
            });
            report.fmr_exact = Some(Rational::from_usize(value));
            report.witnesses.push(Witness {
                label: "zero-cycle completion".into(),
                claimed_rank: value,
                completion: witness,
            });
        } else {
            report.fmr_exact = Some(fmr_cycle(a)?);
            let (witness, value) = nonzero_cycle_mr_completion(a)?;
            report.mr = Some(MrValue {
                value,
                method: MrMethod::CycleInvariant,
            });
            report.witnesses.push(Witness {
                label: "cycle completion".into(),
                claimed_rank: value,
                completion: witness,
            });
        }
        return Ok(report);
    }

    // general pattern: interval from tmr and the computed mr_b values
    if let Some((&b1, &rank1)) = report.mr_b.iter().next() {
        debug_assert_eq!(b1, 1);
        report.mr = Some(MrValue {
            value: rank1,
            method: MrMethod::BruteForce,
        });
    }
    let upper = report
        .mr_b
        .iter()
        .map(|(&b, &value)| Rational::ratio(value, b))
        .min();
    match upper {
        Some(upper) => {
            let lower = Rational::from_usize(tmr_outcome.value);
            report.fmr_bounds = Some((lower, upper));
        }
        None => {
            report.notes.push(
                "no b-fold search was feasible; only the triangular lower bound is known".into(),
            );
        }
    }
    Ok(report)
}

/// Outcome of the upper-triangular-blocks check.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TriangularBlockCheck {
    /// Whether every b×b block of the completion is upper triangular.
    pub applicable: bool,
    /// When applicable: rank(completion) ≥ b·mr held?
    pub holds: Option<bool>,
    pub completion_rank: usize,
    pub mr: usize,
}

/// If a completion of the b-fold tensor has only upper triangular blocks,
/// its rank cannot drop below b times the scalar minimal rank. Verifies
/// that bound on one candidate completion.
pub fn check_triangular_block_bound(
    a: &PartialMatrix,
    completion: &ExactMatrix,
    b: usize,
    budget: u64,
) -> Result<TriangularBlockCheck> {
    assert!(b >= 1, "fold factor must be positive");
    let lifted = a.tensor_identity(b);
    let violations = lifted.violations(completion)?;
    if let Some(&pos) = violations.first() {
        return Err(Error::NotACompletion { pos });
    }
    let mut applicable = true;
    'outer: for bi in 0..a.rows() {
        for bj in 0..a.cols() {
            for r in 0..b {
                for c in 0..r {
                    if !completion.get(bi * b + r, bj * b + c).is_zero() {
                        applicable = false;
                        break 'outer;
                    }
                }
            }
        }
    }
    let mr = mr_bruteforce(a, budget)?.rank;
    let completion_rank = completion.rank();
    let holds = applicable.then(|| completion_rank >= b * mr);
    Ok(TriangularBlockCheck {
        applicable,
        holds,
        completion_rank,
        mr,
    })
}
