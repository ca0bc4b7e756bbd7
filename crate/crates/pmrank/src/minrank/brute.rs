//! Exhaustive minimal rank over prime fields.
//!
//! Every completion of the partial matrix is enumerated: unknowns are
//! digits of a base-p counter, the first unknown in row-major order being
//! the most significant digit. The result is the minimum rank together
//! with the first completion (in counter order) attaining it, so the
//! witness is reproducible.
//!
//! The default path splits the counter range across rayon workers and
//! reduces with a deterministic two-pass scheme (minimum first, earliest
//! witness second), so the outcome does not depend on the worker count.
//! The sequential path is always available and is what the `parallel`
//! feature falls back to; the criterion bench compares the two.
//!
//! Rank evaluations run on raw residues with an abort bound: once a
//! completion accumulates more pivots than the best rank seen so far it
//! cannot win and the elimination stops early. Aborted evaluations report
//! the bound itself, which never undercuts a true minimum.

use std::sync::atomic::{AtomicUsize, Ordering};

use crate::error::{Error, Result};
use crate::field::Scalar;
use crate::matrix::ExactMatrix;
use crate::partial::PartialMatrix;

#[cfg(feature = "parallel")]
use rayon::prelude::*;

/// Default cap on the number of completions a brute-force call may visit.
pub const DEFAULT_SEARCH_BUDGET: u64 = 1 << 24;

#[derive(Clone, Debug)]
pub struct BruteForceResult {
    pub rank: usize,
    /// First completion in enumeration order attaining the rank.
    pub witness: ExactMatrix,
    /// Size of the search space that was enumerated.
    pub search_space: u64,
}

struct Instance {
    rows: usize,
    cols: usize,
    p: u64,
    /// Known entries as residues, row-major; unknowns hold 0 until filled.
    base: Vec<u64>,
    /// Row-major offsets of the unknowns, most significant digit first.
    slots: Vec<usize>,
    /// slot value place weights: powers of p, matching `slots`.
    weights: Vec<u64>,
    total: u64,
    /// 0 when the zero completion is conceivable, else 1.
    lower_bound: usize,
}

impl Instance {
    fn build(a: &PartialMatrix, budget: u64) -> Result<Instance> {
        let Some(p) = a.spec().modulus() else {
            return Err(Error::NotEnumerable);
        };
        let rows = a.rows();
        let cols = a.cols();
        let mut base = vec![0u64; rows * cols];
        for ((i, j), v) in a.values() {
            base[(i - 1) * cols + (j - 1)] = v.residue().expect("prime field value");
        }
        let slots: Vec<usize> = a
            .unknown_positions()
            .iter()
            .map(|&(i, j)| (i - 1) * cols + (j - 1))
            .collect();
        let mut total: u128 = 1;
        for _ in 0..slots.len() {
            total = total.saturating_mul(p as u128);
        }
        if total > budget as u128 {
            return Err(Error::BudgetExceeded {
                needed: total,
                budget,
            });
        }
        let total = total as u64;
        let mut weights = vec![1u64; slots.len()];
        for idx in (0..slots.len().saturating_sub(1)).rev() {
            weights[idx] = weights[idx + 1] * p;
        }
        let lower_bound = if a.values().all(|(_, v)| v.is_zero()) {
            0
        } else {
            1
        };
        Ok(Instance {
            rows,
            cols,
            p,
            base,
            slots,
            weights,
            total,
            lower_bound,
        })
    }

    fn fill(&self, index: u64, scratch: &mut [u64]) {
        scratch.copy_from_slice(&self.base);
        for (slot, weight) in self.slots.iter().zip(&self.weights) {
            scratch[*slot] = (index / weight) % self.p;
        }
    }

    /// Exact rank when it is below `bound`, otherwise `bound`.
    fn rank_bounded(&self, scratch: &mut [u64], bound: usize) -> usize {
        gf_rank_bounded(scratch, self.rows, self.cols, self.p, bound)
    }

    fn materialize(&self, index: u64, a: &PartialMatrix) -> ExactMatrix {
        let mut scratch = vec![0u64; self.rows * self.cols];
        self.fill(index, &mut scratch);
        ExactMatrix::from_fn(a.spec(), self.rows, self.cols, |i, j| {
            Scalar::integer(a.spec(), scratch[i * self.cols + j] as i64)
        })
    }
}

fn gf_rank_bounded(data: &mut [u64], rows: usize, cols: usize, p: u64, bound: usize) -> usize {
    let mut rank = 0usize;
    let mut row = 0usize;
    for col in 0..cols {
        if row == rows || rank >= bound {
            break;
        }
        let Some(pivot) = (row..rows).find(|&r| data[r * cols + col] != 0) else {
            continue;
        };
        if pivot != row {
            let (upper, lower) = data.split_at_mut(pivot * cols);
            upper[row * cols + col..row * cols + cols].swap_with_slice(&mut lower[col..cols]);
        }
        let inv = gf_inverse(data[row * cols + col], p);
        let (upper, lower) = data.split_at_mut((row + 1) * cols);
        let pivot_row = &upper[row * cols + col..];
        for below in lower.chunks_exact_mut(cols) {
            let lead = below[col];
            if lead == 0 {
                continue;
            }
            let factor = p - (lead * inv) % p;
            for (cell, &pivot_cell) in below[col..].iter_mut().zip(pivot_row) {
                *cell = (*cell + factor * pivot_cell) % p;
            }
        }
        row += 1;
        rank += 1;
    }
    rank.min(bound)
}

fn gf_inverse(a: u64, p: u64) -> u64 {
    let (mut old_r, mut r) = (a as i128, p as i128);
    let (mut old_s, mut s) = (1i128, 0i128);
    while r != 0 {
        let q = old_r / r;
        (old_r, r) = (r, old_r - q * r);
        (old_s, s) = (s, old_s - q * s);
    }
    old_s.rem_euclid(p as i128) as u64
}

/// Minimum rank over all completions, enumerated one by one, earliest
/// witness. Errors with `NotEnumerable` over the rationals and with
/// `BudgetExceeded` when p^unknowns exceeds the budget.
pub fn mr_bruteforce(a: &PartialMatrix, budget: u64) -> Result<BruteForceResult> {
    #[cfg(feature = "parallel")]
    {
        mr_bruteforce_parallel(a, budget)
    }
    #[cfg(not(feature = "parallel"))]
    {
        mr_bruteforce_sequential(a, budget)
    }
}

/// Below this many completions the coordination cost outweighs the split.
#[cfg(feature = "parallel")]
const PARALLEL_THRESHOLD: u64 = 1 << 14;

/// Chunk floor for the range split; keeps rayon task overhead negligible.
#[cfg(feature = "parallel")]
const CHUNK_MIN: usize = 1 << 10;

/// Single-threaded enumeration; one pass with an adaptive abort bound.
pub fn mr_bruteforce_sequential(a: &PartialMatrix, budget: u64) -> Result<BruteForceResult> {
    let instance = Instance::build(a, budget)?;
    sequential_scan(a, instance)
}

fn sequential_scan(a: &PartialMatrix, instance: Instance) -> Result<BruteForceResult> {
    let max_rank = instance.rows.min(instance.cols);
    let mut scratch = vec![0u64; instance.rows * instance.cols];
    let mut best = max_rank + 1;
    let mut best_index = 0u64;
    for index in 0..instance.total {
        instance.fill(index, &mut scratch);
        let r = instance.rank_bounded(&mut scratch, best);
        if r < best {
            best = r;
            best_index = index;
            if best == instance.lower_bound {
                break;
            }
        }
    }
    Ok(BruteForceResult {
        rank: best,
        witness: instance.materialize(best_index, a),
        search_space: instance.total,
    })
}

/// Work-partitioned enumeration. Pass one finds the minimum rank with a
/// shared abort hint; pass two locates the earliest witness, so the result
/// is identical to the sequential path for any worker count.
#[cfg(feature = "parallel")]
pub fn mr_bruteforce_parallel(a: &PartialMatrix, budget: u64) -> Result<BruteForceResult> {
    let instance = Instance::build(a, budget)?;
    if instance.total < PARALLEL_THRESHOLD {
        return sequential_scan(a, instance);
    }
    let max_rank = instance.rows.min(instance.cols);
    // minimum pass: the shared hint tightens every abort bound and lets
    // the scan stop as soon as the floor is reached; aborted evaluations
    // report their bound, which never undercuts the true minimum
    let best_hint = AtomicUsize::new(max_rank + 1);
    let total = usize::try_from(instance.total).expect("budget-capped search space");
    (0..total)
        .into_par_iter()
        .with_min_len(CHUNK_MIN)
        .map_init(
            || vec![0u64; instance.rows * instance.cols],
            |scratch, index| {
                let bound = best_hint.load(Ordering::Relaxed);
                instance.fill(index as u64, scratch);
                let r = instance.rank_bounded(scratch, bound);
                if r < bound {
                    best_hint.fetch_min(r, Ordering::Relaxed);
                }
            },
        )
        .find_any(|_| best_hint.load(Ordering::Relaxed) == instance.lower_bound);
    let min_rank = best_hint.load(Ordering::Relaxed);
    let witness_index = (0..total)
        .into_par_iter()
        .with_min_len(CHUNK_MIN)
        .map_init(
            || vec![0u64; instance.rows * instance.cols],
            |scratch, index| {
                instance.fill(index as u64, scratch);
                (index, instance.rank_bounded(scratch, min_rank + 1))
            },
        )
        .find_first(|&(_, r)| r == min_rank)
        .map(|(index, _)| index as u64)
        .unwrap_or(0);
    Ok(BruteForceResult {
        rank: min_rank,
        witness: instance.materialize(witness_index, a),
        search_space: instance.total,
    })
}

/// b-fold minimal rank: minimal rank of the tensor with `I_b`. The budget
/// applies to the lifted search space p^(b²·unknowns).
pub fn mr_b(a: &PartialMatrix, b: usize, budget: u64) -> Result<BruteForceResult> {
    assert!(b >= 1, "fold factor must be positive");
    mr_bruteforce(&a.tensor_identity(b), budget)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::FieldSpec;
    use crate::partial::PartialMatrix;

    fn gf(p: u64) -> FieldSpec {
        FieldSpec::prime(p).unwrap()
    }

    fn cycle3(spec: FieldSpec, corner: i64) -> PartialMatrix {
        PartialMatrix::from_int_rows(
            spec,
            &[
                &[Some(1), Some(1), None],
                &[None, Some(1), Some(1)],
                &[Some(corner), None, Some(1)],
            ],
        )
    }

    #[test]
    fn all_ones_completion_wins() {
        let a = PartialMatrix::from_int_rows(gf(2), &[&[Some(1), None], &[None, Some(1)]]);
        let result = mr_bruteforce(&a, DEFAULT_SEARCH_BUDGET).unwrap();
        assert_eq!(result.rank, 1);
        assert_eq!(result.search_space, 4);
        assert_eq!(
            result.witness,
            ExactMatrix::from_ints(gf(2), &[&[1, 1], &[1, 1]])
        );
        assert!(a.is_completion(&result.witness));
    }

    #[test]
    fn cycle_rank_depends_on_corner() {
        // product mismatch forces rank 2, match allows rank 1
        let twisted = cycle3(gf(3), 2);
        let result = mr_bruteforce(&twisted, DEFAULT_SEARCH_BUDGET).unwrap();
        assert_eq!(result.rank, 2);
        assert!(twisted.is_completion(&result.witness));
        assert_eq!(result.witness.rank(), 2);

        let aligned = cycle3(gf(3), 1);
        let result = mr_bruteforce(&aligned, DEFAULT_SEARCH_BUDGET).unwrap();
        assert_eq!(result.rank, 1);
        assert_eq!(result.witness.rank(), 1);
    }

    #[test]
    fn rationals_are_rejected() {
        let a = PartialMatrix::from_int_rows(
            FieldSpec::RATIONALS,
            &[&[Some(1), None], &[None, Some(1)]],
        );
        assert!(matches!(
            mr_bruteforce(&a, DEFAULT_SEARCH_BUDGET),
            Err(Error::NotEnumerable)
        ));
    }

    #[test]
    fn budget_is_enforced() {
        let a = PartialMatrix::from_int_rows(gf(3), &[&[Some(1), None], &[None, None]]);
        // 3^3 = 27 completions
        assert!(mr_bruteforce(&a, 27).is_ok());
        assert!(matches!(
            mr_bruteforce(&a, 26),
            Err(Error::BudgetExceeded { needed: 27, .. })
        ));
    }

    #[test]
    fn zero_knowns_allow_rank_zero() {
        let a = PartialMatrix::from_int_rows(gf(2), &[&[Some(0), None], &[None, Some(0)]]);
        let result = mr_bruteforce(&a, DEFAULT_SEARCH_BUDGET).unwrap();
        assert_eq!(result.rank, 0);
        assert_eq!(result.witness, ExactMatrix::zeros(gf(2), 2, 2));
    }

    #[test]
    fn fully_known_is_plain_rank() {
        let a = PartialMatrix::from_int_rows(gf(5), &[&[Some(1), Some(2)], &[Some(2), Some(4)]]);
        let result = mr_bruteforce(&a, DEFAULT_SEARCH_BUDGET).unwrap();
        assert_eq!(result.rank, 1);
        assert_eq!(result.search_space, 1);
    }

    #[test]
    fn fast_rank_agrees_with_exact_matrix_rank() {
        let mut state = 41u64;
        for _ in 0..60 {
            let p = [2u64, 3, 5, 7][(state % 4) as usize];
            let rows = 2 + (state % 4) as usize;
            let cols = 2 + ((state >> 8) % 4) as usize;
            let mut data = vec![0u64; rows * cols];
            for cell in data.iter_mut() {
                state ^= state << 13;
                state ^= state >> 7;
                state ^= state << 17;
                *cell = state % p;
            }
            let exact = ExactMatrix::from_fn(gf(p), rows, cols, |i, j| {
                Scalar::integer(gf(p), data[i * cols + j] as i64)
            });
            let mut scratch = data.clone();
            let fast = gf_rank_bounded(&mut scratch, rows, cols, p, rows.min(cols) + 1);
            assert_eq!(fast, exact.rank());
            // bounded evaluation never under-reports below its bound
            for bound in 0..=rows.min(cols) {
                let mut scratch = data.clone();
                let bounded = gf_rank_bounded(&mut scratch, rows, cols, p, bound);
                assert_eq!(bounded, exact.rank().min(bound));
            }
        }
    }

    #[cfg(feature = "parallel")]
    #[test]
    fn parallel_and_sequential_agree() {
        // the 4x4 instances have 3^9..3^10 completions, above the
        // sequential-dispatch threshold, so the split path really runs
        let cases = [
            cycle3(gf(3), 2),
            cycle3(gf(3), 1),
            PartialMatrix::from_int_rows(
                gf(2),
                &[
                    &[Some(1), None, Some(0)],
                    &[None, None, Some(1)],
                    &[Some(1), Some(1), None],
                ],
            ),
            PartialMatrix::from_int_rows(
                gf(3),
                &[
                    &[Some(1), None, None, Some(2)],
                    &[None, Some(0), Some(1), None],
                    &[Some(2), None, None, Some(1)],
                    &[None, Some(1), None, None],
                ],
            ),
            PartialMatrix::from_int_rows(
                gf(3),
                &[
                    &[None, None, Some(1), None],
                    &[None, Some(2), None, Some(1)],
                    &[Some(1), None, Some(1), None],
                    &[None, Some(1), None, Some(2)],
                ],
            ),
        ];
        let mut large = 0;
        for a in &cases {
            let seq = mr_bruteforce_sequential(a, DEFAULT_SEARCH_BUDGET).unwrap();
            let par = mr_bruteforce_parallel(a, DEFAULT_SEARCH_BUDGET).unwrap();
            assert_eq!(seq.rank, par.rank);
            assert_eq!(seq.witness, par.witness, "witnesses must be identical");
            if seq.search_space >= PARALLEL_THRESHOLD {
                large += 1;
            }
        }
        assert!(large >= 2, "the two-pass parallel reduction must be exercised");
    }

    #[test]
    fn mr_b_at_one_is_mr() {
        let a = cycle3(gf(3), 2);
        let direct = mr_bruteforce(&a, DEFAULT_SEARCH_BUDGET).unwrap();
        let lifted = mr_b(&a, 1, DEFAULT_SEARCH_BUDGET).unwrap();
        assert_eq!(direct.rank, lifted.rank);
        assert_eq!(direct.witness, lifted.witness);
    }
}
