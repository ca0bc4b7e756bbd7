//! Minimal rank of triangular patterns, and the triangular minimal rank
//! of arbitrary patterns.
//!
//! For a triangular pattern the minimal rank has a closed form: bring the
//! pattern into block lower triangular position and combine the ranks of
//! the stacked known blocks
//!
//! ```text
//!   mr = Σ_{i=1..m} rank(rows i.., cols ..i) − Σ_{i=1..m-1} rank(rows i+1.., cols ..i)
//! ```
//!
//! The triangular minimal rank of a general pattern is the maximum of this
//! over all maximal triangular subpatterns; it is a lower bound for the
//! minimal rank.

use crate::error::{Error, Result};
use crate::matrix::ExactMatrix;
use crate::partial::{PartialMatrix, Pattern};
use crate::patterns::{maximal_triangular_subpatterns, triangular_block_form};

/// Exact minimal rank of a triangular partial matrix.
pub fn tmr_of_triangular(a: &PartialMatrix) -> Result<usize> {
    let form = triangular_block_form(a.pattern())?;
    let b = a
        .permute(&form.row_perm, &form.col_perm)
        .expect("block form permutations are valid");
    let m = form.col_block_sizes.len();
    if m == 0 {
        return Ok(0);
    }
    let supported_rows: usize = form.row_block_sizes.iter().sum();
    let total_rows = form.leading_empty_rows + supported_rows;
    let mut row_starts = Vec::with_capacity(m); // permuted row index starting block row i
    let mut acc = form.leading_empty_rows;
    for size in &form.row_block_sizes {
        row_starts.push(acc + 1);
        acc += size;
    }
    let mut col_ends = Vec::with_capacity(m); // permuted col index ending block col i
    acc = 0;
    for size in &form.col_block_sizes {
        acc += size;
        col_ends.push(acc);
    }

    // rank of the known submatrix on permuted rows from..=total, cols 1..=to
    let stacked_rank = |row_from: usize, col_to: usize| -> usize {
        if row_from > total_rows || col_to == 0 {
            return 0;
        }
        let mat = ExactMatrix::from_fn(a.spec(), total_rows - row_from + 1, col_to, |i, j| {
            b.value((row_from + i, j + 1))
                .expect("block lower triangular region is known")
                .clone()
        });
        mat.rank()
    };

    let mut total = 0usize;
    for i in 0..m {
        total += stacked_rank(row_starts[i], col_ends[i]);
    }
    for i in 0..m - 1 {
        total -= stacked_rank(row_starts[i + 1], col_ends[i]);
    }
    Ok(total)
}

/// Triangular minimal rank of a partial matrix, with the witnessing
/// subpattern.
#[derive(Clone, Debug)]
pub struct TmrOutcome {
    pub value: usize,
    /// `false` when the subpattern enumeration hit its budget; the value
    /// is then only a lower bound.
    pub exhaustive: bool,
    /// A maximal triangular subpattern attaining the value.
    pub witness: Option<Pattern>,
}

pub fn tmr(a: &PartialMatrix, node_budget: u64) -> Result<TmrOutcome> {
    let found = maximal_triangular_subpatterns(a.pattern(), node_budget);
    let mut patterns = found.patterns;
    patterns.sort();
    let mut best = 0usize;
    let mut witness = None;
    for t in &patterns {
        let restricted = a.restrict(t)?;
        let value = tmr_of_triangular(&restricted)?;
        if value > best || witness.is_none() {
            best = value;
            witness = Some(t.clone());
        }
    }
    if patterns.is_empty() {
        // only possible for the empty pattern via the fast path; keep the
        // contract total anyway
        best = 0;
        witness = Some(Pattern::empty(a.rows(), a.cols()));
    }
    Ok(TmrOutcome {
        value: best,
        exhaustive: found.exhaustive,
        witness,
    })
}

/// Shortcut used by several callers: tmr is exact (enumeration finished)
/// or an error is raised.
pub fn tmr_exact(a: &PartialMatrix, node_budget: u64) -> Result<usize> {
    let outcome = tmr(a, node_budget)?;
    if !outcome.exhaustive {
        return Err(Error::BudgetExceeded {
            needed: u128::from(node_budget) + 1,
            budget: node_budget,
        });
    }
    Ok(outcome.value)
}
