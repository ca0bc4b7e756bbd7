//! Explicit completions of cycle patterns with certified ranks.
//!
//! Everything here is constructive and distrustful: each builder re-checks
//! that its output completes the pattern and has the promised rank, and
//! surfaces `ConstructionRankFailure` instead of returning a bad witness.
//!
//! The centerpiece is the rank-n completion of the canonical block cycle
//! with corner H of size k = n−1, d = dim ker(H−I) = 0 and split spectrum
//! avoiding {0, 1}. With H in Jordan form J, the first block column holds
//! truncated copies of J,
//!
//! ```text
//!   A_i1 = (leading (i−1)×(i−1) of J) ⊕ I_{k−i+1}
//! ```
//!
//! the first column of the second block column follows the recurrence
//!
//! ```text
//!   v₁ = v₂ = e₁,   v_i = v_{i−1} + (1−λ_{i−1})·e_{i−1} − ε_{i−2}·e_{i−2}
//! ```
//!
//! and every remaining column is a linear combination of these n columns,
//! with coefficients shared across block rows. The combination for block
//! column j is pinned by the identity blocks in block rows j−1 and j, so
//! the coefficients are obtained by solving that exact linear system
//! rather than from a closed formula; the choice of v makes the system
//! solvable precisely because no eigenvalue is 0 or 1. Rank ≤ n holds by
//! construction and the lower bound (nk−0)/(n−1) = n pins it.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::field::{FieldSpec, Scalar};
use crate::jordan::{eigenvalues_in_field, jordan_form};
use crate::matrix::ExactMatrix;
use crate::minrank::cycle::{block_cycle_bound, scale_to_ah, EqualityCase};
use crate::partial::{BlockPartialMatrix, PartialMatrix};
use crate::patterns::{recognize_cycle_pattern, CycleForm};

/// Rank-n completion of the canonical block cycle pattern with corner `h`,
/// k = n−1. Requires split eigenvalues, none of them 0 or 1.
pub fn construct_cycle_completion(h: &ExactMatrix, n: usize) -> Result<ExactMatrix> {
    assert!(n >= 3, "block cycles start at n = 3");
    let k = n - 1;
    let spec = h.spec();
    if h.rows() != k || h.cols() != k {
        return Err(Error::ShapeMismatch {
            expected: (k, k),
            got: (h.rows(), h.cols()),
        });
    }
    let Some(eigenvalues) = eigenvalues_in_field(h) else {
        return Err(Error::EigenvalueObstruction(
            "characteristic polynomial does not split over the field".into(),
        ));
    };
    for (value, _) in &eigenvalues {
        if value.is_zero() {
            return Err(Error::EigenvalueObstruction("eigenvalue 0".into()));
        }
        if value.is_one() {
            return Err(Error::EigenvalueObstruction(
                "eigenvalue 1 (fixed space is nontrivial)".into(),
            ));
        }
    }
    let dec = jordan_form(h).expect("spectrum splits");
    let j = &dec.jordan;
    let s = &dec.transform;
    let s_inv = s.inverse().expect("jordan basis is invertible");

    let jordan_completion = complete_canonical_jordan_cycle(j, n)?;

    // conjugate blockwise back to the corner h
    let mut completion = ExactMatrix::zeros(spec, n * k, n * k);
    for bi in 0..n {
        for bj in 0..n {
            let block = jordan_completion.block(bi, bj, k);
            let mapped = s.mul(&block)?.mul(&s_inv)?;
            completion.set_block(bi, bj, &mapped);
        }
    }

    assert_cycle_membership(&completion, h, n)?;
    let rank = completion.rank();
    if rank != n {
        return Err(Error::ConstructionRankFailure(format!(
            "completion has rank {rank}, expected {n}"
        )));
    }
    Ok(completion)
}

// The construction for a corner already in Jordan form.
fn complete_canonical_jordan_cycle(j: &ExactMatrix, n: usize) -> Result<ExactMatrix> {
    let k = n - 1;
    let spec = j.spec();
    let one = spec.one();

    // first block column: truncated Jordan data
    let first_column_block = |i: usize| -> ExactMatrix {
        // i is 1-based; leading (i−1)×(i−1) of j, identity elsewhere
        ExactMatrix::from_fn(spec, k, k, |r, c| {
            if r < i - 1 && c < i - 1 {
                j.get(r, c).clone()
            } else if r == c {
                one.clone()
            } else {
                spec.zero()
            }
        })
    };

    // v-recurrence; v[i] is the first column of block (i+1, 2)
    let lambda = |m: usize| j.get(m - 1, m - 1).clone(); // 1-based
    let epsilon = |m: usize| j.get(m - 1, m).clone();
    let mut v: Vec<Vec<Scalar>> = Vec::with_capacity(n);
    let mut e1 = vec![spec.zero(); k];
    e1[0] = one.clone();
    v.push(e1.clone());
    v.push(e1);
    for i in 3..=n {
        let mut next = v[i - 2].clone();
        next[i - 2] = next[i - 2].add(&one.sub(&lambda(i - 1))?)?;
        if i >= 3 {
            next[i - 3] = next[i - 3].sub(&epsilon(i - 2))?;
        }
        v.push(next);
    }

    // per-row basis B_i = [A_i1 | v_i], k×n
    let basis: Vec<ExactMatrix> = (1..=n)
        .map(|i| {
            let a_i1 = first_column_block(i);
            let v_col = ExactMatrix::from_fn(spec, k, 1, |r, _| v[i - 1][r].clone());
            a_i1.hstack(&v_col).expect("same height")
        })
        .collect();

    let identity = ExactMatrix::identity(spec, k);
    let mut completion = ExactMatrix::zeros(spec, n * k, n * k);
    for (i, b) in basis.iter().enumerate() {
        completion.set_block(i, 0, &first_column_block(i + 1));
        let _ = b;
    }
    for jcol in 2..=n {
        // coefficients pinned by the identity blocks in rows jcol−1, jcol
        let stack = basis[jcol - 2].vstack(&basis[jcol - 1])?;
        let rhs = identity.vstack(&identity)?;
        let Some(coeffs) = stack.solve(&rhs) else {
            return Err(Error::ConstructionRankFailure(format!(
                "no shared coefficients for block column {jcol}"
            )));
        };
        for (i, b) in basis.iter().enumerate() {
            let block = b.mul(&coeffs)?;
            completion.set_block(i, jcol - 1, &block);
        }
    }
    Ok(completion)
}

fn assert_cycle_membership(completion: &ExactMatrix, corner: &ExactMatrix, n: usize) -> Result<()> {
    let k = corner.rows();
    for i in 0..n {
        if !completion.block(i, i, k).is_identity() {
            return Err(Error::ConstructionRankFailure(format!(
                "diagonal block {} is not the identity",
                i + 1
            )));
        }
        if i + 1 < n && !completion.block(i, i + 1, k).is_identity() {
            return Err(Error::ConstructionRankFailure(format!(
                "superdiagonal block {} is not the identity",
                i + 1
            )));
        }
    }
    if completion.block(n - 1, 0, k) != *corner {
        return Err(Error::ConstructionRankFailure(
            "corner block does not reproduce H".into(),
        ));
    }
    Ok(())
}

/// Completion of an arbitrary block cycle in one of the two certified
/// cases, mapped back through the scaling. Returns the completion and its
/// certified rank.
pub fn complete_block_cycle(b: &BlockPartialMatrix) -> Result<(ExactMatrix, usize)> {
    let analysis = block_cycle_bound(b)?;
    let scaled = scale_to_ah(b)?;
    let n = analysis.n;
    let k = analysis.k;
    let spec = b.spec();
    let canonical_completion = match analysis.equality {
        Some(EqualityCase::FixedSpace) => {
            // H = I: the all-ones block matrix has rank k
            let ones = ExactMatrix::from_fn(spec, n, n, |_, _| spec.one());
            ones.kron(&ExactMatrix::identity(spec, k))?
        }
        Some(EqualityCase::Construction) => construct_cycle_completion(&analysis.h, n)?,
        None => {
            return Err(Error::EigenvalueObstruction(
                "no certified completion for this block cycle".into(),
            ))
        }
    };
    let completion = scaled
        .p
        .inverse()
        .expect("block diagonal of inverses")
        .mul(&canonical_completion)?
        .mul(&scaled.q.inverse().expect("block diagonal of inverses"))?;
    let lowered = b.lower();
    if !lowered.is_completion(&completion) {
        return Err(Error::ConstructionRankFailure(
            "scaled completion does not match the known blocks".into(),
        ));
    }
    let expected = analysis.mr_exact.expect("equality case certifies the rank");
    let rank = completion.rank();
    if rank != expected {
        return Err(Error::ConstructionRankFailure(format!(
            "completion has rank {rank}, expected {expected}"
        )));
    }
    Ok((completion, rank))
}

/// Canonical values of a recognized scalar cycle: `diag[i]` sits at
/// canonical (i+1, i+1), `off[i]` at (i+1, i+2), the last at (n, 1).
pub(crate) struct CanonicalCycle {
    pub n: usize,
    pub diag: Vec<Scalar>,
    pub off: Vec<Scalar>,
    pub form: CycleForm,
    pub spec: FieldSpec,
}

pub(crate) fn canonical_cycle(a: &PartialMatrix) -> Result<CanonicalCycle> {
    let form = recognize_cycle_pattern(a.pattern()).ok_or(Error::NotACycle)?;
    let diag = form
        .diagonal_positions
        .iter()
        .map(|&p| a.value(p).expect("recognized positions are known").clone())
        .collect();
    let off = form
        .cycle_positions
        .iter()
        .map(|&p| a.value(p).expect("recognized positions are known").clone())
        .collect();
    Ok(CanonicalCycle {
        n: form.n,
        diag,
        off,
        form,
        spec: a.spec(),
    })
}

// Move a completion built for the canonical layout back onto the original
// row/column order.
fn uncanonicalize(canonical: &ExactMatrix, form: &CycleForm) -> ExactMatrix {
    ExactMatrix::from_fn(
        canonical.spec(),
        canonical.rows(),
        canonical.cols(),
        |i, jj| {
            canonical
                .get(form.row_perm[i] - 1, form.col_perm[jj] - 1)
                .clone()
        },
    )
}

/// Rank-1 completion of a scalar cycle when one exists: assigns row and
/// column weights around the cycle, zeroing the vertices whose knowns are
/// all zero. Returns `None` when no rank-1 completion exists (h ≠ 1, or a
/// zero known that no zero vertex covers).
pub fn rank1_cycle_completion(a: &PartialMatrix) -> Result<Option<ExactMatrix>> {
    let cycle = canonical_cycle(a)?;
    let n = cycle.n;
    let spec = cycle.spec;
    // knowns of row i: diag[i] and off[i]; knowns of col j: diag[j] and
    // off[j-1] (indices mod n, 0-based)
    let row_zero: Vec<bool> = (0..n)
        .map(|i| cycle.diag[i].is_zero() && cycle.off[i].is_zero())
        .collect();
    let col_zero: Vec<bool> = (0..n)
        .map(|j| cycle.diag[j].is_zero() && cycle.off[(j + n - 1) % n].is_zero())
        .collect();

    let mut row_weight: Vec<Option<Scalar>> =
        (0..n).map(|i| row_zero[i].then(|| spec.zero())).collect();
    let mut col_weight: Vec<Option<Scalar>> =
        (0..n).map(|j| col_zero[j].then(|| spec.zero())).collect();

    // nonzero edges as (row, col, value) in canonical coordinates
    let mut edges: Vec<(usize, usize, Scalar)> = Vec::new();
    for i in 0..n {
        if !cycle.diag[i].is_zero() {
            edges.push((i, i, cycle.diag[i].clone()));
        }
        if !cycle.off[i].is_zero() {
            edges.push((i, (i + 1) % n, cycle.off[i].clone()));
        }
    }

    // propagate weights along nonzero edges; seed one free vertex per
    // component with 1
    loop {
        let mut changed = false;
        for (i, j, value) in &edges {
            match (row_weight[*i].clone(), col_weight[*j].clone()) {
                (Some(r), None) => {
                    if r.is_zero() {
                        return Ok(None); // zeroed row on a nonzero known
                    }
                    col_weight[*j] = Some(value.div(&r)?);
                    changed = true;
                }
                (None, Some(c)) => {
                    if c.is_zero() {
                        return Ok(None);
                    }
                    row_weight[*i] = Some(value.div(&c)?);
                    changed = true;
                }
                _ => {}
            }
        }
        if changed {
            continue;
        }
        let unseeded = edges
            .iter()
            .find(|(i, j, _)| row_weight[*i].is_none() && col_weight[*j].is_none());
        match unseeded {
            Some((i, _, _)) => {
                row_weight[*i] = Some(spec.one());
            }
            None => break,
        }
    }
    for w in row_weight.iter_mut().chain(col_weight.iter_mut()) {
        if w.is_none() {
            *w = Some(spec.zero());
        }
    }
    // verify every known edge, including the zero ones
    let check = |i: usize, j: usize, value: &Scalar| -> Result<bool> {
        let prod = row_weight[i]
            .as_ref()
            .unwrap()
            .mul(col_weight[j].as_ref().unwrap())?;
        Ok(prod == *value)
    };
    for i in 0..n {
        if !check(i, i, &cycle.diag[i])? || !check(i, (i + 1) % n, &cycle.off[i])? {
            return Ok(None);
        }
    }
    let canonical = ExactMatrix::from_fn(spec, n, n, |i, j| {
        row_weight[i]
            .as_ref()
            .unwrap()
            .mul_unchecked(col_weight[j].as_ref().unwrap())
    });
    let completion = uncanonicalize(&canonical, &cycle.form);
    debug_assert!(a.is_completion(&completion));
    Ok(Some(completion))
}

/// A completion of a scalar cycle with rank at most 2, for any values.
/// Columns 2..n of the canonical layout alternate between two generator
/// vectors (consecutive columns may share one when their common pinned row
/// agrees); column 1 is a linear combination of the generators.
#[allow(clippy::needless_range_loop)] // 1-based column walks read better as ranges
pub fn rank2_cycle_completion(a: &PartialMatrix) -> Result<ExactMatrix> {
    let cycle = canonical_cycle(a)?;
    let n = cycle.n;
    let spec = cycle.spec;
    // color columns 2..n along the path they form
    let mut color = vec![0usize; n + 1]; // 1-based column index, columns 2..n
    color[2] = 0;
    for j in 3..=n {
        // columns j−1 and j share row j−1: values diag[j−2] and off[j−2]
        let conflict = cycle.diag[j - 2] != cycle.off[j - 2];
        color[j] = if conflict {
            1 - color[j - 1]
        } else {
            color[j - 1]
        };
    }
    // generators with pinned entries; None = free
    let mut gens: [Vec<Option<Scalar>>; 2] = [vec![None; n], vec![None; n]];
    for j in 2..=n {
        let g = color[j];
        // column j pins row j−1 to off[j−2] and row j to diag[j−1]
        set_pinned(&mut gens[g], j - 2, &cycle.off[j - 2])?;
        set_pinned(&mut gens[g], j - 1, &cycle.diag[j - 1])?;
    }
    // column 1 pins row 1 to diag[0] and row n to off[n−1]; solve
    // col1 = α·gen0 + β·gen1 using the free corner entries
    let g2 = color[2];
    let gn = color[n];
    let s1 = cycle.off[0].clone(); // gens[g2][0]
    let dn = cycle.diag[n - 1].clone(); // gens[gn][n-1]
    let (alpha, beta);
    if g2 != gn {
        // det forced to 1 by choosing the free corners
        set_free(&mut gens[1 - g2], 0, spec.one());
        let adj = s1.mul(&dn)?.sub(&spec.one())?;
        set_free(&mut gens[1 - gn], n - 1, adj);
        // [s1 f1; f2 dn] with f1 = 1 (other gen row 1), f2 = s1·dn − 1
        // solve for col1 pins (d1, s_n)
        let m = matrix2(
            spec,
            [
                gen_entry(&gens[0], 0, spec),
                gen_entry(&gens[1], 0, spec),
                gen_entry(&gens[0], n - 1, spec),
                gen_entry(&gens[1], n - 1, spec),
            ],
        );
        let sol = solve2(&m, &cycle.diag[0], &cycle.off[n - 1])?;
        (alpha, beta) = sol;
    } else {
        let other = 1 - g2;
        if !s1.is_zero() {
            set_free(&mut gens[other], 0, spec.zero());
            set_free(&mut gens[other], n - 1, spec.one());
        } else if !dn.is_zero() {
            set_free(&mut gens[other], 0, spec.one());
            set_free(&mut gens[other], n - 1, spec.zero());
        } else {
            // both pinned corners vanish: column 1 is the other generator
            set_free(&mut gens[other], 0, cycle.diag[0].clone());
            set_free(&mut gens[other], n - 1, cycle.off[n - 1].clone());
        }
        let m = matrix2(
            spec,
            [
                gen_entry(&gens[0], 0, spec),
                gen_entry(&gens[1], 0, spec),
                gen_entry(&gens[0], n - 1, spec),
                gen_entry(&gens[1], n - 1, spec),
            ],
        );
        let sol = solve2(&m, &cycle.diag[0], &cycle.off[n - 1])?;
        (alpha, beta) = sol;
    }
    let gen_vec =
        |g: usize| -> Vec<Scalar> { (0..n).map(|r| gen_entry(&gens[g], r, spec)).collect() };
    let g0 = gen_vec(0);
    let g1 = gen_vec(1);
    let canonical = ExactMatrix::from_fn(spec, n, n, |i, j| {
        if j == 0 {
            alpha
                .mul_unchecked(&g0[i])
                .add_unchecked(&beta.mul_unchecked(&g1[i]))
        } else {
            gen_vec(color[j + 1])[i].clone()
        }
    });
    let completion = uncanonicalize(&canonical, &cycle.form);
    if !a.is_completion(&completion) {
        return Err(Error::ConstructionRankFailure(
            "two-generator completion misses a known entry".into(),
        ));
    }
    if completion.rank() > 2 {
        return Err(Error::ConstructionRankFailure(
            "two-generator completion exceeds rank 2".into(),
        ));
    }
    Ok(completion)
}

fn set_pinned(gen: &mut [Option<Scalar>], idx: usize, value: &Scalar) -> Result<()> {
    match &gen[idx] {
        Some(existing) if existing != value => Err(Error::ConstructionRankFailure(format!(
            "generator conflict at row {}",
            idx + 1
        ))),
        _ => {
            gen[idx] = Some(value.clone());
            Ok(())
        }
    }
}

fn set_free(gen: &mut [Option<Scalar>], idx: usize, value: Scalar) {
    if gen[idx].is_none() {
        gen[idx] = Some(value);
    }
}

fn gen_entry(gen: &[Option<Scalar>], idx: usize, spec: FieldSpec) -> Scalar {
    gen[idx].clone().unwrap_or_else(|| spec.zero())
}

fn matrix2(spec: FieldSpec, entries: [Scalar; 4]) -> ExactMatrix {
    let [a, b, c, d] = entries;
    ExactMatrix::from_rows(spec, vec![vec![a, b], vec![c, d]]).expect("2x2")
}

fn solve2(m: &ExactMatrix, rhs1: &Scalar, rhs2: &Scalar) -> Result<(Scalar, Scalar)> {
    let rhs = ExactMatrix::from_rows(m.spec(), vec![vec![rhs1.clone()], vec![rhs2.clone()]])
        .expect("2x1");
    let sol = m.solve(&rhs).ok_or_else(|| {
        Error::ConstructionRankFailure("column-one system is inconsistent".into())
    })?;
    Ok((sol.get(0, 0).clone(), sol.get(1, 0).clone()))
}

/// Certified minimal-rank completion of a scalar cycle with all entries
/// nonzero: rank 1 when h = 1, else rank 2.
pub fn nonzero_cycle_mr_completion(a: &PartialMatrix) -> Result<(ExactMatrix, usize)> {
    let analysis = crate::minrank::cycle::analyze_cycle(a)?;
    if analysis.h_is_one {
        let witness = rank1_cycle_completion(a)?.ok_or_else(|| {
            Error::ConstructionRankFailure("h = 1 cycle must admit a rank-1 completion".into())
        })?;
        if witness.rank() != 1 {
            return Err(Error::ConstructionRankFailure(
                "rank-1 completion has the wrong rank".into(),
            ));
        }
        Ok((witness, 1))
    } else {
        let witness = rank2_cycle_completion(a)?;
        if witness.rank() != 2 {
            // rank below 2 would contradict h ≠ 1
            return Err(Error::ConstructionRankFailure(
                "rank-2 completion has the wrong rank".into(),
            ));
        }
        Ok((witness, 2))
    }
}

/// Fill map view of a full completion relative to a pattern, for callers
/// that want to re-run `complete`.
pub fn completion_fill(
    a: &PartialMatrix,
    completion: &ExactMatrix,
) -> BTreeMap<(usize, usize), Scalar> {
    a.unknown_positions()
        .into_iter()
        .map(|(i, j)| ((i, j), completion.get(i - 1, j - 1).clone()))
        .collect()
}
