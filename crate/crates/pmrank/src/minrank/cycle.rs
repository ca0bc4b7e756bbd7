//! The cycle invariant and the block-cycle rank bound.
//!
//! For a scalar cycle pattern with nonzero entries, the quotient
//! h = (a₁₂a₂₃⋯aₙ₁)/(a₁₁a₂₂⋯aₙₙ) decides everything: h = 1 admits a
//! rank-1 completion, h ≠ 1 pins mr at 2 and the fractional minimal rank
//! at n/(n−1).
//!
//! For block cycles with invertible known blocks, block-diagonal scalings
//! reduce the pattern to the canonical one with identity blocks and a
//! single corner block H; d = dim ker(H − I) then yields the lower bound
//! (nk − d)/(n − 1), with equality in the two certified cases.

use crate::error::{Error, Result};
use crate::field::{Rational, Scalar};
use crate::jordan::eigenvalues_in_field;
use crate::matrix::ExactMatrix;
use crate::partial::{BlockPartialMatrix, PartialMatrix};
use crate::patterns::{recognize_cycle_pattern, CycleForm};

/// Invariant of a scalar cycle with nonzero entries.
#[derive(Clone, Debug)]
pub struct CycleAnalysis {
    pub n: usize,
    pub h: Scalar,
    pub h_is_one: bool,
    pub form: CycleForm,
}

/// Compute the cycle invariant. Fails with `NotACycle` when the pattern is
/// not a single 2n-cycle and with `ZeroEntry` when a known entry is zero
/// (the zero analysis handles those).
pub fn analyze_cycle(a: &PartialMatrix) -> Result<CycleAnalysis> {
    let form = recognize_cycle_pattern(a.pattern()).ok_or(Error::NotACycle)?;
    for &pos in form
        .diagonal_positions
        .iter()
        .chain(form.cycle_positions.iter())
    {
        if a.value(pos)
            .expect("recognized positions are known")
            .is_zero()
        {
            return Err(Error::ZeroEntry { pos });
        }
    }
    let mut numerator = a.spec().one();
    for &pos in &form.cycle_positions {
        numerator = numerator.mul(a.value(pos).unwrap())?;
    }
    let mut denominator = a.spec().one();
    for &pos in &form.diagonal_positions {
        denominator = denominator.mul(a.value(pos).unwrap())?;
    }
    let h = numerator.div(&denominator)?;
    Ok(CycleAnalysis {
        n: form.n,
        h_is_one: h.is_one(),
        h,
        form,
    })
}

/// Exact fractional minimal rank of a nonzero cycle: 1 when h = 1, else
/// n/(n−1).
pub fn fmr_cycle(a: &PartialMatrix) -> Result<Rational> {
    let analysis = analyze_cycle(a)?;
    Ok(if analysis.h_is_one {
        Rational::from_usize(1)
    } else {
        Rational::ratio(analysis.n, analysis.n - 1)
    })
}

/// Outcome of reducing a block cycle to its canonical form: block-diagonal
/// invertible P and Q such that for any completion B of the input,
/// P·B·Q completes the canonical pattern, with equal ranks.
pub struct ScaledCycle {
    pub p: ExactMatrix,
    pub q: ExactMatrix,
    pub canonical: BlockPartialMatrix,
    pub corner: ExactMatrix,
}

pub fn scale_to_ah(a: &BlockPartialMatrix) -> Result<ScaledCycle> {
    if !a.is_cycle_layout() {
        return Err(Error::NotACycle);
    }
    let n = a.block_rows();
    let k = a.block_size();
    let spec = a.spec();

    let invert = |pos: (usize, usize)| -> Result<ExactMatrix> {
        a.block(pos)
            .expect("cycle layout")
            .inverse()
            .map_err(|_| Error::SingularBlock { pos })
    };

    // P₁ = A₁₁⁻¹, Pᵢ = Pᵢ₋₁·Aᵢ₋₁,ᵢ·Aᵢᵢ⁻¹
    let mut p_blocks = Vec::with_capacity(n);
    p_blocks.push(invert((1, 1))?);
    for i in 2..=n {
        let prev = p_blocks.last().unwrap();
        let step = prev
            .mul(a.block((i - 1, i)).expect("cycle layout"))?
            .mul(&invert((i, i))?)?;
        p_blocks.push(step);
    }
    // Q₁ = I, Qᵢ = Aᵢ₋₁,ᵢ⁻¹·Aᵢ₋₁,ᵢ₋₁·Qᵢ₋₁
    let mut q_blocks = Vec::with_capacity(n);
    q_blocks.push(ExactMatrix::identity(spec, k));
    for i in 2..=n {
        let prev = q_blocks.last().unwrap();
        let step = invert((i - 1, i))?
            .mul(a.block((i - 1, i - 1)).expect("cycle layout"))?
            .mul(prev)?;
        q_blocks.push(step);
    }

    let corner = p_blocks[n - 1].mul(a.block((n, 1)).expect("cycle layout"))?;
    let identity = ExactMatrix::identity(spec, k);
    let canonical = BlockPartialMatrix::cycle(
        spec,
        vec![identity.clone(); n],
        vec![identity; n - 1],
        corner.clone(),
    )?;

    let mut p = ExactMatrix::zeros(spec, n * k, n * k);
    let mut q = ExactMatrix::zeros(spec, n * k, n * k);
    for (i, (pb, qb)) in p_blocks.iter().zip(&q_blocks).enumerate() {
        p.set_block(i, i, pb);
        q.set_block(i, i, qb);
    }
    Ok(ScaledCycle {
        p,
        q,
        canonical,
        corner,
    })
}

/// Which certified equality case applies to a block cycle, if any.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EqualityCase {
    /// d = k, i.e. H = I: minimal rank is exactly k.
    FixedSpace,
    /// k = n−1, d = 0 and the eigenvalues of H split: minimal rank is
    /// exactly n via the explicit construction.
    Construction,
}

#[derive(Clone, Debug)]
pub struct BlockCycleAnalysis {
    pub n: usize,
    pub k: usize,
    pub h: ExactMatrix,
    pub d: usize,
    /// (nk − d)/(n − 1), valid over any field.
    pub lower_bound: Rational,
    /// Smallest integer admissible as a rank: ⌈(nk − d)/(n − 1)⌉.
    pub integer_bound: usize,
    pub equality: Option<EqualityCase>,
    /// Exact minimal rank when an equality case certifies it.
    pub mr_exact: Option<usize>,
}

pub fn block_cycle_bound(a: &BlockPartialMatrix) -> Result<BlockCycleAnalysis> {
    let scaled = scale_to_ah(a)?;
    let n = a.block_rows();
    let k = a.block_size();
    let h = scaled.corner;
    let d = h
        .sub(&ExactMatrix::identity(a.spec(), k))
        .expect("same shape")
        .kernel_dim();
    let lower_bound = Rational::ratio(n * k - d, n - 1);
    let integer_bound = lower_bound.ceil_usize();
    let (equality, mr_exact) = if d == k {
        (Some(EqualityCase::FixedSpace), Some(k))
    } else if k == n - 1 && d == 0 && eigenvalues_in_field(&h).is_some() {
        (Some(EqualityCase::Construction), Some(n))
    } else {
        (None, None)
    };
    Ok(BlockCycleAnalysis {
        n,
        k,
        h,
        d,
        lower_bound,
        integer_bound,
        equality,
        mr_exact,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::FieldSpec;

    fn q() -> FieldSpec {
        FieldSpec::RATIONALS
    }

    fn gf(p: u64) -> FieldSpec {
        FieldSpec::prime(p).unwrap()
    }

    fn intro_example() -> PartialMatrix {
        PartialMatrix::from_int_rows(
            q(),
            &[
                &[Some(1), Some(1), None],
                &[None, Some(1), Some(1)],
                &[Some(2), None, Some(1)],
            ],
        )
    }

    #[test]
    fn intro_example_has_h_two() {
        let analysis = analyze_cycle(&intro_example()).unwrap();
        assert_eq!(analysis.n, 3);
        assert_eq!(analysis.h, Scalar::integer(q(), 2));
        assert!(!analysis.h_is_one);
        assert_eq!(fmr_cycle(&intro_example()).unwrap(), Rational::ratio(3, 2));
    }

    #[test]
    fn all_ones_cycle_has_h_one() {
        for n in [3usize, 5] {
            let rows: Vec<Vec<Option<i64>>> = (1..=n)
                .map(|i| {
                    (1..=n)
                        .map(|j| {
                            if i == j || j == i + 1 || (i == n && j == 1) {
                                Some(1)
                            } else {
                                None
                            }
                        })
                        .collect()
                })
                .collect();
            let refs: Vec<&[Option<i64>]> = rows.iter().map(|r| r.as_slice()).collect();
            let a = PartialMatrix::from_int_rows(q(), &refs);
            let analysis = analyze_cycle(&a).unwrap();
            assert!(analysis.h_is_one);
            assert_eq!(fmr_cycle(&a).unwrap(), Rational::from_usize(1));
        }
    }

    #[test]
    fn four_cycle_entry_position_matters() {
        // one entry 3 on the off-diagonal: h = 3
        let mut a = PartialMatrix::from_int_rows(
            q(),
            &[
                &[Some(1), Some(3), None, None],
                &[None, Some(1), Some(1), None],
                &[None, None, Some(1), Some(1)],
                &[Some(1), None, None, Some(1)],
            ],
        );
        assert_eq!(analyze_cycle(&a).unwrap().h, Scalar::integer(q(), 3));
        assert_eq!(fmr_cycle(&a).unwrap(), Rational::ratio(4, 3));
        // the same entry on the diagonal: h = 1/3
        a = PartialMatrix::from_int_rows(
            q(),
            &[
                &[Some(3), Some(1), None, None],
                &[None, Some(1), Some(1), None],
                &[None, None, Some(1), Some(1)],
                &[Some(1), None, None, Some(1)],
            ],
        );
        assert_eq!(
            analyze_cycle(&a).unwrap().h,
            Scalar::rational(1, 3).unwrap()
        );
    }

    #[test]
    fn zero_entry_routes_away() {
        let a = PartialMatrix::from_int_rows(
            q(),
            &[
                &[Some(1), Some(0), None],
                &[None, Some(1), Some(1)],
                &[Some(2), None, Some(1)],
            ],
        );
        assert!(matches!(
            analyze_cycle(&a),
            Err(Error::ZeroEntry { pos: (1, 2) })
        ));
        let full = PartialMatrix::from_int_rows(q(), &[&[Some(1), Some(1)], &[Some(1), Some(1)]]);
        assert!(matches!(analyze_cycle(&full), Err(Error::NotACycle)));
    }

    fn block_cycle_from_ints(spec: FieldSpec, n: usize, k: usize, seed: u64) -> BlockPartialMatrix {
        let mut state = seed | 1;
        let mut next_block = || loop {
            let cand = ExactMatrix::from_fn(spec, k, k, |_, _| {
                state ^= state << 13;
                state ^= state >> 7;
                state ^= state << 17;
                Scalar::integer(spec, (state % 23) as i64 - 11)
            });
            if cand.rank() == k {
                break cand;
            }
        };
        let diagonal: Vec<ExactMatrix> = (0..n).map(|_| next_block()).collect();
        let superdiagonal: Vec<ExactMatrix> = (0..n - 1).map(|_| next_block()).collect();
        let corner = next_block();
        BlockPartialMatrix::cycle(spec, diagonal, superdiagonal, corner).unwrap()
    }

    #[test]
    fn canonical_input_passes_through() {
        let spec = q();
        let k = 2;
        let h = ExactMatrix::from_ints(spec, &[&[2, 0], &[0, 3]]);
        let idem = ExactMatrix::identity(spec, k);
        let b = BlockPartialMatrix::cycle(
            spec,
            vec![idem.clone(); 3],
            vec![idem.clone(); 2],
            h.clone(),
        )
        .unwrap();
        let scaled = scale_to_ah(&b).unwrap();
        assert_eq!(scaled.corner, h);
        assert!(scaled.p.is_identity());
        assert!(scaled.q.is_identity());
    }

    #[test]
    fn scalar_case_reproduces_h() {
        // k = 1 blocks: the corner of the canonical form is the cycle h
        let spec = q();
        let blk = |v: i64| ExactMatrix::from_ints(spec, &[&[v]]);
        let b = BlockPartialMatrix::cycle(
            spec,
            vec![blk(1), blk(1), blk(1)],
            vec![blk(1), blk(1)],
            blk(2),
        )
        .unwrap();
        let scaled = scale_to_ah(&b).unwrap();
        let h_block = scaled.corner.get(0, 0).clone();
        let analysis = analyze_cycle(&b.lower()).unwrap();
        assert_eq!(h_block, analysis.h);
    }

    #[test]
    fn corner_matches_direct_product_formula() {
        let spec = gf(5);
        for seed in 1..=10u64 {
            let b = block_cycle_from_ints(spec, 3, 2, seed);
            let scaled = scale_to_ah(&b).unwrap();
            let inv = |pos: (usize, usize)| b.block(pos).unwrap().inverse().unwrap();
            let expected = inv((1, 1))
                .mul(b.block((1, 2)).unwrap())
                .unwrap()
                .mul(&inv((2, 2)))
                .unwrap()
                .mul(b.block((2, 3)).unwrap())
                .unwrap()
                .mul(&inv((3, 3)))
                .unwrap()
                .mul(b.block((3, 1)).unwrap())
                .unwrap();
            assert_eq!(scaled.corner, expected, "seed {seed}");
        }
    }

    #[test]
    fn scaling_preserves_completions_and_rank() {
        let spec = gf(7);
        let b = block_cycle_from_ints(spec, 3, 2, 99);
        let scaled = scale_to_ah(&b).unwrap();
        // complete the original with zeros on the unknowns and map it over
        let lowered = b.lower();
        let fill: std::collections::BTreeMap<(usize, usize), Scalar> = lowered
            .unknown_positions()
            .into_iter()
            .map(|pos| (pos, spec.zero()))
            .collect();
        let completion = lowered.complete(&fill).unwrap();
        let mapped = scaled.p.mul(&completion).unwrap().mul(&scaled.q).unwrap();
        assert!(scaled.canonical.lower().is_completion(&mapped));
        assert_eq!(mapped.rank(), completion.rank());
    }

    #[test]
    fn identity_corner_certifies_k() {
        let spec = q();
        let idem = ExactMatrix::identity(spec, 2);
        let b = BlockPartialMatrix::cycle(
            spec,
            vec![idem.clone(); 4],
            vec![idem.clone(); 3],
            idem.clone(),
        )
        .unwrap();
        let analysis = block_cycle_bound(&b).unwrap();
        assert_eq!(analysis.d, 2);
        assert_eq!(analysis.lower_bound, Rational::from_usize(2));
        assert_eq!(analysis.equality, Some(EqualityCase::FixedSpace));
        assert_eq!(analysis.mr_exact, Some(2));
    }

    #[test]
    fn split_spectrum_certifies_n() {
        let spec = q();
        let idem = ExactMatrix::identity(spec, 2);
        let h = ExactMatrix::from_ints(spec, &[&[2, 0], &[0, 3]]);
        let b = BlockPartialMatrix::cycle(spec, vec![idem.clone(); 3], vec![idem.clone(); 2], h)
            .unwrap();
        let analysis = block_cycle_bound(&b).unwrap();
        assert_eq!(analysis.d, 0);
        assert_eq!(analysis.lower_bound, Rational::from_usize(3));
        assert_eq!(analysis.equality, Some(EqualityCase::Construction));
        assert_eq!(analysis.mr_exact, Some(3));
    }

    #[test]
    fn fractional_bound_without_equality_claim() {
        // n = 4, k = 2, H = 2I over GF(5): d = 0, bound 8/3, ceiling 3
        let spec = gf(5);
        let idem = ExactMatrix::identity(spec, 2);
        let h = idem.scale(&Scalar::integer(spec, 2)).unwrap();
        let b = BlockPartialMatrix::cycle(spec, vec![idem.clone(); 4], vec![idem.clone(); 3], h)
            .unwrap();
        let analysis = block_cycle_bound(&b).unwrap();
        assert_eq!(analysis.d, 0);
        assert_eq!(analysis.lower_bound, Rational::ratio(8, 3));
        assert_eq!(analysis.integer_bound, 3);
        assert_eq!(analysis.equality, None);
        assert_eq!(analysis.mr_exact, None);
    }

    #[test]
    fn singular_block_is_reported() {
        let spec = q();
        let idem = ExactMatrix::identity(spec, 2);
        let singular = ExactMatrix::from_ints(spec, &[&[1, 1], &[1, 1]]);
        let b = BlockPartialMatrix::cycle(
            spec,
            vec![idem.clone(), singular, idem.clone()],
            vec![idem.clone(); 2],
            idem.clone(),
        )
        .unwrap();
        assert!(matches!(
            scale_to_ah(&b),
            Err(Error::SingularBlock { pos: (2, 2) })
        ));
    }
}
