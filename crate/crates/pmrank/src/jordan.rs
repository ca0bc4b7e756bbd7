//! Eigenvalues and Jordan canonical form over exact fields.
//!
//! The characteristic polynomial is computed division-free (Berkowitz), so
//! it works over any field including small characteristics. Roots are found
//! exhaustively over GF(p) and by rational-root search over ℚ; no splitting
//! field is ever constructed. When the characteristic polynomial does not
//! split over the ground field the decomposition is reported as absent.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::field::{FieldSpec, Scalar};
use crate::matrix::ExactMatrix;

/// An exact Jordan decomposition `M = transform · jordan · transform⁻¹`.
///
/// `jordan` is upper bidiagonal: eigenvalues on the diagonal, entries in
/// {0, 1} on the superdiagonal. Eigenvalues appear in the canonical scalar
/// order; blocks for one eigenvalue in decreasing size.
#[derive(Clone, Debug)]
pub struct JordanDecomposition {
    pub transform: ExactMatrix,
    pub jordan: ExactMatrix,
    pub blocks: Vec<(Scalar, usize)>,
}

/// Coefficients of det(xI − M), ascending degree, leading coefficient 1.
///
/// Berkowitz' algorithm: iterated Toeplitz products over the leading
/// principal submatrices, no divisions.
pub fn char_poly(m: &ExactMatrix) -> Vec<Scalar> {
    assert!(
        m.is_square(),
        "characteristic polynomial needs a square matrix"
    );
    let spec = m.spec();
    let n = m.rows();
    if n == 0 {
        return vec![spec.one()];
    }
    // descending-degree coefficient vector, updated once per principal minor
    let mut v = vec![spec.one(), m.get(0, 0).neg()];
    for r in 2..=n {
        // s_j = row · sub^j · col for j = 0..r-2
        let row: Vec<&Scalar> = (0..r - 1).map(|j| m.get(r - 1, j)).collect();
        let mut col: Vec<Scalar> = (0..r - 1).map(|i| m.get(i, r - 1).clone()).collect();
        let mut toeplitz = Vec::with_capacity(r + 1);
        toeplitz.push(spec.one());
        toeplitz.push(m.get(r - 1, r - 1).neg());
        for _ in 0..r - 1 {
            let mut s = spec.zero();
            for (a, b) in row.iter().zip(col.iter()) {
                s = s.add_unchecked(&a.mul_unchecked(b));
            }
            toeplitz.push(s.neg());
            // col ← sub · col
            let mut next = vec![spec.zero(); r - 1];
            for (i, slot) in next.iter_mut().enumerate() {
                for (j, c) in col.iter().enumerate() {
                    if !m.get(i, j).is_zero() && !c.is_zero() {
                        *slot = slot.add_unchecked(&m.get(i, j).mul_unchecked(c));
                    }
                }
            }
            col = next;
        }
        let mut next_v = vec![spec.zero(); r + 1];
        for (i, slot) in next_v.iter_mut().enumerate() {
            for (j, prev) in v.iter().enumerate() {
                if i >= j && i - j < toeplitz.len() {
                    *slot = slot.add_unchecked(&toeplitz[i - j].mul_unchecked(prev));
                }
            }
        }
        v = next_v;
    }
    v.reverse();
    v
}

fn eval_poly(coeffs: &[Scalar], x: &Scalar) -> Scalar {
    let mut acc = coeffs.last().expect("nonempty polynomial").clone();
    for c in coeffs.iter().rev().skip(1) {
        acc = acc.mul_unchecked(x).add_unchecked(c);
    }
    acc
}

/// Synthetic division by (x − r). Returns the quotient when the remainder
/// is zero.
fn divide_by_root(coeffs: &[Scalar], r: &Scalar) -> Option<Vec<Scalar>> {
    let n = coeffs.len() - 1;
    if n == 0 {
        return None;
    }
    let mut quotient = vec![coeffs[0].spec().zero(); n];
    quotient[n - 1] = coeffs[n].clone();
    for k in (1..n).rev() {
        quotient[k - 1] = coeffs[k].add_unchecked(&r.mul_unchecked(&quotient[k]));
    }
    let remainder = coeffs[0].add_unchecked(&r.mul_unchecked(&quotient[0]));
    remainder.is_zero().then_some(quotient)
}

/// Roots of the polynomial in the coefficient field, with multiplicities.
/// Exhaustive over GF(p); rational-root search over ℚ.
pub fn roots_in_field(coeffs: &[Scalar], spec: FieldSpec) -> Vec<(Scalar, usize)> {
    let mut roots: Vec<(Scalar, usize)> = Vec::new();
    let mut poly = coeffs.to_vec();
    match spec.modulus() {
        Some(p) => {
            for a in 0..p {
                let cand = Scalar::integer(spec, a as i64);
                let mut mult = 0;
                while poly.len() > 1 && eval_poly(&poly, &cand).is_zero() {
                    poly = divide_by_root(&poly, &cand).expect("zero remainder");
                    mult += 1;
                }
                if mult > 0 {
                    roots.push((cand, mult));
                }
            }
        }
        None => {
            loop {
                if poly.len() <= 1 {
                    break;
                }
                let Some(cand) = first_rational_root(&poly) else {
                    break;
                };
                let mut mult = 0;
                while poly.len() > 1 && eval_poly(&poly, &cand).is_zero() {
                    poly = divide_by_root(&poly, &cand).expect("zero remainder");
                    mult += 1;
                }
                roots.push((cand, mult));
            }
            roots.sort_by(|a, b| a.0.canonical_cmp(&b.0));
        }
    }
    roots
}

// Rational-root search: clear denominators, then candidates are
// ±(divisor of the constant term)/(divisor of the leading coefficient).
fn first_rational_root(poly: &[Scalar]) -> Option<Scalar> {
    let q = FieldSpec::RATIONALS;
    let zero = q.zero();
    if poly[0].is_zero() {
        return Some(zero);
    }
    // common denominator
    let mut lcm = BigInt::one();
    for c in poly {
        let den = c.as_ratio().expect("rational coefficients").denom();
        lcm = lcm.lcm(den);
    }
    let ints: Vec<BigInt> = poly
        .iter()
        .map(|c| {
            let r = c.as_ratio().unwrap();
            r.numer() * (&lcm / r.denom())
        })
        .collect();
    let constant = ints[0].abs();
    let leading = ints.last().unwrap().abs();
    let mut num_divs = divisors(&constant);
    let mut den_divs = divisors(&leading);
    num_divs.sort();
    den_divs.sort();
    for num in &num_divs {
        for den in &den_divs {
            if num.gcd(den) != BigInt::one() {
                continue;
            }
            for sign in [1i64, -1] {
                let cand = Scalar::from_ratio(num_rational::BigRational::new(
                    num * BigInt::from(sign),
                    den.clone(),
                ));
                if eval_poly(poly, &cand).is_zero() {
                    return Some(cand);
                }
            }
        }
    }
    None
}

fn divisors(n: &BigInt) -> Vec<BigInt> {
    debug_assert!(n.is_positive());
    let mut divs = Vec::new();
    let mut d = BigInt::one();
    while &d * &d <= *n {
        if (n % &d).is_zero() {
            divs.push(d.clone());
            let other = n / &d;
            if other != d {
                divs.push(other);
            }
        }
        d += 1;
    }
    divs
}

/// Eigenvalues with algebraic multiplicities, or `None` when the
/// characteristic polynomial does not split over the matrix field.
pub fn eigenvalues_in_field(m: &ExactMatrix) -> Option<Vec<(Scalar, usize)>> {
    let poly = char_poly(m);
    let mut roots = roots_in_field(&poly, m.spec());
    let total: usize = roots.iter().map(|(_, k)| k).sum();
    if total != m.rows() {
        return None;
    }
    roots.sort_by(|a, b| a.0.canonical_cmp(&b.0));
    Some(roots)
}

/// Exact Jordan decomposition, or `None` when the characteristic polynomial
/// does not split. Chains are built from iterated kernels of (M − λI)^s.
pub fn jordan_form(m: &ExactMatrix) -> Option<JordanDecomposition> {
    assert!(m.is_square(), "jordan form needs a square matrix");
    let spec = m.spec();
    let n = m.rows();
    let eigenvalues = eigenvalues_in_field(m)?;

    let mut s_columns: Vec<ExactMatrix> = Vec::new();
    let mut blocks: Vec<(Scalar, usize)> = Vec::new();

    for (lambda, mult) in &eigenvalues {
        let shifted = m
            .sub(
                &ExactMatrix::identity(spec, n)
                    .scale(lambda)
                    .expect("same field"),
            )
            .expect("same shape");
        // kernels of shifted^s until the generalized eigenspace is exhausted
        let mut kernels: Vec<ExactMatrix> = Vec::new(); // kernels[s-1] = basis of ker(shifted^s)
        let mut power = shifted.clone();
        loop {
            let basis = power.kernel_basis();
            let dim = basis.cols();
            kernels.push(basis);
            if dim == *mult {
                break;
            }
            power = power.mul(&shifted).expect("same field");
        }
        let top = kernels.len();
        let dim_at = |s: usize| -> usize {
            if s == 0 {
                0
            } else {
                kernels[s - 1].cols()
            }
        };

        // chains picked top level first; each chain is (top vector, height)
        let mut chains: Vec<(ExactMatrix, usize)> = Vec::new();
        for s in (1..=top).rev() {
            // vectors already occupying level s: descents of taller chains
            let mut occupied: Vec<ExactMatrix> = Vec::new();
            if s > 1 {
                let lower = &kernels[s - 2];
                for c in 0..lower.cols() {
                    occupied.push(lower.submatrix(&(0..n).collect::<Vec<_>>(), &[c]));
                }
            }
            for (top_vec, height) in &chains {
                if *height > s {
                    let mut v = top_vec.clone();
                    for _ in 0..(height - s) {
                        v = shifted.mul(&v).expect("same field");
                    }
                    occupied.push(v);
                }
            }
            let mut span = stack_columns(spec, n, &occupied);
            let mut span_rank = span.rank();
            let candidates = &kernels[s - 1];
            let all_rows: Vec<usize> = (0..n).collect();
            let need = dim_at(s) - dim_at(s - 1) - chains.iter().filter(|(_, h)| *h > s).count();
            let mut found = 0;
            for c in 0..candidates.cols() {
                if found == need {
                    break;
                }
                let cand = candidates.submatrix(&all_rows, &[c]);
                let extended = span.hstack(&cand).expect("same field");
                let r = extended.rank();
                if r > span_rank {
                    span = extended;
                    span_rank = r;
                    chains.push((cand, s));
                    found += 1;
                }
            }
            debug_assert_eq!(found, need, "level {s} of eigenvalue {lambda}");
        }

        for (top_vec, height) in chains {
            // columns bottom-up: shifted^(h-1)·v, ..., shifted·v, v
            let mut column_stack: Vec<ExactMatrix> = Vec::with_capacity(height);
            let mut v = top_vec;
            column_stack.push(v.clone());
            for _ in 1..height {
                v = shifted.mul(&v).expect("same field");
                column_stack.push(v.clone());
            }
            column_stack.reverse();
            s_columns.extend(column_stack);
            blocks.push((lambda.clone(), height));
        }
    }

    let transform = stack_columns(spec, n, &s_columns);
    debug_assert_eq!(transform.rank(), n, "jordan basis must be invertible");

    let mut jordan = ExactMatrix::zeros(spec, n, n);
    let mut offset = 0;
    for (lambda, size) in &blocks {
        for i in 0..*size {
            jordan.set(offset + i, offset + i, lambda.clone());
            if i + 1 < *size {
                jordan.set(offset + i, offset + i + 1, spec.one());
            }
        }
        offset += size;
    }
    Some(JordanDecomposition {
        transform,
        jordan,
        blocks,
    })
}

fn stack_columns(spec: FieldSpec, height: usize, cols: &[ExactMatrix]) -> ExactMatrix {
    let mut out = ExactMatrix::zeros(spec, height, cols.len());
    for (j, c) in cols.iter().enumerate() {
        for i in 0..height {
            out.set(i, j, c.get(i, 0).clone());
        }
    }
    out
}

/// Convenience check used by tests and completion assertions.
pub fn decomposition_reassembles(dec: &JordanDecomposition, m: &ExactMatrix) -> bool {
    let inv = match dec.transform.inverse() {
        Ok(inv) => inv,
        Err(_) => return false,
    };
    match dec.transform.mul(&dec.jordan).and_then(|x| x.mul(&inv)) {
        Ok(product) => product == *m,
        Err(_) => false,
    }
}
