//! Partial matrices: the pattern of knowns plus the known values.
//!
//! Positions are 1-based throughout this module, so a 3×3 pattern has
//! positions (1,1)..(3,3). Known values are stored sparsely; cycle patterns
//! have 2n knowns inside n² cells.

use std::collections::{BTreeMap, BTreeSet};

use crate::error::{Error, Result};
use crate::field::{FieldSpec, Scalar};
use crate::matrix::ExactMatrix;

/// A set of known positions inside fixed dimensions. 1-based.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Debug)]
pub struct Pattern {
    rows: usize,
    cols: usize,
    known: BTreeSet<(usize, usize)>,
}

impl Pattern {
    pub fn new(
        rows: usize,
        cols: usize,
        known: impl IntoIterator<Item = (usize, usize)>,
    ) -> Result<Pattern> {
        let known: BTreeSet<(usize, usize)> = known.into_iter().collect();
        for &(i, j) in &known {
            if i == 0 || j == 0 || i > rows || j > cols {
                return Err(Error::OutOfRange {
                    pos: (i, j),
                    rows,
                    cols,
                });
            }
        }
        Ok(Pattern { rows, cols, known })
    }

    pub fn empty(rows: usize, cols: usize) -> Pattern {
        Pattern {
            rows,
            cols,
            known: BTreeSet::new(),
        }
    }

    pub fn full(rows: usize, cols: usize) -> Pattern {
        let known = (1..=rows)
            .flat_map(|i| (1..=cols).map(move |j| (i, j)))
            .collect();
        Pattern { rows, cols, known }
    }

    /// The n×n pattern whose bipartite graph is a single 2n-cycle: knowns
    /// at (i,i), (i,i+1) and (n,1).
    pub fn cycle(n: usize) -> Pattern {
        assert!(n >= 3, "cycle patterns start at n = 3");
        let mut known = BTreeSet::new();
        for i in 1..=n {
            known.insert((i, i));
            if i < n {
                known.insert((i, i + 1));
            }
        }
        known.insert((n, 1));
        Pattern {
            rows: n,
            cols: n,
            known,
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn len(&self) -> usize {
        self.known.len()
    }

    pub fn is_empty(&self) -> bool {
        self.known.is_empty()
    }

    pub fn contains(&self, pos: (usize, usize)) -> bool {
        self.known.contains(&pos)
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.known.iter().copied()
    }

    /// Rows known in column `j`.
    pub fn col_set(&self, j: usize) -> BTreeSet<usize> {
        self.known
            .iter()
            .filter(|&&(_, c)| c == j)
            .map(|&(r, _)| r)
            .collect()
    }

    /// Columns known in row `i`.
    pub fn row_set(&self, i: usize) -> BTreeSet<usize> {
        self.known
            .iter()
            .filter(|&&(r, _)| r == i)
            .map(|&(_, c)| c)
            .collect()
    }

    /// Unknown positions in row-major order.
    pub fn complement(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::with_capacity(self.rows * self.cols - self.known.len());
        for i in 1..=self.rows {
            for j in 1..=self.cols {
                if !self.known.contains(&(i, j)) {
                    out.push((i, j));
                }
            }
        }
        out
    }

    pub fn is_subpattern_of(&self, other: &Pattern) -> bool {
        self.rows == other.rows && self.cols == other.cols && self.known.is_subset(&other.known)
    }

    pub fn with_position(&self, pos: (usize, usize)) -> Pattern {
        let mut known = self.known.clone();
        known.insert(pos);
        Pattern {
            rows: self.rows,
            cols: self.cols,
            known,
        }
    }
}

/// A partial matrix: a pattern plus one scalar per known position.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct PartialMatrix {
    pattern: Pattern,
    values: BTreeMap<(usize, usize), Scalar>,
    spec: FieldSpec,
}

impl PartialMatrix {
    pub fn new(
        spec: FieldSpec,
        pattern: Pattern,
        values: BTreeMap<(usize, usize), Scalar>,
    ) -> Result<PartialMatrix> {
        for (&pos, v) in &values {
            if !pattern.contains(pos) {
                return Err(Error::NotSubpattern { pos });
            }
            if v.spec() != spec {
                return Err(Error::FieldMismatch {
                    left: spec,
                    right: v.spec(),
                });
            }
        }
        if let Some(&pos) = pattern.iter().find(|p| !values.contains_key(p)).as_ref() {
            return Err(Error::IncompleteFill { missing: pos });
        }
        Ok(PartialMatrix {
            pattern,
            values,
            spec,
        })
    }

    /// Build from rows of `Some(value)` / `None`.
    pub fn from_rows(spec: FieldSpec, rows: Vec<Vec<Option<Scalar>>>) -> Result<PartialMatrix> {
        let height = rows.len();
        let width = rows.first().map_or(0, |r| r.len());
        let mut known = BTreeSet::new();
        let mut values = BTreeMap::new();
        for (i, row) in rows.into_iter().enumerate() {
            if row.len() != width {
                return Err(Error::ShapeMismatch {
                    expected: (height, width),
                    got: (height, row.len()),
                });
            }
            for (j, cell) in row.into_iter().enumerate() {
                if let Some(v) = cell {
                    if v.spec() != spec {
                        return Err(Error::FieldMismatch {
                            left: spec,
                            right: v.spec(),
                        });
                    }
                    known.insert((i + 1, j + 1));
                    values.insert((i + 1, j + 1), v);
                }
            }
        }
        Ok(PartialMatrix {
            pattern: Pattern {
                rows: height,
                cols: width,
                known,
            },
            values,
            spec,
        })
    }

    /// Integer literals with `None` for unknowns; test and example helper.
    pub fn from_int_rows(spec: FieldSpec, rows: &[&[Option<i64>]]) -> PartialMatrix {
        let data = rows
            .iter()
            .map(|r| {
                r.iter()
                    .map(|cell| cell.map(|n| Scalar::integer(spec, n)))
                    .collect()
            })
            .collect();
        PartialMatrix::from_rows(spec, data).expect("literal rows have equal length")
    }

    pub fn spec(&self) -> FieldSpec {
        self.spec
    }

    pub fn pattern(&self) -> &Pattern {
        &self.pattern
    }

    pub fn rows(&self) -> usize {
        self.pattern.rows
    }

    pub fn cols(&self) -> usize {
        self.pattern.cols
    }

    pub fn value(&self, pos: (usize, usize)) -> Option<&Scalar> {
        self.values.get(&pos)
    }

    pub fn values(&self) -> impl Iterator<Item = ((usize, usize), &Scalar)> {
        self.values.iter().map(|(&p, v)| (p, v))
    }

    /// Positions of the unknowns in row-major order; this is the digit
    /// order used by the brute-force enumeration.
    pub fn unknown_positions(&self) -> Vec<(usize, usize)> {
        self.pattern.complement()
    }

    /// A full matrix agreeing with the knowns and with `fill` on the
    /// unknowns. `fill` must cover exactly the complement of the pattern.
    pub fn complete(&self, fill: &BTreeMap<(usize, usize), Scalar>) -> Result<ExactMatrix> {
        for &pos in fill.keys() {
            if self.pattern.contains(pos) {
                return Err(Error::OverlapWithKnown { pos });
            }
            if pos.0 == 0 || pos.1 == 0 || pos.0 > self.rows() || pos.1 > self.cols() {
                return Err(Error::OutOfRange {
                    pos,
                    rows: self.rows(),
                    cols: self.cols(),
                });
            }
        }
        let mut out = ExactMatrix::zeros(self.spec, self.rows(), self.cols());
        for i in 1..=self.rows() {
            for j in 1..=self.cols() {
                let v = match self.values.get(&(i, j)) {
                    Some(v) => v,
                    None => fill
                        .get(&(i, j))
                        .ok_or(Error::IncompleteFill { missing: (i, j) })?,
                };
                if v.spec() != self.spec {
                    return Err(Error::FieldMismatch {
                        left: self.spec,
                        right: v.spec(),
                    });
                }
                out.set(i - 1, j - 1, v.clone());
            }
        }
        Ok(out)
    }

    /// Whether a full matrix agrees with every known entry; returns the
    /// offending positions otherwise.
    pub fn violations(&self, candidate: &ExactMatrix) -> Result<Vec<(usize, usize)>> {
        if candidate.spec() != self.spec {
            return Err(Error::FieldMismatch {
                left: self.spec,
                right: candidate.spec(),
            });
        }
        if candidate.rows() != self.rows() || candidate.cols() != self.cols() {
            return Err(Error::ShapeMismatch {
                expected: (self.rows(), self.cols()),
                got: (candidate.rows(), candidate.cols()),
            });
        }
        Ok(self
            .values
            .iter()
            .filter(|(&(i, j), v)| candidate.get(i - 1, j - 1) != *v)
            .map(|(&p, _)| p)
            .collect())
    }

    pub fn is_completion(&self, candidate: &ExactMatrix) -> bool {
        matches!(self.violations(candidate), Ok(v) if v.is_empty())
    }

    /// Tensor with the b×b identity: every known scalar `a` becomes the
    /// fully known block `a·I_b`, every unknown becomes a fully unknown
    /// b×b block.
    pub fn tensor_identity(&self, b: usize) -> PartialMatrix {
        assert!(b >= 1, "tensor factor must be positive");
        let mut known = BTreeSet::new();
        let mut values = BTreeMap::new();
        for (&(i, j), v) in &self.values {
            for s in 1..=b {
                for t in 1..=b {
                    let pos = ((i - 1) * b + s, (j - 1) * b + t);
                    known.insert(pos);
                    let entry = if s == t { v.clone() } else { self.spec.zero() };
                    values.insert(pos, entry);
                }
            }
        }
        PartialMatrix {
            pattern: Pattern {
                rows: self.rows() * b,
                cols: self.cols() * b,
                known,
            },
            values,
            spec: self.spec,
        }
    }

    /// Block-diagonal sum with fully unknown off-diagonal blocks.
    pub fn direct_sum(&self, other: &PartialMatrix) -> Result<PartialMatrix> {
        if self.spec != other.spec {
            return Err(Error::FieldMismatch {
                left: self.spec,
                right: other.spec,
            });
        }
        let mut known = self.pattern.known.clone();
        let mut values = self.values.clone();
        for (&(i, j), v) in &other.values {
            let pos = (i + self.rows(), j + self.cols());
            known.insert(pos);
            values.insert(pos, v.clone());
        }
        Ok(PartialMatrix {
            pattern: Pattern {
                rows: self.rows() + other.rows(),
                cols: self.cols() + other.cols(),
                known,
            },
            values,
            spec: self.spec,
        })
    }

    /// Keep only the knowns in `t`, which must be a subpattern.
    pub fn restrict(&self, t: &Pattern) -> Result<PartialMatrix> {
        if t.rows != self.rows() || t.cols != self.cols() {
            return Err(Error::ShapeMismatch {
                expected: (self.rows(), self.cols()),
                got: (t.rows, t.cols),
            });
        }
        if let Some(pos) = t.iter().find(|&p| !self.pattern.contains(p)) {
            return Err(Error::NotSubpattern { pos });
        }
        let values = t.iter().map(|p| (p, self.values[&p].clone())).collect();
        Ok(PartialMatrix {
            pattern: t.clone(),
            values,
            spec: self.spec,
        })
    }

    /// Relocate knowns: row i moves to `row_perm[i-1]`, column j to
    /// `col_perm[j-1]` (both 1-based images).
    pub fn permute(&self, row_perm: &[usize], col_perm: &[usize]) -> Result<PartialMatrix> {
        validate_permutation(row_perm, self.rows(), "row")?;
        validate_permutation(col_perm, self.cols(), "column")?;
        let mut known = BTreeSet::new();
        let mut values = BTreeMap::new();
        for (&(i, j), v) in &self.values {
            let pos = (row_perm[i - 1], col_perm[j - 1]);
            known.insert(pos);
            values.insert(pos, v.clone());
        }
        Ok(PartialMatrix {
            pattern: Pattern {
                rows: self.rows(),
                cols: self.cols(),
                known,
            },
            values,
            spec: self.spec,
        })
    }
}

pub(crate) fn validate_permutation(perm: &[usize], n: usize, what: &str) -> Result<()> {
    if perm.len() != n {
        return Err(Error::BadPermutation(format!(
            "{what} permutation has length {}, expected {n}",
            perm.len()
        )));
    }
    let mut seen = vec![false; n];
    for &image in perm {
        if image == 0 || image > n || seen[image - 1] {
            return Err(Error::BadPermutation(format!(
                "{what} permutation is not a bijection on 1..={n}"
            )));
        }
        seen[image - 1] = true;
    }
    Ok(())
}

pub(crate) fn invert_permutation(perm: &[usize]) -> Vec<usize> {
    let mut inv = vec![0; perm.len()];
    for (i, &image) in perm.iter().enumerate() {
        inv[image - 1] = i + 1;
    }
    inv
}

/// A partial block matrix with square known blocks of one size.
#[derive(Clone, Debug)]
pub struct BlockPartialMatrix {
    block_rows: usize,
    block_cols: usize,
    block_size: usize,
    blocks: BTreeMap<(usize, usize), ExactMatrix>,
    spec: FieldSpec,
}

impl BlockPartialMatrix {
    pub fn new(
        spec: FieldSpec,
        block_rows: usize,
        block_cols: usize,
        block_size: usize,
        blocks: BTreeMap<(usize, usize), ExactMatrix>,
    ) -> Result<BlockPartialMatrix> {
        for (&(i, j), b) in &blocks {
            if i == 0 || j == 0 || i > block_rows || j > block_cols {
                return Err(Error::OutOfRange {
                    pos: (i, j),
                    rows: block_rows,
                    cols: block_cols,
                });
            }
            if b.rows() != block_size || b.cols() != block_size {
                return Err(Error::ShapeMismatch {
                    expected: (block_size, block_size),
                    got: (b.rows(), b.cols()),
                });
            }
            if b.spec() != spec {
                return Err(Error::FieldMismatch {
                    left: spec,
                    right: b.spec(),
                });
            }
        }
        Ok(BlockPartialMatrix {
            block_rows,
            block_cols,
            block_size,
            blocks,
            spec,
        })
    }

    /// The n×n block cycle with given diagonal blocks, superdiagonal
    /// blocks and corner block, in that order.
    pub fn cycle(
        spec: FieldSpec,
        diagonal: Vec<ExactMatrix>,
        superdiagonal: Vec<ExactMatrix>,
        corner: ExactMatrix,
    ) -> Result<BlockPartialMatrix> {
        let n = diagonal.len();
        assert!(n >= 3, "block cycles start at n = 3");
        assert_eq!(superdiagonal.len(), n - 1, "n-1 superdiagonal blocks");
        let k = corner.rows();
        let mut blocks = BTreeMap::new();
        for (i, b) in diagonal.into_iter().enumerate() {
            blocks.insert((i + 1, i + 1), b);
        }
        for (i, b) in superdiagonal.into_iter().enumerate() {
            blocks.insert((i + 1, i + 2), b);
        }
        blocks.insert((n, 1), corner);
        BlockPartialMatrix::new(spec, n, n, k, blocks)
    }

    pub fn spec(&self) -> FieldSpec {
        self.spec
    }

    pub fn block_rows(&self) -> usize {
        self.block_rows
    }

    pub fn block_cols(&self) -> usize {
        self.block_cols
    }

    pub fn block_size(&self) -> usize {
        self.block_size
    }

    pub fn block(&self, pos: (usize, usize)) -> Option<&ExactMatrix> {
        self.blocks.get(&pos)
    }

    pub fn known_blocks(&self) -> impl Iterator<Item = ((usize, usize), &ExactMatrix)> {
        self.blocks.iter().map(|(&p, b)| (p, b))
    }

    /// Scalar view: every entry of a known block becomes a known scalar.
    /// This is what the brute-force oracle consumes.
    pub fn lower(&self) -> PartialMatrix {
        let k = self.block_size;
        let mut known = BTreeSet::new();
        let mut values = BTreeMap::new();
        for (&(bi, bj), block) in &self.blocks {
            for s in 1..=k {
                for t in 1..=k {
                    let pos = ((bi - 1) * k + s, (bj - 1) * k + t);
                    known.insert(pos);
                    values.insert(pos, block.get(s - 1, t - 1).clone());
                }
            }
        }
        PartialMatrix {
            pattern: Pattern {
                rows: self.block_rows * k,
                cols: self.block_cols * k,
                known,
            },
            values,
            spec: self.spec,
        }
    }

    /// Whether the known blocks are exactly the cycle positions
    /// (i,i), (i,i+1), (n,1) of a square block pattern with n ≥ 3.
    pub fn is_cycle_layout(&self) -> bool {
        let n = self.block_rows;
        if n < 3 || self.block_cols != n {
            return false;
        }
        let mut expected = BTreeSet::new();
        for i in 1..=n {
            expected.insert((i, i));
            if i < n {
                expected.insert((i, i + 1));
            }
        }
        expected.insert((n, 1));
        self.blocks.keys().copied().collect::<BTreeSet<_>>() == expected
    }
}
