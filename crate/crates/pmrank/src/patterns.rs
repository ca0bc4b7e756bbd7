//! Pattern combinatorics: triangularity, maximal triangular subpatterns,
//! the bipartite graph of a pattern, chordless cycles and cycle-pattern
//! recognition.
//!
//! Patterns in scope here are tiny, so the enumerations favor clarity over
//! asymptotics and carry a node budget as a guard. Results that may be cut
//! short by the budget carry an `exhaustive` flag instead of failing.

use std::collections::{BTreeMap, BTreeSet};

use crate::error::{Error, Result};
use crate::partial::{invert_permutation, Pattern};

/// Default node budget for the backtracking enumerations.
pub const DEFAULT_NODE_BUDGET: u64 = 1_000_000;

/// A pattern is triangular when its column known-sets are linearly ordered
/// by inclusion; equivalently no 2×2 subpattern has knowns on one diagonal
/// and unknowns on the other.
pub fn is_triangular(t: &Pattern) -> bool {
    let col_sets: Vec<BTreeSet<usize>> = (1..=t.cols()).map(|j| t.col_set(j)).collect();
    for a in 0..col_sets.len() {
        for b in a + 1..col_sets.len() {
            if !col_sets[a].is_subset(&col_sets[b]) && !col_sets[b].is_subset(&col_sets[a]) {
                return false;
            }
        }
    }
    true
}

/// Row/column permutations that bring a triangular pattern into block lower
/// triangular position, together with the block sizes.
///
/// Rows and columns with no knowns are outside the block structure: empty
/// rows are sent to the top, empty columns to the right, and the block
/// sizes cover only the supported part.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TriangularBlockForm {
    /// 1-based image of each row (row i lands at `row_perm[i-1]`).
    pub row_perm: Vec<usize>,
    /// 1-based image of each column.
    pub col_perm: Vec<usize>,
    pub row_block_sizes: Vec<usize>,
    pub col_block_sizes: Vec<usize>,
    /// Rows above the block structure (empty rows).
    pub leading_empty_rows: usize,
}

pub fn triangular_block_form(t: &Pattern) -> Result<TriangularBlockForm> {
    if !is_triangular(t) {
        return Err(Error::NotTriangular);
    }
    let col_sets: Vec<BTreeSet<usize>> = (1..=t.cols()).map(|j| t.col_set(j)).collect();
    // columns sorted by descending known count, ties by ascending index
    let mut col_order: Vec<usize> = (0..t.cols()).collect();
    col_order.sort_by_key(|&j| (usize::MAX - col_sets[j].len(), j));
    let nonempty_cols = col_order
        .iter()
        .filter(|&&j| !col_sets[j].is_empty())
        .count();

    // group equal column sets into blocks; the distinct sets form a chain
    let mut chain: Vec<&BTreeSet<usize>> = Vec::new();
    let mut col_block_sizes: Vec<usize> = Vec::new();
    for &j in col_order.iter().take(nonempty_cols) {
        match chain.last() {
            Some(prev) if **prev == col_sets[j] => {
                *col_block_sizes.last_mut().unwrap() += 1;
            }
            _ => {
                chain.push(&col_sets[j]);
                col_block_sizes.push(1);
            }
        }
    }

    // row blocks: rows entering the chain at level l sit in block row l
    let m = chain.len();
    let mut row_block_sizes = vec![0usize; m];
    let mut row_level: BTreeMap<usize, usize> = BTreeMap::new(); // row -> deepest chain level containing it
    for (level, set) in chain.iter().enumerate() {
        for &r in set.iter() {
            row_level.insert(r, level);
        }
    }
    for &level in row_level.values() {
        row_block_sizes[level] += 1;
    }

    let empty_rows: Vec<usize> = (1..=t.rows())
        .filter(|r| !row_level.contains_key(r))
        .collect();
    let leading_empty_rows = empty_rows.len();

    // assemble permutations: empty rows first, then rows by (level, index)
    let mut row_perm = vec![0usize; t.rows()];
    for (slot, &r) in empty_rows.iter().enumerate() {
        row_perm[r - 1] = slot + 1;
    }
    let mut supported: Vec<usize> = row_level.keys().copied().collect();
    supported.sort_by_key(|r| (row_level[r], *r));
    for (slot, &r) in supported.iter().enumerate() {
        row_perm[r - 1] = leading_empty_rows + slot + 1;
    }

    let mut col_perm = vec![0usize; t.cols()];
    for (slot, &j) in col_order.iter().enumerate() {
        col_perm[j] = slot + 1;
    }

    Ok(TriangularBlockForm {
        row_perm,
        col_perm,
        row_block_sizes,
        col_block_sizes,
        leading_empty_rows,
    })
}

/// Result of an enumeration that may be cut short by its budget.
#[derive(Clone, Debug)]
pub struct SubpatternEnumeration {
    pub patterns: Vec<Pattern>,
    pub exhaustive: bool,
    pub nodes_visited: u64,
}

/// All maximal triangular subpatterns of `j`: triangular subsets of the
/// knowns with no triangular strict superset inside `j`.
///
/// Triangular subsets are not closed under taking subsets (adding a known
/// can repair a forbidden 2×2), so candid backtracking with subset pruning
/// misses patterns. Every subset of knowns is examined instead, with the
/// column sets kept as bitmasks; the budget counts examined subsets and a
/// fully triangular pattern short-circuits to itself.
pub fn maximal_triangular_subpatterns(j: &Pattern, node_budget: u64) -> SubpatternEnumeration {
    if is_triangular(j) {
        return SubpatternEnumeration {
            patterns: vec![j.clone()],
            exhaustive: true,
            nodes_visited: 1,
        };
    }
    let positions: Vec<(usize, usize)> = j.iter().collect();
    let count = positions.len();
    if j.rows() > 64 || count >= 63 {
        // outside the bitmask representation; such inputs also exceed any
        // sane budget, so report an honest empty non-exhaustive result
        return SubpatternEnumeration {
            patterns: Vec::new(),
            exhaustive: false,
            nodes_visited: 0,
        };
    }
    let mut nodes = 0u64;
    let mut exhaustive = true;
    let mut triangular_masks: Vec<u64> = Vec::new();
    'subsets: for mask in 0u64..(1u64 << count) {
        nodes += 1;
        if nodes > node_budget {
            exhaustive = false;
            break 'subsets;
        }
        let mut col_masks = vec![0u64; j.cols()];
        for (bit, &(r, c)) in positions.iter().enumerate() {
            if mask & (1 << bit) != 0 {
                col_masks[c - 1] |= 1u64 << (r - 1);
            }
        }
        let chain = col_masks.iter().enumerate().all(|(a, &ma)| {
            col_masks[a + 1..].iter().all(|&mb| {
                let meet = ma & mb;
                meet == ma || meet == mb
            })
        });
        if chain {
            triangular_masks.push(mask);
        }
    }
    // keep the inclusion-maximal members of the family
    let maximal: Vec<u64> = triangular_masks
        .iter()
        .copied()
        .filter(|&m| {
            !triangular_masks
                .iter()
                .any(|&other| other != m && other & m == m)
        })
        .collect();
    SubpatternEnumeration {
        patterns: maximal
            .into_iter()
            .map(|mask| {
                let set = positions
                    .iter()
                    .enumerate()
                    .filter(|(bit, _)| mask & (1 << bit) != 0)
                    .map(|(_, &p)| p);
                Pattern::new(j.rows(), j.cols(), set).expect("positions in range")
            })
            .collect(),
        exhaustive,
        nodes_visited: nodes,
    }
}

/// The bipartite graph of a pattern: row vertices, column vertices, one
/// edge per known position.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BipartiteGraph {
    pub left: usize,
    pub right: usize,
    pub edges: BTreeSet<(usize, usize)>,
}

/// A vertex of the bipartite graph. Rows order before columns.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Vertex {
    Row(usize),
    Col(usize),
}

impl std::fmt::Display for Vertex {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Vertex::Row(i) => write!(f, "r{i}"),
            Vertex::Col(j) => write!(f, "c{j}"),
        }
    }
}

pub fn bipartite_graph(j: &Pattern) -> BipartiteGraph {
    BipartiteGraph {
        left: j.rows(),
        right: j.cols(),
        edges: j.iter().collect(),
    }
}

impl BipartiteGraph {
    fn vertices(&self) -> Vec<Vertex> {
        (1..=self.left)
            .map(Vertex::Row)
            .chain((1..=self.right).map(Vertex::Col))
            .collect()
    }

    fn neighbors(&self, v: Vertex) -> Vec<Vertex> {
        match v {
            Vertex::Row(i) => self
                .edges
                .iter()
                .filter(|&&(r, _)| r == i)
                .map(|&(_, c)| Vertex::Col(c))
                .collect(),
            Vertex::Col(j) => self
                .edges
                .iter()
                .filter(|&&(_, c)| c == j)
                .map(|&(r, _)| Vertex::Row(r))
                .collect(),
        }
    }

    fn adjacent(&self, a: Vertex, b: Vertex) -> bool {
        match (a, b) {
            (Vertex::Row(i), Vertex::Col(j)) | (Vertex::Col(j), Vertex::Row(i)) => {
                self.edges.contains(&(i, j))
            }
            _ => false,
        }
    }

    pub fn degree(&self, v: Vertex) -> usize {
        self.neighbors(v).len()
    }

    /// DOT rendering of the graph, rows as `r<i>`, columns as `c<j>`.
    pub fn to_dot(&self) -> String {
        let mut out = String::from("graph pattern {\n");
        for i in 1..=self.left {
            out.push_str(&format!("  r{i} [shape=box];\n"));
        }
        for j in 1..=self.right {
            out.push_str(&format!("  c{j} [shape=circle];\n"));
        }
        for &(i, j) in &self.edges {
            out.push_str(&format!("  r{i} -- c{j};\n"));
        }
        out.push_str("}\n");
        out
    }
}

/// Chordless cycles of length ≥ `min_len`, canonicalized: each cycle starts
/// at its smallest vertex and runs in the direction whose second vertex is
/// smaller than its last.
#[derive(Clone, Debug)]
pub struct CycleEnumeration {
    pub cycles: Vec<Vec<Vertex>>,
    pub exhaustive: bool,
    pub nodes_visited: u64,
}

pub fn minimal_cycles(g: &BipartiteGraph, min_len: usize, node_budget: u64) -> CycleEnumeration {
    let min_len = min_len.max(4);
    let mut cycles = Vec::new();
    let mut nodes = 0u64;
    let mut exhausted = false;
    let vertices = g.vertices();

    // grow chordless paths from each start vertex over larger vertices only
    fn extend(
        g: &BipartiteGraph,
        path: &mut Vec<Vertex>,
        min_len: usize,
        cycles: &mut Vec<Vec<Vertex>>,
        nodes: &mut u64,
        budget: u64,
        exhausted: &mut bool,
    ) {
        *nodes += 1;
        if *nodes > budget {
            *exhausted = true;
            return;
        }
        let start = path[0];
        let last = *path.last().unwrap();
        for w in g.neighbors(last) {
            if *exhausted {
                return;
            }
            if w <= start || path.contains(&w) {
                continue;
            }
            // chordless: w may touch the path only at its endpoint, and at
            // the start when that closes the cycle
            if path.len() >= 2 {
                let touches_inner = path[1..path.len() - 1].iter().any(|&v| g.adjacent(v, w));
                if touches_inner {
                    continue;
                }
                if g.adjacent(start, w) {
                    if path.len() + 1 >= min_len && path[1] < w {
                        let mut cycle = path.clone();
                        cycle.push(w);
                        cycles.push(cycle);
                    }
                    // extending past a start-adjacent vertex would carry a chord
                    continue;
                }
            }
            path.push(w);
            extend(g, path, min_len, cycles, nodes, budget, exhausted);
            path.pop();
        }
    }

    for &s in &vertices {
        if exhausted {
            break;
        }
        let mut path = vec![s];
        extend(
            g,
            &mut path,
            min_len,
            &mut cycles,
            &mut nodes,
            node_budget,
            &mut exhausted,
        );
    }
    cycles.sort();
    CycleEnumeration {
        cycles,
        exhaustive: !exhausted,
        nodes_visited: nodes,
    }
}

/// Bipartite chordal: no chordless cycle of length 6 or more.
pub fn is_bipartite_chordal(g: &BipartiteGraph, node_budget: u64) -> (bool, bool) {
    let found = minimal_cycles(g, 6, node_budget);
    (found.cycles.is_empty(), found.exhaustive)
}

/// A recognized cycle pattern: permutations onto the canonical n×n form
/// with knowns at (i,i), (i,i+1), (n,1), plus the original positions in
/// canonical order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CycleForm {
    pub n: usize,
    /// 1-based image of each row under the canonicalizing permutation.
    pub row_perm: Vec<usize>,
    /// 1-based image of each column.
    pub col_perm: Vec<usize>,
    /// Original position landing at canonical (i, i).
    pub diagonal_positions: Vec<(usize, usize)>,
    /// Original position landing at canonical (i, i+1), last one at (n, 1).
    pub cycle_positions: Vec<(usize, usize)>,
}

/// Recognize patterns whose bipartite graph is a single cycle through all
/// 2n vertices, n ≥ 3: square, exactly two knowns per row and per column,
/// connected. Returns `None` otherwise.
pub fn recognize_cycle_pattern(j: &Pattern) -> Option<CycleForm> {
    let n = j.rows();
    if n < 3 || j.cols() != n || j.len() != 2 * n {
        return None;
    }
    for i in 1..=n {
        if j.row_set(i).len() != 2 || j.col_set(i).len() != 2 {
            return None;
        }
    }
    // walk the cycle: rows at canonical positions 1, n, n-1, ..., 2;
    // columns at 1, n, n-1, ..., 2. Starting at row 1 through its smaller
    // column keeps canonical inputs fixed.
    let g = bipartite_graph(j);
    let mut row_pos = vec![0usize; n];
    let mut col_pos = vec![0usize; n];
    let start_cols = j.row_set(1);
    let mut col_iter = start_cols.iter();
    let first_col = *col_iter.next().expect("two knowns per row");
    row_pos[0] = 1;
    col_pos[first_col - 1] = 1;
    let mut prev = Vertex::Row(1);
    let mut current = Vertex::Col(first_col);
    let mut canonical = n;
    let mut visited = 2usize;
    while visited < 2 * n {
        let next = g
            .neighbors(current)
            .into_iter()
            .find(|&v| v != prev)
            .expect("degree two");
        match next {
            Vertex::Row(r) => {
                if row_pos[r - 1] != 0 {
                    return None; // closed early: not a single cycle
                }
                row_pos[r - 1] = canonical;
            }
            Vertex::Col(c) => {
                if col_pos[c - 1] != 0 {
                    return None;
                }
                col_pos[c - 1] = canonical;
                canonical -= 1;
            }
        }
        prev = current;
        current = next;
        visited += 1;
    }
    // the walk must close back at row 1
    let closes = g
        .neighbors(current)
        .into_iter()
        .any(|v| v == Vertex::Row(1) && prev != Vertex::Row(1));
    if !closes {
        return None;
    }

    let inv_row = invert_permutation(&row_pos);
    let inv_col = invert_permutation(&col_pos);
    let diagonal_positions: Vec<(usize, usize)> =
        (1..=n).map(|i| (inv_row[i - 1], inv_col[i - 1])).collect();
    let mut cycle_positions: Vec<(usize, usize)> =
        (1..n).map(|i| (inv_row[i - 1], inv_col[i])).collect();
    cycle_positions.push((inv_row[n - 1], inv_col[0]));
    // all recovered positions must be knowns
    for &p in diagonal_positions.iter().chain(cycle_positions.iter()) {
        if !j.contains(p) {
            return None;
        }
    }
    Some(CycleForm {
        n,
        row_perm: row_pos,
        col_perm: col_pos,
        diagonal_positions,
        cycle_positions,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pat(rows: usize, cols: usize, known: &[(usize, usize)]) -> Pattern {
        Pattern::new(rows, cols, known.iter().copied()).unwrap()
    }

    #[test]
    fn triangularity_basics() {
        assert!(is_triangular(&pat(2, 2, &[(1, 1), (2, 1), (2, 2)])));
        assert!(!is_triangular(&pat(2, 2, &[(1, 1), (2, 2)])));
        assert!(is_triangular(&Pattern::full(3, 4)));
        assert!(is_triangular(&Pattern::empty(3, 4)));
        assert!(!is_triangular(&Pattern::cycle(3)));
    }

    // second, independent definition: no 2×2 subpattern with knowns on one
    // diagonal and unknowns on the other
    fn is_triangular_by_forbidden_subpattern(t: &Pattern) -> bool {
        for i1 in 1..=t.rows() {
            for i2 in 1..=t.rows() {
                if i1 == i2 {
                    continue;
                }
                for j1 in 1..=t.cols() {
                    for j2 in 1..=t.cols() {
                        if j1 == j2 {
                            continue;
                        }
                        if t.contains((i1, j1))
                            && t.contains((i2, j2))
                            && !t.contains((i1, j2))
                            && !t.contains((i2, j1))
                        {
                            return false;
                        }
                    }
                }
            }
        }
        true
    }

    #[test]
    fn triangularity_agrees_with_forbidden_subpattern_definition() {
        // all patterns on 3x3, exhaustively
        for mask in 0u32..512 {
            let known: Vec<(usize, usize)> = (0..9)
                .filter(|b| mask & (1 << b) != 0)
                .map(|b| (b / 3 + 1, b % 3 + 1))
                .collect();
            let p = pat(3, 3, &known);
            assert_eq!(
                is_triangular(&p),
                is_triangular_by_forbidden_subpattern(&p),
                "mask {mask}"
            );
        }
    }

    #[test]
    fn block_form_of_lower_triangular() {
        let t = pat(2, 2, &[(1, 1), (2, 1), (2, 2)]);
        let f = triangular_block_form(&t).unwrap();
        // column 1 has two knowns, column 2 one: identity order
        assert_eq!(f.col_perm, vec![1, 2]);
        assert_eq!(f.row_perm, vec![1, 2]);
        assert_eq!(f.row_block_sizes, vec![1, 1]);
        assert_eq!(f.col_block_sizes, vec![1, 1]);
    }

    #[test]
    fn block_form_of_upper_triangular_reverses() {
        let t = pat(2, 2, &[(1, 1), (1, 2), (2, 2)]);
        let f = triangular_block_form(&t).unwrap();
        // column 2 has both knowns so it must come first
        assert_eq!(f.col_perm, vec![2, 1]);
        assert_eq!(f.row_perm, vec![2, 1]);
        assert!(matches!(
            triangular_block_form(&pat(2, 2, &[(1, 1), (2, 2)])),
            Err(Error::NotTriangular)
        ));
    }

    #[allow(clippy::needless_range_loop)]
    fn block_form_is_lower_triangular(t: &Pattern) -> bool {
        let f = triangular_block_form(t).unwrap();
        // recheck: after permutation, a known in column block b must lie in
        // row blocks b.. (rows below the block boundary)
        let mut col_block_of = vec![0usize; t.cols() + 1];
        let mut col_starts = vec![];
        let mut acc = 0;
        for (b, size) in f.col_block_sizes.iter().enumerate() {
            col_starts.push((acc + 1, b));
            acc += size;
        }
        for j in 1..=t.cols() {
            let image = f.col_perm[j - 1];
            let block = col_starts
                .iter()
                .rev()
                .find(|&&(start, _)| image >= start)
                .map(|&(_, b)| b);
            col_block_of[j] = block.unwrap_or(usize::MAX);
        }
        let mut row_block_start = vec![];
        acc = f.leading_empty_rows;
        for size in &f.row_block_sizes {
            row_block_start.push(acc + 1);
            acc += size;
        }
        for (i, j) in t.iter() {
            let cb = col_block_of[j];
            if cb == usize::MAX {
                return false; // known in an "empty" column
            }
            let row_image = f.row_perm[i - 1];
            if row_image < row_block_start[cb] {
                return false;
            }
        }
        true
    }

    #[test]
    fn randomized_triangular_patterns_recheck_structurally() {
        // build random triangular patterns from random nested column sets
        let mut state = 12345u64;
        let mut next = move || {
            state ^= state << 13;
            state ^= state >> 7;
            state ^= state << 17;
            state
        };
        for _ in 0..60 {
            let rows = 2 + (next() % 4) as usize;
            let cols = 2 + (next() % 4) as usize;
            // random chain: start from a random subset, shrink it per column
            let mut current: BTreeSet<usize> = (1..=rows).filter(|_| next() % 2 == 0).collect();
            let mut known = Vec::new();
            for j in 1..=cols {
                for &r in &current {
                    known.push((r, j));
                }
                // shrink
                current = current
                    .iter()
                    .copied()
                    .filter(|_| next() % 3 != 0)
                    .collect();
            }
            let p = pat(rows, cols, &known);
            assert!(is_triangular(&p));
            assert!(block_form_is_lower_triangular(&p));
        }
    }

    #[test]
    fn maximal_subpatterns_of_triangular_is_itself() {
        let t = pat(2, 2, &[(1, 1), (2, 1), (2, 2)]);
        let found = maximal_triangular_subpatterns(&t, DEFAULT_NODE_BUDGET);
        assert!(found.exhaustive);
        assert_eq!(found.patterns, vec![t]);
    }

    #[test]
    fn maximal_subpatterns_of_antidiagonal() {
        let t = pat(2, 2, &[(1, 1), (2, 2)]);
        let found = maximal_triangular_subpatterns(&t, DEFAULT_NODE_BUDGET);
        assert_eq!(found.patterns.len(), 2);
        for p in &found.patterns {
            assert_eq!(p.len(), 1);
        }
    }

    #[test]
    fn maximal_subpatterns_of_three_cycle() {
        let j = Pattern::cycle(3);
        let found = maximal_triangular_subpatterns(&j, DEFAULT_NODE_BUDGET);
        assert!(found.exhaustive);
        // independent oracle: filter all 2^6 subsets
        let positions: Vec<(usize, usize)> = j.iter().collect();
        let mut expected: Vec<Pattern> = Vec::new();
        for mask in 0u32..(1 << 6) {
            let subset: Vec<(usize, usize)> = positions
                .iter()
                .enumerate()
                .filter(|(b, _)| mask & (1 << b) != 0)
                .map(|(_, &p)| p)
                .collect();
            let cand = pat(3, 3, &subset);
            if !is_triangular(&cand) {
                continue;
            }
            let maximal = positions
                .iter()
                .filter(|p| !cand.contains(**p))
                .all(|&p| !is_triangular(&cand.with_position(p)));
            if maximal {
                expected.push(cand);
            }
        }
        expected.sort();
        let mut got = found.patterns.clone();
        got.sort();
        assert_eq!(got, expected);
        for p in &got {
            assert_eq!(
                p.len(),
                3,
                "maximal subpatterns of the 3-cycle have 3 knowns"
            );
        }
    }

    #[test]
    fn maximality_holds_on_small_patterns() {
        let mut state = 999u64;
        let mut next = move || {
            state ^= state << 13;
            state ^= state >> 7;
            state ^= state << 17;
            state
        };
        for _ in 0..30 {
            let rows = 3 + (next() % 2) as usize;
            let cols = 3 + (next() % 2) as usize;
            let known: Vec<(usize, usize)> = (1..=rows)
                .flat_map(|i| (1..=cols).map(move |j| (i, j)))
                .filter(|_| next() % 2 == 0)
                .take(12)
                .collect();
            let j = pat(rows, cols, &known);
            let found = maximal_triangular_subpatterns(&j, DEFAULT_NODE_BUDGET);
            assert!(found.exhaustive);
            for t in &found.patterns {
                assert!(is_triangular(t));
                assert!(t.is_subpattern_of(&j));
                for p in j.iter().filter(|p| !t.contains(*p)) {
                    assert!(
                        !is_triangular(&t.with_position(p)),
                        "adding {p:?} keeps {t:?} triangular"
                    );
                }
            }
        }
    }

    #[test]
    fn budget_flags_non_exhaustive() {
        let j = Pattern::cycle(4);
        let found = maximal_triangular_subpatterns(&j, 5);
        assert!(!found.exhaustive);
    }

    #[test]
    fn bipartite_graph_of_identity_and_empty() {
        let g = bipartite_graph(&pat(3, 3, &[(1, 1), (2, 2), (3, 3)]));
        assert_eq!(g.edges.len(), 3);
        for i in 1..=3 {
            assert_eq!(g.degree(Vertex::Row(i)), 1);
            assert_eq!(g.degree(Vertex::Col(i)), 1);
        }
        let empty = bipartite_graph(&Pattern::empty(2, 5));
        assert!(empty.edges.is_empty());
    }

    #[test]
    fn cycle_pattern_graph_is_single_cycle() {
        let g = bipartite_graph(&Pattern::cycle(3));
        let found = minimal_cycles(&g, 4, DEFAULT_NODE_BUDGET);
        assert!(found.exhaustive);
        assert_eq!(found.cycles.len(), 1);
        assert_eq!(found.cycles[0].len(), 6);
    }

    #[test]
    fn four_cycle_filtered_by_min_len() {
        // full 2x2 pattern: one 4-cycle
        let g = bipartite_graph(&Pattern::full(2, 2));
        assert_eq!(minimal_cycles(&g, 4, DEFAULT_NODE_BUDGET).cycles.len(), 1);
        assert!(minimal_cycles(&g, 6, DEFAULT_NODE_BUDGET).cycles.is_empty());
    }

    #[test]
    fn chord_splits_six_cycle() {
        // 3-cycle pattern plus one chord edge (1,3): no chordless 6-cycle,
        // two 4-cycles
        let j = pat(
            3,
            3,
            &[(1, 1), (1, 2), (2, 2), (2, 3), (3, 3), (3, 1), (1, 3)],
        );
        let g = bipartite_graph(&j);
        let found = minimal_cycles(&g, 4, DEFAULT_NODE_BUDGET);
        assert!(found.cycles.iter().all(|c| c.len() == 4));
        assert_eq!(found.cycles.len(), 2);
        assert!(minimal_cycles(&g, 6, DEFAULT_NODE_BUDGET).cycles.is_empty());
    }

    #[test]
    fn chordality_checks() {
        let (chordal, exhaustive) =
            is_bipartite_chordal(&bipartite_graph(&Pattern::full(2, 2)), DEFAULT_NODE_BUDGET);
        assert!(chordal && exhaustive);
        let (chordal, _) =
            is_bipartite_chordal(&bipartite_graph(&Pattern::cycle(3)), DEFAULT_NODE_BUDGET);
        assert!(!chordal);
        let (chordal, _) =
            is_bipartite_chordal(&bipartite_graph(&Pattern::cycle(4)), DEFAULT_NODE_BUDGET);
        assert!(!chordal);
    }

    #[test]
    fn recognize_canonical_cycle_is_identity() {
        for n in 3..=8 {
            let j = Pattern::cycle(n);
            let form = recognize_cycle_pattern(&j).unwrap();
            assert_eq!(form.n, n);
            assert_eq!(form.row_perm, (1..=n).collect::<Vec<_>>());
            assert_eq!(form.col_perm, (1..=n).collect::<Vec<_>>());
            assert_eq!(
                form.diagonal_positions,
                (1..=n).map(|i| (i, i)).collect::<Vec<_>>()
            );
            let mut cyc: Vec<(usize, usize)> = (1..n).map(|i| (i, i + 1)).collect();
            cyc.push((n, 1));
            assert_eq!(form.cycle_positions, cyc);
        }
    }

    #[test]
    fn recognize_transpose_and_permutations() {
        // transpose of the canonical 3-cycle
        let j = pat(3, 3, &[(1, 1), (2, 1), (2, 2), (3, 2), (3, 3), (1, 3)]);
        let form = recognize_cycle_pattern(&j).unwrap();
        // applying the permutations must land on the canonical pattern
        let mut mapped = BTreeSet::new();
        for (i, jj) in j.iter() {
            mapped.insert((form.row_perm[i - 1], form.col_perm[jj - 1]));
        }
        let canonical: BTreeSet<(usize, usize)> = Pattern::cycle(3).iter().collect();
        assert_eq!(mapped, canonical);
    }

    #[test]
    fn recognize_rejects_non_cycles() {
        // a row with three knowns
        let j = pat(3, 3, &[(1, 1), (1, 2), (1, 3), (2, 2), (2, 3), (3, 3)]);
        assert!(recognize_cycle_pattern(&j).is_none());
        // two disjoint cycles on 6x6: rows 1-3 on cols 1-3, rows 4-6 on cols 4-6
        let mut known = Vec::new();
        for off in [0usize, 3] {
            for i in 1..=3usize {
                known.push((off + i, off + i));
                if i < 3 {
                    known.push((off + i, off + i + 1));
                }
            }
            known.push((off + 3, off + 1));
        }
        let j = pat(6, 6, &known);
        assert!(recognize_cycle_pattern(&j).is_none());
        // full pattern
        assert!(recognize_cycle_pattern(&Pattern::full(3, 3)).is_none());
        // 2x2 is below the minimum size
        assert!(recognize_cycle_pattern(&Pattern::full(2, 2)).is_none());
    }

    #[test]
    fn dot_export_mentions_all_edges() {
        let g = bipartite_graph(&Pattern::cycle(3));
        let dot = g.to_dot();
        assert!(dot.contains("r1 -- c1"));
        assert!(dot.contains("r3 -- c1"));
        assert!(dot.starts_with("graph pattern {"));
    }
}
