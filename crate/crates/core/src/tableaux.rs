//! Bit-matrix tableaux: the second coordinate of combined-construction
//! states.
//!
//! A tableau is a rectangular 0/1 matrix whose rows index states of one
//! automaton and whose columns index states of another; a marked cell
//! `(j, k)` stands for the live state pair `(q_j, r_k)`. A tableau is
//! *saturated* when any two rows are either equal or have disjoint marked
//! column sets; equivalently, whenever `(j, k)`, `(j', k)` and `(j', k')`
//! are marked, so is `(j, k')`. Saturation closure, enumeration of
//! saturated tableaux, and a column-word encoding live here.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::automata::BooleanOp;

/// Enumeration walks a space of `2^cells` bit masks; reject anything past
/// this many cells.
pub const ENUMERATION_CELL_LIMIT: usize = 25;

/// Hard representation limit: a tableau is a single 64-bit mask.
pub const MASK_CELL_LIMIT: usize = 64;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TableauError {
    #[error(
        "enumerating {rows} x {cols} tableaux means {cells} cells; the cap is {limit}"
    )]
    SizeGuardExceeded {
        rows: usize,
        cols: usize,
        cells: usize,
        limit: usize,
    },
    #[error("a {rows} x {cols} tableau does not fit the 64-bit representation")]
    TooManyCells { rows: usize, cols: usize },
    #[error("invalid tableau text: {0}")]
    Parse(String),
}

/// Rectangular bit matrix with at most [`MASK_CELL_LIMIT`] cells, stored
/// row-major in one `u64`: cell `(j, k)` is bit `j * cols + k`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Tableau {
    rows: usize,
    cols: usize,
    bits: u64,
}

impl Tableau {
    /// Panics if `rows * cols` exceeds [`MASK_CELL_LIMIT`].
    pub fn empty(rows: usize, cols: usize) -> Self {
        Self::from_bits(rows, cols, 0)
    }

    /// Builds from a raw row-major mask. Panics if the shape does not fit
    /// or `bits` has marks outside it.
    pub fn from_bits(rows: usize, cols: usize, bits: u64) -> Self {
        let cells = rows
            .checked_mul(cols)
            .filter(|&c| c <= MASK_CELL_LIMIT)
            .expect("tableau shape must fit 64 cells");
        assert!(
            cells == 64 || bits >> cells == 0,
            "mask has bits outside the {rows} x {cols} shape"
        );
        Self { rows, cols, bits }
    }

    pub fn from_cells(rows: usize, cols: usize, cells: &[(usize, usize)]) -> Self {
        let mut t = Self::empty(rows, cols);
        for &(j, k) in cells {
            t.mark(j, k);
        }
        t
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    /// Raw row-major mask.
    pub fn bits(&self) -> u64 {
        self.bits
    }

    pub fn cell_count(&self) -> usize {
        self.rows * self.cols
    }

    fn bit(&self, j: usize, k: usize) -> u64 {
        assert!(j < self.rows && k < self.cols, "cell ({j}, {k}) out of range");
        1 << (j * self.cols + k)
    }

    pub fn is_marked(&self, j: usize, k: usize) -> bool {
        self.bits & self.bit(j, k) != 0
    }

    pub fn mark(&mut self, j: usize, k: usize) {
        self.bits |= self.bit(j, k);
    }

    pub fn with_mark(mut self, j: usize, k: usize) -> Self {
        self.mark(j, k);
        self
    }

    pub fn count_marked(&self) -> usize {
        self.bits.count_ones() as usize
    }

    /// Marked cells in row-major order.
    pub fn marked_cells(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        let cols = self.cols.max(1);
        let mut b = self.bits;
        std::iter::from_fn(move || {
            if b == 0 {
                return None;
            }
            let i = b.trailing_zeros() as usize;
            b &= b - 1;
            Some((i / cols, i % cols))
        })
    }

    /// Marked columns of row `j`, as the low `cols` bits.
    pub(crate) fn row_bits(&self, j: usize) -> u64 {
        assert!(j < self.rows);
        let mask = if self.cols == 64 { u64::MAX } else { (1 << self.cols) - 1 };
        (self.bits >> (j * self.cols)) & mask
    }

    pub fn is_superset_of(&self, other: &Tableau) -> bool {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        other.bits & !self.bits == 0
    }

    /// Any two rows share a marked column only if they are equal.
    pub fn is_saturated(&self) -> bool {
        for j in 0..self.rows {
            let rj = self.row_bits(j);
            for l in j + 1..self.rows {
                let rl = self.row_bits(l);
                if rj & rl != 0 && rj != rl {
                    return false;
                }
            }
        }
        true
    }

    /// Least saturated tableau containing this one: repeatedly replace any
    /// two intersecting, distinct rows by their union until no pair is
    /// left.
    pub fn saturate(&self) -> Tableau {
        let mut rows: Vec<u64> = (0..self.rows).map(|j| self.row_bits(j)).collect();
        let mut changed = true;
        while changed {
            changed = false;
            for j in 0..rows.len() {
                for l in j + 1..rows.len() {
                    if rows[j] & rows[l] != 0 && rows[j] != rows[l] {
                        let union = rows[j] | rows[l];
                        rows[j] = union;
                        rows[l] = union;
                        changed = true;
                    }
                }
            }
        }
        let mut bits = 0;
        for (j, r) in rows.iter().enumerate() {
            bits |= r << (j * self.cols);
        }
        Tableau {
            rows: self.rows,
            cols: self.cols,
            bits,
        }
    }

    pub fn transpose(&self) -> Tableau {
        let mut t = Tableau::empty(self.cols, self.rows);
        for (j, k) in self.marked_cells() {
            t.mark(k, j);
        }
        t
    }

    /// Columns of `other` appended to the right of `self`; row counts must
    /// match and the result must still fit the representation.
    pub fn hconcat(&self, other: &Tableau) -> Tableau {
        assert_eq!(self.rows, other.rows, "row counts must match");
        let mut t = Tableau::empty(self.rows, self.cols + other.cols);
        for (j, k) in self.marked_cells() {
            t.mark(j, k);
        }
        for (j, k) in other.marked_cells() {
            t.mark(j, self.cols + k);
        }
        t
    }

    /// Whether some marked cell `(j, k)` satisfies `op` on the finality of
    /// row state `j` and column state `k`.
    pub fn is_final(&self, row_finals: &[bool], col_finals: &[bool], op: BooleanOp) -> bool {
        assert_eq!(row_finals.len(), self.rows);
        assert_eq!(col_finals.len(), self.cols);
        self.marked_cells()
            .any(|(j, k)| op.apply(row_finals[j], col_finals[k]))
    }

    /// Column-word encoding: one letter per column, each letter the set of
    /// rows marked in that column.
    pub fn encode(&self) -> TableauWord {
        let letters = (0..self.cols)
            .map(|k| (0..self.rows).filter(|&j| self.is_marked(j, k)).collect())
            .collect();
        TableauWord {
            rows: self.rows,
            letters,
        }
    }
}

impl fmt::Display for Tableau {
    /// One line per row, `X` marked, `.` unmarked, no trailing newline.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for j in 0..self.rows {
            if j > 0 {
                writeln!(f)?;
            }
            for k in 0..self.cols {
                f.write_str(if self.is_marked(j, k) { "X" } else { "." })?;
            }
        }
        Ok(())
    }
}

impl FromStr for Tableau {
    type Err = TableauError;

    /// Parses the [`fmt::Display`] format: lines of `X` and `.` of equal
    /// length. Trailing carriage returns are tolerated.
    fn from_str(text: &str) -> Result<Self, TableauError> {
        let lines: Vec<&str> = text.lines().map(|l| l.trim_end_matches('\r')).collect();
        let rows = lines.len();
        let cols = lines.first().map_or(0, |l| l.chars().count());
        if rows * cols > MASK_CELL_LIMIT {
            return Err(TableauError::TooManyCells { rows, cols });
        }
        let mut t = Tableau::empty(rows, cols);
        for (j, line) in lines.iter().enumerate() {
            let chars: Vec<char> = line.chars().collect();
            if chars.len() != cols {
                return Err(TableauError::Parse(format!(
                    "row {j} has {} cells, expected {cols}",
                    chars.len()
                )));
            }
            for (k, c) in chars.iter().enumerate() {
                match c {
                    'X' => t.mark(j, k),
                    '.' => {}
                    _ => {
                        return Err(TableauError::Parse(format!(
                            "unexpected character {c:?} at row {j}, column {k}"
                        )))
                    }
                }
            }
        }
        Ok(t)
    }
}

/// A tableau read column by column: letter `k` is the set of rows marked
/// in column `k`. A tableau is saturated exactly when the distinct
/// nonempty letters of its word are pairwise disjoint.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TableauWord {
    rows: usize,
    letters: Vec<BTreeSet<usize>>,
}

impl TableauWord {
    /// Panics if a letter mentions a row out of range or the decoded shape
    /// would not fit the representation.
    pub fn new(rows: usize, letters: Vec<BTreeSet<usize>>) -> Self {
        assert!(
            rows * letters.len() <= MASK_CELL_LIMIT,
            "decoded tableau must fit 64 cells"
        );
        for set in &letters {
            assert!(
                set.iter().all(|&j| j < rows),
                "letter mentions a row out of range"
            );
        }
        Self { rows, letters }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn letters(&self) -> &[BTreeSet<usize>] {
        &self.letters
    }

    pub fn decode(&self) -> Tableau {
        let mut t = Tableau::empty(self.rows, self.letters.len());
        for (k, set) in self.letters.iter().enumerate() {
            for &j in set {
                t.mark(j, k);
            }
        }
        t
    }
}

/// All saturated `rows x cols` tableaux, sorted by ascending bit mask.
///
/// Saturated tableaux are exactly the partial partitions of the row set
/// (at most `cols` blocks can appear) with each block assigned to at least
/// one column and every column holding one block or nothing, so they are
/// generated directly rather than filtered out of all `2^cells` masks.
pub fn enumerate_saturated(rows: usize, cols: usize) -> Result<Vec<Tableau>, TableauError> {
    let cells = rows * cols;
    if cells > ENUMERATION_CELL_LIMIT {
        return Err(TableauError::SizeGuardExceeded {
            rows,
            cols,
            cells,
            limit: ENUMERATION_CELL_LIMIT,
        });
    }
    let mut masks: Vec<u64> = Vec::new();
    let mut blocks: Vec<Vec<usize>> = Vec::new();
    partial_partitions(0, rows, cols, &mut blocks, &mut |blocks| {
        // Column-0 mask of each block; assigning a block to column k just
        // shifts it left by k.
        let block_cols: Vec<u64> = blocks
            .iter()
            .map(|b| b.iter().fold(0u64, |m, &j| m | 1 << (j * cols)))
            .collect();
        assign_columns(0, cols, &block_cols, 0, 0, &mut masks);
    });
    masks.sort_unstable();
    Ok(masks
        .into_iter()
        .map(|bits| Tableau::from_bits(rows, cols, bits))
        .collect())
}

/// Number of saturated `rows x cols` tableaux, by enumeration.
pub fn count_saturated(rows: usize, cols: usize) -> Result<u64, TableauError> {
    Ok(enumerate_saturated(rows, cols)?.len() as u64)
}

/// Number of saturated `rows x cols` tableaux whose cell `(0, 0)` is
/// marked, by enumeration.
pub fn count_saturated_with_origin(rows: usize, cols: usize) -> Result<u64, TableauError> {
    Ok(enumerate_saturated(rows, cols)?
        .iter()
        .filter(|t| t.bits() & 1 != 0)
        .count() as u64)
}

/// Partial partitions of `{0, .., rows-1}` into at most `max_blocks`
/// nonempty blocks, each emitted exactly once (blocks ordered by smallest
/// member).
fn partial_partitions(
    row: usize,
    rows: usize,
    max_blocks: usize,
    blocks: &mut Vec<Vec<usize>>,
    emit: &mut impl FnMut(&[Vec<usize>]),
) {
    if row == rows {
        emit(blocks);
        return;
    }
    // Row stays unassigned.
    partial_partitions(row + 1, rows, max_blocks, blocks, emit);
    for b in 0..blocks.len() {
        blocks[b].push(row);
        partial_partitions(row + 1, rows, max_blocks, blocks, emit);
        blocks[b].pop();
    }
    if blocks.len() < max_blocks {
        blocks.push(vec![row]);
        partial_partitions(row + 1, rows, max_blocks, blocks, emit);
        blocks.pop();
    }
}

/// Assign each column one block or nothing, requiring every block to be
/// used at least once.
fn assign_columns(
    col: usize,
    cols: usize,
    block_cols: &[u64],
    used: u32,
    acc: u64,
    out: &mut Vec<u64>,
) {
    let unused = block_cols.len() - used.count_ones() as usize;
    if cols - col < unused {
        return;
    }
    if col == cols {
        out.push(acc);
        return;
    }
    assign_columns(col + 1, cols, block_cols, used, acc, out);
    for (b, &mask) in block_cols.iter().enumerate() {
        assign_columns(
            col + 1,
            cols,
            block_cols,
            used | 1 << b,
            acc | mask << col,
            out,
        );
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::combinatorics::alpha;
    use num_bigint::BigInt;
    use proptest::prelude::*;

    fn all_masks(rows: usize, cols: usize) -> impl Iterator<Item = Tableau> {
        (0u64..1 << (rows * cols)).map(move |bits| Tableau::from_bits(rows, cols, bits))
    }

    /// Mark closure definition, cell by cell: marked (j,k), (j',k), (j',k')
    /// force (j,k').
    fn is_saturated_by_triangles(t: &Tableau) -> bool {
        for j in 0..t.rows() {
            for jp in 0..t.rows() {
                for k in 0..t.cols() {
                    for kp in 0..t.cols() {
                        if t.is_marked(j, k) && t.is_marked(jp, k) && t.is_marked(jp, kp)
                            && !t.is_marked(j, kp)
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
    fn cell_basics() {
        let t = Tableau::from_cells(3, 4, &[(0, 0), (2, 3), (1, 1)]);
        assert!(t.is_marked(0, 0));
        assert!(t.is_marked(2, 3));
        assert!(!t.is_marked(0, 1));
        assert_eq!(t.count_marked(), 3);
        let cells: Vec<_> = t.marked_cells().collect();
        assert_eq!(cells, vec![(0, 0), (1, 1), (2, 3)]);
        assert_eq!(t, Tableau::from_bits(3, 4, t.bits()));
    }

    #[test]
    #[should_panic(expected = "fit 64 cells")]
    fn oversized_shape_panics() {
        Tableau::empty(9, 8);
    }

    #[test]
    fn saturation_examples() {
        // Rows {0} and {0,1} intersect: closure marks (0,1) too.
        let t = Tableau::from_cells(2, 2, &[(0, 0), (1, 0), (1, 1)]);
        assert!(!t.is_saturated());
        let s = t.saturate();
        assert!(s.is_saturated());
        assert_eq!(s, Tableau::from_cells(2, 2, &[(0, 0), (0, 1), (1, 0), (1, 1)]));

        // Disjoint rows are already saturated.
        let t = Tableau::from_cells(2, 2, &[(0, 0), (1, 1)]);
        assert!(t.is_saturated());
        assert_eq!(t.saturate(), t);

        assert!(Tableau::empty(0, 0).is_saturated());
        assert!(Tableau::empty(3, 3).is_saturated());
    }

    #[test]
    fn saturation_definitions_agree_exhaustively() {
        for (rows, cols) in [(1, 4), (2, 4), (3, 3), (4, 2), (4, 3), (3, 4)] {
            for t in all_masks(rows, cols) {
                assert_eq!(
                    t.is_saturated(),
                    is_saturated_by_triangles(&t),
                    "{rows}x{cols} mask {}",
                    t.bits()
                );
            }
        }
    }

    #[test]
    fn saturation_is_transpose_invariant() {
        for t in all_masks(3, 4) {
            assert_eq!(t.is_saturated(), t.transpose().is_saturated());
            assert_eq!(t.transpose().transpose(), t);
        }
    }

    #[test]
    fn enumeration_matches_naive_filter() {
        for (rows, cols) in [(0, 0), (0, 3), (3, 0), (1, 1), (1, 5), (5, 1), (2, 3), (3, 3), (2, 5), (4, 3)]
        {
            let listed = enumerate_saturated(rows, cols).unwrap();
            let expect: Vec<Tableau> = all_masks(rows, cols).filter(Tableau::is_saturated).collect();
            assert_eq!(listed, expect, "{rows} x {cols}");
        }
    }

    #[test]
    fn enumeration_counts_match_closed_form() {
        for rows in 0..=4 {
            for cols in 0..=4 {
                let count = count_saturated(rows, cols).unwrap();
                assert_eq!(BigInt::from(count), alpha(rows, cols), "{rows} x {cols}");
            }
        }
    }

    #[test]
    fn counts_are_transpose_symmetric() {
        for (rows, cols) in [(2, 5), (3, 4), (1, 6), (4, 5)] {
            assert_eq!(
                count_saturated(rows, cols).unwrap(),
                count_saturated(cols, rows).unwrap(),
                "{rows} x {cols}"
            );
        }
    }

    #[test]
    fn saturation_preserves_empty_rows_and_columns() {
        for (rows, cols) in [(3, 3), (2, 4), (4, 2)] {
            for t in all_masks(rows, cols) {
                let s = t.saturate();
                for j in 0..rows {
                    assert_eq!(t.row_bits(j) == 0, s.row_bits(j) == 0);
                }
                let (tt, st) = (t.transpose(), s.transpose());
                for k in 0..cols {
                    assert_eq!(tt.row_bits(k) == 0, st.row_bits(k) == 0);
                }
            }
        }
    }

    #[test]
    fn origin_counts() {
        assert_eq!(count_saturated_with_origin(2, 2).unwrap(), 5);
        assert_eq!(count_saturated_with_origin(3, 3).unwrap(), 43);
        assert_eq!(count_saturated_with_origin(6, 2).unwrap(), 275);
        assert_eq!(count_saturated_with_origin(2, 6).unwrap(), 275);
        assert_eq!(count_saturated_with_origin(0, 4).unwrap(), 0);
    }

    #[test]
    fn enumeration_guard() {
        assert!(matches!(
            enumerate_saturated(6, 5),
            Err(TableauError::SizeGuardExceeded { cells: 30, .. })
        ));
        assert!(enumerate_saturated(5, 5).is_ok());
    }

    #[test]
    fn word_roundtrip_and_letters() {
        // Column word with letters {0,3}, {2}, {}, {0}, {2,3}.
        let t = Tableau::from_cells(4, 5, &[(0, 0), (3, 0), (2, 1), (0, 3), (2, 4), (3, 4)]);
        let w = t.encode();
        let letters: Vec<Vec<usize>> = w
            .letters()
            .iter()
            .map(|s| s.iter().copied().collect())
            .collect();
        assert_eq!(
            letters,
            vec![vec![0, 3], vec![2], vec![], vec![0], vec![2, 3]]
        );
        assert_eq!(w.decode(), t);
        // Letters {0,3} and {0} intersect without being equal.
        assert!(!t.is_saturated());
    }

    #[test]
    fn saturated_iff_word_letters_disjoint_or_equal() {
        for t in all_masks(3, 3) {
            let letters = t.encode().letters().to_vec();
            let compatible = letters.iter().enumerate().all(|(i, a)| {
                letters[i + 1..].iter().all(|b| {
                    a.is_empty() || b.is_empty() || a == b || a.intersection(b).next().is_none()
                })
            });
            assert_eq!(t.is_saturated(), compatible, "mask {}", t.bits());
        }
    }

    #[test]
    fn finality_by_truth_table() {
        let t = Tableau::from_cells(2, 2, &[(0, 1)]);
        let rf = [true, false];
        let cf = [false, true];
        // Cell (0,1): row state final, column state final.
        assert!(t.is_final(&rf, &cf, BooleanOp::AND));
        assert!(!t.is_final(&rf, &cf, BooleanOp::XOR));
        // No marked cell, no finality, whatever the truth table.
        let all = BooleanOp::from_truth(true, true, true, true);
        assert!(!Tableau::empty(2, 2).is_final(&rf, &cf, all));
    }

    #[test]
    fn saturation_preserves_symmetric_difference_finality() {
        // Exhaustive over 3x3 tableaux and all finality patterns.
        for t in all_masks(3, 3) {
            let s = t.saturate();
            for rf_bits in 0u8..8 {
                for cf_bits in 0u8..8 {
                    let rf: Vec<bool> = (0..3).map(|i| rf_bits >> i & 1 == 1).collect();
                    let cf: Vec<bool> = (0..3).map(|i| cf_bits >> i & 1 == 1).collect();
                    assert_eq!(
                        t.is_final(&rf, &cf, BooleanOp::XOR),
                        s.is_final(&rf, &cf, BooleanOp::XOR),
                        "mask {} rf {rf_bits:b} cf {cf_bits:b}",
                        t.bits()
                    );
                }
            }
        }
    }

    #[test]
    fn display_and_parse_roundtrip() {
        let t = Tableau::from_cells(2, 3, &[(0, 0), (1, 2)]);
        assert_eq!(t.to_string(), "X..\n..X");
        assert_eq!("X..\n..X".parse::<Tableau>().unwrap(), t);
        assert_eq!("X..\r\n..X\r\n".parse::<Tableau>().unwrap(), t);
        assert_eq!("".parse::<Tableau>().unwrap(), Tableau::empty(0, 0));
    }

    #[test]
    fn parse_rejects_bad_input() {
        assert!(matches!(
            "X.\nX".parse::<Tableau>(),
            Err(TableauError::Parse(_))
        ));
        assert!(matches!(
            "XO".parse::<Tableau>(),
            Err(TableauError::Parse(_))
        ));
        let big = format!("{}\n", "X".repeat(65));
        assert!(matches!(
            big.parse::<Tableau>(),
            Err(TableauError::TooManyCells { .. })
        ));
    }

    #[test]
    fn hconcat_places_columns() {
        let left = Tableau::from_cells(2, 2, &[(0, 0)]);
        let right = Tableau::from_cells(2, 1, &[(1, 0)]);
        let glued = left.hconcat(&right);
        assert_eq!(glued, Tableau::from_cells(2, 3, &[(0, 0), (1, 2)]));
    }

    fn arb_tableau(max_rows: usize, max_cols: usize) -> impl Strategy<Value = Tableau> {
        (1..=max_rows, 1..=max_cols).prop_flat_map(|(r, c)| {
            (0u64..1 << (r * c)).prop_map(move |bits| Tableau::from_bits(r, c, bits))
        })
    }

    proptest! {
        #[test]
        fn saturate_is_extensive_and_idempotent(t in arb_tableau(4, 4)) {
            let s = t.saturate();
            prop_assert!(s.is_superset_of(&t));
            prop_assert!(s.is_saturated());
            prop_assert_eq!(s.saturate(), s);
        }

        #[test]
        fn saturate_is_monotone(t in arb_tableau(3, 4), extra in any::<u64>()) {
            let bigger = Tableau::from_bits(
                t.rows(),
                t.cols(),
                t.bits() | (extra & ((1 << t.cell_count()) - 1)),
            );
            prop_assert!(bigger.saturate().is_superset_of(&t.saturate()));
        }

        #[test]
        fn words_with_compatible_letters_decode_saturated(
            cols in prop::collection::vec(0usize..=4, 0..5)
        ) {
            // Letters drawn from the fixed partial partition {{0,1}, {2}}.
            let choices: [&[usize]; 3] = [&[], &[0, 1], &[2]];
            let letters: Vec<BTreeSet<usize>> = cols
                .iter()
                .map(|&c| choices[c % 3].iter().copied().collect())
                .collect();
            let word = TableauWord::new(3, letters);
            prop_assert!(word.decode().is_saturated());
        }
    }
}
