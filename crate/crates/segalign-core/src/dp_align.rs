//! Pairwise dynamic-programming alignment with every optimal traceback.
//!
//! Matches cost 0; mismatches and gaps cost 1. The first sequence labels
//! the columns and becomes the top row of each alignment, the second labels
//! the rows and becomes the bottom row.
//!
//! # Example
//!
//! ```
//! use segalign_core::dp_align::{build_table, traceback_all, Mode};
//!
//! let t = build_table(b"ACCGACTG", b"ACATCTG", Mode::Global);
//! assert_eq!(t.corner(), 3);
//! assert_eq!(traceback_all(&t).len(), 4);
//! ```

use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

/// How the first row and column are initialized.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Mode {
    /// Gap penalties `0, 1, 2, ..` along both borders.
    Global,
    /// Zero borders on both sides.
    Local,
    /// Zero first row, incremented first column.
    SemiGlobal,
}

/// A filled score table.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ScoreTable {
    top: Vec<u8>,
    bottom: Vec<u8>,
    mode: Mode,
    cells: Vec<Vec<u32>>,
}

impl ScoreTable {
    /// Sequence labelling the columns.
    pub fn top(&self) -> &[u8] {
        &self.top
    }

    /// Sequence labelling the rows.
    pub fn bottom(&self) -> &[u8] {
        &self.bottom
    }

    /// Initialization mode.
    pub fn mode(&self) -> Mode {
        self.mode
    }

    /// Rows of cells, row 0 being the leading gap row.
    pub fn cells(&self) -> &[Vec<u32>] {
        &self.cells
    }

    /// Score in the bottom-right cell.
    pub fn corner(&self) -> u32 {
        self.cells[self.bottom.len()][self.top.len()]
    }
}

/// Fills the table for `top` (columns) against `bottom` (rows).
pub fn build_table(top: &[u8], bottom: &[u8], mode: Mode) -> ScoreTable {
    let (w, h) = (top.len(), bottom.len());
    let mut cells = vec![vec![0u32; w + 1]; h + 1];
    for (j, c) in cells[0].iter_mut().enumerate() {
        *c = if mode == Mode::Global { j as u32 } else { 0 };
    }
    for (i, row) in cells.iter_mut().enumerate() {
        row[0] = if mode == Mode::Local { 0 } else { i as u32 };
    }
    for i in 1..=h {
        for j in 1..=w {
            let p = cells[i - 1][j - 1];
            cells[i][j] = if top[j - 1] == bottom[i - 1] {
                p
            } else {
                p.min(cells[i - 1][j]).min(cells[i][j - 1]) + 1
            };
        }
    }
    ScoreTable {
        top: top.to_vec(),
        bottom: bottom.to_vec(),
        mode,
        cells,
    }
}

/// Two gap-padded rows of equal length; `None` is a gap.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PairwiseAlignment {
    top: Vec<Option<u8>>,
    bottom: Vec<Option<u8>>,
}

impl PairwiseAlignment {
    /// Builds an alignment from padded rows.
    ///
    /// Returns `None` when the lengths differ or a column is gap on gap.
    pub fn new(top: Vec<Option<u8>>, bottom: Vec<Option<u8>>) -> Option<Self> {
        if top.len() != bottom.len() || top.iter().zip(&bottom).any(|(a, b)| a.is_none() && b.is_none()) {
            return None;
        }
        Some(Self { top, bottom })
    }

    /// Padded top row.
    pub fn top(&self) -> &[Option<u8>] {
        &self.top
    }

    /// Padded bottom row.
    pub fn bottom(&self) -> &[Option<u8>] {
        &self.bottom
    }

    /// Common padded length.
    pub fn len(&self) -> usize {
        self.top.len()
    }

    /// Whether both rows are empty.
    pub fn is_empty(&self) -> bool {
        self.top.is_empty()
    }

    /// Column-by-column cost: 0 for a match, 1 otherwise.
    pub fn cost(&self) -> u32 {
        self.top
            .iter()
            .zip(&self.bottom)
            .filter(|(a, b)| a.is_none() || a != b)
            .count() as u32
    }

    /// Renders a row with `gap` for gaps; bytes are read as ASCII.
    pub fn render_row(row: &[Option<u8>], gap: &str) -> String {
        let mut s = String::new();
        for x in row {
            match x {
                Some(c) => s.push(char::from(*c)),
                None => s.push_str(gap),
            }
        }
        s
    }

    /// Both rows rendered with `gap`.
    pub fn render(&self, gap: &str) -> (String, String) {
        (Self::render_row(&self.top, gap), Self::render_row(&self.bottom, gap))
    }
}

/// Removes the gaps of a padded row.
pub fn strip(row: &[Option<u8>]) -> Vec<u8> {
    row.iter().flatten().copied().collect()
}

#[derive(Clone, Copy)]
enum Move {
    Diagonal,
    Up,
    Left,
}

fn moves(t: &ScoreTable, i: usize, j: usize) -> Vec<Move> {
    if i == 0 {
        return vec![Move::Left];
    }
    if j == 0 {
        return vec![Move::Up];
    }
    let c = &t.cells;
    let cell = c[i][j];
    if t.top[j - 1] == t.bottom[i - 1] {
        return vec![Move::Diagonal];
    }
    let mut out = Vec::new();
    if cell == c[i - 1][j - 1] + 1 {
        out.push(Move::Diagonal);
    }
    if cell == c[i - 1][j] + 1 {
        out.push(Move::Up);
    }
    if cell == c[i][j - 1] + 1 {
        out.push(Move::Left);
    }
    out
}

/// Every alignment read off a justified path from the bottom-right cell to
/// the top-left one, deduplicated and sorted by length, top, then bottom.
pub fn traceback_all(t: &ScoreTable) -> Vec<PairwiseAlignment> {
    let mut out = Vec::new();
    let mut top = Vec::new();
    let mut bottom = Vec::new();
    walk(t, t.bottom.len(), t.top.len(), &mut top, &mut bottom, &mut out);
    out.sort_by(|a: &PairwiseAlignment, b| (a.len(), &a.top, &a.bottom).cmp(&(b.len(), &b.top, &b.bottom)));
    out.dedup();
    out
}

fn walk(
    t: &ScoreTable,
    i: usize,
    j: usize,
    top: &mut Vec<Option<u8>>,
    bottom: &mut Vec<Option<u8>>,
    out: &mut Vec<PairwiseAlignment>,
) {
    if i == 0 && j == 0 {
        out.push(PairwiseAlignment {
            top: top.iter().rev().copied().collect(),
            bottom: bottom.iter().rev().copied().collect(),
        });
        return;
    }
    for m in moves(t, i, j) {
        let (ni, nj, a, b) = match m {
            Move::Diagonal => (i - 1, j - 1, Some(t.top[j - 1]), Some(t.bottom[i - 1])),
            Move::Up => (i - 1, j, None, Some(t.bottom[i - 1])),
            Move::Left => (i, j - 1, Some(t.top[j - 1]), None),
        };
        top.push(a);
        bottom.push(b);
        walk(t, ni, nj, top, bottom, out);
        top.pop();
        bottom.pop();
    }
}

/// Optimal alignments of one pair of named sequences.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PairAlignments {
    /// Position of the top sequence among the inputs.
    pub first: usize,
    /// Position of the bottom sequence among the inputs.
    pub second: usize,
    /// Score of the table corner.
    pub score: u32,
    /// Alignments sorted by length, top, then bottom.
    pub alignments: Vec<PairwiseAlignment>,
}

impl PairAlignments {
    /// Alignments grouped by padded length, in increasing length.
    pub fn by_length(&self) -> Vec<(usize, Vec<&PairwiseAlignment>)> {
        let mut groups: Vec<(usize, Vec<&PairwiseAlignment>)> = Vec::new();
        for a in &self.alignments {
            match groups.last_mut() {
                Some((n, g)) if *n == a.len() => g.push(a),
                _ => groups.push((a.len(), vec![a])),
            }
        }
        groups
    }
}

/// Aligns every unordered pair `(i, j)` with `i < j`, sequence `i` on top.
pub fn align_all_pairs<S: AsRef<[u8]>>(sequences: &[S], mode: Mode) -> Vec<PairAlignments> {
    let mut out = Vec::new();
    for i in 0..sequences.len() {
        for j in i + 1..sequences.len() {
            let t = build_table(sequences[i].as_ref(), sequences[j].as_ref(), mode);
            out.push(PairAlignments {
                first: i,
                second: j,
                score: t.corner(),
                alignments: traceback_all(&t),
            });
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rows(a: &PairwiseAlignment) -> (String, String) {
        a.render("ε")
    }

    #[test]
    fn reference_table() {
        let t = build_table(b"ACCGACTG", b"ACATCTG", Mode::Global);
        let expected: [[u32; 9]; 8] = [
            [0, 1, 2, 3, 4, 5, 6, 7, 8],
            [1, 0, 1, 2, 3, 4, 5, 6, 7],
            [2, 1, 0, 1, 2, 3, 4, 5, 6],
            [3, 2, 1, 1, 2, 2, 3, 4, 5],
            [4, 3, 2, 2, 2, 3, 3, 3, 4],
            [5, 4, 3, 2, 3, 3, 3, 4, 4],
            [6, 5, 4, 3, 3, 4, 4, 3, 4],
            [7, 6, 5, 4, 3, 4, 5, 4, 3],
        ];
        for (row, exp) in t.cells().iter().zip(expected.iter()) {
            assert_eq!(row.as_slice(), exp.as_slice());
        }
        assert_eq!(t.corner(), 3);
    }

    #[test]
    fn first_pair_alignments() {
        let t = build_table(b"ACCGACTG", b"ACATCTG", Mode::Global);
        let got: Vec<(String, String)> = traceback_all(&t).iter().map(rows).collect();
        let want = [
            ("ACCGACTG", "AεCATCTG"),
            ("ACCGACTG", "ACAεTCTG"),
            ("ACCGACTG", "ACATεCTG"),
            ("ACCGAεCTG", "AεCεATCTG"),
        ];
        assert_eq!(got.len(), 4);
        for (a, b) in want {
            assert!(got.contains(&(a.into(), b.into())), "{a}/{b}");
        }
    }

    #[test]
    fn last_pair_counts_by_length() {
        let t = build_table(b"ACCGTCA", b"ACTACTG", Mode::Global);
        let all = traceback_all(&t);
        let count = |n| all.iter().filter(|a| a.len() == n).count();
        assert_eq!((all.len(), count(7), count(8), count(9)), (17, 1, 12, 4));
    }

    #[test]
    fn degenerate_inputs() {
        let t = build_table(b"ACGT", b"ACGT", Mode::Global);
        assert!((0..=4).all(|k| t.cells()[k][k] == 0));
        let all = traceback_all(&t);
        assert_eq!(all.len(), 1);
        assert!(all[0].top().iter().all(Option::is_some));
        assert_eq!(build_table(b"ACG", b"", Mode::Global).corner(), 3);
    }

    #[test]
    fn all_pairs_in_index_order() {
        let seqs = ["ACCGACTG", "ACATCTG", "ACCGTCA", "ACTACTG"];
        let pairs = align_all_pairs(&seqs, Mode::Global);
        let counts: Vec<usize> = pairs.iter().map(|p| p.alignments.len()).collect();
        assert_eq!(counts, vec![4, 2, 2, 4, 3, 17]);
        assert_eq!(pairs[1].by_length(), vec![(8, pairs[1].alignments.iter().collect())]);
    }

    #[test]
    fn local_and_semiglobal_borders() {
        let t = build_table(b"ACG", b"CG", Mode::Local);
        assert!(t.cells()[0].iter().all(|&c| c == 0));
        assert!(t.cells().iter().all(|r| r[0] == 0));
        let s = build_table(b"ACG", b"CG", Mode::SemiGlobal);
        assert!(s.cells()[0].iter().all(|&c| c == 0));
        assert_eq!(s.cells()[2][0], 2);
        for a in traceback_all(&s) {
            assert_eq!(strip(a.top()), b"ACG");
            assert_eq!(strip(a.bottom()), b"CG");
        }
    }
}
