//! Juxtapositions, alternations and grid classes.
//!
//! Coordinates follow the plot of a Cayley permutation: index `i` (1-based,
//! left to right) and value `v` (1-based, bottom to top). Grid matrices are
//! indexed from the bottom-left cell. `I` and `D` are strictly monotone, `C`
//! is constant, and an empty cell satisfies every kind.

use std::fmt;
use std::ops::RangeInclusive;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::cayley::{standardise, CayleyPermutation};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum CellKind {
    /// Strictly increasing.
    I,
    /// Strictly decreasing.
    D,
    /// Constant.
    C,
    /// Empty.
    Zero,
}

impl CellKind {
    /// Whether `seq` (in index order) is of this kind. Empty sequences
    /// satisfy every kind.
    pub fn accepts(self, seq: &[u32]) -> bool {
        match self {
            CellKind::I => seq.windows(2).all(|w| w[0] < w[1]),
            CellKind::D => seq.windows(2).all(|w| w[0] > w[1]),
            CellKind::C => seq.windows(2).all(|w| w[0] == w[1]),
            CellKind::Zero => seq.is_empty(),
        }
    }

    fn symbol(self) -> char {
        match self {
            CellKind::I => 'I',
            CellKind::D => 'D',
            CellKind::C => 'C',
            CellKind::Zero => '0',
        }
    }
}

impl fmt::Display for CellKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.symbol())
    }
}

impl FromStr for CellKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "I" => Ok(CellKind::I),
            "D" => Ok(CellKind::D),
            "C" => Ok(CellKind::C),
            "0" => Ok(CellKind::Zero),
            other => Err(Error::invalid(format!("unknown cell kind {other:?}"))),
        }
    }
}

/// A `t × u` matrix of cell kinds; `cell(col, row)` is 0-based from the
/// bottom-left.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct GridMatrix {
    cols: usize,
    rows: usize,
    // column-major
    cells: Vec<CellKind>,
}

impl GridMatrix {
    /// `columns[c][r]` is the cell in column `c`, row `r` (bottom row 0).
    pub fn new(columns: Vec<Vec<CellKind>>) -> Result<Self> {
        let cols = columns.len();
        let rows = columns.first().map_or(0, Vec::len);
        if cols == 0 || rows == 0 || columns.iter().any(|c| c.len() != rows) {
            return Err(Error::invalid("grid matrix must be a nonempty rectangle"));
        }
        Ok(GridMatrix { cols, rows, cells: columns.into_iter().flatten().collect() })
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cell(&self, col: usize, row: usize) -> CellKind {
        self.cells[col * self.rows + row]
    }

    /// The matrix `(0 B / I A)` defining `G(A,B)`.
    pub fn g_class(a: CellKind, b: CellKind) -> Self {
        GridMatrix::new(vec![vec![CellKind::I, CellKind::Zero], vec![a, b]]).unwrap()
    }

    /// Checks every cell of `pi` under `gridding`.
    pub fn is_gridding(&self, pi: &CayleyPermutation, g: &Gridding) -> bool {
        if g.col_cuts.len() != self.cols + 1 || g.row_cuts.len() != self.rows + 1 {
            return false;
        }
        let n = pi.len();
        let m = pi.height() as usize;
        let monotone = |c: &[usize], end: usize| {
            c[0] == 1 && *c.last().unwrap() == end && c.windows(2).all(|w| w[0] <= w[1])
        };
        if !monotone(&g.col_cuts, n + 1) || !monotone(&g.row_cuts, m + 1) {
            return false;
        }
        (0..self.cols).all(|c| {
            (0..self.rows).all(|r| {
                let pts = window_values(pi, g.col_cuts[c], g.col_cuts[c + 1], g.row_cuts[r], g.row_cuts[r + 1]);
                self.cell(c, r).accepts(&pts)
            })
        })
    }
}

impl fmt::Display for GridMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<String> = (0..self.rows)
            .rev()
            .map(|r| (0..self.cols).map(|c| self.cell(c, r).to_string()).collect::<Vec<_>>().join(","))
            .collect();
        f.write_str(&rows.join(";"))
    }
}

impl FromStr for GridMatrix {
    type Err = Error;

    /// Rows top to bottom separated by `;`, cells by `,`: `"0,D;I,I"`.
    fn from_str(s: &str) -> Result<Self> {
        let rows_top_down: Vec<Vec<CellKind>> = s
            .split(';')
            .map(|row| row.split(',').map(str::parse).collect::<Result<Vec<_>>>())
            .collect::<Result<_>>()?;
        let rows = rows_top_down.len();
        let cols = rows_top_down.first().map_or(0, Vec::len);
        if rows_top_down.iter().any(|r| r.len() != cols) {
            return Err(Error::invalid(format!("ragged grid matrix {s:?}")));
        }
        let columns = (0..cols)
            .map(|c| (0..rows).rev().map(|r| rows_top_down[r][c]).collect())
            .collect();
        GridMatrix::new(columns)
    }
}

/// Column cuts `1 = c_1 ≤ … ≤ c_{t+1} = n+1` and row cuts
/// `1 = r_1 ≤ … ≤ r_{u+1} = m+1`; cell `(k, l)` holds the points with index
/// in `[c_k, c_{k+1})` and value in `[r_l, r_{l+1})`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Gridding {
    pub col_cuts: Vec<usize>,
    pub row_cuts: Vec<usize>,
}

fn window_values(pi: &CayleyPermutation, c0: usize, c1: usize, r0: usize, r1: usize) -> Vec<u32> {
    pi.values()[c0 - 1..c1 - 1]
        .iter()
        .copied()
        .filter(|&v| (r0..r1).contains(&(v as usize)))
        .collect()
}

/// A point of a plot, 1-based.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Point {
    pub index: usize,
    pub value: u32,
}

/// The points of `pi` with index in `indices` and value in `values`, in
/// index order. Both ranges are 1-based and inclusive.
pub fn window(
    pi: &CayleyPermutation,
    indices: RangeInclusive<usize>,
    values: RangeInclusive<u32>,
) -> Result<Vec<Point>> {
    let n = pi.len();
    let m = pi.height();
    if *indices.start() < 1 || *indices.end() > n || *values.start() < 1 || *values.end() > m {
        return Err(Error::invalid(format!(
            "window {indices:?} x {values:?} outside [1,{n}] x [1,{m}]"
        )));
    }
    Ok(indices
        .filter_map(|i| {
            let v = pi.values()[i - 1];
            values.contains(&v).then_some(Point { index: i, value: v })
        })
        .collect())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Axis {
    Horizontal,
    Vertical,
}

/// Whether `pi` splits into `sigma` then `tau`: by index for the horizontal
/// axis, by value (bottom `sigma`, top `tau`) for the vertical axis.
pub fn is_juxtaposition(
    pi: &CayleyPermutation,
    sigma: &CayleyPermutation,
    tau: &CayleyPermutation,
    axis: Axis,
) -> Result<bool> {
    match axis {
        Axis::Horizontal => {
            if sigma.len() + tau.len() != pi.len() {
                return Err(Error::invalid("sizes of the parts do not add up"));
            }
            let (left, right) = pi.values().split_at(sigma.len());
            Ok(standardise(left)? == *sigma && standardise(right)? == *tau)
        }
        Axis::Vertical => {
            if sigma.height() + tau.height() != pi.height() {
                return Err(Error::invalid("heights of the parts do not add up"));
            }
            let (low, high) = split_by_value(pi.values(), sigma.height());
            if low.is_empty() || high.is_empty() {
                return Ok(false);
            }
            Ok(standardise(&low)? == *sigma && standardise(&high)? == *tau)
        }
    }
}

fn split_by_value(values: &[u32], threshold: u32) -> (Vec<u32>, Vec<u32>) {
    values.iter().partition(|&&v| v <= threshold)
}

/// The families appearing in the two regularity criteria.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum ClassTag {
    /// Horizontal juxtaposition, left part kind then right part kind.
    H(CellKind, CellKind),
    /// Vertical juxtaposition, bottom part kind then top part kind.
    V(CellKind, CellKind),
    /// Grid class of `(0 B / I A)`.
    G(CellKind, CellKind),
}

use CellKind::{C, D, I};

impl ClassTag {
    /// Both horizontal families of the horizontal criterion.
    pub const HORIZONTAL_FAMILIES: [ClassTag; 2] = [ClassTag::H(I, I), ClassTag::H(I, D)];

    /// The nine families of the vertical criterion; the first six have RGF
    /// alternations, the last three do not.
    pub const VERTICAL_FAMILIES: [ClassTag; 9] = [
        ClassTag::G(I, I),
        ClassTag::G(D, I),
        ClassTag::G(I, C),
        ClassTag::G(D, C),
        ClassTag::V(C, I),
        ClassTag::V(C, C),
        ClassTag::G(I, D),
        ClassTag::G(D, D),
        ClassTag::V(C, D),
    ];

    pub fn is_valid(self) -> bool {
        let mono = |k| matches!(k, I | D);
        let any = |k| matches!(k, I | D | C);
        match self {
            ClassTag::H(a, b) => mono(a) && mono(b),
            ClassTag::V(a, b) => any(a) && any(b),
            ClassTag::G(a, b) => mono(a) && any(b),
        }
    }

    /// Families whose top part decreases: their alternations are not RGFs.
    pub fn has_decreasing_top(self) -> bool {
        matches!(self, ClassTag::G(_, D) | ClassTag::V(_, D))
    }

    /// All valid tags: 4 horizontal, 9 vertical, 6 grid.
    pub fn all() -> Vec<ClassTag> {
        let kinds = [I, D, C];
        let mut out = Vec::new();
        for a in kinds {
            for b in kinds {
                for t in [ClassTag::H(a, b), ClassTag::V(a, b), ClassTag::G(a, b)] {
                    if t.is_valid() {
                        out.push(t);
                    }
                }
            }
        }
        out
    }
}

impl fmt::Display for ClassTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ClassTag::H(a, b) => write!(f, "H({a},{b})"),
            ClassTag::V(a, b) => write!(f, "V({a},{b})"),
            ClassTag::G(a, b) => write!(f, "G({a},{b})"),
        }
    }
}

impl FromStr for ClassTag {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let bad = || Error::invalid(format!("unknown class tag {s:?}"));
        let (head, rest) = s.split_at_checked(1).ok_or_else(bad)?;
        let inner = rest.strip_prefix('(').and_then(|r| r.strip_suffix(')')).ok_or_else(bad)?;
        let (a, b) = inner.split_once(',').ok_or_else(bad)?;
        let (a, b): (CellKind, CellKind) = (a.parse()?, b.parse()?);
        let tag = match head {
            "H" => ClassTag::H(a, b),
            "V" => ClassTag::V(a, b),
            "G" => ClassTag::G(a, b),
            _ => return Err(bad()),
        };
        if tag.is_valid() {
            Ok(tag)
        } else {
            Err(bad())
        }
    }
}

/// Membership of `pi` in the family `tag`. Parts may be empty.
pub fn in_class(pi: &CayleyPermutation, tag: ClassTag) -> bool {
    let values = pi.values();
    match tag {
        ClassTag::H(a, b) => (0..=values.len()).any(|k| a.accepts(&values[..k]) && b.accepts(&values[k..])),
        ClassTag::V(a, b) => (0..=pi.height()).any(|t| {
            let (low, high) = split_by_value(values, t);
            a.accepts(&low) && b.accepts(&high)
        }),
        ClassTag::G(a, b) => find_gridding(pi, &GridMatrix::g_class(a, b)).is_some(),
    }
}

/// Exhaustive search over cut vectors; the first witness in lexicographic
/// order (column cuts, then row cuts) is returned.
pub fn find_gridding(pi: &CayleyPermutation, matrix: &GridMatrix) -> Option<Gridding> {
    let n = pi.len();
    let m = pi.height() as usize;
    let col_options = monotone_cuts(matrix.cols(), n + 1);
    let row_options = monotone_cuts(matrix.rows(), m + 1);
    for cols in &col_options {
        for rows in &row_options {
            let g = Gridding { col_cuts: cols.clone(), row_cuts: rows.clone() };
            if matrix.is_gridding(pi, &g) {
                return Some(g);
            }
        }
    }
    None
}

/// All sequences `1 = x_1 ≤ … ≤ x_{parts+1} = end`, lexicographic.
fn monotone_cuts(parts: usize, end: usize) -> Vec<Vec<usize>> {
    fn rec(parts: usize, end: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == parts {
            cur.push(end);
            out.push(cur.clone());
            cur.pop();
            return;
        }
        let lo = *cur.last().unwrap();
        for x in lo..=end {
            cur.push(x);
            rec(parts, end, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(parts, end, &mut vec![1], &mut out);
    out
}

fn run(kind: CellKind, len: usize, base: u32) -> Vec<u32> {
    let len32 = len as u32;
    match kind {
        I => (1..=len32).map(|v| base + v).collect(),
        D => (1..=len32).rev().map(|v| base + v).collect(),
        C => vec![base + 1; len],
        CellKind::Zero => Vec::new(),
    }
}

/// The size-`2n` horizontal concatenation of type `H(I,I)` or `H(I,D)`.
pub fn concatenation(tag: ClassTag, n: usize) -> Result<CayleyPermutation> {
    if n == 0 {
        return Err(Error::invalid("half-size must be at least 1"));
    }
    let tail = match tag {
        ClassTag::H(I, I) => run(I, n, 0),
        ClassTag::H(I, D) => run(D, n, 0),
        other => return Err(Error::invalid(format!("no concatenation for {other}"))),
    };
    let mut values = run(I, n, 0);
    values.extend(tail);
    Ok(CayleyPermutation::from_vec_unchecked(values))
}

fn interleave(a: &[u32], b: &[u32]) -> Vec<u32> {
    a.iter().zip(b).flat_map(|(&x, &y)| [x, y]).collect()
}

/// The vertical alternation `a_1 b_1 … a_n b_n` of type `V(A,B)`.
pub fn vertical_alternation(tag: ClassTag, n: usize) -> Result<CayleyPermutation> {
    let ClassTag::V(a, b) = tag else {
        return Err(Error::invalid(format!("{tag} is not a vertical juxtaposition type")));
    };
    if n == 0 || !tag.is_valid() {
        return Err(Error::invalid(format!("no alternation of type {tag} and size {}", 2 * n)));
    }
    let bottom = run(a, n, 0);
    let h = *bottom.iter().max().unwrap();
    let top = run(b, n, h);
    Ok(CayleyPermutation::from_vec_unchecked(interleave(&bottom, &top)))
}

/// The `G(A,B)`-alternation `1 2 … n a_1 b_1 … a_n b_n` of size `3n`.
pub fn g_alternation(tag: ClassTag, n: usize) -> Result<CayleyPermutation> {
    let ClassTag::G(a, b) = tag else {
        return Err(Error::invalid(format!("{tag} is not a grid class type")));
    };
    if n == 0 || !tag.is_valid() {
        return Err(Error::invalid(format!("no alternation of type {tag} and size {}", 3 * n)));
    }
    let mut values = run(I, n, 0);
    values.extend(interleave(&run(a, n, 0), &run(b, n, n as u32)));
    Ok(CayleyPermutation::from_vec_unchecked(values))
}

/// The canonical alternation of a vertical-criterion family with `n` pairs
/// (vertical) or triples (grid).
pub fn alternation(tag: ClassTag, n: usize) -> Result<CayleyPermutation> {
    match tag {
        ClassTag::V(..) => vertical_alternation(tag, n),
        ClassTag::G(..) => g_alternation(tag, n),
        ClassTag::H(..) => concatenation(tag, n),
    }
}

/// Indices (0-based) of a strictly increasing, strictly decreasing or
/// constant subsequence of length `target`, if one exists. Always succeeds
/// when `w.len() >= target^3`.
pub fn monotone_or_constant_subsequence(w: &[u32], target: usize) -> Option<Vec<usize>> {
    if target == 0 {
        return Some(Vec::new());
    }
    let mut by_value: std::collections::BTreeMap<u32, Vec<usize>> = Default::default();
    for (i, &v) in w.iter().enumerate() {
        by_value.entry(v).or_default().push(i);
    }
    if let Some(run) = by_value.values().find(|ix| ix.len() >= target) {
        return Some(run[..target].to_vec());
    }
    for cmp in [|x: u32, y: u32| x < y, |x: u32, y: u32| x > y] {
        let chain = longest_chain(w, cmp);
        if chain.len() >= target {
            return Some(chain[..target].to_vec());
        }
    }
    None
}

/// Longest subsequence whose consecutive entries satisfy `rel`, by the
/// quadratic dynamic program.
fn longest_chain(w: &[u32], rel: impl Fn(u32, u32) -> bool) -> Vec<usize> {
    let n = w.len();
    let mut len = vec![1usize; n];
    let mut prev = vec![usize::MAX; n];
    for j in 0..n {
        for i in 0..j {
            if rel(w[i], w[j]) && len[i] + 1 > len[j] {
                len[j] = len[i] + 1;
                prev[j] = i;
            }
        }
    }
    let Some(mut end) = (0..n).max_by_key(|&j| (len[j], std::cmp::Reverse(j))) else {
        return Vec::new();
    };
    let mut out = vec![end];
    while prev[end] != usize::MAX {
        end = prev[end];
        out.push(end);
    }
    out.reverse();
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cp(s: &str) -> CayleyPermutation {
        s.parse().unwrap()
    }

    #[test]
    fn window_examples() {
        let pi = cp("135641742");
        let vals: Vec<u32> = window(&pi, 3..=7, 1..=4).unwrap().iter().map(|p| p.value).collect();
        assert_eq!(vals, vec![4, 1]);
        assert_eq!(window(&pi, 1..=9, 1..=7).unwrap().len(), 9);
        let vals: Vec<u32> = window(&cp("1213214"), 1..=3, 1..=1).unwrap().iter().map(|p| p.value).collect();
        assert_eq!(vals, vec![1, 1]);
        assert!(window(&pi, 0..=3, 1..=2).is_err());
        assert!(window(&pi, 1..=3, 1..=8).is_err());
    }

    #[test]
    fn juxtaposition_examples() {
        assert!(is_juxtaposition(&cp("14242534"), &cp("1323"), &cp("1423"), Axis::Horizontal).unwrap());
        assert!(is_juxtaposition(&cp("51521443"), &cp("1213"), &cp("2211"), Axis::Vertical).unwrap());
        assert!(is_juxtaposition(&cp("11"), &cp("1"), &cp("1"), Axis::Horizontal).unwrap());
        assert!(is_juxtaposition(&cp("12"), &cp("1"), &cp("1"), Axis::Vertical).unwrap());
        assert!(is_juxtaposition(&cp("21"), &cp("1"), &cp("1"), Axis::Horizontal).unwrap());
        assert!(!is_juxtaposition(&cp("121"), &cp("11"), &cp("11"), Axis::Vertical).unwrap());
        assert!(is_juxtaposition(&cp("121"), &cp("1"), &cp("12"), Axis::Vertical).is_err());
    }

    #[test]
    fn class_membership_examples() {
        assert!(in_class(&cp("12344321"), ClassTag::H(I, D)));
        assert!(in_class(&cp("121314"), ClassTag::V(C, I)));
        assert!(in_class(&cp("123142536"), ClassTag::G(I, I)));
        assert!(!in_class(&cp("111"), ClassTag::H(I, I)));
        let both: Vec<String> = crate::cayley::generate_cayley(3)
            .unwrap()
            .into_iter()
            .filter(|p| in_class(p, ClassTag::H(I, I)) && in_class(p, ClassTag::H(I, D)))
            .map(|p| p.to_string())
            .collect();
        assert_eq!(both, vec!["121", "122", "123", "132", "231"]);
    }

    #[test]
    fn gridding_examples() {
        let m: GridMatrix = "0,I;I,I".parse().unwrap();
        let g = find_gridding(&cp("121"), &m).unwrap();
        assert_eq!(g.col_cuts, vec![1, 2, 4]);
        assert_eq!(g.row_cuts, vec![1, 2, 3]);
        assert!(find_gridding(&cp("211"), &m).is_none());
        let inc: GridMatrix = "I".parse().unwrap();
        assert!(find_gridding(&cp("123"), &inc).is_some());
        assert!(find_gridding(&cp("132"), &inc).is_none());
        assert!(find_gridding(&cp("11"), &inc).is_none());
    }

    #[test]
    fn matrix_text_round_trip() {
        let m: GridMatrix = "0,D;I,I".parse().unwrap();
        assert_eq!(m, GridMatrix::g_class(I, D));
        assert_eq!(m.to_string(), "0,D;I,I");
        assert!("0,D;I".parse::<GridMatrix>().is_err());
        assert!("X".parse::<GridMatrix>().is_err());
    }

    #[test]
    fn constructions() {
        assert_eq!(concatenation(ClassTag::H(I, D), 4).unwrap(), cp("12344321"));
        assert_eq!(concatenation(ClassTag::H(I, I), 1).unwrap(), cp("11"));
        assert_eq!(concatenation(ClassTag::H(I, I), 3).unwrap(), cp("123123"));
        assert!(concatenation(ClassTag::H(D, I), 3).is_err());
        assert_eq!(vertical_alternation(ClassTag::V(C, I), 3).unwrap(), cp("121314"));
        assert_eq!(vertical_alternation(ClassTag::V(C, C), 3).unwrap(), cp("121212"));
        assert_eq!(vertical_alternation(ClassTag::V(C, D), 2).unwrap(), cp("1312"));
        assert_eq!(g_alternation(ClassTag::G(I, I), 3).unwrap(), cp("123142536"));
        assert_eq!(g_alternation(ClassTag::G(D, I), 2).unwrap(), cp("122314"));
        assert_eq!(g_alternation(ClassTag::G(I, C), 2).unwrap(), cp("121323"));
    }

    #[test]
    fn tags() {
        assert_eq!(ClassTag::all().len(), 4 + 9 + 6);
        for t in ClassTag::all() {
            assert_eq!(t.to_string().parse::<ClassTag>().unwrap(), t);
        }
        assert!("G(C,I)".parse::<ClassTag>().is_err());
        assert!("H(C,I)".parse::<ClassTag>().is_err());
    }

    #[test]
    fn monotone_subsequences() {
        assert_eq!(monotone_or_constant_subsequence(&[2, 2, 2, 2], 4), Some(vec![0, 1, 2, 3]));
        let ix = monotone_or_constant_subsequence(&[3, 1, 4, 2], 2).unwrap();
        assert_eq!(ix.len(), 2);
        assert!(monotone_or_constant_subsequence(&[3, 1, 4, 2], 3).is_none());
        assert_eq!(monotone_or_constant_subsequence(&[], 0), Some(vec![]));
    }
}
