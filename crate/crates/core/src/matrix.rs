//! Partial (0,1)-matrices with prescribed row and column sums.
//!
//! A [`PartialMatrix`] is a dense grid of [`Entry`] values together with the
//! [`MarginSpec`] it is measured against. All public coordinates are 1-based;
//! the `(i, j)` cell is row `i`, column `j`.
//!
//! The text format is a margin header followed by one line per row:
//!
//! ```text
//! R=1,1 S=1,1
//! 1.
//! .0
//! ```
//!
//! where `.` marks an empty cell.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::cellset::{CellSet, MAX_CELLS};
use crate::error::{Error, Result};

/// Content of a single cell.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Entry {
    Zero,
    One,
    Empty,
}

impl Entry {
    pub fn from_bit(b: bool) -> Self {
        if b {
            Entry::One
        } else {
            Entry::Zero
        }
    }

    /// `Some(true)` for One, `Some(false)` for Zero.
    pub fn bit(self) -> Option<bool> {
        match self {
            Entry::Zero => Some(false),
            Entry::One => Some(true),
            Entry::Empty => None,
        }
    }

    pub fn is_filled(self) -> bool {
        self != Entry::Empty
    }

    /// Swaps Zero and One; Empty stays Empty.
    pub fn flipped(self) -> Self {
        match self {
            Entry::Zero => Entry::One,
            Entry::One => Entry::Zero,
            Entry::Empty => Entry::Empty,
        }
    }

    pub fn to_char(self) -> char {
        match self {
            Entry::Zero => '0',
            Entry::One => '1',
            Entry::Empty => '.',
        }
    }

    pub fn from_char(c: char) -> Option<Self> {
        match c {
            '0' => Some(Entry::Zero),
            '1' => Some(Entry::One),
            '.' => Some(Entry::Empty),
            _ => None,
        }
    }
}

/// One filled cell, `(row, col, value)`, 1-based.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CellTriple {
    pub row: usize,
    pub col: usize,
    pub value: bool,
}

impl CellTriple {
    pub fn new(row: usize, col: usize, value: bool) -> Self {
        CellTriple { row, col, value }
    }
}

impl Serialize for CellTriple {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        [self.row, self.col, self.value as usize].serialize(s)
    }
}

impl<'de> Deserialize<'de> for CellTriple {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let [row, col, v] = <[usize; 3]>::deserialize(d)?;
        if v > 1 {
            return Err(serde::de::Error::custom(format!("cell value {v} is not 0 or 1")));
        }
        Ok(CellTriple::new(row, col, v == 1))
    }
}

/// Row and column sum vectors `R` and `S`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct MarginSpec {
    row_sums: Vec<usize>,
    col_sums: Vec<usize>,
}

impl MarginSpec {
    pub fn new(row_sums: Vec<usize>, col_sums: Vec<usize>) -> Result<Self> {
        let (m, n) = (row_sums.len(), col_sums.len());
        if let Some(r) = row_sums.iter().find(|&&r| r > n) {
            return Err(Error::InvalidMargins(format!("row sum {r} exceeds column count {n}")));
        }
        if let Some(s) = col_sums.iter().find(|&&s| s > m) {
            return Err(Error::InvalidMargins(format!("column sum {s} exceeds row count {m}")));
        }
        let (sr, sc) = (row_sums.iter().sum::<usize>(), col_sums.iter().sum::<usize>());
        if sr != sc {
            return Err(Error::InvalidMargins(format!(
                "row sums total {sr} but column sums total {sc}"
            )));
        }
        Ok(MarginSpec { row_sums, col_sums })
    }

    /// Margins of the class of `n x n` matrices with every line summing to `x`.
    pub fn uniform(n: usize, x: usize) -> Result<Self> {
        if x > n {
            return Err(Error::InvalidMargins(format!("uniform sum {x} exceeds order {n}")));
        }
        Ok(MarginSpec { row_sums: vec![x; n], col_sums: vec![x; n] })
    }

    pub fn rows(&self) -> usize {
        self.row_sums.len()
    }

    pub fn cols(&self) -> usize {
        self.col_sums.len()
    }

    pub fn row_sums(&self) -> &[usize] {
        &self.row_sums
    }

    pub fn col_sums(&self) -> &[usize] {
        &self.col_sums
    }

    /// Margins of the transposed class.
    pub fn transposed(&self) -> Self {
        MarginSpec { row_sums: self.col_sums.clone(), col_sums: self.row_sums.clone() }
    }

    /// Margins after swapping every 0 with 1.
    pub fn complemented(&self) -> Self {
        let (m, n) = (self.rows(), self.cols());
        MarginSpec {
            row_sums: self.row_sums.iter().map(|r| n - r).collect(),
            col_sums: self.col_sums.iter().map(|s| m - s).collect(),
        }
    }

    fn header(&self) -> String {
        let join = |v: &[usize]| v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",");
        format!("R={} S={}", join(&self.row_sums), join(&self.col_sums))
    }

    fn parse_header(line: &str, lineno: usize) -> Result<Self> {
        let err = |msg: &str| Error::Parse { line: lineno, msg: msg.to_string() };
        let mut rows = None;
        let mut cols = None;
        for tok in line.split_whitespace() {
            let (key, val) = tok.split_once('=').ok_or_else(|| err("expected KEY=values"))?;
            let nums = if val.is_empty() {
                Vec::new()
            } else {
                val.split(',')
                    .map(|x| x.trim().parse::<usize>().map_err(|_| err("bad integer in header")))
                    .collect::<Result<Vec<_>>>()?
            };
            match key {
                "R" => rows = Some(nums),
                "S" => cols = Some(nums),
                _ => return Err(err("unknown header key")),
            }
        }
        match (rows, cols) {
            (Some(r), Some(s)) => MarginSpec::new(r, s).map_err(|e| err(&e.to_string())),
            _ => Err(err("header needs both R= and S=")),
        }
    }
}

/// The class being searched: `Λ_n^x` or a general `A(R,S)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ClassSpec {
    Uniform { n: usize, x: usize },
    Margins(MarginSpec),
}

impl ClassSpec {
    pub fn uniform(n: usize, x: usize) -> Result<Self> {
        if x > n {
            return Err(Error::InvalidMargins(format!("uniform sum {x} exceeds order {n}")));
        }
        Ok(ClassSpec::Uniform { n, x })
    }

    pub fn margins(&self) -> MarginSpec {
        match self {
            ClassSpec::Uniform { n, x } => MarginSpec::uniform(*n, *x).expect("checked on construction"),
            ClassSpec::Margins(m) => m.clone(),
        }
    }
}

/// A bijection of `0..n`; `apply(i)` is the image of `i`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Permutation(Vec<usize>);

impl Permutation {
    pub fn new(images: Vec<usize>) -> Result<Self> {
        let n = images.len();
        let mut seen = vec![false; n];
        for &x in &images {
            if x >= n || seen[x] {
                return Err(Error::InvalidPermutation(format!("{images:?} is not a bijection of 0..{n}")));
            }
            seen[x] = true;
        }
        Ok(Permutation(images))
    }

    /// Builds a permutation from 1-based images.
    pub fn from_one_based(images: &[usize]) -> Result<Self> {
        if images.contains(&0) {
            return Err(Error::InvalidPermutation("1-based image list contains 0".into()));
        }
        Self::new(images.iter().map(|x| x - 1).collect())
    }

    pub fn identity(n: usize) -> Self {
        Permutation((0..n).collect())
    }

    /// The permutation sending `order[k]` to position `k`.
    pub fn from_order(order: &[usize]) -> Result<Self> {
        let n = order.len();
        let mut images = vec![usize::MAX; n];
        for (pos, &x) in order.iter().enumerate() {
            if x >= n || images[x] != usize::MAX {
                return Err(Error::InvalidPermutation(format!("{order:?} is not an ordering of 0..{n}")));
            }
            images[x] = pos;
        }
        Ok(Permutation(images))
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    #[inline]
    pub fn apply(&self, i: usize) -> usize {
        self.0[i]
    }

    pub fn images(&self) -> &[usize] {
        &self.0
    }

    pub fn one_based(&self) -> Vec<usize> {
        self.0.iter().map(|x| x + 1).collect()
    }

    pub fn inverse(&self) -> Self {
        let mut inv = vec![0; self.0.len()];
        for (i, &x) in self.0.iter().enumerate() {
            inv[x] = i;
        }
        Permutation(inv)
    }

    /// `self` followed by `other`.
    pub fn then(&self, other: &Permutation) -> Self {
        Permutation(self.0.iter().map(|&x| other.0[x]).collect())
    }
}

impl Serialize for Permutation {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.one_based().serialize(s)
    }
}

impl<'de> Deserialize<'de> for Permutation {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let v = Vec::<usize>::deserialize(d)?;
        Permutation::from_one_based(&v).map_err(serde::de::Error::custom)
    }
}

/// A member of `A'(R,S)`-style grids: cells are 0, 1 or empty, measured
/// against a fixed pair of margins.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct PartialMatrix {
    rows: usize,
    cols: usize,
    cells: Vec<Entry>,
    margins: MarginSpec,
}

impl PartialMatrix {
    /// The all-empty grid for the given margins.
    pub fn empty(margins: MarginSpec) -> Self {
        let (rows, cols) = (margins.rows(), margins.cols());
        PartialMatrix { rows, cols, cells: vec![Entry::Empty; rows * cols], margins }
    }

    /// Row-major entries; the length must match the margins.
    pub fn from_entries(margins: MarginSpec, cells: Vec<Entry>) -> Result<Self> {
        let (rows, cols) = (margins.rows(), margins.cols());
        if cells.len() != rows * cols {
            return Err(Error::DimensionMismatch(format!(
                "{} cells given for a {rows}x{cols} grid",
                cells.len()
            )));
        }
        Ok(PartialMatrix { rows, cols, cells, margins })
    }

    /// A complete matrix from 0/1 rows; margins are read off the rows.
    pub fn from_bits(rows: &[Vec<u8>]) -> Result<Self> {
        let m = rows.len();
        let n = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != n) {
            return Err(Error::DimensionMismatch("ragged rows".into()));
        }
        if rows.iter().flatten().any(|&b| b > 1) {
            return Err(Error::DimensionMismatch("entries must be 0 or 1".into()));
        }
        let row_sums = rows.iter().map(|r| r.iter().map(|&b| b as usize).sum()).collect();
        let col_sums = (0..n).map(|c| rows.iter().map(|r| r[c] as usize).sum()).collect();
        let margins = MarginSpec::new(row_sums, col_sums)?;
        let cells = rows.iter().flatten().map(|&b| Entry::from_bit(b == 1)).collect();
        let _ = m;
        Self::from_entries(margins, cells)
    }

    pub fn from_triples(margins: MarginSpec, triples: &[CellTriple]) -> Result<Self> {
        let mut out = PartialMatrix::empty(margins);
        for t in triples {
            out.check(t.row, t.col)?;
            out.set(t.row, t.col, Entry::from_bit(t.value));
        }
        Ok(out)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn margins(&self) -> &MarginSpec {
        &self.margins
    }

    fn check(&self, i: usize, j: usize) -> Result<()> {
        if i == 0 || j == 0 || i > self.rows || j > self.cols {
            Err(Error::OutOfBounds { row: i, col: j })
        } else {
            Ok(())
        }
    }

    /// Entry at 1-based `(i, j)`. Panics when out of range.
    pub fn get(&self, i: usize, j: usize) -> Entry {
        assert!(i >= 1 && j >= 1 && i <= self.rows && j <= self.cols, "cell ({i}, {j}) out of range");
        self.cells[(i - 1) * self.cols + (j - 1)]
    }

    /// Sets the entry at 1-based `(i, j)`. Panics when out of range.
    pub fn set(&mut self, i: usize, j: usize, e: Entry) {
        assert!(i >= 1 && j >= 1 && i <= self.rows && j <= self.cols, "cell ({i}, {j}) out of range");
        self.cells[(i - 1) * self.cols + (j - 1)] = e;
    }

    #[inline]
    pub(crate) fn at(&self, r: usize, c: usize) -> Entry {
        self.cells[r * self.cols + c]
    }

    #[inline]
    pub(crate) fn put(&mut self, r: usize, c: usize, e: Entry) {
        self.cells[r * self.cols + c] = e;
    }

    pub(crate) fn entries(&self) -> &[Entry] {
        &self.cells
    }

    /// Number of filled cells, `|M|`.
    pub fn size(&self) -> usize {
        self.cells.iter().filter(|e| e.is_filled()).count()
    }

    /// Filled cells as `(i, j, value)` triples in row-major order.
    pub fn triples(&self) -> Vec<CellTriple> {
        let mut out = Vec::new();
        for r in 0..self.rows {
            for c in 0..self.cols {
                if let Some(b) = self.at(r, c).bit() {
                    out.push(CellTriple::new(r + 1, c + 1, b));
                }
            }
        }
        out
    }

    fn line_counts(&self) -> (Vec<[usize; 2]>, Vec<[usize; 2]>) {
        let mut rows = vec![[0usize; 2]; self.rows];
        let mut cols = vec![[0usize; 2]; self.cols];
        for r in 0..self.rows {
            for c in 0..self.cols {
                if let Some(b) = self.at(r, c).bit() {
                    rows[r][b as usize] += 1;
                    cols[c][b as usize] += 1;
                }
            }
        }
        (rows, cols)
    }

    /// True iff every row and column respects the four counting bounds:
    /// at most `r_i` ones and `cols - r_i` zeros per row, likewise per column.
    pub fn validate(&self) -> bool {
        let (rc, cc) = self.line_counts();
        let rs = self.margins.row_sums();
        let cs = self.margins.col_sums();
        rc.iter().zip(rs).all(|(k, &r)| k[1] <= r && k[0] <= self.cols - r)
            && cc.iter().zip(cs).all(|(k, &s)| k[1] <= s && k[0] <= self.rows - s)
    }

    /// True iff no cell is empty and every line meets its margin exactly.
    pub fn is_complete(&self) -> bool {
        if self.cells.iter().any(|e| !e.is_filled()) {
            return false;
        }
        let (rc, cc) = self.line_counts();
        rc.iter().zip(self.margins.row_sums()).all(|(k, &r)| k[1] == r)
            && cc.iter().zip(self.margins.col_sums()).all(|(k, &s)| k[1] == s)
    }

    fn same_shape(&self, other: &PartialMatrix) -> Result<()> {
        if self.margins != other.margins {
            return Err(Error::DimensionMismatch("matrices have different margins".into()));
        }
        Ok(())
    }

    /// Set inclusion of the triple views: every filled cell of `self` agrees with `other`.
    pub fn is_subset_of(&self, other: &PartialMatrix) -> Result<bool> {
        self.same_shape(other)?;
        Ok(self
            .cells
            .iter()
            .zip(&other.cells)
            .all(|(a, b)| !a.is_filled() || a == b))
    }

    /// Cells filled in `self` but not in `d`, keeping `self`'s values.
    pub fn minus(&self, d: &PartialMatrix) -> Result<PartialMatrix> {
        self.same_shape(d)?;
        let cells = self
            .cells
            .iter()
            .zip(&d.cells)
            .map(|(&a, b)| if b.is_filled() { Entry::Empty } else { a })
            .collect();
        Ok(PartialMatrix { cells, ..self.clone() })
    }

    /// Moves cell `(i, j)` to `(row_perm(i), col_perm(j))`.
    pub fn permute(&self, row_perm: &Permutation, col_perm: &Permutation) -> Result<PartialMatrix> {
        if row_perm.len() != self.rows || col_perm.len() != self.cols {
            return Err(Error::InvalidPermutation(format!(
                "permutation lengths {}x{} do not match a {}x{} grid",
                row_perm.len(),
                col_perm.len(),
                self.rows,
                self.cols
            )));
        }
        let mut row_sums = vec![0; self.rows];
        let mut col_sums = vec![0; self.cols];
        for (i, &r) in self.margins.row_sums().iter().enumerate() {
            row_sums[row_perm.apply(i)] = r;
        }
        for (j, &s) in self.margins.col_sums().iter().enumerate() {
            col_sums[col_perm.apply(j)] = s;
        }
        let mut out = PartialMatrix::empty(MarginSpec { row_sums, col_sums });
        for r in 0..self.rows {
            for c in 0..self.cols {
                out.put(row_perm.apply(r), col_perm.apply(c), self.at(r, c));
            }
        }
        Ok(out)
    }

    pub fn transpose(&self) -> PartialMatrix {
        let mut out = PartialMatrix::empty(self.margins.transposed());
        for r in 0..self.rows {
            for c in 0..self.cols {
                out.put(c, r, self.at(r, c));
            }
        }
        out
    }

    /// Swaps every 0 and 1 (and the margins accordingly).
    pub fn complement(&self) -> PartialMatrix {
        PartialMatrix {
            rows: self.rows,
            cols: self.cols,
            cells: self.cells.iter().map(|e| e.flipped()).collect(),
            margins: self.margins.complemented(),
        }
    }

    pub(crate) fn ensure_maskable(&self) -> Result<()> {
        if self.rows * self.cols > MAX_CELLS {
            Err(Error::GuardExceeded(format!(
                "{}x{} grid exceeds the {MAX_CELLS}-cell bitset",
                self.rows, self.cols
            )))
        } else {
            Ok(())
        }
    }

    /// Bitset of filled cells (requires at most 128 cells).
    pub fn filled_set(&self) -> Result<CellSet> {
        self.ensure_maskable()?;
        Ok(self
            .cells
            .iter()
            .enumerate()
            .filter(|(_, e)| e.is_filled())
            .map(|(i, _)| i)
            .collect())
    }

    /// Bitset of cells holding `value`.
    pub fn value_set(&self, value: bool) -> Result<CellSet> {
        self.ensure_maskable()?;
        Ok(self
            .cells
            .iter()
            .enumerate()
            .filter(|(_, e)| e.bit() == Some(value))
            .map(|(i, _)| i)
            .collect())
    }

    /// The partial matrix keeping only the cells of `set`.
    pub fn restrict(&self, set: CellSet) -> PartialMatrix {
        let cells = self
            .cells
            .iter()
            .enumerate()
            .map(|(i, &e)| if i < MAX_CELLS && set.contains(i) { e } else { Entry::Empty })
            .collect();
        PartialMatrix { cells, ..self.clone() }
    }

    /// Canonical text form: header line then one line per row, each newline-terminated.
    pub fn to_text(&self) -> String {
        let mut s = self.margins.header();
        s.push('\n');
        for r in 0..self.rows {
            s.extend((0..self.cols).map(|c| self.at(r, c).to_char()));
            s.push('\n');
        }
        s
    }

    /// Parses the text form. Without a header, the grid must be complete and
    /// the margins are read from it.
    pub fn parse_text(text: &str) -> Result<PartialMatrix> {
        Self::parse_impl(text, None)
    }

    /// Parses the text form against known margins. A header, if present,
    /// must agree with them.
    pub fn parse_text_with_margins(text: &str, margins: &MarginSpec) -> Result<PartialMatrix> {
        Self::parse_impl(text, Some(margins))
    }

    fn parse_impl(text: &str, known: Option<&MarginSpec>) -> Result<PartialMatrix> {
        let mut header = None;
        let mut grid: Vec<(usize, Vec<Entry>)> = Vec::new();
        for (k, raw) in text.lines().enumerate() {
            let lineno = k + 1;
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            if line.starts_with("R=") || line.starts_with("S=") {
                if header.is_some() || !grid.is_empty() {
                    return Err(Error::Parse { line: lineno, msg: "unexpected header line".into() });
                }
                header = Some(MarginSpec::parse_header(line, lineno)?);
                continue;
            }
            let row = line
                .chars()
                .map(|ch| {
                    Entry::from_char(ch).ok_or_else(|| Error::Parse {
                        line: lineno,
                        msg: format!("unexpected character {ch:?}"),
                    })
                })
                .collect::<Result<Vec<_>>>()?;
            if let Some((_, first)) = grid.first() {
                if first.len() != row.len() {
                    return Err(Error::Parse { line: lineno, msg: "ragged row".into() });
                }
            }
            grid.push((lineno, row));
        }
        let margins = match (header, known) {
            (Some(h), Some(k)) if &h != k => {
                return Err(Error::Parse { line: 1, msg: "margin header does not match the expected margins".into() })
            }
            (Some(h), _) => h,
            (None, Some(k)) => k.clone(),
            (None, None) => {
                if grid.iter().flat_map(|(_, r)| r).any(|e| !e.is_filled()) {
                    return Err(Error::Parse { line: 1, msg: "missing margin header for a partial matrix".into() });
                }
                let bits: Vec<Vec<u8>> =
                    grid.iter().map(|(_, r)| r.iter().map(|e| (*e == Entry::One) as u8).collect()).collect();
                return PartialMatrix::from_bits(&bits);
            }
        };
        if grid.len() != margins.rows() || grid.first().map_or(0, |(_, r)| r.len()) != margins.cols() {
            let shape = (grid.len(), grid.first().map_or(0, |(_, r)| r.len()));
            if !(shape.0 == 0 && margins.rows() == 0) {
                return Err(Error::Parse {
                    line: grid.last().map_or(1, |(l, _)| *l),
                    msg: format!(
                        "grid is {}x{} but the margins describe {}x{}",
                        shape.0,
                        shape.1,
                        margins.rows(),
                        margins.cols()
                    ),
                });
            }
        }
        let cells = grid.into_iter().flat_map(|(_, r)| r).collect();
        PartialMatrix::from_entries(margins, cells)
    }

    pub fn to_json_value(&self) -> serde_json::Value {
        serde_json::to_value(JsonMatrix::from(self)).expect("plain data")
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&JsonMatrix::from(self)).expect("plain data")
    }

    pub fn from_json(s: &str) -> Result<PartialMatrix> {
        let j: JsonMatrix = serde_json::from_str(s).map_err(|e| Error::Json(e.to_string()))?;
        j.try_into()
    }
}

/// JSON representation: empty cells omitted from `triples`.
#[derive(Serialize, Deserialize, Debug, Clone)]
#[serde(rename_all = "camelCase")]
pub struct JsonMatrix {
    pub rows: usize,
    pub cols: usize,
    pub row_sums: Vec<usize>,
    pub col_sums: Vec<usize>,
    pub triples: Vec<CellTriple>,
}

impl From<&PartialMatrix> for JsonMatrix {
    fn from(m: &PartialMatrix) -> Self {
        JsonMatrix {
            rows: m.rows,
            cols: m.cols,
            row_sums: m.margins.row_sums.clone(),
            col_sums: m.margins.col_sums.clone(),
            triples: m.triples(),
        }
    }
}

impl TryFrom<JsonMatrix> for PartialMatrix {
    type Error = Error;

    fn try_from(j: JsonMatrix) -> Result<Self> {
        if j.row_sums.len() != j.rows || j.col_sums.len() != j.cols {
            return Err(Error::DimensionMismatch("sum vectors do not match rows/cols".into()));
        }
        let margins = MarginSpec::new(j.row_sums, j.col_sums)?;
        PartialMatrix::from_triples(margins, &j.triples)
    }
}

impl Serialize for PartialMatrix {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        JsonMatrix::from(self).serialize(s)
    }
}

impl<'de> Deserialize<'de> for PartialMatrix {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        JsonMatrix::deserialize(d)?.try_into().map_err(serde::de::Error::custom)
    }
}

impl FromStr for PartialMatrix {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        PartialMatrix::parse_text(s)
    }
}

impl fmt::Display for PartialMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

impl fmt::Debug for PartialMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "PartialMatrix(\n{})", self.to_text())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    const FIG1: &str = include_str!("../fixtures/fig1.txt");
    const FIG1_CS: &str = include_str!("../fixtures/fig1_cs.txt");

    fn two_by_two() -> MarginSpec {
        MarginSpec::uniform(2, 1).unwrap()
    }

    #[test]
    fn validate_examples() {
        let fig1 = PartialMatrix::parse_text(FIG1).unwrap();
        assert!(fig1.validate());
        assert!(PartialMatrix::empty(MarginSpec::uniform(4, 2).unwrap()).validate());
        let mut bad = PartialMatrix::empty(two_by_two());
        bad.set(1, 1, Entry::One);
        bad.set(1, 2, Entry::One);
        assert!(!bad.validate());
    }

    #[test]
    fn completeness_examples() {
        assert!(PartialMatrix::parse_text(FIG1).unwrap().is_complete());
        assert!(!PartialMatrix::empty(two_by_two()).is_complete());
        let id = PartialMatrix::from_bits(&[vec![1, 0], vec![0, 1]]).unwrap();
        assert!(id.is_complete());
        assert_eq!(id.margins(), &two_by_two());
    }

    #[test]
    fn subset_examples() {
        let m = PartialMatrix::parse_text(FIG1).unwrap();
        let cs = PartialMatrix::parse_text_with_margins(FIG1_CS, m.margins()).unwrap();
        assert_eq!(cs.size(), 14);
        assert!(cs.is_subset_of(&m).unwrap());
        assert!(m.is_subset_of(&m).unwrap());
        let id = PartialMatrix::from_bits(&[vec![1, 0], vec![0, 1]]).unwrap();
        let single = PartialMatrix::from_triples(two_by_two(), &[CellTriple::new(1, 1, false)]).unwrap();
        assert!(!single.is_subset_of(&id).unwrap());
        let other = PartialMatrix::empty(MarginSpec::uniform(3, 1).unwrap());
        assert!(single.is_subset_of(&other).is_err());
    }

    #[test]
    fn permutation_examples() {
        let m = PartialMatrix::parse_text(FIG1).unwrap();
        let id = Permutation::identity(6);
        assert_eq!(m.permute(&id, &id).unwrap(), m);
        let swap = Permutation::new(vec![1, 0, 2, 3, 4, 5]).unwrap();
        let twice = m.permute(&swap, &id).unwrap().permute(&swap, &id).unwrap();
        assert_eq!(twice, m);
        assert!(Permutation::new(vec![0, 0, 1]).is_err());
        assert!(m.permute(&Permutation::identity(5), &id).is_err());
    }

    #[test]
    fn permute_moves_cells_and_margins() {
        let m = PartialMatrix::from_bits(&[vec![1, 1, 0], vec![0, 0, 1]]).unwrap();
        let rp = Permutation::new(vec![1, 0]).unwrap();
        let cp = Permutation::new(vec![2, 0, 1]).unwrap();
        let p = m.permute(&rp, &cp).unwrap();
        for i in 1..=2 {
            for j in 1..=3 {
                assert_eq!(p.get(rp.apply(i - 1) + 1, cp.apply(j - 1) + 1), m.get(i, j));
            }
        }
        assert_eq!(p.margins().row_sums(), &[1, 2]);
        assert_eq!(p.margins().col_sums(), &[1, 1, 1]);
        assert!(p.is_complete());
    }

    #[test]
    fn parse_examples() {
        let m = PartialMatrix::parse_text("R=1,1 S=1,1\n10\n01\n").unwrap();
        assert!(m.is_complete());
        assert_eq!(m.rows(), 2);
        let p = PartialMatrix::parse_text_with_margins("1.\n.0", &two_by_two()).unwrap();
        assert_eq!(p.size(), 2);
        assert_eq!(p.get(1, 1), Entry::One);
        assert_eq!(p.get(2, 2), Entry::Zero);
        let fig1 = PartialMatrix::parse_text(FIG1).unwrap();
        assert_eq!(fig1.to_text(), FIG1);
    }

    #[test]
    fn parse_errors() {
        assert!(matches!(PartialMatrix::parse_text("R=1,1 S=1,1\n1x\n01"), Err(Error::Parse { line: 2, .. })));
        assert!(matches!(PartialMatrix::parse_text("R=1,1 S=1,1\n10\n0"), Err(Error::Parse { .. })));
        assert!(matches!(
            PartialMatrix::parse_text_with_margins("R=2,0 S=1,1\n11\n00", &two_by_two()),
            Err(Error::Parse { .. })
        ));
        assert!(PartialMatrix::parse_text("1.\n.0").is_err());
        assert!(PartialMatrix::parse_text("R=1,1 S=1,1\n10\n01\n10").is_err());
        assert!(PartialMatrix::parse_text("R=3 S=1,1,1,1\n1110").is_err());
    }

    #[test]
    fn json_shape() {
        let p = PartialMatrix::parse_text_with_margins("1.\n.0", &two_by_two()).unwrap();
        let v: serde_json::Value = serde_json::from_str(&p.to_json()).unwrap();
        assert_eq!(v["rows"], 2);
        assert_eq!(v["rowSums"], serde_json::json!([1, 1]));
        assert_eq!(v["triples"], serde_json::json!([[1, 1, 1], [2, 2, 0]]));
        assert_eq!(PartialMatrix::from_json(&p.to_json()).unwrap(), p);
        assert!(PartialMatrix::from_json(r#"{"rows":2,"cols":2,"rowSums":[1,1],"colSums":[1,1],"triples":[[3,1,1]]}"#).is_err());
    }

    #[test]
    fn transpose_and_complement() {
        let m = PartialMatrix::from_bits(&[vec![1, 1, 0], vec![0, 0, 1]]).unwrap();
        let t = m.transpose();
        assert_eq!(t.rows(), 3);
        assert_eq!(t.get(3, 2), Entry::One);
        assert!(t.is_complete());
        let c = m.complement();
        assert!(c.is_complete());
        assert_eq!(c.margins().row_sums(), &[1, 2]);
        assert_eq!(c.complement(), m);
    }

    fn arb_partial() -> impl Strategy<Value = PartialMatrix> {
        (1usize..6, 1usize..6).prop_flat_map(|(r, c)| {
            (proptest::collection::vec(0u8..3, r * c), Just((r, c)))
        })
        .prop_map(|(v, (r, c))| {
            // margins taken from a "fill empties with zero" view keep the grid valid
            let bits: Vec<Vec<u8>> = (0..r).map(|i| (0..c).map(|j| (v[i * c + j] == 1) as u8).collect()).collect();
            let margins = PartialMatrix::from_bits(&bits).unwrap().margins().clone();
            let cells = v.iter().map(|&x| [Entry::Zero, Entry::One, Entry::Empty][x as usize]).collect();
            PartialMatrix::from_entries(margins, cells).unwrap()
        })
    }

    proptest! {
        #[test]
        fn text_and_json_round_trip(m in arb_partial()) {
            prop_assert_eq!(PartialMatrix::parse_text(&m.to_text()).unwrap(), m.clone());
            prop_assert_eq!(PartialMatrix::from_json(&m.to_json()).unwrap(), m);
        }

        #[test]
        fn permute_preserves_size_and_validity(m in arb_partial(), seed in any::<u64>()) {
            use rand::seq::SliceRandom;
            use rand::SeedableRng;
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
            let mut rp: Vec<usize> = (0..m.rows()).collect();
            let mut cp: Vec<usize> = (0..m.cols()).collect();
            rp.shuffle(&mut rng);
            cp.shuffle(&mut rng);
            let (rp, cp) = (Permutation::new(rp).unwrap(), Permutation::new(cp).unwrap());
            let p = m.permute(&rp, &cp).unwrap();
            prop_assert_eq!(p.size(), m.size());
            prop_assert_eq!(p.validate(), m.validate());
            prop_assert_eq!(p.is_complete(), m.is_complete());
            prop_assert_eq!(p.permute(&rp.inverse(), &cp.inverse()).unwrap(), m);
        }
    }
}
