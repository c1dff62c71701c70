//! South-East walks, their corners and blocks, and walk certificates.
//!
//! A walk on an `rows x cols` grid is stored as its depth sequence: `a_j` is
//! the number of rows above the walk in column `j`, nondecreasing in `j`.
//! Cell `(i, j)` is above the walk iff `i <= a_j`.
//!
//! Given row and column permutations and a walk, the induced set of a complete
//! matrix `M` is every 0 below the walk plus every 1 above it (in permuted
//! coordinates). Induced sets are exactly the sets that leave only 1s below
//! and only 0s above, so every induced set is defining and every defining set
//! contains one.
//!
//! Walk points use the plane embedding with the top-left corner at the
//! origin: `(x, y) = (column offset, -row offset)`, East is `(1, 0)` and South
//! is `(0, -1)`.

use std::collections::{HashMap, HashSet};
use std::ops::RangeInclusive;

use serde::{Deserialize, Serialize};

use crate::cellset::CellSet;
use crate::error::{Error, Result};
use crate::matrix::{Entry, PartialMatrix, Permutation};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Step {
    East,
    South,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Walk {
    rows: usize,
    depth: Vec<usize>,
}

impl Walk {
    pub fn new(rows: usize, depth: Vec<usize>) -> Result<Self> {
        if depth.windows(2).any(|w| w[0] > w[1]) {
            return Err(Error::InvalidWalk(format!("depths {depth:?} are not nondecreasing")));
        }
        if let Some(&d) = depth.iter().find(|&&d| d > rows) {
            return Err(Error::InvalidWalk(format!("depth {d} exceeds row count {rows}")));
        }
        Ok(Walk { rows, depth })
    }

    /// Everything below: the walk runs East along the top edge first.
    pub fn all_below(rows: usize, cols: usize) -> Self {
        Walk { rows, depth: vec![0; cols] }
    }

    /// Everything above: the walk runs South down the left edge first.
    pub fn all_above(rows: usize, cols: usize) -> Self {
        Walk { rows, depth: vec![rows; cols] }
    }

    pub fn from_steps(steps: &[Step]) -> Self {
        let mut rows = 0;
        let mut depth = Vec::new();
        for s in steps {
            match s {
                Step::East => depth.push(rows),
                Step::South => rows += 1,
            }
        }
        Walk { rows, depth }
    }

    /// Parses a point list `w_0 = (0,0), …, (cols, -rows)` of unit East/South steps.
    pub fn from_points(points: &[(i64, i64)]) -> Result<Self> {
        if points.first() != Some(&(0, 0)) {
            return Err(Error::InvalidWalk("a walk starts at (0, 0)".into()));
        }
        let mut steps = Vec::with_capacity(points.len());
        for w in points.windows(2) {
            let (dx, dy) = (w[1].0 - w[0].0, w[1].1 - w[0].1);
            steps.push(match (dx, dy) {
                (1, 0) => Step::East,
                (0, -1) => Step::South,
                _ => return Err(Error::InvalidWalk(format!("{:?} -> {:?} is not a unit East or South step", w[0], w[1]))),
            });
        }
        Ok(Walk::from_steps(&steps))
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.depth.len()
    }

    pub fn depth(&self) -> &[usize] {
        &self.depth
    }

    /// 1-based: true iff cell `(i, j)` lies above the walk.
    pub fn cell_above(&self, i: usize, j: usize) -> bool {
        i <= self.depth[j - 1]
    }

    /// Steps in order; East steps are taken as early as possible within each depth.
    pub fn steps(&self) -> Vec<Step> {
        let mut out = Vec::with_capacity(self.rows + self.cols());
        let mut r = 0;
        for &d in &self.depth {
            while r < d {
                out.push(Step::South);
                r += 1;
            }
            out.push(Step::East);
        }
        while r < self.rows {
            out.push(Step::South);
            r += 1;
        }
        out
    }

    pub fn points(&self) -> Vec<(i64, i64)> {
        let mut p = (0i64, 0i64);
        let mut out = vec![p];
        for s in self.steps() {
            match s {
                Step::East => p.0 += 1,
                Step::South => p.1 -= 1,
            }
            out.push(p);
        }
        out
    }

    pub fn starts_east(&self) -> bool {
        self.depth.first() == Some(&0)
    }

    /// The mirror image across the main diagonal, a walk on the transposed grid.
    /// Above and below swap sides.
    pub fn transposed(&self) -> Walk {
        let depth = (1..=self.rows).map(|i| self.depth.iter().filter(|&&a| a < i).count()).collect();
        Walk { rows: self.cols(), depth }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&WalkJson { depth: self.depth.clone() }).expect("plain data")
    }

    pub fn from_json(rows: usize, s: &str) -> Result<Self> {
        let j: WalkJson = serde_json::from_str(s).map_err(|e| Error::Json(e.to_string()))?;
        Walk::new(rows, j.depth)
    }
}

#[derive(Serialize, Deserialize)]
struct WalkJson {
    depth: Vec<usize>,
}

/// Corners, runs and blocks of a walk that starts with an East step.
///
/// Runs alternate East `t_1`, South `s_1`, East `t_2`, …; `L = s.len()` and
/// `L' = t.len()` with `L' ∈ {L, L+1}`. Block `L_{i,j}` is row-run `i` by
/// column-run `j`; it lies below the walk iff `i >= j`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BlockStructure {
    corners: Vec<(i64, i64)>,
    row_runs: Vec<usize>,
    col_runs: Vec<usize>,
}

impl BlockStructure {
    /// Builds the structure from run lengths; all runs must be positive.
    pub fn from_runs(row_runs: Vec<usize>, col_runs: Vec<usize>) -> Result<Self> {
        if row_runs.contains(&0) || col_runs.contains(&0) {
            return Err(Error::InvalidWalk("runs must be positive".into()));
        }
        let (l, lp) = (row_runs.len(), col_runs.len());
        if lp != l && lp != l + 1 || lp == 0 {
            return Err(Error::InvalidWalk(format!("{l} row runs and {lp} column runs do not alternate from East")));
        }
        let mut corners = vec![(0i64, 0i64)];
        let mut p = (0i64, 0i64);
        for k in 0..lp {
            p.0 += col_runs[k] as i64;
            corners.push(p);
            if k < l {
                p.1 -= row_runs[k] as i64;
                corners.push(p);
            }
        }
        Ok(BlockStructure { corners, row_runs, col_runs })
    }

    pub fn corners(&self) -> &[(i64, i64)] {
        &self.corners
    }

    /// `s_1, …, s_L`.
    pub fn row_runs(&self) -> &[usize] {
        &self.row_runs
    }

    /// `t_1, …, t_L'`.
    pub fn col_runs(&self) -> &[usize] {
        &self.col_runs
    }

    /// `L`.
    pub fn l(&self) -> usize {
        self.row_runs.len()
    }

    /// `L'`.
    pub fn l_prime(&self) -> usize {
        self.col_runs.len()
    }

    pub fn rows(&self) -> usize {
        self.row_runs.iter().sum()
    }

    pub fn cols(&self) -> usize {
        self.col_runs.iter().sum()
    }

    /// 1-based row and column ranges of block `L_{i,j}`.
    pub fn block(&self, i: usize, j: usize) -> (RangeInclusive<usize>, RangeInclusive<usize>) {
        let r0: usize = self.row_runs[..i - 1].iter().sum();
        let c0: usize = self.col_runs[..j - 1].iter().sum();
        (r0 + 1..=r0 + self.row_runs[i - 1], c0 + 1..=c0 + self.col_runs[j - 1])
    }

    pub fn block_size(&self, i: usize, j: usize) -> usize {
        self.row_runs[i - 1] * self.col_runs[j - 1]
    }

    pub fn block_below(&self, i: usize, j: usize) -> bool {
        i >= j
    }

    /// The walk these runs describe.
    pub fn walk(&self) -> Walk {
        let mut steps = Vec::new();
        for k in 0..self.l_prime() {
            steps.extend(std::iter::repeat(Step::East).take(self.col_runs[k]));
            if k < self.l() {
                steps.extend(std::iter::repeat(Step::South).take(self.row_runs[k]));
            }
        }
        Walk::from_steps(&steps)
    }
}

/// Corners and blocks of a walk whose first step is East.
pub fn block_structure(w: &Walk) -> Result<BlockStructure> {
    if w.cols() == 0 || w.rows() == 0 {
        return Err(Error::InvalidWalk("walk on an empty grid".into()));
    }
    if !w.starts_east() {
        return Err(Error::InvalidWalk("walk starts South; transpose and complement first".into()));
    }
    let mut runs: Vec<(Step, usize)> = Vec::new();
    for s in w.steps() {
        match runs.last_mut() {
            Some((t, n)) if *t == s => *n += 1,
            _ => runs.push((s, 1)),
        }
    }
    let col_runs = runs.iter().filter(|r| r.0 == Step::East).map(|r| r.1).collect();
    let row_runs = runs.iter().filter(|r| r.0 == Step::South).map(|r| r.1).collect();
    BlockStructure::from_runs(row_runs, col_runs)
}

/// The walk `W'` with block `L_{i,j}` below iff `i > j`.
pub fn complement_walk(bs: &BlockStructure) -> Walk {
    let rows = bs.rows();
    let mut depth = Vec::with_capacity(bs.cols());
    let mut acc = 0;
    for j in 0..bs.l_prime() {
        if j < bs.l() {
            acc += bs.row_runs[j];
        }
        depth.extend(std::iter::repeat(acc.min(rows)).take(bs.col_runs[j]));
    }
    Walk { rows, depth }
}

/// Row and column rearrangement plus a walk.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct WalkCertificate {
    pub row_perm: Permutation,
    pub col_perm: Permutation,
    #[serde(with = "walk_depth")]
    pub walk: Walk,
}

mod walk_depth {
    use super::*;

    pub fn serialize<S: serde::Serializer>(w: &Walk, s: S) -> std::result::Result<S::Ok, S::Error> {
        WalkJson { depth: w.depth.clone() }.serialize(s)
    }

    // rows are fixed up from the row permutation after parsing
    pub fn deserialize<'de, D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Walk, D::Error> {
        let j = WalkJson::deserialize(d)?;
        let rows = j.depth.iter().copied().max().unwrap_or(0);
        Ok(Walk { rows, depth: j.depth })
    }
}

impl WalkCertificate {
    pub fn new(row_perm: Permutation, col_perm: Permutation, walk: Walk) -> Result<Self> {
        if walk.rows() != row_perm.len() || walk.cols() != col_perm.len() {
            return Err(Error::InvalidWalk(format!(
                "walk is {}x{} but permutations are {}x{}",
                walk.rows(),
                walk.cols(),
                row_perm.len(),
                col_perm.len()
            )));
        }
        Ok(WalkCertificate { row_perm, col_perm, walk })
    }

    pub fn identity(walk: Walk) -> Self {
        WalkCertificate {
            row_perm: Permutation::identity(walk.rows()),
            col_perm: Permutation::identity(walk.cols()),
            walk,
        }
    }

    pub fn induced_set(&self, m: &PartialMatrix) -> Result<PartialMatrix> {
        induced_defining_set(m, &self.row_perm, &self.col_perm, &self.walk)
    }

    pub fn verify_handier(&self, m: &PartialMatrix) -> Result<bool> {
        verify_handier(m, &self.row_perm, &self.col_perm, &self.walk)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("plain data")
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let c: WalkCertificate = serde_json::from_str(s).map_err(|e| Error::Json(e.to_string()))?;
        let walk = Walk::new(c.row_perm.len(), c.walk.depth)?;
        WalkCertificate::new(c.row_perm, c.col_perm, walk)
    }
}

fn check_shape(m: &PartialMatrix, rp: &Permutation, cp: &Permutation, w: &Walk) -> Result<()> {
    if !m.is_complete() {
        return Err(Error::NotComplete);
    }
    if rp.len() != m.rows() || cp.len() != m.cols() {
        return Err(Error::InvalidPermutation("permutation lengths do not match the matrix".into()));
    }
    if w.rows() != m.rows() || w.cols() != m.cols() {
        return Err(Error::InvalidWalk(format!(
            "walk is {}x{} but the matrix is {}x{}",
            w.rows(),
            w.cols(),
            m.rows(),
            m.cols()
        )));
    }
    Ok(())
}

/// Zeros below plus ones above the walk, in the coordinates of `m`.
pub fn induced_defining_set(m: &PartialMatrix, rp: &Permutation, cp: &Permutation, w: &Walk) -> Result<PartialMatrix> {
    check_shape(m, rp, cp, w)?;
    let mut out = PartialMatrix::empty(m.margins().clone());
    for r in 0..m.rows() {
        for c in 0..m.cols() {
            let above = rp.apply(r) < w.depth[cp.apply(c)];
            let e = m.at(r, c);
            if (e == Entry::One) == above {
                out.put(r, c, e);
            }
        }
    }
    Ok(out)
}

/// A permuted matrix and walk brought to East-first form. When `flipped`, the
/// matrix is the transposed complement and the walk is the transposed walk,
/// so cell `(r, c)` of the result is cell `(c, r)` of the input.
pub(crate) struct EastForm {
    pub matrix: PartialMatrix,
    pub walk: Walk,
    pub flipped: bool,
}

pub(crate) fn east_form(p: &PartialMatrix, w: &Walk) -> EastForm {
    if w.starts_east() {
        EastForm { matrix: p.clone(), walk: w.clone(), flipped: false }
    } else {
        EastForm { matrix: p.transpose().complement(), walk: w.transposed(), flipped: true }
    }
}

fn block_is(m: &PartialMatrix, bs: &BlockStructure, i: usize, j: usize, e: Entry) -> bool {
    let (rr, cc) = bs.block(i, j);
    rr.into_iter().all(|r| cc.clone().all(|c| m.get(r, c) == e))
}

fn handier_blocks_hold(m: &PartialMatrix, bs: &BlockStructure) -> bool {
    (1..=bs.l()).all(|i| block_is(m, bs, i, i, Entry::One))
        && (1..bs.l_prime()).all(|i| block_is(m, bs, i, i + 1, Entry::Zero))
}

/// True iff every block `L_{i,i}` is all 1 and every `L_{i,i+1}` is all 0 in
/// the rearranged matrix; then the induced set is a critical set.
pub fn verify_handier(m: &PartialMatrix, rp: &Permutation, cp: &Permutation, w: &Walk) -> Result<bool> {
    check_shape(m, rp, cp, w)?;
    if m.rows() == 0 || m.cols() == 0 {
        return Ok(true);
    }
    let ef = east_form(&m.permute(rp, cp)?, w);
    let bs = block_structure(&ef.walk)?;
    Ok(handier_blocks_hold(&ef.matrix, &bs))
}

/// Row-or-column placement order describing a permutation pair and a walk.
fn certificate_from_moves(rows: usize, cols: usize, moves: &[Move]) -> WalkCertificate {
    let mut rp = vec![0; rows];
    let mut cp = vec![0; cols];
    let mut depth = vec![0; cols];
    let (mut nr, mut nc) = (0, 0);
    for mv in moves {
        match *mv {
            Move::Row(r) => {
                rp[r] = nr;
                nr += 1;
            }
            Move::Col(c) => {
                cp[c] = nc;
                depth[nc] = nr;
                nc += 1;
            }
        }
    }
    WalkCertificate {
        row_perm: Permutation::new(rp).expect("each row placed once"),
        col_perm: Permutation::new(cp).expect("each column placed once"),
        walk: Walk { rows, depth },
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Move {
    Row(usize),
    Col(usize),
}

fn mask_guard(m: &PartialMatrix, max: usize, what: &str) -> Result<()> {
    if m.rows() > max || m.cols() > max {
        return Err(Error::GuardExceeded(format!(
            "{what} is limited to {max}x{max}, got {}x{}",
            m.rows(),
            m.cols()
        )));
    }
    Ok(())
}

/// Per-line bitmasks of the cells that must end up above / below.
struct Requirements {
    rows: usize,
    cols: usize,
    above_in_col: Vec<u32>,
    below_in_col: Vec<u32>,
    above_in_row: Vec<u32>,
    below_in_row: Vec<u32>,
}

impl Requirements {
    fn new(rows: usize, cols: usize, need: impl Fn(usize, usize) -> Option<bool>) -> Self {
        let mut q = Requirements {
            rows,
            cols,
            above_in_col: vec![0; cols],
            below_in_col: vec![0; cols],
            above_in_row: vec![0; rows],
            below_in_row: vec![0; rows],
        };
        for r in 0..rows {
            for c in 0..cols {
                match need(r, c) {
                    Some(true) => {
                        q.above_in_col[c] |= 1 << r;
                        q.above_in_row[r] |= 1 << c;
                    }
                    Some(false) => {
                        q.below_in_col[c] |= 1 << r;
                        q.below_in_row[r] |= 1 << c;
                    }
                    None => {}
                }
            }
        }
        q
    }

    // cell (r, c) is above iff row r is placed before column c
    fn col_ok(&self, c: usize, pr: u32) -> bool {
        self.above_in_col[c] & !pr == 0 && self.below_in_col[c] & pr == 0
    }

    fn row_ok(&self, r: usize, pc: u32) -> bool {
        self.above_in_row[r] & pc == 0 && self.below_in_row[r] & !pc & ((1u32 << self.cols) - 1) == 0
    }

    fn search(&self) -> Option<Vec<Move>> {
        let full_r = (1u32 << self.rows) - 1;
        let full_c = (1u32 << self.cols) - 1;
        let mut dead: HashSet<(u32, u32)> = HashSet::new();
        let mut moves = Vec::with_capacity(self.rows + self.cols);
        fn go(
            q: &Requirements,
            pr: u32,
            pc: u32,
            full: (u32, u32),
            dead: &mut HashSet<(u32, u32)>,
            moves: &mut Vec<Move>,
        ) -> bool {
            if pr == full.0 && pc == full.1 {
                return true;
            }
            if dead.contains(&(pr, pc)) {
                return false;
            }
            for c in 0..q.cols {
                if pc >> c & 1 == 0 && q.col_ok(c, pr) {
                    moves.push(Move::Col(c));
                    if go(q, pr, pc | 1 << c, full, dead, moves) {
                        return true;
                    }
                    moves.pop();
                }
            }
            for r in 0..q.rows {
                if pr >> r & 1 == 0 && q.row_ok(r, pc) {
                    moves.push(Move::Row(r));
                    if go(q, pr | 1 << r, pc, full, dead, moves) {
                        return true;
                    }
                    moves.pop();
                }
            }
            dead.insert((pr, pc));
            false
        }
        go(self, 0, 0, (full_r, full_c), &mut dead, &mut moves).then_some(moves)
    }
}

fn certificate_search(m: &PartialMatrix, d: &PartialMatrix, exact: bool) -> Result<Option<WalkCertificate>> {
    if !m.is_complete() {
        return Err(Error::NotComplete);
    }
    if !d.is_subset_of(m)? {
        return Err(Error::NotSubset);
    }
    mask_guard(m, 16, "walk certificate search")?;
    // Some(true): must be above; Some(false): must be below
    let q = Requirements::new(m.rows(), m.cols(), |r, c| {
        let one = m.at(r, c) == Entry::One;
        if d.at(r, c).is_filled() {
            exact.then_some(one)
        } else {
            Some(!one)
        }
    });
    Ok(q.search().map(|mv| certificate_from_moves(m.rows(), m.cols(), &mv)))
}

/// A certificate whose induced set is contained in `d`, or `None`.
///
/// Such a certificate exists iff `d` is a defining set of `m`; when `d` is
/// critical the induced set is `d` itself. The search runs over
/// (placed rows, placed columns) states, so it is polynomial in the number
/// of states rather than factorial in the order.
pub fn search_walk_certificate(m: &PartialMatrix, d: &PartialMatrix) -> Result<Option<WalkCertificate>> {
    certificate_search(m, d, false)
}

/// A certificate whose induced set is exactly `d`, or `None`.
pub fn search_exact_certificate(m: &PartialMatrix, d: &PartialMatrix) -> Result<Option<WalkCertificate>> {
    certificate_search(m, d, true)
}

fn line_masks(m: &PartialMatrix) -> (Vec<u32>, Vec<u32>) {
    let mut ones = vec![0u32; m.cols()];
    let mut zeros = vec![0u32; m.cols()];
    for r in 0..m.rows() {
        for c in 0..m.cols() {
            if m.at(r, c) == Entry::One {
                ones[c] |= 1 << r;
            } else {
                zeros[c] |= 1 << r;
            }
        }
    }
    (ones, zeros)
}

/// Smallest induced set over all certificates, with a certificate achieving it.
///
/// Minimal defining sets are induced sets, so this is the smallest critical set.
pub fn smallest_certificate(m: &PartialMatrix) -> Result<(usize, WalkCertificate)> {
    if !m.is_complete() {
        return Err(Error::NotComplete);
    }
    mask_guard(m, 8, "scs search")?;
    let (rows, cols) = (m.rows(), m.cols());
    let (ones, zeros) = line_masks(m);
    let full_r = (1u32 << rows) - 1;
    let width = rows + cols;
    // cost of placing column c after the rows in pr: ones above plus zeros below
    let col_cost = |c: usize, pr: u32| (pr & ones[c]).count_ones() + (!pr & full_r & zeros[c]).count_ones();
    let mut best = vec![u16::MAX; 1 << width];
    fn solve(
        pr: u32,
        pc: u32,
        rows: usize,
        cols: usize,
        best: &mut [u16],
        cost: &dyn Fn(usize, u32) -> u32,
    ) -> u16 {
        let key = (pr | pc << rows) as usize;
        if best[key] != u16::MAX {
            return best[key];
        }
        let mut b = u16::MAX - 1;
        if pr.count_ones() as usize == rows && pc.count_ones() as usize == cols {
            b = 0;
        }
        for c in 0..cols {
            if pc >> c & 1 == 0 {
                let v = cost(c, pr) as u16 + solve(pr, pc | 1 << c, rows, cols, best, cost);
                b = b.min(v);
            }
        }
        for r in 0..rows {
            if pr >> r & 1 == 0 {
                b = b.min(solve(pr | 1 << r, pc, rows, cols, best, cost));
            }
        }
        best[key] = b;
        b
    }
    let total = solve(0, 0, rows, cols, &mut best, &col_cost);
    // follow an optimal path
    let (mut pr, mut pc) = (0u32, 0u32);
    let mut moves = Vec::new();
    let mut left = total;
    while (pr.count_ones() as usize) < rows || (pc.count_ones() as usize) < cols {
        let mut next = None;
        for c in 0..cols {
            if pc >> c & 1 == 0 {
                let v = col_cost(c, pr) as u16 + solve(pr, pc | 1 << c, rows, cols, &mut best, &col_cost);
                if v == left {
                    next = Some(Move::Col(c));
                    break;
                }
            }
        }
        if next.is_none() {
            for r in 0..rows {
                if pr >> r & 1 == 0 && solve(pr | 1 << r, pc, rows, cols, &mut best, &col_cost) == left {
                    next = Some(Move::Row(r));
                    break;
                }
            }
        }
        match next.expect("an optimal continuation exists") {
            Move::Col(c) => {
                left -= col_cost(c, pr) as u16;
                pc |= 1 << c;
                moves.push(Move::Col(c));
            }
            Move::Row(r) => {
                pr |= 1 << r;
                moves.push(Move::Row(r));
            }
        }
    }
    Ok((total as usize, certificate_from_moves(rows, cols, &moves)))
}

/// Size of the smallest critical set of `m` (order at most 8).
pub fn scs_of(m: &PartialMatrix) -> Result<usize> {
    smallest_certificate(m).map(|(s, _)| s)
}

/// Search over East-first walks whose blocks satisfy the critical-set
/// pattern: each row run is all 1 on the previous column run, each column
/// run after the first is all 0 on the previous row run.
struct RunSearch<'a> {
    rows: usize,
    cols: usize,
    ones_row: Vec<u32>,
    zeros_col: Vec<u32>,
    ones_col: Vec<u32>,
    memo: HashMap<u64, i32>,
    m: &'a PartialMatrix,
}

const DEAD: i32 = i32::MIN / 2;

impl<'a> RunSearch<'a> {
    fn new(m: &'a PartialMatrix) -> Self {
        let (ones_col, zeros_col) = line_masks(m);
        let mut ones_row = vec![0u32; m.rows()];
        for r in 0..m.rows() {
            for c in 0..m.cols() {
                if m.at(r, c) == Entry::One {
                    ones_row[r] |= 1 << c;
                }
            }
        }
        RunSearch { rows: m.rows(), cols: m.cols(), ones_row, zeros_col, ones_col, memo: HashMap::new(), m }
    }

    fn full_r(&self) -> u32 {
        (1u32 << self.rows) - 1
    }

    fn full_c(&self) -> u32 {
        (1u32 << self.cols) - 1
    }

    fn col_cost(&self, c: usize, pr: u32) -> i32 {
        ((pr & self.ones_col[c]).count_ones() + (!pr & self.full_r() & self.zeros_col[c]).count_ones()) as i32
    }

    /// Columns that may form the next column run after row run `last`.
    fn col_candidates(&self, pc: u32, last: u32) -> u32 {
        (0..self.cols)
            .filter(|&c| pc >> c & 1 == 0 && self.zeros_col[c] & last == last)
            .fold(0, |a, c| a | 1 << c)
    }

    /// Rows that may form the next row run after column run `last`.
    fn row_candidates(&self, pr: u32, last: u32) -> u32 {
        (0..self.rows)
            .filter(|&r| pr >> r & 1 == 0 && self.ones_row[r] & last == last)
            .fold(0, |a, r| a | 1 << r)
    }

    fn key(&self, pr: u32, pc: u32, last: u32, rows_next: bool) -> u64 {
        pr as u64 | (pc as u64) << 16 | (last as u64) << 32 | (rows_next as u64) << 48
    }

    /// Best additional size from this state; `rows_next` says which run comes next.
    fn best(&mut self, pr: u32, pc: u32, last: u32, rows_next: bool) -> i32 {
        if pr == self.full_r() && pc == self.full_c() {
            return 0;
        }
        let key = self.key(pr, pc, last, rows_next);
        if let Some(&v) = self.memo.get(&key) {
            return v;
        }
        let mut b = DEAD;
        if rows_next {
            let cand = self.row_candidates(pr, last);
            let mut sub = cand;
            while sub != 0 {
                let v = self.best(pr | sub, pc, sub, false);
                b = b.max(v);
                sub = (sub - 1) & cand;
            }
        } else {
            let cand = if pc == 0 { self.full_c() } else { self.col_candidates(pc, last) };
            let mut sub = cand;
            while sub != 0 {
                let cost: i32 = (0..self.cols).filter(|&c| sub >> c & 1 == 1).map(|c| self.col_cost(c, pr)).sum();
                let v = cost + self.best(pr, pc | sub, sub, true);
                b = b.max(v);
                sub = (sub - 1) & cand;
            }
        }
        self.memo.insert(key, b);
        b
    }

    fn best_moves(&mut self) -> Option<(usize, Vec<Move>)> {
        let total = self.best(0, 0, 0, false);
        if total < 0 {
            return None;
        }
        let (mut pr, mut pc, mut last, mut rows_next) = (0u32, 0u32, 0u32, false);
        let mut left = total;
        let mut moves = Vec::new();
        while pr != self.full_r() || pc != self.full_c() {
            if rows_next {
                let cand = self.row_candidates(pr, last);
                let mut sub = cand;
                loop {
                    if self.best(pr | sub, pc, sub, false) == left {
                        break;
                    }
                    sub = (sub - 1) & cand;
                }
                moves.extend((0..self.rows).filter(|&r| sub >> r & 1 == 1).map(Move::Row));
                pr |= sub;
                last = sub;
            } else {
                let cand = if pc == 0 { self.full_c() } else { self.col_candidates(pc, last) };
                let mut sub = cand;
                loop {
                    let cost: i32 = (0..self.cols).filter(|&c| sub >> c & 1 == 1).map(|c| self.col_cost(c, pr)).sum();
                    if cost + self.best(pr, pc | sub, sub, true) == left {
                        left -= cost;
                        break;
                    }
                    sub = (sub - 1) & cand;
                }
                moves.extend((0..self.cols).filter(|&c| sub >> c & 1 == 1).map(Move::Col));
                pc |= sub;
                last = sub;
            }
            rows_next = !rows_next;
        }
        Some((total as usize, moves))
    }

    /// Every induced set reachable by a valid run sequence, as cell masks of `self.m`.
    fn all_sets(&self, out: &mut HashSet<u128>) {
        let mut moves = Vec::new();
        self.enumerate(0, 0, 0, false, &mut moves, out);
    }

    fn enumerate(&self, pr: u32, pc: u32, last: u32, rows_next: bool, moves: &mut Vec<Move>, out: &mut HashSet<u128>) {
        if pr == self.full_r() && pc == self.full_c() {
            let cert = certificate_from_moves(self.rows, self.cols, moves);
            let set = cert.induced_set(self.m).expect("shapes match");
            out.insert(set.filled_set().expect("guarded size").0);
            return;
        }
        let (cand, is_rows) = if rows_next {
            (self.row_candidates(pr, last), true)
        } else if pc == 0 {
            (self.full_c(), false)
        } else {
            (self.col_candidates(pc, last), false)
        };
        let mut sub = cand;
        while sub != 0 {
            let n = moves.len();
            if is_rows {
                moves.extend((0..self.rows).filter(|&r| sub >> r & 1 == 1).map(Move::Row));
                self.enumerate(pr | sub, pc, sub, false, moves, out);
            } else {
                moves.extend((0..self.cols).filter(|&c| sub >> c & 1 == 1).map(Move::Col));
                self.enumerate(pr, pc | sub, sub, true, moves, out);
            }
            moves.truncate(n);
            sub = (sub - 1) & cand;
        }
    }
}

/// Maps a certificate on the transposed complement back to the original matrix.
fn unflip(cert: WalkCertificate) -> WalkCertificate {
    WalkCertificate { row_perm: cert.col_perm, col_perm: cert.row_perm, walk: cert.walk.transposed() }
}

/// Largest critical set over all critical-set certificates, with a certificate.
///
/// Both orientations are searched: East-first walks on `m`, and East-first
/// walks on the transposed complement (which are South-first walks on `m`).
pub fn largest_certificate(m: &PartialMatrix) -> Result<(usize, WalkCertificate)> {
    if !m.is_complete() {
        return Err(Error::NotComplete);
    }
    mask_guard(m, 6, "lcs search")?;
    let flipped = m.transpose().complement();
    let a = RunSearch::new(m).best_moves().map(|(s, mv)| (s, certificate_from_moves(m.rows(), m.cols(), &mv)));
    let b = RunSearch::new(&flipped)
        .best_moves()
        .map(|(s, mv)| (s, unflip(certificate_from_moves(flipped.rows(), flipped.cols(), &mv))));
    match (a, b) {
        (Some(x), Some(y)) => Ok(if y.0 > x.0 { y } else { x }),
        (Some(x), None) | (None, Some(x)) => Ok(x),
        (None, None) => unreachable!("every complete matrix has a critical set"),
    }
}

/// Size of the largest critical set of `m` (order at most 6).
pub fn lcs_of(m: &PartialMatrix) -> Result<usize> {
    largest_certificate(m).map(|(s, _)| s)
}

/// Every critical set of `m`, as cell bitsets (row-major, 0-based), sorted.
pub fn critical_sets_of(m: &PartialMatrix) -> Result<Vec<CellSet>> {
    if !m.is_complete() {
        return Err(Error::NotComplete);
    }
    mask_guard(m, 5, "critical set enumeration")?;
    let mut found = HashSet::new();
    RunSearch::new(m).all_sets(&mut found);
    let flipped = m.transpose().complement();
    let mut other = HashSet::new();
    RunSearch::new(&flipped).all_sets(&mut other);
    let (rows, cols) = (m.rows(), m.cols());
    for mask in other {
        // cell (r, c) of the flipped grid is cell (c, r) here
        let mut back = 0u128;
        for r in 0..cols {
            for c in 0..rows {
                if mask >> (r * rows + c) & 1 == 1 {
                    back |= 1 << (c * cols + r);
                }
            }
        }
        found.insert(back);
    }
    let mut out: Vec<CellSet> = found.into_iter().map(CellSet).collect();
    out.sort();
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::completion::{count_completions, CompletionBudget};

    fn fig1() -> PartialMatrix {
        PartialMatrix::parse_text(include_str!("../fixtures/fig1.txt")).unwrap()
    }

    fn fig1_cs() -> PartialMatrix {
        PartialMatrix::parse_text(include_str!("../fixtures/fig1_cs.txt")).unwrap()
    }

    fn example_walk() -> Walk {
        Walk::from_points(&[
            (0, 0),
            (1, 0),
            (1, -1),
            (2, -1),
            (2, -2),
            (3, -2),
            (3, -3),
            (4, -3),
            (4, -4),
            (5, -4),
            (5, -5),
            (5, -6),
            (6, -6),
        ])
        .unwrap()
    }

    fn x4() -> PartialMatrix {
        PartialMatrix::from_bits(&[vec![1, 0, 1, 0], vec![0, 1, 0, 1], vec![1, 0, 1, 0], vec![0, 1, 0, 1]]).unwrap()
    }

    fn id(n: usize) -> Permutation {
        Permutation::identity(n)
    }

    #[test]
    fn example_walk_depths_and_points() {
        let w = example_walk();
        assert_eq!(w.depth(), &[0, 1, 2, 3, 4, 6]);
        assert_eq!(w.rows(), 6);
        assert_eq!(w.points().len(), 13);
        assert_eq!(Walk::from_points(&w.points()).unwrap(), w);
        assert!(w.cell_above(1, 2) && !w.cell_above(2, 2));
        assert_eq!(Walk::all_below(3, 4).depth(), &[0, 0, 0, 0]);
        assert_eq!(Walk::all_above(3, 4).depth(), &[3, 3, 3, 3]);
        assert!(Walk::from_points(&[(0, 0), (1, 1)]).is_err());
        assert!(Walk::new(3, vec![2, 1]).is_err());
    }

    #[test]
    fn example_block_structure() {
        let bs = block_structure(&example_walk()).unwrap();
        assert_eq!(bs.l(), 5);
        assert_eq!(bs.l_prime(), 6);
        assert_eq!(bs.row_runs(), &[1, 1, 1, 1, 2]);
        assert_eq!(bs.col_runs(), &[1, 1, 1, 1, 1, 1]);
        assert_eq!(
            bs.corners(),
            &[(0, 0), (1, 0), (1, -1), (2, -1), (2, -2), (3, -2), (3, -3), (4, -3), (4, -4), (5, -4), (5, -6), (6, -6)]
        );
        assert_eq!(bs.walk(), example_walk());
    }

    #[test]
    fn block_sizes_tile_the_grid() {
        for depth in [vec![0, 1, 2, 3], vec![0, 0, 4, 4], vec![0, 2, 2, 3]] {
            let bs = block_structure(&Walk::new(4, depth).unwrap()).unwrap();
            let mut total = 0;
            for i in 1..=bs.l() {
                for j in 1..=bs.l_prime() {
                    let (rr, cc) = bs.block(i, j);
                    assert_eq!(rr.clone().count() * cc.clone().count(), bs.block_size(i, j));
                    total += bs.block_size(i, j);
                    for r in rr {
                        for c in cc.clone() {
                            assert_eq!(!bs.walk().cell_above(r, c), bs.block_below(i, j));
                        }
                    }
                }
            }
            assert_eq!(total, 16);
        }
    }

    #[test]
    fn staircase_and_single_corner_structures() {
        // a_j = j - 1 on a 4x4 grid
        let bs = block_structure(&Walk::new(4, vec![0, 1, 2, 3]).unwrap()).unwrap();
        assert_eq!(bs.row_runs(), &[1, 1, 1, 1]);
        assert_eq!(bs.col_runs(), &[1, 1, 1, 1]);
        // m East, 2m South, m East
        let bs = block_structure(&Walk::new(4, vec![0, 0, 4, 4]).unwrap()).unwrap();
        assert_eq!((bs.l(), bs.l_prime()), (1, 2));
        assert!(block_structure(&Walk::new(4, vec![1, 1, 4, 4]).unwrap()).is_err());
    }

    #[test]
    fn transposed_walk_swaps_sides() {
        let w = Walk::new(3, vec![1, 1, 2, 3, 3]).unwrap();
        let t = w.transposed();
        assert_eq!(t.rows(), 5);
        assert_eq!(t.transposed(), w);
        for i in 1..=3 {
            for j in 1..=5 {
                assert_eq!(w.cell_above(i, j), !t.cell_above(j, i));
            }
        }
        assert!(t.starts_east());
    }

    #[test]
    fn fig1_induced_set() {
        let m = fig1();
        let d = induced_defining_set(&m, &id(6), &id(6), &example_walk()).unwrap();
        assert_eq!(d, fig1_cs());
        assert!(verify_handier(&m, &id(6), &id(6), &example_walk()).unwrap());
        assert!(!verify_handier(&m, &id(6), &id(6), &Walk::all_below(6, 6)).unwrap());
    }

    #[test]
    fn x4_staircase_induced_set() {
        let d = induced_defining_set(&x4(), &id(4), &id(4), &Walk::new(4, vec![0, 1, 2, 3]).unwrap()).unwrap();
        assert_eq!(d.size(), 6);
        assert_eq!(count_completions(&d, CompletionBudget::new(2)).unwrap(), 1);
        let zeros = induced_defining_set(&x4(), &id(4), &id(4), &Walk::all_below(4, 4)).unwrap();
        assert_eq!(zeros.triples().iter().filter(|t| !t.value).count(), 8);
        assert_eq!(zeros.size(), 8);
    }

    #[test]
    fn certificate_search_examples() {
        let m = fig1();
        let cs = fig1_cs();
        let cert = search_walk_certificate(&m, &cs).unwrap().unwrap();
        assert_eq!(cert.induced_set(&m).unwrap(), cs);
        let exact = search_exact_certificate(&m, &cs).unwrap().unwrap();
        assert_eq!(exact.induced_set(&m).unwrap(), cs);
        let empty = PartialMatrix::empty(m.margins().clone());
        assert_eq!(search_walk_certificate(&m, &empty).unwrap(), None);
        let full = search_walk_certificate(&m, &m).unwrap().unwrap();
        assert!(full.induced_set(&m).unwrap().is_subset_of(&m).unwrap());
    }

    #[test]
    fn certificate_json_round_trip() {
        let m = fig1();
        let cert = search_walk_certificate(&m, &fig1_cs()).unwrap().unwrap();
        let back = WalkCertificate::from_json(&cert.to_json()).unwrap();
        assert_eq!(back, cert);
        let w = example_walk();
        assert_eq!(w.to_json(), r#"{"depth":[0,1,2,3,4,6]}"#);
        assert_eq!(Walk::from_json(6, &w.to_json()).unwrap(), w);
    }

    #[test]
    fn complement_walk_puts_strictly_lower_blocks_below() {
        for w in [example_walk(), Walk::new(4, vec![0, 1, 2, 3]).unwrap(), Walk::new(4, vec![0, 0, 4, 4]).unwrap()] {
            let bs = block_structure(&w).unwrap();
            let wp = complement_walk(&bs);
            for i in 1..=bs.l() {
                for j in 1..=bs.l_prime() {
                    let (rr, cc) = bs.block(i, j);
                    for r in rr {
                        for c in cc.clone() {
                            assert_eq!(!wp.cell_above(r, c), i > j, "block ({i},{j}) cell ({r},{c})");
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn scs_and_lcs_small_cases() {
        let id2 = PartialMatrix::from_bits(&[vec![1, 0], vec![0, 1]]).unwrap();
        assert_eq!(scs_of(&id2).unwrap(), 1);
        assert_eq!(lcs_of(&id2).unwrap(), 1);
        assert_eq!(lcs_of(&x4()).unwrap(), 6);
        let (s, cert) = smallest_certificate(&x4()).unwrap();
        assert_eq!(cert.induced_set(&x4()).unwrap().size(), s);
        let (l, cert) = largest_certificate(&x4()).unwrap();
        assert_eq!(cert.induced_set(&x4()).unwrap().size(), l);
        assert!(cert.verify_handier(&x4()).unwrap());
    }

    #[test]
    fn scs_of_fig1_is_at_most_fourteen() {
        let s = scs_of(&fig1()).unwrap();
        assert!((9..=14).contains(&s), "scs {s}");
    }

    #[test]
    fn guards_fail_fast() {
        let big = PartialMatrix::from_bits(&vec![vec![0u8; 9]; 9]).unwrap();
        assert!(matches!(scs_of(&big), Err(Error::GuardExceeded(_))));
        let seven = PartialMatrix::from_bits(&vec![vec![0u8; 7]; 7]).unwrap();
        assert!(matches!(lcs_of(&seven), Err(Error::GuardExceeded(_))));
    }
}
