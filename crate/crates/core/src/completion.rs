//! Counting and enumerating completions of a partial matrix into `A(R,S)`.
//!
//! The search fills empty cells in row-major order, trying Zero before One, so
//! completions are produced in lexicographic order. Two optional accelerations
//! never change the result:
//!
//! * forced-cell propagation: a line whose remaining 1-need (or 0-need) hits
//!   zero fixes all of its empty cells;
//! * a Gale–Ryser test at each row boundary on the residual 1-needs and 0-needs,
//!   treating every remaining cell as free. The true residual problem is a
//!   restriction of that relaxation, so an infeasible relaxation prunes soundly.

use crate::error::{Error, Result};
use crate::matrix::{Entry, PartialMatrix};

/// Bounds on a completion search.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CompletionBudget {
    /// Stop after this many completions; counts saturate here. At least 1.
    pub limit: u64,
    /// Abort with [`Error::BudgetExhausted`] after this many branch nodes.
    pub node_cap: Option<u64>,
}

impl CompletionBudget {
    pub fn new(limit: u64) -> Self {
        CompletionBudget { limit: limit.max(1), node_cap: None }
    }

    pub fn unlimited() -> Self {
        CompletionBudget { limit: u64::MAX, node_cap: None }
    }

    pub fn with_node_cap(self, cap: u64) -> Self {
        CompletionBudget { node_cap: Some(cap), ..self }
    }
}

/// Toggles for the search accelerations; both default to on.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SearchOptions {
    pub prune: bool,
    pub propagate: bool,
}

impl Default for SearchOptions {
    fn default() -> Self {
        SearchOptions { prune: true, propagate: true }
    }
}

impl SearchOptions {
    pub const PLAIN: SearchOptions = SearchOptions { prune: false, propagate: false };
}

const EMPTY: i8 = -1;

struct Search<'f> {
    rows: usize,
    cols: usize,
    val: Vec<i8>,
    // [zeros still needed, ones still needed] per line
    row_need: Vec<[u32; 2]>,
    col_need: Vec<[u32; 2]>,
    order: Vec<usize>,
    trail: Vec<usize>,
    lines: Vec<usize>,
    opts: SearchOptions,
    nodes: u64,
    node_cap: Option<u64>,
    found: u64,
    limit: u64,
    visit: Option<&'f mut dyn FnMut(&[i8])>,
    scratch_a: Vec<u32>,
    scratch_b: Vec<u32>,
}

enum Stop {
    Limit,
    Budget,
}

impl<'f> Search<'f> {
    fn new(d: &PartialMatrix, budget: CompletionBudget, opts: SearchOptions) -> Result<Self> {
        if !d.validate() {
            return Err(Error::InvalidPartial);
        }
        let (rows, cols) = (d.rows(), d.cols());
        let rs = d.margins().row_sums();
        let cs = d.margins().col_sums();
        let mut row_need: Vec<[u32; 2]> = rs.iter().map(|&r| [(cols - r) as u32, r as u32]).collect();
        let mut col_need: Vec<[u32; 2]> = cs.iter().map(|&s| [(rows - s) as u32, s as u32]).collect();
        let mut val = vec![EMPTY; rows * cols];
        let mut order = Vec::new();
        for (idx, e) in d.entries().iter().enumerate() {
            let (r, c) = (idx / cols, idx % cols);
            match e.bit() {
                Some(b) => {
                    val[idx] = b as i8;
                    row_need[r][b as usize] -= 1;
                    col_need[c][b as usize] -= 1;
                }
                None => order.push(idx),
            }
        }
        Ok(Search {
            rows,
            cols,
            val,
            row_need,
            col_need,
            order,
            trail: Vec::new(),
            lines: Vec::new(),
            opts,
            nodes: 0,
            node_cap: budget.node_cap,
            found: 0,
            limit: budget.limit.max(1),
            visit: None,
            scratch_a: Vec::new(),
            scratch_b: Vec::new(),
        })
    }

    #[inline]
    fn assign(&mut self, idx: usize, v: usize) -> bool {
        let (r, c) = (idx / self.cols, idx % self.cols);
        if self.row_need[r][v] == 0 || self.col_need[c][v] == 0 {
            return false;
        }
        self.val[idx] = v as i8;
        self.row_need[r][v] -= 1;
        self.col_need[c][v] -= 1;
        self.trail.push(idx);
        true
    }

    fn undo(&mut self, mark: usize) {
        while self.trail.len() > mark {
            let idx = self.trail.pop().expect("trail above mark");
            let v = self.val[idx] as usize;
            let (r, c) = (idx / self.cols, idx % self.cols);
            self.row_need[r][v] += 1;
            self.col_need[c][v] += 1;
            self.val[idx] = EMPTY;
        }
    }

    /// Fixes every cell forced by a saturated line, starting from the lines of `idx`.
    fn propagate(&mut self, idx: usize) -> bool {
        let (rows, cols) = (self.rows, self.cols);
        self.lines.clear();
        self.lines.push(idx / cols);
        self.lines.push(rows + idx % cols);
        while let Some(line) = self.lines.pop() {
            let need = if line < rows { self.row_need[line] } else { self.col_need[line - rows] };
            let v = match need {
                [0, 0] => continue,
                [_, 0] => 0,
                [0, _] => 1,
                _ => continue,
            };
            let len = if line < rows { cols } else { rows };
            for k in 0..len {
                let cell = if line < rows { line * cols + k } else { k * cols + (line - rows) };
                if self.val[cell] != EMPTY {
                    continue;
                }
                if !self.assign(cell, v) {
                    return false;
                }
                self.lines.push(if line < rows { rows + k } else { k });
            }
        }
        true
    }

    /// Gale–Ryser on the residual needs of rows `from..` against all columns.
    fn residual_feasible(&mut self, from: usize) -> bool {
        let p = self.rows - from;
        for v in 0..2 {
            self.scratch_a.clear();
            self.scratch_a.extend(self.row_need[from..].iter().map(|n| n[v]));
            self.scratch_b.clear();
            self.scratch_b.extend(self.col_need.iter().map(|n| n[v]));
            if self.scratch_b.iter().any(|&b| b as usize > p) {
                return false;
            }
            self.scratch_a.sort_unstable_by(|x, y| y.cmp(x));
            let mut lhs = 0u64;
            for k in 1..=p {
                lhs += self.scratch_a[k - 1] as u64;
                let rhs: u64 = self.scratch_b.iter().map(|&b| (b as u64).min(k as u64)).sum();
                if lhs > rhs {
                    return false;
                }
            }
        }
        true
    }

    fn run(&mut self) -> std::result::Result<(), Stop> {
        if self.opts.propagate && !self.order.is_empty() {
            // lines saturated by the given cells force empties before branching
            let mark = self.trail.len();
            for line in 0..self.rows {
                if !self.propagate(line * self.cols) {
                    self.undo(mark);
                    return Ok(());
                }
            }
            for c in 0..self.cols {
                if !self.propagate(c) {
                    self.undo(mark);
                    return Ok(());
                }
            }
        }
        self.dfs(0, usize::MAX)
    }

    fn dfs(&mut self, mut pos: usize, last_row: usize) -> std::result::Result<(), Stop> {
        while pos < self.order.len() && self.val[self.order[pos]] != EMPTY {
            pos += 1;
        }
        if pos == self.order.len() {
            self.found += 1;
            if let Some(f) = self.visit.as_mut() {
                f(&self.val);
            }
            return if self.found >= self.limit { Err(Stop::Limit) } else { Ok(()) };
        }
        let idx = self.order[pos];
        let row = idx / self.cols;
        if self.opts.prune && row != last_row && !self.residual_feasible(row) {
            return Ok(());
        }
        for v in 0..2 {
            self.nodes += 1;
            if let Some(cap) = self.node_cap {
                if self.nodes > cap {
                    return Err(Stop::Budget);
                }
            }
            let mark = self.trail.len();
            if self.assign(idx, v) && (!self.opts.propagate || self.propagate(idx)) {
                let r = self.dfs(pos + 1, row);
                self.undo(mark);
                r?;
            } else {
                self.undo(mark);
            }
        }
        Ok(())
    }

    fn finish(mut self) -> Result<u64> {
        match self.run() {
            Ok(()) | Err(Stop::Limit) => Ok(self.found),
            Err(Stop::Budget) => Err(Error::BudgetExhausted { nodes: self.nodes }),
        }
    }
}

fn to_matrix(template: &PartialMatrix, val: &[i8]) -> PartialMatrix {
    let cells = val.iter().map(|&v| Entry::from_bit(v == 1)).collect();
    PartialMatrix::from_entries(template.margins().clone(), cells).expect("same shape as template")
}

/// Number of completions of `d`, saturating at `budget.limit`.
pub fn count_completions(d: &PartialMatrix, budget: CompletionBudget) -> Result<u64> {
    count_completions_with(d, budget, SearchOptions::default())
}

pub fn count_completions_with(d: &PartialMatrix, budget: CompletionBudget, opts: SearchOptions) -> Result<u64> {
    Search::new(d, budget, opts)?.finish()
}

/// Calls `f` on each completion in lexicographic order (Zero < One, row-major)
/// until `budget.limit` completions have been seen. Returns how many were seen.
pub fn for_each_completion<F: FnMut(&PartialMatrix)>(
    d: &PartialMatrix,
    budget: CompletionBudget,
    opts: SearchOptions,
    mut f: F,
) -> Result<u64> {
    let mut search = Search::new(d, budget, opts)?;
    let mut cb = |val: &[i8]| f(&to_matrix(d, val));
    search.visit = Some(&mut cb);
    search.finish()
}

/// Visits completions as raw row-major bit slices (`0`/`1`), avoiding allocation.
pub(crate) fn for_each_completion_raw<F: FnMut(&[i8])>(
    d: &PartialMatrix,
    budget: CompletionBudget,
    mut f: F,
) -> Result<u64> {
    let mut search = Search::new(d, budget, SearchOptions::default())?;
    search.visit = Some(&mut f);
    search.finish()
}

/// All completions (up to `budget.limit`), in lexicographic order.
pub fn enumerate_completions(d: &PartialMatrix, budget: CompletionBudget) -> Result<Vec<PartialMatrix>> {
    let mut out = Vec::new();
    for_each_completion(d, budget, SearchOptions::default(), |m| out.push(m.clone()))?;
    Ok(out)
}

/// The sole completion of `d`; [`Error::NoCompletion`] or [`Error::Ambiguous`] otherwise.
pub fn complete_unique(d: &PartialMatrix) -> Result<PartialMatrix> {
    let mut first = None;
    let n = for_each_completion(d, CompletionBudget::new(2), SearchOptions::default(), |m| {
        if first.is_none() {
            first = Some(m.clone());
        }
    })?;
    match n {
        0 => Err(Error::NoCompletion),
        1 => Ok(first.expect("one completion seen")),
        _ => Err(Error::Ambiguous),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::{CellTriple, MarginSpec};
    use std::collections::HashMap;

    fn empty(n: usize, x: usize) -> PartialMatrix {
        PartialMatrix::empty(MarginSpec::uniform(n, x).unwrap())
    }

    // every 4x4 grid filtered by margins
    fn brute_force_lambda42() -> u64 {
        (0u32..1 << 16)
            .filter(|g| {
                (0..4).all(|r| (g >> (4 * r) & 0xf).count_ones() == 2)
                    && (0..4).all(|c| (0..4).filter(|r| g >> (4 * r + c) & 1 == 1).count() == 2)
            })
            .count() as u64
    }

    // rows chosen one at a time; state is the vector of column sums so far
    fn dp_uniform(n: usize, x: usize) -> u64 {
        let rows: Vec<u32> = (0u32..1 << n).filter(|r| r.count_ones() as usize == x).collect();
        let mut states: HashMap<Vec<usize>, u64> = HashMap::from([(vec![0; n], 1)]);
        for _ in 0..n {
            let mut next = HashMap::new();
            for (s, w) in &states {
                for r in &rows {
                    let t: Vec<usize> = (0..n).map(|c| s[c] + (r >> c & 1) as usize).collect();
                    if t.iter().all(|&v| v <= x) {
                        *next.entry(t).or_insert(0) += w;
                    }
                }
            }
            states = next;
        }
        states.values().sum()
    }

    #[test]
    fn oracles_agree_with_known_counts() {
        assert_eq!(brute_force_lambda42(), 90);
        assert_eq!(dp_uniform(4, 2), 90);
    }

    #[test]
    fn two_by_two() {
        let d = empty(2, 1);
        assert_eq!(count_completions(&d, CompletionBudget::new(10)).unwrap(), 2);
        let all = enumerate_completions(&d, CompletionBudget::unlimited()).unwrap();
        assert_eq!(all.len(), 2);
        assert_eq!(all[0].to_text(), "R=1,1 S=1,1\n01\n10\n");
        assert_eq!(all[1].to_text(), "R=1,1 S=1,1\n10\n01\n");
        assert_eq!(complete_unique(&d), Err(Error::Ambiguous));
    }

    #[test]
    fn lambda42_count_matches_brute_force() {
        let want = brute_force_lambda42();
        for opts in [SearchOptions::default(), SearchOptions::PLAIN] {
            let got = count_completions_with(&empty(4, 2), CompletionBudget::new(1_000_000), opts).unwrap();
            assert_eq!(got, want);
        }
    }

    #[test]
    fn lambda63_count_matches_dp() {
        let got = count_completions(&empty(6, 3), CompletionBudget::unlimited()).unwrap();
        assert_eq!(got, dp_uniform(6, 3));
        assert_eq!(got, 297_200);
    }

    #[test]
    fn complete_matrix_is_its_own_completion() {
        let m = PartialMatrix::parse_text(include_str!("../fixtures/fig1.txt")).unwrap();
        assert_eq!(enumerate_completions(&m, CompletionBudget::unlimited()).unwrap(), vec![m.clone()]);
        assert_eq!(complete_unique(&m).unwrap(), m);
    }

    #[test]
    fn fig1_set_completes_uniquely() {
        let m = PartialMatrix::parse_text(include_str!("../fixtures/fig1.txt")).unwrap();
        let d = PartialMatrix::parse_text(include_str!("../fixtures/fig1_cs.txt")).unwrap();
        assert_eq!(count_completions(&d, CompletionBudget::new(2)).unwrap(), 1);
        assert_eq!(complete_unique(&d).unwrap(), m);
    }

    #[test]
    fn no_completion_is_reported() {
        // valid per line, but row 2 can only put its 1 in the saturated column 1
        let d = PartialMatrix::from_triples(
            MarginSpec::uniform(2, 1).unwrap(),
            &[CellTriple::new(1, 1, true), CellTriple::new(2, 2, false)],
        )
        .unwrap();
        assert!(d.validate());
        assert_eq!(count_completions(&d, CompletionBudget::new(5)).unwrap(), 0);
        assert_eq!(complete_unique(&d), Err(Error::NoCompletion));
    }

    #[test]
    fn node_cap_is_an_error_not_a_count() {
        let r = count_completions(&empty(6, 3), CompletionBudget::unlimited().with_node_cap(100));
        assert!(matches!(r, Err(Error::BudgetExhausted { .. })));
    }

    #[test]
    fn invalid_partial_is_rejected() {
        let mut d = empty(2, 1);
        d.set(1, 1, Entry::One);
        d.set(1, 2, Entry::One);
        assert_eq!(count_completions(&d, CompletionBudget::new(2)), Err(Error::InvalidPartial));
    }

    #[test]
    fn enumeration_order_is_lexicographic() {
        let all = enumerate_completions(&empty(4, 2), CompletionBudget::unlimited()).unwrap();
        let keys: Vec<String> = all.iter().map(|m| m.to_text()).collect();
        let mut sorted = keys.clone();
        sorted.sort();
        assert_eq!(keys, sorted);
        sorted.dedup();
        assert_eq!(sorted.len(), 90);
    }

    #[test]
    fn limit_saturates() {
        assert_eq!(count_completions(&empty(4, 2), CompletionBudget::new(7)).unwrap(), 7);
    }
}
