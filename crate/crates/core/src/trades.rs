//! Trades, disjoint mates and cycle decomposition.
//!
//! A trade is stored by its body `T`; the mate `T'` is `T` with every value
//! flipped. Flipping preserves line counts exactly when every row and column of
//! `T` holds as many 1s as 0s, which is the invariant checked on construction.
//!
//! A cycle is a trade with 0 or 2 cells per line. Its cells are kept in circuit
//! order: a 1-cell `(r, c)` is followed by the 0-cell in column `c`, which is
//! followed by the 1-cell in that 0-cell's row, and so on.

use std::collections::VecDeque;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::{CellTriple, Entry, MarginSpec, PartialMatrix};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Trade {
    body: PartialMatrix,
}

impl Trade {
    pub fn new(body: PartialMatrix) -> Result<Self> {
        let (rows, cols) = (body.rows(), body.cols());
        for r in 0..rows {
            let (ones, zeros) = line_counts((0..cols).map(|c| body.at(r, c)));
            if ones != zeros {
                return Err(Error::InvalidTrade(format!("row {} has {ones} ones and {zeros} zeros", r + 1)));
            }
        }
        for c in 0..cols {
            let (ones, zeros) = line_counts((0..rows).map(|r| body.at(r, c)));
            if ones != zeros {
                return Err(Error::InvalidTrade(format!("column {} has {ones} ones and {zeros} zeros", c + 1)));
            }
        }
        Ok(Trade { body })
    }

    pub fn from_triples(margins: MarginSpec, triples: &[CellTriple]) -> Result<Self> {
        Trade::new(PartialMatrix::from_triples(margins, triples)?)
    }

    pub fn body(&self) -> &PartialMatrix {
        &self.body
    }

    /// The disjoint mate: same cells, every value flipped.
    pub fn mate(&self) -> Trade {
        let mut mate = self.body.clone();
        for r in 0..mate.rows() {
            for c in 0..mate.cols() {
                mate.put(r, c, mate.at(r, c).flipped());
            }
        }
        Trade { body: mate }
    }

    pub fn size(&self) -> usize {
        self.body.size()
    }

    pub fn is_empty(&self) -> bool {
        self.size() == 0
    }

    pub fn triples(&self) -> Vec<CellTriple> {
        self.body.triples()
    }

    /// True iff every line holds 0 or 2 cells and the cells form one circuit.
    pub fn is_cycle(&self) -> bool {
        Cycle::from_trade(self.clone()).is_ok()
    }

    /// `[[i, j, bodyValue], ...]`.
    pub fn to_json(&self) -> String {
        serde_json::to_string(&self.triples()).expect("plain data")
    }

    pub fn from_json(margins: MarginSpec, s: &str) -> Result<Self> {
        let triples: Vec<CellTriple> = serde_json::from_str(s).map_err(|e| Error::Json(e.to_string()))?;
        Trade::from_triples(margins, &triples)
    }
}

fn line_counts(it: impl Iterator<Item = Entry>) -> (usize, usize) {
    it.fold((0, 0), |(o, z), e| match e {
        Entry::One => (o + 1, z),
        Entry::Zero => (o, z + 1),
        Entry::Empty => (o, z),
    })
}

/// A minimal trade: a single closed circuit alternating 1, 0, 1, 0, …
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cycle {
    trade: Trade,
    circuit: Vec<CellTriple>,
}

impl Cycle {
    pub fn from_trade(trade: Trade) -> Result<Self> {
        let body = &trade.body;
        let (rows, cols) = (body.rows(), body.cols());
        let bad = |msg: &str| Error::InvalidTrade(msg.to_string());
        let mut row_one = vec![None; rows];
        let mut col_zero = vec![None; cols];
        for t in trade.triples() {
            let slot = if t.value { &mut row_one[t.row - 1] } else { &mut col_zero[t.col - 1] };
            if slot.is_some() {
                return Err(bad("a line holds more than two cells"));
            }
            *slot = Some(t);
        }
        let start = match trade.triples().into_iter().find(|t| t.value) {
            Some(t) => t,
            None => return Err(bad("a cycle needs at least one cell")),
        };
        let mut circuit = vec![start];
        let mut cur = start;
        loop {
            let zero = col_zero[cur.col - 1].ok_or_else(|| bad("open circuit"))?;
            let one = row_one[zero.row - 1].ok_or_else(|| bad("open circuit"))?;
            circuit.push(zero);
            if one == start {
                break;
            }
            circuit.push(one);
            cur = one;
        }
        if circuit.len() != trade.size() {
            return Err(bad("cells form more than one circuit"));
        }
        debug_assert!(circuit.len() >= 4 && circuit.len() % 2 == 0);
        Ok(Cycle { trade, circuit })
    }

    /// Builds a cycle from cells given in circuit order (any rotation, starting anywhere).
    pub fn from_circuit(margins: MarginSpec, cells: &[CellTriple]) -> Result<Self> {
        Cycle::from_trade(Trade::from_triples(margins, cells)?)
    }

    pub fn trade(&self) -> &Trade {
        &self.trade
    }

    /// Cells in circuit order, starting from the row-major first 1-cell.
    pub fn circuit(&self) -> &[CellTriple] {
        &self.circuit
    }

    pub fn len(&self) -> usize {
        self.circuit.len()
    }

    pub fn is_empty(&self) -> bool {
        self.circuit.is_empty()
    }

    pub fn contains(&self, row: usize, col: usize) -> bool {
        self.trade.body.get(row, col).is_filled()
    }
}

impl Serialize for Cycle {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.circuit.serialize(s)
    }
}

/// Cycle JSON carries no margins, so deserialising yields the raw circuit.
#[derive(Serialize, Deserialize, Debug, Clone, PartialEq, Eq)]
#[serde(transparent)]
pub struct CircuitJson(pub Vec<CellTriple>);

fn require_complete(m: &PartialMatrix) -> Result<()> {
    if m.is_complete() {
        Ok(())
    } else {
        Err(Error::NotComplete)
    }
}

/// The trade carrying `m1` to `m2`, or `None` when they are equal.
pub fn trade_between(m1: &PartialMatrix, m2: &PartialMatrix) -> Result<Option<Trade>> {
    require_complete(m1)?;
    require_complete(m2)?;
    if m1.margins() != m2.margins() {
        return Err(Error::DimensionMismatch("matrices have different margins".into()));
    }
    let mut body = PartialMatrix::empty(m1.margins().clone());
    let mut any = false;
    for r in 0..m1.rows() {
        for c in 0..m1.cols() {
            if m1.at(r, c) != m2.at(r, c) {
                body.put(r, c, m1.at(r, c));
                any = true;
            }
        }
    }
    if any {
        Trade::new(body).map(Some)
    } else {
        Ok(None)
    }
}

/// Swaps the body of `t` for its mate inside `m`.
pub fn apply_trade(m: &PartialMatrix, t: &Trade) -> Result<PartialMatrix> {
    require_complete(m)?;
    if !t.body.is_subset_of(m)? {
        return Err(Error::NotSubset);
    }
    let mut out = m.clone();
    for tr in t.triples() {
        out.set(tr.row, tr.col, Entry::from_bit(!tr.value));
    }
    Ok(out)
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
enum Vertex {
    Row(usize),
    Col(usize),
}

/// Splits a trade into cell-disjoint cycles.
///
/// Walks the trade as a bipartite multigraph, leaving a row by its lowest
/// unused 1-cell and a column by its lowest unused 0-cell. Line balance
/// guarantees the walk never gets stuck; whenever it revisits a vertex the
/// closed stretch is cut off as a cycle.
pub fn decompose_cycles(t: &Trade) -> Vec<Cycle> {
    let body = &t.body;
    let (rows, cols) = (body.rows(), body.cols());
    let mut used = vec![false; rows * cols];
    let mut remaining = t.size();
    let mut out = Vec::new();
    let next_from = |v: Vertex, used: &[bool]| -> Option<(usize, usize)> {
        match v {
            Vertex::Row(r) => (0..cols)
                .find(|&c| !used[r * cols + c] && body.at(r, c) == Entry::One)
                .map(|c| (r, c)),
            Vertex::Col(c) => (0..rows)
                .find(|&r| !used[r * cols + c] && body.at(r, c) == Entry::Zero)
                .map(|r| (r, c)),
        }
    };
    while remaining > 0 {
        let start = (0..rows)
            .find(|&r| (0..cols).any(|c| !used[r * cols + c] && body.at(r, c) == Entry::One))
            .expect("a balanced trade with unused cells has a row with an unused 1");
        let mut verts = vec![Vertex::Row(start)];
        let mut edges: Vec<(usize, usize)> = Vec::new();
        while !verts.is_empty() {
            let v = *verts.last().expect("nonempty");
            let Some((r, c)) = next_from(v, &used) else {
                // only reachable when the path is exhausted back at its start
                break;
            };
            used[r * cols + c] = true;
            edges.push((r, c));
            let w = match v {
                Vertex::Row(_) => Vertex::Col(c),
                Vertex::Col(_) => Vertex::Row(r),
            };
            if let Some(p) = verts.iter().position(|&x| x == w) {
                let cells: Vec<CellTriple> = edges
                    .drain(p..)
                    .map(|(r, c)| CellTriple::new(r + 1, c + 1, body.at(r, c) == Entry::One))
                    .collect();
                verts.truncate(p + 1);
                remaining -= cells.len();
                out.push(Cycle::from_circuit(body.margins().clone(), &cells).expect("extracted circuit is a cycle"));
                if p == 0 && next_from(verts[0], &used).is_none() {
                    break;
                }
            } else {
                verts.push(w);
            }
        }
    }
    out
}

/// A shortest cycle of `m` meeting `d` in exactly the cell `(row, col)`.
///
/// The target is joined by a shortest alternating path through cells of
/// `m \ d`, found breadth-first with lowest-index neighbours first.
pub fn find_cycle_through(m: &PartialMatrix, d: &PartialMatrix, row: usize, col: usize) -> Result<Option<Cycle>> {
    require_complete(m)?;
    if !d.is_subset_of(m)? {
        return Err(Error::NotSubset);
    }
    if row == 0 || col == 0 || row > m.rows() || col > m.cols() {
        return Err(Error::OutOfBounds { row, col });
    }
    let target = match d.get(row, col).bit() {
        Some(v) => v,
        None => return Err(Error::CellNotInSet { row, col }),
    };
    let (rows, cols) = (m.rows(), m.cols());
    let (tr, tc) = (row - 1, col - 1);
    let free = |r: usize, c: usize| !d.at(r, c).is_filled();
    // Orientation: rows exit by 1-cells, columns exit by 0-cells.
    // A 1-target is the edge tr -> tc, so we need a path tc ~> tr; a 0-target is tc -> tr.
    let (src, dst) = if target { (Vertex::Col(tc), Vertex::Row(tr)) } else { (Vertex::Row(tr), Vertex::Col(tc)) };
    let key = |v: Vertex| match v {
        Vertex::Row(r) => r,
        Vertex::Col(c) => rows + c,
    };
    let mut prev: Vec<Option<(Vertex, (usize, usize))>> = vec![None; rows + cols];
    let mut seen = vec![false; rows + cols];
    seen[key(src)] = true;
    let mut queue = VecDeque::from([src]);
    while let Some(v) = queue.pop_front() {
        if v == dst {
            break;
        }
        let steps: Vec<(Vertex, (usize, usize))> = match v {
            Vertex::Row(r) => (0..cols)
                .filter(|&c| free(r, c) && m.at(r, c) == Entry::One)
                .map(|c| (Vertex::Col(c), (r, c)))
                .collect(),
            Vertex::Col(c) => (0..rows)
                .filter(|&r| free(r, c) && m.at(r, c) == Entry::Zero)
                .map(|r| (Vertex::Row(r), (r, c)))
                .collect(),
        };
        for (w, cell) in steps {
            if !seen[key(w)] {
                seen[key(w)] = true;
                prev[key(w)] = Some((v, cell));
                queue.push_back(w);
            }
        }
    }
    if !seen[key(dst)] {
        return Ok(None);
    }
    let mut path = Vec::new();
    let mut v = dst;
    while v != src {
        let (p, cell) = prev[key(v)].expect("reached vertices have a parent");
        path.push(cell);
        v = p;
    }
    path.reverse();
    let mut cells = vec![CellTriple::new(row, col, target)];
    cells.extend(path.into_iter().map(|(r, c)| CellTriple::new(r + 1, c + 1, m.at(r, c) == Entry::One)));
    Cycle::from_circuit(m.margins().clone(), &cells).map(Some)
}

/// Every cycle contained in a complete matrix (exponential; small grids only).
pub fn all_cycles(m: &PartialMatrix) -> Result<Vec<Cycle>> {
    require_complete(m)?;
    if m.rows() > 6 || m.cols() > 6 {
        return Err(Error::GuardExceeded("cycle enumeration is limited to 6x6".into()));
    }
    let (rows, cols) = (m.rows(), m.cols());
    let mut out = Vec::new();
    let mut path: Vec<(usize, usize)> = Vec::new();
    let mut row_used = vec![false; rows];
    let mut col_used = vec![false; cols];

    // at row r (r > r0 unless r == r0 at the start), leave by a 1-cell
    #[allow(clippy::too_many_arguments)]
    fn from_row(
        m: &PartialMatrix,
        r0: usize,
        r: usize,
        path: &mut Vec<(usize, usize)>,
        row_used: &mut [bool],
        col_used: &mut [bool],
        out: &mut Vec<Cycle>,
    ) {
        for c in 0..m.cols() {
            if col_used[c] || m.at(r, c) != Entry::One {
                continue;
            }
            col_used[c] = true;
            path.push((r, c));
            // close back to r0
            if path.len() >= 3 && m.at(r0, c) == Entry::Zero {
                let mut cells: Vec<CellTriple> =
                    path.iter().map(|&(r, c)| CellTriple::new(r + 1, c + 1, m.at(r, c) == Entry::One)).collect();
                cells.push(CellTriple::new(r0 + 1, c + 1, false));
                out.push(Cycle::from_circuit(m.margins().clone(), &cells).expect("closed alternating circuit"));
            }
            for r2 in r0 + 1..m.rows() {
                if !row_used[r2] && m.at(r2, c) == Entry::Zero {
                    row_used[r2] = true;
                    path.push((r2, c));
                    from_row(m, r0, r2, path, row_used, col_used, out);
                    path.pop();
                    row_used[r2] = false;
                }
            }
            path.pop();
            col_used[c] = false;
        }
    }
    for r0 in 0..rows {
        row_used[r0] = true;
        from_row(m, r0, r0, &mut path, &mut row_used, &mut col_used, &mut out);
        row_used[r0] = false;
    }
    Ok(out)
}
