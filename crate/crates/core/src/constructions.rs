//! Explicit members of `Λ_{2m}^m` with critical sets of prescribed sizes.
//!
//! Every certified set here comes with a walk certificate whose induced set
//! is exactly the returned set, so `verify_handier` applies directly.
//!
//! * `X_{2m}` carries the staircase set of size `3m² - 4m + 2`.
//! * `Y_{2m}` is `X_{2m}` with one intercalate swapped, size `3m² - 4m + 1`.
//! * `M(k)` covers `m² ≤ k ≤ m² + (m-1)²`.
//! * The trade family `T(i, j)` lowers the `X`/`Y` sizes two at a time.
//! * `B_{2m}` is the block matrix whose critical sets are classified by run
//!   compositions.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::defsets::{is_defining, minimize_to_critical, CertifiedCriticalSet};
use crate::error::{Error, Result};
use crate::fixtures;
use crate::matrix::{CellTriple, Entry, MarginSpec, PartialMatrix, Permutation};
use crate::trades::{apply_trade, Trade};
use crate::walks::{search_exact_certificate, BlockStructure, Walk, WalkCertificate};

fn uniform(m: usize) -> MarginSpec {
    MarginSpec::uniform(2 * m, m).expect("n = 2m, x = m")
}

fn from_rule(m: usize, one: impl Fn(usize, usize) -> bool) -> PartialMatrix {
    let n = 2 * m;
    let mut cells = Vec::with_capacity(n * n);
    for i in 1..=n {
        for j in 1..=n {
            cells.push(Entry::from_bit(one(i, j)));
        }
    }
    PartialMatrix::from_entries(uniform(m), cells).expect("rule has uniform margins")
}

/// Entry `(i, j)` of `X_{2m}`: 0 iff `(i - j) mod 2m ∈ {1, …, m-1, 2m-1}`.
pub fn x_entry(m: usize, i: usize, j: usize) -> bool {
    let r = (i as i64 - j as i64).rem_euclid(2 * m as i64) as usize;
    !((1..m).contains(&r) || r == 2 * m - 1)
}

fn x_matrix(m: usize) -> PartialMatrix {
    from_rule(m, |i, j| x_entry(m, i, j))
}

fn staircase(m: usize) -> Walk {
    Walk::new(2 * m, (0..2 * m).collect()).expect("a_j = j - 1 is a walk")
}

pub fn build_x(m: usize) -> Result<PartialMatrix> {
    if m < 2 {
        return Err(Error::OutOfRange(format!("X_2m needs m >= 2, got {m}")));
    }
    Ok(x_matrix(m))
}

/// The staircase set of `X_{2m}`, size `3m² - 4m + 2`. For `m = 1` this is
/// the 2x2 identity with its single off-diagonal 0.
pub fn critical_x(m: usize) -> Result<CertifiedCriticalSet> {
    if m == 0 {
        return Err(Error::OutOfRange("m must be positive".into()));
    }
    CertifiedCriticalSet::with_certificate(x_matrix(m), WalkCertificate::identity(staircase(m)))
}

fn y_swap(m: usize) -> [(usize, usize); 4] {
    [(m - 1, 2 * m - 1), (m - 1, 2 * m), (2 * m, 2 * m - 1), (2 * m, 2 * m)]
}

pub fn build_y(m: usize) -> Result<PartialMatrix> {
    if m < 3 {
        return Err(Error::OutOfRange(format!("Y_2m needs m >= 3, got {m}")));
    }
    let mut y = x_matrix(m);
    for (i, j) in y_swap(m) {
        y.set(i, j, y.get(i, j).flipped());
    }
    Ok(y)
}

fn y_walk(m: usize) -> Walk {
    let mut depth: Vec<usize> = (0..2 * m).collect();
    depth[2 * m - 1] = 2 * m;
    Walk::new(2 * m, depth).expect("nondecreasing")
}

/// The staircase set of `Y_{2m}` with cell `(2m, 2m)` moved above the walk,
/// size `3m² - 4m + 1`.
pub fn critical_y(m: usize) -> Result<CertifiedCriticalSet> {
    CertifiedCriticalSet::with_certificate(build_y(m)?, WalkCertificate::identity(y_walk(m)))
}

/// `M(k)` for `m² ≤ k ≤ m² + (m-1)²` with its critical set of size `k`.
///
/// With `k - m² = α(m-1) + β`, `0 ≤ β < m-1`, the walk is flat over the first
/// `m` columns and at depth `m` in the last. Between them it sits at depth
/// `m - α` (`m - α - 1` for the first `β` columns). The top-right quadrant `Q`
/// holds 1 below the walk and 0 above; the bottom-left quadrant repeats `Q`
/// and the two diagonal quadrants hold its complement.
pub fn build_m_k(m: usize, k: usize) -> Result<CertifiedCriticalSet> {
    let (lo, hi) = (m * m, m * m + (m.max(1) - 1).pow(2));
    if m == 0 || k < lo || k > hi {
        return Err(Error::OutOfRange(format!("k = {k} outside [{lo}, {hi}] for m = {m}")));
    }
    let excess = k - lo;
    let (alpha, beta) = if m == 1 { (0, 0) } else { (excess / (m - 1), excess % (m - 1)) };
    let mut depth = vec![0; m];
    depth.extend(std::iter::repeat(m - alpha - 1).take(beta));
    depth.extend(std::iter::repeat(m - alpha).take(m - 1 - beta));
    depth.push(m);
    let walk = Walk::new(2 * m, depth)?;
    let q = |i: usize, j: usize| !walk.cell_above(i, j);
    let matrix = from_rule(m, |i, j| match (i <= m, j > m) {
        (true, true) => q(i, j),
        (false, false) => q(i - m, j + m),
        (true, false) => !q(i, j + m),
        (false, true) => !q(i - m, j),
    });
    let c = CertifiedCriticalSet::with_certificate(matrix, WalkCertificate::identity(walk))?;
    debug_assert_eq!(c.size(), k);
    Ok(c)
}

/// One trade `T(i, j)` of the family: 1s at `(i, j)` and `(i-m+1, i-j)`, 0s at
/// `(i, i-j)` and `(i-m+1, j)`, all in `X_{2m}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FamilyTrade {
    pub index: (usize, usize),
    pub ones: [(usize, usize); 2],
    pub zeros: [(usize, usize); 2],
}

impl FamilyTrade {
    fn new(m: usize, i: usize, j: usize) -> Self {
        let top = i + 1 - m;
        FamilyTrade { index: (i, j), ones: [(i, j), (top, i - j)], zeros: [(i, i - j), (top, j)] }
    }

    pub fn cells(&self) -> [(usize, usize); 4] {
        [self.ones[0], self.ones[1], self.zeros[0], self.zeros[1]]
    }

    /// The trade as a body of `X_{2m}` (or `Y_{2m}`, which agrees on these cells).
    pub fn trade(&self, m: usize) -> Result<Trade> {
        let mut t: Vec<CellTriple> = self.ones.iter().map(|&(r, c)| CellTriple::new(r, c, true)).collect();
        t.extend(self.zeros.iter().map(|&(r, c)| CellTriple::new(r, c, false)));
        Trade::from_triples(uniform(m), &t)
    }
}

/// The index set `I = {(i, j) : m < i ≤ 2m, 1 ≤ j < m-2, m ≤ i-j < 2m-1}` in
/// lexicographic order, with one trade per index.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TradeFamily {
    pub m: usize,
    pub trades: Vec<FamilyTrade>,
}

pub fn trade_family(m: usize) -> Result<TradeFamily> {
    if m < 4 {
        return Err(Error::OutOfRange(format!("the trade family needs m >= 4, got {m}")));
    }
    let mut trades = Vec::new();
    for i in m + 1..=2 * m {
        for j in 1..m - 2 {
            if (m..2 * m - 1).contains(&(i - j)) {
                trades.push(FamilyTrade::new(m, i, j));
            }
        }
    }
    trades.sort_by_key(|t| t.index);
    Ok(TradeFamily { m, trades })
}

impl TradeFamily {
    pub fn len(&self) -> usize {
        self.trades.len()
    }

    pub fn is_empty(&self) -> bool {
        self.trades.is_empty()
    }

    /// Checks by arithmetic alone that each trade sits in `X_{2m}` with the
    /// right values, that exactly `(i-m+1, i-j)` lies above the staircase, that
    /// no cell lies on the diagonal or superdiagonal, and that the trades are
    /// pairwise disjoint.
    pub fn check(&self) -> Result<()> {
        let m = self.m;
        let bad = |t: &FamilyTrade, why: &str| Err(Error::InvalidTrade(format!("T{:?}: {why}", t.index)));
        let mut seen = std::collections::HashSet::new();
        for t in &self.trades {
            let in_range = |&(r, c): &(usize, usize)| (1..=2 * m).contains(&r) && (1..=2 * m).contains(&c);
            if !t.cells().iter().all(in_range) {
                return bad(t, "cell out of range");
            }
            if !t.ones.iter().all(|&(r, c)| x_entry(m, r, c)) || t.zeros.iter().any(|&(r, c)| x_entry(m, r, c)) {
                return bad(t, "values disagree with X");
            }
            let above: Vec<_> = t.cells().into_iter().filter(|&(r, c)| r < c).collect();
            if above != [t.ones[1]] {
                return bad(t, "wrong cells above the walk");
            }
            if t.cells().iter().any(|&(r, c)| r == c || r + 1 == c) {
                return bad(t, "touches a diagonal block");
            }
            for cell in t.cells() {
                if !seen.insert(cell) {
                    return bad(t, "overlaps an earlier trade");
                }
            }
        }
        if self.len() != (m * (m + 1) / 2).saturating_sub(7) {
            return Err(Error::InvalidTrade(format!("family has {} trades", self.len())));
        }
        Ok(())
    }
}

/// A critical set of size `k` for `2m² - 5m + 15 ≤ k ≤ 3m² - 4m + 2`, `m ≥ 4`.
///
/// Sizes of the parity of `3m² - 4m + 2` come from `X_{2m}`, the others from
/// `Y_{2m}`; each applied trade lowers the size by two and keeps the walk.
pub fn spectrum_upper(m: usize, k: usize) -> Result<CertifiedCriticalSet> {
    let fam = trade_family(m)?;
    let top = 3 * m * m + 2 - 4 * m;
    let lo = top - 1 - 2 * fam.len();
    if k < lo || k > top {
        return Err(Error::OutOfRange(format!("k = {k} outside [{lo}, {top}] for m = {m}")));
    }
    let base = if (top - k) % 2 == 0 { critical_x(m)? } else { critical_y(m)? };
    let alpha = (base.size() - k) / 2;
    let mut matrix = base.matrix.clone();
    for t in &fam.trades[..alpha] {
        matrix = apply_trade(&matrix, &t.trade(m)?)?;
    }
    let cert = base.certificate.expect("constructed with a certificate");
    CertifiedCriticalSet::with_certificate(matrix, cert)
}

fn from_fixture(name: &str) -> Result<CertifiedCriticalSet> {
    let (m, c) = fixtures::load(name)?;
    let cert = search_exact_certificate(&m, &c)?.ok_or(Error::MissingCertificate)?;
    let mut out = CertifiedCriticalSet::new(m, c);
    out.certificate = Some(cert);
    Ok(out)
}

/// One certified critical set in `Λ_{2m}^m`.
pub fn spectrum_member(m: usize, k: usize) -> Result<CertifiedCriticalSet> {
    let top = 3 * m * m + 2 - 4 * m;
    if m == 0 || k < m * m || k > top {
        return Err(Error::OutOfRange(format!("k = {k} outside the spectrum for m = {m}")));
    }
    if k <= m * m + (m - 1).pow(2) {
        return build_m_k(m, k);
    }
    if k == top {
        return critical_x(m);
    }
    match (m, k) {
        (3, 14) => from_fixture("fig1"),
        (3, 15) => from_fixture("filly-left"),
        (3, 16) => critical_y(3),
        (4, 26) => from_fixture("filly-right"),
        _ => spectrum_upper(m, k),
    }
}

/// A critical set of every size `m² ≤ k ≤ 3m² - 4m + 2`, keyed by size.
pub fn spectrum(m: usize) -> Result<BTreeMap<usize, CertifiedCriticalSet>> {
    if m == 0 {
        return Err(Error::OutOfRange("m must be positive".into()));
    }
    let top = 3 * m * m + 2 - 4 * m;
    (m * m..=top).into_par_iter().map(|k| Ok((k, spectrum_member(m, k)?))).collect()
}

/// Disjoint critical sets `C1` (one 1 plus 0s) and `C2` (only 1s) of a member
/// of `Λ_{2m}^m`, with `|C1| + |C2| ≥ 3m² - 2m + 1`.
///
/// After reordering so that row 1 has its 1s in columns `1..=m` and column 1
/// has its 1s in rows `1..=m`, the rows and columns split as `{1}`, `2..=m`,
/// `m+1..=2m`. `C1` starts from `(1, 1)` and every 0 outside the first row
/// and column, then sheds 0s of the bottom-right block. `C2` starts from every 1 outside the first row and column and
/// sheds 1s of the top-left block.
pub fn sup_pair(m: &PartialMatrix) -> Result<(CertifiedCriticalSet, CertifiedCriticalSet)> {
    if !m.is_complete() {
        return Err(Error::NotComplete);
    }
    let n = m.rows();
    let half = n / 2;
    if n == 0 || n % 2 == 1 || *m.margins() != MarginSpec::uniform(n, half)? {
        return Err(Error::InvalidMargins("sup_pair needs a member of Λ_2m^m".into()));
    }
    let ones_first = |bits: Vec<bool>| -> Result<Permutation> {
        let mut order: Vec<usize> = (0..n).filter(|&k| bits[k]).collect();
        order.extend((0..n).filter(|&k| !bits[k]));
        Permutation::from_order(&order)
    };
    let cp = ones_first((1..=n).map(|j| m.get(1, j) == Entry::One).collect())?;
    let half_done = m.permute(&Permutation::identity(n), &cp)?;
    let rp = ones_first((1..=n).map(|i| half_done.get(i, 1) == Entry::One).collect())?;
    let norm = m.permute(&rp, &cp)?;

    let part = |k: usize| if k == 1 { 1 } else if k <= half { 2 } else { 3 };
    let mut d1 = vec![CellTriple::new(1, 1, true)];
    let mut d2 = Vec::new();
    let mut order1 = Vec::new();
    let mut order2 = Vec::new();
    for i in 1..=n {
        for j in 1..=n {
            let (pi, pj) = (part(i), part(j));
            if pi == 1 || pj == 1 {
                continue;
            }
            let one = norm.get(i, j) == Entry::One;
            if !one {
                d1.push(CellTriple::new(i, j, false));
                if (pi, pj) == (3, 3) {
                    order1.push((i, j));
                }
            }
            if one {
                d2.push(CellTriple::new(i, j, true));
                if (pi, pj) == (2, 2) {
                    order2.push((i, j));
                }
            }
        }
    }
    let back = |c: CertifiedCriticalSet| -> Result<CertifiedCriticalSet> {
        let cells = c.cells.permute(&rp.inverse(), &cp.inverse())?;
        let mut out = CertifiedCriticalSet::new(m.clone(), cells);
        if n <= 16 {
            out.certificate = search_exact_certificate(&out.matrix, &out.cells)?;
        }
        Ok(out)
    };
    let mut pair = Vec::with_capacity(2);
    for (d, order) in [(d1, order1), (d2, order2)] {
        let d = PartialMatrix::from_triples(norm.margins().clone(), &d)?;
        if !is_defining(&norm, &d)? {
            return Err(Error::NotDefining);
        }
        pair.push(back(minimize_to_critical(&norm, &d, Some(&order))?)?);
    }
    let c2 = pair.pop().expect("two sets");
    let c1 = pair.pop().expect("two sets");
    Ok((c1, c2))
}

/// `B_{2m}`: 1 iff `i` and `j` fall in the same half.
pub fn build_b(m: usize) -> Result<PartialMatrix> {
    if m == 0 {
        return Err(Error::OutOfRange("m must be positive".into()));
    }
    Ok(from_rule(m, |i, j| (i - 1) / m == (j - 1) / m))
}

/// The order `1, m+1, 2, m+2, …` as a permutation; applied to rows and
/// columns of `B_{2m}` it gives the checkerboard with 1s where `i + j` is even.
pub fn b_interleave(m: usize) -> Permutation {
    let order: Vec<usize> = (0..m).flat_map(|k| [k, m + k]).collect();
    Permutation::from_order(&order).expect("interleaving is a bijection")
}

/// Row runs `s_1..s_L` and column runs `t_1..t_L'` of a walk on `B_{2m}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct CompositionPair {
    pub s: Vec<usize>,
    pub t: Vec<usize>,
}

fn alternating_sums(v: &[usize]) -> (usize, usize) {
    let odd = v.iter().step_by(2).sum();
    let even = v.iter().skip(1).step_by(2).sum();
    (odd, even)
}

impl CompositionPair {
    /// A pair with positive runs, `L' ∈ {L, L+1}`, and odd- and even-indexed
    /// runs each summing to `m`.
    pub fn new(m: usize, s: Vec<usize>, t: Vec<usize>) -> Result<Self> {
        let c = CompositionPair { s, t };
        if !c.satisfies(m, false) {
            return Err(Error::InvalidWalk(format!("{c:?} is not a composition pair for m = {m}")));
        }
        Ok(c)
    }

    /// All runs equal to 1.
    pub fn unit(m: usize) -> Self {
        CompositionPair { s: vec![1; 2 * m], t: vec![1; 2 * m] }
    }

    /// `relaxed` admits `s_L = 0` and `t_1 = 0`.
    pub fn satisfies(&self, m: usize, relaxed: bool) -> bool {
        let (l, lp) = (self.s.len(), self.t.len());
        if l == 0 || (lp != l && lp != l + 1) {
            return false;
        }
        let zero_ok = |v: &[usize], k: usize| relaxed && k < v.len() && v[k] == 0;
        let s_ok = self.s.iter().enumerate().all(|(k, &x)| x > 0 || (k == l - 1 && zero_ok(&self.s, k)));
        let t_ok = self.t.iter().enumerate().all(|(k, &x)| x > 0 || (k == 0 && zero_ok(&self.t, k)));
        s_ok && t_ok && alternating_sums(&self.s) == (m, m) && alternating_sums(&self.t) == (m, m)
    }
}

/// `Σ_{i>j, i+j odd} s_i t_j + Σ_{i<j, i+j even} s_i t_j` over 1-based indices.
pub fn b_critical_size(c: &CompositionPair) -> usize {
    let mut total = 0;
    for (i0, &s) in c.s.iter().enumerate() {
        for (j0, &t) in c.t.iter().enumerate() {
            let odd = (i0 + j0) % 2 == 1;
            if (i0 > j0 && odd) || (i0 < j0 && !odd) {
                total += s * t;
            }
        }
    }
    total
}

/// The certificate realising a pair on `B_{2m}`: odd row runs draw rows from
/// the top half and even ones from the bottom, and likewise for columns.
pub fn b_certificate(m: usize, c: &CompositionPair) -> Result<WalkCertificate> {
    if !c.satisfies(m, false) {
        return Err(Error::InvalidWalk(format!("{c:?} is not a composition pair for m = {m}")));
    }
    let order = |runs: &[usize]| -> Vec<usize> {
        let mut next = [0, m];
        let mut out = Vec::with_capacity(2 * m);
        for (k, &len) in runs.iter().enumerate() {
            let side = k % 2;
            out.extend(next[side]..next[side] + len);
            next[side] += len;
        }
        out
    };
    let walk = BlockStructure::from_runs(c.s.clone(), c.t.clone())?.walk();
    WalkCertificate::new(Permutation::from_order(&order(&c.s))?, Permutation::from_order(&order(&c.t))?, walk)
}

/// Sequences of length `len` over `0..=2m` whose odd and even positions each
/// sum to `m`; `zero_at` names the one position that may be 0.
fn compositions(m: usize, zero_at: Option<fn(usize) -> usize>) -> Vec<Vec<usize>> {
    fn rec(m: usize, len: usize, zero: Option<usize>, cur: &mut Vec<usize>, sums: [usize; 2], out: &mut Vec<Vec<usize>>) {
        let k = cur.len();
        if k == len {
            if sums == [m, m] {
                out.push(cur.clone());
            }
            return;
        }
        let side = k % 2;
        let min = if zero == Some(k) { 0 } else { 1 };
        for x in min..=m - sums[side] {
            cur.push(x);
            let mut next = sums;
            next[side] += x;
            rec(m, len, zero, cur, next, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    for len in 2..=2 * m + 1 {
        rec(m, len, zero_at.map(|f| f(len)), &mut Vec::new(), [0, 0], &mut out);
    }
    out
}

/// The largest size over all composition pairs, with a witness and the
/// number of pairs examined.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct BMaximum {
    pub size: usize,
    pub witness: CompositionPair,
    pub pairs_checked: usize,
}

fn b_scan(ss: &[Vec<usize>], ts: &[Vec<usize>]) -> BMaximum {
    let mut by_len: BTreeMap<usize, Vec<&Vec<usize>>> = BTreeMap::new();
    for t in ts {
        by_len.entry(t.len()).or_default().push(t);
    }
    let (size, witness, pairs_checked) = ss
        .par_iter()
        .map(|s| {
            let mut best: Option<(usize, CompositionPair)> = None;
            let mut count = 0;
            for lp in [s.len(), s.len() + 1] {
                for t in by_len.get(&lp).into_iter().flatten() {
                    let c = CompositionPair { s: s.clone(), t: (*t).clone() };
                    let v = b_critical_size(&c);
                    count += 1;
                    if best.as_ref().is_none_or(|(b, w)| v > *b || (v == *b && c.t < w.t)) {
                        best = Some((v, c));
                    }
                }
            }
            (best, count)
        })
        .collect::<Vec<_>>()
        .into_iter()
        .fold((0, None, 0), |(bv, bw, n), (best, count)| match best {
            Some((v, c)) if bw.is_none() || v > bv => (v, Some(c), n + count),
            _ => (bv, bw, n + count),
        });
    BMaximum { size, witness: witness.expect("unit pair always qualifies"), pairs_checked }
}

/// Exhaustive maximum of [`b_critical_size`] over composition pairs.
///
/// This is `2m² - m` (the unit pair) for `m ≤ 3` only; from `m = 4` on,
/// pairs such as `s = (1, m-1, 1, 1, m-2)`, `t = (m-2, 1, 1, m-1, 1)` do better.
pub fn b_max_critical(m: usize) -> Result<BMaximum> {
    if m == 0 || m > 7 {
        return Err(Error::GuardExceeded(format!("composition search needs 1 <= m <= 7, got {m}")));
    }
    let all = compositions(m, None);
    Ok(b_scan(&all, &all))
}

/// As [`b_max_critical`] but also admitting `s_L = 0` and `t_1 = 0`. Relaxed
/// pairs need not come from a walk, so this is only an upper bound (16 for
/// `m = 3` against a true 15). A tie with the strict maximum reports the
/// strict witness.
pub fn b_max_critical_relaxed(m: usize) -> Result<BMaximum> {
    let strict = b_max_critical(m)?;
    let ss = compositions(m, Some(|len| len - 1));
    let ts = compositions(m, Some(|_| 0));
    let relaxed = b_scan(&ss, &ts);
    if relaxed.size == strict.size {
        Ok(BMaximum { pairs_checked: relaxed.pairs_checked, ..strict })
    } else {
        Ok(relaxed)
    }
}
