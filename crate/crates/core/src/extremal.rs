//! Class-level extremes: `scs`, `lcs`, `inf` and `sup` of small classes.
//!
//! Over a class `A(R, S)`: `scs` is the least and `inf` the greatest
//! smallest-critical-set size of a member, `lcs` is the greatest and `sup` the
//! least largest-critical-set size. All four are invariant under row and
//! column permutations, under transposition when it preserves the margins,
//! and under complementation when it preserves them.

use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::completion::{count_completions, for_each_completion_raw, CompletionBudget};
use crate::defsets::is_critical;
use crate::error::{Error, Result};
use crate::matrix::{ClassSpec, Entry, MarginSpec, PartialMatrix};
use crate::walks::{largest_certificate, smallest_certificate, WalkCertificate};

const ENUM_LIMIT: usize = 6;
const LCS_LIMIT: usize = 4;

fn class_guard(margins: &MarginSpec, max: usize, what: &str) -> Result<()> {
    if margins.rows() > max || margins.cols() > max {
        return Err(Error::GuardExceeded(format!(
            "{what} is limited to {max}x{max}, got {}x{}",
            margins.rows(),
            margins.cols()
        )));
    }
    Ok(())
}

/// Number of members of the class.
pub fn class_size(spec: &ClassSpec) -> Result<u64> {
    count_completions(&PartialMatrix::empty(spec.margins()), CompletionBudget::unlimited())
}

/// Every member exactly once, in lexicographic order (row-major, 0 before 1).
pub fn enumerate_class(spec: &ClassSpec) -> Result<Vec<PartialMatrix>> {
    let margins = spec.margins();
    class_guard(&margins, ENUM_LIMIT, "class enumeration")?;
    let mut out = Vec::new();
    let empty = PartialMatrix::empty(margins.clone());
    for_each_completion_raw(&empty, CompletionBudget::unlimited(), |bits| {
        let cells = bits.iter().map(|&b| Entry::from_bit(b == 1)).collect();
        out.push(PartialMatrix::from_entries(margins.clone(), cells).expect("completion fits its margins"));
    })?;
    Ok(out)
}

fn row_masks(m: &PartialMatrix) -> Vec<u8> {
    (1..=m.rows())
        .map(|i| (1..=m.cols()).fold(0u8, |acc, j| acc | u8::from(m.get(i, j) == Entry::One) << (j - 1)))
        .collect()
}

fn from_masks(margins: &MarginSpec, rows: &[u8]) -> PartialMatrix {
    let cols = margins.cols();
    let cells = rows.iter().flat_map(|&r| (0..cols).map(move |c| Entry::from_bit(r >> c & 1 == 1))).collect();
    PartialMatrix::from_entries(margins.clone(), cells).expect("masks fit the margins")
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    let mut p: Vec<usize> = (0..n).collect();
    let mut out = vec![p.clone()];
    // lexicographic successor
    loop {
        let Some(i) = (1..n).rev().find(|&i| p[i - 1] < p[i]) else { return out };
        let j = (i..n).rev().find(|&j| p[j] > p[i - 1]).expect("a larger element follows");
        p.swap(i - 1, j);
        p[i..].reverse();
        out.push(p.clone());
    }
}

/// Per column permutation, the image of every row mask.
struct ColumnTables {
    tables: Vec<Vec<u8>>,
}

impl ColumnTables {
    fn new(cols: usize) -> Self {
        let tables = permutations(cols)
            .into_iter()
            .map(|p| {
                (0..1usize << cols)
                    .map(|mask| (0..cols).fold(0u8, |acc, c| acc | ((mask >> c & 1) as u8) << p[c]))
                    .collect()
            })
            .collect();
        ColumnTables { tables }
    }

    /// Least sorted row list over all column permutations.
    fn least(&self, rows: &[u8]) -> Vec<u8> {
        let mut best: Option<Vec<u8>> = None;
        let mut cur = vec![0u8; rows.len()];
        for t in &self.tables {
            for (dst, &r) in cur.iter_mut().zip(rows) {
                *dst = t[r as usize];
            }
            cur.sort_unstable();
            if best.as_ref().is_none_or(|b| cur < *b) {
                best = Some(cur.clone());
            }
        }
        best.unwrap_or_default()
    }
}

/// The symmetry images to minimise over: the matrix itself, its transpose and
/// its complement whenever those keep the margins.
fn symmetric_images(m: &PartialMatrix) -> Vec<PartialMatrix> {
    let mut out = vec![m.clone()];
    let t = m.transpose();
    if t.margins() == m.margins() {
        out.push(t);
    }
    let c = m.complement();
    if c.margins() == m.margins() {
        let ct = c.transpose();
        out.push(c);
        if ct.margins() == m.margins() {
            out.push(ct);
        }
    }
    out
}

fn canonical_with(tables: &ColumnTables, m: &PartialMatrix) -> Vec<u8> {
    symmetric_images(m).iter().map(|img| tables.least(&row_masks(img))).min().expect("at least the identity")
}

/// The least member of the orbit of `m` under row and column permutations,
/// plus transpose and complement when they preserve the margins.
///
/// Orbit members share every statistic in this module. Limited to 6x6.
pub fn canonical_form(m: &PartialMatrix) -> Result<PartialMatrix> {
    if !m.is_complete() {
        return Err(Error::NotComplete);
    }
    class_guard(m.margins(), ENUM_LIMIT, "canonical form")?;
    let tables = ColumnTables::new(m.cols());
    Ok(from_masks(m.margins(), &canonical_with(&tables, m)))
}

/// One canonical representative per orbit of `Λ_n^x`, sorted.
///
/// Members with nondecreasing row masks are enumerated directly (every orbit
/// has one) and then canonicalised.
pub fn enumerate_reduced(spec: &ClassSpec) -> Result<Vec<PartialMatrix>> {
    let ClassSpec::Uniform { n, x } = *spec else {
        return Err(Error::OutOfRange("reduced enumeration needs a uniform class".into()));
    };
    let margins = spec.margins();
    class_guard(&margins, ENUM_LIMIT, "class enumeration")?;
    let masks: Vec<u8> = (0..1u16 << n).filter(|m| m.count_ones() as usize == x).map(|m| m as u8).collect();
    let mut sorted_members = Vec::new();
    let mut rows = Vec::with_capacity(n);
    let mut col = vec![0usize; n];
    fn rec(n: usize, x: usize, masks: &[u8], start: usize, rows: &mut Vec<u8>, col: &mut [usize], out: &mut Vec<Vec<u8>>) {
        let left = n - rows.len();
        if left == 0 {
            out.push(rows.clone());
            return;
        }
        for (k, &m) in masks.iter().enumerate().skip(start) {
            let fits = (0..n).all(|c| {
                let v = col[c] + usize::from(m >> c & 1);
                v <= x && v + left - 1 >= x
            });
            if !fits {
                continue;
            }
            (0..n).for_each(|c| col[c] += usize::from(m >> c & 1));
            rows.push(m);
            rec(n, x, masks, k, rows, col, out);
            rows.pop();
            (0..n).for_each(|c| col[c] -= usize::from(m >> c & 1));
        }
    }
    rec(n, x, &masks, 0, &mut rows, &mut col, &mut sorted_members);
    let tables = ColumnTables::new(n);
    let mut reps: Vec<Vec<u8>> =
        sorted_members.par_iter().map(|r| canonical_with(&tables, &from_masks(&margins, r))).collect();
    reps.sort_unstable();
    reps.dedup();
    Ok(reps.iter().map(|r| from_masks(&margins, r)).collect())
}

/// A random member of `Λ_n^x`: a circulant start followed by random
/// intercalate swaps, reproducible from `seed`.
pub fn random_member(n: usize, x: usize, seed: u64) -> Result<PartialMatrix> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    random_member_with(n, x, 50 * n * n, &mut rng)
}

/// As [`random_member`] with an explicit swap count and generator.
pub fn random_member_with<R: Rng>(n: usize, x: usize, swaps: usize, rng: &mut R) -> Result<PartialMatrix> {
    let margins = MarginSpec::uniform(n, x)?;
    let mut bits: Vec<bool> = (0..n * n).map(|k| (k % n + n - k / n) % n < x).collect();
    if n >= 2 {
        for _ in 0..swaps {
            let (r1, r2) = (rng.gen_range(0..n), rng.gen_range(0..n));
            let (c1, c2) = (rng.gen_range(0..n), rng.gen_range(0..n));
            let (a, b, c, d) = (bits[r1 * n + c1], bits[r1 * n + c2], bits[r2 * n + c1], bits[r2 * n + c2]);
            if r1 != r2 && c1 != c2 && a == d && b == c && a != b {
                for k in [r1 * n + c1, r1 * n + c2, r2 * n + c1, r2 * n + c2] {
                    bits[k] = !bits[k];
                }
            }
        }
    }
    PartialMatrix::from_entries(margins, bits.into_iter().map(Entry::from_bit).collect())
}

/// A member of the class with one of its critical sets.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Witness {
    pub matrix: PartialMatrix,
    pub set: PartialMatrix,
    pub certificate: WalkCertificate,
}

impl Witness {
    fn new(matrix: &PartialMatrix, certificate: WalkCertificate) -> Result<Self> {
        let set = certificate.induced_set(matrix)?;
        Ok(Witness { matrix: matrix.clone(), set, certificate })
    }

    pub fn size(&self) -> usize {
        self.set.size()
    }

    /// Criticality by completion counting plus the certificate's induced set.
    pub fn verify(&self) -> Result<bool> {
        Ok(self.certificate.induced_set(&self.matrix)? == self.set && is_critical(&self.matrix, &self.set)?)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct Witnesses {
    pub scs: Witness,
    pub inf: Witness,
    pub lcs: Option<Witness>,
    pub sup: Option<Witness>,
}

/// Class statistics with a witness for each. `lcs` and `sup` are optional so
/// that cheaper scans can omit them; both report entry points fill them.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct ExtremalReport {
    pub row_sums: Vec<usize>,
    pub col_sums: Vec<usize>,
    pub scs: usize,
    pub inf: usize,
    pub lcs: Option<usize>,
    pub sup: Option<usize>,
    pub witnesses: Witnesses,
    pub matrices_examined: usize,
    pub class_size: u64,
    pub reduced: bool,
}

impl ExtremalReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("plain data")
    }

    /// Checks the ordering invariants and re-verifies every witness.
    pub fn verify(&self) -> Result<bool> {
        let mut ok = self.scs <= self.inf
            && self.witnesses.scs.size() == self.scs
            && self.witnesses.inf.size() == self.inf;
        if let (Some(lcs), Some(sup)) = (self.lcs, self.sup) {
            ok &= sup <= lcs && self.scs <= lcs;
        }
        let all = [Some(&self.witnesses.scs), Some(&self.witnesses.inf), self.witnesses.lcs.as_ref(), self.witnesses.sup.as_ref()];
        for w in all.into_iter().flatten() {
            ok = ok && w.verify()?;
        }
        Ok(ok)
    }
}

impl fmt::Display for ExtremalReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let opt = |v: Option<usize>| v.map_or("-".to_string(), |v| v.to_string());
        writeln!(f, "class     R={:?} S={:?}", self.row_sums, self.col_sums)?;
        writeln!(f, "members   {}", self.class_size)?;
        writeln!(f, "examined  {}{}", self.matrices_examined, if self.reduced { " (orbit representatives)" } else { "" })?;
        writeln!(f, "scs       {}", self.scs)?;
        writeln!(f, "inf       {}", self.inf)?;
        writeln!(f, "lcs       {}", opt(self.lcs))?;
        write!(f, "sup       {}", opt(self.sup))
    }
}

struct Stats {
    small: (usize, WalkCertificate),
    large: Option<(usize, WalkCertificate)>,
}

fn report_over(spec: &ClassSpec, members: Vec<PartialMatrix>, with_lcs: bool, reduced: bool) -> Result<ExtremalReport> {
    let stats: Vec<Stats> = members
        .par_iter()
        .map(|m| {
            Ok(Stats {
                small: smallest_certificate(m)?,
                large: if with_lcs { Some(largest_certificate(m)?) } else { None },
            })
        })
        .collect::<Result<_>>()?;
    if stats.is_empty() {
        return Err(Error::InvalidMargins("the class is empty".into()));
    }
    // first index wins ties, so the report does not depend on scheduling
    let pick = |key: &dyn Fn(&Stats) -> usize, largest: bool| -> usize {
        let mut best = 0;
        for (k, s) in stats.iter().enumerate() {
            let (v, b) = (key(s), key(&stats[best]));
            if (largest && v > b) || (!largest && v < b) {
                best = k;
            }
        }
        best
    };
    let small = |s: &Stats| s.small.0;
    let large = |s: &Stats| s.large.as_ref().map_or(0, |l| l.0);
    let (i_scs, i_inf) = (pick(&small, false), pick(&small, true));
    let wit_small = |k: usize| Witness::new(&members[k], stats[k].small.1.clone());
    let wit_large = |k: usize| Witness::new(&members[k], stats[k].large.clone().expect("lcs computed").1);
    let (lcs, sup, w_lcs, w_sup) = if with_lcs {
        let (i_lcs, i_sup) = (pick(&large, true), pick(&large, false));
        (Some(large(&stats[i_lcs])), Some(large(&stats[i_sup])), Some(wit_large(i_lcs)?), Some(wit_large(i_sup)?))
    } else {
        (None, None, None, None)
    };
    let margins = spec.margins();
    Ok(ExtremalReport {
        row_sums: margins.row_sums().to_vec(),
        col_sums: margins.col_sums().to_vec(),
        scs: small(&stats[i_scs]),
        inf: small(&stats[i_inf]),
        lcs,
        sup,
        witnesses: Witnesses { scs: wit_small(i_scs)?, inf: wit_small(i_inf)?, lcs: w_lcs, sup: w_sup },
        matrices_examined: members.len(),
        class_size: class_size(spec)?,
        reduced,
    })
}

/// Exact `scs`, `inf`, `lcs` and `sup` over every member; classes up to 4x4.
pub fn class_report(spec: &ClassSpec) -> Result<ExtremalReport> {
    class_guard(&spec.margins(), LCS_LIMIT, "a full class report")?;
    report_over(spec, enumerate_class(spec)?, true, false)
}

/// Exact statistics over orbit representatives of `Λ_n^x`, `n ≤ 6`.
pub fn class_report_reduced(spec: &ClassSpec) -> Result<ExtremalReport> {
    report_over(spec, enumerate_reduced(spec)?, true, true)
}
