//! Defining sets, critical sets, greedy minimisation and complement sets.
//!
//! Defining sets are closed upwards: if `D ⊆ D'` then every completion of
//! `D'` is a completion of `D`, so `D'` has at most as many completions. A
//! defining set is therefore critical as soon as no single cell can be
//! dropped, and minimality is tested with single-cell removals only.

use serde::{Deserialize, Serialize};

use crate::completion::{count_completions, CompletionBudget};
use crate::error::{Error, Result};
use crate::matrix::{CellTriple, Entry, PartialMatrix};
use crate::trades::{find_cycle_through, Cycle};
use crate::walks::{block_structure, complement_walk, east_form, WalkCertificate};

fn check_pair(m: &PartialMatrix, d: &PartialMatrix) -> Result<()> {
    if !m.is_complete() {
        return Err(Error::NotComplete);
    }
    if !d.is_subset_of(m)? {
        return Err(Error::NotSubset);
    }
    Ok(())
}

fn unique(d: &PartialMatrix) -> Result<bool> {
    Ok(count_completions(d, CompletionBudget::new(2))? == 1)
}

/// True iff `m` is the only completion of `d`.
pub fn is_defining(m: &PartialMatrix, d: &PartialMatrix) -> Result<bool> {
    check_pair(m, d)?;
    unique(d)
}

/// True iff `d` is defining and every single-cell removal is not.
pub fn is_critical(m: &PartialMatrix, d: &PartialMatrix) -> Result<bool> {
    check_pair(m, d)?;
    if !unique(d)? {
        return Ok(false);
    }
    let mut probe = d.clone();
    for t in d.triples() {
        probe.set(t.row, t.col, Entry::Empty);
        let still = unique(&probe)?;
        probe.set(t.row, t.col, Entry::from_bit(t.value));
        if still {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Drops cells of `d` in `order` whenever the rest stays defining.
///
/// `order` defaults to row-major over the cells of `d`; cells of the order
/// not in `d` are ignored. The result is critical.
pub fn minimize_to_critical(
    m: &PartialMatrix,
    d: &PartialMatrix,
    order: Option<&[(usize, usize)]>,
) -> Result<CertifiedCriticalSet> {
    check_pair(m, d)?;
    if !unique(d)? {
        return Err(Error::NotDefining);
    }
    let default: Vec<(usize, usize)>;
    let order = match order {
        Some(o) => o,
        None => {
            default = d.triples().iter().map(|t| (t.row, t.col)).collect();
            &default
        }
    };
    let mut cur = d.clone();
    for &(i, j) in order {
        if i == 0 || j == 0 || i > m.rows() || j > m.cols() {
            return Err(Error::OutOfBounds { row: i, col: j });
        }
        let e = cur.get(i, j);
        if !e.is_filled() {
            continue;
        }
        cur.set(i, j, Entry::Empty);
        if !unique(&cur)? {
            cur.set(i, j, e);
        }
    }
    // cells outside a custom order were never probed
    let probed: std::collections::HashSet<(usize, usize)> = order.iter().copied().collect();
    for t in cur.triples() {
        if !probed.contains(&(t.row, t.col)) {
            cur.set(t.row, t.col, Entry::Empty);
            if !unique(&cur)? {
                cur.set(t.row, t.col, Entry::from_bit(t.value));
            }
        }
    }
    Ok(CertifiedCriticalSet::new(m.clone(), cur))
}

/// A critical set of a complete matrix with optional certificates.
///
/// With a walk certificate whose induced set lies inside `cells`, the set is
/// defining. With a cycle for every cell meeting `cells` only there, removing
/// any cell admits a second completion. Together these certify criticality
/// without completion counting.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct CertifiedCriticalSet {
    pub matrix: PartialMatrix,
    pub cells: PartialMatrix,
    pub certificate: Option<WalkCertificate>,
    #[serde(skip)]
    pub per_cell_cycles: Option<Vec<Cycle>>,
}

#[derive(Deserialize)]
#[serde(rename_all = "camelCase")]
struct CertifiedJson {
    matrix: PartialMatrix,
    cells: PartialMatrix,
    certificate: Option<serde_json::Value>,
}

impl CertifiedCriticalSet {
    pub fn new(matrix: PartialMatrix, cells: PartialMatrix) -> Self {
        CertifiedCriticalSet { matrix, cells, certificate: None, per_cell_cycles: None }
    }

    pub fn with_certificate(matrix: PartialMatrix, certificate: WalkCertificate) -> Result<Self> {
        let cells = certificate.induced_set(&matrix)?;
        Ok(CertifiedCriticalSet { matrix, cells, certificate: Some(certificate), per_cell_cycles: None })
    }

    pub fn size(&self) -> usize {
        self.cells.size()
    }

    /// Finds a cycle through each cell and stores them; `false` if some cell has none.
    pub fn attach_cycles(&mut self) -> Result<bool> {
        let mut out = Vec::with_capacity(self.size());
        for t in self.cells.triples() {
            match find_cycle_through(&self.matrix, &self.cells, t.row, t.col)? {
                Some(c) => out.push(c),
                None => return Ok(false),
            }
        }
        self.per_cell_cycles = Some(out);
        Ok(true)
    }

    /// Definingness from the walk certificate.
    pub fn certificate_defines(&self) -> Result<bool> {
        let cert = self.certificate.as_ref().ok_or(Error::MissingCertificate)?;
        Ok(cert.induced_set(&self.matrix)?.is_subset_of(&self.cells)?)
    }

    /// Minimality from the stored cycles: one per cell, each meeting the set only there.
    pub fn cycles_certify_minimality(&self) -> bool {
        let Some(cycles) = &self.per_cell_cycles else { return false };
        let cells = self.cells.triples();
        cells.len() == cycles.len()
            && cells.iter().zip(cycles).all(|(t, cy)| {
                cy.trade().body().is_subset_of(&self.matrix).unwrap_or(false)
                    && cy.circuit().iter().filter(|c| self.cells.get(c.row, c.col).is_filled()).eq([t])
            })
    }

    /// Criticality via the walk certificate and per-cell cycles, attaching cycles if needed.
    pub fn verify_by_certificates(&mut self) -> Result<bool> {
        if !self.cells.is_subset_of(&self.matrix)? || !self.certificate_defines()? {
            return Ok(false);
        }
        if self.per_cell_cycles.is_none() && !self.attach_cycles()? {
            return Ok(false);
        }
        Ok(self.cycles_certify_minimality())
    }

    /// Criticality via completion counting.
    pub fn verify_by_counting(&self) -> Result<bool> {
        is_critical(&self.matrix, &self.cells)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("plain data")
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let j: CertifiedJson = serde_json::from_str(s).map_err(|e| Error::Json(e.to_string()))?;
        let certificate = match j.certificate {
            Some(v) => Some(WalkCertificate::from_json(&v.to_string())?),
            None => None,
        };
        Ok(CertifiedCriticalSet { matrix: j.matrix, cells: j.cells, certificate, per_cell_cycles: None })
    }
}

/// A defining set disjoint from a certified critical set, from the complement walk.
///
/// In the certificate's East-first coordinates, it holds the 1s below and
/// the 0s above the walk that puts block `L_{i,j}` below iff `i > j`. Its size
/// is `|M| - |C| - Σ|L_{i,i}|`.
pub fn complement_defining(c: &CertifiedCriticalSet) -> Result<PartialMatrix> {
    let cert = c.certificate.as_ref().ok_or(Error::MissingCertificate)?;
    let m = &c.matrix;
    let permuted = m.permute(&cert.row_perm, &cert.col_perm)?;
    let ef = east_form(&permuted, &cert.walk);
    let bs = block_structure(&ef.walk)?;
    let wp = complement_walk(&bs);
    let (rows, cols) = (ef.matrix.rows(), ef.matrix.cols());
    let rinv = cert.row_perm.inverse();
    let cinv = cert.col_perm.inverse();
    let mut triples = Vec::new();
    for r in 1..=rows {
        for c in 1..=cols {
            // the flipped form swaps values, so test against the permuted original
            let (pr, pc) = if ef.flipped { (c, r) } else { (r, c) };
            let above = wp.cell_above(r, c);
            let value = permuted.get(pr, pc) == Entry::One;
            let one_in_form = ef.matrix.get(r, c) == Entry::One;
            if one_in_form != above {
                triples.push(CellTriple::new(rinv.apply(pr - 1) + 1, cinv.apply(pc - 1) + 1, value));
            }
        }
    }
    PartialMatrix::from_triples(m.margins().clone(), &triples)
}

/// `M \ C` as a partial matrix.
pub fn set_complement(m: &PartialMatrix, c: &PartialMatrix) -> Result<PartialMatrix> {
    check_pair(m, c)?;
    m.minus(c)
}
