//! Independent oracles for the integration tests. Nothing here calls the
//! library's search code; matrices are plain row-major bit grids.

#![allow(dead_code)]

use std::collections::HashMap;

use critset::cellset::CellSet;
use critset::matrix::{Entry, MarginSpec, PartialMatrix};

/// Every `n x n` grid with all line sums `x`, by filtering all `2^(n²)` grids.
pub fn brute_members(n: usize, x: usize) -> Vec<u64> {
    assert!(n * n <= 20, "brute force is for tiny grids");
    (0u64..1 << (n * n))
        .filter(|g| {
            let bit = |r: usize, c: usize| (g >> (r * n + c) & 1) as usize;
            (0..n).all(|r| (0..n).map(|c| bit(r, c)).sum::<usize>() == x)
                && (0..n).all(|c| (0..n).map(|r| bit(r, c)).sum::<usize>() == x)
        })
        .collect()
}

/// `|Λ_n^x|` by dynamic programming over remaining column demands.
pub fn dp_count(n: usize, x: usize) -> u64 {
    fn go(rows_left: usize, demand: Vec<usize>, n: usize, x: usize, memo: &mut HashMap<Vec<usize>, u64>) -> u64 {
        if rows_left == 0 {
            return u64::from(demand.iter().all(|&d| d == 0));
        }
        if demand.iter().any(|&d| d > rows_left) {
            return 0;
        }
        if let Some(&v) = memo.get(&demand) {
            return v;
        }
        let mut total = 0;
        for row in 0u32..1 << n {
            if row.count_ones() as usize != x || (0..n).any(|c| row >> c & 1 == 1 && demand[c] == 0) {
                continue;
            }
            let next: Vec<usize> = (0..n).map(|c| demand[c] - (row >> c & 1) as usize).collect();
            total += go(rows_left - 1, next, n, x, memo);
        }
        memo.insert(demand, total);
        total
    }
    go(n, vec![x; n], n, x, &mut HashMap::new())
}

pub fn grid_to_matrix(g: u64, n: usize, x: usize) -> PartialMatrix {
    let cells = (0..n * n).map(|k| Entry::from_bit(g >> k & 1 == 1)).collect();
    PartialMatrix::from_entries(MarginSpec::uniform(n, x).unwrap(), cells).unwrap()
}

pub fn matrix_to_grid(m: &PartialMatrix) -> u64 {
    let n = m.cols();
    m.triples().iter().filter(|t| t.value).fold(0, |acc, t| acc | 1 << ((t.row - 1) * n + t.col - 1))
}

/// Masks of the cells that must meet any defining set of `m`: one per other
/// member, the cells where it disagrees with `m`.
pub fn disagreement_masks(m: u64, members: &[u64]) -> Vec<u64> {
    members.iter().filter(|&&o| o != m).map(|&o| o ^ m).collect()
}

/// `D` (a cell mask) is defining iff it meets every disagreement mask.
pub fn hits_all(d: u64, masks: &[u64]) -> bool {
    masks.iter().all(|&k| d & k != 0)
}

/// Smallest defining set size by scanning subsets in order of size.
pub fn subset_scs(m: u64, members: &[u64], cells: usize) -> usize {
    let masks = disagreement_masks(m, members);
    for size in 0..=cells {
        if subsets_of_size(cells, size).any(|d| hits_all(d, &masks)) {
            return size;
        }
    }
    unreachable!("the full grid is defining")
}

/// Every critical set, as cell masks: hitting sets none of whose one-cell
/// removals still hit.
pub fn subset_critical_sets(m: u64, members: &[u64], cells: usize) -> Vec<u64> {
    let masks = disagreement_masks(m, members);
    let mut out: Vec<u64> = (0u64..1 << cells)
        .filter(|&d| hits_all(d, &masks) && (0..cells).filter(|&k| d >> k & 1 == 1).all(|k| !hits_all(d & !(1 << k), &masks)))
        .collect();
    out.sort();
    out
}

/// Subsets of `0..cells` with `size` elements (Gosper's hack).
pub fn subsets_of_size(cells: usize, size: usize) -> impl Iterator<Item = u64> {
    let limit = 1u64 << cells;
    let first = if size == 0 { 0 } else { (1u64 << size) - 1 };
    let mut cur = Some(first);
    std::iter::from_fn(move || {
        let v = cur?;
        if v >= limit || (size == 0 && v != 0) {
            return None;
        }
        cur = if size == 0 {
            None
        } else {
            let c = v & v.wrapping_neg();
            let r = v + c;
            Some((((r ^ v) >> 2) / c) | r)
        };
        Some(v)
    })
}

/// Cell masks of all nonempty trades of `m` with 0 or 2 cells per line:
/// subsets where each touched line has exactly one 1 and one 0 of `m`.
pub fn brute_balanced_trades(m: u64, n: usize) -> Vec<u64> {
    assert!(n <= 4);
    (1u64..1 << (n * n))
        .filter(|&t| {
            let line_ok = |cells: Vec<usize>| {
                let inside: Vec<usize> = cells.into_iter().filter(|&k| t >> k & 1 == 1).collect();
                inside.is_empty() || (inside.len() == 2 && (m >> inside[0] & 1) != (m >> inside[1] & 1))
            };
            (0..n).all(|r| line_ok((0..n).map(|c| r * n + c).collect()))
                && (0..n).all(|c| line_ok((0..n).map(|r| r * n + c).collect()))
        })
        .collect()
}

pub fn cellset_to_grid(s: CellSet) -> u64 {
    s.0 as u64
}
