//! Fixed-width bitset over the cells of a small grid.
//!
//! Cell `(r, c)` (0-based) of a grid with `cols` columns has index `r * cols + c`.
//! Grids with more than 128 cells are rejected by the callers that need a mask.

use std::fmt;

pub const MAX_CELLS: usize = 128;

#[derive(Clone, Copy, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CellSet(pub u128);

impl CellSet {
    pub const EMPTY: CellSet = CellSet(0);

    pub fn full(n: usize) -> Self {
        if n >= 128 {
            CellSet(u128::MAX)
        } else {
            CellSet((1u128 << n) - 1)
        }
    }

    #[inline]
    pub fn contains(self, idx: usize) -> bool {
        self.0 >> idx & 1 == 1
    }

    #[inline]
    pub fn insert(&mut self, idx: usize) {
        self.0 |= 1u128 << idx;
    }

    #[inline]
    pub fn remove(&mut self, idx: usize) {
        self.0 &= !(1u128 << idx);
    }

    #[inline]
    pub fn with(self, idx: usize) -> Self {
        CellSet(self.0 | 1u128 << idx)
    }

    #[inline]
    pub fn without(self, idx: usize) -> Self {
        CellSet(self.0 & !(1u128 << idx))
    }

    #[inline]
    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    #[inline]
    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    #[inline]
    pub fn is_subset(self, other: CellSet) -> bool {
        self.0 & !other.0 == 0
    }

    #[inline]
    pub fn intersects(self, other: CellSet) -> bool {
        self.0 & other.0 != 0
    }

    pub fn union(self, other: CellSet) -> Self {
        CellSet(self.0 | other.0)
    }

    pub fn intersection(self, other: CellSet) -> Self {
        CellSet(self.0 & other.0)
    }

    pub fn difference(self, other: CellSet) -> Self {
        CellSet(self.0 & !other.0)
    }

    pub fn iter(self) -> impl Iterator<Item = usize> {
        let mut bits = self.0;
        std::iter::from_fn(move || {
            if bits == 0 {
                None
            } else {
                let idx = bits.trailing_zeros() as usize;
                bits &= bits - 1;
                Some(idx)
            }
        })
    }
}

impl FromIterator<usize> for CellSet {
    fn from_iter<I: IntoIterator<Item = usize>>(iter: I) -> Self {
        let mut s = CellSet::EMPTY;
        for i in iter {
            s.insert(i);
        }
        s
    }
}

impl fmt::Debug for CellSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}
