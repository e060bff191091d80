//! Exact sparse linear algebra over ℚ.
//!
//! Rows are sparse vectors keyed by an ordered column type; a `RowSpace`
//! maintains a reduced echelon set of rows (pivot coefficient 1, pivots
//! eliminated from all other rows), which makes rank, span membership, and
//! kernel extraction deterministic.

use std::collections::BTreeMap;

use num_traits::{One, Zero};

use crate::poly::Coeff;

/// Sparse vector over ℚ; never stores zeros.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SparseVec<C: Ord + Clone> {
    entries: BTreeMap<C, Coeff>,
}

impl<C: Ord + Clone> Default for SparseVec<C> {
    fn default() -> Self {
        Self {
            entries: BTreeMap::new(),
        }
    }
}

impl<C: Ord + Clone> SparseVec<C> {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_iter<I: IntoIterator<Item = (C, Coeff)>>(iter: I) -> Self {
        let mut v = Self::new();
        for (c, k) in iter {
            v.add_entry(c, k);
        }
        v
    }

    pub fn entries(&self) -> &BTreeMap<C, Coeff> {
        &self.entries
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn add_entry(&mut self, col: C, k: Coeff) {
        if k.is_zero() {
            return;
        }
        match self.entries.entry(col) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(k);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                let sum = e.get() + &k;
                if sum.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = sum;
                }
            }
        }
    }

    /// First (smallest-column) entry.
    pub fn leading(&self) -> Option<(&C, &Coeff)> {
        self.entries.iter().next()
    }

    pub fn scale(&self, k: &Coeff) -> Self {
        if k.is_zero() {
            return Self::new();
        }
        Self {
            entries: self.entries.iter().map(|(c, v)| (c.clone(), v * k)).collect(),
        }
    }

    /// self += k·other
    pub fn axpy(&mut self, k: &Coeff, other: &Self) {
        if k.is_zero() {
            return;
        }
        for (c, v) in &other.entries {
            self.add_entry(c.clone(), v * k);
        }
    }
}

/// Reduced row-echelon span over ℚ, keyed by pivot column.
#[derive(Clone, Debug)]
pub struct RowSpace<C: Ord + Clone> {
    rows: BTreeMap<C, SparseVec<C>>,
}

impl<C: Ord + Clone> Default for RowSpace<C> {
    fn default() -> Self {
        Self {
            rows: BTreeMap::new(),
        }
    }
}

impl<C: Ord + Clone> RowSpace<C> {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn rows(&self) -> impl Iterator<Item = &SparseVec<C>> {
        self.rows.values()
    }

    /// Eliminate every pivot column from `v`.
    pub fn reduce(&self, v: &SparseVec<C>) -> SparseVec<C> {
        let mut out = v.clone();
        loop {
            // smallest column of `out` that is a pivot; rows have distinct
            // leading columns, so this strictly increases per round
            let hit = out
                .entries
                .iter()
                .find_map(|(c, k)| self.rows.contains_key(c).then(|| (c.clone(), k.clone())));
            match hit {
                None => return out,
                Some((c, k)) => {
                    let row = &self.rows[&c];
                    out.axpy(&(-k), row);
                }
            }
        }
    }

    pub fn contains(&self, v: &SparseVec<C>) -> bool {
        self.reduce(v).is_zero()
    }

    /// Insert a vector; returns false when it was already in the span.
    pub fn insert(&mut self, v: SparseVec<C>) -> bool {
        let reduced = self.reduce(&v);
        let Some((pivot, lead)) = reduced.leading().map(|(c, k)| (c.clone(), k.clone())) else {
            return false;
        };
        let normalized = reduced.scale(&lead.recip());
        // back-substitute so existing rows stay fully reduced
        for row in self.rows.values_mut() {
            if let Some(k) = row.entries.get(&pivot).cloned() {
                row.axpy(&(-k), &normalized);
            }
        }
        self.rows.insert(pivot, normalized);
        true
    }

    /// Insert without back-substitution. Rows stay in echelon form (distinct
    /// leading columns, leading coefficient 1), which `reduce`, `contains`,
    /// and `rank` handle just as well; only the stored rows are no longer
    /// fully reduced against each other. Much cheaper for rank-only spans.
    pub fn insert_echelon(&mut self, v: SparseVec<C>) -> bool {
        let reduced = self.reduce(&v);
        let Some((pivot, lead)) = reduced.leading().map(|(c, k)| (c.clone(), k.clone())) else {
            return false;
        };
        let normalized = reduced.scale(&lead.recip());
        self.rows.insert(pivot, normalized);
        true
    }
}

/// Row space that also tracks how each inserted vector was combined, so a
/// vector reducing to zero yields its kernel combination over the tags.
#[derive(Clone, Debug)]
pub struct TaggedRowSpace<C: Ord + Clone, K: Ord + Clone> {
    rows: BTreeMap<C, (SparseVec<C>, SparseVec<K>)>,
}

impl<C: Ord + Clone, K: Ord + Clone> Default for TaggedRowSpace<C, K> {
    fn default() -> Self {
        Self {
            rows: BTreeMap::new(),
        }
    }
}

impl<C: Ord + Clone, K: Ord + Clone> TaggedRowSpace<C, K> {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    /// Insert `v` with tag combination `tag`; on dependence returns the
    /// combination of previously inserted tags that reproduces `v`.
    pub fn insert(&mut self, v: SparseVec<C>, tag: SparseVec<K>) -> Option<SparseVec<K>> {
        let mut vec = v;
        let mut combo = tag;
        loop {
            let hit = vec
                .entries
                .iter()
                .find_map(|(c, k)| self.rows.contains_key(c).then(|| (c.clone(), k.clone())));
            match hit {
                None => break,
                Some((c, k)) => {
                    let (row_vec, row_combo) = &self.rows[&c];
                    vec.axpy(&(-k.clone()), row_vec);
                    combo.axpy(&(-k), row_combo);
                }
            }
        }
        match vec.leading().map(|(c, k)| (c.clone(), k.clone())) {
            None => Some(combo),
            Some((pivot, lead)) => {
                let inv = lead.recip();
                self.rows.insert(pivot, (vec.scale(&inv), combo.scale(&inv)));
                None
            }
        }
    }
}

/// Convenience: unit tag vector for index-style tags.
pub fn unit_tag<K: Ord + Clone>(k: K) -> SparseVec<K> {
    SparseVec::from_iter([(k, Coeff::one())])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::coeff_int;

    fn v(pairs: &[(u32, i64)]) -> SparseVec<u32> {
        SparseVec::from_iter(pairs.iter().map(|&(c, k)| (c, coeff_int(k))))
    }

    #[test]
    fn rank_of_independent_rows() {
        let mut space = RowSpace::new();
        assert!(space.insert(v(&[(0, 1), (1, 2)])));
        assert!(space.insert(v(&[(1, 1), (2, 3)])));
        assert!(!space.insert(v(&[(0, 2), (1, 5), (2, 3)])));
        assert_eq!(space.rank(), 2);
    }

    #[test]
    fn span_membership() {
        let mut space = RowSpace::new();
        space.insert(v(&[(0, 1), (2, 1)]));
        space.insert(v(&[(1, 1)]));
        assert!(space.contains(&v(&[(0, 3), (1, -2), (2, 3)])));
        assert!(!space.contains(&v(&[(2, 1)])));
    }

    #[test]
    fn tagged_kernel_combination() {
        let mut space = TaggedRowSpace::new();
        assert!(space.insert(v(&[(0, 1)]), unit_tag(0usize)).is_none());
        assert!(space.insert(v(&[(1, 1)]), unit_tag(1usize)).is_none());
        // third vector = first + 2·second → kernel combo (1, 2, −1)
        let combo = space
            .insert(v(&[(0, 1), (1, 2)]), unit_tag(2usize))
            .expect("dependent");
        // combo expresses: insert_2 − 1·row_0 − 2·row_1 = 0
        assert_eq!(combo.entries().get(&2), Some(&coeff_int(1)));
        assert_eq!(combo.entries().get(&0), Some(&coeff_int(-1)));
        assert_eq!(combo.entries().get(&1), Some(&coeff_int(-2)));
    }
}
