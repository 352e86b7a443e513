//! Fixed-width point sets.

use std::fmt;

use fixedbitset::FixedBitSet;

/// A subset of the points of a finite space, stored as a bitmask whose width
/// is fixed when the owning space is built.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PointSet(FixedBitSet);

impl PointSet {
    pub fn empty(width: usize) -> Self {
        PointSet(FixedBitSet::with_capacity(width))
    }

    pub fn full(width: usize) -> Self {
        let mut bits = FixedBitSet::with_capacity(width);
        bits.insert_range(..);
        PointSet(bits)
    }

    pub fn from_points<I: IntoIterator<Item = usize>>(width: usize, points: I) -> Self {
        let mut set = Self::empty(width);
        for p in points {
            set.insert(p);
        }
        set
    }

    pub fn singleton(width: usize, p: usize) -> Self {
        Self::from_points(width, [p])
    }

    /// Number of points of the ambient space.
    pub fn width(&self) -> usize {
        self.0.len()
    }

    pub fn insert(&mut self, p: usize) {
        self.0.insert(p);
    }

    pub fn remove(&mut self, p: usize) {
        self.0.set(p, false);
    }

    pub fn contains(&self, p: usize) -> bool {
        self.0.contains(p)
    }

    pub fn len(&self) -> usize {
        self.0.count_ones(..)
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_clear()
    }

    pub fn is_full(&self) -> bool {
        self.len() == self.width()
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.0.ones()
    }

    pub fn to_vec(&self) -> Vec<usize> {
        self.iter().collect()
    }

    pub fn first(&self) -> Option<usize> {
        self.0.ones().next()
    }

    pub fn is_subset(&self, other: &PointSet) -> bool {
        self.0.is_subset(&other.0)
    }

    pub fn is_disjoint(&self, other: &PointSet) -> bool {
        self.0.is_disjoint(&other.0)
    }

    pub fn union_with(&mut self, other: &PointSet) {
        self.0.union_with(&other.0);
    }

    pub fn intersect_with(&mut self, other: &PointSet) {
        self.0.intersect_with(&other.0);
    }

    pub fn difference_with(&mut self, other: &PointSet) {
        self.0.difference_with(&other.0);
    }

    pub fn union(&self, other: &PointSet) -> PointSet {
        let mut out = self.clone();
        out.union_with(other);
        out
    }

    pub fn intersection(&self, other: &PointSet) -> PointSet {
        let mut out = self.clone();
        out.intersect_with(other);
        out
    }

    pub fn difference(&self, other: &PointSet) -> PointSet {
        let mut out = self.clone();
        out.difference_with(other);
        out
    }

    pub fn complement(&self) -> PointSet {
        let mut out = self.clone();
        out.0.toggle_range(..);
        out
    }

    /// Number of points shared with `other`.
    pub fn intersection_len(&self, other: &PointSet) -> usize {
        self.0.intersection_count(&other.0)
    }
}

impl fmt::Debug for PointSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}
