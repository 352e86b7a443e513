use std::fmt;

use super::{FiniteSpace, Subspace};
use crate::error::{Error, Result};
use crate::pointset::PointSet;

/// A continuous map between finite spaces, i.e. an order-preserving value
/// table. Construction through [`OrderMap::new`] validates the table.
#[derive(Clone)]
pub struct OrderMap {
    source: FiniteSpace,
    target: FiniteSpace,
    table: Vec<usize>,
}

impl OrderMap {
    /// Validates `table` as a continuous map; a violation is reported as a
    /// pair `lo ≼ hi` with `f(lo) ⋠ f(hi)`.
    pub fn new(source: FiniteSpace, target: FiniteSpace, table: Vec<usize>) -> Result<Self> {
        if table.len() != source.len() {
            return Err(Error::InvalidParameter(format!(
                "table has {} entries for a {}-point source",
                table.len(),
                source.len()
            )));
        }
        if let Some(&v) = table.iter().find(|&&v| v >= target.len()) {
            return Err(Error::InvalidParameter(format!(
                "value {v} outside a {}-point target",
                target.len()
            )));
        }
        if let Some((lo, hi)) = order_violation(&source, &target, &table) {
            return Err(Error::NotOrderPreserving {
                lo,
                hi,
                f_lo: table[lo],
                f_hi: table[hi],
            });
        }
        Ok(OrderMap {
            source,
            target,
            table,
        })
    }

    pub(crate) fn new_unchecked(source: FiniteSpace, target: FiniteSpace, table: Vec<usize>) -> Self {
        debug_assert!(order_violation(&source, &target, &table).is_none());
        OrderMap {
            source,
            target,
            table,
        }
    }

    pub fn identity(space: &FiniteSpace) -> Self {
        Self::new_unchecked(space.clone(), space.clone(), space.points().collect())
    }

    pub fn constant(source: &FiniteSpace, target: &FiniteSpace, value: usize) -> Self {
        assert!(value < target.len());
        Self::new_unchecked(source.clone(), target.clone(), vec![value; source.len()])
    }

    pub fn source(&self) -> &FiniteSpace {
        &self.source
    }

    pub fn target(&self) -> &FiniteSpace {
        &self.target
    }

    pub fn table(&self) -> &[usize] {
        &self.table
    }

    pub fn into_table(self) -> Vec<usize> {
        self.table
    }

    pub fn apply(&self, p: usize) -> usize {
        self.table[p]
    }

    /// `other ∘ self`.
    pub fn then(&self, other: &OrderMap) -> OrderMap {
        debug_assert!(self.target.same_as(&other.source));
        OrderMap::new_unchecked(
            self.source.clone(),
            other.target.clone(),
            self.table.iter().map(|&v| other.table[v]).collect(),
        )
    }

    /// Restriction to a subspace of the source.
    pub fn restrict(&self, sub: &Subspace) -> OrderMap {
        OrderMap::new_unchecked(
            sub.space.clone(),
            self.target.clone(),
            sub.embedding.iter().map(|&p| self.table[p]).collect(),
        )
    }

    /// Same map with its target cut down to a subspace containing the image.
    pub fn corestrict(&self, sub: &Subspace) -> Option<OrderMap> {
        let table = self
            .table
            .iter()
            .map(|&v| sub.from_parent(v))
            .collect::<Option<Vec<_>>>()?;
        Some(OrderMap::new_unchecked(self.source.clone(), sub.space.clone(), table))
    }

    pub fn image(&self) -> PointSet {
        PointSet::from_points(self.target.len(), self.table.iter().copied())
    }

    /// Same source, target and table.
    pub fn same_as(&self, other: &OrderMap) -> bool {
        self.table == other.table
            && self.source.same_as(&other.source)
            && self.target.same_as(&other.target)
    }
}

impl PartialEq for OrderMap {
    fn eq(&self, other: &Self) -> bool {
        self.same_as(other)
    }
}

impl fmt::Debug for OrderMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "OrderMap({} -> {}: {:?})",
            self.source.name(),
            self.target.name(),
            self.table
        )
    }
}

/// First covering pair `lo ⋖ hi` whose images are out of order.
pub(crate) fn order_violation(
    source: &FiniteSpace,
    target: &FiniteSpace,
    table: &[usize],
) -> Option<(usize, usize)> {
    for hi in source.points() {
        for &lo in source.lower_covers(hi) {
            if !target.le(table[lo], table[hi]) {
                return Some((lo, hi));
            }
        }
    }
    None
}
