//! Finite T0-spaces as posets.
//!
//! Opens are the down-sets of the order: the smallest open set containing a
//! point `x` is its reflexive down-set `[-, x]`. Every interval operation reads
//! the order reflexively, so `[-, b]` always contains `b`.

mod format;
mod khalimsky;
mod map;

use std::collections::VecDeque;
use std::fmt;
use std::ops::Range;
use std::sync::Arc;

pub use format::{parse_point_list, parse_space, write_point_list, write_space};
pub use khalimsky::{line_le, KhalimskyCircle, KhalimskyInterval};
pub use map::OrderMap;
pub(crate) use map::order_violation;

use crate::error::{Error, Result};
use crate::pointset::PointSet;

/// A finite poset with the Alexandroff topology (opens = down-sets).
///
/// Spaces are immutable once built; cloning shares the underlying data.
#[derive(Clone)]
pub struct FiniteSpace(Arc<Inner>);

struct Inner {
    name: String,
    labels: Vec<String>,
    down: Vec<PointSet>,
    up: Vec<PointSet>,
    lower_covers: Vec<Vec<usize>>,
    upper_covers: Vec<Vec<usize>>,
    factors: Option<(FiniteSpace, FiniteSpace)>,
}

impl FiniteSpace {
    /// Builds a space from its covering relation. Pairs `(lo, hi)` mean
    /// `lo < hi`; the transitive closure is computed here.
    pub fn build(
        name: impl Into<String>,
        labels: Vec<String>,
        pairs: &[(usize, usize)],
    ) -> Result<Self> {
        let n = labels.len();
        let mut above = vec![Vec::new(); n];
        let mut indegree = vec![0usize; n];
        for &(lo, hi) in pairs {
            if lo >= n || hi >= n {
                return Err(Error::InvalidParameter(format!(
                    "pair ({lo}, {hi}) out of range for {n} points"
                )));
            }
            if lo == hi {
                return Err(Error::CycleDetected(lo));
            }
            above[lo].push(hi);
            indegree[hi] += 1;
        }
        // Kahn's algorithm doubles as the cycle check.
        let mut queue: VecDeque<usize> = (0..n).filter(|&p| indegree[p] == 0).collect();
        let mut order = Vec::with_capacity(n);
        while let Some(p) = queue.pop_front() {
            order.push(p);
            for &q in &above[p] {
                indegree[q] -= 1;
                if indegree[q] == 0 {
                    queue.push_back(q);
                }
            }
        }
        if order.len() < n {
            let stuck = (0..n).find(|&p| indegree[p] > 0).unwrap_or(0);
            return Err(Error::CycleDetected(stuck));
        }
        let mut down: Vec<PointSet> = (0..n).map(|p| PointSet::singleton(n, p)).collect();
        for &p in &order {
            let below = down[p].clone();
            for &q in &above[p] {
                down[q].union_with(&below);
            }
        }
        Ok(Self::from_down_sets(name.into(), labels, down, None))
    }

    /// Builds a space from a reflexive order predicate. The caller guarantees
    /// that `le` is a partial order.
    pub(crate) fn from_relation(
        name: impl Into<String>,
        labels: Vec<String>,
        le: impl Fn(usize, usize) -> bool,
    ) -> Self {
        let n = labels.len();
        let down = (0..n)
            .map(|y| PointSet::from_points(n, (0..n).filter(|&x| le(x, y))))
            .collect();
        Self::from_down_sets(name.into(), labels, down, None)
    }

    fn from_down_sets(
        name: String,
        labels: Vec<String>,
        down: Vec<PointSet>,
        factors: Option<(FiniteSpace, FiniteSpace)>,
    ) -> Self {
        let n = labels.len();
        let mut up = vec![PointSet::empty(n); n];
        for (y, d) in down.iter().enumerate() {
            for x in d.iter() {
                up[x].insert(y);
            }
        }
        let mut lower_covers = vec![Vec::new(); n];
        let mut upper_covers = vec![Vec::new(); n];
        for y in 0..n {
            let mut strict = down[y].clone();
            strict.remove(y);
            for x in strict.iter() {
                // x is covered by y iff nothing strictly between them
                if up[x].intersection_len(&strict) == 1 {
                    lower_covers[y].push(x);
                    upper_covers[x].push(y);
                }
            }
        }
        FiniteSpace(Arc::new(Inner {
            name,
            labels,
            down,
            up,
            lower_covers,
            upper_covers,
            factors,
        }))
    }

    pub fn singleton(label: impl Into<String>) -> Self {
        Self::from_relation("point", vec![label.into()], |_, _| true)
    }

    pub fn name(&self) -> &str {
        &self.0.name
    }

    /// Same space under a different name.
    pub fn renamed(&self, name: impl Into<String>) -> Self {
        FiniteSpace(Arc::new(Inner {
            name: name.into(),
            labels: self.0.labels.clone(),
            down: self.0.down.clone(),
            up: self.0.up.clone(),
            lower_covers: self.0.lower_covers.clone(),
            upper_covers: self.0.upper_covers.clone(),
            factors: self.0.factors.clone(),
        }))
    }

    pub fn len(&self) -> usize {
        self.0.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.labels.is_empty()
    }

    pub fn points(&self) -> Range<usize> {
        0..self.len()
    }

    pub fn label(&self, p: usize) -> &str {
        &self.0.labels[p]
    }

    pub fn labels(&self) -> &[String] {
        &self.0.labels
    }

    /// Reflexive order `x ≼ y`.
    pub fn le(&self, x: usize, y: usize) -> bool {
        self.0.down[y].contains(x)
    }

    pub fn lt(&self, x: usize, y: usize) -> bool {
        x != y && self.le(x, y)
    }

    pub fn comparable(&self, x: usize, y: usize) -> bool {
        self.le(x, y) || self.le(y, x)
    }

    /// Reflexive down-set of `p`.
    pub fn down(&self, p: usize) -> &PointSet {
        &self.0.down[p]
    }

    /// Reflexive up-set of `p`.
    pub fn up(&self, p: usize) -> &PointSet {
        &self.0.up[p]
    }

    pub fn lower_covers(&self, p: usize) -> &[usize] {
        &self.0.lower_covers[p]
    }

    pub fn upper_covers(&self, p: usize) -> &[usize] {
        &self.0.upper_covers[p]
    }

    pub fn covering_pairs(&self) -> Vec<(usize, usize)> {
        self.points()
            .flat_map(|y| self.lower_covers(y).iter().map(move |&x| (x, y)))
            .collect()
    }

    pub fn empty_set(&self) -> PointSet {
        PointSet::empty(self.len())
    }

    pub fn full_set(&self) -> PointSet {
        PointSet::full(self.len())
    }

    pub fn maximal_elements(&self) -> PointSet {
        PointSet::from_points(
            self.len(),
            self.points().filter(|&p| self.upper_covers(p).is_empty()),
        )
    }

    pub fn minimal_elements(&self) -> PointSet {
        PointSet::from_points(
            self.len(),
            self.points().filter(|&p| self.lower_covers(p).is_empty()),
        )
    }

    /// Smallest open set containing `p`.
    pub fn min_open(&self, p: usize) -> DownSet {
        DownSet {
            space: self.clone(),
            members: self.down(p).clone(),
        }
    }

    /// `[-, b]`, read reflexively.
    pub fn interval_down(&self, b: usize) -> DownSet {
        self.min_open(b)
    }

    /// `[a, -]`, read reflexively.
    pub fn interval_up(&self, a: usize) -> PointSet {
        self.up(a).clone()
    }

    /// `[a, b]`, read reflexively.
    pub fn interval(&self, a: usize, b: usize) -> PointSet {
        self.up(a).intersection(self.down(b))
    }

    /// Smallest open superset of `set`.
    pub fn open_hull(&self, set: &PointSet) -> DownSet {
        let mut members = self.empty_set();
        for p in set.iter() {
            members.union_with(self.down(p));
        }
        DownSet {
            space: self.clone(),
            members,
        }
    }

    /// Checks down-closure, returning a witness pair on failure.
    pub fn check_open(&self, set: &PointSet) -> Result<()> {
        for member in set.iter() {
            if let Some(missing) = self.down(member).difference(set).first() {
                return Err(Error::NotOpen { member, missing });
            }
        }
        Ok(())
    }

    pub fn is_open(&self, set: &PointSet) -> bool {
        self.check_open(set).is_ok()
    }

    pub fn down_set(&self, members: PointSet) -> Result<DownSet> {
        self.check_open(&members)?;
        Ok(DownSet {
            space: self.clone(),
            members,
        })
    }

    pub fn whole(&self) -> DownSet {
        DownSet {
            space: self.clone(),
            members: self.full_set(),
        }
    }

    /// Induced subspace on `set`, with points renumbered in increasing order.
    pub fn subspace(&self, set: &PointSet) -> Subspace {
        let embedding = set.to_vec();
        let mut position = vec![None; self.len()];
        for (i, &p) in embedding.iter().enumerate() {
            position[p] = Some(i);
        }
        let m = embedding.len();
        let labels = embedding.iter().map(|&p| self.label(p).to_string()).collect();
        let down = embedding
            .iter()
            .map(|&p| {
                PointSet::from_points(m, self.down(p).iter().filter_map(|q| position[q]))
            })
            .collect();
        let space = Self::from_down_sets(format!("{}|sub", self.name()), labels, down, None);
        Subspace {
            space,
            embedding,
            position,
        }
    }

    /// Connected components (of the comparability graph), ordered by least point.
    pub fn components(&self) -> Vec<PointSet> {
        let n = self.len();
        let mut seen = vec![false; n];
        let mut out = Vec::new();
        for start in 0..n {
            if seen[start] {
                continue;
            }
            let mut comp = self.empty_set();
            let mut stack = vec![start];
            seen[start] = true;
            while let Some(p) = stack.pop() {
                comp.insert(p);
                for &q in self.lower_covers(p).iter().chain(self.upper_covers(p)) {
                    if !seen[q] {
                        seen[q] = true;
                        stack.push(q);
                    }
                }
            }
            out.push(comp);
        }
        out
    }

    /// A shortest path `x = p0, p1, ..., pk = y` in the Hasse diagram, if any.
    pub fn order_path(&self, x: usize, y: usize) -> Option<Vec<usize>> {
        let n = self.len();
        let mut parent = vec![usize::MAX; n];
        parent[x] = x;
        let mut queue = VecDeque::from([x]);
        while let Some(p) = queue.pop_front() {
            if p == y {
                let mut path = vec![y];
                let mut cur = y;
                while cur != x {
                    cur = parent[cur];
                    path.push(cur);
                }
                path.reverse();
                return Some(path);
            }
            for &q in self.lower_covers(p).iter().chain(self.upper_covers(p)) {
                if parent[q] == usize::MAX {
                    parent[q] = p;
                    queue.push_back(q);
                }
            }
        }
        None
    }

    /// Points listed so that every point comes after everything below it.
    pub fn linear_extension(&self) -> Vec<usize> {
        let mut pts: Vec<usize> = self.points().collect();
        pts.sort_by_key(|&p| (self.down(p).len(), p));
        pts
    }

    /// Factors, when the space was built by [`product`].
    pub fn factors(&self) -> Option<(&FiniteSpace, &FiniteSpace)> {
        self.0.factors.as_ref().map(|(a, b)| (a, b))
    }

    /// Product point `(i, j)`; panics unless this space is a product.
    pub fn pair(&self, i: usize, j: usize) -> usize {
        let (_, y) = self.factors().expect("not a product space");
        i * y.len() + j
    }

    /// Coordinates of a product point.
    pub fn coords(&self, p: usize) -> (usize, usize) {
        let (_, y) = self.factors().expect("not a product space");
        (p / y.len(), p % y.len())
    }

    /// Projection onto factor `index` (0 or 1) of a product space.
    pub fn projection(&self, index: usize) -> OrderMap {
        let (x, y) = self.factors().expect("not a product space");
        let target = if index == 0 { x } else { y };
        let table = self
            .points()
            .map(|p| {
                let (i, j) = self.coords(p);
                if index == 0 {
                    i
                } else {
                    j
                }
            })
            .collect();
        OrderMap::new_unchecked(self.clone(), target.clone(), table)
    }

    /// Structural equality: same points with the same order.
    pub fn same_as(&self, other: &FiniteSpace) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || self.0.down == other.0.down
    }
}

impl fmt::Debug for FiniteSpace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FiniteSpace({}, {} points)", self.name(), self.len())
    }
}

/// Product with componentwise order; point `(i, j)` has id `i * |Y| + j`.
pub fn product(x: &FiniteSpace, y: &FiniteSpace) -> FiniteSpace {
    let (nx, ny) = (x.len(), y.len());
    let n = nx * ny;
    let mut labels = Vec::with_capacity(n);
    let mut down = Vec::with_capacity(n);
    for i in 0..nx {
        for j in 0..ny {
            labels.push(format!("({},{})", x.label(i), y.label(j)));
            let mut d = PointSet::empty(n);
            for a in x.down(i).iter() {
                for b in y.down(j).iter() {
                    d.insert(a * ny + b);
                }
            }
            down.push(d);
        }
    }
    FiniteSpace::from_down_sets(
        format!("{}x{}", x.name(), y.name()),
        labels,
        down,
        Some((x.clone(), y.clone())),
    )
}

/// An open subset of a finite space.
#[derive(Clone)]
pub struct DownSet {
    space: FiniteSpace,
    members: PointSet,
}

impl DownSet {
    pub fn new(space: &FiniteSpace, members: PointSet) -> Result<Self> {
        space.down_set(members)
    }

    pub fn space(&self) -> &FiniteSpace {
        &self.space
    }

    pub fn members(&self) -> &PointSet {
        &self.members
    }

    pub fn into_members(self) -> PointSet {
        self.members
    }

    pub fn contains(&self, p: usize) -> bool {
        self.members.contains(p)
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn points(&self) -> Vec<usize> {
        self.members.to_vec()
    }

    pub fn union(&self, other: &DownSet) -> DownSet {
        DownSet {
            space: self.space.clone(),
            members: self.members.union(&other.members),
        }
    }

    pub fn intersection(&self, other: &DownSet) -> DownSet {
        DownSet {
            space: self.space.clone(),
            members: self.members.intersection(&other.members),
        }
    }

    pub fn subspace(&self) -> Subspace {
        self.space.subspace(&self.members)
    }
}

impl PartialEq for DownSet {
    fn eq(&self, other: &Self) -> bool {
        self.members == other.members && self.space.same_as(&other.space)
    }
}

impl fmt::Debug for DownSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "DownSet{:?}", self.members)
    }
}

/// An induced subspace together with its embedding into the parent.
#[derive(Clone, Debug)]
pub struct Subspace {
    pub space: FiniteSpace,
    /// Sub id -> parent id.
    pub embedding: Vec<usize>,
    /// Parent id -> sub id.
    pub position: Vec<Option<usize>>,
}

impl Subspace {
    pub fn to_parent(&self, p: usize) -> usize {
        self.embedding[p]
    }

    pub fn from_parent(&self, p: usize) -> Option<usize> {
        self.position[p]
    }

    /// Maps a set of parent points (all inside the subspace) to sub ids.
    pub fn set_from_parent(&self, set: &PointSet) -> PointSet {
        PointSet::from_points(self.space.len(), set.iter().filter_map(|p| self.position[p]))
    }

    pub fn set_to_parent(&self, set: &PointSet) -> PointSet {
        PointSet::from_points(self.position.len(), set.iter().map(|p| self.embedding[p]))
    }

    pub fn inclusion(&self, parent: &FiniteSpace) -> OrderMap {
        OrderMap::new_unchecked(self.space.clone(), parent.clone(), self.embedding.clone())
    }
}
