//! Beat points, strong collapses and cores.

use serde::Serialize;

use crate::pointset::PointSet;
use crate::space::{FiniteSpace, OrderMap, Subspace};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum BeatKind {
    /// `[x, -] ∖ {x}` has a minimum.
    Up,
    /// `[-, x] ∖ {x}` has a maximum.
    Down,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct BeatPoint {
    pub point: usize,
    pub kind: BeatKind,
    /// The minimum (up) or maximum (down) that `point` retracts onto.
    pub witness: usize,
}

/// Beat point test inside the subspace `alive`. Up beat is preferred when a
/// point is both.
pub(crate) fn beat_in(space: &FiniteSpace, alive: &PointSet, p: usize) -> Option<BeatPoint> {
    let mut above = space.up(p).intersection(alive);
    above.remove(p);
    if let Some(w) = above.iter().min_by_key(|&q| (space.down(q).len(), q)) {
        if above.is_subset(space.up(w)) {
            return Some(BeatPoint {
                point: p,
                kind: BeatKind::Up,
                witness: w,
            });
        }
    }
    let mut below = space.down(p).intersection(alive);
    below.remove(p);
    if let Some(w) = below.iter().max_by_key(|&q| (space.down(q).len(), usize::MAX - q)) {
        if below.is_subset(space.down(w)) {
            return Some(BeatPoint {
                point: p,
                kind: BeatKind::Down,
                witness: w,
            });
        }
    }
    None
}

/// All beat points of the space, in id order.
pub fn beat_points(space: &FiniteSpace) -> Vec<BeatPoint> {
    let all = space.full_set();
    space.points().filter_map(|p| beat_in(space, &all, p)).collect()
}

pub fn is_minimal(space: &FiniteSpace) -> bool {
    beat_points(space).is_empty()
}

/// Elementary strong collapses in the order they were performed.
#[derive(Clone, Debug)]
pub struct CollapseSequence {
    pub start: FiniteSpace,
    pub removals: Vec<BeatPoint>,
    /// Points left when the sequence stops.
    pub remaining: PointSet,
}

impl CollapseSequence {
    /// Replays the sequence, checking that every removal was a beat point
    /// of the space remaining at that step.
    pub fn replay(&self) -> bool {
        let mut alive = self.start.full_set();
        for r in &self.removals {
            match beat_in(&self.start, &alive, r.point) {
                Some(b) if b.kind == r.kind && b.witness == r.witness => alive.remove(r.point),
                // a point can be both kinds; accept any valid witness
                _ => {
                    let ok = alive.contains(r.point)
                        && alive.contains(r.witness)
                        && is_beat_witness(&self.start, &alive, r);
                    if !ok {
                        return false;
                    }
                    alive.remove(r.point);
                }
            }
        }
        alive == self.remaining
    }
}

fn is_beat_witness(space: &FiniteSpace, alive: &PointSet, r: &BeatPoint) -> bool {
    match r.kind {
        BeatKind::Up => {
            let mut above = space.up(r.point).intersection(alive);
            above.remove(r.point);
            above.contains(r.witness) && above.is_subset(space.up(r.witness))
        }
        BeatKind::Down => {
            let mut below = space.down(r.point).intersection(alive);
            below.remove(r.point);
            below.contains(r.witness) && below.is_subset(space.down(r.witness))
        }
    }
}

/// A core of a space with the retraction data that produced it.
#[derive(Clone, Debug)]
pub struct Core {
    pub subspace: Subspace,
    /// Retraction `X -> core`.
    pub retraction: OrderMap,
    /// Inclusion `core -> X`.
    pub inclusion: OrderMap,
    pub sequence: CollapseSequence,
}

impl Core {
    pub fn space(&self) -> &FiniteSpace {
        &self.subspace.space
    }

    pub fn len(&self) -> usize {
        self.subspace.space.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// The maps `R_0 = id, R_1, ..., R_s` of `X` into itself, where `R_t`
    /// retracts the first `t` removed points. Consecutive maps are pointwise
    /// comparable, so this is a fence from the identity to
    /// `inclusion ∘ retraction`.
    pub fn stages(&self) -> Vec<Vec<usize>> {
        let space = &self.sequence.start;
        let mut cur: Vec<usize> = space.points().collect();
        let mut out = vec![cur.clone()];
        for r in &self.sequence.removals {
            for v in cur.iter_mut() {
                if *v == r.point {
                    *v = r.witness;
                }
            }
            out.push(cur.clone());
        }
        out
    }

    /// `inclusion ∘ retraction` as a table on `X`.
    pub fn retraction_table(&self) -> Vec<usize> {
        self.retraction
            .table()
            .iter()
            .map(|&i| self.subspace.to_parent(i))
            .collect()
    }
}

/// Removes beat points, lowest id first, until none remain.
pub fn core(space: &FiniteSpace) -> Core {
    let priority: Vec<usize> = space.points().collect();
    core_with_priority(space, &priority)
}

/// Like [`core`], but at every step removes the beat point with the smallest
/// `priority[p]`.
pub fn core_with_priority(space: &FiniteSpace, priority: &[usize]) -> Core {
    let mut order: Vec<usize> = space.points().collect();
    order.sort_by_key(|&p| priority[p]);
    let mut alive = space.full_set();
    let mut removals = Vec::new();
    'outer: loop {
        for &p in &order {
            if !alive.contains(p) {
                continue;
            }
            if let Some(b) = beat_in(space, &alive, p) {
                alive.remove(p);
                removals.push(b);
                continue 'outer;
            }
        }
        break;
    }
    let mut target: Vec<usize> = space.points().collect();
    for r in removals.iter().rev() {
        target[r.point] = target[r.witness];
    }
    let subspace = space.subspace(&alive);
    let retraction = OrderMap::new_unchecked(
        space.clone(),
        subspace.space.clone(),
        target
            .iter()
            .map(|&p| subspace.from_parent(p).expect("retraction lands in the core"))
            .collect(),
    );
    let inclusion = subspace.inclusion(space);
    Core {
        subspace,
        retraction,
        inclusion,
        sequence: CollapseSequence {
            start: space.clone(),
            removals,
            remaining: alive,
        },
    }
}

pub fn is_contractible(space: &FiniteSpace) -> bool {
    core(space).len() == 1
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::homotopy::fence::compare_tables;
    use crate::space::{KhalimskyCircle, KhalimskyInterval};

    #[test]
    fn circles_have_no_beat_points() {
        for n in 2..9 {
            let c = KhalimskyCircle::new(n).unwrap();
            assert!(beat_points(c.space()).is_empty());
            assert_eq!(core(c.space()).len(), 2 * n);
            assert!(!is_contractible(c.space()));
        }
    }

    #[test]
    fn short_interval_beat_points() {
        let i = KhalimskyInterval::new(0, 2).unwrap();
        let beats = beat_points(i.space());
        assert_eq!(
            beats,
            vec![
                BeatPoint { point: 0, kind: BeatKind::Up, witness: 1 },
                BeatPoint { point: 2, kind: BeatKind::Up, witness: 1 },
            ]
        );
        assert_eq!(core(i.space()).len(), 1);
    }

    #[test]
    fn intervals_are_contractible() {
        for t in 0..=12 {
            assert!(is_contractible(KhalimskyInterval::new(0, t).unwrap().space()));
        }
        assert!(beat_points(&FiniteSpace::singleton("x")).is_empty());
        assert!(is_contractible(&FiniteSpace::singleton("x")));
    }

    #[test]
    fn stages_form_a_fence() {
        let i = KhalimskyInterval::new(-2, 5).unwrap();
        let c = core(i.space());
        assert!(c.sequence.replay());
        let stages = c.stages();
        assert_eq!(stages.last().unwrap(), &c.retraction_table());
        for w in stages.windows(2) {
            assert!(compare_tables(i.space(), &w[0], &w[1]).is_some());
        }
    }

    #[test]
    fn core_is_idempotent() {
        let i = KhalimskyInterval::new(0, 6).unwrap();
        let c = core(i.space());
        let again = core(c.space());
        assert!(again.sequence.removals.is_empty());
        assert_eq!(again.len(), c.len());
    }
}
