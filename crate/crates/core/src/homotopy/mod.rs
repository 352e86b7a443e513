//! Homotopy of maps between finite spaces.
//!
//! Two maps are homotopic iff they are joined by a fence of pointwise
//! comparable maps. Positive answers always carry such a fence on the
//! original spaces; negative answers carry an obstruction.

mod beat;
mod enumerate;
mod fence;
mod iso;
mod scan;

pub use beat::{
    beat_points, core, core_with_priority, is_contractible, is_minimal, BeatKind, BeatPoint,
    CollapseSequence, Core,
};
pub use enumerate::{all_maps, hom_components, HomComponents};
pub use fence::{comparable, compare_tables, Comparison, Fence, FenceStep};
pub use iso::{automorphisms, find_isomorphism, isomorphisms, minimal_iso_check};
pub use scan::{find_circle_obstruction, CircleObstruction};

pub(crate) use fence::{fence_search, SearchOutcome};

use serde::Serialize;

use crate::circle::{circle_fence, classify_homotopic, recognize_circle, CircleMap};
use crate::error::{Error, Result};
use crate::pointset::PointSet;
use crate::space::{FiniteSpace, OrderMap};

/// Limits for the searches behind [`homotopic`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Budget {
    /// Maps stored by a fence search or enumerated in a hom-set.
    pub maps: usize,
    /// Nodes visited by the embedded-circle scan.
    pub scan_nodes: usize,
}

impl Default for Budget {
    fn default() -> Self {
        Budget {
            maps: 1_000_000,
            scan_nodes: 200_000,
        }
    }
}

impl Budget {
    pub fn with_maps(maps: usize) -> Self {
        Budget {
            maps,
            ..Budget::default()
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Strategy {
    /// Search on the full hom-set, no reductions.
    FenceBfs,
    /// Reduce to cores and decide circle components by degree only.
    CoreDegree,
    /// Enumerate the hom-set and compare components.
    ExhaustiveComponents,
    /// Core reduction and degrees, then obstruction scan and fence search.
    Auto,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum Obstruction {
    /// `f(point)` and `g(point)` lie in different components of the target.
    SeparatedValues {
        point: usize,
        f_value: usize,
        g_value: usize,
    },
    /// Restrictions to an embedded circle are not homotopic.
    Circle(CircleObstruction),
    /// The fence component of `f` was explored completely without meeting
    /// `g`; `explored` maps were visited, on the cores when reduced.
    ExhaustedComponent { explored: usize },
    /// Different components of the enumerated hom-set.
    DistinctComponents,
    /// The maps differ after projecting to one factor of a product target.
    Factor {
        index: usize,
        inner: Box<Obstruction>,
    },
}

#[derive(Clone, Debug)]
pub enum HomotopyVerdict {
    Homotopic(Fence),
    NotHomotopic(Obstruction),
    Unknown(String),
}

impl HomotopyVerdict {
    pub fn is_homotopic(&self) -> bool {
        matches!(self, HomotopyVerdict::Homotopic(_))
    }

    pub fn is_not_homotopic(&self) -> bool {
        matches!(self, HomotopyVerdict::NotHomotopic(_))
    }

    pub fn is_unknown(&self) -> bool {
        matches!(self, HomotopyVerdict::Unknown(_))
    }

    /// `Some(true)`, `Some(false)` or `None` when undecided.
    pub fn decided(&self) -> Option<bool> {
        match self {
            HomotopyVerdict::Homotopic(_) => Some(true),
            HomotopyVerdict::NotHomotopic(_) => Some(false),
            HomotopyVerdict::Unknown(_) => None,
        }
    }
}

enum Outcome {
    Yes(Vec<Vec<usize>>),
    No(Obstruction),
    Unknown(String),
}

/// Decides whether `f ≃ g`.
pub fn homotopic(f: &OrderMap, g: &OrderMap, strategy: Strategy, budget: &Budget) -> Result<HomotopyVerdict> {
    if !f.source().same_as(g.source()) || !f.target().same_as(g.target()) {
        return Err(Error::MismatchedSpaces);
    }
    let (x, y) = (f.source(), f.target());
    let outcome = match strategy {
        Strategy::FenceBfs => search_outcome(x, y, f.table(), g.table(), budget.maps),
        Strategy::ExhaustiveComponents => exhaustive(x, y, f.table(), g.table(), budget.maps)?,
        Strategy::CoreDegree => reduce(x, y, f.table(), g.table(), false, budget)?,
        Strategy::Auto => reduce(x, y, f.table(), g.table(), true, budget)?,
    };
    Ok(match outcome {
        Outcome::Yes(tables) => {
            let fence = Fence::from_tables(x, y, tables)?;
            debug_assert!(fence.connects(f, g));
            HomotopyVerdict::Homotopic(fence)
        }
        Outcome::No(o) => HomotopyVerdict::NotHomotopic(o),
        Outcome::Unknown(why) => HomotopyVerdict::Unknown(why),
    })
}

/// Whether the inclusion of the open set `u` into `x` is homotopic to a
/// constant map (the constant at the first point of `u`).
pub fn nullhomotopic_in(x: &FiniteSpace, u: &PointSet, strategy: Strategy, budget: &Budget) -> Result<HomotopyVerdict> {
    x.check_open(u)?;
    let sub = x.subspace(u);
    let Some(first) = u.first() else {
        let empty = OrderMap::new_unchecked(sub.space.clone(), x.clone(), Vec::new());
        return Ok(HomotopyVerdict::Homotopic(Fence::single(empty)));
    };
    let inc = sub.inclusion(x);
    let constant = OrderMap::constant(&sub.space, x, first);
    homotopic(&inc, &constant, strategy, budget)
}

fn search_outcome(x: &FiniteSpace, y: &FiniteSpace, f: &[usize], g: &[usize], budget: usize) -> Outcome {
    match fence_search(x, y, f, g, budget) {
        SearchOutcome::Found(path) => Outcome::Yes(path),
        SearchOutcome::Exhausted(explored) => Outcome::No(Obstruction::ExhaustedComponent { explored }),
        SearchOutcome::Budget(n) => Outcome::Unknown(format!("fence search stopped after {n} maps")),
    }
}

fn exhaustive(x: &FiniteSpace, y: &FiniteSpace, f: &[usize], g: &[usize], budget: usize) -> Result<Outcome> {
    let h = match hom_components(x, y, budget) {
        Ok(h) => h,
        Err(Error::BudgetExceeded(n)) => {
            return Ok(Outcome::Unknown(format!("hom-set has more than {n} maps")))
        }
        Err(e) => return Err(e),
    };
    let (i, j) = (
        h.index_of(f).expect("f is continuous"),
        h.index_of(g).expect("g is continuous"),
    );
    if h.component[i] != h.component[j] {
        return Ok(Outcome::No(Obstruction::DistinctComponents));
    }
    // path in the comparability graph restricted to the component
    let members: Vec<usize> = h.members(h.component[i]).collect();
    let mut prev = vec![usize::MAX; h.maps.len()];
    let mut queue = std::collections::VecDeque::from([i]);
    prev[i] = i;
    while let Some(a) = queue.pop_front() {
        if a == j {
            break;
        }
        for &b in &members {
            if prev[b] == usize::MAX && compare_tables(y, &h.maps[a], &h.maps[b]).is_some() {
                prev[b] = a;
                queue.push_back(b);
            }
        }
    }
    let mut path = vec![h.maps[j].clone()];
    let mut cur = j;
    while cur != i {
        cur = prev[cur];
        path.push(h.maps[cur].clone());
    }
    path.reverse();
    Ok(Outcome::Yes(path))
}

fn compose(a: &[usize], b: &[usize]) -> Vec<usize> {
    a.iter().map(|&v| b[v]).collect()
}

fn reduce(
    x: &FiniteSpace,
    y: &FiniteSpace,
    f: &[usize],
    g: &[usize],
    fallback: bool,
    budget: &Budget,
) -> Result<Outcome> {
    if f == g {
        return Ok(Outcome::Yes(vec![f.to_vec()]));
    }
    if let Some((y0, y1)) = y.factors() {
        let split = |t: &[usize], i: usize| -> Vec<usize> {
            t.iter()
                .map(|&v| if i == 0 { y.coords(v).0 } else { y.coords(v).1 })
                .collect()
        };
        let (f0, f1, g0, g1) = (split(f, 0), split(f, 1), split(g, 0), split(g, 1));
        let r0 = reduce(x, y0, &f0, &g0, fallback, budget)?;
        let p0 = match r0 {
            Outcome::Yes(p) => p,
            Outcome::No(o) => {
                return Ok(Outcome::No(Obstruction::Factor { index: 0, inner: Box::new(o) }))
            }
            u @ Outcome::Unknown(_) => return Ok(u),
        };
        let r1 = reduce(x, y1, &f1, &g1, fallback, budget)?;
        let p1 = match r1 {
            Outcome::Yes(p) => p,
            Outcome::No(o) => {
                return Ok(Outcome::No(Obstruction::Factor { index: 1, inner: Box::new(o) }))
            }
            u @ Outcome::Unknown(_) => return Ok(u),
        };
        let join = |a: &[usize], b: &[usize]| -> Vec<usize> {
            a.iter().zip(b).map(|(&i, &j)| y.pair(i, j)).collect()
        };
        let mut tables: Vec<Vec<usize>> = p0.iter().map(|t| join(t, &f1)).collect();
        tables.extend(p1.iter().map(|t| join(&g0, t)));
        return Ok(Outcome::Yes(tables));
    }

    let dom = core(x);
    let tgt = core(y);
    let r_stages = dom.stages();
    let s_stages = tgt.stages();
    let r = r_stages.last().unwrap().clone();
    let s = s_stages.last().unwrap().clone();
    let xc = dom.space();
    let yc = tgt.space();
    // f' = S ∘ f ∘ i on the cores
    let reduced = |t: &[usize]| -> Vec<usize> {
        dom.subspace
            .embedding
            .iter()
            .map(|&p| tgt.subspace.from_parent(s[t[p]]).expect("lands in the core"))
            .collect()
    };
    let (fc, gc) = (reduced(f), reduced(g));
    let target_circle = recognize_circle(yc);

    let mut cur = fc.clone();
    let mut core_steps: Vec<Vec<usize>> = Vec::new();
    for comp in xc.components() {
        let sub = xc.subspace(&comp);
        let fl: Vec<usize> = sub.embedding.iter().map(|&p| fc[p]).collect();
        let gl: Vec<usize> = sub.embedding.iter().map(|&p| gc[p]).collect();
        if fl == gl {
            continue;
        }
        let to_x = |p: usize| dom.subspace.to_parent(sub.to_parent(p));
        let steps: Vec<Vec<usize>> = if sub.space.len() == 1 {
            match yc.order_path(fl[0], gl[0]) {
                Some(path) => path.into_iter().map(|v| vec![v]).collect(),
                None => {
                    let p = to_x(0);
                    return Ok(Outcome::No(Obstruction::SeparatedValues {
                        point: p,
                        f_value: f[p],
                        g_value: g[p],
                    }));
                }
            }
        } else if let (Some(dn), Some(tn)) = (recognize_circle(&sub.space), target_circle.as_ref()) {
            let to_circle = |t: &[usize]| -> Result<CircleMap> {
                CircleMap::new(dn.n, tn.n, dn.points.iter().map(|&p| tn.residue[t[p]]).collect())
            };
            let (cf, cg) = (to_circle(&fl)?, to_circle(&gl)?);
            if !classify_homotopic(&cf, &cg)? {
                return Ok(Outcome::No(Obstruction::Circle(CircleObstruction {
                    points: dn.points.iter().map(|&p| to_x(p)).collect(),
                    half: dn.n,
                    target_half: tn.n,
                    deg_f: cf.degree()?,
                    deg_g: cg.degree()?,
                })));
            }
            let fence = circle_fence(&cf, &cg)?.expect("classified as homotopic");
            fence
                .iter()
                .map(|h| sub.space.points().map(|p| tn.points[h.values()[dn.residue[p]]]).collect())
                .collect()
        } else if !fallback {
            return Ok(Outcome::Unknown(format!(
                "core component of {} points is not a circle",
                sub.space.len()
            )));
        } else {
            if let Some(tn) = target_circle.as_ref() {
                if let Some(mut obs) = find_circle_obstruction(&sub.space, &fl, &gl, tn, budget.scan_nodes) {
                    for p in obs.points.iter_mut() {
                        *p = to_x(*p);
                    }
                    return Ok(Outcome::No(Obstruction::Circle(obs)));
                }
            }
            match search_outcome(&sub.space, yc, &fl, &gl, budget.maps) {
                Outcome::Yes(p) => p,
                other => return Ok(other),
            }
        };
        for step in steps {
            for (i, &p) in sub.embedding.iter().enumerate() {
                cur[p] = step[i];
            }
            core_steps.push(cur.clone());
        }
    }
    debug_assert_eq!(cur, gc);

    // assemble a fence on the original spaces
    let lift = |t: &[usize]| -> Vec<usize> {
        r.iter()
            .map(|&p| tgt.subspace.to_parent(t[dom.subspace.from_parent(p).unwrap()]))
            .collect()
    };
    let mut tables = Vec::new();
    let half = |h: &[usize]| -> Vec<Vec<usize>> {
        let mut out: Vec<Vec<usize>> = r_stages.iter().map(|rt| compose(rt, h)).collect();
        let hr = compose(&r, h);
        out.extend(s_stages.iter().skip(1).map(|st| compose(&hr, st)));
        out
    };
    tables.extend(half(f));
    tables.extend(core_steps.iter().map(|t| lift(t)));
    let mut back = half(g);
    back.reverse();
    tables.extend(back);
    tables.dedup();
    Ok(Outcome::Yes(tables))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::space::{KhalimskyCircle, KhalimskyInterval};

    const ALL: [Strategy; 4] = [
        Strategy::FenceBfs,
        Strategy::CoreDegree,
        Strategy::ExhaustiveComponents,
        Strategy::Auto,
    ];

    #[test]
    fn equal_maps() {
        let c = KhalimskyCircle::new(3).unwrap();
        let id = OrderMap::identity(c.space());
        for s in ALL {
            match homotopic(&id, &id, s, &Budget::default()).unwrap() {
                HomotopyVerdict::Homotopic(fence) => assert!(fence.is_empty()),
                v => panic!("{v:?}"),
            }
        }
    }

    #[test]
    fn constants_on_a_connected_space() {
        let c = KhalimskyCircle::new(3).unwrap();
        let s = c.space();
        let f = OrderMap::constant(s, s, 0);
        let g = OrderMap::constant(s, s, 3);
        for st in ALL {
            match homotopic(&f, &g, st, &Budget::default()).unwrap() {
                HomotopyVerdict::Homotopic(fence) => assert!(fence.connects(&f, &g)),
                v => panic!("{st:?}: {v:?}"),
            }
        }
    }

    #[test]
    fn rotation_of_the_smallest_circle() {
        let c = KhalimskyCircle::new(2).unwrap();
        let s = c.space();
        let id = OrderMap::identity(s);
        let rot = OrderMap::new(s.clone(), s.clone(), vec![2, 3, 0, 1]).unwrap();
        for st in ALL {
            let v = homotopic(&id, &rot, st, &Budget::default()).unwrap();
            assert!(v.is_not_homotopic(), "{st:?}: {v:?}");
        }
    }

    #[test]
    fn mismatched_spaces() {
        let a = KhalimskyCircle::new(2).unwrap();
        let b = KhalimskyCircle::new(3).unwrap();
        let f = OrderMap::identity(a.space());
        let g = OrderMap::constant(a.space(), b.space(), 0);
        assert!(matches!(
            homotopic(&f, &g, Strategy::Auto, &Budget::default()),
            Err(Error::MismatchedSpaces)
        ));
    }

    #[test]
    fn nullhomotopy_examples() {
        let c = KhalimskyCircle::new(4).unwrap();
        let s = c.space();
        let b = Budget::default();
        let u = s.min_open(c.b(1)).into_members();
        assert!(nullhomotopic_in(s, &u, Strategy::Auto, &b).unwrap().is_homotopic());
        let all = s.full_set();
        assert!(nullhomotopic_in(s, &all, Strategy::Auto, &b).unwrap().is_not_homotopic());
        let mut arc = s.full_set();
        arc.remove(c.b(0));
        assert!(nullhomotopic_in(s, &arc, Strategy::Auto, &b).unwrap().is_homotopic());
        let closed = PointSet::from_points(s.len(), [c.b(0)]);
        assert!(matches!(
            nullhomotopic_in(s, &closed, Strategy::Auto, &b),
            Err(Error::NotOpen { .. })
        ));
        let empty = s.empty_set();
        assert!(nullhomotopic_in(s, &empty, Strategy::Auto, &b).unwrap().is_homotopic());
    }

    #[test]
    fn interval_maps_into_a_circle_are_inessential() {
        let i = KhalimskyInterval::new(0, 4).unwrap();
        let c = KhalimskyCircle::new(2).unwrap();
        let f = OrderMap::new(i.space().clone(), c.space().clone(), vec![0, 1, 2, 3, 0]).unwrap();
        let g = OrderMap::constant(i.space(), c.space(), 2);
        for st in ALL {
            match homotopic(&f, &g, st, &Budget::default()).unwrap() {
                HomotopyVerdict::Homotopic(fence) => assert!(fence.connects(&f, &g)),
                v => panic!("{st:?}: {v:?}"),
            }
        }
    }

    #[test]
    fn unknown_on_tiny_budget() {
        let c = KhalimskyCircle::new(3).unwrap();
        let s = c.space();
        let f = OrderMap::constant(s, s, 0);
        let g = OrderMap::constant(s, s, 3);
        let v = homotopic(&f, &g, Strategy::FenceBfs, &Budget::with_maps(3)).unwrap();
        assert!(v.is_unknown());
        let v = homotopic(&f, &g, Strategy::ExhaustiveComponents, &Budget::with_maps(3)).unwrap();
        assert!(v.is_unknown());
    }
}
