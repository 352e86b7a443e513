//! Pointwise comparison of maps, fences and the fence search.

use std::collections::HashMap;
use std::fmt::Write;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::pointset::PointSet;
use crate::space::{FiniteSpace, OrderMap};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Comparison {
    Equal,
    /// `f(x) ≼ g(x)` everywhere.
    Below,
    /// `f(x) ≽ g(x)` everywhere.
    Above,
}

/// Pointwise comparison of two maps with the same source and target.
pub fn comparable(f: &OrderMap, g: &OrderMap) -> Result<Option<Comparison>> {
    if !f.source().same_as(g.source()) || !f.target().same_as(g.target()) {
        return Err(Error::MismatchedSpaces);
    }
    Ok(compare_tables(f.target(), f.table(), g.table()))
}

pub fn compare_tables(target: &FiniteSpace, f: &[usize], g: &[usize]) -> Option<Comparison> {
    let (mut below, mut above) = (true, true);
    for (&a, &b) in f.iter().zip(g) {
        if a == b {
            continue;
        }
        below &= target.le(a, b);
        above &= target.le(b, a);
        if !below && !above {
            return None;
        }
    }
    Some(match (below, above) {
        (true, true) => Comparison::Equal,
        (true, false) => Comparison::Below,
        _ => Comparison::Above,
    })
}

#[derive(Clone, Debug)]
pub struct FenceStep {
    pub from: OrderMap,
    pub to: OrderMap,
    pub direction: Comparison,
}

/// A sequence of maps in which consecutive maps are pointwise comparable.
#[derive(Clone, Debug)]
pub struct Fence {
    maps: Vec<OrderMap>,
}

impl Fence {
    pub fn single(f: OrderMap) -> Self {
        Fence { maps: vec![f] }
    }

    /// Builds a fence from value tables, dropping repeated consecutive maps.
    /// Tables are validated for continuity.
    pub fn from_tables(
        source: &FiniteSpace,
        target: &FiniteSpace,
        tables: impl IntoIterator<Item = Vec<usize>>,
    ) -> Result<Self> {
        let mut maps: Vec<OrderMap> = Vec::new();
        for t in tables {
            if maps.last().is_some_and(|m| m.table() == t.as_slice()) {
                continue;
            }
            maps.push(OrderMap::new(source.clone(), target.clone(), t)?);
        }
        if maps.is_empty() {
            return Err(Error::Empty("fence with no maps".into()));
        }
        Ok(Fence { maps })
    }

    pub fn maps(&self) -> &[OrderMap] {
        &self.maps
    }

    pub fn start(&self) -> &OrderMap {
        &self.maps[0]
    }

    pub fn end(&self) -> &OrderMap {
        self.maps.last().expect("fence is never empty")
    }

    /// Number of steps, i.e. maps minus one.
    pub fn len(&self) -> usize {
        self.maps.len() - 1
    }

    pub fn is_empty(&self) -> bool {
        self.maps.len() == 1
    }

    pub fn steps(&self) -> Vec<FenceStep> {
        self.maps
            .windows(2)
            .filter_map(|w| {
                let direction = compare_tables(w[0].target(), w[0].table(), w[1].table())?;
                Some(FenceStep {
                    from: w[0].clone(),
                    to: w[1].clone(),
                    direction,
                })
            })
            .collect()
    }

    /// Checks every map for continuity and every consecutive pair for
    /// comparability.
    pub fn replay(&self) -> Result<()> {
        for m in &self.maps {
            if let Some((lo, hi)) =
                crate::space::order_violation(m.source(), m.target(), m.table())
            {
                return Err(Error::NotOrderPreserving {
                    lo,
                    hi,
                    f_lo: m.apply(lo),
                    f_hi: m.apply(hi),
                });
            }
        }
        for (index, w) in self.maps.windows(2).enumerate() {
            if !w[0].source().same_as(w[1].source()) || !w[0].target().same_as(w[1].target()) {
                return Err(Error::MismatchedSpaces);
            }
            if compare_tables(w[0].target(), w[0].table(), w[1].table()).is_none() {
                return Err(Error::BrokenFence { index });
            }
        }
        Ok(())
    }

    /// Replays the fence and checks its endpoints.
    pub fn connects(&self, f: &OrderMap, g: &OrderMap) -> bool {
        self.replay().is_ok() && self.start() == f && self.end() == g
    }

    /// One value table per line.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for m in &self.maps {
            let row: Vec<String> = m.table().iter().map(|v| v.to_string()).collect();
            let _ = writeln!(out, "{}", row.join(" "));
        }
        out
    }

    pub fn parse(source: &FiniteSpace, target: &FiniteSpace, text: &str) -> Result<Self> {
        let mut tables = Vec::new();
        for (idx, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let row = line
                .split_whitespace()
                .map(|w| w.parse::<usize>())
                .collect::<std::result::Result<Vec<_>, _>>()
                .map_err(|e| Error::Parse {
                    line: idx + 1,
                    message: e.to_string(),
                })?;
            tables.push(row);
        }
        Fence::from_tables(source, target, tables)
    }

    pub fn tables(&self) -> Vec<Vec<usize>> {
        self.maps.iter().map(|m| m.table().to_vec()).collect()
    }
}

/// Values `v ≠ t[x]` comparable to `t[x]` such that changing `t` at `x`
/// to `v` keeps it continuous.
pub(crate) fn single_moves(
    source: &FiniteSpace,
    target: &FiniteSpace,
    table: &[usize],
    x: usize,
) -> PointSet {
    let cur = table[x];
    let mut cand = target.up(cur).union(target.down(cur));
    cand.remove(cur);
    for &y in source.lower_covers(x) {
        cand.intersect_with(target.up(table[y]));
    }
    for &z in source.upper_covers(x) {
        cand.intersect_with(target.down(table[z]));
    }
    cand
}

pub(crate) enum SearchOutcome {
    Found(Vec<Vec<usize>>),
    /// The component of one endpoint was explored completely.
    Exhausted(usize),
    Budget(usize),
}

struct Side {
    states: Vec<Vec<u32>>,
    parent: Vec<usize>,
    index: HashMap<Vec<u32>, usize>,
    frontier: Vec<usize>,
}

impl Side {
    fn new(start: Vec<u32>) -> Self {
        let mut index = HashMap::new();
        index.insert(start.clone(), 0);
        Side {
            states: vec![start],
            parent: vec![usize::MAX],
            index,
            frontier: vec![0],
        }
    }

    fn path_to_root(&self, mut i: usize) -> Vec<Vec<usize>> {
        let mut out = Vec::new();
        loop {
            out.push(self.states[i].iter().map(|&v| v as usize).collect());
            if self.parent[i] == usize::MAX {
                return out;
            }
            i = self.parent[i];
        }
    }
}

/// Bidirectional breadth-first search between `f` and `g`.
///
/// Neighbours differ from a map at a single point. If `f ≼ h` then `h` is
/// reached from `f` by raising one point at a time (always raise a minimal
/// point of `{x : f(x) ≠ h(x)}` to its `h`-value), so the components found
/// here are the components of the comparability graph.
pub(crate) fn fence_search(
    source: &FiniteSpace,
    target: &FiniteSpace,
    f: &[usize],
    g: &[usize],
    budget: usize,
) -> SearchOutcome {
    let enc = |t: &[usize]| t.iter().map(|&v| v as u32).collect::<Vec<u32>>();
    if f == g {
        return SearchOutcome::Found(vec![f.to_vec()]);
    }
    let mut sides = [Side::new(enc(f)), Side::new(enc(g))];
    let mut scratch: Vec<usize> = Vec::with_capacity(f.len());
    loop {
        let total = sides[0].states.len() + sides[1].states.len();
        if total > budget {
            return SearchOutcome::Budget(total);
        }
        let s = if sides[0].frontier.len() <= sides[1].frontier.len() { 0 } else { 1 };
        if sides[s].frontier.is_empty() {
            return SearchOutcome::Exhausted(sides[s].states.len());
        }
        let frontier = std::mem::take(&mut sides[s].frontier);
        let mut next = Vec::new();
        for i in frontier {
            scratch.clear();
            scratch.extend(sides[s].states[i].iter().map(|&v| v as usize));
            for x in source.points() {
                let old = scratch[x];
                for v in single_moves(source, target, &scratch, x).iter() {
                    scratch[x] = v;
                    let key = enc(&scratch);
                    scratch[x] = old;
                    if sides[s].index.contains_key(&key) {
                        continue;
                    }
                    if let Some(&j) = sides[1 - s].index.get(&key) {
                        let mut here = sides[s].path_to_root(i);
                        here.reverse();
                        here.extend(sides[1 - s].path_to_root(j));
                        if s == 1 {
                            here.reverse();
                        }
                        return SearchOutcome::Found(here);
                    }
                    let id = sides[s].states.len();
                    sides[s].states.push(key.clone());
                    sides[s].parent.push(i);
                    sides[s].index.insert(key, id);
                    next.push(id);
                    if sides[0].states.len() + sides[1].states.len() > budget {
                        return SearchOutcome::Budget(budget + 1);
                    }
                }
            }
        }
        sides[s].frontier = next;
    }
}
