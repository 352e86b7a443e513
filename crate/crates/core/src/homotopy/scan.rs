//! Search for embedded circles on which two maps into a circle disagree.

use serde::Serialize;

use crate::circle::{classify_homotopic, CircleMap, CircleNumbering};
use crate::space::FiniteSpace;

/// A subspace `C ≅ S^1_j` of the domain such that `f|C` and `g|C`, read as
/// maps `Z/2j -> Z/2n`, are not homotopic.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CircleObstruction {
    /// Domain points in residue order; even positions are minimal in `C`.
    pub points: Vec<usize>,
    pub half: usize,
    pub target_half: usize,
    pub deg_f: i64,
    pub deg_g: i64,
}

struct Scan<'a> {
    x: &'a FiniteSpace,
    f: &'a [usize],
    g: &'a [usize],
    target: &'a CircleNumbering,
    path: Vec<usize>,
    on_path: Vec<bool>,
    nodes: usize,
    budget: usize,
    found: Option<CircleObstruction>,
}

impl Scan<'_> {
    fn test_cycle(&mut self) {
        let j = self.path.len() / 2;
        let res = |t: &[usize]| -> Vec<usize> {
            self.path.iter().map(|&p| self.target.residue[t[p]]).collect()
        };
        let (Ok(cf), Ok(cg)) = (
            CircleMap::new(j, self.target.n, res(self.f)),
            CircleMap::new(j, self.target.n, res(self.g)),
        ) else {
            return;
        };
        if cf == cg || j < 2 {
            return;
        }
        if let Ok(false) = classify_homotopic(&cf, &cg) {
            self.found = Some(CircleObstruction {
                points: self.path.clone(),
                half: j,
                target_half: self.target.n,
                deg_f: cf.degree().unwrap_or(0),
                deg_g: cg.degree().unwrap_or(0),
            });
        }
    }

    fn dfs(&mut self, start: usize) {
        if self.found.is_some() || self.nodes >= self.budget {
            return;
        }
        self.nodes += 1;
        let last = *self.path.last().unwrap();
        let idx = self.path.len() - 1;
        // even positions are valleys, odd positions are peaks
        let candidates: Vec<usize> = if idx % 2 == 0 {
            self.x.up(last).iter().filter(|&q| q != last).collect()
        } else {
            self.x.down(last).iter().filter(|&q| q != last).collect()
        };
        for q in candidates {
            if q <= start || self.on_path[q] {
                continue;
            }
            let pos = idx + 1;
            let touches_start = self.x.comparable(q, start);
            let clean = self.path[1.min(idx)..idx]
                .iter()
                .all(|&r| !self.x.comparable(q, r));
            if !clean {
                continue;
            }
            if pos % 2 == 1 && touches_start {
                if pos >= 3 && self.x.lt(start, q) {
                    self.path.push(q);
                    self.test_cycle();
                    self.path.pop();
                    if self.found.is_some() {
                        return;
                    }
                }
                // a peak above the start with pos == 1 is the first edge
                if pos != 1 {
                    continue;
                }
            } else if touches_start {
                continue;
            }
            self.path.push(q);
            self.on_path[q] = true;
            self.dfs(start);
            self.on_path[q] = false;
            self.path.pop();
            if self.found.is_some() || self.nodes >= self.budget {
                return;
            }
        }
    }
}

/// Enumerates induced zigzag cycles of `x` (each starting from its least
/// minimal point) and reports the first one on which `f` and `g` are not
/// homotopic. `f` and `g` are tables into the circle described by
/// `target`. Returns `None` when nothing is found within `budget` search
/// nodes.
pub fn find_circle_obstruction(
    x: &FiniteSpace,
    f: &[usize],
    g: &[usize],
    target: &CircleNumbering,
    budget: usize,
) -> Option<CircleObstruction> {
    let mut scan = Scan {
        x,
        f,
        g,
        target,
        path: Vec::new(),
        on_path: vec![false; x.len()],
        nodes: 0,
        budget,
        found: None,
    };
    for s in x.points() {
        scan.path = vec![s];
        scan.on_path[s] = true;
        scan.dfs(s);
        scan.on_path[s] = false;
        if scan.found.is_some() || scan.nodes >= budget {
            break;
        }
    }
    scan.found
}
