use serde::Serialize;

use crate::space::FiniteSpace;

/// An identification of a space with `S^1_n`: `residue[p]` is the residue
/// of point `p` in `Z/2n`, and `points[z]` the point with residue `z`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CircleNumbering {
    pub n: usize,
    pub residue: Vec<usize>,
    pub points: Vec<usize>,
}

/// Recognizes spaces homeomorphic to a Khalimsky circle. Among the `4n`
/// numberings (rotations by even steps and both orientations) the one with
/// the lexicographically least residue vector is returned.
pub fn recognize_circle(x: &FiniteSpace) -> Option<CircleNumbering> {
    let size = x.len();
    if size < 4 || size % 2 == 1 {
        return None;
    }
    let minimal = x.minimal_elements();
    for p in x.points() {
        let others: Vec<usize> = x.points().filter(|&q| q != p && x.comparable(p, q)).collect();
        if others.len() != 2 {
            return None;
        }
        let is_min = minimal.contains(p);
        // height at most one: every comparable point sits on the other level
        if others.iter().any(|&q| minimal.contains(q) == is_min) {
            return None;
        }
    }
    let start = minimal.first()?;
    let mut best: Option<Vec<usize>> = None;
    for first_step in 0..2 {
        let walk = walk_from(x, start, first_step)?;
        if walk.len() != size {
            return None;
        }
        for rot in (0..size).step_by(2) {
            for dir in [false, true] {
                let mut residue = vec![0; size];
                for (i, &p) in walk.iter().enumerate() {
                    let pos = if dir { (size - i) % size } else { i };
                    residue[p] = (pos + size - rot) % size;
                }
                if best.as_ref().is_none_or(|b| residue < *b) {
                    best = Some(residue);
                }
            }
        }
    }
    let residue = best?;
    let mut points = vec![0; size];
    for (p, &z) in residue.iter().enumerate() {
        points[z] = p;
    }
    Some(CircleNumbering {
        n: size / 2,
        residue,
        points,
    })
}

/// Walks the cycle through `start`, leaving along its `first_step`-th
/// neighbour. Stops when back at `start`.
fn walk_from(x: &FiniteSpace, start: usize, first_step: usize) -> Option<Vec<usize>> {
    let neighbours = |p: usize| -> Vec<usize> {
        x.points().filter(|&q| q != p && x.comparable(p, q)).collect()
    };
    let mut walk = vec![start];
    let mut prev = start;
    let mut cur = *neighbours(start).get(first_step)?;
    while cur != start {
        if walk.len() > x.len() {
            return None;
        }
        walk.push(cur);
        let next = neighbours(cur).into_iter().find(|&q| q != prev)?;
        prev = cur;
        cur = next;
    }
    Some(walk)
}
