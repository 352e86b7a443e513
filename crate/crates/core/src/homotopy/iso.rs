//! Order isomorphisms between finite spaces.

use super::beat::beat_points;
use crate::error::{Error, Result};
use crate::space::{FiniteSpace, OrderMap};

type Signature = (usize, usize, usize, usize);

fn signature(x: &FiniteSpace, p: usize) -> Signature {
    (
        x.down(p).len(),
        x.up(p).len(),
        x.lower_covers(p).len(),
        x.upper_covers(p).len(),
    )
}

/// Assignment order in which every point after the first of its component
/// is a Hasse neighbour of an earlier point. Returns the order together with
/// that earlier neighbour.
fn hasse_order(x: &FiniteSpace) -> Vec<(usize, Option<usize>)> {
    let mut seen = vec![false; x.len()];
    let mut out = Vec::with_capacity(x.len());
    for s in x.points() {
        if seen[s] {
            continue;
        }
        seen[s] = true;
        out.push((s, None));
        let mut head = out.len() - 1;
        while head < out.len() {
            let (p, _) = out[head];
            head += 1;
            for &q in x.lower_covers(p).iter().chain(x.upper_covers(p)) {
                if !seen[q] {
                    seen[q] = true;
                    out.push((q, Some(p)));
                }
            }
        }
    }
    out
}

struct Search<'a> {
    x: &'a FiniteSpace,
    y: &'a FiniteSpace,
    order: Vec<(usize, Option<usize>)>,
    sig_x: Vec<Signature>,
    sig_y: Vec<Signature>,
    phi: Vec<usize>,
    used: Vec<bool>,
    limit: usize,
    found: Vec<Vec<usize>>,
}

impl Search<'_> {
    fn run(&mut self, depth: usize) {
        if self.found.len() >= self.limit {
            return;
        }
        if depth == self.order.len() {
            self.found.push(self.phi.clone());
            return;
        }
        let (p, anchor) = self.order[depth];
        let candidates: Vec<usize> = match anchor {
            Some(a) => {
                let fa = self.phi[a];
                if self.x.lt(p, a) {
                    self.y.lower_covers(fa).to_vec()
                } else {
                    self.y.upper_covers(fa).to_vec()
                }
            }
            None => self.y.points().collect(),
        };
        for q in candidates {
            if self.used[q] || self.sig_y[q] != self.sig_x[p] {
                continue;
            }
            let consistent = self.order[..depth].iter().all(|&(r, _)| {
                let fr = self.phi[r];
                self.x.le(r, p) == self.y.le(fr, q) && self.x.le(p, r) == self.y.le(q, fr)
            });
            if !consistent {
                continue;
            }
            self.phi[p] = q;
            self.used[q] = true;
            self.run(depth + 1);
            self.used[q] = false;
            self.phi[p] = usize::MAX;
            if self.found.len() >= self.limit {
                return;
            }
        }
    }
}

/// Up to `limit` order isomorphisms `x -> y` as tables.
pub fn isomorphisms(x: &FiniteSpace, y: &FiniteSpace, limit: usize) -> Vec<Vec<usize>> {
    if x.len() != y.len() {
        return Vec::new();
    }
    let sig_x: Vec<Signature> = x.points().map(|p| signature(x, p)).collect();
    let sig_y: Vec<Signature> = y.points().map(|p| signature(y, p)).collect();
    let mut sx = sig_x.clone();
    let mut sy = sig_y.clone();
    sx.sort();
    sy.sort();
    if sx != sy {
        return Vec::new();
    }
    let mut search = Search {
        x,
        y,
        order: hasse_order(x),
        sig_x,
        sig_y,
        phi: vec![usize::MAX; x.len()],
        used: vec![false; y.len()],
        limit,
        found: Vec::new(),
    };
    search.run(0);
    search.found
}

pub fn find_isomorphism(x: &FiniteSpace, y: &FiniteSpace) -> Option<Vec<usize>> {
    isomorphisms(x, y, 1).pop()
}

/// All automorphisms of `x`.
pub fn automorphisms(x: &FiniteSpace) -> Vec<Vec<usize>> {
    isomorphisms(x, x, usize::MAX)
}

/// Homeomorphism between minimal spaces, if one exists.
pub fn minimal_iso_check(x: &FiniteSpace, y: &FiniteSpace) -> Result<Option<OrderMap>> {
    for s in [x, y] {
        if let Some(b) = beat_points(s).first() {
            return Err(Error::NotMinimal(b.point));
        }
    }
    Ok(find_isomorphism(x, y).map(|t| OrderMap::new_unchecked(x.clone(), y.clone(), t)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::space::{product, KhalimskyCircle, KhalimskyInterval};

    fn relabelled(x: &FiniteSpace, perm: &[usize]) -> FiniteSpace {
        let pairs: Vec<(usize, usize)> = x
            .covering_pairs()
            .into_iter()
            .map(|(a, b)| (perm[a], perm[b]))
            .collect();
        let labels = (0..x.len()).map(|i| format!("p{i}")).collect();
        FiniteSpace::build("copy", labels, &pairs).unwrap()
    }

    #[test]
    fn circle_isomorphisms() {
        let c3 = KhalimskyCircle::new(3).unwrap();
        let c4 = KhalimskyCircle::new(4).unwrap();
        let id = minimal_iso_check(c3.space(), c3.space()).unwrap().unwrap();
        assert!(id.table().iter().enumerate().all(|(i, &v)| i == v));
        assert!(minimal_iso_check(c3.space(), c4.space()).unwrap().is_none());
        let c5 = KhalimskyCircle::new(5).unwrap();
        let rot: Vec<usize> = (0..10).map(|p| (p + 4) % 10).collect();
        let copy = relabelled(c5.space(), &rot);
        let phi = minimal_iso_check(c5.space(), &copy).unwrap().unwrap();
        for (a, b) in c5.space().covering_pairs() {
            assert!(copy.lt(phi.apply(a), phi.apply(b)));
        }
    }

    #[test]
    fn automorphism_counts() {
        for n in 2..6 {
            let c = KhalimskyCircle::new(n).unwrap();
            assert_eq!(automorphisms(c.space()).len(), 2 * n);
        }
        let c = KhalimskyCircle::new(4).unwrap();
        let t = product(c.space(), c.space());
        // dihedral group squared, times the factor swap
        assert_eq!(automorphisms(&t).len(), 8 * 8 * 2);
    }

    #[test]
    fn rejects_non_minimal() {
        let i = KhalimskyInterval::new(0, 2).unwrap();
        assert!(matches!(
            minimal_iso_check(i.space(), i.space()),
            Err(Error::NotMinimal(0))
        ));
    }
}
