//! Order complexes, face posets and barycentric subdivision.

use std::collections::{BTreeSet, HashMap};
use std::fmt::Write;

use crate::error::{Error, Result};
use crate::pointset::PointSet;
use crate::space::FiniteSpace;

/// A finite abstract simplicial complex stored by its facets.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SimplicialComplex {
    vertices: Vec<String>,
    /// Sorted vertex lists, themselves sorted.
    facets: Vec<Vec<usize>>,
}

impl SimplicialComplex {
    /// Builds a complex from any generating simplices; non-maximal ones are
    /// dropped. Every vertex must lie in some simplex.
    pub fn new(vertices: Vec<String>, simplices: Vec<Vec<usize>>) -> Result<Self> {
        let n = vertices.len();
        let mut sets: Vec<BTreeSet<usize>> = Vec::new();
        for s in simplices {
            if let Some(&v) = s.iter().find(|&&v| v >= n) {
                return Err(Error::InvalidParameter(format!("vertex {v} out of range")));
            }
            let s: BTreeSet<usize> = s.into_iter().collect();
            if s.is_empty() {
                return Err(Error::InvalidParameter("empty simplex".into()));
            }
            sets.push(s);
        }
        sets.sort();
        sets.dedup();
        let facets: Vec<Vec<usize>> = sets
            .iter()
            .filter(|s| !sets.iter().any(|t| t != *s && s.is_subset(t)))
            .map(|s| s.iter().copied().collect())
            .collect();
        let mut used = vec![false; n];
        for f in &facets {
            for &v in f {
                used[v] = true;
            }
        }
        if let Some(v) = used.iter().position(|u| !u) {
            return Err(Error::InvalidParameter(format!("vertex {v} lies in no simplex")));
        }
        let mut facets = facets;
        facets.sort();
        Ok(SimplicialComplex { vertices, facets })
    }

    /// The cycle on `n >= 3` vertices.
    pub fn cycle(n: usize) -> Result<Self> {
        if n < 3 {
            return Err(Error::InvalidParameter(format!("a cycle needs 3 vertices, got {n}")));
        }
        let vertices = (0..n).map(|i| format!("v{i}")).collect();
        SimplicialComplex::new(vertices, (0..n).map(|i| vec![i, (i + 1) % n]).collect())
    }

    pub fn vertices(&self) -> &[String] {
        &self.vertices
    }

    pub fn facets(&self) -> &[Vec<usize>] {
        &self.facets
    }

    pub fn dimension(&self) -> Option<usize> {
        self.facets.iter().map(|f| f.len() - 1).max()
    }

    /// All nonempty faces, sorted by size and then lexicographically.
    pub fn simplices(&self) -> Vec<Vec<usize>> {
        let mut all = BTreeSet::new();
        for f in &self.facets {
            for mask in 1u64..(1 << f.len()) {
                let s: Vec<usize> = (0..f.len()).filter(|&i| mask >> i & 1 == 1).map(|i| f[i]).collect();
                all.insert(s);
            }
        }
        let mut v: Vec<Vec<usize>> = all.into_iter().collect();
        v.sort_by(|a, b| a.len().cmp(&b.len()).then(a.cmp(b)));
        v
    }

    /// Number of faces in each dimension.
    pub fn f_vector(&self) -> Vec<usize> {
        let mut out = vec![0; self.dimension().map_or(0, |d| d + 1)];
        for s in self.simplices() {
            out[s.len() - 1] += 1;
        }
        out
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.f_vector()
            .iter()
            .enumerate()
            .map(|(d, &c)| if d % 2 == 0 { c as i64 } else { -(c as i64) })
            .sum()
    }

    /// `asc <V> <F>` followed by one facet per line.
    pub fn to_asc(&self) -> String {
        let mut out = format!("asc {} {}\n", self.vertices.len(), self.facets.len());
        for f in &self.facets {
            let words: Vec<String> = f.iter().map(|v| v.to_string()).collect();
            let _ = writeln!(out, "{}", words.join(" "));
        }
        out
    }

    pub fn parse_asc(text: &str) -> Result<Self> {
        let mut lines = text
            .lines()
            .enumerate()
            .filter(|(_, l)| !l.trim().is_empty() && !l.trim().starts_with('#'));
        let (_, header) = lines.next().ok_or_else(|| Error::Empty("empty complex file".into()))?;
        let words: Vec<&str> = header.split_whitespace().collect();
        let (v, f) = match words.as_slice() {
            ["asc", v, f] => (v.parse::<usize>().ok(), f.parse::<usize>().ok()),
            _ => (None, None),
        };
        let (Some(v), Some(f)) = (v, f) else {
            return Err(Error::Parse {
                line: 1,
                message: "expected 'asc <V> <F>'".into(),
            });
        };
        let mut facets = Vec::new();
        for (idx, line) in lines {
            let facet = line
                .split_whitespace()
                .map(|w| w.parse::<usize>())
                .collect::<std::result::Result<Vec<_>, _>>()
                .map_err(|e| Error::Parse {
                    line: idx + 1,
                    message: e.to_string(),
                })?;
            facets.push(facet);
        }
        if facets.len() != f {
            return Err(Error::Parse {
                line: 0,
                message: format!("expected {f} facets, found {}", facets.len()),
            });
        }
        SimplicialComplex::new((0..v).map(|i| format!("v{i}")).collect(), facets)
    }
}

/// The complex of chains of `x`; its facets are the maximal chains.
pub fn order_complex(x: &FiniteSpace) -> SimplicialComplex {
    let mut facets = Vec::new();
    let mut chain = Vec::new();
    for p in x.minimal_elements().iter() {
        chain.push(p);
        extend_chain(x, &mut chain, &mut facets);
        chain.pop();
    }
    SimplicialComplex {
        vertices: x.labels().to_vec(),
        facets: {
            for f in facets.iter_mut() {
                f.sort();
            }
            facets.sort();
            facets
        },
    }
}

fn extend_chain(x: &FiniteSpace, chain: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
    let top = *chain.last().unwrap();
    let covers = x.upper_covers(top);
    if covers.is_empty() {
        out.push(chain.clone());
        return;
    }
    for &q in covers {
        chain.push(q);
        extend_chain(x, chain, out);
        chain.pop();
    }
}

/// The poset of nonempty simplices of `k` ordered by inclusion.
pub fn face_poset(k: &SimplicialComplex) -> FiniteSpace {
    let simplices = k.simplices();
    let index: HashMap<&Vec<usize>, usize> = simplices.iter().enumerate().map(|(i, s)| (s, i)).collect();
    let labels = simplices
        .iter()
        .map(|s| {
            let names: Vec<&str> = s.iter().map(|&v| k.vertices[v].as_str()).collect();
            format!("{{{}}}", names.join(","))
        })
        .collect();
    let mut pairs = Vec::new();
    for (i, s) in simplices.iter().enumerate() {
        if s.len() < 2 {
            continue;
        }
        for drop in 0..s.len() {
            let mut t = s.clone();
            t.remove(drop);
            pairs.push((index[&t], i));
        }
    }
    FiniteSpace::build("face_poset", labels, &pairs).expect("inclusion is acyclic")
}

/// The barycentric subdivision, as the order complex of the face poset.
pub fn barycentric(k: &SimplicialComplex) -> SimplicialComplex {
    order_complex(&face_poset(k))
}

/// Hasse diagram in DOT, edges from lower to higher points.
pub fn hasse_dot(x: &FiniteSpace) -> Result<String> {
    if x.is_empty() {
        return Err(Error::Empty("cannot export an empty space".into()));
    }
    let mut out = format!("digraph \"{}\" {{\n  rankdir=BT;\n", x.name());
    for p in x.points() {
        let _ = writeln!(out, "  {p} [label=\"{}\"];", x.label(p).replace('"', "'"));
    }
    for (lo, hi) in x.covering_pairs() {
        let _ = writeln!(out, "  {lo} -> {hi};");
    }
    out.push_str("}\n");
    Ok(out)
}

pub fn export_complex(k: &SimplicialComplex, path: &std::path::Path) -> Result<()> {
    if k.facets.is_empty() {
        return Err(Error::Empty("cannot export an empty complex".into()));
    }
    std::fs::write(path, k.to_asc())?;
    Ok(())
}

pub fn export_hasse_dot(x: &FiniteSpace, path: &std::path::Path) -> Result<()> {
    std::fs::write(path, hasse_dot(x)?)?;
    Ok(())
}

/// Vertices of a simplex of `k` as a set over the vertex ids.
pub fn simplex_set(k: &SimplicialComplex, s: &[usize]) -> PointSet {
    PointSet::from_points(k.vertices.len(), s.iter().copied())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::homotopy::{find_isomorphism, minimal_iso_check};
    use crate::space::{product, KhalimskyCircle};

    #[test]
    fn circle_order_complex_is_a_cycle() {
        for n in 2..=6 {
            let c = KhalimskyCircle::new(n).unwrap();
            let k = order_complex(c.space());
            assert_eq!(k.f_vector(), vec![2 * n, 2 * n]);
            assert_eq!(k.euler_characteristic(), 0);
            if n >= 3 {
                let sd = barycentric(&SimplicialComplex::cycle(n).unwrap());
                assert!(find_isomorphism(&face_poset(&k), &face_poset(&sd)).is_some());
            }
        }
    }

    #[test]
    fn singleton_and_edge() {
        let k = order_complex(&FiniteSpace::singleton("p"));
        assert_eq!(k.facets(), &[vec![0]]);
        let edge = SimplicialComplex::new(vec!["v".into(), "w".into()], vec![vec![0, 1]]).unwrap();
        let f = face_poset(&edge);
        assert_eq!(f.len(), 3);
        assert_eq!(f.maximal_elements().len(), 1);
    }

    #[test]
    fn face_poset_of_a_cycle_is_a_circle() {
        for n in 3..=6 {
            let chi = face_poset(&SimplicialComplex::cycle(n).unwrap());
            let c = KhalimskyCircle::new(n).unwrap();
            assert!(minimal_iso_check(&chi, c.space()).unwrap().is_some());
        }
    }

    #[test]
    fn torus_chains() {
        let c = KhalimskyCircle::new(3).unwrap();
        let t = product(c.space(), c.space());
        let k = order_complex(&t);
        // each of the 9 maximal points has 2 × 2 lower covers paired in 2 orders
        assert_eq!(k.facets().len(), 9 * 4 * 2);
        for f in k.facets() {
            for w in f.windows(2) {
                assert!(t.comparable(w[0], w[1]));
            }
        }
    }

    #[test]
    fn barycentric_counts() {
        let tri = SimplicialComplex::new(
            (0..4).map(|i| i.to_string()).collect(),
            vec![vec![0, 1, 2], vec![2, 3]],
        )
        .unwrap();
        assert_eq!(barycentric(&tri).facets().len(), 6 + 2);
    }

    #[test]
    fn validation_and_text() {
        assert!(SimplicialComplex::new(vec!["a".into(), "b".into()], vec![vec![0]]).is_err());
        let k = SimplicialComplex::new(
            (0..3).map(|i| i.to_string()).collect(),
            vec![vec![0, 1], vec![0], vec![1, 2]],
        )
        .unwrap();
        assert_eq!(k.facets().len(), 2);
        assert_eq!(SimplicialComplex::parse_asc(&k.to_asc()).unwrap().facets(), k.facets());
        let cyc = SimplicialComplex::cycle(4).unwrap();
        assert_eq!(cyc.to_asc().lines().count(), 5);
    }

    #[test]
    fn dot_export() {
        let c = KhalimskyCircle::new(2).unwrap();
        let dot = hasse_dot(c.space()).unwrap();
        assert_eq!(dot.matches("->").count(), 4);
        assert_eq!(dot.matches("[label=").count(), 4);
        let empty = FiniteSpace::build("e", Vec::new(), &[]).unwrap();
        assert!(hasse_dot(&empty).is_err());
    }
}
