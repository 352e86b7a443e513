use super::FiniteSpace;
use crate::error::{Error, Result};

/// The Khalimsky circle on `2n` points `a_0, b_0, ..., a_{n-1}, b_{n-1}`,
/// with `[-, b_i] = {a_i, b_i, a_{i+1}}`.
///
/// Point ids double as residues in `Z/2n`: `a_i` is `2i` and `b_i` is `2i+1`,
/// so even ids are the open (minimal) points. The 1-based numbering
/// `a_i = 2i+1`, `b_i = 2i+2` used for product coordinates is available
/// through [`KhalimskyCircle::residue`].
#[derive(Clone, Debug)]
pub struct KhalimskyCircle {
    n: usize,
    space: FiniteSpace,
}

impl KhalimskyCircle {
    pub fn new(n: usize) -> Result<Self> {
        if n < 2 {
            return Err(Error::InvalidParameter(format!(
                "Khalimsky circle needs n >= 2, got {n}"
            )));
        }
        let size = 2 * n;
        let labels = (0..size)
            .map(|z| {
                if z % 2 == 0 {
                    format!("a{}", z / 2)
                } else {
                    format!("b{}", z / 2)
                }
            })
            .collect();
        let space = FiniteSpace::from_relation(format!("S1_{n}"), labels, |x, y| {
            x == y || (x % 2 == 0 && ((x + 1) % size == y || (y + 1) % size == x))
        });
        Ok(KhalimskyCircle { n, space })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn space(&self) -> &FiniteSpace {
        &self.space
    }

    pub fn into_space(self) -> FiniteSpace {
        self.space
    }

    pub fn a(&self, i: usize) -> usize {
        2 * (i % self.n)
    }

    pub fn b(&self, i: usize) -> usize {
        2 * (i % self.n) + 1
    }

    /// 1-based residue of a point: `a_i -> 2i+1`, `b_i -> 2i+2`.
    pub fn residue(&self, p: usize) -> usize {
        p + 1
    }

    /// Point with the given 1-based residue, taken mod `2n`.
    pub fn at_residue(&self, r: i64) -> usize {
        (r - 1).rem_euclid(2 * self.n as i64) as usize
    }
}

/// The subspace `[k, l]` of the Khalimsky line, where even integers sit below
/// their odd neighbours.
#[derive(Clone, Debug)]
pub struct KhalimskyInterval {
    k: i64,
    l: i64,
    space: FiniteSpace,
}

impl KhalimskyInterval {
    pub fn new(k: i64, l: i64) -> Result<Self> {
        if k > l {
            return Err(Error::InvalidParameter(format!("empty interval [{k}, {l}]")));
        }
        let labels = (k..=l).map(|z| z.to_string()).collect();
        let space = FiniteSpace::from_relation(format!("[{k},{l}]"), labels, |x, y| {
            let (a, b) = (k + x as i64, k + y as i64);
            line_le(a, b)
        });
        Ok(KhalimskyInterval { k, l, space })
    }

    pub fn bounds(&self) -> (i64, i64) {
        (self.k, self.l)
    }

    pub fn space(&self) -> &FiniteSpace {
        &self.space
    }

    pub fn point(&self, z: i64) -> usize {
        assert!(self.k <= z && z <= self.l);
        (z - self.k) as usize
    }

    pub fn value(&self, p: usize) -> i64 {
        self.k + p as i64
    }
}

/// Order of the Khalimsky line: `a ≼ b` iff `a = b`, or `|a - b| = 1` and `a` is even.
pub fn line_le(a: i64, b: i64) -> bool {
    a == b || ((a - b).abs() == 1 && a.rem_euclid(2) == 0)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn circle_shape() {
        for n in 2..8 {
            let c = KhalimskyCircle::new(n).unwrap();
            let s = c.space();
            assert_eq!(s.len(), 2 * n);
            assert_eq!(s.maximal_elements().len(), n);
            assert_eq!(s.minimal_elements().len(), n);
            for p in s.points() {
                let others = s.points().filter(|&q| q != p && s.comparable(p, q)).count();
                assert_eq!(others, 2);
            }
            for i in 0..n {
                let mut expected = vec![c.a(i), c.b(i), c.a(i + 1)];
                expected.sort();
                assert_eq!(s.min_open(c.b(i)).points(), expected);
                assert_eq!(s.min_open(c.a(i)).points(), vec![c.a(i)]);
            }
        }
        assert!(KhalimskyCircle::new(1).is_err());
    }

    #[test]
    fn circle_residues() {
        let c = KhalimskyCircle::new(3).unwrap();
        assert_eq!(c.residue(c.a(0)), 1);
        assert_eq!(c.residue(c.b(2)), 6);
        assert_eq!(c.at_residue(7), c.a(0));
        assert_eq!(c.at_residue(0), c.b(2));
        assert_eq!(c.space().label(c.b(1)), "b1");
    }

    #[test]
    fn interval_shape() {
        let i = KhalimskyInterval::new(0, 2).unwrap();
        let s = i.space();
        assert!(s.lt(0, 1) && s.lt(2, 1) && !s.comparable(0, 2));
        assert_eq!(KhalimskyInterval::new(0, 0).unwrap().space().len(), 1);
        assert!(KhalimskyInterval::new(3, 2).is_err());
        let j = KhalimskyInterval::new(-3, 1).unwrap();
        assert!(j.space().lt(j.point(-2), j.point(-3)));
        assert!(j.space().lt(j.point(0), j.point(1)));
    }
}
