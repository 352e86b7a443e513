//! Maps between Khalimsky circles, their lifts to the Khalimsky line and
//! their degrees.

mod classify;
mod interval;
mod recognize;

pub use classify::{circle_fence, classify_homotopic};
pub use interval::{
    cons_fence, is_fence, monotone_normalize, peak_elimination_fence, stan_fence, IntervalMap,
};
pub use recognize::{recognize_circle, CircleNumbering};

use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::space::{line_le, KhalimskyCircle, OrderMap};

/// `ht(z)`: 0 on open (even) points, 1 on closed (odd) points.
pub fn ht(z: i64) -> i64 {
    z.rem_euclid(2)
}

/// Order of `Z/2n` with even residues minimal.
pub fn circle_le(n: usize, a: usize, b: usize) -> bool {
    let size = 2 * n;
    a == b || (a % 2 == 0 && ((a + 1) % size == b || (b + 1) % size == a))
}

/// `q: Z -> Z/2n`.
pub fn quotient(n: usize, z: i64) -> usize {
    z.rem_euclid(2 * n as i64) as usize
}

/// A continuous map `Z/2m -> Z/2n`.
#[derive(Clone, PartialEq, Eq, Hash, Serialize)]
pub struct CircleMap {
    m: usize,
    n: usize,
    values: Vec<usize>,
}

impl CircleMap {
    pub fn new(m: usize, n: usize, values: Vec<usize>) -> Result<Self> {
        if m == 0 || n == 0 {
            return Err(Error::InvalidParameter("circle sizes must be positive".into()));
        }
        if values.len() != 2 * m {
            return Err(Error::InvalidParameter(format!(
                "expected {} values, got {}",
                2 * m,
                values.len()
            )));
        }
        if let Some(&v) = values.iter().find(|&&v| v >= 2 * n) {
            return Err(Error::InvalidParameter(format!("value {v} outside Z/{}", 2 * n)));
        }
        let map = CircleMap { m, n, values };
        if let Some((lo, hi)) = map.violation() {
            return Err(Error::NotOrderPreserving {
                lo,
                hi,
                f_lo: map.values[lo],
                f_hi: map.values[hi],
            });
        }
        Ok(map)
    }

    fn violation(&self) -> Option<(usize, usize)> {
        let size = 2 * self.m;
        for z in (0..size).step_by(2) {
            for hi in [(z + 1) % size, (z + size - 1) % size] {
                if !circle_le(self.n, self.values[z], self.values[hi]) {
                    return Some((z, hi));
                }
            }
        }
        None
    }

    pub fn identity(m: usize) -> Self {
        CircleMap {
            m,
            n: m,
            values: (0..2 * m).collect(),
        }
    }

    /// `ε_a`.
    pub fn constant(m: usize, n: usize, a: usize) -> Self {
        assert!(a < 2 * n);
        CircleMap {
            m,
            n,
            values: vec![a; 2 * m],
        }
    }

    /// `z -> z + shift` on `Z/2m`; `shift` must be even.
    pub fn rotation(m: usize, shift: i64) -> Result<Self> {
        if shift.rem_euclid(2) != 0 {
            return Err(Error::InvalidParameter("rotations shift by even amounts".into()));
        }
        Ok(CircleMap {
            m,
            n: m,
            values: (0..2 * m as i64).map(|z| quotient(m, z + shift)).collect(),
        })
    }

    /// `z -> z mod 2n` for `n` dividing `m`.
    pub fn wrap(m: usize, n: usize) -> Result<Self> {
        if n == 0 || m % n != 0 {
            return Err(Error::InvalidParameter(format!("{n} does not divide {m}")));
        }
        Ok(CircleMap {
            m,
            n,
            values: (0..2 * m).map(|z| z % (2 * n)).collect(),
        })
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn values(&self) -> &[usize] {
        &self.values
    }

    /// `f(p(z))` for any integer `z`.
    pub fn at(&self, z: i64) -> usize {
        self.values[quotient(self.m, z)]
    }

    /// `v -> -v` on the target.
    pub fn reflect_target(&self) -> Self {
        let size = 2 * self.n;
        CircleMap {
            m: self.m,
            n: self.n,
            values: self.values.iter().map(|&v| (size - v) % size).collect(),
        }
    }

    pub fn as_order_map(&self) -> Result<OrderMap> {
        let s = KhalimskyCircle::new(self.m)?;
        let t = KhalimskyCircle::new(self.n)?;
        OrderMap::new(s.into_space(), t.into_space(), self.values.clone())
    }

    pub fn from_order_map(f: &OrderMap) -> Result<Self> {
        let (m, n) = (f.source().len() / 2, f.target().len() / 2);
        let want_s = KhalimskyCircle::new(m)?;
        let want_t = KhalimskyCircle::new(n)?;
        if !f.source().same_as(want_s.space()) || !f.target().same_as(want_t.space()) {
            return Err(Error::NotApplicable("map is not between Khalimsky circles".into()));
        }
        CircleMap::new(m, n, f.table().to_vec())
    }

    /// Lift of `f ∘ p` restricted to `[k, l]` starting at `a`.
    pub fn lift(&self, k: i64, l: i64, a: i64) -> Result<LiftRecord> {
        if self.n < 2 {
            return Err(Error::NotApplicable("lifts need a target circle with n >= 2".into()));
        }
        if k > l {
            return Err(Error::InvalidParameter(format!("empty interval [{k}, {l}]")));
        }
        let base = self.at(k);
        if quotient(self.n, a) != base {
            return Err(Error::BaseMismatch { start: a, base: base as u32 });
        }
        let values = lift_values(self.n, (k..=l).map(|z| self.at(z)), a)?;
        Ok(LiftRecord {
            k,
            l,
            m: self.m,
            n: self.n,
            start: a,
            values,
        })
    }

    /// `(f̃(2m) - f̃(0)) / 2n`.
    pub fn degree(&self) -> Result<i64> {
        let rec = self.lift(0, 2 * self.m as i64, self.values[0] as i64)?;
        Ok(rec.degree().expect("full loop"))
    }

    pub fn to_text(&self) -> String {
        let vals: Vec<String> = self.values.iter().map(|v| v.to_string()).collect();
        format!("circlemap {} {} {}", self.m, self.n, vals.join(" "))
    }

    pub fn parse(text: &str) -> Result<Self> {
        let bad = |message: &str| Error::Parse {
            line: 1,
            message: message.to_string(),
        };
        let mut words = text.split_whitespace();
        if words.next() != Some("circlemap") {
            return Err(bad("expected 'circlemap m n v0 ...'"));
        }
        let nums = words
            .map(|w| w.parse::<usize>())
            .collect::<std::result::Result<Vec<_>, _>>()
            .map_err(|e| bad(&e.to_string()))?;
        if nums.len() < 2 {
            return Err(bad("missing sizes"));
        }
        CircleMap::new(nums[0], nums[1], nums[2..].to_vec())
    }
}

impl fmt::Debug for CircleMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "CircleMap(Z/{} -> Z/{}: {:?})", 2 * self.m, 2 * self.n, self.values)
    }
}

/// Lifts a walk in `Z/2n` to `Z` starting from `a`. Consecutive values must
/// be equal or adjacent.
pub(crate) fn lift_values(n: usize, walk: impl IntoIterator<Item = usize>, a: i64) -> Result<Vec<i64>> {
    let size = 2 * n;
    let mut out: Vec<i64> = Vec::new();
    let mut prev: Option<usize> = None;
    for v in walk {
        let next = match prev {
            None => a,
            Some(p) => {
                let d = (v + size - p) % size;
                let last = *out.last().expect("non-empty");
                if d == 0 {
                    last
                } else if d == 1 {
                    last + 1
                } else if d == size - 1 {
                    last - 1
                } else {
                    return Err(Error::NotApplicable(format!(
                        "values {p} and {v} are not adjacent in Z/{size}"
                    )));
                }
            }
        };
        out.push(next);
        prev = Some(v);
    }
    Ok(out)
}

/// A lift `f̃: [k, l] -> Z` of `f ∘ p` with `q ∘ f̃ = f ∘ p`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LiftRecord {
    pub k: i64,
    pub l: i64,
    pub m: usize,
    pub n: usize,
    pub start: i64,
    pub values: Vec<i64>,
}

impl LiftRecord {
    pub fn value(&self, z: i64) -> i64 {
        self.values[(z - self.k) as usize]
    }

    /// Defined when the interval is one full loop.
    pub fn degree(&self) -> Option<i64> {
        if self.l - self.k != 2 * self.m as i64 {
            return None;
        }
        let span = self.value(self.l) - self.value(self.k);
        debug_assert_eq!(span.rem_euclid(2 * self.n as i64), 0);
        Some(span / (2 * self.n as i64))
    }

    pub fn as_interval_map(&self) -> IntervalMap {
        IntervalMap::new(self.k, self.values.clone()).expect("lifts are continuous")
    }

    /// `q ∘ f̃ = f ∘ p` and continuity.
    pub fn check(&self, f: &CircleMap) -> bool {
        (self.k..=self.l).all(|z| quotient(self.n, self.value(z)) == f.at(z))
            && self.values.windows(2).zip(self.k..).all(|(w, z)| {
                if line_le(z, z + 1) {
                    line_le(w[0], w[1])
                } else {
                    line_le(w[1], w[0])
                }
            })
    }
}

/// Maps a window `[s, s + 2m]` of an interval map back to the circle. The
/// values at `s` and `s + 2m` must agree mod `2n`.
pub(crate) fn descend(h: &IntervalMap, s: i64, m: usize, n: usize) -> CircleMap {
    let mut values = vec![0; 2 * m];
    for z in s..s + 2 * m as i64 {
        values[quotient(m, z)] = quotient(n, h.value(z));
    }
    debug_assert_eq!(quotient(n, h.value(s)), quotient(n, h.value(s + 2 * m as i64)));
    CircleMap::new(m, n, values).expect("window of a continuous map")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn continuity_rules() {
        assert!(CircleMap::new(2, 2, vec![0, 1, 2, 3]).is_ok());
        assert!(CircleMap::new(2, 2, vec![1, 0, 3, 2]).is_err());
        assert!(CircleMap::new(2, 2, vec![0, 2, 2, 2]).is_err());
        assert!(CircleMap::new(2, 2, vec![0, 0, 0, 1]).is_ok());
        // a closed point may not go to an open one unless its neighbours follow
        assert!(CircleMap::new(2, 2, vec![1, 0, 1, 1]).is_err());
    }

    #[test]
    fn quotient_of_an_interval_is_continuous() {
        for m in 2..6 {
            for z in 0..(2 * m as i64) {
                let (a, b) = (quotient(m, z), quotient(m, z + 1));
                if line_le(z, z + 1) {
                    assert!(circle_le(m, a, b));
                } else {
                    assert!(circle_le(m, b, a));
                }
            }
        }
    }

    #[test]
    fn lift_examples() {
        let c = CircleMap::constant(3, 2, 2);
        let rec = c.lift(0, 6, 6).unwrap();
        assert!(rec.values.iter().all(|&v| v == 6));
        assert_eq!(rec.degree(), Some(0));
        let id = CircleMap::identity(3);
        let rec = id.lift(0, 6, 0).unwrap();
        assert_eq!(rec.values, (0..=6).collect::<Vec<i64>>());
        let double = CircleMap::wrap(4, 2).unwrap();
        let rec = double.lift(0, 8, 0).unwrap();
        assert_eq!(rec.value(8) - rec.value(0), 8);
        assert!(rec.check(&double));
        assert!(matches!(double.lift(0, 8, 1), Err(Error::BaseMismatch { start: 1, base: 0 })));
        let tiny = CircleMap::new(2, 1, vec![0, 1, 0, 1]).unwrap();
        assert!(matches!(tiny.lift(0, 4, 0), Err(Error::NotApplicable(_))));
    }

    #[test]
    fn degrees() {
        assert_eq!(CircleMap::identity(4).degree().unwrap(), 1);
        assert_eq!(CircleMap::constant(4, 3, 5).degree().unwrap(), 0);
        assert_eq!(CircleMap::wrap(4, 2).unwrap().degree().unwrap(), 2);
        assert_eq!(CircleMap::identity(4).reflect_target().degree().unwrap(), -1);
        assert_eq!(CircleMap::rotation(2, 2).unwrap().degree().unwrap(), 1);
    }

    #[test]
    fn text_round_trip() {
        let f = CircleMap::wrap(4, 2).unwrap();
        assert_eq!(f.to_text(), "circlemap 4 2 0 1 2 3 0 1 2 3");
        assert_eq!(CircleMap::parse(&f.to_text()).unwrap(), f);
        assert!(CircleMap::parse("circlemap 2 2 0 2 2 2").is_err());
    }

    #[test]
    fn order_map_round_trip() {
        let f = CircleMap::wrap(4, 2).unwrap();
        let g = f.as_order_map().unwrap();
        assert_eq!(CircleMap::from_order_map(&g).unwrap(), f);
    }
}
