//! Continuous maps from an interval of the Khalimsky line into the line, and
//! the fences that straighten them with both ends fixed.

use super::ht;
use crate::error::{Error, Result};
use crate::homotopy::Comparison;
use crate::space::line_le;

/// A continuous map `[k, l] -> Z`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct IntervalMap {
    k: i64,
    values: Vec<i64>,
}

impl IntervalMap {
    pub fn new(k: i64, values: Vec<i64>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::Empty("interval map with no values".into()));
        }
        for (i, w) in values.windows(2).enumerate() {
            let z = k + i as i64;
            let ok = if line_le(z, z + 1) {
                line_le(w[0], w[1])
            } else {
                line_le(w[1], w[0])
            };
            if !ok {
                return Err(Error::NotContinuous {
                    stage: "interval map".into(),
                    lo: z,
                    hi: z + 1,
                });
            }
        }
        Ok(IntervalMap { k, values })
    }

    pub fn constant(k: i64, l: i64, a: i64) -> Self {
        IntervalMap {
            k,
            values: vec![a; (l - k + 1) as usize],
        }
    }

    pub fn k(&self) -> i64 {
        self.k
    }

    pub fn l(&self) -> i64 {
        self.k + self.values.len() as i64 - 1
    }

    pub fn value(&self, z: i64) -> i64 {
        self.values[(z - self.k) as usize]
    }

    pub fn values(&self) -> &[i64] {
        &self.values
    }

    pub fn is_monotone(&self) -> bool {
        self.values.windows(2).all(|w| w[0] <= w[1]) || self.values.windows(2).all(|w| w[0] >= w[1])
    }

    /// Pointwise comparison in the order of the line.
    pub fn compare(&self, other: &IntervalMap) -> Option<Comparison> {
        if self.k != other.k || self.values.len() != other.values.len() {
            return None;
        }
        let (mut below, mut above) = (true, true);
        for (&a, &b) in self.values.iter().zip(&other.values) {
            if a != b {
                below &= line_le(a, b);
                above &= line_le(b, a);
            }
        }
        match (below, above) {
            (true, true) => Some(Comparison::Equal),
            (true, false) => Some(Comparison::Below),
            (false, true) => Some(Comparison::Above),
            _ => None,
        }
    }

    fn shifted(&self, c: i64) -> IntervalMap {
        debug_assert_eq!(c.rem_euclid(2), 0);
        IntervalMap {
            k: self.k,
            values: self.values.iter().map(|v| v + c).collect(),
        }
    }
}

/// Consecutive maps share the domain and are pointwise comparable.
pub fn is_fence(maps: &[IntervalMap]) -> bool {
    maps.windows(2).all(|w| w[0].compare(&w[1]).is_some())
}

fn push_new(out: &mut Vec<IntervalMap>, h: IntervalMap) {
    if out.last() != Some(&h) {
        out.push(h);
    }
}

/// Flattens interior strict local extrema, leftmost first, each onto the
/// value of its neighbours. Every step moves one plateau by one in a single
/// direction and keeps both ends fixed; the last map is monotone.
pub fn peak_elimination_fence(f: &IntervalMap) -> Vec<IntervalMap> {
    let mut out = vec![f.clone()];
    let mut cur = f.values.clone();
    loop {
        let mut changed = false;
        let mut s = 0;
        while s < cur.len() {
            let mut t = s;
            while t + 1 < cur.len() && cur[t + 1] == cur[s] {
                t += 1;
            }
            if s > 0 && t + 1 < cur.len() {
                let (left, right, v) = (cur[s - 1], cur[t + 1], cur[s]);
                if (left < v && right < v) || (left > v && right > v) {
                    for x in &mut cur[s..=t] {
                        *x = left;
                    }
                    changed = true;
                    break;
                }
            }
            s = t + 1;
        }
        if !changed {
            break;
        }
        let next = IntervalMap::new(f.k, cur.clone()).expect("flattening keeps continuity");
        push_new(&mut out, next);
    }
    out
}

/// Fence from a map with equal end values to the constant at that value.
pub fn cons_fence(f: &IntervalMap) -> Result<Vec<IntervalMap>> {
    let (a, b) = (f.value(f.k), f.value(f.l()));
    if a != b {
        return Err(Error::PreconditionViolated(format!("f(k) = {a} differs from f(l) = {b}")));
    }
    let out = peak_elimination_fence(f);
    debug_assert!(out.last().unwrap().values.iter().all(|&v| v == a));
    Ok(out)
}

fn check_stan_preconditions(g: &IntervalMap) -> Result<()> {
    let (k, l) = (g.k, g.l());
    if g.value(k) > g.value(l) {
        return Err(Error::PreconditionViolated(format!(
            "g(k) = {} exceeds g(l) = {}",
            g.value(k),
            g.value(l)
        )));
    }
    if ht(k) != ht(g.value(k)) {
        return Err(Error::PreconditionViolated(format!(
            "ht(k) = {} differs from ht(g(k)) = {}",
            ht(k),
            ht(g.value(k))
        )));
    }
    Ok(())
}

/// `h_g(z) = min(z + g(k) - k, g(l))`.
pub fn monotone_normalize(g: &IntervalMap) -> Result<IntervalMap> {
    check_stan_preconditions(g)?;
    let (k, l) = (g.k, g.l());
    let (gk, gl) = (g.value(k), g.value(l));
    let values = (k..=l).map(|z| (z + gk - k).min(gl)).collect();
    IntervalMap::new(k, values).map_err(|_| Error::NotContinuous {
        stage: "h_g".into(),
        lo: k,
        hi: l,
    })
}

/// Fence `f ~ h_f` with both ends fixed: peak elimination to a monotone
/// map, then the staircase moves `f_i ~ g_{i+1} ~ f_{i+1}`.
pub fn stan_fence(f: &IntervalMap) -> Result<Vec<IntervalMap>> {
    check_stan_preconditions(f)?;
    let mut out = peak_elimination_fence(f);
    let (k, l) = (f.k, f.l());
    let c = f.value(k) - k;
    // work with G = F - c, so that G(k) = k
    let mut g: Vec<i64> = out.last().unwrap().values.iter().map(|v| v - c).collect();
    let at = |z: i64| (z - k) as usize;
    loop {
        let Some(k0) = (k..l).find(|&z| g[at(z + 1)] == g[at(z)]) else {
            break;
        };
        debug_assert_eq!(g[at(k0)], k0);
        if g[at(l)] == k0 {
            break;
        }
        let l0 = (k0..=l).rev().find(|&z| g[at(z)] == k0).unwrap();
        let mut g1 = g.clone();
        for z in k0..=l0 + 1 {
            g1[at(z)] = if ht(z) == ht(k0) { k0 } else { k0 + 1 };
        }
        let mut f1 = g.clone();
        f1[at(k0)] = k0;
        for z in k0 + 1..=l0 + 1 {
            f1[at(z)] = k0 + 1;
        }
        for t in [&g1, &f1] {
            let h = IntervalMap::new(k, t.clone())?.shifted(c);
            push_new(&mut out, h);
        }
        g = f1;
    }
    debug_assert_eq!(out.last(), Some(&monotone_normalize(f)?));
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn all_maps(k: i64, l: i64, lo: i64, hi: i64) -> Vec<IntervalMap> {
        let mut out = Vec::new();
        let mut cur = vec![lo; (l - k + 1) as usize];
        loop {
            if let Ok(f) = IntervalMap::new(k, cur.clone()) {
                out.push(f);
            }
            let mut i = 0;
            loop {
                if i == cur.len() {
                    return out;
                }
                if cur[i] < hi {
                    cur[i] += 1;
                    break;
                }
                cur[i] = lo;
                i += 1;
            }
        }
    }

    #[test]
    fn normalize_examples() {
        let id = IntervalMap::new(0, (0..=4).collect()).unwrap();
        assert_eq!(monotone_normalize(&id).unwrap(), id);
        let zero = IntervalMap::constant(0, 4, 0);
        assert_eq!(monotone_normalize(&zero).unwrap(), zero);
        let g = IntervalMap::new(0, vec![0, 1, 2, 2, 2, 3, 4]).unwrap();
        assert_eq!(monotone_normalize(&g).unwrap().values(), &[0, 1, 2, 3, 4, 4, 4]);
        let down = IntervalMap::new(0, vec![2, 1, 0]).unwrap();
        assert!(matches!(monotone_normalize(&down), Err(Error::PreconditionViolated(_))));
        let odd = IntervalMap::constant(0, 2, 1);
        assert!(matches!(monotone_normalize(&odd), Err(Error::PreconditionViolated(_))));
    }

    #[test]
    fn continuity_of_interval_maps() {
        assert!(IntervalMap::new(0, vec![0, 1, 0]).is_ok());
        assert!(IntervalMap::new(0, vec![1, 0, 1]).is_err());
        assert!(IntervalMap::new(1, vec![1, 0, 1]).is_ok());
        assert!(IntervalMap::new(0, vec![0, 2]).is_err());
    }

    #[test]
    fn peak_elimination_reaches_monotone_maps() {
        let maps = all_maps(0, 6, 0, 6);
        assert!(!maps.is_empty());
        for f in &maps {
            let fence = peak_elimination_fence(f);
            assert!(is_fence(&fence));
            let last = fence.last().unwrap();
            assert!(last.is_monotone(), "{f:?}");
            assert_eq!(last.value(0), f.value(0));
            assert_eq!(last.value(6), f.value(6));
        }
    }

    #[test]
    fn cons_reaches_the_constant() {
        for f in all_maps(0, 6, 0, 6) {
            if f.value(0) == f.value(6) {
                let fence = cons_fence(&f).unwrap();
                assert!(is_fence(&fence));
                assert_eq!(fence.last().unwrap(), &IntervalMap::constant(0, 6, f.value(0)));
            } else {
                assert!(cons_fence(&f).is_err());
            }
        }
    }

    #[test]
    fn stan_fences_replay() {
        for (k, l) in [(0, 6), (1, 7), (-3, 2)] {
            for f in all_maps(k, l, -2, 5) {
                if f.value(k) > f.value(l) || ht(k) != ht(f.value(k)) {
                    continue;
                }
                let fence = stan_fence(&f).unwrap();
                assert!(is_fence(&fence), "{f:?}");
                assert_eq!(fence[0], f);
                assert_eq!(fence.last().unwrap(), &monotone_normalize(&f).unwrap());
                for h in &fence {
                    assert_eq!((h.value(k), h.value(l)), (f.value(k), f.value(l)));
                }
            }
        }
    }
}
