//! Homotopy classification of circle maps and explicit fences between
//! homotopic ones.

use super::interval::{cons_fence, stan_fence, IntervalMap};
use super::{descend, CircleMap};
use crate::error::{Error, Result};

fn check_pair(f: &CircleMap, g: &CircleMap) -> Result<()> {
    if f.m() != g.m() || f.n() != g.n() {
        return Err(Error::MismatchedSizes);
    }
    if f.m() < 2 || f.n() < 2 {
        return Err(Error::NotApplicable("classification needs m, n >= 2".into()));
    }
    Ok(())
}

/// `f ~ g` iff `f = g`, or `deg f = deg g` and `|deg f| < m/n`.
pub fn classify_homotopic(f: &CircleMap, g: &CircleMap) -> Result<bool> {
    check_pair(f, g)?;
    if f == g {
        return Ok(true);
    }
    let (df, dg) = (f.degree()?, g.degree()?);
    Ok(df == dg && (df.unsigned_abs() as usize) * f.n() < f.m())
}

/// A fence of circle maps from `f` to `g` when they are homotopic, built
/// from lifts, peak elimination and the staircase normal form.
pub fn circle_fence(f: &CircleMap, g: &CircleMap) -> Result<Option<Vec<CircleMap>>> {
    if !classify_homotopic(f, g)? {
        return Ok(None);
    }
    if f == g {
        return Ok(Some(vec![f.clone()]));
    }
    let d = f.degree()?;
    if d < 0 {
        let fence = circle_fence(&f.reflect_target(), &g.reflect_target())?
            .expect("reflection preserves the classification");
        return Ok(Some(fence.iter().map(CircleMap::reflect_target).collect()));
    }
    let mut out = to_normal_form(f, d)?;
    let mut back = to_normal_form(g, d)?;
    debug_assert_eq!(out.last(), back.last());
    back.pop();
    back.reverse();
    out.extend(back);
    out.dedup();
    Ok(Some(out))
}

fn lifted_fence(f: &CircleMap, s: i64, fence: fn(&IntervalMap) -> Result<Vec<IntervalMap>>) -> Result<Vec<CircleMap>> {
    let m = f.m() as i64;
    let lift = f.lift(s, s + 2 * m, f.at(s) as i64)?;
    let stages = fence(&lift.as_interval_map())?;
    Ok(stages.iter().map(|h| descend(h, s, f.m(), f.n())).collect())
}

fn extend(out: &mut Vec<CircleMap>, more: Vec<CircleMap>) {
    for h in more {
        if out.last() != Some(&h) {
            out.push(h);
        }
    }
}

/// Fence from `f` to a canonical map depending only on the degree: the
/// constant at 0 for degree 0, and `z -> min(z, 2nd)` for degree `d > 0`.
fn to_normal_form(f: &CircleMap, d: i64) -> Result<Vec<CircleMap>> {
    let (m, n) = (f.m(), f.n());
    let size = 2 * n;
    let mut out = vec![f.clone()];
    if d == 0 {
        let flat = lifted_fence(f, 0, cons_fence)?;
        extend(&mut out, flat);
        let start = out.last().unwrap().values()[0];
        // walk the constant value around the circle down to 0
        for v in (0..start).rev() {
            out.push(CircleMap::constant(m, n, v));
        }
        return Ok(out);
    }
    loop {
        let cur = out.last().unwrap().clone();
        let k = cur.values()[0];
        if k == 0 {
            break;
        }
        if k % 2 == 0 {
            let stages = lifted_fence(&cur, 0, stan_fence)?;
            let h = stages.last().unwrap().clone();
            extend(&mut out, stages);
            let mut v = h.values().to_vec();
            v[2 * m - 1] = (k + 1) % size;
            let f1 = CircleMap::new(m, n, v.clone())?;
            v[0] = (k + 1) % size;
            let f2 = CircleMap::new(m, n, v)?;
            extend(&mut out, vec![f1, f2]);
        } else {
            let stages = lifted_fence(&cur, 2 * m as i64 - 1, stan_fence)?;
            extend(&mut out, stages);
        }
        debug_assert_eq!(out.last().unwrap().values()[0], (k + 1) % size);
    }
    let stages = lifted_fence(out.last().unwrap(), 0, stan_fence)?;
    extend(&mut out, stages);
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::homotopy::compare_tables;
    use crate::space::KhalimskyCircle;

    fn replays(fence: &[CircleMap], n: usize) -> bool {
        let t = KhalimskyCircle::new(n).unwrap();
        fence
            .windows(2)
            .all(|w| compare_tables(t.space(), w[0].values(), w[1].values()).is_some())
    }

    #[test]
    fn classification_examples() {
        let a = CircleMap::new(2, 2, vec![0, 0, 0, 0]).unwrap();
        let b = CircleMap::new(2, 2, vec![0, 1, 0, 0]).unwrap();
        assert!(classify_homotopic(&a, &b).unwrap());
        let id = CircleMap::identity(2);
        let rot = CircleMap::rotation(2, 2).unwrap();
        assert!(!classify_homotopic(&id, &rot).unwrap());
        assert!(circle_fence(&id, &rot).unwrap().is_none());
        let wrap = CircleMap::wrap(6, 2).unwrap();
        assert_eq!(wrap.degree().unwrap(), 3);
        let f = CircleMap::new(6, 2, vec![0, 1, 2, 3, 3, 3, 3, 3, 3, 3, 3, 3]).unwrap();
        let g = CircleMap::new(6, 2, vec![0, 0, 0, 1, 2, 3, 3, 3, 3, 3, 3, 3]).unwrap();
        assert_eq!(f.degree().unwrap(), 1);
        assert_eq!(g.degree().unwrap(), 1);
        assert!(classify_homotopic(&f, &g).unwrap());
        let fence = circle_fence(&f, &g).unwrap().unwrap();
        assert!(replays(&fence, 2));
        assert_eq!((fence.first(), fence.last()), (Some(&f), Some(&g)));
        assert!(matches!(
            classify_homotopic(&f, &CircleMap::identity(2)),
            Err(Error::MismatchedSizes)
        ));
    }

    #[test]
    fn fences_for_every_homotopic_pair_of_small_maps() {
        for (m, n) in [(2, 2), (3, 2), (4, 2), (3, 3)] {
            let maps: Vec<CircleMap> = all_circle_maps(m, n);
            for f in &maps {
                for g in &maps {
                    if let Some(fence) = circle_fence(f, g).unwrap() {
                        assert!(replays(&fence, n), "{f:?} {g:?}");
                        assert_eq!(fence.first(), Some(f));
                        assert_eq!(fence.last(), Some(g));
                    }
                }
            }
        }
    }

    pub(crate) fn all_circle_maps(m: usize, n: usize) -> Vec<CircleMap> {
        let mut out = Vec::new();
        let mut cur = vec![0usize; 2 * m];
        loop {
            if let Ok(f) = CircleMap::new(m, n, cur.clone()) {
                out.push(f);
            }
            let mut i = 0;
            loop {
                if i == cur.len() {
                    return out;
                }
                cur[i] += 1;
                if cur[i] < 2 * n {
                    break;
                }
                cur[i] = 0;
                i += 1;
            }
        }
    }
}
