//! The explicit two-piece motion planner on `S^1_k × S^1_k` for `k >= 5`:
//! an open set `U`, its complement neighbourhood `V`, and a chain of
//! retractions collapsing `U` onto an embedded circle `C`.
//!
//! Coordinates are 1-based residues `1..=2k` (odd residues are the open
//! points `a_i = 2i+1`, even ones the closed points `b_i = 2i+2`).

use serde::Serialize;

use crate::circle::{classify_homotopic, recognize_circle, CircleMap};
use crate::error::{Error, Result};
use crate::homotopy::{compare_tables, core, find_isomorphism, Budget, Comparison, HomotopyVerdict};
use crate::invariants::{is_section_categorical, Cover};
use crate::pointset::PointSet;
use crate::space::{product, DownSet, FiniteSpace, KhalimskyCircle};

/// `S^1_k × S^1_k` addressed by residue pairs.
#[derive(Clone, Debug)]
pub struct Torus {
    k: usize,
    circle: KhalimskyCircle,
    space: FiniteSpace,
}

impl Torus {
    pub fn new(k: usize) -> Result<Self> {
        let circle = KhalimskyCircle::new(k)?;
        let space = product(circle.space(), circle.space());
        Ok(Torus { k, circle, space })
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn space(&self) -> &FiniteSpace {
        &self.space
    }

    pub fn circle(&self) -> &KhalimskyCircle {
        &self.circle
    }

    /// Residue taken into `1..=2k`.
    pub fn norm(&self, r: i64) -> i64 {
        (r - 1).rem_euclid(2 * self.k as i64) + 1
    }

    pub fn point(&self, x: i64, y: i64) -> usize {
        self.space
            .pair(self.circle.at_residue(x), self.circle.at_residue(y))
    }

    pub fn residues(&self, p: usize) -> (i64, i64) {
        let (i, j) = self.space.coords(p);
        (self.circle.residue(i) as i64, self.circle.residue(j) as i64)
    }

    /// Residues from `a` to `b` inclusive, wrapping past `2k`.
    fn span(&self, a: i64, b: i64) -> Vec<i64> {
        let (a, b) = (self.norm(a), self.norm(b));
        let len = (b - a).rem_euclid(2 * self.k as i64);
        (0..=len).map(|t| self.norm(a + t)).collect()
    }

    fn block(&self, xs: (i64, i64), ys: (i64, i64)) -> PointSet {
        let mut out = self.space.empty_set();
        for x in self.span(xs.0, xs.1) {
            for y in self.span(ys.0, ys.1) {
                out.insert(self.point(x, y));
            }
        }
        out
    }

    fn set(&self, pts: impl IntoIterator<Item = (i64, i64)>) -> PointSet {
        let mut out = self.space.empty_set();
        for (x, y) in pts {
            out.insert(self.point(x, y));
        }
        out
    }

    fn pairs(&self, set: &PointSet) -> Vec<(i64, i64)> {
        let mut v: Vec<(i64, i64)> = set.iter().map(|p| self.residues(p)).collect();
        v.sort();
        v
    }
}

/// `m = k` for odd `k` and `k + 1` for even `k`.
pub fn witness_m(k: usize) -> usize {
    if k % 2 == 1 {
        k
    } else {
        k + 1
    }
}

fn check_k(k: usize) -> Result<()> {
    if k < 5 {
        return Err(Error::InvalidParameter(format!("the witness needs k >= 5, got {k}")));
    }
    Ok(())
}

/// The five blocks `A_0, ..., A_4`.
fn blocks(t: &Torus) -> [PointSet; 5] {
    let (k, m) = (t.k as i64, witness_m(t.k) as i64);
    [
        t.block((1, 2 * k - 1), (1, 3)),
        t.block((m, m + 2), (3, 2 * k - 1)),
        t.block((m + 2, 1), (2 * k - 3, 2 * k - 1)),
        t.block((1, m - 2), (5, 2 * k - 1)),
        t.block((1, 3), (2 * k - 1, 1)),
    ]
}

fn union_all<'a>(t: &Torus, sets: impl IntoIterator<Item = &'a PointSet>) -> PointSet {
    let mut out = t.space.empty_set();
    for s in sets {
        out.union_with(s);
    }
    out
}

pub fn build_u(k: usize) -> Result<DownSet> {
    check_k(k)?;
    let t = Torus::new(k)?;
    DownSet::new(&t.space, union_all(&t, &blocks(&t)))
}

/// The smallest open set containing the complement of `U`.
pub fn build_v(k: usize) -> Result<DownSet> {
    let u = build_u(k)?;
    let space = u.space().clone();
    Ok(space.open_hull(&u.members().complement()))
}

/// A self-map of the torus restricted to `domain`; the table is the
/// identity outside the domain.
#[derive(Clone, Debug)]
pub struct Stage {
    pub name: String,
    pub domain: PointSet,
    pub table: Vec<usize>,
}

impl Stage {
    fn from_fn(t: &Torus, name: String, domain: &PointSet, f: impl Fn(i64, i64) -> (i64, i64)) -> Stage {
        let mut table: Vec<usize> = t.space.points().collect();
        for p in domain.iter() {
            let (x, y) = t.residues(p);
            let (a, b) = f(x, y);
            table[p] = t.point(a, b);
        }
        Stage {
            name,
            domain: domain.clone(),
            table,
        }
    }

    pub fn image(&self) -> PointSet {
        PointSet::from_points(self.table.len(), self.domain.iter().map(|p| self.table[p]))
    }

    /// A pair `p <= q` in the domain with `f(p) </= f(q)`, or `(p, p)` for a
    /// point sent outside the domain.
    pub fn violation(&self, space: &FiniteSpace) -> Option<(usize, usize)> {
        for p in self.domain.iter() {
            if !self.domain.contains(self.table[p]) {
                return Some((p, p));
            }
            for q in space.up(p).intersection(&self.domain).iter() {
                if !space.le(self.table[p], self.table[q]) {
                    return Some((p, q));
                }
            }
        }
        None
    }

    /// Whether the map fixes its image pointwise.
    pub fn is_retraction(&self) -> bool {
        self.image().iter().all(|p| self.table[p] == p)
    }
}

/// How the retraction formulas are read.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum ChainReading {
    /// Word for word: `f_i` sends `A_3` points right of column
    /// `max{3, l_i}` to column `l_i`, and `h_0` uses the stated arrow sets.
    Literal,
    /// `f_i` stops at column `max{3, l_i}`; `h_0` also moves `(3, 2k-2)`
    /// left and moves `(3, 2k-3)` (instead of `(3, m+2)`) up-left. These are
    /// the readings under which the images match the stated `C_1` and `C`.
    Repaired,
}

fn f_stage(t: &Torus, u: &PointSet, i: usize, reading: ChainReading) -> Stage {
    let [a0, _, _, a3, _] = blocks(t);
    let (k, m) = (t.k as i64, witness_m(t.k) as i64);
    let ki = 2 * k - 1 - i as i64;
    let li = m - 2 - i as i64;
    let col = match reading {
        ChainReading::Repaired => li.max(3),
        ChainReading::Literal => li,
    };
    Stage::from_fn(t, format!("f{i}"), u, |x, y| {
        let p = t.point(x, y);
        if a0.contains(p) && ki <= x {
            (ki, y)
        } else if a3.contains(p) && li.max(3) <= x {
            (col, y)
        } else {
            (x, y)
        }
    })
}

fn g_stage(t: &Torus, c1: &PointSet, i: usize) -> Stage {
    let k = t.k as i64;
    let a3p = t.block((1, 3), (5, 2 * k - 1));
    let top = 5 + i as i64;
    Stage::from_fn(t, format!("g{i}"), c1, |x, y| {
        if a3p.contains(t.point(x, y)) && y <= top {
            (x, top)
        } else {
            (x, y)
        }
    })
}

fn h0_stage(t: &Torus, c2: &PointSet, reading: ChainReading) -> Stage {
    let (k, m) = (t.k as i64, witness_m(t.k) as i64);
    let mut right = t.set([(1, 1), (1, 2), (1, 2 * k)]);
    right.union_with(&t.block((m, m), (4, 2 * k - 2)));
    let mut left = t.set([(3, 2 * k - 1), (3, 2 * k)]);
    if reading == ChainReading::Repaired {
        left.insert(t.point(3, 2 * k - 2));
    }
    left.union_with(&t.block((m + 2, m + 2), (2, m + 1)));
    let mut up = t.block((4, m + 1), (1, 1));
    up.union_with(&t.block((1, 2), (2 * k - 3, 2 * k - 3)));
    up.union_with(&t.block((m + 3, 2 * k), (2 * k - 3, 2 * k - 3)));
    let mut down = t.block((2, m - 1), (3, 3));
    down.union_with(&t.block((m + 1, 2 * k), (2 * k - 1, 2 * k - 1)));
    let up_left = match reading {
        ChainReading::Literal => t.set([(m + 2, 1), (3, m + 2)]),
        ChainReading::Repaired => t.set([(m + 2, 1), (3, 2 * k - 3)]),
    };
    let down_right = t.set([(1, 3), (m, 2 * k - 1)]);
    Stage::from_fn(t, "h0".into(), c2, |x, y| {
        let p = t.point(x, y);
        if right.contains(p) {
            (x + 1, y)
        } else if left.contains(p) {
            (x - 1, y)
        } else if up.contains(p) {
            (x, y + 1)
        } else if down.contains(p) {
            (x, y - 1)
        } else if up_left.contains(p) {
            (x - 1, y + 1)
        } else if down_right.contains(p) {
            (x + 1, y - 1)
        } else {
            (x, y)
        }
    })
}

fn h1_stage(t: &Torus, c3: &PointSet) -> Stage {
    let (k, m) = (t.k as i64, witness_m(t.k) as i64);
    let rules: [((i64, i64), [(i64, i64); 3]); 4] = [
        ((1, 2 * k - 1), [(1, 2 * k - 2), (2, 2 * k - 2), (2, 2 * k - 1)]),
        ((3, 1), [(2, 1), (2, 2), (3, 2)]),
        ((m, 3), [(m, 2), (m + 1, 2), (m + 1, 3)]),
        ((m + 2, m + 2), [(m + 1, m + 2), (m + 1, m + 3), (m + 2, m + 3)]),
    ];
    let rules: Vec<(usize, [usize; 3])> = rules
        .iter()
        .map(|&((a, b), srcs)| (t.point(a, b), srcs.map(|(x, y)| t.point(x, y))))
        .collect();
    Stage::from_fn(t, "h1".into(), c3, |x, y| {
        let p = t.point(x, y);
        match rules.iter().find(|(_, srcs)| srcs.contains(&p)) {
            Some(&(to, _)) => t.residues(to),
            None => (x, y),
        }
    })
}

/// The displayed closed curve `C`.
pub fn displayed_c(k: usize) -> Result<PointSet> {
    check_k(k)?;
    let t = Torus::new(k)?;
    let (k, m) = (k as i64, witness_m(k as usize) as i64);
    let mut pts = Vec::new();
    pts.extend((3..=4).map(|a| (a, a - 2)));
    pts.extend((4..=m - 1).map(|b| (b, 2)));
    pts.extend((m - 1..=m + 1).map(|c| (c, c + 3 - m)));
    pts.extend((4..=m + 1).map(|d| (m + 1, d)));
    pts.extend((m + 1..=m + 3).map(|e| (e, e)));
    pts.extend((m + 3..=2 * k).map(|f| (f, m + 3)));
    pts.extend((1..=2).map(|g| (g, g + 2 * k - 2)));
    Ok(t.set(pts))
}

/// `U`, `V` and the retraction chain `f_0, ..., g_0, ..., h_0, h_1`.
#[derive(Clone, Debug)]
pub struct WitnessBundle {
    pub torus: Torus,
    pub m: usize,
    pub u: DownSet,
    pub v: DownSet,
    /// Stages grouped into the four phases `f`, `g`, `h_0`, `h_1`; each
    /// phase acts on the image of the previous one.
    pub phases: Vec<Vec<Stage>>,
    pub c: PointSet,
}

impl WitnessBundle {
    pub fn k(&self) -> usize {
        self.torus.k
    }

    pub fn stages(&self) -> impl Iterator<Item = &Stage> {
        self.phases.iter().flatten()
    }

    /// Domains `U, C_1, C_2, C_3` of the four phases.
    pub fn phase_domains(&self) -> Vec<&PointSet> {
        self.phases.iter().map(|p| &p[0].domain).collect()
    }

    pub fn cover(&self) -> Result<Cover> {
        Cover::new(
            self.torus.space(),
            vec![self.u.members().clone(), self.v.members().clone()],
        )
    }
}

fn assemble(k: usize, reading: ChainReading) -> Result<WitnessBundle> {
    check_k(k)?;
    let t = Torus::new(k)?;
    let m = witness_m(k);
    let u = build_u(k)?;
    let v = build_v(k)?;
    let fs: Vec<Stage> = (0..=2 * k - m - 3)
        .map(|i| f_stage(&t, u.members(), i, reading))
        .collect();
    let c1 = fs.last().unwrap().image();
    let gs: Vec<Stage> = (0..=2 * k - 8).map(|i| g_stage(&t, &c1, i)).collect();
    let c2 = gs.last().unwrap().image();
    let h0 = h0_stage(&t, &c2, reading);
    let c3 = h0.image();
    let h1 = h1_stage(&t, &c3);
    let c = h1.image();
    Ok(WitnessBundle {
        torus: t,
        m,
        u,
        v,
        phases: vec![fs, gs, vec![h0], vec![h1]],
        c,
    })
}

/// Builds the chain, failing on the first stage that is not continuous.
pub fn build_chain(k: usize, reading: ChainReading) -> Result<WitnessBundle> {
    let bundle = assemble(k, reading)?;
    for s in bundle.stages() {
        if let Some((lo, hi)) = s.violation(bundle.torus.space()) {
            return Err(Error::NotContinuous {
                stage: s.name.clone(),
                lo: lo as i64,
                hi: hi as i64,
            });
        }
    }
    Ok(bundle)
}

/// Continuity and fence status of one stage.
#[derive(Clone, Debug, Serialize)]
pub struct StageReport {
    pub name: String,
    pub domain_size: usize,
    pub image_size: usize,
    pub continuous: bool,
    /// Residue pairs `p <= q` whose images are not ordered.
    pub violation: Option<((i64, i64), (i64, i64))>,
    pub retraction: bool,
    /// Comparison with the previous stage of its phase, or with the
    /// identity for the first stage.
    pub versus_previous: Option<String>,
}

/// The degrees of both projections on an embedded circle.
#[derive(Clone, Debug, Serialize)]
pub struct CircleReport {
    pub points: usize,
    pub half: usize,
    pub deg_first: i64,
    pub deg_second: i64,
    pub homotopic: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct Checks {
    pub stages_continuous: bool,
    pub stages_fence: bool,
    pub image_is_c: bool,
    pub core_matches_c: bool,
    pub projections_on_c: bool,
    pub v_projections: bool,
}

impl Checks {
    pub fn all(&self) -> bool {
        self.stages_continuous
            && self.stages_fence
            && self.image_is_c
            && self.core_matches_c
            && self.projections_on_c
            && self.v_projections
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct WitnessReport {
    pub k: usize,
    pub m: usize,
    pub product_size: usize,
    pub u_size: usize,
    pub v_size: usize,
    pub covers: bool,
    pub stages: Vec<StageReport>,
    /// Residue pairs of the final image.
    pub c: Vec<(i64, i64)>,
    pub c_missing_from_display: Vec<(i64, i64)>,
    pub display_missing_from_c: Vec<(i64, i64)>,
    /// `C_1` minus the blocks it is described by.
    pub a5_inferred: Vec<(i64, i64)>,
    /// `C_2` minus the blocks it is described by.
    pub c2_residual: Vec<(i64, i64)>,
    pub core_u_size: usize,
    pub n_c: Option<usize>,
    pub claimed_n: usize,
    pub n_c_discrepancy: bool,
    pub on_c: Option<CircleReport>,
    pub core_v_size: usize,
    pub on_v_core: Option<CircleReport>,
    pub v_verdict: String,
    pub reading: ChainReading,
    /// First discontinuity of each stage under the literal reading.
    pub literal_violations: Vec<(String, (i64, i64), (i64, i64))>,
    pub checks: Checks,
    pub passed: bool,
}

fn circle_report(space: &FiniteSpace, set: &PointSet, k: usize) -> Option<CircleReport> {
    let sub = space.subspace(set);
    let num = recognize_circle(&sub.space)?;
    let proj = |index: usize| -> Option<CircleMap> {
        let vals = num
            .points
            .iter()
            .map(|&p| {
                let (i, j) = space.coords(sub.to_parent(p));
                if index == 0 {
                    i
                } else {
                    j
                }
            })
            .collect();
        CircleMap::new(num.n, k, vals).ok()
    };
    let (f, g) = (proj(0)?, proj(1)?);
    Some(CircleReport {
        points: set.len(),
        half: num.n,
        deg_first: f.degree().ok()?,
        deg_second: g.degree().ok()?,
        homotopic: classify_homotopic(&f, &g).ok()?,
    })
}

fn comparison_name(c: Option<Comparison>) -> Option<String> {
    c.map(|c| {
        match c {
            Comparison::Equal => "equal",
            Comparison::Below => "below",
            Comparison::Above => "above",
        }
        .to_string()
    })
}

/// Runs every check on the witness for `k`.
pub fn verify_bundle(k: usize, reading: ChainReading, budget: &Budget) -> Result<WitnessReport> {
    let b = assemble(k, reading)?;
    let t = &b.torus;
    let space = t.space();
    let pair = |p: usize| t.residues(p);

    let mut stages = Vec::new();
    for phase in &b.phases {
        let identity: Vec<usize> = space.points().collect();
        let mut prev = &identity;
        for s in phase {
            let violation = s.violation(space);
            stages.push(StageReport {
                name: s.name.clone(),
                domain_size: s.domain.len(),
                image_size: s.image().len(),
                continuous: violation.is_none(),
                violation: violation.map(|(p, q)| (pair(p), pair(q))),
                retraction: s.is_retraction(),
                versus_previous: comparison_name(compare_tables(space, prev, &s.table)),
            });
            prev = &s.table;
        }
    }
    let stages_continuous = stages.iter().all(|s| s.continuous);
    let stages_fence = stages.iter().all(|s| s.versus_previous.is_some());

    let display = displayed_c(k)?;
    let image_is_c = display == b.c;

    let [a0, a1, a2, _, a4] = blocks(t);
    let (kk, m) = (k as i64, b.m as i64);
    let a0p = t.block((1, m + 2), (1, 3));
    let a3p = t.block((1, 3), (5, 2 * kk - 1));
    let a3pp = t.block((1, 3), (2 * kk - 3, 2 * kk - 1));
    let domains = b.phase_domains();
    let (c1, c2) = (domains[1], domains[2]);
    let a5 = c1.difference(&union_all(t, [&a0p, &a1, &a2, &a3p, &a4]));
    let c2_residual = c2.difference(&union_all(t, [&a0p, &a1, &a2, &a3pp, &a4]));
    let _ = a0;

    let u_sub = b.u.subspace();
    let core_u = core(&u_sub.space);
    let c_sub = space.subspace(&b.c);
    let core_matches_c = find_isomorphism(core_u.space(), &c_sub.space).is_some();

    let on_c = circle_report(space, &b.c, k);
    let n_c = on_c.as_ref().map(|r| r.half);
    let claimed_n = 2 * k + b.m + 2;
    let projections_on_c = on_c
        .as_ref()
        .is_some_and(|r| r.homotopic && r.deg_first.abs() == 1 && r.deg_first == r.deg_second);

    let v_sub = b.v.subspace();
    let core_v = core(&v_sub.space);
    let core_v_parent = v_sub.set_to_parent(&PointSet::from_points(
        v_sub.space.len(),
        core_v.subspace.embedding.iter().copied(),
    ));
    let on_v_core = circle_report(space, &core_v_parent, k);
    let v_verdict = is_section_categorical(space, b.v.members(), budget)?;
    let v_projections = matches!(v_verdict, HomotopyVerdict::Homotopic(_))
        && on_v_core.as_ref().is_none_or(|r| r.homotopic);

    let literal = assemble(k, ChainReading::Literal)?;
    let literal_violations = literal
        .stages()
        .filter_map(|s| {
            s.violation(space)
                .map(|(p, q)| (s.name.clone(), pair(p), pair(q)))
        })
        .collect();

    let checks = Checks {
        stages_continuous,
        stages_fence,
        image_is_c,
        core_matches_c,
        projections_on_c,
        v_projections,
    };
    Ok(WitnessReport {
        k,
        m: b.m,
        product_size: space.len(),
        u_size: b.u.len(),
        v_size: b.v.len(),
        covers: b.u.members().union(b.v.members()).is_full(),
        stages,
        c: t.pairs(&b.c),
        c_missing_from_display: t.pairs(&b.c.difference(&display)),
        display_missing_from_c: t.pairs(&display.difference(&b.c)),
        a5_inferred: t.pairs(&a5),
        c2_residual: t.pairs(&c2_residual),
        core_u_size: core_u.len(),
        n_c,
        claimed_n,
        n_c_discrepancy: n_c != Some(claimed_n),
        on_c,
        core_v_size: core_v.len(),
        on_v_core,
        v_verdict: match &v_verdict {
            HomotopyVerdict::Homotopic(f) => format!("homotopic (fence of {} maps)", f.len()),
            HomotopyVerdict::NotHomotopic(o) => format!("not homotopic: {o:?}"),
            HomotopyVerdict::Unknown(why) => format!("unknown: {why}"),
        },
        reading,
        literal_violations,
        passed: checks.all(),
        checks,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_k_is_rejected() {
        assert!(matches!(build_u(4), Err(Error::InvalidParameter(_))));
        assert!(build_chain(3, ChainReading::Repaired).is_err());
    }

    #[test]
    fn u_and_v_cover() {
        for k in 5..=7 {
            let u = build_u(k).unwrap();
            let v = build_v(k).unwrap();
            assert!(u.space().is_open(u.members()));
            assert!(u.members().union(v.members()).is_full());
        }
    }

    #[test]
    fn spans_wrap() {
        let t = Torus::new(5).unwrap();
        assert_eq!(t.span(9, 1), vec![9, 10, 1]);
        assert_eq!(t.span(2, 4), vec![2, 3, 4]);
        assert_eq!(t.norm(0), 10);
        assert_eq!(t.residues(t.point(3, 10)), (3, 10));
    }

    #[test]
    fn first_f_is_the_identity() {
        let b = build_chain(5, ChainReading::Repaired).unwrap();
        let f0 = &b.phases[0][0];
        assert!(f0.domain.iter().all(|p| f0.table[p] == p));
    }

    #[test]
    fn literal_h0_is_not_continuous() {
        let err = build_chain(6, ChainReading::Literal).unwrap_err();
        assert!(matches!(err, Error::NotContinuous { ref stage, .. } if stage == "h0"));
    }

    #[test]
    fn literal_reading_breaks_at_k5() {
        let b = assemble(5, ChainReading::Literal).unwrap();
        assert_eq!(b.phases[0][1].violation(b.torus.space()).is_some(), true);
        let t = &b.torus;
        let bad = b.phases[0]
            .iter()
            .find_map(|s| s.violation(t.space()))
            .unwrap();
        assert_eq!(t.residues(bad.0).0, 3);
    }

    #[test]
    fn chain_for_k6_ends_at_the_displayed_circle() {
        let b = build_chain(6, ChainReading::Repaired).unwrap();
        assert_eq!(b.c, displayed_c(6).unwrap());
        assert_eq!(b.c.len(), 16);
    }
}
