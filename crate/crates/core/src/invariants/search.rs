//! Exact and witness computation of cat and tc.
//!
//! Categorical and section-categorical sets are closed under passing to
//! open subsets, and any cover can be replaced by a principal one. So it
//! suffices to search assignments of one piece to every maximal element:
//! if some cover with `c` pieces works, shrinking each maximal element to
//! one of its pieces gives a working coloring.

use std::collections::HashMap;
use std::sync::atomic::{AtomicBool, AtomicUsize, Ordering};
use std::sync::RwLock;

use rayon::prelude::*;
use serde::Serialize;

use super::{is_categorical, is_section_categorical, Cover};
use crate::circle::recognize_circle;
use crate::error::{Error, Result};
use crate::homotopy::{automorphisms, is_contractible, Budget, HomotopyVerdict};
use crate::pointset::PointSet;
use crate::space::{product, FiniteSpace};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Invariant {
    Cat,
    Tc,
}

#[derive(Clone, Copy, Debug)]
pub struct ExactOptions {
    /// Largest value of the invariant to try.
    pub limit: usize,
    /// Allow more than 30 maximal elements.
    pub force: bool,
    /// Use automorphisms to share certifications between pieces.
    pub symmetry: bool,
    pub budget: Budget,
}

impl Default for ExactOptions {
    fn default() -> Self {
        ExactOptions {
            limit: 4,
            force: false,
            symmetry: true,
            budget: Budget::default(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum SearchOutcome {
    /// Piece index per maximal element.
    Found(Vec<u8>),
    /// No assignment with this many pieces is certified.
    Impossible,
    /// Some assignment could not be decided within the budget.
    Inconclusive,
}

#[derive(Clone, Debug, Serialize)]
pub struct InvariantReport {
    pub invariant: Invariant,
    pub space: String,
    pub lower: usize,
    pub upper: Option<usize>,
    /// Pieces of a certified cover realizing `upper`.
    #[serde(skip)]
    pub witness: Option<Cover>,
    /// Outcome per number of pieces tried.
    pub searched: Vec<(usize, SearchOutcome)>,
    pub certifications: usize,
    pub notes: Vec<String>,
}

impl InvariantReport {
    pub fn value(&self) -> Option<usize> {
        (self.upper == Some(self.lower)).then_some(self.lower)
    }
}

/// Memoized verdicts for principal pieces, keyed by the set of maximal
/// elements (as a bitmask) reduced to a canonical form under symmetries
/// that preserve the verdict.
struct Oracle {
    invariant: Invariant,
    /// The space being covered: `X` for cat, `X × X` for tc.
    space: FiniteSpace,
    maximal: Vec<usize>,
    perms: Vec<Vec<usize>>,
    memo: RwLock<HashMap<u64, Option<bool>>>,
    budget: Budget,
    certifications: AtomicUsize,
}

impl Oracle {
    fn new(invariant: Invariant, base: &FiniteSpace, options: &ExactOptions) -> Result<Self> {
        let space = match invariant {
            Invariant::Cat => base.clone(),
            Invariant::Tc => product(base, base),
        };
        let maximal = space.maximal_elements().to_vec();
        if maximal.len() > 64 {
            return Err(Error::InvalidParameter(format!(
                "{} maximal elements exceed the search encoding",
                maximal.len()
            )));
        }
        if maximal.len() > 30 && !options.force {
            return Err(Error::InvalidParameter(format!(
                "{} maximal elements; exact search needs force, or use witness mode",
                maximal.len()
            )));
        }
        let index: HashMap<usize, usize> = maximal.iter().enumerate().map(|(i, &m)| (m, i)).collect();
        let point_perms: Vec<Vec<usize>> = if !options.symmetry {
            vec![space.points().collect()]
        } else {
            match invariant {
                Invariant::Cat => automorphisms(&space),
                Invariant::Tc => {
                    // φ × φ and its composite with the swap; independent
                    // automorphisms of the factors do not preserve the verdict
                    let mut out = Vec::new();
                    for phi in automorphisms(base) {
                        for swap in [false, true] {
                            out.push(
                                space
                                    .points()
                                    .map(|p| {
                                        let (i, j) = space.coords(p);
                                        let (a, b) = (phi[i], phi[j]);
                                        if swap {
                                            space.pair(b, a)
                                        } else {
                                            space.pair(a, b)
                                        }
                                    })
                                    .collect(),
                            );
                        }
                    }
                    out
                }
            }
        };
        let perms = point_perms
            .iter()
            .map(|phi| maximal.iter().map(|&m| index[&phi[m]]).collect())
            .collect();
        Ok(Oracle {
            invariant,
            space,
            maximal,
            perms,
            memo: RwLock::new(HashMap::new()),
            budget: options.budget,
            certifications: AtomicUsize::new(0),
        })
    }

    fn canonical(&self, mask: u64) -> u64 {
        self.perms
            .iter()
            .map(|perm| {
                let mut out = 0u64;
                let mut m = mask;
                while m != 0 {
                    let i = m.trailing_zeros() as usize;
                    out |= 1 << perm[i];
                    m &= m - 1;
                }
                out
            })
            .min()
            .unwrap_or(mask)
    }

    fn piece(&self, mask: u64) -> PointSet {
        let mut out = self.space.empty_set();
        for (i, &m) in self.maximal.iter().enumerate() {
            if mask >> i & 1 == 1 {
                out.union_with(self.space.down(m));
            }
        }
        out
    }

    fn certify(&self, piece: &PointSet) -> Result<HomotopyVerdict> {
        match self.invariant {
            Invariant::Cat => is_categorical(&self.space, piece, &self.budget),
            Invariant::Tc => is_section_categorical(&self.space, piece, &self.budget),
        }
    }

    fn verdict(&self, mask: u64) -> Option<bool> {
        let key = self.canonical(mask);
        if let Some(&v) = self.memo.read().unwrap().get(&key) {
            return v;
        }
        let v = self
            .certify(&self.piece(key))
            .ok()
            .and_then(|v| v.decided());
        self.certifications.fetch_add(1, Ordering::Relaxed);
        self.memo.write().unwrap().insert(key, v);
        v
    }
}

struct Dfs<'a> {
    oracle: &'a Oracle,
    c: usize,
    inconclusive: &'a AtomicBool,
}

impl Dfs<'_> {
    /// Extends `colors` (a restricted growth string) to a full assignment.
    fn run(&self, colors: &mut Vec<u8>, masks: &mut Vec<u64>) -> Option<Vec<u8>> {
        let t = colors.len();
        if t == self.oracle.maximal.len() {
            let undecided = masks
                .iter()
                .any(|&m| m != 0 && self.oracle.verdict(m).is_none());
            if undecided {
                self.inconclusive.store(true, Ordering::Relaxed);
                return None;
            }
            return Some(colors.clone());
        }
        let used = colors.iter().map(|&c| c as usize + 1).max().unwrap_or(0);
        for col in 0..self.c.min(used + 1) {
            let next = masks[col] | 1 << t;
            if self.oracle.verdict(next) == Some(false) {
                continue;
            }
            let saved = masks[col];
            masks[col] = next;
            colors.push(col as u8);
            let found = self.run(colors, masks);
            colors.pop();
            masks[col] = saved;
            if found.is_some() {
                return found;
            }
        }
        None
    }

    fn prefixes(&self, depth: usize) -> Vec<Vec<u8>> {
        let mut out = vec![Vec::new()];
        for t in 0..depth.min(self.oracle.maximal.len()) {
            let mut next = Vec::new();
            for p in out {
                let used = p.iter().map(|&c| c as usize + 1).max().unwrap_or(0);
                for col in 0..self.c.min(used + 1) {
                    let mut q = p.clone();
                    q.push(col as u8);
                    let mask = mask_of(&q, col as u8);
                    debug_assert!(mask >> t & 1 == 1);
                    if self.oracle.verdict(mask) != Some(false) {
                        next.push(q);
                    }
                }
            }
            out = next;
        }
        out
    }
}

fn mask_of(colors: &[u8], c: u8) -> u64 {
    colors
        .iter()
        .enumerate()
        .filter(|(_, &x)| x == c)
        .fold(0u64, |m, (i, _)| m | 1 << i)
}

fn search(oracle: &Oracle, c: usize) -> SearchOutcome {
    let inconclusive = AtomicBool::new(false);
    let dfs = Dfs {
        oracle,
        c,
        inconclusive: &inconclusive,
    };
    let depth = oracle.maximal.len().min(6);
    let prefixes = dfs.prefixes(depth);
    let found = prefixes.par_iter().find_map_first(|p| {
        let mut colors = p.clone();
        let mut masks: Vec<u64> = (0..c).map(|col| mask_of(p, col as u8)).collect();
        dfs.run(&mut colors, &mut masks)
    });
    match found {
        Some(colors) => SearchOutcome::Found(colors),
        None if inconclusive.load(Ordering::Relaxed) => SearchOutcome::Inconclusive,
        None => SearchOutcome::Impossible,
    }
}

fn exact(invariant: Invariant, x: &FiniteSpace, options: &ExactOptions) -> Result<InvariantReport> {
    let oracle = Oracle::new(invariant, x, options)?;
    let mut report = InvariantReport {
        invariant,
        space: x.name().to_string(),
        lower: 0,
        upper: None,
        witness: None,
        searched: Vec::new(),
        certifications: 0,
        notes: Vec::new(),
    };
    seed_lower_bound(invariant, x, &mut report);
    for c in 1..=options.limit + 1 {
        let outcome = search(&oracle, c);
        report.searched.push((c, outcome.clone()));
        match outcome {
            SearchOutcome::Found(colors) => {
                let mut pieces = vec![oracle.space.empty_set(); c];
                for (i, &col) in colors.iter().enumerate() {
                    pieces[col as usize].union_with(oracle.space.down(oracle.maximal[i]));
                }
                pieces.retain(|p| !p.is_empty());
                report.upper = Some(pieces.len() - 1);
                report.witness = Some(Cover::new(&oracle.space, pieces)?);
                break;
            }
            SearchOutcome::Impossible => report.lower = report.lower.max(c),
            SearchOutcome::Inconclusive => {
                report.notes.push(format!("{c} pieces: some assignment undecided"))
            }
        }
    }
    report.certifications = oracle.certifications.load(Ordering::Relaxed);
    if let Some(u) = report.upper {
        if u < report.lower {
            return Err(Error::PreconditionViolated(format!(
                "certified upper bound {u} below lower bound {}",
                report.lower
            )));
        }
    }
    Ok(report)
}

fn seed_lower_bound(invariant: Invariant, x: &FiniteSpace, report: &mut InvariantReport) {
    if invariant == Invariant::Tc && recognize_circle(x).is_some() {
        // the realization of a Khalimsky circle is S^1 and tc(S^1) = 1
        report.lower = 1;
        report.notes.push("lower bound tc(S^1) = 1".into());
    } else if !x.is_empty() && !is_contractible(x) {
        report.lower = 1;
        report.notes.push("not contractible".into());
    }
}

/// `tc(X)` by exhaustive search over colorings of the maximal elements of
/// `X × X`.
pub fn tc_exact(x: &FiniteSpace, options: &ExactOptions) -> Result<InvariantReport> {
    exact(Invariant::Tc, x, options)
}

pub fn cat_exact(x: &FiniteSpace, options: &ExactOptions) -> Result<InvariantReport> {
    exact(Invariant::Cat, x, options)
}

/// Certifies every piece of a cover.
pub fn verify_cover(invariant: Invariant, cover: &Cover, budget: &Budget) -> Result<Vec<HomotopyVerdict>> {
    cover
        .pieces()
        .par_iter()
        .map(|p| match invariant {
            Invariant::Cat => is_categorical(cover.space(), p, budget),
            Invariant::Tc => is_section_categorical(cover.space(), p, budget),
        })
        .collect()
}

fn witness(invariant: Invariant, x: &FiniteSpace, cover: &Cover, budget: &Budget) -> Result<InvariantReport> {
    let expected = match invariant {
        Invariant::Cat => x.clone(),
        Invariant::Tc => product(x, x),
    };
    if !cover.space().same_as(&expected) {
        return Err(Error::MismatchedSpaces);
    }
    let verdicts = verify_cover(invariant, cover, budget)?;
    let mut report = InvariantReport {
        invariant,
        space: x.name().to_string(),
        lower: 0,
        upper: None,
        witness: None,
        searched: Vec::new(),
        certifications: verdicts.len(),
        notes: Vec::new(),
    };
    seed_lower_bound(invariant, x, &mut report);
    let mut all = true;
    for (i, v) in verdicts.iter().enumerate() {
        match v {
            HomotopyVerdict::Homotopic(_) => {}
            HomotopyVerdict::NotHomotopic(o) => {
                all = false;
                report.notes.push(format!("piece {i} fails: {o:?}"));
            }
            HomotopyVerdict::Unknown(why) => {
                all = false;
                report.notes.push(format!("piece {i} undecided: {why}"));
            }
        }
    }
    if all {
        let nonempty = cover.pieces().iter().filter(|p| !p.is_empty()).count();
        report.upper = Some(nonempty.max(1) - 1);
        report.witness = Some(cover.clone());
    }
    Ok(report)
}

pub fn tc_witness(x: &FiniteSpace, cover: &Cover, budget: &Budget) -> Result<InvariantReport> {
    witness(Invariant::Tc, x, cover, budget)
}

pub fn cat_witness(x: &FiniteSpace, cover: &Cover, budget: &Budget) -> Result<InvariantReport> {
    witness(Invariant::Cat, x, cover, budget)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::space::KhalimskyCircle;

    #[test]
    fn cat_of_small_circles() {
        for n in 2..=4 {
            let c = KhalimskyCircle::new(n).unwrap();
            let r = cat_exact(c.space(), &ExactOptions::default()).unwrap();
            assert_eq!(r.value(), Some(1), "{r:?}");
        }
    }

    #[test]
    fn tc_of_the_smallest_circle() {
        let c = KhalimskyCircle::new(2).unwrap();
        let r = tc_exact(c.space(), &ExactOptions::default()).unwrap();
        assert_eq!(r.value(), Some(3), "{r:?}");
        let w = r.witness.unwrap();
        let again = tc_witness(c.space(), &w, &Budget::default()).unwrap();
        assert_eq!(again.upper, Some(3));
    }

    #[test]
    fn size_gate() {
        let c = KhalimskyCircle::new(6).unwrap();
        let err = tc_exact(c.space(), &ExactOptions::default());
        assert!(matches!(err, Err(Error::InvalidParameter(_))));
    }
}
