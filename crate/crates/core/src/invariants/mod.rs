//! Categorical and section-categorical open sets, covers, and the
//! invariants cat and tc.

mod grid;
mod search;

pub use grid::{
    class_points, cover_from_coloring, coloring_from_cover, enumerate_simple_colorings, refute_by_colorings,
    square_grid, ClassRefutation, Coloring, ColoringClass, ColoringRefutation, SquareGrid,
};
pub use search::{
    cat_exact, cat_witness, tc_exact, tc_witness, verify_cover, ExactOptions, Invariant,
    InvariantReport, SearchOutcome,
};

use std::fmt::Write;

use crate::circle::{recognize_circle, CircleMap};
use crate::error::{Error, Result};
use crate::homotopy::{
    homotopic, nullhomotopic_in, Budget, CircleObstruction, Fence, HomotopyVerdict, Obstruction,
    Strategy,
};
use crate::pointset::PointSet;
use crate::space::{parse_point_list, write_point_list, FiniteSpace, OrderMap};

/// Open sets covering a space.
#[derive(Clone, Debug)]
pub struct Cover {
    space: FiniteSpace,
    pieces: Vec<PointSet>,
}

impl Cover {
    pub fn new(space: &FiniteSpace, pieces: Vec<PointSet>) -> Result<Self> {
        let mut union = space.empty_set();
        for piece in &pieces {
            if piece.width() != space.len() {
                return Err(Error::MismatchedSpaces);
            }
            space.check_open(piece)?;
            union.union_with(piece);
        }
        if let Some(p) = space.full_set().difference(&union).first() {
            return Err(Error::InvalidParameter(format!(
                "point {p} ({}) is not covered",
                space.label(p)
            )));
        }
        Ok(Cover {
            space: space.clone(),
            pieces,
        })
    }

    pub fn space(&self) -> &FiniteSpace {
        &self.space
    }

    pub fn pieces(&self) -> &[PointSet] {
        &self.pieces
    }

    pub fn len(&self) -> usize {
        self.pieces.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pieces.is_empty()
    }

    /// Whether every piece is a union of down-sets of maximal elements.
    pub fn is_principal(&self) -> bool {
        principalize(self).pieces == self.pieces
    }

    /// `cover <space> <c>` followed by one sorted id list per piece.
    pub fn to_text(&self) -> String {
        let mut out = format!("cover {} {}\n", self.space.name(), self.pieces.len());
        for p in &self.pieces {
            let _ = writeln!(out, "{}", write_point_list(p));
        }
        out
    }

    pub fn parse(space: &FiniteSpace, text: &str) -> Result<Self> {
        let mut lines = text
            .lines()
            .enumerate()
            .filter(|(_, l)| !l.trim().starts_with('#'));
        let (_, header) = lines.next().ok_or_else(|| Error::Empty("empty cover file".into()))?;
        let words: Vec<&str> = header.split_whitespace().collect();
        let count = match words.as_slice() {
            ["cover", _, c] => c.parse::<usize>().ok(),
            _ => None,
        }
        .ok_or_else(|| Error::Parse {
            line: 1,
            message: "expected 'cover <space> <c>'".into(),
        })?;
        let mut pieces = Vec::new();
        for (idx, line) in lines.take(count) {
            pieces.push(parse_point_list(space.len(), line).map_err(|e| match e {
                Error::Parse { message, .. } => Error::Parse { line: idx + 1, message },
                other => other,
            })?);
        }
        if pieces.len() != count {
            return Err(Error::Parse {
                line: 0,
                message: format!("expected {count} pieces, found {}", pieces.len()),
            });
        }
        Cover::new(space, pieces)
    }
}

/// Replaces each piece `V` by `V_M`, the union of `[-, m]` over maximal
/// elements `m` in `V`. The result is again a cover and refines the input.
pub fn principalize(cover: &Cover) -> Cover {
    let space = &cover.space;
    let maximal = space.maximal_elements();
    let pieces = cover
        .pieces
        .iter()
        .map(|v| {
            let mut out = space.empty_set();
            for m in v.intersection(&maximal).iter() {
                out.union_with(space.down(m));
            }
            out
        })
        .collect();
    Cover {
        space: space.clone(),
        pieces,
    }
}

/// Whether the inclusion of `u` into `x` is nullhomotopic.
pub fn is_categorical(x: &FiniteSpace, u: &PointSet, budget: &Budget) -> Result<HomotopyVerdict> {
    nullhomotopic_in(x, u, Strategy::Auto, budget)
}

fn square_factors(xx: &FiniteSpace) -> Result<&FiniteSpace> {
    match xx.factors() {
        Some((a, b)) if a.same_as(b) => Ok(a),
        _ => Err(Error::InvalidParameter(format!(
            "{} is not a product of a space with itself",
            xx.name()
        ))),
    }
}

/// A full horizontal line `{(x, a)}` or vertical line `{(a, y)}` inside `u`,
/// read as an embedded circle when the factor is a Khalimsky circle.
pub fn full_line_obstruction(xx: &FiniteSpace, u: &PointSet) -> Result<Option<CircleObstruction>> {
    let x = square_factors(xx)?;
    let Some(num) = recognize_circle(x) else {
        return Ok(None);
    };
    for vertical in [false, true] {
        for a in x.points() {
            let line: Vec<usize> = num
                .points
                .iter()
                .map(|&z| if vertical { xx.pair(a, z) } else { xx.pair(z, a) })
                .collect();
            if !line.iter().all(|&p| u.contains(p)) {
                continue;
            }
            let proj = |first: bool| -> Result<CircleMap> {
                let vals = line
                    .iter()
                    .map(|&p| {
                        let (i, j) = xx.coords(p);
                        num.residue[if first { i } else { j }]
                    })
                    .collect();
                CircleMap::new(num.n, num.n, vals)
            };
            return Ok(Some(CircleObstruction {
                points: line.clone(),
                half: num.n,
                target_half: num.n,
                deg_f: proj(true)?.degree()?,
                deg_g: proj(false)?.degree()?,
            }));
        }
    }
    Ok(None)
}

/// Whether `π_1|_U ≃ π_2|_U` for an open `U ⊆ X × X`.
pub fn is_section_categorical(xx: &FiniteSpace, u: &PointSet, budget: &Budget) -> Result<HomotopyVerdict> {
    let x = square_factors(xx)?;
    xx.check_open(u)?;
    let sub = xx.subspace(u);
    if u.is_empty() {
        let empty = OrderMap::new(sub.space.clone(), x.clone(), Vec::new())?;
        return Ok(HomotopyVerdict::Homotopic(Fence::single(empty)));
    }
    if let Some(obs) = full_line_obstruction(xx, u)? {
        return Ok(HomotopyVerdict::NotHomotopic(Obstruction::Circle(obs)));
    }
    let p1 = OrderMap::new(
        sub.space.clone(),
        x.clone(),
        sub.embedding.iter().map(|&p| xx.coords(p).0).collect(),
    )?;
    let p2 = OrderMap::new(
        sub.space.clone(),
        x.clone(),
        sub.embedding.iter().map(|&p| xx.coords(p).1).collect(),
    )?;
    let verdict = homotopic(&p1, &p2, Strategy::Auto, budget)?;
    Ok(match verdict {
        HomotopyVerdict::NotHomotopic(Obstruction::Circle(mut obs)) => {
            for p in obs.points.iter_mut() {
                *p = sub.to_parent(*p);
            }
            HomotopyVerdict::NotHomotopic(Obstruction::Circle(obs))
        }
        other => other,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::space::{product, KhalimskyCircle};

    fn torus(n: usize) -> (KhalimskyCircle, FiniteSpace) {
        let c = KhalimskyCircle::new(n).unwrap();
        let t = product(c.space(), c.space());
        (c, t)
    }

    #[test]
    fn principalize_examples() {
        let (c, t) = torus(3);
        let whole = Cover::new(&t, vec![t.full_set()]).unwrap();
        assert_eq!(principalize(&whole).pieces(), whole.pieces());
        // a maximal cell plus a stray minimal point elsewhere
        let m = t.pair(c.b(0), c.b(0));
        let mut piece = t.down(m).clone();
        piece.insert(t.pair(c.a(2), c.a(2)));
        let cover = Cover::new(&t, vec![piece.clone(), t.full_set()]).unwrap();
        let p = principalize(&cover);
        assert_eq!(&p.pieces()[0], t.down(m));
        assert!(p.pieces()[0].is_subset(&piece));
        assert!(!cover.is_principal() && p.is_principal());
    }

    #[test]
    fn cover_validation_and_text() {
        let (c, t) = torus(2);
        let piece = t.down(t.pair(c.b(0), c.b(0))).clone();
        assert!(Cover::new(&t, vec![piece.clone()]).is_err());
        let closed = PointSet::from_points(t.len(), [t.pair(c.b(0), c.b(0))]);
        assert!(matches!(Cover::new(&t, vec![closed]), Err(Error::NotOpen { .. })));
        let cover = Cover::new(&t, vec![piece, t.full_set()]).unwrap();
        let back = Cover::parse(&t, &cover.to_text()).unwrap();
        assert_eq!(back.pieces(), cover.pieces());
    }

    #[test]
    fn section_categorical_examples() {
        let b = Budget::default();
        let (c, t) = torus(4);
        let cell = t.down(t.pair(c.b(1), c.b(2))).clone();
        assert!(is_section_categorical(&t, &cell, &b).unwrap().is_homotopic());
        let mut band = t.empty_set();
        for i in 0..4 {
            band.union_with(t.down(t.pair(c.b(i), c.b(0))));
        }
        match is_section_categorical(&t, &band, &b).unwrap() {
            HomotopyVerdict::NotHomotopic(Obstruction::Circle(o)) => {
                assert_eq!((o.deg_f.abs(), o.deg_g), (1, 0));
            }
            v => panic!("{v:?}"),
        }
        // the diagonal band is section-categorical
        let mut diag = t.empty_set();
        for i in 0..4 {
            diag.union_with(t.down(t.pair(c.b(i), c.b(i))));
        }
        assert!(is_section_categorical(&t, &diag, &b).unwrap().is_homotopic());
    }

    #[test]
    fn categorical_examples() {
        let b = Budget::default();
        let c = KhalimskyCircle::new(5).unwrap();
        let s = c.space();
        let mut arc = s.full_set();
        arc.remove(c.b(0));
        assert!(is_categorical(s, &arc, &b).unwrap().is_homotopic());
        assert!(is_categorical(s, &s.full_set(), &b).unwrap().is_not_homotopic());
        assert!(is_categorical(s, &s.empty_set(), &b).unwrap().is_homotopic());
    }
}
