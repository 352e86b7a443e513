//! The square decomposition of `S^1_n × S^1_n` and colorings of its cells.

use std::collections::BTreeMap;
use std::fmt::Write;

use serde::Serialize;

use rayon::prelude::*;

use super::{full_line_obstruction, is_section_categorical, Cover};
use crate::homotopy::Budget;
use crate::error::{Error, Result};
use crate::homotopy::automorphisms;
use crate::pointset::PointSet;
use crate::space::{product, DownSet, FiniteSpace, KhalimskyCircle};

/// Cell `(i, j)` is the open set `[-, b_i] × [-, b_j]`.
#[derive(Clone, Debug)]
pub struct SquareGrid {
    circle: KhalimskyCircle,
    space: FiniteSpace,
}

pub fn square_grid(n: usize) -> Result<SquareGrid> {
    let circle = KhalimskyCircle::new(n)?;
    let space = product(circle.space(), circle.space());
    Ok(SquareGrid { circle, space })
}

impl SquareGrid {
    pub fn n(&self) -> usize {
        self.circle.n()
    }

    pub fn circle(&self) -> &KhalimskyCircle {
        &self.circle
    }

    pub fn space(&self) -> &FiniteSpace {
        &self.space
    }

    pub fn cells(&self) -> usize {
        self.n() * self.n()
    }

    /// The maximal point `(b_i, b_j)`.
    pub fn cell_point(&self, i: usize, j: usize) -> usize {
        self.space.pair(self.circle.b(i), self.circle.b(j))
    }

    pub fn cell(&self, i: usize, j: usize) -> DownSet {
        self.space.min_open(self.cell_point(i, j))
    }

    /// Cell of a maximal point.
    pub fn cell_of(&self, p: usize) -> Option<(usize, usize)> {
        let (x, y) = self.space.coords(p);
        (x % 2 == 1 && y % 2 == 1).then_some((x / 2, y / 2))
    }

    /// Cell permutations induced by automorphisms of the product,
    /// as maps `i * n + j -> i' * n + j'`.
    pub fn symmetries(&self) -> Vec<Vec<usize>> {
        let n = self.n();
        let mut out: Vec<Vec<usize>> = automorphisms(&self.space)
            .into_iter()
            .map(|phi| {
                (0..n * n)
                    .map(|c| {
                        let (i, j) = self.cell_of(phi[self.cell_point(c / n, c % n)]).unwrap();
                        i * n + j
                    })
                    .collect()
            })
            .collect();
        out.sort();
        out.dedup();
        out
    }
}

/// An assignment of a color in `0..colors` to every cell, row `i` holding
/// the cells `(i, 0), ..., (i, n - 1)`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct Coloring {
    pub n: usize,
    pub colors: usize,
    pub cells: Vec<u8>,
}

impl Coloring {
    pub fn new(n: usize, colors: usize, cells: Vec<u8>) -> Result<Self> {
        if cells.len() != n * n {
            return Err(Error::InvalidParameter(format!("expected {} cells", n * n)));
        }
        if colors == 0 || colors > 10 || cells.iter().any(|&c| c as usize >= colors) {
            return Err(Error::InvalidParameter("colors out of range".into()));
        }
        Ok(Coloring { n, colors, cells })
    }

    /// Rows of digits, e.g. `["1001", "0011", ...]`.
    pub fn from_rows(colors: usize, rows: &[&str]) -> Result<Self> {
        let n = rows.len();
        let mut cells = Vec::with_capacity(n * n);
        for r in rows {
            if r.len() != n {
                return Err(Error::InvalidParameter(format!("row '{r}' has the wrong length")));
            }
            for ch in r.chars() {
                let d = ch
                    .to_digit(10)
                    .ok_or_else(|| Error::InvalidParameter(format!("bad digit '{ch}'")))?;
                cells.push(d as u8);
            }
        }
        Coloring::new(n, colors, cells)
    }

    pub fn get(&self, i: usize, j: usize) -> u8 {
        self.cells[i * self.n + j]
    }

    pub fn rows(&self) -> Vec<String> {
        self.cells
            .chunks(self.n)
            .map(|r| r.iter().map(|d| char::from(b'0' + d)).collect())
            .collect()
    }

    /// `coloring <n> <c>` followed by `n` rows of digits.
    pub fn to_text(&self) -> String {
        let mut out = format!("coloring {} {}\n", self.n, self.colors);
        for r in self.rows() {
            let _ = writeln!(out, "{r}");
        }
        out
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut lines = text.lines().map(str::trim).filter(|l| !l.is_empty() && !l.starts_with('#'));
        let header: Vec<&str> = lines
            .next()
            .ok_or_else(|| Error::Empty("empty coloring file".into()))?
            .split_whitespace()
            .collect();
        let (n, colors) = match header.as_slice() {
            ["coloring", n, c] => (n.parse::<usize>().ok(), c.parse::<usize>().ok()),
            _ => (None, None),
        };
        let (Some(n), Some(colors)) = (n, colors) else {
            return Err(Error::Parse {
                line: 1,
                message: "expected 'coloring <n> <c>'".into(),
            });
        };
        let rows: Vec<&str> = lines.take(n).collect();
        if rows.len() != n {
            return Err(Error::Parse {
                line: 0,
                message: format!("expected {n} rows"),
            });
        }
        Coloring::from_rows(colors, &rows)
    }

    /// Whether the points covered by cells of color `c` contain a whole
    /// horizontal or vertical line `{(x, a)}` or `{(a, y)}`. For `a = b_j`
    /// this is a full row of cells; for `a = a_j` every position across the
    /// two rows `j - 1` and `j` must have a cell of color `c`.
    pub fn class_contains_line(&self, c: u8) -> bool {
        let n = self.n;
        let at = |i: usize, j: usize, transpose: bool| {
            if transpose {
                self.get(j, i)
            } else {
                self.get(i, j)
            }
        };
        for transpose in [false, true] {
            for j in 0..n {
                let prev = (j + n - 1) % n;
                if (0..n).all(|i| at(i, j, transpose) == c) {
                    return true;
                }
                if (0..n).all(|i| at(i, j, transpose) == c || at(i, prev, transpose) == c) {
                    return true;
                }
            }
        }
        false
    }

    /// No color class contains a whole line.
    pub fn is_simple(&self) -> bool {
        (0..self.colors as u8).all(|c| !self.class_contains_line(c))
    }

    fn permuted(&self, cells: &[usize], colors: &[u8]) -> Coloring {
        let mut out = vec![0u8; self.cells.len()];
        for (from, &to) in cells.iter().enumerate() {
            out[to] = colors[self.cells[from] as usize];
        }
        Coloring {
            n: self.n,
            colors: self.colors,
            cells: out,
        }
    }

    /// Least coloring in the orbit under cell symmetries and color
    /// permutations.
    pub fn canonical(&self, symmetries: &[Vec<usize>]) -> Coloring {
        let perms = color_permutations(self.colors);
        let mut best = self.clone();
        for s in symmetries {
            for p in &perms {
                let c = self.permuted(s, p);
                if c < best {
                    best = c;
                }
            }
        }
        best
    }
}

fn color_permutations(k: usize) -> Vec<Vec<u8>> {
    let mut out = Vec::new();
    let mut cur: Vec<u8> = (0..k as u8).collect();
    permute(&mut cur, 0, &mut out);
    out
}

fn permute(cur: &mut Vec<u8>, i: usize, out: &mut Vec<Vec<u8>>) {
    if i == cur.len() {
        out.push(cur.clone());
        return;
    }
    for j in i..cur.len() {
        cur.swap(i, j);
        permute(cur, i + 1, out);
        cur.swap(i, j);
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct ColoringClass {
    pub representative: Coloring,
    pub members: Vec<Coloring>,
}

/// Simple colorings with `colors` colors, grouped into orbits under the
/// automorphisms of the product and color permutations (or left as
/// singleton classes when `symmetry` is off). Exhaustive over all
/// `colors^(n^2)` assignments.
pub fn enumerate_simple_colorings(grid: &SquareGrid, colors: usize, symmetry: bool) -> Result<Vec<ColoringClass>> {
    let n = grid.n();
    let cells = n * n;
    let total = (colors as f64).powi(cells as i32);
    if colors == 0 || total > 5.0e7 {
        return Err(Error::InvalidParameter(format!(
            "{colors} colors on {cells} cells is outside the enumeration range"
        )));
    }
    let symmetries = if symmetry {
        grid.symmetries()
    } else {
        vec![(0..cells).collect()]
    };
    let identity_colors: Vec<Vec<u8>> = vec![(0..colors as u8).collect()];
    let mut classes: BTreeMap<Coloring, Vec<Coloring>> = BTreeMap::new();
    let mut cur = vec![0u8; cells];
    loop {
        let col = Coloring {
            n,
            colors,
            cells: cur.clone(),
        };
        if col.is_simple() {
            let rep = if symmetry {
                col.canonical(&symmetries)
            } else {
                col.permuted(&symmetries[0], &identity_colors[0])
            };
            classes.entry(rep).or_default().push(col);
        }
        let mut i = cells;
        loop {
            if i == 0 {
                return Ok(classes
                    .into_iter()
                    .map(|(representative, members)| ColoringClass {
                        representative,
                        members,
                    })
                    .collect());
            }
            i -= 1;
            cur[i] += 1;
            if (cur[i] as usize) < colors {
                break;
            }
            cur[i] = 0;
        }
    }
}

/// Piece `c` is the union of the cells of color `c`.
pub fn cover_from_coloring(grid: &SquareGrid, coloring: &Coloring) -> Result<Cover> {
    if coloring.n != grid.n() {
        return Err(Error::MismatchedSizes);
    }
    let space = grid.space();
    let mut pieces = vec![space.empty_set(); coloring.colors];
    for i in 0..grid.n() {
        for j in 0..grid.n() {
            pieces[coloring.get(i, j) as usize].union_with(space.down(grid.cell_point(i, j)));
        }
    }
    Cover::new(space, pieces)
}

/// Reads a coloring back from a cover in which every maximal point lies in
/// exactly one piece.
pub fn coloring_from_cover(grid: &SquareGrid, cover: &Cover) -> Option<Coloring> {
    let n = grid.n();
    let mut cells = Vec::with_capacity(n * n);
    for i in 0..n {
        for j in 0..n {
            let p = grid.cell_point(i, j);
            let owners: Vec<usize> = (0..cover.len()).filter(|&c| cover.pieces()[c].contains(p)).collect();
            if owners.len() != 1 {
                return None;
            }
            cells.push(owners[0] as u8);
        }
    }
    Coloring::new(n, cover.len(), cells).ok()
}

/// Points of the cells of one color, for reports.
pub fn class_points(grid: &SquareGrid, coloring: &Coloring, c: u8) -> PointSet {
    let mut out = grid.space().empty_set();
    for i in 0..grid.n() {
        for j in 0..grid.n() {
            if coloring.get(i, j) == c {
                out.union_with(grid.space().down(grid.cell_point(i, j)));
            }
        }
    }
    out
}

/// Outcome of refuting every principal cover with `colors` pieces through
/// colorings of the cells.
#[derive(Clone, Debug, Serialize)]
pub struct ColoringRefutation {
    pub n: usize,
    pub colors: usize,
    pub total: usize,
    /// Colorings with a color class containing a whole line.
    pub non_simple: usize,
    /// Non-simple colorings whose offending piece was confirmed to contain
    /// a full-line circle.
    pub line_refuted: usize,
    pub classes: Vec<ClassRefutation>,
    pub refuted: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct ClassRefutation {
    pub representative: Vec<String>,
    pub members: usize,
    /// Members with some piece certified not section-categorical.
    pub failing_members: usize,
    pub undecided_members: usize,
}

fn cover_fails(grid: &SquareGrid, coloring: &Coloring, budget: &Budget) -> Result<Option<bool>> {
    let cover = cover_from_coloring(grid, coloring)?;
    let mut undecided = false;
    for piece in cover.pieces() {
        match is_section_categorical(grid.space(), piece, budget)?.decided() {
            Some(false) => return Ok(Some(true)),
            None => undecided = true,
            Some(true) => {}
        }
    }
    Ok(if undecided { None } else { Some(false) })
}

/// Shows that no cover by `colors` principal pieces is section-categorical:
/// non-simple colorings fall to the full-line obstruction and every member
/// of every simple class is certified to have a failing piece.
pub fn refute_by_colorings(grid: &SquareGrid, colors: usize, budget: &Budget) -> Result<ColoringRefutation> {
    let n = grid.n();
    let cells = n * n;
    let classes = enumerate_simple_colorings(grid, colors, true)?;
    let total = colors.pow(cells as u32);
    let non_simple_line: Vec<(bool, bool)> = (0..total)
        .into_par_iter()
        .filter_map(|mut code| {
            let mut cur = vec![0u8; cells];
            for c in cur.iter_mut().rev() {
                *c = (code % colors) as u8;
                code /= colors;
            }
            let col = Coloring { n, colors, cells: cur };
            let bad = (0..colors as u8).find(|&c| col.class_contains_line(c))?;
            let piece = class_points(grid, &col, bad);
            let confirmed = full_line_obstruction(grid.space(), &piece)
                .ok()
                .flatten()
                .is_some_and(|o| o.deg_f != o.deg_g);
            Some((true, confirmed))
        })
        .collect();
    let mut out = Vec::new();
    let mut all = true;
    for class in &classes {
        let verdicts: Vec<Option<bool>> = class
            .members
            .par_iter()
            .map(|m| cover_fails(grid, m, budget))
            .collect::<Result<_>>()?;
        let failing = verdicts.iter().filter(|v| **v == Some(true)).count();
        let undecided = verdicts.iter().filter(|v| v.is_none()).count();
        all &= failing == class.members.len();
        out.push(ClassRefutation {
            representative: class.representative.rows(),
            members: class.members.len(),
            failing_members: failing,
            undecided_members: undecided,
        });
    }
    let non_simple = non_simple_line.len();
    let line_refuted = non_simple_line.iter().filter(|(_, c)| *c).count();
    let simple: usize = classes.iter().map(|c| c.members.len()).sum();
    Ok(ColoringRefutation {
        n,
        colors,
        total,
        non_simple,
        line_refuted,
        refuted: all && line_refuted == non_simple && non_simple + simple == total,
        classes: out,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_cells() {
        let g = square_grid(4).unwrap();
        assert_eq!(g.cells(), 16);
        let c = g.circle();
        let cell = g.cell(0, 0);
        let side = [c.a(0), c.b(0), c.a(1)];
        let mut expected: Vec<usize> = side
            .iter()
            .flat_map(|&x| side.iter().map(move |&y| (x, y)))
            .map(|(x, y)| g.space().pair(x, y))
            .collect();
        expected.sort();
        assert_eq!(cell.points(), expected);
        let mut row = g.space().empty_set();
        for j in 0..4 {
            row.union_with(g.cell(0, j).members());
        }
        // the band over [-, b_0] in the first coordinate
        let band: Vec<usize> = g
            .space()
            .points()
            .filter(|&p| side.contains(&g.space().coords(p).0))
            .collect();
        assert_eq!(row.to_vec(), band);
        assert_eq!(g.symmetries().len(), 128);
    }

    #[test]
    fn one_color_has_no_simple_colorings() {
        let g = square_grid(4).unwrap();
        assert!(enumerate_simple_colorings(&g, 1, true).unwrap().is_empty());
    }

    #[test]
    fn coloring_round_trips() {
        let g = square_grid(4).unwrap();
        let col = Coloring::from_rows(2, &["1001", "0011", "0110", "1100"]).unwrap();
        assert!(col.is_simple());
        let cover = cover_from_coloring(&g, &col).unwrap();
        assert_eq!(cover.len(), 2);
        assert!(cover.is_principal());
        assert_eq!(coloring_from_cover(&g, &cover), Some(col.clone()));
        assert_eq!(Coloring::parse(&col.to_text()).unwrap(), col);
    }

    #[test]
    fn lines_through_open_points() {
        // columns 0 and 1 alternate so every row meets color 0 in one of them
        let col = Coloring::from_rows(2, &["0111", "1011", "0111", "1011"]).unwrap();
        assert!(col.class_contains_line(0));
        let full = Coloring::from_rows(2, &["0000", "1101", "1011", "0111"]).unwrap();
        assert!(full.class_contains_line(0));
    }
}
