//! Line-oriented text format for spaces:
//!
//! ```text
//! space <name> <N>
//! point <id> <label>
//! cover <lo> <hi>
//! ```

use std::fmt::Write;

use super::FiniteSpace;
use crate::error::{Error, Result};
use crate::pointset::PointSet;

pub fn write_space(space: &FiniteSpace) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "space {} {}", space.name(), space.len());
    for p in space.points() {
        let _ = writeln!(out, "point {} {}", p, space.label(p));
    }
    for (lo, hi) in space.covering_pairs() {
        let _ = writeln!(out, "cover {lo} {hi}");
    }
    out
}

pub fn parse_space(text: &str) -> Result<FiniteSpace> {
    let mut header: Option<(String, usize)> = None;
    let mut labels: Vec<Option<String>> = Vec::new();
    let mut pairs = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let err = |message: &str| Error::Parse {
            line: line_no,
            message: message.to_string(),
        };
        let mut words = line.split_whitespace();
        match words.next() {
            Some("space") => {
                let name = words.next().ok_or_else(|| err("missing space name"))?;
                let n: usize = words
                    .next()
                    .and_then(|w| w.parse().ok())
                    .ok_or_else(|| err("missing point count"))?;
                header = Some((name.to_string(), n));
                labels = vec![None; n];
            }
            Some("point") => {
                if header.is_none() {
                    return Err(err("point before header"));
                }
                let id: usize = words
                    .next()
                    .and_then(|w| w.parse().ok())
                    .ok_or_else(|| err("bad point id"))?;
                let label = words.collect::<Vec<_>>().join(" ");
                let slot = labels.get_mut(id).ok_or_else(|| err("point id out of range"))?;
                *slot = Some(if label.is_empty() { id.to_string() } else { label });
            }
            Some("cover") => {
                let lo: usize = words
                    .next()
                    .and_then(|w| w.parse().ok())
                    .ok_or_else(|| err("bad cover pair"))?;
                let hi: usize = words
                    .next()
                    .and_then(|w| w.parse().ok())
                    .ok_or_else(|| err("bad cover pair"))?;
                pairs.push((lo, hi));
            }
            Some(other) => return Err(err(&format!("unknown record '{other}'"))),
            None => {}
        }
    }
    let (name, _) = header.ok_or_else(|| Error::Empty("no space header".into()))?;
    let labels = labels
        .into_iter()
        .enumerate()
        .map(|(i, l)| l.unwrap_or_else(|| i.to_string()))
        .collect();
    FiniteSpace::build(name, labels, &pairs)
}

/// Sorted, space-separated id list.
pub fn write_point_list(set: &PointSet) -> String {
    set.iter().map(|p| p.to_string()).collect::<Vec<_>>().join(" ")
}

pub fn parse_point_list(width: usize, text: &str) -> Result<PointSet> {
    let mut set = PointSet::empty(width);
    for word in text.split_whitespace() {
        let p: usize = word.parse().map_err(|_| Error::Parse {
            line: 0,
            message: format!("bad point id '{word}'"),
        })?;
        if p >= width {
            return Err(Error::Parse {
                line: 0,
                message: format!("point id {p} out of range"),
            });
        }
        set.insert(p);
    }
    Ok(set)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::space::{product, KhalimskyCircle};

    #[test]
    fn round_trip() {
        let c = KhalimskyCircle::new(3).unwrap();
        let t = product(c.space(), c.space());
        let text = write_space(&t);
        let back = parse_space(&text).unwrap();
        assert_eq!(back.name(), t.name());
        assert!(back.same_as(&t));
        assert_eq!(back.label(7), t.label(7));
    }

    #[test]
    fn rejects_garbage() {
        assert!(parse_space("").is_err());
        assert!(matches!(
            parse_space("space x 2\nfoo 1"),
            Err(Error::Parse { line: 2, .. })
        ));
        assert!(matches!(
            parse_space("space x 2\ncover 0 1\ncover 1 0"),
            Err(Error::CycleDetected(_))
        ));
    }

    #[test]
    fn point_lists() {
        let s = PointSet::from_points(8, [5, 1, 3]);
        assert_eq!(write_point_list(&s), "1 3 5");
        assert_eq!(parse_point_list(8, "5 3 1").unwrap(), s);
        assert!(parse_point_list(4, "9").is_err());
    }
}
