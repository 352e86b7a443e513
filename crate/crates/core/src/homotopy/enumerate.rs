//! Enumeration of hom-sets and their comparability components.

use std::sync::atomic::{AtomicUsize, Ordering};

use rayon::prelude::*;

use super::fence::compare_tables;
use crate::error::{Error, Result};
use crate::space::FiniteSpace;

/// Every continuous map `source -> target` as a value table, in
/// lexicographic order of the values along a linear extension.
pub fn all_maps(source: &FiniteSpace, target: &FiniteSpace, budget: usize) -> Result<Vec<Vec<usize>>> {
    if source.is_empty() {
        return Ok(vec![Vec::new()]);
    }
    if target.is_empty() {
        return Ok(Vec::new());
    }
    let order = source.linear_extension();
    let count = AtomicUsize::new(0);
    let first = order[0];
    let branches: Vec<Result<Vec<Vec<usize>>>> = target
        .points()
        .collect::<Vec<_>>()
        .into_par_iter()
        .map(|v| {
            let mut table = vec![usize::MAX; source.len()];
            table[first] = v;
            let mut out = Vec::new();
            extend(source, target, &order, 1, &mut table, &mut out, &count, budget)?;
            Ok(out)
        })
        .collect();
    let mut maps = Vec::new();
    for b in branches {
        maps.extend(b?);
    }
    Ok(maps)
}

#[allow(clippy::too_many_arguments)]
fn extend(
    source: &FiniteSpace,
    target: &FiniteSpace,
    order: &[usize],
    depth: usize,
    table: &mut Vec<usize>,
    out: &mut Vec<Vec<usize>>,
    count: &AtomicUsize,
    budget: usize,
) -> Result<()> {
    if depth == order.len() {
        if count.fetch_add(1, Ordering::Relaxed) >= budget {
            return Err(Error::BudgetExceeded(budget));
        }
        out.push(table.clone());
        return Ok(());
    }
    let x = order[depth];
    let mut cand = target.full_set();
    for &y in source.lower_covers(x) {
        cand.intersect_with(target.up(table[y]));
    }
    for v in cand.iter() {
        table[x] = v;
        extend(source, target, order, depth + 1, table, out, count, budget)?;
    }
    table[x] = usize::MAX;
    Ok(())
}

/// The hom-set partitioned into components of the comparability graph.
#[derive(Clone, Debug)]
pub struct HomComponents {
    pub maps: Vec<Vec<usize>>,
    /// Component index of each map; components are numbered in order of
    /// their first map.
    pub component: Vec<usize>,
    /// First map of each component.
    pub representatives: Vec<usize>,
}

impl HomComponents {
    pub fn count(&self) -> usize {
        self.representatives.len()
    }

    pub fn index_of(&self, table: &[usize]) -> Option<usize> {
        self.maps.binary_search_by(|m| m.as_slice().cmp(table)).ok()
    }

    pub fn same_component(&self, f: &[usize], g: &[usize]) -> Option<bool> {
        Some(self.component[self.index_of(f)?] == self.component[self.index_of(g)?])
    }

    pub fn members(&self, c: usize) -> impl Iterator<Item = usize> + '_ {
        (0..self.maps.len()).filter(move |&i| self.component[i] == c)
    }
}

/// Enumerates all maps and joins every pointwise comparable pair.
pub fn hom_components(source: &FiniteSpace, target: &FiniteSpace, budget: usize) -> Result<HomComponents> {
    let mut maps = all_maps(source, target, budget)?;
    maps.sort();
    let n = maps.len();
    let edges: Vec<Vec<usize>> = (0..n)
        .into_par_iter()
        .map(|i| {
            ((i + 1)..n)
                .filter(|&j| compare_tables(target, &maps[i], &maps[j]).is_some())
                .collect()
        })
        .collect();
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(parent: &mut [usize], mut x: usize) -> usize {
        while parent[x] != x {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        x
    }
    for (i, js) in edges.iter().enumerate() {
        for &j in js {
            let (a, b) = (find(&mut parent, i), find(&mut parent, j));
            if a != b {
                parent[a.max(b)] = a.min(b);
            }
        }
    }
    let mut label = vec![usize::MAX; n];
    let mut component = vec![0; n];
    let mut representatives = Vec::new();
    for i in 0..n {
        let r = find(&mut parent, i);
        if label[r] == usize::MAX {
            label[r] = representatives.len();
            representatives.push(i);
        }
        component[i] = label[r];
    }
    Ok(HomComponents {
        maps,
        component,
        representatives,
    })
}
