//! Enumeration of all topologies on `n` labelled points.
//!
//! Topologies on a finite set correspond to preorders (`x ≤ y` iff
//! `y ∈ U(x)`). A preorder on `{0, .., i}` restricts to a preorder on
//! `{0, .., i-1}` and is recovered from it by two sets: the points above the
//! new point `i` (an up-set `A`) and the points below it (a down-set `B`),
//! subject to `A ⊆ U(x)` for every `x ∈ B`. Extending point by point never
//! dead-ends, so every search node lies on the path to some output.

use rayon::prelude::*;

use super::{FinTopology, SubsetMask, TopologyError};

/// Largest `n` accepted by the enumerators; `n = 7` needs `allow_large`.
pub const MAX_ENUMERATION_POINTS: usize = 7;

const DEFAULT_LIMIT: usize = 6;

fn check_budget(n: usize, allow_large: bool) -> Result<(), TopologyError> {
    if n == 0 {
        return Err(TopologyError::GroundOutOfRange(0));
    }
    let limit = if allow_large { MAX_ENUMERATION_POINTS } else { DEFAULT_LIMIT };
    if n > limit {
        return Err(TopologyError::BudgetExceeded { n });
    }
    Ok(())
}

type Preorder = Vec<u32>;

/// Up-sets of the preorder given by neighbourhoods on `0..i`.
fn up_sets(nbhd: &[u32]) -> Vec<u32> {
    let i = nbhd.len();
    (0u32..1 << i)
        .filter(|&a| {
            let mut rest = a;
            while rest != 0 {
                let x = rest.trailing_zeros() as usize;
                rest &= rest - 1;
                if nbhd[x] & !a != 0 {
                    return false;
                }
            }
            true
        })
        .collect()
}

/// Visits every valid `(above, below)` pair for adding point `nbhd.len()`.
#[inline]
fn for_each_extension(nbhd: &[u32], mut f: impl FnMut(u32, u32)) {
    let i = nbhd.len();
    let all = (1u32 << i) - 1;
    let ups = up_sets(nbhd);
    for &complement in &ups {
        let below = all & !complement;
        let mut bound = all;
        let mut rest = below;
        while rest != 0 {
            let x = rest.trailing_zeros() as usize;
            rest &= rest - 1;
            bound &= nbhd[x];
        }
        for &above in &ups {
            if above & !bound == 0 {
                f(above, below);
            }
        }
    }
}

fn extend(nbhd: &[u32], above: u32, below: u32) -> Preorder {
    let i = nbhd.len();
    let bit = 1u32 << i;
    let mut child: Preorder = nbhd
        .iter()
        .enumerate()
        .map(|(x, &u)| if below >> x & 1 == 1 { u | bit } else { u })
        .collect();
    child.push(above | bit);
    child
}

fn to_topology(nbhd: &[u32]) -> FinTopology {
    FinTopology::from_neighborhoods_unchecked(
        nbhd.iter().map(|&u| SubsetMask(u as u128)).collect(),
    )
}

struct Frame {
    nbhd: Preorder,
    options: Vec<(u32, u32)>,
    next: usize,
}

impl Frame {
    fn new(nbhd: Preorder) -> Self {
        let mut options = Vec::new();
        for_each_extension(&nbhd, |a, b| options.push((a, b)));
        Frame { nbhd, options, next: 0 }
    }
}

/// Depth-first stream over all topologies on `n` points.
///
/// The order is deterministic and every topology appears exactly once.
pub struct TopologyStream {
    n: usize,
    stack: Vec<Frame>,
}

impl Iterator for TopologyStream {
    type Item = FinTopology;

    fn next(&mut self) -> Option<FinTopology> {
        loop {
            let top = self.stack.last_mut()?;
            if top.next == top.options.len() {
                self.stack.pop();
                continue;
            }
            let (above, below) = top.options[top.next];
            top.next += 1;
            let child = extend(&top.nbhd, above, below);
            if child.len() == self.n {
                return Some(to_topology(&child));
            }
            self.stack.push(Frame::new(child));
        }
    }
}

/// Streams every topology on `n` points. `n = 7` (9 535 241 topologies)
/// requires `allow_large`.
pub fn enumerate_topologies(n: usize, allow_large: bool) -> Result<TopologyStream, TopologyError> {
    check_budget(n, allow_large)?;
    Ok(TopologyStream { n, stack: vec![Frame::new(Vec::new())] })
}

/// Calls `f` on every topology on `n` points in stream order without
/// building an explicit stack of option lists.
pub fn for_each_topology(
    n: usize,
    allow_large: bool,
    mut f: impl FnMut(FinTopology),
) -> Result<(), TopologyError> {
    check_budget(n, allow_large)?;
    fn walk(nbhd: &[u32], n: usize, f: &mut dyn FnMut(FinTopology)) {
        if nbhd.len() == n {
            f(to_topology(nbhd));
            return;
        }
        let mut options = Vec::new();
        for_each_extension(nbhd, |a, b| options.push((a, b)));
        for (a, b) in options {
            walk(&extend(nbhd, a, b), n, f);
        }
    }
    walk(&[], n, &mut f);
    Ok(())
}

fn preorders(n: usize) -> Vec<Preorder> {
    let mut level: Vec<Preorder> = vec![Vec::new()];
    for _ in 0..n {
        let mut next = Vec::new();
        for p in &level {
            for_each_extension(p, |a, b| next.push(extend(p, a, b)));
        }
        level = next;
    }
    level
}

/// Number of topologies on `n` points, counted without materializing the
/// last level.
pub fn count_topologies(n: usize, allow_large: bool) -> Result<u64, TopologyError> {
    check_budget(n, allow_large)?;
    let parents = preorders(n - 1);
    Ok(parents
        .par_iter()
        .map(|p| {
            let mut c = 0u64;
            for_each_extension(p, |_, _| c += 1);
            c
        })
        .sum())
}
