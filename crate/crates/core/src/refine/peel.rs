use std::cmp::Reverse;
use std::collections::BinaryHeap;

use crate::error::{Error, Result};
use crate::graph::{ColorAssignment, Graph};

/// Outcome of removing low-degree nodes.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PeelResult {
    pub reduced: Graph,
    /// `kept_ids[i]` is the original id of reduced node `i`.
    pub kept_ids: Vec<usize>,
    /// Removed nodes in removal order, each with the neighbors it still had
    /// when it was removed.
    pub stack: Vec<(usize, Vec<usize>)>,
    pub original_n: usize,
    pub k: usize,
}

impl PeelResult {
    pub fn peeled(&self) -> usize {
        self.stack.len()
    }
}

/// Repeatedly removes the lowest-id node whose current degree is below `k`.
/// What remains is the `k`-core.
pub fn preprocess_peel(g: &Graph, k: usize) -> PeelResult {
    let n = g.n();
    let mut degree: Vec<usize> = (0..n).map(|v| g.degree(v)).collect();
    let mut removed = vec![false; n];
    let mut queued = vec![false; n];
    let mut heap = BinaryHeap::new();
    for v in 0..n {
        if degree[v] < k {
            heap.push(Reverse(v));
            queued[v] = true;
        }
    }
    let mut stack = Vec::new();
    while let Some(Reverse(v)) = heap.pop() {
        let remaining: Vec<usize> = g
            .neighbors(v)
            .iter()
            .copied()
            .filter(|&u| !removed[u])
            .collect();
        removed[v] = true;
        for &u in &remaining {
            degree[u] -= 1;
            if degree[u] < k && !queued[u] {
                queued[u] = true;
                heap.push(Reverse(u));
            }
        }
        stack.push((v, remaining));
    }
    let kept_ids: Vec<usize> = (0..n).filter(|&v| !removed[v]).collect();
    PeelResult {
        reduced: g.induced(&kept_ids),
        kept_ids,
        stack,
        original_n: n,
        k,
    }
}

/// Lifts a coloring of the reduced graph back to the original graph.
///
/// Peeled nodes are restored in reverse removal order, each taking the
/// smallest color unused by the neighbors it had at removal time. Fewer than
/// `k` of them exist, so a free color below `k` is always available and no
/// conflict is added.
pub fn reinsert(peel: &PeelResult, reduced_colors: &ColorAssignment) -> Result<ColorAssignment> {
    if reduced_colors.len() != peel.reduced.n() {
        return Err(Error::LengthMismatch {
            expected: peel.reduced.n(),
            got: reduced_colors.len(),
        });
    }
    let k = reduced_colors.k().max(peel.k).max(1);
    let mut colors = vec![usize::MAX; peel.original_n];
    for (i, &orig) in peel.kept_ids.iter().enumerate() {
        colors[orig] = reduced_colors.get(i);
    }
    let mut used = vec![false; k + 1];
    for (v, nbrs) in peel.stack.iter().rev() {
        used.iter_mut().for_each(|b| *b = false);
        for &u in nbrs {
            let c = colors[u];
            if c == usize::MAX {
                return Err(Error::Invariant(format!(
                    "neighbor {u} of reinserted node {v} is uncolored"
                )));
            }
            if c < used.len() {
                used[c] = true;
            }
        }
        let free = used.iter().position(|&b| !b).unwrap();
        if free >= k {
            return Err(Error::Invariant(format!(
                "node {v} had {} recorded neighbors, no free color below {k}",
                nbrs.len()
            )));
        }
        colors[*v] = free;
    }
    ColorAssignment::new(colors, k)
}
