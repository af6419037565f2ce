//! Undirected simple graphs, color assignments and conflict accounting.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Immutable undirected simple graph in compressed adjacency form.
///
/// Edges are stored canonically as `(min, max)` pairs in lexicographic order,
/// and every neighbor list is sorted. Node ids are dense `0..n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Graph {
    n: usize,
    edges: Vec<(usize, usize)>,
    offsets: Vec<usize>,
    targets: Vec<usize>,
}

impl Graph {
    /// Builds a graph from an arbitrary edge list. Reversed and repeated
    /// pairs are collapsed; self-loops and out-of-range ids are rejected.
    pub fn from_edges<I>(n: usize, edges: I) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        let mut canon = Vec::new();
        for (u, v) in edges {
            if u >= n || v >= n {
                return Err(Error::InvalidGraph(format!(
                    "edge ({u}, {v}) out of range for {n} nodes"
                )));
            }
            if u == v {
                return Err(Error::InvalidGraph(format!("self-loop on node {u}")));
            }
            canon.push((u.min(v), u.max(v)));
        }
        canon.sort_unstable();
        canon.dedup();
        Ok(Self::from_canonical(n, canon))
    }

    /// `edges` must already be canonical, sorted and deduplicated.
    fn from_canonical(n: usize, edges: Vec<(usize, usize)>) -> Self {
        let mut degree = vec![0usize; n];
        for &(u, v) in &edges {
            degree[u] += 1;
            degree[v] += 1;
        }
        let mut offsets = Vec::with_capacity(n + 1);
        offsets.push(0);
        for d in &degree {
            offsets.push(offsets.last().unwrap() + d);
        }
        let mut fill = offsets[..n].to_vec();
        let mut targets = vec![0usize; 2 * edges.len()];
        for &(u, v) in &edges {
            targets[fill[u]] = v;
            fill[u] += 1;
            targets[fill[v]] = u;
            fill[v] += 1;
        }
        for v in 0..n {
            targets[offsets[v]..offsets[v + 1]].sort_unstable();
        }
        Graph {
            n,
            edges,
            offsets,
            targets,
        }
    }

    pub fn empty(n: usize) -> Self {
        Self::from_canonical(n, Vec::new())
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn m(&self) -> usize {
        self.edges.len()
    }

    #[inline]
    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    #[inline]
    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.targets[self.offsets[v]..self.offsets[v + 1]]
    }

    #[inline]
    pub fn degree(&self, v: usize) -> usize {
        self.offsets[v + 1] - self.offsets[v]
    }

    pub fn max_degree(&self) -> usize {
        (0..self.n).map(|v| self.degree(v)).max().unwrap_or(0)
    }

    pub fn min_degree(&self) -> usize {
        (0..self.n).map(|v| self.degree(v)).min().unwrap_or(0)
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        u < self.n && v < self.n && self.neighbors(u).binary_search(&v).is_ok()
    }

    /// Subgraph induced by `keep` (must be strictly increasing). Node `i` of
    /// the result is `keep[i]` of `self`.
    pub fn induced(&self, keep: &[usize]) -> Graph {
        let mut local = vec![usize::MAX; self.n];
        for (i, &v) in keep.iter().enumerate() {
            local[v] = i;
        }
        let edges = self
            .edges
            .iter()
            .filter_map(|&(u, v)| {
                let (a, b) = (local[u], local[v]);
                (a != usize::MAX && b != usize::MAX).then_some((a.min(b), a.max(b)))
            })
            .collect::<Vec<_>>();
        let mut edges = edges;
        edges.sort_unstable();
        Self::from_canonical(keep.len(), edges)
    }
}

/// Per-node color indices drawn from a palette of size `k`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ColorAssignment {
    colors: Vec<usize>,
    k: usize,
}

impl ColorAssignment {
    pub fn new(colors: Vec<usize>, k: usize) -> Result<Self> {
        if let Some((node, &color)) = colors.iter().enumerate().find(|(_, &c)| c >= k) {
            return Err(Error::ColorOutOfRange { node, color, k });
        }
        Ok(ColorAssignment { colors, k })
    }

    /// Every node color 0.
    pub fn uniform(n: usize, k: usize) -> Self {
        ColorAssignment {
            colors: vec![0; n],
            k: k.max(1),
        }
    }

    #[inline]
    pub fn colors(&self) -> &[usize] {
        &self.colors
    }

    #[inline]
    pub fn k(&self) -> usize {
        self.k
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.colors.len()
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.colors.is_empty()
    }

    #[inline]
    pub fn get(&self, v: usize) -> usize {
        self.colors[v]
    }

    pub fn set(&mut self, v: usize, color: usize) {
        assert!(color < self.k, "color {color} outside palette {}", self.k);
        self.colors[v] = color;
    }

    /// Number of distinct colors actually used.
    pub fn colors_used(&self) -> usize {
        let mut seen = vec![false; self.k];
        for &c in &self.colors {
            seen[c] = true;
        }
        seen.into_iter().filter(|&b| b).count()
    }

    /// Applies a relabelling `c -> perm[c]` to every node.
    pub fn relabel(&self, perm: &[usize]) -> Self {
        ColorAssignment {
            colors: self.colors.iter().map(|&c| perm[c]).collect(),
            k: self.k,
        }
    }

    pub fn into_colors(self) -> Vec<usize> {
        self.colors
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConflictReport {
    pub conflicts: usize,
    pub solved_ratio: f64,
    pub conflict_edges: Vec<(usize, usize)>,
}

/// Counts monochromatic edges of `a` on `g`.
pub fn count_conflicts(g: &Graph, a: &ColorAssignment) -> Result<ConflictReport> {
    if a.len() != g.n() {
        return Err(Error::LengthMismatch {
            expected: g.n(),
            got: a.len(),
        });
    }
    if let Some((node, &color)) = a.colors().iter().enumerate().find(|(_, &c)| c >= a.k()) {
        return Err(Error::ColorOutOfRange {
            node,
            color,
            k: a.k(),
        });
    }
    let conflict_edges: Vec<_> = g
        .edges()
        .iter()
        .copied()
        .filter(|&(u, v)| a.get(u) == a.get(v))
        .collect();
    let conflicts = conflict_edges.len();
    Ok(ConflictReport {
        conflicts,
        solved_ratio: solved_ratio(conflicts, g.m()),
        conflict_edges,
    })
}

/// Conflict count only, without allocating the offending edge list.
/// Panics if `colors` is shorter than the node count.
pub fn conflict_count(g: &Graph, colors: &[usize]) -> usize {
    g.edges()
        .iter()
        .filter(|&&(u, v)| colors[u] == colors[v])
        .count()
}

pub fn solved_ratio(conflicts: usize, m: usize) -> f64 {
    if m == 0 {
        1.0
    } else {
        1.0 - conflicts as f64 / m as f64
    }
}

/// Proper-coloring test by walking adjacency lists (independent of the
/// canonical edge list used by [`count_conflicts`]).
pub fn is_proper(g: &Graph, colors: &[usize]) -> bool {
    (0..g.n()).all(|v| g.neighbors(v).iter().all(|&u| colors[u] != colors[v]))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn triangle() -> Graph {
        Graph::from_edges(3, [(0, 1), (1, 2), (2, 0)]).unwrap()
    }

    #[test]
    fn adjacency_is_symmetric_and_sorted() {
        let g = Graph::from_edges(5, [(4, 0), (2, 0), (0, 1), (3, 4), (1, 0)]).unwrap();
        assert_eq!(g.m(), 4);
        assert_eq!(g.edges(), &[(0, 1), (0, 2), (0, 4), (3, 4)]);
        assert_eq!(g.neighbors(0), &[1, 2, 4]);
        let degree_sum: usize = (0..g.n()).map(|v| g.degree(v)).sum();
        assert_eq!(degree_sum, 2 * g.m());
        for v in 0..g.n() {
            for &u in g.neighbors(v) {
                assert!(g.has_edge(u, v));
            }
        }
    }

    #[test]
    fn rejects_self_loops_and_range() {
        assert!(Graph::from_edges(2, [(1, 1)]).is_err());
        assert!(Graph::from_edges(2, [(0, 2)]).is_err());
    }

    #[test]
    fn proper_triangle() {
        let g = triangle();
        let a = ColorAssignment::new(vec![0, 1, 2], 3).unwrap();
        let r = count_conflicts(&g, &a).unwrap();
        assert_eq!(r.conflicts, 0);
        assert_eq!(r.solved_ratio, 1.0);
    }

    #[test]
    fn monochromatic_graph() {
        let g = triangle();
        let a = ColorAssignment::uniform(3, 3);
        let r = count_conflicts(&g, &a).unwrap();
        assert_eq!(r.conflicts, 3);
        assert_eq!(r.solved_ratio, 0.0);
        assert_eq!(r.conflict_edges.len(), 3);
    }

    #[test]
    fn ten_of_hundred_edges() {
        // 100 disjoint edges, the first 10 monochromatic.
        let edges: Vec<_> = (0..100).map(|i| (2 * i, 2 * i + 1)).collect();
        let g = Graph::from_edges(200, edges).unwrap();
        let colors: Vec<usize> = (0..200).map(|v| if v < 20 { 0 } else { v % 2 }).collect();
        let r = count_conflicts(&g, &ColorAssignment::new(colors, 2).unwrap()).unwrap();
        assert_eq!(r.conflicts, 10);
        assert!((r.solved_ratio - 0.9).abs() < 1e-15);
    }

    #[test]
    fn length_and_range_errors() {
        let g = triangle();
        let short = ColorAssignment::new(vec![0, 1], 3).unwrap();
        assert!(matches!(
            count_conflicts(&g, &short),
            Err(Error::LengthMismatch { .. })
        ));
        assert!(ColorAssignment::new(vec![0, 3, 1], 3).is_err());
    }

    #[test]
    fn empty_graph_is_solved() {
        let g = Graph::empty(4);
        let r = count_conflicts(&g, &ColorAssignment::uniform(4, 1)).unwrap();
        assert_eq!(r.conflicts, 0);
        assert_eq!(r.solved_ratio, 1.0);
    }

    #[test]
    fn induced_subgraph() {
        let g = Graph::from_edges(4, [(0, 1), (1, 2), (2, 3), (0, 3)]).unwrap();
        let h = g.induced(&[1, 2, 3]);
        assert_eq!(h.n(), 3);
        assert_eq!(h.edges(), &[(0, 1), (1, 2)]);
    }
}
