//! Independent oracles shared by the integration tests. Everything here is
//! brute force over tiny instances and avoids the crate's search code.

#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet};

use gdn_core::Graph;
use proptest::prelude::*;

/// Every assignment in `0..k` for `n` nodes, as a callback over colors.
pub fn for_each_assignment(n: usize, k: usize, mut f: impl FnMut(&[usize]) -> bool) {
    if k == 0 {
        if n == 0 {
            f(&[]);
        }
        return;
    }
    let mut colors = vec![0usize; n];
    loop {
        if !f(&colors) {
            return;
        }
        let mut i = 0;
        loop {
            if i == n {
                return;
            }
            colors[i] += 1;
            if colors[i] < k {
                break;
            }
            colors[i] = 0;
            i += 1;
        }
    }
}

/// Monochromatic edges by a direct scan of the edge list.
pub fn scan_conflicts(g: &Graph, colors: &[usize]) -> usize {
    g.edges().iter().filter(|&&(u, v)| colors[u] == colors[v]).count()
}

pub fn brute_colorable(
    g: &Graph,
    k: usize,
    pins: &BTreeMap<usize, usize>,
    forbidden: &BTreeMap<usize, BTreeSet<usize>>,
) -> bool {
    let mut found = false;
    for_each_assignment(g.n(), k, |c| {
        let ok = scan_conflicts(g, c) == 0
            && pins.iter().all(|(&v, &p)| c[v] == p)
            && forbidden.iter().all(|(&v, s)| !s.contains(&c[v]));
        if ok {
            found = true;
        }
        !found
    });
    found
}

pub fn brute_chromatic(g: &Graph) -> usize {
    if g.n() == 0 {
        return 0;
    }
    (1..=g.n())
        .find(|&k| brute_colorable(g, k, &BTreeMap::new(), &BTreeMap::new()))
        .unwrap()
}

/// Minimum conflicts over all `k^n` assignments.
pub fn brute_min_conflicts(g: &Graph, k: usize) -> usize {
    let mut best = usize::MAX;
    for_each_assignment(g.n(), k, |c| {
        best = best.min(scan_conflicts(g, c));
        best > 0
    });
    best
}

/// Graph on `1..=max_n` nodes with each pair present independently.
pub fn small_graph(max_n: usize) -> impl Strategy<Value = Graph> {
    (1..=max_n).prop_flat_map(|n| {
        let pairs = n * (n - 1) / 2;
        proptest::collection::vec(any::<bool>(), pairs).prop_map(move |bits| {
            let mut edges = Vec::new();
            let mut idx = 0;
            for u in 0..n {
                for v in u + 1..n {
                    if bits[idx] {
                        edges.push((u, v));
                    }
                    idx += 1;
                }
            }
            Graph::from_edges(n, edges).unwrap()
        })
    })
}

/// Graph with edge density drawn between 0.1 and 0.6.
pub fn sparse_graph(max_n: usize) -> impl Strategy<Value = Graph> {
    (2..=max_n, 0.1f64..0.6, any::<u64>())
        .prop_map(|(n, p, seed)| gdn_core::generate::gnp(n, p, seed).unwrap())
}

pub fn rel_err(a: f64, b: f64) -> f64 {
    let scale = a.abs().max(b.abs());
    if scale == 0.0 {
        0.0
    } else {
        (a - b).abs() / scale
    }
}
