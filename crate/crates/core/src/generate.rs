//! Seeded random instance generators and a few named graph families.

use std::collections::{BTreeMap, HashSet};

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::graph::Graph;

/// Full restarts allowed before the pairing model gives up.
pub const PAIRING_RESTARTS: usize = 200;

pub fn rng_from_seed(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Mixes a base seed with two stream indices (splitmix64 finalizer), giving
/// independent per-epoch, per-instance or per-restart seeds.
pub fn derive_seed(base: u64, a: u64, b: u64) -> u64 {
    let mut z = base
        ^ a.wrapping_mul(0x9E37_79B9_7F4A_7C15)
        ^ b.wrapping_mul(0xC2B2_AE3D_27D4_EB4F).rotate_left(31);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Random `d`-regular graph on `n` nodes by the pairing model.
///
/// Each round shuffles the open stubs and pairs them up; a pair that would
/// form a self-loop or a repeated edge is rejected and its stubs go back into
/// the pool for the next round. When no admissible pair is left among the
/// open stubs the whole attempt is restarted.
pub fn random_regular(n: usize, d: usize, seed: u64) -> Result<Graph> {
    if (n * d) % 2 == 1 {
        return Err(Error::InvalidArgument(format!(
            "n*d = {} is odd, no {d}-regular graph on {n} nodes",
            n * d
        )));
    }
    if d >= n && !(n == 0 && d == 0) {
        return Err(Error::InvalidArgument(format!("degree {d} must be below n = {n}")));
    }
    let mut rng = rng_from_seed(seed);
    for _ in 0..PAIRING_RESTARTS {
        if let Some(edges) = try_pairing(n, d, &mut rng) {
            return Graph::from_edges(n, edges);
        }
    }
    Err(Error::RetryBudgetExhausted {
        seed,
        attempts: PAIRING_RESTARTS,
    })
}

fn try_pairing<R: Rng>(n: usize, d: usize, rng: &mut R) -> Option<Vec<(usize, usize)>> {
    let mut edges: HashSet<(usize, usize)> = HashSet::with_capacity(n * d / 2);
    let mut stubs: Vec<usize> = (0..n).flat_map(|v| std::iter::repeat_n(v, d)).collect();
    while !stubs.is_empty() {
        stubs.shuffle(rng);
        // BTreeMap keeps the leftover order independent of hashing
        let mut leftover: BTreeMap<usize, usize> = BTreeMap::new();
        for pair in stubs.chunks_exact(2) {
            let (a, b) = (pair[0].min(pair[1]), pair[0].max(pair[1]));
            if a != b && !edges.contains(&(a, b)) {
                edges.insert((a, b));
            } else {
                *leftover.entry(a).or_default() += 1;
                *leftover.entry(b).or_default() += 1;
            }
        }
        if leftover.is_empty() {
            break;
        }
        let open: Vec<usize> = leftover.keys().copied().collect();
        let admissible = open.iter().enumerate().any(|(i, &a)| {
            open[i + 1..]
                .iter()
                .any(|&b| !edges.contains(&(a.min(b), a.max(b))))
        });
        if !admissible {
            return None;
        }
        stubs = leftover
            .into_iter()
            .flat_map(|(v, c)| std::iter::repeat_n(v, c))
            .collect();
    }
    let mut edges: Vec<_> = edges.into_iter().collect();
    edges.sort_unstable();
    Some(edges)
}

/// Erdős–Rényi G(n, p).
pub fn gnp(n: usize, p: f64, seed: u64) -> Result<Graph> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::InvalidArgument(format!("p = {p} outside [0, 1]")));
    }
    let mut rng = rng_from_seed(seed);
    let mut edges = Vec::new();
    for u in 0..n {
        for v in (u + 1)..n {
            if rng.gen::<f64>() < p {
                edges.push((u, v));
            }
        }
    }
    Graph::from_edges(n, edges)
}

pub fn path(n: usize) -> Graph {
    Graph::from_edges(n, (1..n).map(|v| (v - 1, v))).expect("valid path")
}

pub fn cycle(n: usize) -> Graph {
    assert!(n >= 3, "cycle needs at least 3 nodes");
    Graph::from_edges(n, (0..n).map(|v| (v, (v + 1) % n))).expect("valid cycle")
}

pub fn complete(n: usize) -> Graph {
    let edges = (0..n).flat_map(|u| ((u + 1)..n).map(move |v| (u, v)));
    Graph::from_edges(n, edges).expect("valid clique")
}

/// Star with center 0 and `leaves` leaves.
pub fn star(leaves: usize) -> Graph {
    Graph::from_edges(leaves + 1, (1..=leaves).map(|v| (0, v))).expect("valid star")
}

pub fn petersen() -> Graph {
    let outer = (0..5).map(|i| (i, (i + 1) % 5));
    let spokes = (0..5).map(|i| (i, i + 5));
    let inner = (0..5).map(|i| (5 + i, 5 + (i + 2) % 5));
    Graph::from_edges(10, outer.chain(spokes).chain(inner)).expect("valid petersen")
}

/// Queen graph on a `rows x cols` board; square `(r, c)` is node `r*cols + c`.
pub fn queen(rows: usize, cols: usize) -> Graph {
    let mut edges = Vec::new();
    for r1 in 0..rows {
        for c1 in 0..cols {
            for r2 in r1..rows {
                for c2 in 0..cols {
                    if (r2, c2) <= (r1, c1) {
                        continue;
                    }
                    let (dr, dc) = (r2.abs_diff(r1), c2.abs_diff(c1));
                    if dr == 0 || dc == 0 || dr == dc {
                        edges.push((r1 * cols + c1, r2 * cols + c2));
                    }
                }
            }
        }
    }
    Graph::from_edges(rows * cols, edges).expect("valid queen graph")
}

/// Mycielski construction: for each node `v` adds a shadow `v'` adjacent to
/// `N(v)`, plus an apex adjacent to every shadow.
pub fn mycielskian(g: &Graph) -> Graph {
    let n = g.n();
    let apex = 2 * n;
    let mut edges: Vec<(usize, usize)> = g.edges().to_vec();
    for &(u, v) in g.edges() {
        edges.push((u, n + v));
        edges.push((v, n + u));
    }
    edges.extend((0..n).map(|v| (n + v, apex)));
    Graph::from_edges(2 * n + 1, edges).expect("valid mycielskian")
}

/// The `myciel<order>` family of the COLOR benchmarks: `myciel3` is the
/// Grötzsch graph and each step applies the Mycielski construction once more.
/// `myciel<order>` has chromatic number `order + 1`.
pub fn myciel(order: usize) -> Graph {
    assert!(order >= 2, "myciel order starts at 2 (the 5-cycle)");
    let mut g = cycle(5);
    for _ in 2..order {
        g = mycielskian(&g);
    }
    g
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn one_regular_is_matching() {
        for seed in 0..10 {
            let g = random_regular(4, 1, seed).unwrap();
            assert_eq!(g.m(), 2);
            assert!((0..4).all(|v| g.degree(v) == 1));
        }
    }

    #[test]
    fn parity_and_degree_errors() {
        assert!(random_regular(5, 1, 0).is_err());
        assert!(random_regular(4, 4, 0).is_err());
    }

    #[test]
    fn dense_regular_is_uniform() {
        let g = random_regular(128, 16, 7).unwrap();
        assert!((0..128).all(|v| g.degree(v) == 16));
        assert_eq!(g.m(), 128 * 16 / 2);
    }

    #[test]
    fn regular_is_deterministic() {
        assert_eq!(random_regular(30, 4, 3).unwrap(), random_regular(30, 4, 3).unwrap());
        assert_ne!(random_regular(30, 4, 3).unwrap(), random_regular(30, 4, 4).unwrap());
    }

    #[test]
    fn gnp_extremes() {
        assert_eq!(gnp(10, 0.0, 1).unwrap().m(), 0);
        assert_eq!(gnp(4, 1.0, 1).unwrap().m(), 6);
        assert!(gnp(4, 1.5, 1).is_err());
        assert!(gnp(4, -0.1, 1).is_err());
    }

    #[test]
    fn gnp_edge_count_band() {
        // C(50,2) = 1225 pairs, mean 245, sd = sqrt(1225*0.2*0.8) = 14.0;
        // 200..290 is roughly +-3.2 sd around the mean
        let g = gnp(50, 0.2, 42).unwrap();
        assert!((200..=290).contains(&g.m()), "m = {}", g.m());
    }

    #[test]
    fn named_families() {
        let q = queen(5, 5);
        assert_eq!((q.n(), q.m()), (25, 160));
        assert_eq!(q.min_degree(), 12);
        let q = queen(8, 12);
        assert_eq!((q.n(), q.m()), (96, 1368));
        let m = myciel(5);
        assert_eq!((m.n(), m.m()), (47, 236));
        assert_eq!(myciel(3).m(), 20);
        let p = petersen();
        assert_eq!(p.m(), 15);
        assert!((0..10).all(|v| p.degree(v) == 3));
    }
}
