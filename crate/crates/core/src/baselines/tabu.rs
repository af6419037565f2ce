//! Tabucol: one-node recoloring tabu search for a fixed palette.

use rand::Rng;

use crate::generate::rng_from_seed;
use crate::graph::{conflict_count, ColorAssignment, Graph};

#[derive(Clone, Debug, PartialEq)]
pub struct TabuConfig {
    pub iteration_limit: usize,
    /// Tenure is `floor(tenure_factor * conflicts) + uniform{0..tenure_random}`.
    pub tenure_factor: f64,
    pub tenure_random: usize,
    pub seed: u64,
    /// Record the best-so-far conflict count after every iteration.
    pub trace: bool,
}

impl TabuConfig {
    /// 1000 single moves per node.
    pub fn for_graph(g: &Graph, seed: u64) -> Self {
        TabuConfig {
            iteration_limit: (1000 * g.n()).max(1),
            tenure_factor: 0.6,
            tenure_random: 10,
            seed,
            trace: false,
        }
    }
}

#[derive(Clone, Debug)]
pub struct TabuResult {
    pub assignment: ColorAssignment,
    pub conflicts: usize,
    pub iterations: usize,
    pub best_trace: Vec<usize>,
}

/// Forbidden (node, color) pairs, each until a recorded iteration.
#[derive(Clone, Debug)]
pub struct TabuList {
    k: usize,
    until: Vec<usize>,
}

impl TabuList {
    pub fn new(n: usize, k: usize) -> Self {
        TabuList {
            k,
            until: vec![0; n * k],
        }
    }

    /// Forbids `(v, c)` for iterations before `until`.
    pub fn forbid(&mut self, v: usize, c: usize, until: usize) {
        self.until[v * self.k + c] = until;
    }

    #[inline]
    pub fn is_tabu(&self, v: usize, c: usize, iter: usize) -> bool {
        self.until[v * self.k + c] > iter
    }
}

struct State {
    k: usize,
    colors: Vec<usize>,
    /// neighbors of `v` with color `c`, at `v*k + c`
    gamma: Vec<u32>,
    conflicts: usize,
    conflicted: Vec<usize>,
    slot: Vec<usize>,
}

impl State {
    fn new(g: &Graph, init: &ColorAssignment) -> Self {
        let (n, k) = (g.n(), init.k());
        let colors = init.colors().to_vec();
        let mut gamma = vec![0u32; n * k];
        for v in 0..n {
            for &u in g.neighbors(v) {
                gamma[v * k + colors[u]] += 1;
            }
        }
        let mut s = State {
            k,
            conflicts: conflict_count(g, &colors),
            colors,
            gamma,
            conflicted: Vec::new(),
            slot: vec![usize::MAX; n],
        };
        for v in 0..n {
            s.refresh(v);
        }
        s
    }

    #[inline]
    fn own(&self, v: usize) -> u32 {
        self.gamma[v * self.k + self.colors[v]]
    }

    fn refresh(&mut self, v: usize) {
        let bad = self.own(v) > 0;
        let listed = self.slot[v] != usize::MAX;
        if bad && !listed {
            self.slot[v] = self.conflicted.len();
            self.conflicted.push(v);
        } else if !bad && listed {
            let i = self.slot[v];
            let last = *self.conflicted.last().unwrap();
            self.conflicted.swap_remove(i);
            if last != v {
                self.slot[last] = i;
            }
            self.slot[v] = usize::MAX;
        }
    }

    fn recolor(&mut self, g: &Graph, v: usize, to: usize) {
        let from = self.colors[v];
        let k = self.k;
        self.conflicts = self.conflicts + self.gamma[v * k + to] as usize
            - self.gamma[v * k + from] as usize;
        self.colors[v] = to;
        for &u in g.neighbors(v) {
            self.gamma[u * k + from] -= 1;
            self.gamma[u * k + to] += 1;
            self.refresh(u);
        }
        self.refresh(v);
    }
}

/// Runs Tabucol from `init` and returns the best assignment seen.
pub fn tabucol(g: &Graph, init: &ColorAssignment, cfg: &TabuConfig) -> TabuResult {
    let k = init.k();
    let mut state = State::new(g, init);
    let mut best = state.colors.clone();
    let mut best_conflicts = state.conflicts;
    let mut trace = Vec::new();
    let mut rng = rng_from_seed(cfg.seed);
    let mut tabu = TabuList::new(g.n(), k);
    let mut iterations = 0;

    while best_conflicts > 0 && iterations < cfg.iteration_limit && k >= 2 {
        iterations += 1;
        let iter = iterations;
        let mut choice: Option<(usize, usize)> = None;
        let mut best_delta = i64::MAX;
        let mut ties = 0u32;
        for &v in &state.conflicted {
            let own = state.own(v) as i64;
            for c in 0..k {
                if c == state.colors[v] {
                    continue;
                }
                let delta = state.gamma[v * k + c] as i64 - own;
                let forbidden = tabu.is_tabu(v, c, iter);
                let aspires = (state.conflicts as i64 + delta) < best_conflicts as i64;
                if forbidden && !aspires {
                    continue;
                }
                if delta < best_delta {
                    best_delta = delta;
                    choice = Some((v, c));
                    ties = 1;
                } else if delta == best_delta {
                    ties += 1;
                    if rng.gen_range(0..ties) == 0 {
                        choice = Some((v, c));
                    }
                }
            }
        }
        if let Some((v, c)) = choice {
            let old = state.colors[v];
            state.recolor(g, v, c);
            let tenure = (cfg.tenure_factor * state.conflicts as f64).floor() as usize
                + if cfg.tenure_random > 0 {
                    rng.gen_range(0..cfg.tenure_random)
                } else {
                    0
                };
            tabu.forbid(v, old, iter + tenure);
            if state.conflicts < best_conflicts {
                best_conflicts = state.conflicts;
                best.copy_from_slice(&state.colors);
            }
        }
        if cfg.trace {
            trace.push(best_conflicts);
        }
    }
    TabuResult {
        assignment: ColorAssignment::new(best, k).expect("tabu colors stay in palette"),
        conflicts: best_conflicts,
        iterations,
        best_trace: trace,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generate::{complete, cycle, gnp, queen};
    use crate::graph::count_conflicts;

    fn cfg(limit: usize, seed: u64) -> TabuConfig {
        TabuConfig {
            iteration_limit: limit,
            tenure_factor: 0.6,
            tenure_random: 10,
            seed,
            trace: true,
        }
    }

    #[test]
    fn bipartite_four_cycle() {
        let g = cycle(4);
        for seed in 0..10 {
            let r = tabucol(&g, &ColorAssignment::uniform(4, 2), &cfg(50, seed));
            assert_eq!(r.conflicts, 0);
            assert!(r.iterations <= 50);
        }
    }

    #[test]
    fn tabu_entries_expire_on_their_iteration() {
        let mut list = TabuList::new(3, 2);
        list.forbid(1, 0, 5);
        assert!(list.is_tabu(1, 0, 4));
        assert!(!list.is_tabu(1, 0, 5));
        assert!(!list.is_tabu(1, 1, 0));
    }

    #[test]
    fn triangle() {
        let g = complete(3);
        let r = tabucol(&g, &ColorAssignment::uniform(3, 3), &cfg(100, 1));
        assert_eq!(count_conflicts(&g, &r.assignment).unwrap().conflicts, 0);
    }

    #[test]
    fn proper_start_is_untouched() {
        let g = cycle(6);
        let init = ColorAssignment::new(vec![0, 1, 0, 1, 0, 1], 3).unwrap();
        let r = tabucol(&g, &init, &cfg(100, 0));
        assert_eq!(r.iterations, 0);
        assert_eq!(r.assignment, init);
    }

    #[test]
    fn best_trace_never_rises() {
        let g = queen(6, 6);
        let init = ColorAssignment::uniform(36, 6);
        let r = tabucol(&g, &init, &cfg(3000, 4));
        assert!(r.best_trace.windows(2).all(|w| w[1] <= w[0]));
        assert!(r.conflicts <= count_conflicts(&g, &init).unwrap().conflicts);
        assert_eq!(count_conflicts(&g, &r.assignment).unwrap().conflicts, r.conflicts);
    }

    #[test]
    fn deterministic_per_seed() {
        let g = gnp(40, 0.3, 2).unwrap();
        let init = ColorAssignment::uniform(40, 5);
        let a = tabucol(&g, &init, &cfg(2000, 9));
        let b = tabucol(&g, &init, &cfg(2000, 9));
        assert_eq!(a.assignment, b.assignment);
    }
}
