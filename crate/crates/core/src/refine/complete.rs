//! Exact completion of a partial coloring by backtracking.

use crate::graph::{ColorAssignment, Graph};

use super::partial::PartialAssignment;

/// Default expansion budget for [`exact_complete`].
pub const DEFAULT_BUDGET: u64 = 10_000_000;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Completion {
    Colored(ColorAssignment),
    Unsat,
    BudgetExceeded,
}

impl Completion {
    pub fn coloring(&self) -> Option<&ColorAssignment> {
        match self {
            Completion::Colored(a) => Some(a),
            _ => None,
        }
    }
}

const UNCOLORED: usize = usize::MAX;

struct Search<'a> {
    g: &'a Graph,
    k: usize,
    banned: Vec<bool>,
    /// colored neighbors of `v` holding color `c`, at `v*k + c`
    count: Vec<u32>,
    /// colors still open to `v`
    domain: Vec<usize>,
    /// uncolored neighbors of `v`
    free_degree: Vec<usize>,
    colors: Vec<usize>,
    uncolored: usize,
    /// colors `0..used` appear so far; only meaningful when `symmetric`
    used: usize,
    symmetric: bool,
    expansions: u64,
    budget: u64,
}

impl<'a> Search<'a> {
    fn new(g: &'a Graph, k: usize, pa: &PartialAssignment, budget: u64) -> Self {
        let n = g.n();
        let mut banned = vec![false; n * k];
        let mut domain = vec![k; n];
        for (&v, set) in &pa.forbidden {
            for &c in set {
                if c < k && !banned[v * k + c] {
                    banned[v * k + c] = true;
                    domain[v] -= 1;
                }
            }
        }
        Search {
            g,
            k,
            banned,
            count: vec![0; n * k],
            domain,
            free_degree: (0..n).map(|v| g.degree(v)).collect(),
            colors: vec![UNCOLORED; n],
            uncolored: n,
            used: 0,
            symmetric: pa.is_empty(),
            expansions: 0,
            budget,
        }
    }

    #[inline]
    fn open(&self, v: usize, c: usize) -> bool {
        let idx = v * self.k + c;
        !self.banned[idx] && self.count[idx] == 0
    }

    /// Returns `false` when some uncolored neighbor is left without colors.
    /// The assignment is applied either way so `unassign` can undo it.
    fn assign(&mut self, v: usize, c: usize) -> bool {
        self.colors[v] = c;
        self.uncolored -= 1;
        let mut alive = true;
        for &u in self.g.neighbors(v) {
            self.free_degree[u] -= 1;
            let idx = u * self.k + c;
            if self.count[idx] == 0 && !self.banned[idx] {
                self.domain[u] -= 1;
                if self.domain[u] == 0 && self.colors[u] == UNCOLORED {
                    alive = false;
                }
            }
            self.count[idx] += 1;
        }
        alive
    }

    fn unassign(&mut self, v: usize, c: usize) {
        for &u in self.g.neighbors(v) {
            self.free_degree[u] += 1;
            let idx = u * self.k + c;
            self.count[idx] -= 1;
            if self.count[idx] == 0 && !self.banned[idx] {
                self.domain[u] += 1;
            }
        }
        self.colors[v] = UNCOLORED;
        self.uncolored += 1;
    }

    /// Uncolored node with the fewest open colors, then most uncolored
    /// neighbors, then lowest id.
    fn select(&self) -> usize {
        let mut best = UNCOLORED;
        for v in 0..self.g.n() {
            if self.colors[v] != UNCOLORED {
                continue;
            }
            if best == UNCOLORED
                || self.domain[v] < self.domain[best]
                || (self.domain[v] == self.domain[best]
                    && self.free_degree[v] > self.free_degree[best])
            {
                best = v;
            }
        }
        best
    }

    /// `Some(true)` found, `Some(false)` exhausted, `None` out of budget.
    fn solve(&mut self) -> Option<bool> {
        if self.uncolored == 0 {
            return Some(true);
        }
        let v = self.select();
        let limit = if self.symmetric {
            (self.used + 1).min(self.k)
        } else {
            self.k
        };
        for c in 0..limit {
            if !self.open(v, c) {
                continue;
            }
            self.expansions += 1;
            if self.expansions > self.budget {
                return None;
            }
            let prev_used = self.used;
            if c == self.used {
                self.used += 1;
            }
            if self.assign(v, c) {
                match self.solve() {
                    Some(true) => return Some(true),
                    None => return None,
                    Some(false) => {}
                }
            }
            self.unassign(v, c);
            self.used = prev_used;
        }
        Some(false)
    }
}

/// Searches for a conflict-free `k`-coloring honoring every pin and forbid.
///
/// Most-constrained-node-first backtracking with forward checking. Without
/// constraints, color labels are interchangeable and a node may only open one
/// new color beyond those already in use.
pub fn exact_complete(g: &Graph, k: usize, pa: &PartialAssignment, budget: u64) -> Completion {
    exact_complete_counted(g, k, pa, budget).0
}

/// [`exact_complete`] that also reports how many expansions were spent.
pub fn exact_complete_counted(
    g: &Graph,
    k: usize,
    pa: &PartialAssignment,
    budget: u64,
) -> (Completion, u64) {
    if k == 0 {
        let out = if g.n() == 0 {
            Completion::Colored(ColorAssignment::uniform(0, 1))
        } else {
            Completion::Unsat
        };
        return (out, 0);
    }
    if pa.validate(g.n(), k).is_err() {
        return (Completion::Unsat, 0);
    }
    let mut search = Search::new(g, k, pa, budget);
    for (&v, &c) in &pa.pinned {
        if !search.open(v, c) {
            return (Completion::Unsat, 0);
        }
        search.assign(v, c);
    }
    // a pinned neighbor can already have emptied some domain
    if (0..g.n()).any(|v| search.colors[v] == UNCOLORED && search.domain[v] == 0) {
        return (Completion::Unsat, 0);
    }
    let out = match search.solve() {
        Some(true) => Completion::Colored(
            ColorAssignment::new(search.colors, k).expect("search colors stay in palette"),
        ),
        Some(false) => Completion::Unsat,
        None => Completion::BudgetExceeded,
    };
    (out, search.expansions.min(budget))
}
