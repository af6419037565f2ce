use crate::graph::{ColorAssignment, Graph};
use crate::refine::{exact_complete_counted, Completion, PartialAssignment};

use super::greedy::greedy_dynamic;

/// Largest clique found by growing greedily from each high-degree start node,
/// always adding the candidate of largest degree. A valid lower bound on χ.
pub fn greedy_clique(g: &Graph) -> Vec<usize> {
    let n = g.n();
    if n == 0 {
        return Vec::new();
    }
    let mut starts: Vec<usize> = (0..n).collect();
    starts.sort_by_key(|&v| (std::cmp::Reverse(g.degree(v)), v));
    starts.truncate(256);
    let mut best = vec![starts[0]];
    for &s in &starts {
        if g.degree(s) < best.len() {
            break;
        }
        let mut clique = vec![s];
        let mut candidates: Vec<usize> = g.neighbors(s).to_vec();
        while !candidates.is_empty() {
            let &pick = candidates
                .iter()
                .max_by_key(|&&v| (g.degree(v), std::cmp::Reverse(v)))
                .unwrap();
            clique.push(pick);
            candidates.retain(|&v| v != pick && g.has_edge(v, pick));
        }
        if clique.len() > best.len() {
            best = clique;
        }
    }
    best.sort_unstable();
    best
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ChromaticOutcome {
    Exact {
        chi: usize,
        witness: ColorAssignment,
    },
    /// Search ran out of budget; `chi` lies in `lower..=upper` and `witness`
    /// is a proper `upper`-coloring.
    BudgetExceeded {
        lower: usize,
        upper: usize,
        witness: ColorAssignment,
    },
}

impl ChromaticOutcome {
    pub fn chi(&self) -> Option<usize> {
        match self {
            ChromaticOutcome::Exact { chi, .. } => Some(*chi),
            ChromaticOutcome::BudgetExceeded { .. } => None,
        }
    }
}

/// Chromatic number by deciding `k`-colorability upward from a clique bound
/// until the greedy upper bound. `budget` caps total search expansions.
pub fn exact_chromatic(g: &Graph, budget: u64) -> ChromaticOutcome {
    if g.n() == 0 {
        return ChromaticOutcome::Exact {
            chi: 0,
            witness: ColorAssignment::uniform(0, 1),
        };
    }
    let lower = greedy_clique(g).len().max(1);
    let upper_witness = greedy_dynamic(g, None);
    let upper = upper_witness.colors_used();
    let mut remaining = budget;
    let empty = PartialAssignment::default();
    for k in lower..upper {
        let (outcome, spent) = exact_complete_counted(g, k, &empty, remaining);
        remaining = remaining.saturating_sub(spent);
        match outcome {
            Completion::Colored(witness) => return ChromaticOutcome::Exact { chi: k, witness },
            Completion::Unsat => continue,
            Completion::BudgetExceeded => {
                return ChromaticOutcome::BudgetExceeded {
                    lower: k,
                    upper,
                    witness: upper_witness,
                }
            }
        }
    }
    ChromaticOutcome::Exact {
        chi: upper,
        witness: upper_witness,
    }
}
