use crate::graph::{ColorAssignment, Graph};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GreedyOrder {
    /// Node id order.
    Static,
    /// Descending degree, ties to lower id.
    Sorted,
    /// Largest number of uncolored neighbors next, ties to lower id.
    Dynamic,
}

/// Smallest color not used by colored neighbors; when `cap` is set and every
/// color below it is taken, the least-conflicting color (lowest on ties).
fn pick_color(g: &Graph, colors: &[usize], v: usize, cap: Option<usize>, counts: &mut Vec<usize>) -> usize {
    let width = cap.unwrap_or(g.degree(v) + 1);
    counts.clear();
    counts.resize(width, 0);
    for &u in g.neighbors(v) {
        let c = colors[u];
        if c < width {
            counts[c] += 1;
        }
    }
    if let Some(free) = counts.iter().position(|&x| x == 0) {
        return free;
    }
    // only reachable when capped
    let mut best = 0;
    for c in 1..width {
        if counts[c] < counts[best] {
            best = c;
        }
    }
    best
}

fn finish(colors: Vec<usize>, cap: Option<usize>) -> ColorAssignment {
    let k = cap.unwrap_or_else(|| colors.iter().copied().max().map_or(1, |c| c + 1));
    ColorAssignment::new(colors, k.max(1)).expect("greedy colors stay below k")
}

pub fn greedy(g: &Graph, order: GreedyOrder, cap: Option<usize>) -> ColorAssignment {
    let n = g.n();
    let mut colors = vec![usize::MAX; n];
    let mut counts = Vec::new();
    match order {
        GreedyOrder::Static | GreedyOrder::Sorted => {
            let mut seq: Vec<usize> = (0..n).collect();
            if order == GreedyOrder::Sorted {
                seq.sort_by_key(|&v| (std::cmp::Reverse(g.degree(v)), v));
            }
            for v in seq {
                colors[v] = pick_color(g, &colors, v, cap, &mut counts);
            }
        }
        GreedyOrder::Dynamic => {
            let mut residual: Vec<usize> = (0..n).map(|v| g.degree(v)).collect();
            let mut done = vec![false; n];
            for _ in 0..n {
                let mut next = usize::MAX;
                for v in 0..n {
                    if !done[v] && (next == usize::MAX || residual[v] > residual[next]) {
                        next = v;
                    }
                }
                colors[next] = pick_color(g, &colors, next, cap, &mut counts);
                done[next] = true;
                for &u in g.neighbors(next) {
                    residual[u] -= 1;
                }
            }
        }
    }
    finish(colors, cap)
}

pub fn greedy_static(g: &Graph, cap: Option<usize>) -> ColorAssignment {
    greedy(g, GreedyOrder::Static, cap)
}

pub fn greedy_sorted(g: &Graph, cap: Option<usize>) -> ColorAssignment {
    greedy(g, GreedyOrder::Sorted, cap)
}

pub fn greedy_dynamic(g: &Graph, cap: Option<usize>) -> ColorAssignment {
    greedy(g, GreedyOrder::Dynamic, cap)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generate::{complete, cycle, gnp, path, star};
    use crate::graph::{conflict_count, is_proper};

    #[test]
    fn static_order() {
        assert_eq!(greedy_static(&path(3), None).colors(), &[0, 1, 0]);
        assert_eq!(greedy_static(&complete(4), None).colors_used(), 4);
    }

    #[test]
    fn sorted_order() {
        let a = greedy_sorted(&star(4), None);
        assert_eq!(a.get(0), 0);
        assert_eq!(a.colors_used(), 2);
        assert_eq!(greedy_sorted(&complete(4), None).colors_used(), 4);
        // C5 is 2-regular, so sorted order is id order: 0,1,0,1,2
        assert_eq!(greedy_sorted(&cycle(5), None).colors(), &[0, 1, 0, 1, 2]);
    }

    #[test]
    fn dynamic_order() {
        assert_eq!(greedy_dynamic(&complete(4), None).colors_used(), 4);
        // order 1, 2, 0, 3
        let a = greedy_dynamic(&path(4), None);
        assert_eq!(a.colors(), &[1, 0, 1, 0]);
        assert_eq!(a.colors_used(), 2);
        assert!(greedy_dynamic(&Graph::empty(5), None).colors().iter().all(|&c| c == 0));
    }

    #[test]
    fn capped_tolerates_conflicts() {
        let g = complete(4);
        let a = greedy_static(&g, Some(3));
        assert_eq!(a.k(), 3);
        assert_eq!(a.colors(), &[0, 1, 2, 0]);
        assert_eq!(conflict_count(&g, a.colors()), 1);
    }

    #[test]
    fn degree_bound_and_properness() {
        for seed in 0..20 {
            let g = gnp(40, 0.2, seed).unwrap();
            for order in [GreedyOrder::Static, GreedyOrder::Sorted, GreedyOrder::Dynamic] {
                let a = greedy(&g, order, None);
                assert!(is_proper(&g, a.colors()));
                assert!(a.colors_used() <= g.max_degree() + 1);
                assert_eq!(a, greedy(&g, order, None));
            }
        }
    }
}
