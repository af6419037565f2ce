use crate::graph::{ColorAssignment, Graph};

/// Neighbors of `v` (other than `skip`) currently holding `color`.
#[inline]
fn clashes(g: &Graph, colors: &[usize], v: usize, color: usize, skip: usize) -> usize {
    g.neighbors(v)
        .iter()
        .filter(|&&u| u != skip && colors[u] == color)
        .count()
}

/// First-improvement repair: single-node recolors, then color swaps across
/// edges, until a full sweep changes nothing.
pub fn postprocess_local_search(g: &Graph, a: &ColorAssignment) -> ColorAssignment {
    postprocess_with_frozen(g, a, &[])
}

/// As [`postprocess_local_search`], never touching nodes marked in `frozen`
/// (an empty slice freezes nothing).
pub fn postprocess_with_frozen(g: &Graph, a: &ColorAssignment, frozen: &[bool]) -> ColorAssignment {
    let k = a.k();
    let mut colors = a.colors().to_vec();
    let is_frozen = |v: usize| frozen.get(v).copied().unwrap_or(false);
    let mut changed = true;
    while changed {
        changed = false;
        for u in 0..g.n() {
            if is_frozen(u) {
                continue;
            }
            for r in 0..k {
                let cur = colors[u];
                if r == cur {
                    continue;
                }
                if clashes(g, &colors, u, r, usize::MAX) < clashes(g, &colors, u, cur, usize::MAX) {
                    colors[u] = r;
                    changed = true;
                }
            }
        }
        for &(u, v) in g.edges() {
            if is_frozen(u) || is_frozen(v) {
                continue;
            }
            let (cu, cv) = (colors[u], colors[v]);
            if cu == cv {
                continue;
            }
            // the edge itself stays proper after the swap
            let before = clashes(g, &colors, u, cu, v) + clashes(g, &colors, v, cv, u);
            let after = clashes(g, &colors, u, cv, v) + clashes(g, &colors, v, cu, u);
            if after < before {
                colors.swap(u, v);
                changed = true;
            }
        }
    }
    ColorAssignment::new(colors, k).expect("moves stay in palette")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generate::path;
    use crate::graph::{conflict_count, count_conflicts};

    #[test]
    fn fixes_single_edge() {
        let g = Graph::from_edges(2, [(0, 1)]).unwrap();
        let out = postprocess_local_search(&g, &ColorAssignment::uniform(2, 2));
        assert_eq!(count_conflicts(&g, &out).unwrap().conflicts, 0);
    }

    #[test]
    fn proper_input_is_fixed_point() {
        let g = path(5);
        let a = ColorAssignment::new(vec![0, 1, 0, 1, 0], 2).unwrap();
        assert_eq!(postprocess_local_search(&g, &a), a);
    }

    #[test]
    fn path_of_three_reaches_brute_force_optimum() {
        let g = path(3);
        let best = (0..8usize)
            .map(|bits| {
                let colors: Vec<usize> = (0..3).map(|i| (bits >> i) & 1).collect();
                conflict_count(&g, &colors)
            })
            .min()
            .unwrap();
        assert_eq!(best, 0);
        let out = postprocess_local_search(&g, &ColorAssignment::new(vec![0, 0, 1], 2).unwrap());
        assert_eq!(conflict_count(&g, out.colors()), best);
    }

    #[test]
    fn frozen_nodes_keep_their_color() {
        let g = Graph::from_edges(2, [(0, 1)]).unwrap();
        let a = ColorAssignment::uniform(2, 2);
        let out = postprocess_with_frozen(&g, &a, &[true, false]);
        assert_eq!(out.colors(), &[0, 1]);
        let stuck = postprocess_with_frozen(&g, &a, &[true, true]);
        assert_eq!(stuck, a);
    }
}
