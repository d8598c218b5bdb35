//! Factor predicates and exhaustive factor enumeration for small graphs.

use std::ops::ControlFlow;

use crate::graph::{Colour, ColouredGraph, DegreeSpec, EdgeSet, Graph};

/// Every vertex has exactly `f(v)` incident edges of `edges`.
pub fn is_f_factor(graph: &Graph, f: &DegreeSpec, edges: &EdgeSet) -> bool {
    edges.iter().all(|e| e < graph.edge_count())
        && edges
            .degrees(graph)
            .iter()
            .enumerate()
            .all(|(v, &d)| d == f.get(v))
}

/// An f-factor in which edges sharing a vertex have different colours.
pub fn is_pc_factor(g: &ColouredGraph, f: &DegreeSpec, edges: &EdgeSet) -> bool {
    is_f_factor(g.graph(), f, edges) && is_properly_coloured_set(g, edges)
}

fn is_properly_coloured_set(g: &ColouredGraph, edges: &EdgeSet) -> bool {
    let graph = g.graph();
    graph.vertices().all(|v| {
        let mut seen = Vec::new();
        for &(_, e) in graph.incident(v) {
            if edges.contains(e) {
                let c = g.colour(e);
                if seen.contains(&c) {
                    return false;
                }
                seen.push(c);
            }
        }
        true
    })
}

/// Within each component of the subgraph formed by `edges`, all colours are
/// distinct.
pub fn has_rainbow_components(g: &ColouredGraph, edges: &EdgeSet) -> bool {
    let sub = g.graph().spanning_subgraph(&edges.iter().collect::<Vec<_>>());
    let comps = sub.components();
    let mut seen = std::collections::HashSet::new();
    edges.iter().all(|e| {
        let (u, _) = g.graph().endpoints(e);
        seen.insert((comps.label[u].unwrap(), g.colour(e)))
    })
}

/// Every monochromatic pair of `edges` is at distance at least `d`, with
/// distances measured inside the subgraph formed by `edges`.
pub fn is_distance_d_coloured(g: &ColouredGraph, edges: &EdgeSet, d: usize) -> bool {
    let ids: Vec<_> = edges.iter().collect();
    let sub = g.graph().spanning_subgraph(&ids);
    // The subgraph keeps the host's edge order restricted to `ids`.
    for (i, &e1) in ids.iter().enumerate() {
        let (a, b) = g.graph().endpoints(e1);
        let dist = sub.distances_from(&[a, b]);
        for &e2 in &ids[i + 1..] {
            if g.colour(e1) != g.colour(e2) {
                continue;
            }
            let (c, dd) = g.graph().endpoints(e2);
            let near = match (dist[c], dist[dd]) {
                (Some(x), Some(y)) => Some(x.min(y)),
                (x, y) => x.or(y),
            };
            if matches!(near, Some(x) if x < d) {
                return false;
            }
        }
    }
    true
}

fn is_regular_factor(g: &ColouredGraph, edges: &EdgeSet, r: usize) -> bool {
    is_f_factor(g.graph(), &DegreeSpec::constant(g.vertex_count(), r), edges)
}

/// A spanning `r`-regular subgraph whose components are rainbow.
pub fn is_rc_factor(g: &ColouredGraph, edges: &EdgeSet, r: usize) -> bool {
    is_regular_factor(g, edges, r) && has_rainbow_components(g, edges)
}

/// A spanning `r`-regular subgraph that is distance-`d`-coloured.
pub fn is_distance_d_factor(g: &ColouredGraph, edges: &EdgeSet, r: usize, d: usize) -> bool {
    is_regular_factor(g, edges, r) && is_distance_d_coloured(g, edges, d)
}

/// Visit every f-factor of `graph` (properly coloured ones only when
/// `colours` is given), in lexicographic order of edge-inclusion vectors.
/// The visitor may stop the enumeration early.
pub fn for_each_factor<B>(
    graph: &Graph,
    colours: Option<&[Colour]>,
    f: &DegreeSpec,
    mut visit: impl FnMut(&EdgeSet) -> ControlFlow<B>,
) -> Option<B> {
    let n = graph.vertex_count();
    if (0..n).any(|v| f.get(v) > graph.degree(v)) {
        return None;
    }
    let mut st = Enum {
        graph,
        colours,
        f,
        deg: vec![0; n],
        remaining: (0..n).map(|v| graph.degree(v)).collect(),
        used: vec![Vec::new(); n],
        chosen: EdgeSet::new(),
    };
    match st.go(0, &mut visit) {
        ControlFlow::Break(b) => Some(b),
        ControlFlow::Continue(()) => None,
    }
}

struct Enum<'a> {
    graph: &'a Graph,
    colours: Option<&'a [Colour]>,
    f: &'a DegreeSpec,
    deg: Vec<usize>,
    remaining: Vec<usize>,
    used: Vec<Vec<Colour>>,
    chosen: EdgeSet,
}

impl Enum<'_> {
    fn go<B>(&mut self, e: usize, visit: &mut impl FnMut(&EdgeSet) -> ControlFlow<B>) -> ControlFlow<B> {
        if e == self.graph.edge_count() {
            return visit(&self.chosen);
        }
        let (u, v) = self.graph.endpoints(e);
        self.remaining[u] -= 1;
        self.remaining[v] -= 1;
        let colour = self.colours.map(|c| c[e]);
        let fits = |s: &Self, w: usize| {
            s.deg[w] < s.f.get(w) && colour.map_or(true, |c| !s.used[w].contains(&c))
        };
        let mut result = ControlFlow::Continue(());
        if fits(self, u) && fits(self, v) {
            self.deg[u] += 1;
            self.deg[v] += 1;
            if let Some(c) = colour {
                self.used[u].push(c);
                self.used[v].push(c);
            }
            self.chosen.insert(e);
            if self.feasible(u) && self.feasible(v) {
                result = self.go(e + 1, visit);
            }
            self.chosen.remove(e);
            if colour.is_some() {
                self.used[u].pop();
                self.used[v].pop();
            }
            self.deg[u] -= 1;
            self.deg[v] -= 1;
        }
        if result.is_continue() && self.feasible(u) && self.feasible(v) {
            result = self.go(e + 1, visit);
        }
        self.remaining[u] += 1;
        self.remaining[v] += 1;
        result
    }

    fn feasible(&self, w: usize) -> bool {
        self.deg[w] + self.remaining[w] >= self.f.get(w)
    }
}

/// First properly coloured f-factor found by exhaustive search.
pub fn brute_pc_factor(g: &ColouredGraph, f: &DegreeSpec) -> Option<EdgeSet> {
    for_each_factor(g.graph(), Some(g.colours()), f, |s| ControlFlow::Break(s.clone()))
}

/// First f-factor found by exhaustive search.
pub fn brute_f_factor(graph: &Graph, f: &DegreeSpec) -> Option<EdgeSet> {
    for_each_factor(graph, None, f, |s| ControlFlow::Break(s.clone()))
}

/// All properly coloured f-factors.
pub fn all_pc_factors(g: &ColouredGraph, f: &DegreeSpec) -> Vec<EdgeSet> {
    let mut out = Vec::new();
    for_each_factor::<()>(g.graph(), Some(g.colours()), f, |s| {
        out.push(s.clone());
        ControlFlow::Continue(())
    });
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::RawGraph;

    fn k4_two_matchings() -> ColouredGraph {
        RawGraph::new(2)
            .vertex("a")
            .vertex("b")
            .vertex("c")
            .vertex("d")
            .edge("a", "b", 1)
            .edge("c", "d", 1)
            .edge("a", "c", 2)
            .edge("b", "d", 2)
            .edge("a", "d", 2)
            .edge("b", "c", 1)
            .build()
            .unwrap()
    }

    #[test]
    fn empty_factor_for_zero_f() {
        let g = k4_two_matchings();
        assert!(is_pc_factor(&g, &DegreeSpec::constant(4, 0), &EdgeSet::new()));
    }

    #[test]
    fn matching_of_one_colour_is_distance_two() {
        let g = k4_two_matchings();
        let m = EdgeSet::from_names(g.graph(), [("a", "b"), ("c", "d")]).unwrap();
        assert!(is_distance_d_factor(&g, &m, 1, 2));
        assert!(is_rc_factor(&g, &m, 1));
        // In the host graph the two edges are adjacent via a-c, but that edge
        // is not part of the factor.
        assert!(is_distance_d_factor(&g, &m, 1, 100));
    }

    #[test]
    fn rainbow_fails_on_repeated_colour_in_a_component() {
        let g = k4_two_matchings();
        // a-b (1), b-c (1)... path a-b-c-d uses colours 1,1,1
        let p = EdgeSet::from_names(g.graph(), [("a", "b"), ("b", "c"), ("c", "d")]).unwrap();
        assert!(!has_rainbow_components(&g, &p));
        let c4 = EdgeSet::from_names(g.graph(), [("a", "b"), ("b", "d"), ("c", "d"), ("a", "c")]).unwrap();
        assert!(!is_rc_factor(&g, &c4, 2));
        assert!(is_pc_factor(&g, &DegreeSpec::constant(4, 2), &c4));
    }

    #[test]
    fn enumeration_counts_perfect_matchings_of_k4() {
        let g = k4_two_matchings();
        let all = all_pc_factors(&g, &DegreeSpec::constant(4, 1));
        assert_eq!(all.len(), 3);
        assert!(all.iter().all(|m| is_pc_factor(&g, &DegreeSpec::constant(4, 1), m)));
    }
}
