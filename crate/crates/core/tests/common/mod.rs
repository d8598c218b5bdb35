#![allow(dead_code)]

use proptest::prelude::*;

use pcf_core::graph::{Colour, ColouredGraph, DegreeSpec, Graph, RawGraph};

fn names(n: usize) -> Vec<String> {
    (0..n).map(|i| format!("v{i}")).collect()
}

/// Coloured graph from a per-pair colour code (0 means no edge), pairs in
/// lexicographic order.
pub fn from_codes(n: usize, k: Colour, codes: &[Colour]) -> ColouredGraph {
    let names = names(n);
    let mut raw = RawGraph::new(k);
    raw.vertices = names.clone();
    let mut i = 0;
    for a in 0..n {
        for b in a + 1..n {
            if codes[i] > 0 {
                raw.edges.push((names[a].clone(), names[b].clone(), codes[i]));
            }
            i += 1;
        }
    }
    raw.build().expect("valid by construction")
}

/// Every graph on `n` labelled vertices, as bit masks over pairs.
pub fn all_graphs(n: usize) -> impl Iterator<Item = Graph> {
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|a| (a + 1..n).map(move |b| (a, b))).collect();
    (0u64..1 << pairs.len()).map(move |mask| {
        let edges: Vec<_> = pairs.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|(_, &p)| p).collect();
        Graph::from_edges(n, &edges)
    })
}

pub fn coloured(max_n: usize, k: Colour) -> impl Strategy<Value = ColouredGraph> {
    (1..=max_n).prop_flat_map(move |n| {
        let pairs = n * (n - 1) / 2;
        prop::collection::vec(0..=k, pairs).prop_map(move |codes| from_codes(n, k, &codes))
    })
}

pub fn coloured_with_f(max_n: usize, k: Colour, fmax: usize) -> impl Strategy<Value = (ColouredGraph, DegreeSpec)> {
    coloured(max_n, k).prop_flat_map(move |g| {
        let n = g.vertex_count();
        (Just(g), prop::collection::vec(0..=fmax, n).prop_map(DegreeSpec::new))
    })
}

/// Like [`coloured_with_f`] but with `f(v) <= d^c(v)` everywhere.
pub fn feasible(max_n: usize, k: Colour, fmax: usize) -> impl Strategy<Value = (ColouredGraph, DegreeSpec)> {
    coloured_with_f(max_n, k, fmax).prop_map(|(g, f)| {
        let values = g.graph().vertices().map(|v| f.get(v).min(g.colour_degree(v))).collect();
        (g, DegreeSpec::new(values))
    })
}

pub fn plain(max_n: usize) -> impl Strategy<Value = Graph> {
    coloured(max_n, 1).prop_map(|g| g.graph().clone())
}
