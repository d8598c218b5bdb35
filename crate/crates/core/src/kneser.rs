//! Kneser graphs and their canonical colouring.

use thiserror::Error;

use crate::graph::{Colour, ColouredGraph, Graph, RawGraph};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum KneserError {
    #[error("need n >= k, got n = {n}, k = {k}")]
    BadParameters { n: usize, k: usize },
    #[error("canonical colouring needs r >= 2, got {0}")]
    BadR(usize),
}

/// All `k`-subsets of `1..=n` in lexicographic order, as sorted vectors.
pub fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(k);
    fn go(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for x in start..=n {
            if n - x + 1 < k - cur.len() {
                break;
            }
            cur.push(x);
            go(x + 1, n, k, cur, out);
            cur.pop();
        }
    }
    go(1, n, k, &mut cur, &mut out);
    out
}

/// `{1,2}` style label of a subset.
pub fn subset_name(s: &[usize]) -> String {
    let inner: Vec<String> = s.iter().map(usize::to_string).collect();
    format!("{{{}}}", inner.join(","))
}

pub fn disjoint(a: &[usize], b: &[usize]) -> bool {
    a.iter().all(|x| !b.contains(x))
}

/// `KG(n, k)`: vertex `i` is the `i`-th `k`-subset in lexicographic order,
/// named like `{1,2}`.
pub fn kneser(n: usize, k: usize) -> Result<Graph, KneserError> {
    if k > n {
        return Err(KneserError::BadParameters { n, k });
    }
    let sets = subsets(n, k);
    let mut g = Graph::new();
    for s in &sets {
        g.add_vertex(subset_name(s)).expect("distinct subsets");
    }
    for i in 0..sets.len() {
        for j in i + 1..sets.len() {
            if disjoint(&sets[i], &sets[j]) {
                g.add_edge(i, j).expect("simple");
            }
        }
    }
    Ok(g)
}

/// The unique element of `[2r-1]` outside `a ∪ b`, for adjacent vertices
/// of `KG(2r-1, r-1)`.
pub fn canonical_colour(r: usize, a: &[usize], b: &[usize]) -> Colour {
    let missing: Vec<usize> = (1..=2 * r - 1).filter(|x| !a.contains(x) && !b.contains(x)).collect();
    debug_assert_eq!(missing.len(), 1, "{a:?} and {b:?} are not adjacent");
    missing[0] as Colour
}

/// `KG(2r-1, r-1)` with edge `AB` coloured by the element outside `A ∪ B`.
pub fn canonical_colouring(r: usize) -> Result<ColouredGraph, KneserError> {
    if r < 2 {
        return Err(KneserError::BadR(r));
    }
    let n = 2 * r - 1;
    let sets = subsets(n, r - 1);
    let mut raw = RawGraph::new(n as Colour);
    for s in &sets {
        raw = raw.vertex(&subset_name(s));
    }
    for i in 0..sets.len() {
        for j in i + 1..sets.len() {
            if disjoint(&sets[i], &sets[j]) {
                raw = raw.edge(&subset_name(&sets[i]), &subset_name(&sets[j]), canonical_colour(r, &sets[i], &sets[j]));
            }
        }
    }
    Ok(raw.build().expect("Kneser graphs are simple"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::factor::is_distance_d_coloured;
    use crate::graph::EdgeSet;

    #[test]
    fn petersen() {
        let g = kneser(5, 2).unwrap();
        assert_eq!(g.vertex_count(), 10);
        assert_eq!(g.edge_count(), 15);
        assert!(g.vertices().all(|v| g.degree(v) == 3));
        assert_eq!(g.girth(), Some(5));
    }

    #[test]
    fn small_cases() {
        let k1 = kneser(4, 0).unwrap();
        assert_eq!((k1.vertex_count(), k1.edge_count()), (1, 0));
        assert!(kneser(2, 3).is_err());
        assert!(canonical_colouring(1).is_err());
    }

    #[test]
    fn triangle_colours() {
        let g = canonical_colouring(2).unwrap();
        let colour = |a: &str, b: &str| {
            let graph = g.graph();
            g.colour(graph.edge_between(graph.vertex(a).unwrap(), graph.vertex(b).unwrap()).unwrap())
        };
        assert_eq!(colour("{1}", "{2}"), 3);
        assert_eq!(colour("{1}", "{3}"), 2);
        assert_eq!(colour("{2}", "{3}"), 1);
    }

    #[test]
    fn canonical_colourings_are_distance_two() {
        for r in 2..=4 {
            let g = canonical_colouring(r).unwrap();
            let all: EdgeSet = (0..g.edge_count()).collect();
            assert!(is_distance_d_coloured(&g, &all, 2), "r = {r}");
            assert!(g.graph().vertices().all(|v| g.graph().degree(v) == r));
            assert!(g.k() as usize == 2 * r - 1);
        }
    }
}
