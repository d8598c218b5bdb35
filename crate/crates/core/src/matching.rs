//! Maximum matching in general graphs (Edmonds' blossom algorithm), Tutte
//! witnesses for graphs without a perfect matching, and a brute-force oracle.

use std::collections::VecDeque;

use thiserror::Error;

use crate::graph::{EdgeSet, Graph, VertexId};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum MatchingError {
    #[error("instance too large for exhaustive search ({size} > cap {cap})")]
    TooLarge { size: usize, cap: usize },
    #[error("edge {0}-{1} is not in the graph")]
    NotAnEdge(VertexId, VertexId),
    #[error("vertex {0} is covered twice")]
    Overlap(VertexId),
}

/// A set of vertex-disjoint edges, stored as a mate array.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Matching {
    mate: Vec<Option<VertexId>>,
}

impl Matching {
    pub fn empty(n: usize) -> Self {
        Self { mate: vec![None; n] }
    }

    pub fn from_pairs(graph: &Graph, pairs: &[(VertexId, VertexId)]) -> Result<Self, MatchingError> {
        let mut m = Self::empty(graph.vertex_count());
        for &(u, v) in pairs {
            if graph.edge_between(u, v).is_none() {
                return Err(MatchingError::NotAnEdge(u, v));
            }
            for w in [u, v] {
                if m.mate[w].is_some() {
                    return Err(MatchingError::Overlap(w));
                }
            }
            m.mate[u] = Some(v);
            m.mate[v] = Some(u);
        }
        Ok(m)
    }

    pub fn mate(&self, v: VertexId) -> Option<VertexId> {
        self.mate[v]
    }

    pub fn size(&self) -> usize {
        self.mate.iter().filter(|m| m.is_some()).count() / 2
    }

    pub fn is_perfect(&self) -> bool {
        self.mate.iter().all(Option::is_some)
    }

    /// Matched pairs `(u, v)` with `u < v`, ascending.
    pub fn pairs(&self) -> Vec<(VertexId, VertexId)> {
        self.mate
            .iter()
            .enumerate()
            .filter_map(|(u, m)| m.filter(|&v| u < v).map(|v| (u, v)))
            .collect()
    }

    pub fn edge_set(&self, graph: &Graph) -> EdgeSet {
        self.pairs()
            .into_iter()
            .map(|(u, v)| graph.edge_between(u, v).expect("matched pairs are edges"))
            .collect()
    }

    pub fn exposed(&self) -> impl Iterator<Item = VertexId> + '_ {
        self.mate
            .iter()
            .enumerate()
            .filter(|(_, m)| m.is_none())
            .map(|(v, _)| v)
    }
}

struct Blossom<'a> {
    graph: &'a Graph,
    removed: Option<VertexId>,
    mate: Vec<Option<VertexId>>,
    parent: Vec<Option<VertexId>>,
    base: Vec<VertexId>,
    used: Vec<bool>,
    in_blossom: Vec<bool>,
    queue: VecDeque<VertexId>,
}

impl<'a> Blossom<'a> {
    fn new(graph: &'a Graph, mate: Vec<Option<VertexId>>, removed: Option<VertexId>) -> Self {
        let n = graph.vertex_count();
        Self {
            graph,
            removed,
            mate,
            parent: vec![None; n],
            base: (0..n).collect(),
            used: vec![false; n],
            in_blossom: vec![false; n],
            queue: VecDeque::new(),
        }
    }

    fn lca(&self, mut a: VertexId, mut b: VertexId) -> VertexId {
        let mut seen = vec![false; self.graph.vertex_count()];
        loop {
            a = self.base[a];
            seen[a] = true;
            match self.mate[a] {
                None => break,
                Some(m) => a = self.parent[m].expect("alternating tree"),
            }
        }
        loop {
            b = self.base[b];
            if seen[b] {
                return b;
            }
            let m = self.mate[b].expect("alternating tree");
            b = self.parent[m].expect("alternating tree");
        }
    }

    fn mark_path(&mut self, mut v: VertexId, b: VertexId, mut child: VertexId) {
        while self.base[v] != b {
            let m = self.mate[v].expect("blossom path is matched");
            self.in_blossom[self.base[v]] = true;
            self.in_blossom[self.base[m]] = true;
            self.parent[v] = Some(child);
            child = m;
            v = self.parent[m].expect("alternating tree");
        }
    }

    /// Search an augmenting path from `root`; returns its exposed far end.
    fn find_path(&mut self, root: VertexId) -> Option<VertexId> {
        let n = self.graph.vertex_count();
        self.used.iter_mut().for_each(|u| *u = false);
        self.parent.iter_mut().for_each(|p| *p = None);
        for i in 0..n {
            self.base[i] = i;
        }
        self.used[root] = true;
        self.queue.clear();
        self.queue.push_back(root);
        while let Some(v) = self.queue.pop_front() {
            for idx in 0..self.graph.incident(v).len() {
                let to = self.graph.incident(v)[idx].0;
                if Some(to) == self.removed || self.base[v] == self.base[to] || self.mate[v] == Some(to) {
                    continue;
                }
                let to_is_outer = to == root
                    || self.mate[to].is_some_and(|m| self.parent[m].is_some());
                if to_is_outer {
                    let cur = self.lca(v, to);
                    self.in_blossom.iter_mut().for_each(|b| *b = false);
                    self.mark_path(v, cur, to);
                    self.mark_path(to, cur, v);
                    for i in 0..n {
                        if self.in_blossom[self.base[i]] {
                            self.base[i] = cur;
                            if !self.used[i] {
                                self.used[i] = true;
                                self.queue.push_back(i);
                            }
                        }
                    }
                } else if self.parent[to].is_none() {
                    self.parent[to] = Some(v);
                    match self.mate[to] {
                        None => return Some(to),
                        Some(m) => {
                            self.used[m] = true;
                            self.queue.push_back(m);
                        }
                    }
                }
            }
        }
        None
    }

    fn augment(&mut self, end: VertexId) {
        let mut v = Some(end);
        while let Some(x) = v {
            let pv = self.parent[x].expect("augmenting path");
            let next = self.mate[pv];
            self.mate[x] = Some(pv);
            self.mate[pv] = Some(x);
            v = next;
        }
    }
}

/// Maximum-cardinality matching. Roots are tried in vertex order, so the
/// result is deterministic for a fixed graph.
pub fn maximum_matching(graph: &Graph) -> Matching {
    let n = graph.vertex_count();
    let mut b = Blossom::new(graph, vec![None; n], None);
    for v in 0..n {
        if b.mate[v].is_none() {
            if let Some(end) = b.find_path(v) {
                b.augment(end);
            }
        }
    }
    Matching { mate: b.mate }
}

pub fn perfect_matching(graph: &Graph) -> Option<Matching> {
    if graph.vertex_count() % 2 == 1 {
        return None;
    }
    Some(maximum_matching(graph)).filter(Matching::is_perfect)
}

/// Gallai–Edmonds decomposition: `d` holds the vertices missed by some
/// maximum matching, `a` their neighbours outside `d`, `c` the rest.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GallaiEdmonds {
    pub d: Vec<VertexId>,
    pub a: Vec<VertexId>,
    pub c: Vec<VertexId>,
    pub matching_size: usize,
}

pub fn gallai_edmonds(graph: &Graph) -> GallaiEdmonds {
    let n = graph.vertex_count();
    let m = maximum_matching(graph);
    let mut in_d = vec![false; n];
    for v in 0..n {
        match m.mate(v) {
            None => in_d[v] = true,
            Some(u) => {
                // Drop v and its matched edge; a maximum matching of G - v
                // has the old size iff u now starts an augmenting path.
                let mut mate = m.mate.clone();
                mate[v] = None;
                mate[u] = None;
                let mut b = Blossom::new(graph, mate, Some(v));
                in_d[v] = b.find_path(u).is_some();
            }
        }
    }
    let mut in_a = vec![false; n];
    for v in 0..n {
        if in_d[v] {
            for w in graph.neighbours(v) {
                if !in_d[w] {
                    in_a[w] = true;
                }
            }
        }
    }
    let pick = |f: &dyn Fn(usize) -> bool| (0..n).filter(|&v| f(v)).collect::<Vec<_>>();
    GallaiEdmonds {
        d: pick(&|v| in_d[v]),
        a: pick(&|v| in_a[v]),
        c: pick(&|v| !in_d[v] && !in_a[v]),
        matching_size: m.size(),
    }
}

/// A set `X` with `odd(G - X) > |X|`, or `None` if the graph has a perfect
/// matching. Uses the Gallai–Edmonds set `A`, which attains the Tutte–Berge
/// bound.
pub fn tutte_witness(graph: &Graph) -> Option<Vec<VertexId>> {
    if perfect_matching(graph).is_some() {
        return None;
    }
    let ge = gallai_edmonds(graph);
    debug_assert!(graph.odd_components(&ge.a) > ge.a.len());
    Some(ge.a)
}

/// Exhaustive Tutte witness: the first violating set in order of size, then
/// lexicographic order of vertex ids.
pub fn tutte_witness_exhaustive(graph: &Graph, cap: usize) -> Result<Option<Vec<VertexId>>, MatchingError> {
    let n = graph.vertex_count();
    if n > cap {
        return Err(MatchingError::TooLarge { size: n, cap });
    }
    for size in 0..=n {
        let mut pick: Vec<usize> = (0..size).collect();
        loop {
            if graph.odd_components(&pick) > size {
                return Ok(Some(pick));
            }
            if !next_combination(&mut pick, n) {
                break;
            }
        }
    }
    Ok(None)
}

/// Advance `pick` to the next `k`-subset of `0..n` in lexicographic order.
pub(crate) fn next_combination(pick: &mut [usize], n: usize) -> bool {
    let k = pick.len();
    for i in (0..k).rev() {
        if pick[i] < n - k + i {
            pick[i] += 1;
            for j in i + 1..k {
                pick[j] = pick[j - 1] + 1;
            }
            return true;
        }
    }
    false
}

pub const DEFAULT_BRUTE_EDGE_CAP: usize = 24;

/// Size of a maximum matching by exhaustive backtracking.
pub fn brute_matching(graph: &Graph, edge_cap: usize) -> Result<usize, MatchingError> {
    if graph.edge_count() > edge_cap {
        return Err(MatchingError::TooLarge { size: graph.edge_count(), cap: edge_cap });
    }
    fn go(graph: &Graph, v: usize, taken: &mut Vec<bool>) -> usize {
        let n = graph.vertex_count();
        let mut v = v;
        while v < n && taken[v] {
            v += 1;
        }
        if v == n {
            return 0;
        }
        taken[v] = true;
        // v stays exposed
        let mut best = go(graph, v + 1, taken);
        for w in graph.neighbours(v).collect::<Vec<_>>() {
            if !taken[w] {
                taken[w] = true;
                best = best.max(1 + go(graph, v + 1, taken));
                taken[w] = false;
            }
        }
        taken[v] = false;
        best
    }
    Ok(go(graph, 0, &mut vec![false; graph.vertex_count()]))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cycle(n: usize) -> Graph {
        let edges: Vec<_> = (0..n).map(|i| (i, (i + 1) % n)).collect();
        Graph::from_edges(n, &edges)
    }

    fn petersen() -> Graph {
        let mut e = Vec::new();
        for i in 0..5 {
            e.push((i, (i + 1) % 5));
            e.push((i, i + 5));
            e.push((5 + i, 5 + (i + 2) % 5));
        }
        Graph::from_edges(10, &e)
    }

    #[test]
    fn small_examples() {
        assert_eq!(maximum_matching(&Graph::from_edges(3, &[(0, 1), (1, 2)])).size(), 1);
        assert_eq!(maximum_matching(&cycle(5)).size(), 2);
        assert_eq!(maximum_matching(&petersen()).size(), 5);
        assert_eq!(brute_matching(&petersen(), 24).unwrap(), 5);
        let k4 = Graph::from_edges(4, &[(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]);
        assert_eq!(perfect_matching(&k4).map(|m| m.size()), Some(2));
        assert!(perfect_matching(&cycle(7)).is_none());
    }

    #[test]
    fn brute_examples() {
        assert_eq!(brute_matching(&Graph::new(), 24).unwrap(), 0);
        assert_eq!(brute_matching(&cycle(6), 24).unwrap(), 3);
        let big = cycle(30);
        assert_eq!(
            brute_matching(&big, 24),
            Err(MatchingError::TooLarge { size: 30, cap: 24 })
        );
    }

    #[test]
    fn blossom_needed() {
        // Triangle with a pendant at each corner; a naive augmenting search
        // without contraction can miss the perfect matching.
        let g = Graph::from_edges(6, &[(0, 1), (1, 2), (2, 0), (0, 3), (1, 4), (2, 5)]);
        assert!(perfect_matching(&g).is_some());
    }

    #[test]
    fn witnesses_validate() {
        let star = Graph::from_edges(4, &[(0, 1), (0, 2), (0, 3)]);
        let x = tutte_witness(&star).unwrap();
        assert_eq!(x, vec![0]);
        assert!(star.odd_components(&x) > x.len());
        let ex = tutte_witness_exhaustive(&star, 22).unwrap().unwrap();
        assert!(star.odd_components(&ex) > ex.len());
        assert_eq!(tutte_witness(&cycle(6)), None);
        assert_eq!(tutte_witness_exhaustive(&cycle(6), 22).unwrap(), None);
        assert_eq!(tutte_witness(&cycle(5)), Some(vec![]));
    }

    #[test]
    fn gallai_edmonds_of_path() {
        let p = Graph::from_edges(3, &[(0, 1), (1, 2)]);
        let ge = gallai_edmonds(&p);
        assert_eq!(ge.d, vec![0, 2]);
        assert_eq!(ge.a, vec![1]);
        assert!(ge.c.is_empty());
    }

    #[test]
    fn from_pairs_checks() {
        let p = Graph::from_edges(3, &[(0, 1), (1, 2)]);
        assert_eq!(Matching::from_pairs(&p, &[(0, 2)]), Err(MatchingError::NotAnEdge(0, 2)));
        assert_eq!(Matching::from_pairs(&p, &[(0, 1), (1, 2)]), Err(MatchingError::Overlap(1)));
        let m = Matching::from_pairs(&p, &[(1, 0)]).unwrap();
        assert_eq!(m.pairs(), vec![(0, 1)]);
        assert_eq!(m.exposed().collect::<Vec<_>>(), vec![2]);
    }
}
