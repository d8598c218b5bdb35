//! Exhaustive search for properly coloured f-factors with an extra global
//! condition: rainbow components, or distance-d colouring inside the factor.
//!
//! Both conditions imply that the factor is properly coloured and both are
//! monotone (a violating partial factor stays violating as edges are added),
//! so the search checks them incrementally on every inclusion. Each node
//! runs a propagation fixpoint over vertices:
//!
//! * a vertex that has its full degree excludes its undecided edges;
//! * undecided edges whose colour is already used at a vertex are excluded;
//! * if the undecided edges at a vertex fall into exactly as many colour
//!   classes as the vertex still needs, every singleton class is included;
//!   fewer classes than needed is a dead end.

use serde::Serialize;
use thiserror::Error;

use crate::factor::{is_distance_d_factor, is_pc_factor, is_rc_factor};
use crate::graph::{Colour, ColouredGraph, DegreeSpec, EdgeId, EdgeSet, VertexId};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SearchError {
    #[error("graph has {edges} edges, cap is {cap}")]
    TooLarge { edges: usize, cap: usize },
    #[error("colour {0} exceeds the 64 colours the search supports")]
    TooManyColours(Colour),
    #[error("search exceeded {0} nodes")]
    NodeLimit(u64),
}

/// Global condition on the factor.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Condition {
    /// Only proper colouring.
    Proper,
    /// Every component has pairwise distinct edge colours.
    Rainbow,
    /// Equal-coloured edges are at distance at least `d` inside the factor.
    Distance(usize),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SearchCaps {
    pub max_edges: usize,
    pub max_nodes: u64,
}

impl Default for SearchCaps {
    fn default() -> Self {
        Self { max_edges: 4096, max_nodes: 200_000_000 }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct SearchStats {
    pub nodes: u64,
    pub forced_at_root: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum State {
    Open,
    In,
    Out,
}

enum Undo {
    Edge(EdgeId),
    Union { child: usize, parent_mask: u64 },
}

struct Solver<'a> {
    g: &'a ColouredGraph,
    f: &'a DegreeSpec,
    cond: Condition,
    state: Vec<State>,
    deg_in: Vec<usize>,
    open: Vec<usize>,
    used: Vec<u64>,
    // rollback union-find for rainbow components
    parent: Vec<usize>,
    rank: Vec<u8>,
    mask: Vec<u64>,
    trail: Vec<Undo>,
    nodes: u64,
    max_nodes: u64,
    queue: Vec<VertexId>,
    queued: Vec<bool>,
}

fn bit(c: Colour) -> u64 {
    1u64 << (c - 1)
}

impl<'a> Solver<'a> {
    fn new(g: &'a ColouredGraph, f: &'a DegreeSpec, cond: Condition, max_nodes: u64) -> Self {
        let n = g.vertex_count();
        Self {
            g,
            f,
            cond,
            state: vec![State::Open; g.edge_count()],
            deg_in: vec![0; n],
            open: (0..n).map(|v| g.graph().degree(v)).collect(),
            used: vec![0; n],
            parent: (0..n).collect(),
            rank: vec![0; n],
            mask: vec![0; n],
            trail: Vec::new(),
            nodes: 0,
            max_nodes,
            queue: Vec::new(),
            queued: vec![false; n],
        }
    }

    fn find(&self, mut x: usize) -> usize {
        while self.parent[x] != x {
            x = self.parent[x];
        }
        x
    }

    fn colour(&self, e: EdgeId) -> Colour {
        self.g.colour(e)
    }

    fn enqueue(&mut self, v: VertexId) {
        if !self.queued[v] {
            self.queued[v] = true;
            self.queue.push(v);
        }
    }

    /// Decide `e`; returns false when the decision breaks a constraint.
    fn set(&mut self, e: EdgeId, s: State) -> bool {
        debug_assert_eq!(self.state[e], State::Open);
        let (u, v) = self.g.graph().endpoints(e);
        if s == State::In && !self.can_include(e) {
            return false;
        }
        self.state[e] = s;
        self.trail.push(Undo::Edge(e));
        self.open[u] -= 1;
        self.open[v] -= 1;
        if s == State::In {
            let b = bit(self.colour(e));
            self.deg_in[u] += 1;
            self.deg_in[v] += 1;
            self.used[u] |= b;
            self.used[v] |= b;
            if self.cond == Condition::Rainbow {
                self.union(u, v, b);
            }
        }
        self.enqueue(u);
        self.enqueue(v);
        self.deg_in[u] + self.open[u] >= self.f.get(u) && self.deg_in[v] + self.open[v] >= self.f.get(v)
    }

    fn can_include(&self, e: EdgeId) -> bool {
        let (u, v) = self.g.graph().endpoints(e);
        let c = self.colour(e);
        let b = bit(c);
        if self.deg_in[u] >= self.f.get(u) || self.deg_in[v] >= self.f.get(v) {
            return false;
        }
        if self.used[u] & b != 0 || self.used[v] & b != 0 {
            return false;
        }
        match self.cond {
            Condition::Proper => true,
            Condition::Rainbow => {
                let (ru, rv) = (self.find(u), self.find(v));
                if ru == rv {
                    self.mask[ru] & b == 0
                } else {
                    (self.mask[ru] & self.mask[rv]) == 0 && (self.mask[ru] | self.mask[rv]) & b == 0
                }
            }
            Condition::Distance(d) => self.distance_ok(e, d),
        }
    }

    fn union(&mut self, u: VertexId, v: VertexId, b: u64) {
        let (mut ru, mut rv) = (self.find(u), self.find(v));
        if ru == rv {
            self.trail.push(Undo::Union { child: ru, parent_mask: self.mask[ru] });
            self.mask[ru] |= b;
            // child == parent marks a mask-only update
            return;
        }
        if self.rank[ru] > self.rank[rv] {
            std::mem::swap(&mut ru, &mut rv);
        }
        self.trail.push(Undo::Union { child: ru, parent_mask: self.mask[rv] });
        self.parent[ru] = rv;
        if self.rank[ru] == self.rank[rv] {
            self.rank[rv] += 1;
            // rank increments are not undone; ranks stay valid upper bounds
        }
        self.mask[rv] |= self.mask[ru] | b;
    }

    /// Factor edges (already included) within distance `limit` of `x`,
    /// with the distance of their nearer endpoint.
    fn near_edges(&self, x: VertexId, limit: usize) -> Vec<(EdgeId, usize)> {
        let graph = self.g.graph();
        let mut dist = std::collections::HashMap::new();
        dist.insert(x, 0usize);
        let mut frontier = vec![x];
        let mut found: std::collections::HashMap<EdgeId, usize> = std::collections::HashMap::new();
        for depth in 0..=limit {
            let mut next = Vec::new();
            for &p in &frontier {
                for &(q, e) in graph.incident(p) {
                    if self.state[e] != State::In {
                        continue;
                    }
                    found.entry(e).or_insert(depth);
                    if depth < limit && !dist.contains_key(&q) {
                        dist.insert(q, depth + 1);
                        next.push(q);
                    }
                }
            }
            frontier = next;
        }
        let mut out: Vec<(EdgeId, usize)> = found.into_iter().collect();
        out.sort_unstable();
        out
    }

    /// Would adding `e = uv` put two equal-coloured factor edges closer than
    /// `d`? New short paths all pass through `e`.
    fn distance_ok(&self, e: EdgeId, d: usize) -> bool {
        if d <= 1 {
            return true;
        }
        let (u, v) = self.g.graph().endpoints(e);
        let c = self.colour(e);
        let near_u = self.near_edges(u, d - 1);
        let near_v = self.near_edges(v, d - 1);
        for list in [&near_u, &near_v] {
            if list.iter().any(|&(a, t)| self.colour(a) == c && t < d) {
                return false;
            }
        }
        for &(a, ta) in &near_u {
            for &(b, tb) in &near_v {
                if a != b && self.colour(a) == self.colour(b) && ta + 1 + tb < d {
                    return false;
                }
            }
        }
        true
    }

    fn undo_to(&mut self, mark: usize) {
        while self.trail.len() > mark {
            match self.trail.pop().unwrap() {
                Undo::Edge(e) => {
                    let (u, v) = self.g.graph().endpoints(e);
                    if self.state[e] == State::In {
                        let b = bit(self.colour(e));
                        self.deg_in[u] -= 1;
                        self.deg_in[v] -= 1;
                        self.used[u] &= !b;
                        self.used[v] &= !b;
                    }
                    self.state[e] = State::Open;
                    self.open[u] += 1;
                    self.open[v] += 1;
                }
                Undo::Union { child, parent_mask } => {
                    let p = self.parent[child];
                    if p == child {
                        self.mask[child] = parent_mask;
                    } else {
                        self.parent[child] = child;
                        self.mask[p] = parent_mask;
                    }
                }
            }
        }
    }

    fn propagate(&mut self) -> bool {
        let ok = self.propagate_inner();
        for v in self.queue.drain(..) {
            self.queued[v] = false;
        }
        ok
    }

    fn propagate_inner(&mut self) -> bool {
        let graph = self.g.graph();
        while let Some(v) = self.queue.pop() {
            self.queued[v] = false;
            let need = match self.f.get(v).checked_sub(self.deg_in[v]) {
                Some(n) => n,
                None => return false,
            };
            let open: Vec<EdgeId> =
                graph.incident(v).iter().map(|&(_, e)| e).filter(|&e| self.state[e] == State::Open).collect();
            if need == 0 {
                for e in open {
                    if !self.set(e, State::Out) {
                        return false;
                    }
                }
                continue;
            }
            let mut live = Vec::with_capacity(open.len());
            for e in open {
                if self.can_include(e) {
                    live.push(e);
                } else if !self.set(e, State::Out) {
                    return false;
                }
            }
            let mut classes: Vec<(Colour, Vec<EdgeId>)> = Vec::new();
            for &e in &live {
                let c = self.colour(e);
                match classes.iter_mut().find(|(k, _)| *k == c) {
                    Some((_, es)) => es.push(e),
                    None => classes.push((c, vec![e])),
                }
            }
            if classes.len() < need {
                return false;
            }
            if classes.len() == need {
                for (_, es) in classes {
                    if es.len() == 1 && self.state[es[0]] == State::Open && !self.set(es[0], State::In) {
                        return false;
                    }
                }
            }
        }
        true
    }

    /// Vertex to branch on: unsatisfied, fewest live colour classes.
    fn pick(&self) -> Option<EdgeId> {
        let graph = self.g.graph();
        let mut best: Option<(usize, EdgeId)> = None;
        for v in graph.vertices() {
            if self.deg_in[v] >= self.f.get(v) {
                continue;
            }
            let open = graph.incident(v).iter().filter(|&&(_, e)| self.state[e] == State::Open);
            let mut count = 0;
            let mut first = None;
            for &(_, e) in open {
                count += 1;
                first.get_or_insert(e);
            }
            if let Some(e) = first {
                if best.map_or(true, |(c, _)| count < c) {
                    best = Some((count, e));
                }
            }
        }
        best.map(|(_, e)| e)
    }

    fn solve(&mut self) -> Result<bool, SearchError> {
        self.nodes += 1;
        if self.nodes > self.max_nodes {
            return Err(SearchError::NodeLimit(self.max_nodes));
        }
        if !self.propagate() {
            return Ok(false);
        }
        let Some(e) = self.pick() else {
            return Ok(self.g.graph().vertices().all(|v| self.deg_in[v] == self.f.get(v)));
        };
        for s in [State::In, State::Out] {
            let mark = self.trail.len();
            if self.set(e, s) && self.solve()? {
                return Ok(true);
            }
            self.undo_to(mark);
            for v in self.queue.drain(..) {
                self.queued[v] = false;
            }
        }
        Ok(false)
    }

    fn factor(&self) -> EdgeSet {
        (0..self.g.edge_count()).filter(|&e| self.state[e] == State::In).collect()
    }
}

fn check_caps(g: &ColouredGraph, caps: SearchCaps) -> Result<(), SearchError> {
    if g.edge_count() > caps.max_edges {
        return Err(SearchError::TooLarge { edges: g.edge_count(), cap: caps.max_edges });
    }
    if let Some(&c) = g.colours().iter().find(|&&c| c > 64) {
        return Err(SearchError::TooManyColours(c));
    }
    Ok(())
}

/// Search for a properly coloured f-factor satisfying `cond`. `None` means
/// none exists.
pub fn factor_search(
    g: &ColouredGraph,
    f: &DegreeSpec,
    cond: Condition,
    caps: SearchCaps,
) -> Result<(Option<EdgeSet>, SearchStats), SearchError> {
    check_caps(g, caps)?;
    let mut s = Solver::new(g, f, cond, caps.max_nodes);
    if g.graph().vertices().any(|v| f.get(v) > g.graph().degree(v)) {
        return Ok((None, SearchStats { nodes: 0, forced_at_root: 0 }));
    }
    let mut root = Solver::new(g, f, cond, caps.max_nodes);
    for v in g.graph().vertices() {
        root.enqueue(v);
    }
    let forced_at_root = if root.propagate() { root.state.iter().filter(|&&x| x == State::In).count() } else { 0 };
    for v in g.graph().vertices() {
        s.enqueue(v);
    }
    let found = s.solve()?;
    let stats = SearchStats { nodes: s.nodes, forced_at_root };
    if !found {
        return Ok((None, stats));
    }
    let factor = s.factor();
    let ok = match cond {
        Condition::Proper => is_pc_factor(g, f, &factor),
        Condition::Rainbow => has_degrees(g, f, &factor) && crate::factor::has_rainbow_components(g, &factor),
        Condition::Distance(d) => has_degrees(g, f, &factor) && crate::factor::is_distance_d_coloured(g, &factor, d),
    };
    assert!(ok, "search produced an invalid factor");
    Ok((Some(factor), stats))
}

fn has_degrees(g: &ColouredGraph, f: &DegreeSpec, factor: &EdgeSet) -> bool {
    factor.degrees(g.graph()).iter().enumerate().all(|(v, &d)| d == f.get(v))
}

/// Rainbow-component `r`-factor search.
pub fn rc_factor_search(g: &ColouredGraph, r: usize, caps: SearchCaps) -> Result<Option<EdgeSet>, SearchError> {
    let f = DegreeSpec::constant(g.vertex_count(), r);
    let (found, _) = factor_search(g, &f, Condition::Rainbow, caps)?;
    debug_assert!(found.as_ref().map_or(true, |x| is_rc_factor(g, x, r)));
    Ok(found)
}

/// Distance-`d`-coloured `r`-factor search.
pub fn distance_factor_search(
    g: &ColouredGraph,
    r: usize,
    d: usize,
    caps: SearchCaps,
) -> Result<Option<EdgeSet>, SearchError> {
    let f = DegreeSpec::constant(g.vertex_count(), r);
    let (found, _) = factor_search(g, &f, Condition::Distance(d), caps)?;
    debug_assert!(found.as_ref().map_or(true, |x| is_distance_d_factor(g, x, r, d)));
    Ok(found)
}

/// Edges the root propagation fixpoint includes, or `None` if propagation
/// alone refutes the instance.
pub fn forced_edges(g: &ColouredGraph, f: &DegreeSpec, cond: Condition) -> Result<Option<EdgeSet>, SearchError> {
    check_caps(g, SearchCaps::default())?;
    let mut s = Solver::new(g, f, cond, u64::MAX);
    for v in g.graph().vertices() {
        s.enqueue(v);
    }
    Ok(s.propagate().then(|| s.factor()))
}
