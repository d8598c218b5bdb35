//! Simple undirected graphs, edge-coloured graphs and the small set of
//! structural utilities (components, distances) everything else builds on.

use std::collections::{BTreeSet, HashMap, VecDeque};
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub type VertexId = usize;
pub type EdgeId = usize;
pub type Colour = u32;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GraphError {
    #[error("unknown vertex `{0}`")]
    UnknownVertex(String),
    #[error("duplicate vertex `{0}`")]
    DuplicateVertex(String),
    #[error("loop at `{0}`")]
    Loop(String),
    #[error("parallel edge between `{0}` and `{1}`")]
    Parallel(String, String),
    #[error("edge {0}-{1} is not in the graph")]
    UnknownEdge(String, String),
    #[error("invalid graph: {}", .0.iter().map(|v| v.to_string()).collect::<Vec<_>>().join("; "))]
    Invalid(Vec<Violation>),
}

/// A simple undirected graph with named vertices.
///
/// Vertices and edges are dense indices; names are kept for I/O. Vertex order
/// is insertion order.
#[derive(Clone, Debug, Default)]
pub struct Graph {
    names: Vec<String>,
    index: HashMap<String, VertexId>,
    edges: Vec<(VertexId, VertexId)>,
    adj: Vec<Vec<(VertexId, EdgeId)>>,
    edge_index: HashMap<(VertexId, VertexId), EdgeId>,
}

impl PartialEq for Graph {
    fn eq(&self, other: &Self) -> bool {
        self.names == other.names && self.edges == other.edges
    }
}

impl Eq for Graph {}

fn key(u: VertexId, v: VertexId) -> (VertexId, VertexId) {
    if u < v {
        (u, v)
    } else {
        (v, u)
    }
}

impl Graph {
    pub fn new() -> Self {
        Self::default()
    }

    /// Graph on vertices named `0..n`.
    pub fn with_vertices(n: usize) -> Self {
        let mut g = Self::new();
        for i in 0..n {
            g.add_vertex(i.to_string()).expect("fresh names");
        }
        g
    }

    /// Unnamed graph from an edge list; panics on loops or parallel edges.
    pub fn from_edges(n: usize, edges: &[(VertexId, VertexId)]) -> Self {
        let mut g = Self::with_vertices(n);
        for &(u, v) in edges {
            g.add_edge(u, v).expect("simple edge list");
        }
        g
    }

    pub fn add_vertex(&mut self, name: impl Into<String>) -> Result<VertexId, GraphError> {
        let name = name.into();
        if self.index.contains_key(&name) {
            return Err(GraphError::DuplicateVertex(name));
        }
        let id = self.names.len();
        self.index.insert(name.clone(), id);
        self.names.push(name);
        self.adj.push(Vec::new());
        Ok(id)
    }

    pub fn add_edge(&mut self, u: VertexId, v: VertexId) -> Result<EdgeId, GraphError> {
        assert!(u < self.names.len() && v < self.names.len(), "vertex out of range");
        if u == v {
            return Err(GraphError::Loop(self.names[u].clone()));
        }
        let k = key(u, v);
        if self.edge_index.contains_key(&k) {
            return Err(GraphError::Parallel(
                self.names[k.0].clone(),
                self.names[k.1].clone(),
            ));
        }
        let id = self.edges.len();
        self.edges.push(k);
        self.edge_index.insert(k, id);
        self.adj[u].push((v, id));
        self.adj[v].push((u, id));
        Ok(id)
    }

    pub fn vertex_count(&self) -> usize {
        self.names.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn vertices(&self) -> std::ops::Range<VertexId> {
        0..self.names.len()
    }

    pub fn name(&self, v: VertexId) -> &str {
        &self.names[v]
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn vertex(&self, name: &str) -> Option<VertexId> {
        self.index.get(name).copied()
    }

    pub fn vertex_id(&self, name: &str) -> Result<VertexId, GraphError> {
        self.vertex(name)
            .ok_or_else(|| GraphError::UnknownVertex(name.to_string()))
    }

    /// Endpoints of `e`, smaller index first.
    pub fn endpoints(&self, e: EdgeId) -> (VertexId, VertexId) {
        self.edges[e]
    }

    pub fn edges(&self) -> &[(VertexId, VertexId)] {
        &self.edges
    }

    /// `(neighbour, edge)` pairs in insertion order.
    pub fn incident(&self, v: VertexId) -> &[(VertexId, EdgeId)] {
        &self.adj[v]
    }

    pub fn neighbours(&self, v: VertexId) -> impl Iterator<Item = VertexId> + '_ {
        self.adj[v].iter().map(|&(w, _)| w)
    }

    pub fn degree(&self, v: VertexId) -> usize {
        self.adj[v].len()
    }

    pub fn edge_between(&self, u: VertexId, v: VertexId) -> Option<EdgeId> {
        self.edge_index.get(&key(u, v)).copied()
    }

    pub fn other_end(&self, e: EdgeId, v: VertexId) -> VertexId {
        let (a, b) = self.edges[e];
        if a == v {
            b
        } else {
            a
        }
    }

    /// Connected components of the graph with the vertices flagged in
    /// `removed` deleted.
    pub fn components_without(&self, removed: &[bool]) -> Components {
        let n = self.vertex_count();
        let mut label = vec![None; n];
        let mut sizes = Vec::new();
        let mut stack = Vec::new();
        for s in 0..n {
            if removed[s] || label[s].is_some() {
                continue;
            }
            let c = sizes.len();
            label[s] = Some(c);
            stack.push(s);
            let mut size = 0;
            while let Some(v) = stack.pop() {
                size += 1;
                for &(w, _) in &self.adj[v] {
                    if !removed[w] && label[w].is_none() {
                        label[w] = Some(c);
                        stack.push(w);
                    }
                }
            }
            sizes.push(size);
        }
        Components { label, sizes }
    }

    pub fn components(&self) -> Components {
        self.components_without(&vec![false; self.vertex_count()])
    }

    /// Number of odd components of `G - X`, where `removed` is the indicator
    /// vector of `X`.
    pub fn odd_components_mask(&self, removed: &[bool]) -> usize {
        self.components_without(removed).odd_count()
    }

    /// Number of odd components of `G - X`.
    pub fn odd_components<'a>(&self, x: impl IntoIterator<Item = &'a VertexId>) -> usize {
        self.odd_components_mask(&self.mask(x))
    }

    pub fn mask<'a>(&self, x: impl IntoIterator<Item = &'a VertexId>) -> Vec<bool> {
        let mut removed = vec![false; self.vertex_count()];
        for &v in x {
            removed[v] = true;
        }
        removed
    }

    /// BFS distances from a set of sources, `None` where unreachable.
    pub fn distances_from(&self, sources: &[VertexId]) -> Vec<Option<usize>> {
        let mut dist = vec![None; self.vertex_count()];
        let mut queue = VecDeque::new();
        for &s in sources {
            if dist[s].is_none() {
                dist[s] = Some(0);
                queue.push_back(s);
            }
        }
        while let Some(v) = queue.pop_front() {
            let d = dist[v].unwrap();
            for &(w, _) in &self.adj[v] {
                if dist[w].is_none() {
                    dist[w] = Some(d + 1);
                    queue.push_back(w);
                }
            }
        }
        dist
    }

    /// Distance between two edges: the minimum graph distance between an
    /// endpoint of `e1` and an endpoint of `e2`. Edges sharing a vertex are at
    /// distance 0; `None` means the edges lie in different components.
    pub fn edge_distance(&self, e1: EdgeId, e2: EdgeId) -> Option<usize> {
        let (a, b) = self.edges[e1];
        let (c, d) = self.edges[e2];
        let dist = self.distances_from(&[a, b]);
        match (dist[c], dist[d]) {
            (Some(x), Some(y)) => Some(x.min(y)),
            (x, y) => x.or(y),
        }
    }

    /// Length of a shortest cycle, `None` for forests.
    pub fn girth(&self) -> Option<usize> {
        let mut best: Option<usize> = None;
        for s in self.vertices() {
            let mut dist = vec![usize::MAX; self.vertex_count()];
            let mut parent = vec![usize::MAX; self.vertex_count()];
            dist[s] = 0;
            let mut queue = VecDeque::from([s]);
            while let Some(v) = queue.pop_front() {
                for &(w, _) in &self.adj[v] {
                    if dist[w] == usize::MAX {
                        dist[w] = dist[v] + 1;
                        parent[w] = v;
                        queue.push_back(w);
                    } else if parent[v] != w {
                        let len = dist[v] + dist[w] + 1;
                        best = Some(best.map_or(len, |b| b.min(len)));
                    }
                }
            }
        }
        best
    }

    /// Spanning subgraph on the same vertices keeping only `edges`.
    pub fn spanning_subgraph<'a>(&self, edges: impl IntoIterator<Item = &'a EdgeId>) -> Graph {
        let mut sub = Graph {
            names: self.names.clone(),
            index: self.index.clone(),
            adj: vec![Vec::new(); self.vertex_count()],
            ..Graph::default()
        };
        for &e in edges {
            let (u, v) = self.edges[e];
            sub.add_edge(u, v).expect("edges of a simple graph");
        }
        sub
    }
}

/// Component labelling of a (possibly vertex-deleted) graph.
#[derive(Clone, Debug)]
pub struct Components {
    /// Component of each vertex, `None` for deleted vertices.
    pub label: Vec<Option<usize>>,
    pub sizes: Vec<usize>,
}

impl Components {
    pub fn count(&self) -> usize {
        self.sizes.len()
    }

    pub fn odd_count(&self) -> usize {
        self.sizes.iter().filter(|&&s| s % 2 == 1).count()
    }

    /// Vertex lists of each component, in order of first vertex.
    pub fn partition(&self) -> Vec<Vec<VertexId>> {
        let mut parts = vec![Vec::new(); self.sizes.len()];
        for (v, l) in self.label.iter().enumerate() {
            if let Some(c) = l {
                parts[*c].push(v);
            }
        }
        parts
    }
}

/// A set of edges of some host graph, stored by edge id.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct EdgeSet(BTreeSet<EdgeId>);

impl EdgeSet {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn insert(&mut self, e: EdgeId) -> bool {
        self.0.insert(e)
    }

    pub fn remove(&mut self, e: EdgeId) -> bool {
        self.0.remove(&e)
    }

    pub fn contains(&self, e: EdgeId) -> bool {
        self.0.contains(&e)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = EdgeId> + '_ {
        self.0.iter().copied()
    }

    /// Degree of every vertex of `host` in this edge set.
    pub fn degrees(&self, host: &Graph) -> Vec<usize> {
        let mut deg = vec![0; host.vertex_count()];
        for e in self.iter() {
            let (u, v) = host.endpoints(e);
            deg[u] += 1;
            deg[v] += 1;
        }
        deg
    }

    /// Resolve edges given by endpoint names.
    pub fn from_names<'a>(
        host: &Graph,
        pairs: impl IntoIterator<Item = (&'a str, &'a str)>,
    ) -> Result<Self, GraphError> {
        let mut set = Self::new();
        for (a, b) in pairs {
            let u = host.vertex_id(a)?;
            let v = host.vertex_id(b)?;
            let e = host
                .edge_between(u, v)
                .ok_or_else(|| GraphError::UnknownEdge(a.to_string(), b.to_string()))?;
            set.insert(e);
        }
        Ok(set)
    }

    /// Endpoint names of every edge, in edge-id order.
    pub fn to_names(&self, host: &Graph) -> Vec<(String, String)> {
        self.iter()
            .map(|e| {
                let (u, v) = host.endpoints(e);
                (host.name(u).to_string(), host.name(v).to_string())
            })
            .collect()
    }
}

impl FromIterator<EdgeId> for EdgeSet {
    fn from_iter<I: IntoIterator<Item = EdgeId>>(iter: I) -> Self {
        Self(iter.into_iter().collect())
    }
}

impl Extend<EdgeId> for EdgeSet {
    fn extend<I: IntoIterator<Item = EdgeId>>(&mut self, iter: I) {
        self.0.extend(iter)
    }
}

/// Target degree for every vertex.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct DegreeSpec(Vec<usize>);

impl DegreeSpec {
    pub fn new(values: Vec<usize>) -> Self {
        Self(values)
    }

    pub fn constant(n: usize, value: usize) -> Self {
        Self(vec![value; n])
    }

    pub fn get(&self, v: VertexId) -> usize {
        self.0[v]
    }

    pub fn values(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Maximum target degree, 0 on the empty graph.
    pub fn fhat(&self) -> usize {
        self.0.iter().copied().max().unwrap_or(0)
    }
}

/// A breach of the [`ColouredGraph`] invariants.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Violation {
    NoColours,
    DuplicateVertex { vertex: String },
    Loop { vertex: String },
    Parallel { u: String, v: String },
    ColourOutOfRange { u: String, v: String, colour: Colour, k: Colour },
    UnknownVertex { vertex: String },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::NoColours => write!(f, "colour count must be positive"),
            Violation::DuplicateVertex { vertex } => write!(f, "duplicate vertex {vertex}"),
            Violation::Loop { vertex } => write!(f, "loop at {vertex}"),
            Violation::Parallel { u, v } => write!(f, "parallel edge {u}-{v}"),
            Violation::ColourOutOfRange { u, v, colour, k } => {
                write!(f, "colour {colour} of edge {u}-{v} out of range 1..{k}")
            }
            Violation::UnknownVertex { vertex } => write!(f, "edge references unknown vertex {vertex}"),
        }
    }
}

/// Unchecked graph description, as read from a file or assembled by hand.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct RawGraph {
    pub k: Colour,
    pub vertices: Vec<String>,
    pub edges: Vec<(String, String, Colour)>,
}

impl RawGraph {
    pub fn new(k: Colour) -> Self {
        Self { k, ..Self::default() }
    }

    pub fn vertex(mut self, name: &str) -> Self {
        self.vertices.push(name.to_string());
        self
    }

    pub fn edge(mut self, u: &str, v: &str, colour: Colour) -> Self {
        self.edges.push((u.to_string(), v.to_string(), colour));
        self
    }

    /// Every invariant breach, in input order. Empty means the description
    /// is a valid coloured simple graph.
    pub fn validate(&self) -> Vec<Violation> {
        let mut out = Vec::new();
        if self.k == 0 {
            out.push(Violation::NoColours);
        }
        let mut seen = BTreeSet::new();
        for v in &self.vertices {
            if !seen.insert(v.as_str()) {
                out.push(Violation::DuplicateVertex { vertex: v.clone() });
            }
        }
        let mut pairs = BTreeSet::new();
        for (u, v, c) in &self.edges {
            for w in [u, v] {
                if !seen.contains(w.as_str()) {
                    out.push(Violation::UnknownVertex { vertex: w.clone() });
                }
            }
            if u == v {
                out.push(Violation::Loop { vertex: u.clone() });
            } else {
                let p = if u < v { (u, v) } else { (v, u) };
                if !pairs.insert(p) {
                    out.push(Violation::Parallel { u: p.0.clone(), v: p.1.clone() });
                }
            }
            if *c == 0 || *c > self.k {
                out.push(Violation::ColourOutOfRange {
                    u: u.clone(),
                    v: v.clone(),
                    colour: *c,
                    k: self.k,
                });
            }
        }
        out
    }

    /// Validate and build; vertices are ordered lexicographically and edges by
    /// endpoint index.
    pub fn build(&self) -> Result<ColouredGraph, GraphError> {
        let violations = self.validate();
        if !violations.is_empty() {
            return Err(GraphError::Invalid(violations));
        }
        let mut names = self.vertices.clone();
        names.sort();
        let mut graph = Graph::new();
        for n in names {
            graph.add_vertex(n)?;
        }
        let mut edges: Vec<(VertexId, VertexId, Colour)> = self
            .edges
            .iter()
            .map(|(u, v, c)| {
                let (a, b) = (graph.vertex(u).unwrap(), graph.vertex(v).unwrap());
                let (a, b) = key(a, b);
                (a, b, *c)
            })
            .collect();
        edges.sort();
        let mut colours = Vec::with_capacity(edges.len());
        for (u, v, c) in edges {
            graph.add_edge(u, v)?;
            colours.push(c);
        }
        Ok(ColouredGraph { graph, colours, k: self.k })
    }
}

/// A simple graph with a colour in `1..=k` on every edge.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ColouredGraph {
    graph: Graph,
    colours: Vec<Colour>,
    k: Colour,
}

impl ColouredGraph {
    /// Wrap an existing graph. Panics if `colours` does not match the edge
    /// count or a colour is outside `1..=k`.
    pub fn from_graph(graph: Graph, colours: Vec<Colour>, k: Colour) -> Self {
        assert_eq!(graph.edge_count(), colours.len(), "one colour per edge");
        assert!(k > 0 && colours.iter().all(|&c| c >= 1 && c <= k), "colours in 1..=k");
        Self { graph, colours, k }
    }

    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    pub fn k(&self) -> Colour {
        self.k
    }

    pub fn colour(&self, e: EdgeId) -> Colour {
        self.colours[e]
    }

    pub fn colours(&self) -> &[Colour] {
        &self.colours
    }

    pub fn vertex_count(&self) -> usize {
        self.graph.vertex_count()
    }

    pub fn edge_count(&self) -> usize {
        self.graph.edge_count()
    }

    /// `E^c(v)`: the colours on edges at `v`, ascending.
    pub fn colour_set(&self, v: VertexId) -> Vec<Colour> {
        let set: BTreeSet<Colour> = self
            .graph
            .incident(v)
            .iter()
            .map(|&(_, e)| self.colours[e])
            .collect();
        set.into_iter().collect()
    }

    pub fn colour_degree(&self, v: VertexId) -> usize {
        self.colour_set(v).len()
    }

    /// Incident edges of `v` with colour `c`.
    pub fn edges_of_colour(&self, v: VertexId, c: Colour) -> impl Iterator<Item = EdgeId> + '_ {
        self.graph
            .incident(v)
            .iter()
            .filter(move |&&(_, e)| self.colours[e] == c)
            .map(|&(_, e)| e)
    }

    /// True iff no two edges sharing an endpoint have the same colour.
    pub fn is_properly_coloured(&self) -> bool {
        self.graph
            .vertices()
            .all(|v| self.colour_degree(v) == self.graph.degree(v))
    }

    /// Description of this graph suitable for serialization.
    pub fn to_raw(&self) -> RawGraph {
        RawGraph {
            k: self.k,
            vertices: self.graph.names().to_vec(),
            edges: self
                .graph
                .edges()
                .iter()
                .zip(&self.colours)
                .map(|(&(u, v), &c)| {
                    (self.graph.name(u).to_string(), self.graph.name(v).to_string(), c)
                })
                .collect(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn path(n: usize) -> Graph {
        let edges: Vec<_> = (1..n).map(|i| (i - 1, i)).collect();
        Graph::from_edges(n, &edges)
    }

    #[test]
    fn validate_reports_each_breach() {
        let ok = RawGraph::new(3)
            .vertex("a")
            .vertex("b")
            .vertex("c")
            .edge("a", "b", 1)
            .edge("b", "c", 2)
            .edge("a", "c", 3);
        assert!(ok.validate().is_empty());

        let looped = RawGraph::new(1).vertex("a").edge("a", "a", 1);
        assert_eq!(looped.validate(), vec![Violation::Loop { vertex: "a".into() }]);

        let colour = RawGraph::new(3).vertex("a").vertex("b").edge("a", "b", 4);
        assert!(matches!(
            colour.validate().as_slice(),
            [Violation::ColourOutOfRange { colour: 4, k: 3, .. }]
        ));

        let bad = RawGraph::new(2)
            .vertex("a")
            .vertex("b")
            .edge("a", "b", 1)
            .edge("b", "a", 2)
            .edge("a", "z", 1);
        let v = bad.validate();
        assert!(v.contains(&Violation::Parallel { u: "a".into(), v: "b".into() }));
        assert!(v.contains(&Violation::UnknownVertex { vertex: "z".into() }));
        assert!(bad.build().is_err());
    }

    #[test]
    fn colour_sets() {
        let g = RawGraph::new(3)
            .vertex("z")
            .vertex("a")
            .vertex("b")
            .vertex("c")
            .vertex("iso")
            .edge("z", "a", 1)
            .edge("z", "b", 1)
            .edge("z", "c", 2)
            .build()
            .unwrap();
        let z = g.graph().vertex("z").unwrap();
        assert_eq!(g.colour_set(z), vec![1, 2]);
        assert_eq!(g.colour_degree(z), 2);
        let iso = g.graph().vertex("iso").unwrap();
        assert!(g.colour_set(iso).is_empty());
        assert!(!g.is_properly_coloured());
    }

    #[test]
    fn odd_components_examples() {
        assert_eq!(Graph::with_vertices(1).odd_components(&[]), 1);
        assert_eq!(path(3).odd_components(&[1]), 2);
        let star = Graph::from_edges(4, &[(0, 1), (0, 2), (0, 3)]);
        assert_eq!(star.odd_components(&[0]), 3);
        assert_eq!(star.components_without(&star.mask(&[0])).partition(), vec![vec![1], vec![2], vec![3]]);
    }

    #[test]
    fn edge_distance_examples() {
        let p = path(4);
        let ab = p.edge_between(0, 1).unwrap();
        let bc = p.edge_between(1, 2).unwrap();
        let cd = p.edge_between(2, 3).unwrap();
        assert_eq!(p.edge_distance(ab, bc), Some(0));
        assert_eq!(p.edge_distance(ab, cd), Some(1));
        assert_eq!(p.edge_distance(cd, ab), Some(1));
        let two = Graph::from_edges(4, &[(0, 1), (2, 3)]);
        assert_eq!(two.edge_distance(0, 1), None);
    }

    #[test]
    fn girth_of_small_graphs() {
        assert_eq!(path(5).girth(), None);
        let c5 = Graph::from_edges(5, &[(0, 1), (1, 2), (2, 3), (3, 4), (4, 0)]);
        assert_eq!(c5.girth(), Some(5));
        let k4 = Graph::from_edges(4, &[(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]);
        assert_eq!(k4.girth(), Some(3));
    }

    #[test]
    fn build_sorts_vertices_and_edges() {
        let g = RawGraph::new(2)
            .vertex("c")
            .vertex("a")
            .vertex("b")
            .edge("c", "a", 2)
            .edge("b", "a", 1)
            .build()
            .unwrap();
        assert_eq!(g.graph().names(), ["a", "b", "c"]);
        assert_eq!(g.graph().edges(), [(0, 1), (0, 2)]);
        assert_eq!(g.colours(), [1, 2]);
        assert_eq!(g.to_raw().build().unwrap(), g);
    }

    #[test]
    fn fhat_is_zero_when_empty() {
        assert_eq!(DegreeSpec::new(vec![]).fhat(), 0);
        assert_eq!(DegreeSpec::new(vec![1, 3, 2]).fhat(), 3);
    }
}
