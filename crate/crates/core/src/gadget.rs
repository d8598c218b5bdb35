//! Gadget graphs: every vertex `u` of the source graph is replaced by a
//! complete bipartite graph between `S_u` and `T_u`, and perfect matchings of
//! the result correspond to (properly coloured) f-factors of the source.
//!
//! In the coloured construction `S_u` has one vertex per colour at `u` and
//! `T_u` has `d^c(u) - f(u)` vertices; a source edge `uv` of colour `j`
//! becomes the cross edge `u.s.j -- v.s.j`. In the plain construction `S_u`
//! has one vertex per neighbour and `T_u` has `d(u) - f(u)` vertices.

use std::collections::HashMap;
use std::fmt::Write as _;

use serde::Serialize;
use thiserror::Error;

use crate::factor::{is_f_factor, is_pc_factor};
use crate::format::{dot_colour, quote, serialize_ecg};
use crate::graph::{Colour, ColouredGraph, DegreeSpec, EdgeId, EdgeSet, Graph, VertexId};
use crate::matching::Matching;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GadgetError {
    #[error("f({vertex}) = {f} exceeds the available degree {available}; no factor exists")]
    Infeasible { vertex: String, f: usize, available: usize },
    #[error("matching leaves gadget vertex `{0}` exposed")]
    NotPerfect(String),
    #[error("edge set is not a factor of the source graph")]
    NotAFactor,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum GadgetKind {
    Coloured,
    Plain,
}

/// Where a gadget vertex comes from.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "side", rename_all = "snake_case")]
pub enum GadgetTag {
    /// `u_i in S_u`; `key` is a colour (coloured) or a neighbour (plain).
    S { vertex: VertexId, key: usize },
    /// `u'_j in T_u`, `1 <= index <= |T_u|`.
    T { vertex: VertexId, index: usize },
}

impl GadgetTag {
    pub fn source(&self) -> VertexId {
        match *self {
            GadgetTag::S { vertex, .. } | GadgetTag::T { vertex, .. } => vertex,
        }
    }
}

#[derive(Clone, Debug)]
pub struct GadgetGraph {
    kind: GadgetKind,
    graph: Graph,
    provenance: Vec<GadgetTag>,
    /// Gadget edge -> source edge, for cross edges only.
    edge_origin: Vec<Option<EdgeId>>,
    /// Source edge -> gadget cross edge.
    cross_edge: Vec<EdgeId>,
    s_sets: Vec<Vec<VertexId>>,
    t_sets: Vec<Vec<VertexId>>,
    /// Key of each S-vertex slot (colour or neighbour), parallel to `s_sets`.
    s_keys: Vec<Vec<usize>>,
    f: DegreeSpec,
}

impl GadgetGraph {
    pub fn kind(&self) -> GadgetKind {
        self.kind
    }

    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    pub fn provenance(&self, x: VertexId) -> GadgetTag {
        self.provenance[x]
    }

    pub fn edge_origin(&self, e: EdgeId) -> Option<EdgeId> {
        self.edge_origin[e]
    }

    /// The gadget cross edge standing for source edge `e`.
    pub fn cross_edge(&self, e: EdgeId) -> EdgeId {
        self.cross_edge[e]
    }

    pub fn s_set(&self, u: VertexId) -> &[VertexId] {
        &self.s_sets[u]
    }

    pub fn t_set(&self, u: VertexId) -> &[VertexId] {
        &self.t_sets[u]
    }

    /// `u_i` for colour (or neighbour) `key`, if present.
    pub fn s_vertex(&self, u: VertexId, key: usize) -> Option<VertexId> {
        self.s_keys[u]
            .iter()
            .position(|&k| k == key)
            .map(|i| self.s_sets[u][i])
    }

    pub fn source_count(&self) -> usize {
        self.s_sets.len()
    }

    pub fn f(&self) -> &DegreeSpec {
        &self.f
    }

    /// Translate a perfect matching of the gadget into the source factor it
    /// encodes.
    pub fn lift_matching(&self, m: &Matching) -> Result<EdgeSet, GadgetError> {
        if let Some(x) = m.exposed().next() {
            return Err(GadgetError::NotPerfect(self.graph.name(x).to_string()));
        }
        Ok(m.pairs()
            .into_iter()
            .filter_map(|(a, b)| self.edge_origin[self.graph.edge_between(a, b).unwrap()])
            .collect())
    }

    /// Perfect matching of the gadget whose cross edges are exactly those of
    /// `factor`. The remaining S-vertices of each gadget are paired with its
    /// T-vertices in ascending order.
    pub fn push_factor(&self, source: &ColouredGraph, factor: &EdgeSet) -> Result<Matching, GadgetError> {
        let ok = match self.kind {
            GadgetKind::Coloured => is_pc_factor(source, &self.f, factor),
            GadgetKind::Plain => is_f_factor(source.graph(), &self.f, factor),
        };
        if !ok {
            return Err(GadgetError::NotAFactor);
        }
        let mut pairs = Vec::new();
        let mut covered = vec![false; self.graph.vertex_count()];
        for e in factor.iter() {
            let (a, b) = self.graph.endpoints(self.cross_edge[e]);
            covered[a] = true;
            covered[b] = true;
            pairs.push((a, b));
        }
        for u in 0..self.source_count() {
            let free = self.s_sets[u].iter().filter(|&&s| !covered[s]);
            pairs.extend(free.zip(&self.t_sets[u]).map(|(&s, &t)| (s, t)));
        }
        Matching::from_pairs(&self.graph, &pairs).map_err(|_| GadgetError::NotAFactor)
    }

    /// DOT rendering: S-vertices take their colour's palette entry, T-vertices
    /// are grey.
    pub fn to_dot(&self) -> String {
        let mut out = String::from("graph gadget {\n  node [shape=circle, style=filled];\n");
        for x in self.graph.vertices() {
            let fill = match (self.kind, self.provenance[x]) {
                (GadgetKind::Coloured, GadgetTag::S { key, .. }) => dot_colour(key as Colour),
                (GadgetKind::Plain, GadgetTag::S { .. }) => "#ffffff",
                (_, GadgetTag::T { .. }) => "#bbbbbb",
            };
            writeln!(out, "  {} [fillcolor=\"{}\"];", quote(self.graph.name(x)), fill).unwrap();
        }
        for (e, &(a, b)) in self.graph.edges().iter().enumerate() {
            let style = if self.edge_origin[e].is_some() { " [penwidth=2]" } else { "" };
            writeln!(out, "  {} -- {}{};", quote(self.graph.name(a)), quote(self.graph.name(b)), style).unwrap();
        }
        out.push_str("}\n");
        out
    }

    /// ECG text of the gadget as a 1-factor instance: one colour, `f = 1`.
    pub fn to_ecg(&self) -> String {
        let g = ColouredGraph::from_graph(self.graph.clone(), vec![1; self.graph.edge_count()], 1);
        serialize_ecg(&g, &DegreeSpec::constant(self.graph.vertex_count(), 1))
    }

    pub fn to_json(&self, source: &ColouredGraph) -> serde_json::Value {
        let names = |x: VertexId| self.graph.name(x).to_string();
        let src = source.graph();
        serde_json::json!({
            "kind": self.kind,
            "vertices": self.graph.vertices().map(|x| {
                let tag = self.provenance[x];
                let mut v = serde_json::json!({
                    "id": names(x),
                    "source": src.name(tag.source()),
                });
                match tag {
                    GadgetTag::S { key, .. } => {
                        v["side"] = "S".into();
                        v["key"] = match self.kind {
                            GadgetKind::Coloured => key.into(),
                            GadgetKind::Plain => src.name(key).into(),
                        };
                    }
                    GadgetTag::T { index, .. } => {
                        v["side"] = "T".into();
                        v["index"] = index.into();
                    }
                }
                v
            }).collect::<Vec<_>>(),
            "edges": self.graph.edges().iter().enumerate().map(|(e, &(a, b))| {
                let mut v = serde_json::json!({ "u": names(a), "v": names(b) });
                if let Some(o) = self.edge_origin[e] {
                    let (p, q) = src.endpoints(o);
                    v["origin"] = serde_json::json!([src.name(p), src.name(q)]);
                }
                v
            }).collect::<Vec<_>>(),
        })
    }
}

struct Builder {
    graph: Graph,
    provenance: Vec<GadgetTag>,
    s_sets: Vec<Vec<VertexId>>,
    t_sets: Vec<Vec<VertexId>>,
    s_keys: Vec<Vec<usize>>,
}

impl Builder {
    fn vertex(&mut self, name: String, tag: GadgetTag) -> VertexId {
        let id = self.graph.add_vertex(name).expect("gadget names are unique");
        self.provenance.push(tag);
        id
    }

    /// Add the gadget of `u` with the given S keys and slack.
    fn gadget(&mut self, source: &Graph, u: VertexId, keys: Vec<(usize, String)>, slack: usize) {
        let base = source.name(u);
        let s: Vec<_> = keys
            .iter()
            .map(|(key, label)| self.vertex(format!("{base}.s.{label}"), GadgetTag::S { vertex: u, key: *key }))
            .collect();
        let t: Vec<_> = (1..=slack)
            .map(|j| self.vertex(format!("{base}.t.{j}"), GadgetTag::T { vertex: u, index: j }))
            .collect();
        for &a in &s {
            for &b in &t {
                self.graph.add_edge(a, b).unwrap();
            }
        }
        self.s_keys.push(keys.into_iter().map(|(k, _)| k).collect());
        self.s_sets.push(s);
        self.t_sets.push(t);
    }
}

fn check_feasible(source: &Graph, f: &DegreeSpec, available: impl Fn(VertexId) -> usize) -> Result<(), GadgetError> {
    for u in source.vertices() {
        if f.get(u) > available(u) {
            return Err(GadgetError::Infeasible {
                vertex: source.name(u).to_string(),
                f: f.get(u),
                available: available(u),
            });
        }
    }
    Ok(())
}

fn assemble(
    kind: GadgetKind,
    source: &Graph,
    f: &DegreeSpec,
    keys: impl Fn(VertexId) -> Vec<(usize, String)>,
    edge_key: impl Fn(EdgeId, VertexId, VertexId) -> usize,
) -> GadgetGraph {
    let mut b = Builder {
        graph: Graph::new(),
        provenance: Vec::new(),
        s_sets: Vec::new(),
        t_sets: Vec::new(),
        s_keys: Vec::new(),
    };
    for u in source.vertices() {
        let k = keys(u);
        let slack = k.len() - f.get(u);
        b.gadget(source, u, k, slack);
    }
    let lookup: Vec<HashMap<usize, VertexId>> = (0..source.vertex_count())
        .map(|u| b.s_keys[u].iter().copied().zip(b.s_sets[u].iter().copied()).collect())
        .collect();
    let mut edge_origin = vec![None; b.graph.edge_count()];
    let mut cross_edge = Vec::with_capacity(source.edge_count());
    for (e, &(u, v)) in source.edges().iter().enumerate() {
        let su = lookup[u][&edge_key(e, u, v)];
        let sv = lookup[v][&edge_key(e, v, u)];
        // Two source edges of the same colour at u share u's S-vertex, so the
        // cross edges u_j v_j are still distinct since v differs.
        let id = b.graph.add_edge(su, sv).expect("cross edges are distinct");
        edge_origin.push(Some(e));
        cross_edge.push(id);
    }
    GadgetGraph {
        kind,
        graph: b.graph,
        provenance: b.provenance,
        edge_origin,
        cross_edge,
        s_sets: b.s_sets,
        t_sets: b.t_sets,
        s_keys: b.s_keys,
        f: f.clone(),
    }
}

/// The coloured gadget graph `G_f^c`.
pub fn build_gfc(g: &ColouredGraph, f: &DegreeSpec) -> Result<GadgetGraph, GadgetError> {
    let source = g.graph();
    check_feasible(source, f, |u| g.colour_degree(u))?;
    Ok(assemble(
        GadgetKind::Coloured,
        source,
        f,
        |u| {
            g.colour_set(u)
                .into_iter()
                .map(|c| (c as usize, c.to_string()))
                .collect()
        },
        |e, _, _| g.colour(e) as usize,
    ))
}

/// The uncoloured gadget graph `G_f`.
pub fn build_gf(graph: &Graph, f: &DegreeSpec) -> Result<GadgetGraph, GadgetError> {
    check_feasible(graph, f, |u| graph.degree(u))?;
    Ok(assemble(
        GadgetKind::Plain,
        graph,
        f,
        |u| {
            let mut nbrs: Vec<_> = graph.neighbours(u).collect();
            nbrs.sort_unstable();
            nbrs.into_iter().map(|w| (w, graph.name(w).to_string())).collect()
        },
        |_, _, v| v,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::RawGraph;
    use crate::matching::perfect_matching;

    fn star() -> (ColouredGraph, DegreeSpec) {
        let g = RawGraph::new(2)
            .vertex("z")
            .vertex("a")
            .vertex("b")
            .vertex("c")
            .edge("z", "a", 1)
            .edge("z", "b", 1)
            .edge("z", "c", 2)
            .build()
            .unwrap();
        // vertex order a, b, c, z
        (g, DegreeSpec::new(vec![1, 1, 1, 2]))
    }

    #[test]
    fn star_gadget() {
        let (g, f) = star();
        let gg = build_gfc(&g, &f).unwrap();
        let mut names = gg.graph().names().to_vec();
        names.sort();
        assert_eq!(names, ["a.s.1", "b.s.1", "c.s.2", "z.s.1", "z.s.2"]);
        assert_eq!(gg.graph().edge_count(), 3);
        assert!((0..4).all(|u| gg.t_set(u).is_empty()));
    }

    #[test]
    fn infeasible_degree() {
        let (g, _) = star();
        let f = DegreeSpec::new(vec![1, 1, 1, 3]);
        assert!(matches!(
            build_gfc(&g, &f),
            Err(GadgetError::Infeasible { ref vertex, f: 3, available: 2 }) if vertex == "z"
        ));
    }

    #[test]
    fn plain_gadget_sizes() {
        let tri = Graph::from_edges(3, &[(0, 1), (1, 2), (0, 2)]);
        let gg = build_gf(&tri, &DegreeSpec::constant(3, 1)).unwrap();
        assert_eq!(gg.graph().vertex_count(), 9);

        let k2 = Graph::from_edges(2, &[(0, 1)]);
        let gg = build_gf(&k2, &DegreeSpec::constant(2, 1)).unwrap();
        assert_eq!(gg.graph().vertex_count(), 2);
        assert_eq!(gg.graph().edge_count(), 1);
        assert_eq!(gg.graph().names(), ["0.s.1", "1.s.0"]);

        let path = Graph::from_edges(3, &[(0, 1), (1, 2)]);
        let gg = build_gf(&path, &DegreeSpec::new(vec![1, 2, 1])).unwrap();
        assert_eq!(gg.graph().vertex_count(), 4);
        let m = perfect_matching(gg.graph()).unwrap();
        let src = ColouredGraph::from_graph(path.clone(), vec![1, 1], 1);
        assert_eq!(gg.lift_matching(&m).unwrap().len(), 2);
        assert_eq!(gg.push_factor(&src, &[0, 1].into_iter().collect()).unwrap(), m);
    }

    #[test]
    fn lift_rejects_exposed_vertices() {
        let (g, _) = star();
        let gg = build_gfc(&g, &DegreeSpec::new(vec![0, 0, 0, 0])).unwrap();
        let empty = Matching::empty(gg.graph().vertex_count());
        assert!(matches!(gg.lift_matching(&empty), Err(GadgetError::NotPerfect(_))));
    }
}
