//! Gadget graphs that encode 1-in-3-colouring of regular 3-uniform
//! hypergraphs as rainbow-component factors and as distance-2-coloured
//! factors.
//!
//! Vertex names: `x.c<i>` for the central clique of `x`, `x.q<i>.<j>` for
//! the cliques `Q_i^x` (rc) or `x.q<i>.{..}` / `x.b<i>.{..}` for the Kneser
//! copies `Q_i^x` and `Q̄_i^x` (d2c), and `ve.<k>` for the `k`-th hyperedge.
//! All indices are 1-based.

use std::collections::HashMap;

use thiserror::Error;

use crate::factor::{is_distance_d_coloured, is_distance_d_factor, is_rc_factor};
use crate::graph::{Colour, ColouredGraph, EdgeId, EdgeSet, RawGraph, VertexId};
use crate::hypergraph::{is_one_in_three, Hypergraph3, OneInThree};
use crate::kneser::{canonical_colour, disjoint, subset_name, subsets};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ReductionError {
    #[error("hypergraph is not {0}-regular")]
    NotRegular(usize),
    #[error("r must be at least 2, got {0}")]
    BadR(usize),
    #[error("not a 1-in-3-colouring")]
    InvalidColouring,
    #[error("edge set is not a factor of the required kind")]
    NotAFactor,
    #[error("vertex names collide: {0}")]
    Names(String),
}

pub fn binomial(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

/// Collects named vertices and coloured edges, then resolves names to ids.
struct Builder {
    raw: RawGraph,
}

impl Builder {
    fn new(k: Colour) -> Self {
        Self { raw: RawGraph::new(k) }
    }

    fn vertex(&mut self, name: String) -> String {
        self.raw.vertices.push(name.clone());
        name
    }

    fn edge(&mut self, u: &str, v: &str, c: Colour) {
        self.raw.edges.push((u.to_string(), v.to_string(), c));
    }

    fn finish(self) -> Result<(ColouredGraph, HashMap<String, VertexId>), ReductionError> {
        let g = self.raw.build().map_err(|e| ReductionError::Names(e.to_string()))?;
        let index = g.graph().names().iter().cloned().zip(0..).collect();
        Ok((g, index))
    }
}

fn edge(g: &ColouredGraph, u: VertexId, v: VertexId) -> EdgeId {
    g.graph().edge_between(u, v).expect("gadget edge")
}

fn check_phi(h: &Hypergraph3, phi: &[bool]) -> Result<(), ReductionError> {
    if is_one_in_three(h, phi) {
        Ok(())
    } else {
        Err(ReductionError::InvalidColouring)
    }
}

/// The rainbow-component gadget for an `(r+1)`-regular hypergraph.
#[derive(Clone, Debug)]
pub struct RcGadget {
    pub graph: ColouredGraph,
    pub r: usize,
    /// `central[x][i]` is `x_{i+1}`.
    pub central: Vec<Vec<VertexId>>,
    /// `q[x][i][j]` is the `(j+1)`-th vertex of `Q_{i+1}^x`.
    pub q: Vec<Vec<Vec<VertexId>>>,
    /// `ve[e]` is `v_e`.
    pub ve: Vec<VertexId>,
}

/// Build the rc gadget. Within each clique, edges in lexicographic order of
/// endpoint indices get colours `1, 2, ...`; the edge `x_i q_j` gets colour
/// `C(r,2) + j`, copied onto `v_e q_j`.
pub fn build_rc_gadget(h: &Hypergraph3, r: usize) -> Result<RcGadget, ReductionError> {
    if r < 2 {
        return Err(ReductionError::BadR(r));
    }
    if !h.is_regular(r + 1) {
        return Err(ReductionError::NotRegular(r + 1));
    }
    let rho0 = binomial(r, 2);
    let rho1 = binomial(r + 1, 2);
    let mut b = Builder::new(rho1 as Colour);
    let mut central_names = Vec::new();
    let mut q_names = Vec::new();
    for x in 0..h.vertex_count() {
        let name = h.name(x);
        let c: Vec<String> = (1..=r + 1).map(|i| b.vertex(format!("{name}.c{i}"))).collect();
        let q: Vec<Vec<String>> = (1..=r + 1)
            .map(|i| (1..=r).map(|j| b.vertex(format!("{name}.q{i}.{j}"))).collect())
            .collect();
        central_names.push(c);
        q_names.push(q);
    }
    let ve_names: Vec<String> = (1..=h.edge_count()).map(|k| b.vertex(format!("ve.{k}"))).collect();
    for x in 0..h.vertex_count() {
        let c = &central_names[x];
        let mut colour = 0;
        for i in 0..=r {
            for j in i + 1..=r {
                colour += 1;
                b.edge(&c[i], &c[j], colour);
            }
        }
        for (i, q) in q_names[x].iter().enumerate() {
            let mut colour = 0;
            for a in 0..r {
                for bb in a + 1..r {
                    colour += 1;
                    b.edge(&q[a], &q[bb], colour);
                }
            }
            for (j, qj) in q.iter().enumerate() {
                b.edge(&c[i], qj, (rho0 + j + 1) as Colour);
            }
        }
        for (i, &e) in h.incidence(x).iter().enumerate() {
            for (j, qj) in q_names[x][i].iter().enumerate() {
                b.edge(&ve_names[e], qj, (rho0 + j + 1) as Colour);
            }
        }
    }
    let (graph, index) = b.finish()?;
    let id = |n: &String| index[n];
    Ok(RcGadget {
        central: central_names.iter().map(|c| c.iter().map(|n| id(n)).collect()).collect(),
        q: q_names.iter().map(|qs| qs.iter().map(|q| q.iter().map(|n| id(n)).collect()).collect()).collect(),
        ve: ve_names.iter().map(|n| id(n)).collect(),
        graph,
        r,
    })
}

impl RcGadget {
    fn clique(&self, vs: &[VertexId], out: &mut EdgeSet) {
        for (a, &u) in vs.iter().enumerate() {
            for &v in &vs[a + 1..] {
                out.insert(edge(&self.graph, u, v));
            }
        }
    }

    /// The factor built from a colouring: for `+1` vertices the central
    /// clique and every clique `v_e ∪ Q_i^x`; for `-1` vertices every clique
    /// `x_i ∪ Q_i^x`.
    pub fn factor_from_colouring(&self, h: &Hypergraph3, phi: &[bool]) -> Result<EdgeSet, ReductionError> {
        check_phi(h, phi)?;
        let mut f = EdgeSet::new();
        for x in 0..h.vertex_count() {
            if phi[x] {
                self.clique(&self.central[x], &mut f);
            }
            for (i, &e) in h.incidence(x).iter().enumerate() {
                let hub = if phi[x] { self.ve[e] } else { self.central[x][i] };
                let mut vs = self.q[x][i].clone();
                vs.push(hub);
                self.clique(&vs, &mut f);
            }
        }
        Ok(f)
    }

    /// `φ(x) = +1` iff `v_e` is joined in the factor to `Q_1^x`, where `e` is
    /// the first edge of `x`.
    pub fn colouring_from_factor(&self, h: &Hypergraph3, factor: &EdgeSet) -> Result<OneInThree, ReductionError> {
        if !is_rc_factor(&self.graph, factor, self.r) {
            return Err(ReductionError::NotAFactor);
        }
        let phi: Vec<bool> = (0..h.vertex_count())
            .map(|x| {
                let e = h.incidence(x)[0];
                factor.contains(edge(&self.graph, self.ve[e], self.q[x][0][0]))
            })
            .collect();
        check_phi(h, &phi)?;
        Ok(phi)
    }
}

/// The distance-2 gadget for a `C(2r-1, r-1)`-regular hypergraph.
#[derive(Clone, Debug)]
pub struct D2cGadget {
    pub graph: ColouredGraph,
    pub r: usize,
    /// The `(r-1)`-subsets of `[2r-1]` in lexicographic order.
    pub sets: Vec<Vec<usize>>,
    /// `q[x][i][s]` is `x_{i+1}^{sets[s]}`.
    pub q: Vec<Vec<Vec<VertexId>>>,
    /// `qbar[x][i][s]` is `x̄_{i+1}^{sets[s]}`.
    pub qbar: Vec<Vec<Vec<VertexId>>>,
    pub ve: Vec<VertexId>,
    /// Index in `sets` of `{1..r-1}` (the vertex `x_i`) and of
    /// `{r+1..2r-1}` (the vertex `x̄_i`).
    pub low: usize,
    pub high: usize,
}

/// Build the d2c gadget. The central gadget maps `x_i` to the `i`-th subset;
/// every Kneser copy, the central gadget and the bridge edges carry the
/// canonical colouring.
pub fn build_d2c_gadget(h: &Hypergraph3, r: usize) -> Result<D2cGadget, ReductionError> {
    if r < 2 {
        return Err(ReductionError::BadR(r));
    }
    let rho = binomial(2 * r - 1, r - 1);
    if !h.is_regular(rho) {
        return Err(ReductionError::NotRegular(rho));
    }
    let sets = subsets(2 * r - 1, r - 1);
    let low_set: Vec<usize> = (1..r).collect();
    let high_set: Vec<usize> = (r + 1..2 * r).collect();
    let low = sets.iter().position(|s| *s == low_set).expect("present");
    let high = sets.iter().position(|s| *s == high_set).expect("present");
    let mut b = Builder::new((2 * r - 1) as Colour);
    let mut q_names = Vec::new();
    let mut qbar_names = Vec::new();
    for x in 0..h.vertex_count() {
        let name = h.name(x);
        let copies = |b: &mut Builder, tag: &str| -> Vec<Vec<String>> {
            (1..=rho)
                .map(|i| sets.iter().map(|s| b.vertex(format!("{name}.{tag}{i}.{}", subset_name(s)))).collect())
                .collect()
        };
        q_names.push(copies(&mut b, "q"));
        qbar_names.push(copies(&mut b, "b"));
    }
    let ve_names: Vec<String> = (1..=h.edge_count()).map(|k| b.vertex(format!("ve.{k}"))).collect();
    let kneser_pairs: Vec<(usize, usize, Colour)> = (0..sets.len())
        .flat_map(|a| (a + 1..sets.len()).map(move |c| (a, c)))
        .filter(|&(a, c)| disjoint(&sets[a], &sets[c]))
        .map(|(a, c)| (a, c, canonical_colour(r, &sets[a], &sets[c])))
        .collect();
    for x in 0..h.vertex_count() {
        for i in 0..rho {
            for &(a, c, colour) in &kneser_pairs {
                b.edge(&q_names[x][i][a], &q_names[x][i][c], colour);
                b.edge(&qbar_names[x][i][a], &qbar_names[x][i][c], colour);
            }
            // x̄_i joins the Q_i^x-neighbours of x_i, with their colours
            for (s, set) in sets.iter().enumerate() {
                if disjoint(set, &low_set) {
                    let colour = canonical_colour(r, &low_set, set);
                    b.edge(&qbar_names[x][i][high], &q_names[x][i][s], colour);
                }
            }
        }
        // central gadget on x_1..x_rho
        for &(a, c, colour) in &kneser_pairs {
            b.edge(&q_names[x][a][low], &q_names[x][c][low], colour);
        }
        for (i, &e) in h.incidence(x).iter().enumerate() {
            for (s, set) in sets.iter().enumerate() {
                if disjoint(set, &high_set) {
                    let colour = canonical_colour(r, &high_set, set);
                    b.edge(&ve_names[e], &qbar_names[x][i][s], colour);
                }
            }
        }
    }
    let (graph, index) = b.finish()?;
    let id = |n: &String| index[n];
    let resolve = |names: &Vec<Vec<Vec<String>>>| -> Vec<Vec<Vec<VertexId>>> {
        names.iter().map(|qs| qs.iter().map(|q| q.iter().map(|n| id(n)).collect()).collect()).collect()
    };
    Ok(D2cGadget {
        q: resolve(&q_names),
        qbar: resolve(&qbar_names),
        ve: ve_names.iter().map(|n| id(n)).collect(),
        graph,
        r,
        sets,
        low,
        high,
    })
}

impl D2cGadget {
    fn rho(&self) -> usize {
        self.sets.len()
    }

    /// Kneser edges inside `copy`, skipping those at index `skip`.
    fn kneser_edges(&self, copy: &[VertexId], skip: Option<usize>, out: &mut EdgeSet) {
        for a in 0..copy.len() {
            for c in a + 1..copy.len() {
                if Some(a) == skip || Some(c) == skip || !disjoint(&self.sets[a], &self.sets[c]) {
                    continue;
                }
                out.insert(edge(&self.graph, copy[a], copy[c]));
            }
        }
    }

    /// Edges from `hub` to the vertices of `copy`.
    fn hub_edges(&self, hub: VertexId, copy: &[VertexId], out: &mut EdgeSet) {
        for &v in copy {
            if let Some(e) = self.graph.graph().edge_between(hub, v) {
                out.insert(e);
            }
        }
    }

    pub fn central_edges(&self, x: usize) -> EdgeSet {
        let mut out = EdgeSet::new();
        let xs: Vec<VertexId> = (0..self.rho()).map(|i| self.q[x][i][self.low]).collect();
        self.kneser_edges(&xs, None, &mut out);
        out
    }

    /// Kneser edges of `Q_i^x - x_i` and `Q̄_i^x - x̄_i` for every `x, i`.
    pub fn interior_edges(&self) -> EdgeSet {
        let mut out = EdgeSet::new();
        for x in 0..self.q.len() {
            for i in 0..self.rho() {
                self.kneser_edges(&self.q[x][i], Some(self.low), &mut out);
                self.kneser_edges(&self.qbar[x][i], Some(self.high), &mut out);
            }
        }
        out
    }

    /// For `+1` vertices: the central gadget, `(Q_i^x - x_i) ∪ x̄_i` and
    /// `(Q̄_i^x - x̄_i) ∪ v_{e_i}`; for `-1` vertices: all of `Q_i^x` and
    /// `Q̄_i^x`.
    pub fn factor_from_colouring(&self, h: &Hypergraph3, phi: &[bool]) -> Result<EdgeSet, ReductionError> {
        check_phi(h, phi)?;
        let mut f = EdgeSet::new();
        for x in 0..h.vertex_count() {
            if phi[x] {
                f.extend(self.central_edges(x).iter());
            }
            for (i, &e) in h.incidence(x).iter().enumerate() {
                if phi[x] {
                    self.kneser_edges(&self.q[x][i], Some(self.low), &mut f);
                    self.hub_edges(self.qbar[x][i][self.high], &self.q[x][i], &mut f);
                    self.kneser_edges(&self.qbar[x][i], Some(self.high), &mut f);
                    self.hub_edges(self.ve[e], &self.qbar[x][i], &mut f);
                } else {
                    self.kneser_edges(&self.q[x][i], None, &mut f);
                    self.kneser_edges(&self.qbar[x][i], None, &mut f);
                }
            }
        }
        Ok(f)
    }

    /// `φ(x) = +1` iff the factor uses the central gadget of `x`.
    pub fn colouring_from_factor(&self, h: &Hypergraph3, factor: &EdgeSet) -> Result<OneInThree, ReductionError> {
        if !is_distance_d_factor(&self.graph, factor, self.r, 2) {
            return Err(ReductionError::NotAFactor);
        }
        let phi: Vec<bool> = (0..h.vertex_count())
            .map(|x| self.central_edges(x).iter().any(|e| factor.contains(e)))
            .collect();
        check_phi(h, &phi)?;
        Ok(phi)
    }

    /// For every `x̄_i`: a bridge edge into `Q_i^x` and a Kneser edge inside
    /// `Q̄_i^x` never coexist in a distance-2-coloured factor containing
    /// `forced`. Returns the number of pairs checked, or the first pair that
    /// coexists.
    pub fn bridge_exclusivity(&self, forced: &EdgeSet) -> Result<usize, (EdgeId, EdgeId)> {
        let graph = self.graph.graph();
        let mut checked = 0;
        for x in 0..self.q.len() {
            for i in 0..self.rho() {
                let hub = self.qbar[x][i][self.high];
                let bridges: Vec<EdgeId> = self.q[x][i].iter().filter_map(|&v| graph.edge_between(hub, v)).collect();
                let inner: Vec<EdgeId> = self.qbar[x][i].iter().filter_map(|&v| graph.edge_between(hub, v)).collect();
                for &a in &bridges {
                    for &b in &inner {
                        checked += 1;
                        let mut f = forced.clone();
                        f.insert(a);
                        f.insert(b);
                        if is_distance_d_coloured(&self.graph, &f, 2) {
                            return Err((a, b));
                        }
                    }
                }
            }
        }
        Ok(checked)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hypergraph::{brute_1in3, k4_3, positive9};

    #[test]
    fn rc_sizes_on_k4() {
        let h = k4_3();
        let g = build_rc_gadget(&h, 2).unwrap();
        assert_eq!(g.graph.vertex_count(), 40);
        assert_eq!(g.graph.k(), 3);
        let (n, m, r) = (4, 4, 2);
        assert_eq!(g.graph.edge_count(), n * (r + 2) * binomial(r + 1, 2) + 3 * r * m);
        // all Q edges are colour 1 when r = 2
        for x in 0..4 {
            for i in 0..3 {
                let e = edge(&g.graph, g.q[x][i][0], g.q[x][i][1]);
                assert_eq!(g.graph.colour(e), 1);
            }
        }
    }

    #[test]
    fn rc_rejects_irregular() {
        let h = positive9();
        assert!(matches!(build_rc_gadget(&h, 3), Err(ReductionError::NotRegular(4))));
        assert!(matches!(build_rc_gadget(&h, 1), Err(ReductionError::BadR(1))));
    }

    #[test]
    fn rc_forward_and_back() {
        let h = positive9();
        let g = build_rc_gadget(&h, 2).unwrap();
        let phi = brute_1in3(&h, 24).unwrap().unwrap();
        let f = g.factor_from_colouring(&h, &phi).unwrap();
        assert!(is_rc_factor(&g.graph, &f, 2));
        assert_eq!(g.colouring_from_factor(&h, &f).unwrap(), phi);
        let bad = vec![true; 9];
        assert_eq!(g.factor_from_colouring(&h, &bad), Err(ReductionError::InvalidColouring));
    }

    #[test]
    fn d2c_sizes_on_k4() {
        let h = k4_3();
        let g = build_d2c_gadget(&h, 2).unwrap();
        assert_eq!(g.graph.vertex_count(), 76);
        assert!(g.graph.k() <= 3);
        assert_eq!((g.sets[g.low].clone(), g.sets[g.high].clone()), (vec![1], vec![3]));
    }

    #[test]
    fn d2c_forward_and_back() {
        let h = positive9();
        let g = build_d2c_gadget(&h, 2).unwrap();
        let phi = brute_1in3(&h, 24).unwrap().unwrap();
        let f = g.factor_from_colouring(&h, &phi).unwrap();
        assert!(is_distance_d_factor(&g.graph, &f, 2, 2));
        assert_eq!(g.colouring_from_factor(&h, &f).unwrap(), phi);
    }

    #[test]
    fn binomials() {
        assert_eq!(binomial(5, 2), 10);
        assert_eq!(binomial(3, 1), 3);
        assert_eq!(binomial(2, 3), 0);
    }
}
