//! Python bindings: coloured graphs, pc-f-factor certificates, and the
//! hardness gadgets.

use std::collections::HashMap;

use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;

use pcf_core::certificate::{certify_via_witness, find_pc_factor, Certificate as CoreCertificate, SearchLimits};
use pcf_core::factor::{is_distance_d_factor, is_pc_factor, is_rc_factor};
use pcf_core::format::{export_dot, parse_ecg, serialize_ecg};
use pcf_core::gadget::{build_gf, build_gfc};
use pcf_core::harness::{equivalence_harness, HarnessConfig};
use pcf_core::hypergraph::{brute_1in3, parse_hypergraph, Hypergraph3, DEFAULT_VERTEX_CAP};
use pcf_core::matching::perfect_matching;
use pcf_core::reduction::{build_d2c_gadget, build_rc_gadget};
use pcf_core::search::{distance_factor_search, rc_factor_search, SearchCaps};
use pcf_core::{ColouredGraph as CoreGraph, DegreeSpec, EdgeSet, RawGraph};

fn value_err(e: impl std::fmt::Display) -> PyErr {
    PyValueError::new_err(e.to_string())
}

type NamedEdge = (String, String, u32);

fn named_edges(g: &CoreGraph, edges: &EdgeSet) -> Vec<NamedEdge> {
    let graph = g.graph();
    edges
        .iter()
        .map(|e| {
            let (u, v) = graph.endpoints(e);
            (graph.name(u).to_string(), graph.name(v).to_string(), g.colour(e))
        })
        .collect()
}

/// An edge-coloured simple graph with a degree target on every vertex.
#[pyclass(frozen, module = "pcfactor")]
struct ColouredGraph {
    g: CoreGraph,
    f: DegreeSpec,
}

impl ColouredGraph {
    fn edge_set(&self, edges: Vec<(String, String)>) -> PyResult<EdgeSet> {
        EdgeSet::from_names(self.g.graph(), edges.iter().map(|(a, b)| (a.as_str(), b.as_str()))).map_err(value_err)
    }

    fn vertex(&self, name: &str) -> PyResult<usize> {
        self.g.graph().vertex_id(name).map_err(value_err)
    }
}

#[pymethods]
impl ColouredGraph {
    #[new]
    #[pyo3(signature = (k, vertices, edges, f=None))]
    fn new(k: u32, vertices: Vec<String>, edges: Vec<NamedEdge>, f: Option<HashMap<String, usize>>) -> PyResult<Self> {
        let raw = RawGraph { k, vertices, edges };
        let g = raw.build().map_err(value_err)?;
        let f = f.unwrap_or_default();
        let values = g.graph().names().iter().map(|n| f.get(n).copied().unwrap_or(0)).collect();
        Ok(Self { g, f: DegreeSpec::new(values) })
    }

    #[staticmethod]
    fn from_ecg(text: &str) -> PyResult<Self> {
        let inst = parse_ecg(text).map_err(value_err)?;
        Ok(Self { g: inst.graph, f: inst.f })
    }

    fn to_ecg(&self) -> String {
        serialize_ecg(&self.g, &self.f)
    }

    fn to_dot(&self) -> String {
        export_dot(&self.g, Some(&self.f), None)
    }

    #[getter]
    fn k(&self) -> u32 {
        self.g.k()
    }

    #[getter]
    fn vertices(&self) -> Vec<String> {
        self.g.graph().names().to_vec()
    }

    #[getter]
    fn edges(&self) -> Vec<NamedEdge> {
        named_edges(&self.g, &(0..self.g.edge_count()).collect())
    }

    #[getter]
    fn f(&self) -> HashMap<String, usize> {
        let graph = self.g.graph();
        graph.vertices().map(|v| (graph.name(v).to_string(), self.f.get(v))).collect()
    }

    fn colour_set(&self, v: &str) -> PyResult<Vec<u32>> {
        Ok(self.g.colour_set(self.vertex(v)?))
    }

    fn colour_degree(&self, v: &str) -> PyResult<usize> {
        Ok(self.g.colour_degree(self.vertex(v)?))
    }

    fn is_properly_coloured(&self) -> bool {
        self.g.is_properly_coloured()
    }

    fn is_pc_factor(&self, edges: Vec<(String, String)>) -> PyResult<bool> {
        Ok(is_pc_factor(&self.g, &self.f, &self.edge_set(edges)?))
    }

    fn is_rc_factor(&self, edges: Vec<(String, String)>, r: usize) -> PyResult<bool> {
        Ok(is_rc_factor(&self.g, &self.edge_set(edges)?, r))
    }

    #[pyo3(signature = (edges, r, d=2))]
    fn is_distance_factor(&self, edges: Vec<(String, String)>, r: usize, d: usize) -> PyResult<bool> {
        Ok(is_distance_d_factor(&self.g, &self.edge_set(edges)?, r, d))
    }

    /// Vertex and edge counts of `G_f^c` (or `G_f` when `coloured` is false),
    /// and whether it has a perfect matching.
    #[pyo3(signature = (coloured=true))]
    fn gadget_summary(&self, coloured: bool) -> PyResult<(usize, usize, bool)> {
        let gg = if coloured { build_gfc(&self.g, &self.f) } else { build_gf(self.g.graph(), &self.f) }
            .map_err(value_err)?;
        let graph = gg.graph();
        Ok((graph.vertex_count(), graph.edge_count(), perfect_matching(graph).is_some()))
    }

    fn __len__(&self) -> usize {
        self.g.vertex_count()
    }

    fn __repr__(&self) -> String {
        format!("ColouredGraph(vertices={}, edges={}, k={})", self.g.vertex_count(), self.g.edge_count(), self.g.k())
    }
}

/// Outcome of a pc-f-factor query: a factor, a palette-system certificate,
/// or an infeasible degree.
#[pyclass(frozen, module = "pcfactor")]
struct Certificate {
    cert: CoreCertificate,
    json: String,
    factor: Option<Vec<NamedEdge>>,
}

impl Certificate {
    fn wrap(graph: &ColouredGraph, cert: CoreCertificate) -> Self {
        let json = cert.to_json(&graph.g, &graph.f, None).to_string();
        let factor = match &cert {
            CoreCertificate::Positive { factor } => Some(named_edges(&graph.g, factor)),
            _ => None,
        };
        Self { cert, json, factor }
    }
}

#[pymethods]
impl Certificate {
    #[getter]
    fn exists(&self) -> bool {
        self.cert.is_positive()
    }

    #[getter]
    fn factor(&self) -> Option<Vec<NamedEdge>> {
        self.factor.clone()
    }

    fn to_json(&self) -> String {
        self.json.clone()
    }

    /// Re-derive the certificate's claims against `graph`.
    fn verify(&self, graph: &ColouredGraph) -> bool {
        self.cert.verify(&graph.g, &graph.f).is_ok()
    }

    fn __repr__(&self) -> String {
        format!("Certificate({})", self.json)
    }
}

#[pyfunction]
#[pyo3(signature = (graph, max_palettes=None))]
fn find_factor(graph: &ColouredGraph, max_palettes: Option<u128>) -> PyResult<Certificate> {
    let limits = max_palettes.map_or_else(SearchLimits::default, |m| SearchLimits { max_palettes: m });
    let cert = find_pc_factor(&graph.g, &graph.f, limits).map_err(|e| PyRuntimeError::new_err(e.to_string()))?;
    Ok(Certificate::wrap(graph, cert))
}

#[pyfunction]
fn certify(graph: &ColouredGraph) -> Certificate {
    Certificate::wrap(graph, certify_via_witness(&graph.g, &graph.f))
}

/// Parse a certificate JSON string against `graph`.
#[pyfunction]
fn load_certificate(graph: &ColouredGraph, text: &str) -> PyResult<Certificate> {
    let value: serde_json::Value = serde_json::from_str(text).map_err(value_err)?;
    let cert = CoreCertificate::from_json(&graph.g, &graph.f, &value).map_err(value_err)?;
    Ok(Certificate::wrap(graph, cert))
}

/// A 3-uniform hypergraph.
#[pyclass(frozen, module = "pcfactor")]
struct Hypergraph {
    h: Hypergraph3,
}

#[pymethods]
impl Hypergraph {
    #[new]
    fn new(vertices: Vec<String>, edges: Vec<[String; 3]>) -> PyResult<Self> {
        Ok(Self { h: Hypergraph3::new(&vertices, &edges).map_err(value_err)? })
    }

    #[staticmethod]
    fn from_text(text: &str) -> PyResult<Self> {
        Ok(Self { h: parse_hypergraph(text).map_err(value_err)? })
    }

    fn to_text(&self) -> String {
        self.h.to_text()
    }

    #[getter]
    fn vertex_count(&self) -> usize {
        self.h.vertex_count()
    }

    #[getter]
    fn edge_count(&self) -> usize {
        self.h.edge_count()
    }

    /// The first 1-in-3-colouring in lexicographic order, as the set of
    /// vertices coloured +1, or `None`.
    fn one_in_three(&self) -> PyResult<Option<Vec<String>>> {
        let phi = brute_1in3(&self.h, DEFAULT_VERTEX_CAP).map_err(value_err)?;
        Ok(phi.map(|phi| {
            phi.iter().enumerate().filter(|(_, &p)| p).map(|(v, _)| self.h.name(v).to_string()).collect()
        }))
    }

    fn rc_gadget(&self, r: usize) -> PyResult<ColouredGraph> {
        let g = build_rc_gadget(&self.h, r).map_err(value_err)?.graph;
        let f = DegreeSpec::constant(g.vertex_count(), r);
        Ok(ColouredGraph { g, f })
    }

    fn d2c_gadget(&self, r: usize) -> PyResult<ColouredGraph> {
        let g = build_d2c_gadget(&self.h, r).map_err(value_err)?.graph;
        let f = DegreeSpec::constant(g.vertex_count(), r);
        Ok(ColouredGraph { g, f })
    }
}

/// Exhaustive rainbow-component `r`-factor search.
#[pyfunction]
fn solve_rc(graph: &ColouredGraph, r: usize) -> PyResult<Option<Vec<NamedEdge>>> {
    let found = rc_factor_search(&graph.g, r, SearchCaps::default()).map_err(|e| PyRuntimeError::new_err(e.to_string()))?;
    Ok(found.map(|f| named_edges(&graph.g, &f)))
}

/// Exhaustive distance-`d`-coloured `r`-factor search.
#[pyfunction]
#[pyo3(signature = (graph, r, d=2))]
fn solve_distance(graph: &ColouredGraph, r: usize, d: usize) -> PyResult<Option<Vec<NamedEdge>>> {
    let found =
        distance_factor_search(&graph.g, r, d, SearchCaps::default()).map_err(|e| PyRuntimeError::new_err(e.to_string()))?;
    Ok(found.map(|f| named_edges(&graph.g, &f)))
}

#[pyfunction]
fn kneser(n: usize, k: usize) -> PyResult<ColouredGraph> {
    let plain = pcf_core::kneser::kneser(n, k).map_err(value_err)?;
    let m = plain.edge_count();
    let f = DegreeSpec::new(plain.vertices().map(|v| plain.degree(v)).collect());
    Ok(ColouredGraph { g: CoreGraph::from_graph(plain, vec![1; m], 1), f })
}

#[pyfunction]
fn canonical_colouring(r: usize) -> PyResult<ColouredGraph> {
    let g = pcf_core::kneser::canonical_colouring(r).map_err(value_err)?;
    let f = DegreeSpec::constant(g.vertex_count(), r);
    Ok(ColouredGraph { g, f })
}

/// Run the equivalence sweep and return its report as JSON.
#[pyfunction]
#[pyo3(signature = (n=3, k=2, fmax=2, sample=0, sample_n=5, sample_k=3, seed=0x5eed))]
fn equivalence_report(n: usize, k: u32, fmax: usize, sample: usize, sample_n: usize, sample_k: u32, seed: u64) -> String {
    let config = HarnessConfig { n, k, fmax, sample, sample_n, sample_k, seed };
    serde_json::to_string(&equivalence_harness(&config)).expect("serialisable")
}

#[pymodule]
fn pcfactor(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<ColouredGraph>()?;
    m.add_class::<Certificate>()?;
    m.add_class::<Hypergraph>()?;
    m.add_function(wrap_pyfunction!(find_factor, m)?)?;
    m.add_function(wrap_pyfunction!(certify, m)?)?;
    m.add_function(wrap_pyfunction!(load_certificate, m)?)?;
    m.add_function(wrap_pyfunction!(solve_rc, m)?)?;
    m.add_function(wrap_pyfunction!(solve_distance, m)?)?;
    m.add_function(wrap_pyfunction!(kneser, m)?)?;
    m.add_function(wrap_pyfunction!(canonical_colouring, m)?)?;
    m.add_function(wrap_pyfunction!(equivalence_report, m)?)?;
    Ok(())
}
