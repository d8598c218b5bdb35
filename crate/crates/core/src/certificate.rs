//! Deciding properly coloured f-factors with certificates.
//!
//! A positive answer carries the factor, found through a perfect matching of
//! the coloured gadget graph. A negative answer carries a palette system whose
//! gadget set `X` has more odd components in `G_f^c - X` than it has vertices.

use std::ops::ControlFlow;

use serde_json::json;
use thiserror::Error;

use crate::factor::is_pc_factor;
use crate::gadget::{build_gfc, GadgetError, GadgetGraph};
use crate::graph::{ColouredGraph, DegreeSpec, EdgeSet, Graph, VertexId};
use crate::matching::{perfect_matching, tutte_witness};
use crate::palette::{enumerate_palettes, x_of_palette, ColourSet, PaletteSystem, Role};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CertError {
    #[error("palette search cap exceeded: {total} palette systems > cap {cap}")]
    SearchCapExceeded { total: u128, cap: u128 },
    #[error("vertex set is not violating")]
    NotViolating,
    #[error("certificate rejected: {0}")]
    Rejected(String),
}

/// `odd(G - X) > |X|`.
pub fn is_violating(graph: &Graph, x: &[VertexId]) -> bool {
    graph.odd_components(x) > x.len()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Certificate {
    Positive { factor: EdgeSet },
    Negative { palette: PaletteSystem, x: Vec<VertexId>, odd_count: usize },
    InfeasibleDegree { vertex: VertexId, f: usize, colour_degree: usize },
}

impl Certificate {
    pub fn is_positive(&self) -> bool {
        matches!(self, Certificate::Positive { .. })
    }

    /// JSON form; gadget vertex names are resolved against a fresh gadget.
    pub fn to_json(&self, g: &ColouredGraph, f: &DegreeSpec, replay: Option<&str>) -> serde_json::Value {
        let graph = g.graph();
        match self {
            Certificate::Positive { factor } => json!({
                "verdict": "yes",
                "factor": factor.iter().map(|e| {
                    let (u, v) = graph.endpoints(e);
                    json!([graph.name(u), graph.name(v), g.colour(e)])
                }).collect::<Vec<_>>(),
            }),
            Certificate::Negative { palette, x, odd_count } => {
                let gg = build_gfc(g, f).expect("negative certificates come from feasible instances");
                let mut v = json!({
                    "verdict": "no",
                    "palette": palette.to_json(graph),
                    "x": x.iter().map(|&v| gg.graph().name(v)).collect::<Vec<_>>(),
                    "odd_count": odd_count,
                    "x_size": x.len(),
                });
                if let Some(r) = replay {
                    v["replay"] = r.into();
                }
                v
            }
            Certificate::InfeasibleDegree { vertex, f, colour_degree } => json!({
                "verdict": "no",
                "infeasible_degree": {
                    "vertex": graph.name(*vertex),
                    "f": f,
                    "colour_degree": colour_degree,
                },
            }),
        }
    }

    /// Parse the JSON form back, resolving names against `g`.
    pub fn from_json(g: &ColouredGraph, f: &DegreeSpec, value: &serde_json::Value) -> Result<Self, CertError> {
        let bad = |m: &str| CertError::Rejected(m.to_string());
        let graph = g.graph();
        if let Some(factor) = value.get("factor") {
            let mut set = EdgeSet::new();
            for item in factor.as_array().ok_or_else(|| bad("factor must be a list"))? {
                let (a, b) = (item[0].as_str(), item[1].as_str());
                let (Some(a), Some(b)) = (a, b) else { return Err(bad("factor edges are [u, v, colour]")) };
                let e = EdgeSet::from_names(graph, [(a, b)]).map_err(|e| bad(&e.to_string()))?;
                set.extend(e.iter());
            }
            return Ok(Certificate::Positive { factor: set });
        }
        if let Some(inf) = value.get("infeasible_degree") {
            let name = inf["vertex"].as_str().ok_or_else(|| bad("missing vertex"))?;
            let v = graph.vertex(name).ok_or_else(|| bad("unknown vertex"))?;
            return Ok(Certificate::InfeasibleDegree { vertex: v, f: f.get(v), colour_degree: g.colour_degree(v) });
        }
        let palette = PaletteSystem::from_json(graph, &value["palette"]).map_err(|e| bad(&e))?;
        let gg = build_gfc(g, f).map_err(|e| bad(&e.to_string()))?;
        let mut x = Vec::new();
        for name in value["x"].as_array().ok_or_else(|| bad("missing x"))? {
            let name = name.as_str().ok_or_else(|| bad("x entries are names"))?;
            x.push(gg.graph().vertex(name).ok_or_else(|| bad("unknown gadget vertex"))?);
        }
        x.sort_unstable();
        let odd_count = value["odd_count"].as_u64().ok_or_else(|| bad("missing odd_count"))? as usize;
        Ok(Certificate::Negative { palette, x, odd_count })
    }

    /// Re-derive everything the certificate claims from `g` and `f` alone.
    pub fn verify(&self, g: &ColouredGraph, f: &DegreeSpec) -> Result<(), CertError> {
        let reject = |m: String| Err(CertError::Rejected(m));
        match self {
            Certificate::Positive { factor } => {
                if is_pc_factor(g, f, factor) {
                    Ok(())
                } else {
                    reject("edge set is not a properly coloured f-factor".into())
                }
            }
            Certificate::InfeasibleDegree { vertex, .. } => {
                if f.get(*vertex) > g.colour_degree(*vertex) {
                    Ok(())
                } else {
                    reject(format!("f({}) does not exceed its colour degree", g.graph().name(*vertex)))
                }
            }
            Certificate::Negative { palette, x, odd_count } => {
                let gg = build_gfc(g, f).map_err(|e| CertError::Rejected(e.to_string()))?;
                let derived = x_of_palette(&gg, g, palette).map_err(|e| CertError::Rejected(e.to_string()))?;
                if &derived != x {
                    return reject("listed X differs from the palette's X".into());
                }
                let odd = gg.graph().odd_components(x);
                if odd != *odd_count {
                    return reject(format!("odd component count is {odd}, certificate says {odd_count}"));
                }
                if odd <= x.len() {
                    return reject(format!("odd({odd}) <= |X|({})", x.len()));
                }
                Ok(())
            }
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SearchLimits {
    /// Largest palette stream the exhaustive certificate search will scan.
    pub max_palettes: u128,
}

impl Default for SearchLimits {
    fn default() -> Self {
        Self { max_palettes: 20_000_000 }
    }
}

fn infeasible(g: &ColouredGraph, f: &DegreeSpec) -> Option<Certificate> {
    g.graph().vertices().find(|&v| f.get(v) > g.colour_degree(v)).map(|v| Certificate::InfeasibleDegree {
        vertex: v,
        f: f.get(v),
        colour_degree: g.colour_degree(v),
    })
}

/// First violating palette in stream order (smallest `|X|` first), if any.
pub fn find_violating_palette(
    g: &ColouredGraph,
    f: &DegreeSpec,
    gg: &GadgetGraph,
    limits: SearchLimits,
) -> Result<Option<(PaletteSystem, Vec<VertexId>, usize)>, CertError> {
    let stream = enumerate_palettes(g, f);
    let total = stream.total();
    if total > limits.max_palettes {
        return Err(CertError::SearchCapExceeded { total, cap: limits.max_palettes });
    }
    let found = for_each_palette_x(g, gg, stream, |p, x, odd| {
        if odd > x.len() {
            ControlFlow::Break((p.clone(), x.to_vec(), odd))
        } else {
            ControlFlow::Continue(())
        }
    });
    Ok(found)
}

/// Drive `visit` over palettes with their `X` and `odd(G_f^c - X)`.
pub fn for_each_palette_x<B>(
    g: &ColouredGraph,
    gg: &GadgetGraph,
    palettes: impl Iterator<Item = PaletteSystem>,
    mut visit: impl FnMut(&PaletteSystem, &[VertexId], usize) -> ControlFlow<B>,
) -> Option<B> {
    let mut mask = vec![false; gg.graph().vertex_count()];
    for p in palettes {
        let x = x_of_palette(gg, g, &p).expect("enumerated palettes are valid");
        for &v in &x {
            mask[v] = true;
        }
        let odd = gg.graph().odd_components_mask(&mask);
        for &v in &x {
            mask[v] = false;
        }
        if let ControlFlow::Break(b) = visit(&p, &x, odd) {
            return Some(b);
        }
    }
    None
}

/// Decide whether `g` has a properly coloured f-factor. Negative answers
/// carry the smallest violating palette system.
pub fn find_pc_factor(g: &ColouredGraph, f: &DegreeSpec, limits: SearchLimits) -> Result<Certificate, CertError> {
    if let Some(c) = infeasible(g, f) {
        return Ok(c);
    }
    let gg = build_gfc(g, f).expect("feasibility checked");
    if let Some(m) = perfect_matching(gg.graph()) {
        let factor = gg.lift_matching(&m).expect("perfect");
        debug_assert!(is_pc_factor(g, f, &factor));
        return Ok(Certificate::Positive { factor });
    }
    match find_violating_palette(g, f, &gg, limits)? {
        Some((palette, x, odd_count)) => Ok(Certificate::Negative { palette, x, odd_count }),
        None => unreachable!("no perfect matching but no violating palette system"),
    }
}

/// Like [`find_pc_factor`], but negative certificates come from a Tutte
/// witness of the gadget normalised into palette form, so no palette
/// enumeration is needed.
pub fn certify_via_witness(g: &ColouredGraph, f: &DegreeSpec) -> Certificate {
    if let Some(c) = infeasible(g, f) {
        return c;
    }
    let gg = build_gfc(g, f).expect("feasibility checked");
    match tutte_witness(gg.graph()) {
        None => {
            let m = perfect_matching(gg.graph()).expect("no witness means a perfect matching");
            Certificate::Positive { factor: gg.lift_matching(&m).expect("perfect") }
        }
        Some(x) => {
            let (x, palette) = normalize_violating(&gg, &x).expect("witness is violating");
            let odd_count = gg.graph().odd_components(&x);
            Certificate::Negative { palette, x, odd_count }
        }
    }
}

/// Gadget membership counts of `X` for one source vertex.
struct Local {
    in_s: usize,
    in_t: usize,
    s_len: usize,
    t_len: usize,
}

fn local(gg: &GadgetGraph, mask: &[bool], v: VertexId) -> Local {
    Local {
        in_s: gg.s_set(v).iter().filter(|&&x| mask[x]).count(),
        in_t: gg.t_set(v).iter().filter(|&&x| mask[x]).count(),
        s_len: gg.s_set(v).len(),
        t_len: gg.t_set(v).len(),
    }
}

/// Rewrite a violating set of `G_f^c` so that every gadget meets it in one of
/// the palette shapes, and read off the palette system.
///
/// For each source vertex `v` in turn:
/// 1. if `X` meets `T_v` but not as `T_v ⊆ X` with `|X ∩ S_v| <= f(v) - 2`,
///    drop `T_v` from `X`;
/// 2. if then `X` misses `T_v`, meets `S_v` in at least `f(v)` vertices but
///    does not contain `S_v`, add all of `S_v`.
///
/// Each step keeps `X` violating, and neither touches other gadgets.
pub fn normalize_violating(gg: &GadgetGraph, x: &[VertexId]) -> Result<(Vec<VertexId>, PaletteSystem), CertError> {
    let graph = gg.graph();
    if !is_violating(graph, x) {
        return Err(CertError::NotViolating);
    }
    let f = gg.f();
    let mut mask = graph.mask(x);
    for v in 0..gg.source_count() {
        let l = local(gg, &mask, v);
        let fv = f.get(v) as i64;
        if l.in_t > 0 && !(l.in_t == l.t_len && (l.in_s as i64) <= fv - 2) {
            for &t in gg.t_set(v) {
                mask[t] = false;
            }
            debug_assert!(graph.odd_components_mask(&mask) > mask.iter().filter(|&&b| b).count());
        }
        let l = local(gg, &mask, v);
        if l.in_t == 0 && l.in_s > 0 && l.in_s < l.s_len && l.in_s as i64 >= fv {
            for &s in gg.s_set(v) {
                mask[s] = true;
            }
            debug_assert!(graph.odd_components_mask(&mask) > mask.iter().filter(|&&b| b).count());
        }
    }
    let x: Vec<VertexId> = graph.vertices().filter(|&v| mask[v]).collect();
    if !is_violating(graph, &x) {
        return Err(CertError::NotViolating);
    }
    Ok((x.clone(), extract_palette(gg, &mask)))
}

/// Read a palette system off a set `X` in normal form.
pub fn extract_palette_from(gg: &GadgetGraph, x: &[VertexId]) -> PaletteSystem {
    extract_palette(gg, &gg.graph().mask(x))
}

/// Read a palette system off a set that meets every gadget in palette shape.
fn extract_palette(gg: &GadgetGraph, mask: &[bool]) -> PaletteSystem {
    let mut p = PaletteSystem::default();
    for v in 0..gg.source_count() {
        let l = local(gg, mask, v);
        let colours: ColourSet = gg
            .s_set(v)
            .iter()
            .filter(|&&s| mask[s])
            .map(|&s| match gg.provenance(s) {
                crate::gadget::GadgetTag::S { key, .. } => key as u32,
                _ => unreachable!(),
            })
            .collect();
        let role = if l.t_len > 0 && l.in_t == l.t_len {
            Role::T(colours)
        } else if l.s_len > 0 && l.in_s == l.s_len {
            Role::S
        } else if l.in_s > 0 {
            Role::W(colours)
        } else {
            Role::Free
        };
        p.set_role(v, role);
    }
    p
}

/// The claims' postconditions for every source vertex of `gg`.
pub fn satisfies_normal_form(gg: &GadgetGraph, x: &[VertexId]) -> bool {
    let mask = gg.graph().mask(x);
    (0..gg.source_count()).all(|v| {
        let l = local(gg, &mask, v);
        let fv = gg.f().get(v) as i64;
        let claim1 = l.in_t == 0 || (l.in_t == l.t_len && l.in_s as i64 <= fv - 2);
        let claim2 = !(l.in_t == 0 && l.in_s > 0) || l.in_s == l.s_len || l.in_s as i64 <= fv - 1;
        claim1 && claim2
    })
}

impl From<GadgetError> for CertError {
    fn from(e: GadgetError) -> Self {
        CertError::Rejected(e.to_string())
    }
}
