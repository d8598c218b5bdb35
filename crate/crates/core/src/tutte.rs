//! Tutte's f-factor conditions, used as oracles for the coloured theory.

use serde::Serialize;

use crate::gadget::{build_gf, GadgetError, GadgetGraph};
use crate::graph::{DegreeSpec, Graph, VertexId};

/// Result of checking `odd(G_f - X_{S,T}) <= |X_{S,T}|` for one pair.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GadgetCondition {
    pub x: Vec<VertexId>,
    pub odd: usize,
    pub holds: bool,
}

/// `X_{S,T}`: all of `S_u` for `u ∈ S` and all of `T_u` for `u ∈ T`.
pub fn x_st(gg: &GadgetGraph, s: &[VertexId], t: &[VertexId]) -> Vec<VertexId> {
    let mut x: Vec<VertexId> = s
        .iter()
        .flat_map(|&u| gg.s_set(u).iter().copied())
        .chain(t.iter().flat_map(|&u| gg.t_set(u).iter().copied()))
        .collect();
    x.sort_unstable();
    x
}

pub fn tutte_f_condition(
    graph: &Graph,
    f: &DegreeSpec,
    s: &[VertexId],
    t: &[VertexId],
) -> Result<GadgetCondition, GadgetError> {
    let gg = build_gf(graph, f)?;
    Ok(gadget_condition(&gg, s, t))
}

pub fn gadget_condition(gg: &GadgetGraph, s: &[VertexId], t: &[VertexId]) -> GadgetCondition {
    let x = x_st(gg, s, t);
    let odd = gg.graph().odd_components(&x);
    GadgetCondition { holds: odd <= x.len(), odd, x }
}

/// Which reading of the deficiency inequality to evaluate.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum DeficiencyVariant {
    /// `Σ_S f + Σ_T (d_{G-S}(u) - f(u)) >= h(S, T)`.
    Classical,
    /// `Σ_S f - Σ_T (f(u) + d_S(u)) >= h(S, T)`, with `d_S(u)` the number of
    /// neighbours of `u` in `S`.
    AsPrinted,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Deficiency {
    pub gamma: i64,
    pub h: usize,
    pub holds: bool,
}

/// Number of components `C` of `G - S - T` with `Σ_C f + e(C, T)` odd.
pub fn h_st(graph: &Graph, f: &DegreeSpec, s: &[VertexId], t: &[VertexId]) -> usize {
    let n = graph.vertex_count();
    let mut removed = vec![false; n];
    let mut in_t = vec![false; n];
    for &v in s {
        removed[v] = true;
    }
    for &v in t {
        removed[v] = true;
        in_t[v] = true;
    }
    let comps = graph.components_without(&removed);
    let mut parity = vec![0usize; comps.count()];
    for v in graph.vertices().filter(|&v| !removed[v]) {
        let c = comps.label[v].expect("kept vertex");
        parity[c] += f.get(v) + graph.neighbours(v).filter(|&w| in_t[w]).count();
    }
    parity.iter().filter(|&&p| p % 2 == 1).count()
}

/// `γ(S, T) = lhs - h(S, T)` under the chosen reading.
pub fn deficiency_form(
    graph: &Graph,
    f: &DegreeSpec,
    s: &[VertexId],
    t: &[VertexId],
    variant: DeficiencyVariant,
) -> Deficiency {
    let mut in_s = vec![false; graph.vertex_count()];
    for &v in s {
        in_s[v] = true;
    }
    let sum_s: i64 = s.iter().map(|&v| f.get(v) as i64).sum();
    let sum_t: i64 = t
        .iter()
        .map(|&u| {
            let d_s = graph.neighbours(u).filter(|&w| in_s[w]).count() as i64;
            let fu = f.get(u) as i64;
            match variant {
                DeficiencyVariant::Classical => graph.degree(u) as i64 - d_s - fu,
                DeficiencyVariant::AsPrinted => -(fu + d_s),
            }
        })
        .sum();
    let h = h_st(graph, f, s, t);
    let gamma = sum_s + sum_t - h as i64;
    Deficiency { gamma, h, holds: gamma >= 0 }
}

/// Every ordered pair of disjoint subsets `(S, T)` of `0..n`, in base-3
/// counting order (vertex 0 varies fastest).
pub fn disjoint_pairs(n: usize) -> impl Iterator<Item = (Vec<VertexId>, Vec<VertexId>)> {
    let total = 3usize.pow(n as u32);
    (0..total).map(move |mut code| {
        let (mut s, mut t) = (Vec::new(), Vec::new());
        for v in 0..n {
            match code % 3 {
                1 => s.push(v),
                2 => t.push(v),
                _ => {}
            }
            code /= 3;
        }
        (s, t)
    })
}

/// First pair failing the deficiency inequality, if any.
pub fn deficiency_violation(
    graph: &Graph,
    f: &DegreeSpec,
    variant: DeficiencyVariant,
) -> Option<(Vec<VertexId>, Vec<VertexId>, Deficiency)> {
    disjoint_pairs(graph.vertex_count()).find_map(|(s, t)| {
        let d = deficiency_form(graph, f, &s, &t, variant);
        (!d.holds).then_some((s, t, d))
    })
}

/// First pair failing the gadget condition, if any.
pub fn gadget_violation(gg: &GadgetGraph) -> Option<(Vec<VertexId>, Vec<VertexId>, GadgetCondition)> {
    disjoint_pairs(gg.source_count()).find_map(|(s, t)| {
        let c = gadget_condition(gg, &s, &t);
        (!c.holds).then_some((s, t, c))
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::factor::brute_f_factor;

    #[test]
    fn c4_with_f_two_holds_everywhere() {
        let c4 = Graph::from_edges(4, &[(0, 1), (1, 2), (2, 3), (0, 3)]);
        let f = DegreeSpec::constant(4, 2);
        assert!(brute_f_factor(&c4, &f).is_some());
        assert!(deficiency_violation(&c4, &f, DeficiencyVariant::Classical).is_none());
        let gg = build_gf(&c4, &f).unwrap();
        assert!(gadget_violation(&gg).is_none());
    }

    #[test]
    fn triangle_has_no_one_factor() {
        let k3 = Graph::from_edges(3, &[(0, 1), (1, 2), (0, 2)]);
        let f = DegreeSpec::constant(3, 1);
        let d = deficiency_form(&k3, &f, &[], &[], DeficiencyVariant::Classical);
        assert_eq!(d, Deficiency { gamma: -1, h: 1, holds: false });
        assert!(!tutte_f_condition(&k3, &f, &[], &[]).unwrap().holds);
        let gg = build_gf(&k3, &f).unwrap();
        assert!(gadget_violation(&gg).is_some());
    }

    #[test]
    fn s_is_everything() {
        let k3 = Graph::from_edges(3, &[(0, 1), (1, 2), (0, 2)]);
        let f = DegreeSpec::constant(3, 1);
        let c = tutte_f_condition(&k3, &f, &[0, 1, 2], &[]).unwrap();
        assert_eq!(c.x.len(), 6);
        // The three T-singletons are left isolated.
        assert_eq!(c.odd, 3);
        assert!(c.holds);
    }

    #[test]
    fn pair_enumeration_counts() {
        assert_eq!(disjoint_pairs(3).count(), 27);
        assert!(disjoint_pairs(3).all(|(s, t)| s.iter().all(|v| !t.contains(v))));
    }

    #[test]
    fn printed_reading_differs_from_classical() {
        let k2 = Graph::from_edges(2, &[(0, 1)]);
        let f = DegreeSpec::constant(2, 1);
        // T = {0}: classical 0 + (1 - 1) - h, printed 0 - (1 + 0) - h.
        let classical = deficiency_form(&k2, &f, &[], &[0], DeficiencyVariant::Classical);
        let printed = deficiency_form(&k2, &f, &[], &[0], DeficiencyVariant::AsPrinted);
        assert_eq!(classical.h, 0);
        assert!(classical.holds);
        assert!(!printed.holds);
    }
}
