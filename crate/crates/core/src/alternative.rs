//! The split-and-twin form of the palette condition.
//!
//! For a palette system `(S, T, W)` the graph `G_S` is obtained from `G` by
//! deleting `S`, colour-splitting each `T^A` vertex and dropping its copies
//! for colours in `A`, and removing the `A`-coloured edges at each `W^A`
//! vertex, twinning it when `f + |A|` is even. The condition compares the
//! number `h` of odd components of `G_S` against a weighted size of the
//! palette.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::graph::{Colour, ColouredGraph, DegreeSpec, Graph, VertexId};
use crate::palette::{PaletteError, PaletteSystem, Role};

/// How vertices outside `S ∪ T ∪ W` are treated when building `G_S`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum FreeVertexRule {
    /// Leave free vertices untouched.
    Literal,
    /// Treat a free vertex like `W^∅`: twin it when `f` is even.
    ParityCorrected,
}

impl FreeVertexRule {
    pub const ALL: [FreeVertexRule; 2] = [FreeVertexRule::Literal, FreeVertexRule::ParityCorrected];

    pub fn name(self) -> &'static str {
        match self {
            FreeVertexRule::Literal => "literal",
            FreeVertexRule::ParityCorrected => "parity-corrected",
        }
    }
}

/// Copies of a source vertex in `G_S`, keyed by the colour they carry
/// (`None` when the vertex is not split).
type Copies = BTreeMap<Option<Colour>, Vec<VertexId>>;

/// Build `G_S`. Copies are named `y`, `y.<colour>` for split vertices and
/// `y.0`, `y.1` for twins.
pub fn build_gs(
    g: &ColouredGraph,
    f: &DegreeSpec,
    p: &PaletteSystem,
    rule: FreeVertexRule,
) -> Result<Graph, PaletteError> {
    p.validate(g, f)?;
    Ok(build_gs_unchecked(g, f, p, rule))
}

/// [`build_gs`] without palette validation, for palettes from the
/// per-vertex enumeration (whose bounds are never looser than the global
/// ones).
pub fn build_gs_unchecked(g: &ColouredGraph, f: &DegreeSpec, p: &PaletteSystem, rule: FreeVertexRule) -> Graph {
    let src = g.graph();
    let mut out = Graph::new();
    let mut copies: Vec<Copies> = vec![Copies::new(); src.vertex_count()];
    let add = |out: &mut Graph, name: String| out.add_vertex(name).expect("fresh names");
    let twin = |out: &mut Graph, y: VertexId| {
        let a = add(out, format!("{}.0", src.name(y)));
        let b = add(out, format!("{}.1", src.name(y)));
        out.add_edge(a, b).expect("fresh pair");
        vec![a, b]
    };
    for y in src.vertices() {
        let fy = f.get(y);
        match p.role(y) {
            Role::S => {}
            Role::T(a) => {
                for c in g.colour_set(y) {
                    if !a.contains(&c) {
                        let v = add(&mut out, format!("{}.{}", src.name(y), c));
                        copies[y].insert(Some(c), vec![v]);
                    }
                }
            }
            Role::W(a) => {
                let vs = if (fy + a.len()) % 2 == 0 {
                    twin(&mut out, y)
                } else {
                    vec![add(&mut out, src.name(y).to_string())]
                };
                copies[y].insert(None, vs);
            }
            Role::Free => {
                let vs = if rule == FreeVertexRule::ParityCorrected && fy % 2 == 0 {
                    twin(&mut out, y)
                } else {
                    vec![add(&mut out, src.name(y).to_string())]
                };
                copies[y].insert(None, vs);
            }
        }
    }
    let ends = |y: VertexId, c: Colour| -> &[VertexId] {
        if let Role::W(a) = p.role(y) {
            if a.contains(&c) {
                return &[];
            }
        }
        copies[y]
            .get(&Some(c))
            .or_else(|| copies[y].get(&None))
            .map(Vec::as_slice)
            .unwrap_or(&[])
    };
    for (e, &(u, v)) in src.edges().iter().enumerate() {
        let c = g.colour(e);
        for &a in ends(u, c) {
            for &b in ends(v, c) {
                out.add_edge(a, b).expect("copies of distinct vertices");
            }
        }
    }
    out
}

/// Both sides of the palette inequality.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct PaletteInequality {
    pub lhs: usize,
    pub h: usize,
}

impl PaletteInequality {
    pub fn holds(&self) -> bool {
        self.lhs >= self.h
    }
}

/// `lhs = Σ_S f + Σ_{T^A} (d^c - f + |A|) + Σ_{W^A} |A|` and `h = odd(G_S)`.
pub fn palette_inequality(
    g: &ColouredGraph,
    f: &DegreeSpec,
    p: &PaletteSystem,
    rule: FreeVertexRule,
) -> Result<PaletteInequality, PaletteError> {
    p.validate(g, f)?;
    Ok(palette_inequality_unchecked(g, f, p, rule))
}

pub fn palette_inequality_unchecked(
    g: &ColouredGraph,
    f: &DegreeSpec,
    p: &PaletteSystem,
    rule: FreeVertexRule,
) -> PaletteInequality {
    let lhs = palette_lhs(g, f, p);
    let h = gs_odd_count(g, f, p, rule);
    PaletteInequality { lhs, h }
}

/// `odd(G_S)` computed with a union-find over vertex copies, without
/// materialising `G_S`.
pub fn gs_odd_count(g: &ColouredGraph, f: &DegreeSpec, p: &PaletteSystem, rule: FreeVertexRule) -> usize {
    let src = g.graph();
    let n = src.vertex_count();
    // Each source vertex gets a block of copies: one per kept colour for a
    // split vertex, otherwise a single representative of weight 1 or 2.
    let mut first = vec![0usize; n + 1];
    let mut weight = Vec::new();
    let roles: Vec<Role> = src.vertices().map(|v| p.role(v)).collect();
    let colours: Vec<Vec<Colour>> = src.vertices().map(|v| g.colour_set(v)).collect();
    for y in 0..n {
        first[y] = weight.len();
        let fy = f.get(y);
        match &roles[y] {
            Role::S => {}
            Role::T(a) => weight.extend(colours[y].iter().filter(|c| !a.contains(c)).map(|_| 1usize)),
            Role::W(a) => weight.push(if (fy + a.len()) % 2 == 0 { 2 } else { 1 }),
            Role::Free => weight.push(if rule == FreeVertexRule::ParityCorrected && fy % 2 == 0 { 2 } else { 1 }),
        }
    }
    first[n] = weight.len();
    let copy = |y: VertexId, c: Colour| -> Option<usize> {
        match &roles[y] {
            Role::S => None,
            Role::T(a) => {
                if a.contains(&c) {
                    return None;
                }
                let rank = colours[y].iter().filter(|&&d| d < c && !a.contains(&d)).count();
                Some(first[y] + rank)
            }
            Role::W(a) if a.contains(&c) => None,
            _ => Some(first[y]),
        }
    };
    let mut parent: Vec<usize> = (0..weight.len()).collect();
    fn find(parent: &mut [usize], mut x: usize) -> usize {
        while parent[x] != x {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        x
    }
    for (e, &(u, v)) in src.edges().iter().enumerate() {
        let c = g.colour(e);
        if let (Some(a), Some(b)) = (copy(u, c), copy(v, c)) {
            let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
            if ra != rb {
                parent[ra] = rb;
            }
        }
    }
    let mut size = vec![0usize; weight.len()];
    for i in 0..weight.len() {
        let r = find(&mut parent, i);
        size[r] += weight[i];
    }
    (0..weight.len()).filter(|&i| parent[i] == i && size[i] % 2 == 1).count()
}

pub fn palette_lhs(g: &ColouredGraph, f: &DegreeSpec, p: &PaletteSystem) -> usize {
    g.graph()
        .vertices()
        .map(|v| match p.role(v) {
            Role::Free => 0,
            Role::S => f.get(v),
            Role::T(a) => (g.colour_degree(v) + a.len()).saturating_sub(f.get(v)),
            Role::W(a) => a.len(),
        })
        .sum()
}

/// The `T_u` vertices of `S`-vertices, which are isolated in `G_f^c - X`:
/// `Σ_{u∈S} (d^c(u) - f(u))`.
pub fn isolated_s_remainder(g: &ColouredGraph, f: &DegreeSpec, p: &PaletteSystem) -> usize {
    p.s.iter().map(|&v| g.colour_degree(v).saturating_sub(f.get(v))).sum()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::RawGraph;

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
        (g, DegreeSpec::new(vec![1, 1, 1, 2]))
    }

    #[test]
    fn empty_palette_literal_is_the_input() {
        let (g, f) = star();
        let gs = build_gs(&g, &f, &PaletteSystem::default(), FreeVertexRule::Literal).unwrap();
        assert_eq!(gs.names(), g.graph().names());
        assert_eq!(gs.edges(), g.graph().edges());
        let ineq = palette_inequality(&g, &f, &PaletteSystem::default(), FreeVertexRule::Literal).unwrap();
        assert_eq!(ineq, PaletteInequality { lhs: 0, h: 0 });
    }

    #[test]
    fn star_parity_corrected_twins_the_centre() {
        let (g, f) = star();
        let gs = build_gs(&g, &f, &PaletteSystem::default(), FreeVertexRule::ParityCorrected).unwrap();
        assert_eq!(gs.vertex_count(), 5);
        assert_eq!(gs.components().count(), 1);
        let ineq = palette_inequality(&g, &f, &PaletteSystem::default(), FreeVertexRule::ParityCorrected).unwrap();
        assert_eq!(ineq, PaletteInequality { lhs: 0, h: 1 });
        assert!(!ineq.holds());
    }

    #[test]
    fn star_with_centre_deleted_fails() {
        let (g, f) = star();
        let z = g.graph().vertex("z").unwrap();
        let p = PaletteSystem::from_roles([(z, Role::S)]);
        for rule in FreeVertexRule::ALL {
            let ineq = palette_inequality(&g, &f, &p, rule).unwrap();
            assert_eq!(ineq, PaletteInequality { lhs: 2, h: 3 });
        }
    }

    #[test]
    fn split_and_restrict() {
        let (g, f) = star();
        let z = g.graph().vertex("z").unwrap();
        let split = PaletteSystem::from_roles([(z, Role::T([].into()))]);
        let gs = build_gs(&g, &f, &split, FreeVertexRule::Literal).unwrap();
        assert_eq!(gs.vertex_count(), 5);
        assert_eq!(gs.components().partition().len(), 2);

        let restrict = PaletteSystem::from_roles([(z, Role::W([1].into()))]);
        let gs = build_gs(&g, &f, &restrict, FreeVertexRule::Literal).unwrap();
        // f(z) + |A| = 3 is odd, so no twin; only z–c survives.
        assert_eq!(gs.vertex_count(), 4);
        assert_eq!(gs.edge_count(), 1);
        assert_eq!(palette_lhs(&g, &f, &restrict), 1);
    }

    #[test]
    fn invalid_palette_is_rejected() {
        let (g, f) = star();
        let a = g.graph().vertex("a").unwrap();
        let p = PaletteSystem::from_roles([(a, Role::W([2].into()))]);
        assert!(build_gs(&g, &f, &p, FreeVertexRule::Literal).is_err());
    }
}
