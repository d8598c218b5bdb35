//! Palette systems `(S, T, W)` and the gadget vertex set `X` they induce.
//!
//! A vertex `u` of the source graph plays one of four roles:
//!
//! * free: contributes nothing to `X`;
//! * `S`: contributes all of `S_u`;
//! * `T^A`: contributes `T_u` and the S-vertices of the colours in `A`;
//! * `W^A` (`A` nonempty): contributes the S-vertices of the colours in `A`.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::gadget::{GadgetGraph, GadgetKind};
use crate::graph::{Colour, ColouredGraph, DegreeSpec, Graph, VertexId};

pub type ColourSet = BTreeSet<Colour>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PaletteError {
    #[error("vertex {0} appears in more than one of S, T, W")]
    Overlap(VertexId),
    #[error("colour {colour} is not at vertex {vertex}")]
    ColourNotAtVertex { vertex: VertexId, colour: Colour },
    #[error("colour set of vertex {vertex} has size {size}, bound is {bound}")]
    SizeBound { vertex: VertexId, size: usize, bound: i64 },
    #[error("W-set of vertex {0} is empty")]
    EmptyW(VertexId),
    #[error("vertex {0} is not in the graph")]
    UnknownVertex(VertexId),
    #[error("palette systems need a coloured gadget")]
    PlainGadget,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Role {
    Free,
    S,
    T(ColourSet),
    W(ColourSet),
}

impl Role {
    /// Number of gadget vertices this role puts into `X` at a vertex with
    /// colour degree `dc` and target `f`.
    pub fn cost(&self, dc: usize, f: usize) -> usize {
        match self {
            Role::Free => 0,
            Role::S => dc,
            Role::T(a) => dc.saturating_sub(f) + a.len(),
            Role::W(a) => a.len(),
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct PaletteSystem {
    pub s: BTreeSet<VertexId>,
    pub t: BTreeMap<VertexId, ColourSet>,
    pub w: BTreeMap<VertexId, ColourSet>,
}

impl PaletteSystem {
    pub fn is_empty(&self) -> bool {
        self.s.is_empty() && self.t.is_empty() && self.w.is_empty()
    }

    pub fn role(&self, v: VertexId) -> Role {
        if self.s.contains(&v) {
            Role::S
        } else if let Some(a) = self.t.get(&v) {
            Role::T(a.clone())
        } else if let Some(a) = self.w.get(&v) {
            Role::W(a.clone())
        } else {
            Role::Free
        }
    }

    pub fn set_role(&mut self, v: VertexId, role: Role) {
        self.s.remove(&v);
        self.t.remove(&v);
        self.w.remove(&v);
        match role {
            Role::Free => {}
            Role::S => {
                self.s.insert(v);
            }
            Role::T(a) => {
                self.t.insert(v, a);
            }
            Role::W(a) => {
                self.w.insert(v, a);
            }
        }
    }

    pub fn from_roles(roles: impl IntoIterator<Item = (VertexId, Role)>) -> Self {
        let mut p = Self::default();
        for (v, r) in roles {
            p.set_role(v, r);
        }
        p
    }

    /// Check the palette against `g` and `f` with the global size bounds
    /// `|A| <= fhat - 2` on T and `1 <= |A| <= fhat - 1` on W.
    pub fn validate(&self, g: &ColouredGraph, f: &DegreeSpec) -> Result<(), PaletteError> {
        let n = g.vertex_count();
        let fhat = f.fhat() as i64;
        let mut seen = BTreeSet::new();
        let members = self
            .s
            .iter()
            .copied()
            .chain(self.t.keys().copied())
            .chain(self.w.keys().copied());
        for v in members {
            if v >= n {
                return Err(PaletteError::UnknownVertex(v));
            }
            if !seen.insert(v) {
                return Err(PaletteError::Overlap(v));
            }
        }
        let check = |v: VertexId, a: &ColourSet, bound: i64| {
            let at = g.colour_set(v);
            if let Some(&c) = a.iter().find(|c| !at.contains(c)) {
                return Err(PaletteError::ColourNotAtVertex { vertex: v, colour: c });
            }
            if a.len() as i64 > bound {
                return Err(PaletteError::SizeBound { vertex: v, size: a.len(), bound });
            }
            Ok(())
        };
        for (&v, a) in &self.t {
            check(v, a, fhat - 2)?;
        }
        for (&v, a) in &self.w {
            if a.is_empty() {
                return Err(PaletteError::EmptyW(v));
            }
            check(v, a, fhat - 1)?;
        }
        Ok(())
    }

    /// `|X|` as the sum of per-role contributions.
    pub fn x_size(&self, g: &ColouredGraph, f: &DegreeSpec) -> usize {
        g.graph()
            .vertices()
            .map(|v| self.role(v).cost(g.colour_degree(v), f.get(v)))
            .sum()
    }

    pub fn to_json(&self, graph: &Graph) -> serde_json::Value {
        let name = |v: &VertexId| graph.name(*v).to_string();
        let map = |m: &BTreeMap<VertexId, ColourSet>| {
            m.iter()
                .map(|(v, a)| (name(v), serde_json::json!(a)))
                .collect::<serde_json::Map<_, _>>()
        };
        serde_json::json!({
            "S": self.s.iter().map(name).collect::<Vec<_>>(),
            "T": map(&self.t),
            "W": map(&self.w),
        })
    }

    pub fn from_json(graph: &Graph, value: &serde_json::Value) -> Result<Self, String> {
        let id = |s: &str| graph.vertex(s).ok_or_else(|| format!("unknown vertex `{s}`"));
        let mut p = Self::default();
        let list = value["S"].as_array().ok_or("palette needs an `S` array")?;
        for s in list {
            p.s.insert(id(s.as_str().ok_or("S entries are vertex names")?)?);
        }
        for (key, target) in [("T", &mut p.t), ("W", &mut p.w)] {
            let obj = value[key].as_object().ok_or(format!("palette needs a `{key}` object"))?;
            for (v, a) in obj {
                let set: ColourSet = serde_json::from_value(a.clone()).map_err(|e| e.to_string())?;
                target.insert(id(v)?, set);
            }
        }
        Ok(p)
    }
}

/// `X = X_S ∪ X_T ∪ X_W` as sorted gadget vertex ids.
pub fn x_of_palette(gg: &GadgetGraph, source: &ColouredGraph, p: &PaletteSystem) -> Result<Vec<VertexId>, PaletteError> {
    if gg.kind() != GadgetKind::Coloured {
        return Err(PaletteError::PlainGadget);
    }
    p.validate(source, gg.f())?;
    let mut x = Vec::new();
    for &u in &p.s {
        x.extend_from_slice(gg.s_set(u));
    }
    for (&u, a) in &p.t {
        x.extend_from_slice(gg.t_set(u));
        x.extend(a.iter().map(|&c| gg.s_vertex(u, c as usize).expect("validated")));
    }
    for (&u, a) in &p.w {
        x.extend(a.iter().map(|&c| gg.s_vertex(u, c as usize).expect("validated")));
    }
    x.sort_unstable();
    Ok(x)
}

/// Subsets of `colours` with size in `lo..=hi`, by size then lexicographically.
pub(crate) fn subsets(colours: &[Colour], lo: usize, hi: usize) -> Vec<ColourSet> {
    let mut out = Vec::new();
    for size in lo..=hi.min(colours.len()) {
        let mut pick: Vec<usize> = (0..size).collect();
        loop {
            out.push(pick.iter().map(|&i| colours[i]).collect());
            if !crate::matching::next_combination(&mut pick, colours.len()) {
                break;
            }
        }
    }
    out
}

/// The roles available to `v` under the per-vertex bounds
/// `|A| <= f(v) - 2` (T) and `1 <= |A| <= f(v) - 1` (W).
pub fn vertex_roles(g: &ColouredGraph, f: &DegreeSpec, v: VertexId) -> Vec<Role> {
    let colours = g.colour_set(v);
    let fv = f.get(v);
    let mut roles = vec![Role::Free, Role::S];
    if fv >= 2 {
        roles.extend(subsets(&colours, 0, fv - 2).into_iter().map(Role::T));
    }
    if fv >= 2 {
        roles.extend(subsets(&colours, 1, fv - 1).into_iter().map(Role::W));
    }
    roles
}

/// Streams every per-vertex-bounded palette system exactly once, ordered by
/// `|X|` ascending and then lexicographically by role index per vertex.
#[derive(Clone, Debug)]
pub struct PaletteEnumerator {
    roles: Vec<Vec<(Role, usize)>>,
    suffix_max: Vec<usize>,
    target: usize,
    max_total: usize,
    stack: Vec<usize>,
    cost: usize,
    fresh: bool,
    done: bool,
}

impl PaletteEnumerator {
    pub fn new(g: &ColouredGraph, f: &DegreeSpec) -> Self {
        let roles: Vec<Vec<(Role, usize)>> = g
            .graph()
            .vertices()
            .map(|v| {
                let dc = g.colour_degree(v);
                vertex_roles(g, f, v)
                    .into_iter()
                    .map(|r| {
                        let c = r.cost(dc, f.get(v).min(dc));
                        (r, c)
                    })
                    .collect()
            })
            .collect();
        let mut suffix_max = vec![0; roles.len() + 1];
        for i in (0..roles.len()).rev() {
            suffix_max[i] = suffix_max[i + 1] + roles[i].iter().map(|r| r.1).max().unwrap_or(0);
        }
        Self {
            max_total: suffix_max[0],
            roles,
            suffix_max,
            target: 0,
            stack: Vec::new(),
            cost: 0,
            fresh: true,
            done: false,
        }
    }

    /// Number of palettes the stream will yield.
    pub fn total(&self) -> u128 {
        self.roles.iter().map(|r| r.len() as u128).product()
    }

    /// `|X|` of the palettes currently being produced.
    pub fn current_size(&self) -> usize {
        self.target
    }

    fn palette(&self) -> PaletteSystem {
        PaletteSystem::from_roles(
            self.stack
                .iter()
                .enumerate()
                .map(|(v, &i)| (v, self.roles[v][i].0.clone())),
        )
    }

    /// Next assignment with cost exactly `target`, continuing from the
    /// current stack.
    fn advance(&mut self) -> bool {
        let n = self.roles.len();
        let mut start = 0;
        if !self.fresh {
            // resume after the last leaf
            match self.stack.pop() {
                None => return false,
                Some(i) => {
                    self.cost -= self.roles[self.stack.len()][i].1;
                    start = i + 1;
                }
            }
        }
        self.fresh = false;
        loop {
            let depth = self.stack.len();
            if depth == n {
                return true;
            }
            let found = (start..self.roles[depth].len()).find(|&i| {
                let c = self.cost + self.roles[depth][i].1;
                c <= self.target && self.target - c <= self.suffix_max[depth + 1]
            });
            match found {
                Some(i) => {
                    self.cost += self.roles[depth][i].1;
                    self.stack.push(i);
                    start = 0;
                }
                None => match self.stack.pop() {
                    None => return false,
                    Some(i) => {
                        self.cost -= self.roles[self.stack.len()][i].1;
                        start = i + 1;
                    }
                },
            }
        }
    }
}

impl Iterator for PaletteEnumerator {
    type Item = PaletteSystem;

    fn next(&mut self) -> Option<PaletteSystem> {
        while !self.done {
            if self.advance() {
                return Some(self.palette());
            }
            if self.target >= self.max_total {
                self.done = true;
            } else {
                self.target += 1;
                self.stack.clear();
                self.cost = 0;
                self.fresh = true;
            }
        }
        None
    }
}

pub fn enumerate_palettes(g: &ColouredGraph, f: &DegreeSpec) -> PaletteEnumerator {
    PaletteEnumerator::new(g, f)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gadget::build_gfc;
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
    fn single_isolated_vertex_has_two_palettes() {
        let g = RawGraph::new(1).vertex("v").build().unwrap();
        let all: Vec<_> = enumerate_palettes(&g, &DegreeSpec::new(vec![0])).collect();
        assert_eq!(all.len(), 2);
        assert!(all[0].is_empty());
        assert_eq!(all[1].s.len(), 1);
    }

    #[test]
    fn f_one_means_no_t_or_w() {
        let g = RawGraph::new(2)
            .vertex("a")
            .vertex("b")
            .vertex("c")
            .edge("a", "b", 1)
            .edge("b", "c", 2)
            .build()
            .unwrap();
        let f = DegreeSpec::constant(3, 1);
        let all: Vec<_> = enumerate_palettes(&g, &f).collect();
        assert_eq!(all.len(), 8);
        assert!(all.iter().all(|p| p.t.is_empty() && p.w.is_empty()));
    }

    #[test]
    fn stream_is_ordered_by_x_size_and_unique() {
        let (g, f) = star();
        let en = enumerate_palettes(&g, &f);
        let total = en.total();
        let all: Vec<_> = en.collect();
        assert_eq!(all.len() as u128, total);
        let sizes: Vec<_> = all.iter().map(|p| p.x_size(&g, &f)).collect();
        assert!(sizes.windows(2).all(|w| w[0] <= w[1]));
        let unique: BTreeSet<_> = all.iter().collect();
        assert_eq!(unique.len(), all.len());
    }

    #[test]
    fn x_of_palette_examples() {
        let (g, f) = star();
        let gg = build_gfc(&g, &f).unwrap();
        assert_eq!(x_of_palette(&gg, &g, &PaletteSystem::default()).unwrap(), Vec::<usize>::new());
        let z = g.graph().vertex("z").unwrap();
        let p = PaletteSystem::from_roles([(z, Role::W([1].into()))]);
        let x = x_of_palette(&gg, &g, &p).unwrap();
        assert_eq!(x.iter().map(|&v| gg.graph().name(v)).collect::<Vec<_>>(), ["z.s.1"]);
    }

    #[test]
    fn invalid_palettes_are_rejected() {
        let (g, f) = star();
        let gg = build_gfc(&g, &f).unwrap();
        let z = g.graph().vertex("z").unwrap();
        let a = g.graph().vertex("a").unwrap();
        let mut p = PaletteSystem::from_roles([(z, Role::W([3].into()))]);
        assert_eq!(
            x_of_palette(&gg, &g, &p),
            Err(PaletteError::ColourNotAtVertex { vertex: z, colour: 3 })
        );
        p = PaletteSystem::from_roles([(z, Role::W([1, 2].into()))]);
        assert!(matches!(x_of_palette(&gg, &g, &p), Err(PaletteError::SizeBound { .. })));
        p = PaletteSystem::from_roles([(z, Role::T([1].into()))]);
        assert!(matches!(x_of_palette(&gg, &g, &p), Err(PaletteError::SizeBound { bound: 0, .. })));
        p = PaletteSystem::from_roles([(a, Role::S)]);
        p.w.insert(a, [1].into());
        assert_eq!(x_of_palette(&gg, &g, &p), Err(PaletteError::Overlap(a)));
        p = PaletteSystem::from_roles([(z, Role::W(ColourSet::new()))]);
        assert_eq!(x_of_palette(&gg, &g, &p), Err(PaletteError::EmptyW(z)));
    }

    #[test]
    fn json_round_trip() {
        let (g, _) = star();
        let p = PaletteSystem::from_roles([(0, Role::S), (3, Role::W([2].into())), (1, Role::T(ColourSet::new()))]);
        let j = p.to_json(g.graph());
        assert_eq!(PaletteSystem::from_json(g.graph(), &j).unwrap(), p);
    }
}
