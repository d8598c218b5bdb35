//! 3-uniform hypergraphs and their 1-in-3-colourings.
//!
//! Text format, one directive per line, `#` comments:
//!
//! ```text
//! hvertex x
//! hvertex y
//! hvertex z
//! hedge x y z
//! ```

use std::collections::{BTreeSet, HashMap};
use std::fmt::Write as _;

use rand::seq::SliceRandom;
use rand::Rng;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum HypergraphError {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("hypergraph has {size} vertices, cap is {cap}")]
    TooLarge { size: usize, cap: usize },
    #[error("edge {edge} repeats a vertex")]
    RepeatedVertex { edge: usize },
    #[error("unknown vertex `{0}`")]
    UnknownVertex(String),
    #[error("duplicate vertex `{0}`")]
    DuplicateVertex(String),
}

/// A 3-uniform hypergraph. Vertices and edges keep input order; the `i`-th
/// edge of a vertex is its `i`-th incident edge in edge order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Hypergraph3 {
    names: Vec<String>,
    edges: Vec<[usize; 3]>,
    incidence: Vec<Vec<usize>>,
}

impl Hypergraph3 {
    pub fn new<S: AsRef<str>>(vertices: &[S], edges: &[[S; 3]]) -> Result<Self, HypergraphError> {
        let mut index = HashMap::new();
        let mut names = Vec::new();
        for v in vertices {
            let v = v.as_ref();
            if index.insert(v.to_string(), names.len()).is_some() {
                return Err(HypergraphError::DuplicateVertex(v.to_string()));
            }
            names.push(v.to_string());
        }
        let mut ids = Vec::new();
        for e in edges {
            let mut t = [0; 3];
            for (slot, name) in t.iter_mut().zip(e) {
                *slot = *index
                    .get(name.as_ref())
                    .ok_or_else(|| HypergraphError::UnknownVertex(name.as_ref().to_string()))?;
            }
            ids.push(t);
        }
        Self::from_ids(names, ids)
    }

    pub fn from_ids(names: Vec<String>, edges: Vec<[usize; 3]>) -> Result<Self, HypergraphError> {
        let mut incidence = vec![Vec::new(); names.len()];
        for (i, e) in edges.iter().enumerate() {
            if e[0] == e[1] || e[1] == e[2] || e[0] == e[2] {
                return Err(HypergraphError::RepeatedVertex { edge: i });
            }
            for &v in e {
                incidence[v].push(i);
            }
        }
        Ok(Self { names, edges, incidence })
    }

    pub fn vertex_count(&self) -> usize {
        self.names.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn name(&self, v: usize) -> &str {
        &self.names[v]
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn edges(&self) -> &[[usize; 3]] {
        &self.edges
    }

    /// Edges containing `v`, in edge order.
    pub fn incidence(&self, v: usize) -> &[usize] {
        &self.incidence[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.incidence[v].len()
    }

    /// Common degree of all vertices, if there is one.
    pub fn regularity(&self) -> Option<usize> {
        let d = self.incidence.first().map_or(0, Vec::len);
        self.incidence.iter().all(|i| i.len() == d).then_some(d)
    }

    pub fn is_regular(&self, k: usize) -> bool {
        self.regularity() == Some(k) || (self.vertex_count() == 0)
    }

    /// Position (0-based) of edge `e` in the incidence order of `v`.
    pub fn position(&self, v: usize, e: usize) -> Option<usize> {
        self.incidence[v].iter().position(|&x| x == e)
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for n in &self.names {
            writeln!(out, "hvertex {n}").unwrap();
        }
        for e in &self.edges {
            writeln!(out, "hedge {} {} {}", self.names[e[0]], self.names[e[1]], self.names[e[2]]).unwrap();
        }
        out
    }
}

pub fn parse_hypergraph(text: &str) -> Result<Hypergraph3, HypergraphError> {
    let syntax = |line: usize, message: String| HypergraphError::Syntax { line, message };
    let mut vertices: Vec<String> = Vec::new();
    let mut seen = BTreeSet::new();
    let mut edges = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let tokens: Vec<&str> = raw.split('#').next().unwrap_or("").split_whitespace().collect();
        match tokens[..] {
            [] => {}
            ["hvertex", v] => {
                if !seen.insert(v.to_string()) {
                    return Err(syntax(line, format!("duplicate vertex `{v}`")));
                }
                vertices.push(v.to_string());
            }
            ["hedge", a, b, c] => {
                for v in [a, b, c] {
                    if !seen.contains(v) {
                        return Err(syntax(line, format!("unknown vertex `{v}`")));
                    }
                }
                if a == b || b == c || a == c {
                    return Err(syntax(line, "edge repeats a vertex".into()));
                }
                edges.push([a.to_string(), b.to_string(), c.to_string()]);
            }
            ["hvertex", ..] => return Err(syntax(line, "expected `hvertex <id>`".into())),
            ["hedge", ..] => return Err(syntax(line, "expected `hedge <a> <b> <c>`".into())),
            [other, ..] => return Err(syntax(line, format!("unknown directive `{other}`"))),
        }
    }
    Hypergraph3::new(&vertices, &edges)
}

/// Values of a 1-in-3-colouring, indexed by vertex; `true` is `+1`.
pub type OneInThree = Vec<bool>;

pub const DEFAULT_VERTEX_CAP: usize = 24;

pub fn is_one_in_three(h: &Hypergraph3, phi: &[bool]) -> bool {
    phi.len() == h.vertex_count() && h.edges().iter().all(|e| e.iter().filter(|&&v| phi[v]).count() == 1)
}

/// First 1-in-3-colouring in lexicographic order over the vertex order,
/// with `+1` before `-1`.
pub fn brute_1in3(h: &Hypergraph3, cap: usize) -> Result<Option<OneInThree>, HypergraphError> {
    let mut first = None;
    walk_1in3(h, cap, &mut |phi| {
        first = Some(phi.to_vec());
        false
    })?;
    Ok(first)
}

/// Number of 1-in-3-colourings.
pub fn count_1in3(h: &Hypergraph3, cap: usize) -> Result<usize, HypergraphError> {
    let mut count = 0;
    walk_1in3(h, cap, &mut |_| {
        count += 1;
        true
    })?;
    Ok(count)
}

/// Visit valid colourings in lexicographic order until `visit` returns false.
fn walk_1in3(h: &Hypergraph3, cap: usize, visit: &mut dyn FnMut(&[bool]) -> bool) -> Result<(), HypergraphError> {
    if h.vertex_count() > cap {
        return Err(HypergraphError::TooLarge { size: h.vertex_count(), cap });
    }
    // Per edge: number of +1 vertices and number of unassigned vertices.
    let mut plus = vec![0u8; h.edge_count()];
    let mut open = vec![3u8; h.edge_count()];
    let mut phi = vec![false; h.vertex_count()];
    fn go(
        h: &Hypergraph3,
        v: usize,
        phi: &mut Vec<bool>,
        plus: &mut [u8],
        open: &mut [u8],
        visit: &mut dyn FnMut(&[bool]) -> bool,
    ) -> bool {
        if v == h.vertex_count() {
            return visit(phi);
        }
        for value in [true, false] {
            let ok = h.incidence(v).iter().all(|&e| {
                let p = plus[e] + value as u8;
                p <= 1 && (p == 1 || open[e] > 1)
            });
            if !ok {
                continue;
            }
            phi[v] = value;
            for &e in h.incidence(v) {
                plus[e] += value as u8;
                open[e] -= 1;
            }
            let more = go(h, v + 1, phi, plus, open, visit);
            for &e in h.incidence(v) {
                plus[e] -= value as u8;
                open[e] += 1;
            }
            if !more {
                return false;
            }
        }
        true
    }
    go(h, 0, &mut phi, &mut plus, &mut open, visit);
    Ok(())
}

/// The complete 3-uniform hypergraph on `w, x, y, z` with edges
/// `{z,w,x}, {w,x,y}, {x,y,z}, {y,z,w}`.
pub fn k4_3() -> Hypergraph3 {
    Hypergraph3::new(
        &["w", "x", "y", "z"],
        &[["z", "w", "x"], ["w", "x", "y"], ["x", "y", "z"], ["y", "z", "w"]],
    )
    .expect("valid")
}

/// A 3-regular instance on `u1..u3, v1..v6` in which every edge holds one
/// `u` and two `v`s, so setting exactly the `u`s to `+1` is a colouring.
pub fn positive9() -> Hypergraph3 {
    let v = ["u1", "u2", "u3", "v1", "v2", "v3", "v4", "v5", "v6"];
    let e = [
        ["u1", "v1", "v2"],
        ["u1", "v3", "v4"],
        ["u1", "v5", "v6"],
        ["u2", "v1", "v3"],
        ["u2", "v2", "v5"],
        ["u2", "v4", "v6"],
        ["u3", "v1", "v4"],
        ["u3", "v2", "v6"],
        ["u3", "v3", "v5"],
    ];
    Hypergraph3::new(&v, &e).expect("valid")
}

fn numbered(n: usize) -> Vec<String> {
    (1..=n).map(|i| format!("h{i}")).collect()
}

/// Every simple `k`-regular 3-uniform hypergraph on `n` labelled vertices,
/// with edges listed in lexicographic order of their triples.
pub fn regular_hypergraphs(n: usize, k: usize) -> Vec<Hypergraph3> {
    let triples: Vec<[usize; 3]> = (0..n)
        .flat_map(|a| (a + 1..n).flat_map(move |b| (b + 1..n).map(move |c| [a, b, c])))
        .collect();
    let mut out = Vec::new();
    if (n * k) % 3 != 0 {
        return out;
    }
    let mut deg = vec![0usize; n];
    let mut chosen = Vec::new();
    // Each edge is added so that its smallest vertex is the smallest vertex
    // still below degree k.
    fn go(
        triples: &[[usize; 3]],
        start: usize,
        n: usize,
        k: usize,
        deg: &mut [usize],
        chosen: &mut Vec<[usize; 3]>,
        out: &mut Vec<Hypergraph3>,
    ) {
        let Some(low) = (0..n).find(|&v| deg[v] < k) else {
            out.push(Hypergraph3::from_ids(numbered(n), chosen.clone()).expect("distinct"));
            return;
        };
        for (i, t) in triples.iter().enumerate().skip(start) {
            if t[0] > low {
                break;
            }
            if t[0] < low || t.iter().any(|&v| deg[v] >= k) {
                continue;
            }
            for &v in t {
                deg[v] += 1;
            }
            chosen.push(*t);
            go(triples, i + 1, n, k, deg, chosen, out);
            chosen.pop();
            for &v in t {
                deg[v] -= 1;
            }
        }
    }
    go(&triples, 0, n, k, &mut deg, &mut chosen, &mut out);
    out
}

/// Edge multiset under a vertex relabelling, sorted: equal for isomorphic
/// hypergraphs when minimised over all relabellings.
pub fn canonical_form(h: &Hypergraph3) -> Vec<[usize; 3]> {
    let n = h.vertex_count();
    let mut perm: Vec<usize> = (0..n).collect();
    let mut best: Option<Vec<[usize; 3]>> = None;
    loop {
        let mut edges: Vec<[usize; 3]> = h
            .edges()
            .iter()
            .map(|e| {
                let mut t = [perm[e[0]], perm[e[1]], perm[e[2]]];
                t.sort_unstable();
                t
            })
            .collect();
        edges.sort_unstable();
        if best.as_ref().map_or(true, |b| edges < *b) {
            best = Some(edges);
        }
        if !next_permutation(&mut perm) {
            break;
        }
    }
    best.unwrap_or_default()
}

fn next_permutation(p: &mut [usize]) -> bool {
    let Some(i) = (1..p.len()).rev().find(|&i| p[i - 1] < p[i]) else { return false };
    let j = (i..p.len()).rev().find(|&j| p[j] > p[i - 1]).expect("exists");
    p.swap(i - 1, j);
    p[i..].reverse();
    true
}

/// One representative per isomorphism class (smallest canonical form).
pub fn regular_hypergraphs_up_to_iso(n: usize, k: usize) -> Vec<Hypergraph3> {
    let mut seen = BTreeSet::new();
    regular_hypergraphs(n, k)
        .into_iter()
        .filter_map(|h| {
            let c = canonical_form(&h);
            seen.insert(c.clone()).then(|| Hypergraph3::from_ids(numbered(n), c).expect("distinct"))
        })
        .collect()
}

/// A random simple `k`-regular 3-uniform hypergraph on `n` vertices, by
/// pairing vertex stubs and retrying on repeated vertices or edges.
pub fn random_regular_hypergraph(n: usize, k: usize, rng: &mut impl Rng) -> Option<Hypergraph3> {
    if (n * k) % 3 != 0 || n < 3 {
        return None;
    }
    for _ in 0..10_000 {
        let mut stubs: Vec<usize> = (0..n).flat_map(|v| std::iter::repeat(v).take(k)).collect();
        stubs.shuffle(rng);
        let mut edges: Vec<[usize; 3]> = stubs
            .chunks(3)
            .map(|c| {
                let mut t = [c[0], c[1], c[2]];
                t.sort_unstable();
                t
            })
            .collect();
        if edges.iter().any(|t| t[0] == t[1] || t[1] == t[2]) {
            continue;
        }
        edges.sort_unstable();
        if edges.windows(2).any(|w| w[0] == w[1]) {
            continue;
        }
        return Some(Hypergraph3::from_ids(numbered(n), edges).expect("distinct"));
    }
    None
}
