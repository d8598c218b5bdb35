//! The ECG text format, its JSON mirror, and DOT export.
//!
//! ```text
//! # comment
//! colours 3
//! vertex a f=1
//! vertex b f=1
//! edge a b 2
//! ```
//!
//! `colours` must be the first non-comment line and appear once. `f`
//! defaults to 0.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::{Colour, ColouredGraph, DegreeSpec, EdgeSet, Graph, RawGraph};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FormatError {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("json: {0}")]
    Json(String),
    #[error("{0}")]
    Graph(#[from] crate::graph::GraphError),
}

fn syntax(line: usize, message: impl Into<String>) -> FormatError {
    FormatError::Syntax { line, message: message.into() }
}

/// A parsed ECG file: the graph and its degree targets.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Instance {
    pub graph: ColouredGraph,
    pub f: DegreeSpec,
}

pub fn parse_ecg(text: &str) -> Result<Instance, FormatError> {
    let mut k: Option<Colour> = None;
    let mut f_by_name: BTreeMap<String, usize> = BTreeMap::new();
    let mut vertex_order = Vec::new();
    let mut edges = Vec::new();
    let mut pairs = BTreeSet::new();

    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let content = raw.split('#').next().unwrap_or("");
        let tokens: Vec<&str> = content.split_whitespace().collect();
        let Some(&head) = tokens.first() else { continue };
        if k.is_none() && head != "colours" {
            return Err(syntax(line, "expected `colours <k>` before anything else"));
        }
        match head {
            "colours" => {
                if k.is_some() {
                    return Err(syntax(line, "duplicate `colours` line"));
                }
                let [_, count] = tokens[..] else {
                    return Err(syntax(line, "expected `colours <k>`"));
                };
                let count: Colour = count
                    .parse()
                    .map_err(|_| syntax(line, format!("malformed colour count `{count}`")))?;
                if count == 0 {
                    return Err(syntax(line, "colour count must be positive"));
                }
                k = Some(count);
            }
            "vertex" => {
                let (name, f) = match tokens[..] {
                    [_, name] => (name, 0),
                    [_, name, spec] => {
                        let value = spec
                            .strip_prefix("f=")
                            .ok_or_else(|| syntax(line, format!("expected `f=<n>`, found `{spec}`")))?;
                        let f = value
                            .parse()
                            .map_err(|_| syntax(line, format!("malformed degree `{value}`")))?;
                        (name, f)
                    }
                    _ => return Err(syntax(line, "expected `vertex <id> [f=<n>]`")),
                };
                if f_by_name.insert(name.to_string(), f).is_some() {
                    return Err(syntax(line, format!("duplicate vertex `{name}`")));
                }
                vertex_order.push(name.to_string());
            }
            "edge" => {
                let [_, u, v, c] = tokens[..] else {
                    return Err(syntax(line, "expected `edge <u> <v> <colour>`"));
                };
                let colour: Colour = c
                    .parse()
                    .map_err(|_| syntax(line, format!("malformed colour `{c}`")))?;
                let k = k.unwrap();
                if colour == 0 || colour > k {
                    return Err(syntax(line, format!("colour {colour} out of range 1..{k}")));
                }
                for w in [u, v] {
                    if !f_by_name.contains_key(w) {
                        return Err(syntax(line, format!("unknown vertex `{w}`")));
                    }
                }
                if u == v {
                    return Err(syntax(line, format!("loop at `{u}`")));
                }
                let p = if u < v { (u, v) } else { (v, u) };
                if !pairs.insert(p) {
                    return Err(syntax(line, format!("parallel edge `{u}`-`{v}`")));
                }
                edges.push((u.to_string(), v.to_string(), colour));
            }
            other => return Err(syntax(line, format!("unknown directive `{other}`"))),
        }
    }
    let k = k.ok_or_else(|| syntax(1, "missing `colours <k>` line"))?;
    let graph = RawGraph { k, vertices: vertex_order, edges }.build()?;
    let f = DegreeSpec::new(graph.graph().names().iter().map(|n| f_by_name[n]).collect());
    Ok(Instance { graph, f })
}

pub fn serialize_ecg(g: &ColouredGraph, f: &DegreeSpec) -> String {
    let graph = g.graph();
    let mut out = format!("colours {}\n", g.k());
    for v in graph.vertices() {
        writeln!(out, "vertex {} f={}", graph.name(v), f.get(v)).unwrap();
    }
    for (e, &(u, v)) in graph.edges().iter().enumerate() {
        writeln!(out, "edge {} {} {}", graph.name(u), graph.name(v), g.colour(e)).unwrap();
    }
    out
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct JsonVertex {
    pub id: String,
    pub f: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct JsonEdge {
    pub u: String,
    pub v: String,
    pub colour: Colour,
}

/// JSON mirror of an ECG file.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EcgDocument {
    pub colours: Colour,
    pub vertices: Vec<JsonVertex>,
    pub edges: Vec<JsonEdge>,
}

impl EcgDocument {
    pub fn new(g: &ColouredGraph, f: &DegreeSpec) -> Self {
        let graph = g.graph();
        Self {
            colours: g.k(),
            vertices: graph
                .vertices()
                .map(|v| JsonVertex { id: graph.name(v).to_string(), f: f.get(v) })
                .collect(),
            edges: graph
                .edges()
                .iter()
                .enumerate()
                .map(|(e, &(u, v))| JsonEdge {
                    u: graph.name(u).to_string(),
                    v: graph.name(v).to_string(),
                    colour: g.colour(e),
                })
                .collect(),
        }
    }

    pub fn into_instance(self) -> Result<Instance, FormatError> {
        let f_by_name: HashMap<_, _> = self.vertices.iter().map(|v| (v.id.clone(), v.f)).collect();
        let raw = RawGraph {
            k: self.colours,
            vertices: self.vertices.into_iter().map(|v| v.id).collect(),
            edges: self.edges.into_iter().map(|e| (e.u, e.v, e.colour)).collect(),
        };
        let graph = raw.build()?;
        let f = DegreeSpec::new(graph.graph().names().iter().map(|n| f_by_name[n]).collect());
        Ok(Instance { graph, f })
    }
}

pub fn to_json(g: &ColouredGraph, f: &DegreeSpec) -> String {
    serde_json::to_string_pretty(&EcgDocument::new(g, f)).expect("serializable")
}

pub fn from_json(text: &str) -> Result<Instance, FormatError> {
    let doc: EcgDocument = serde_json::from_str(text).map_err(|e| FormatError::Json(e.to_string()))?;
    doc.into_instance()
}

/// Fixed 12-colour palette for DOT output; colour `c` maps to entry
/// `(c - 1) % 12`.
pub const DOT_PALETTE: [&str; 12] = [
    "#1b9e77", "#377eb8", "#ff7f00", "#e7298a", "#66a61e", "#e6ab02", "#a6761d", "#7570b3",
    "#e41a1c", "#17becf", "#984ea3", "#666666",
];

pub fn dot_colour(c: Colour) -> &'static str {
    DOT_PALETTE[(c as usize + 11) % 12]
}

pub(crate) fn quote(s: &str) -> String {
    format!("\"{}\"", s.replace('\\', "\\\\").replace('"', "\\\""))
}

/// DOT rendering with edges coloured by colour index and, when a factor is
/// given, factor edges drawn bold.
pub fn export_dot(g: &ColouredGraph, f: Option<&DegreeSpec>, highlight: Option<&EdgeSet>) -> String {
    let graph = g.graph();
    let mut out = String::from("graph G {\n  node [shape=circle];\n");
    for v in graph.vertices() {
        let label = match f {
            Some(f) => format!("{}\\nf={}", graph.name(v), f.get(v)),
            None => graph.name(v).to_string(),
        };
        writeln!(out, "  {} [label={}];", quote(graph.name(v)), quote(&label)).unwrap();
    }
    for (e, &(u, v)) in graph.edges().iter().enumerate() {
        let c = g.colour(e);
        let bold = highlight.is_some_and(|h| h.contains(e));
        writeln!(
            out,
            "  {} -- {} [color=\"{}\", label=\"{}\"{}];",
            quote(graph.name(u)),
            quote(graph.name(v)),
            dot_colour(c),
            c,
            if bold { ", penwidth=3" } else { "" }
        )
        .unwrap();
    }
    out.push_str("}\n");
    out
}

/// DOT rendering of an uncoloured graph.
pub fn export_plain_dot(graph: &Graph) -> String {
    let mut out = String::from("graph G {\n");
    for v in graph.vertices() {
        writeln!(out, "  {};", quote(graph.name(v))).unwrap();
    }
    for &(u, v) in graph.edges() {
        writeln!(out, "  {} -- {};", quote(graph.name(u)), quote(graph.name(v))).unwrap();
    }
    out.push_str("}\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn minimal_file() {
        let inst = parse_ecg("colours 1\nvertex a f=0\n").unwrap();
        assert_eq!(inst.graph.vertex_count(), 1);
        assert_eq!(inst.graph.k(), 1);
        assert_eq!(inst.f.values(), [0]);
    }

    #[test]
    fn comments_and_default_degree() {
        let text = "# header\n\ncolours 2 # two\nvertex b\nvertex a f=2\nedge a b 2\n";
        let inst = parse_ecg(text).unwrap();
        assert_eq!(inst.graph.graph().names(), ["a", "b"]);
        assert_eq!(inst.f.values(), [2, 0]);
    }

    #[test]
    fn errors_name_the_line() {
        let bad = "colours 2\nvertex a\nvertex b\nedge a b x\n";
        assert_eq!(
            parse_ecg(bad).unwrap_err(),
            FormatError::Syntax { line: 4, message: "malformed colour `x`".into() }
        );
        let cases = [
            ("vertex a\n", 1),
            ("colours 2\ncolours 2\n", 2),
            ("colours 2\nvertex a\nedge a a 1\n", 3),
            ("colours 2\nvertex a\nvertex b\nedge a b 3\n", 4),
            ("colours 2\nvertex a\nedge a b 1\n", 3),
            ("colours 2\nvertex a\nvertex b\nedge a b 1\nedge b a 2\n", 5),
            ("colours 2\nvertex a f=x\n", 2),
            ("colours 2\nvertex a\nvertex a\n", 3),
            ("colours 2\nnode a\n", 2),
        ];
        for (text, line) in cases {
            match parse_ecg(text) {
                Err(FormatError::Syntax { line: l, .. }) => assert_eq!(l, line, "{text:?}"),
                other => panic!("{text:?}: {other:?}"),
            }
        }
    }

    #[test]
    fn dot_palette_cycles() {
        assert_eq!(dot_colour(1), DOT_PALETTE[0]);
        assert_eq!(dot_colour(12), DOT_PALETTE[11]);
        assert_eq!(dot_colour(13), DOT_PALETTE[0]);
    }
}
