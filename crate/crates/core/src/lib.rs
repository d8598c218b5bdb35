//! Properly coloured f-factors in edge-coloured graphs.
//!
//! The crate decides whether an edge-coloured graph has a spanning subgraph
//! with prescribed degrees whose colour classes are matchings, and returns a
//! checkable certificate either way. It also contains the hardness gadgets
//! for rainbow-component and distance-d coloured factors.

pub mod alternative;
pub mod certificate;
pub mod factor;
pub mod format;
pub mod gadget;
pub mod graph;
pub mod harness;
pub mod hypergraph;
pub mod kneser;
pub mod matching;
pub mod palette;
pub mod reduction;
pub mod search;
pub mod tutte;

pub use certificate::{find_pc_factor, Certificate, SearchLimits};
pub use gadget::{build_gf, build_gfc, GadgetGraph};
pub use graph::{Colour, ColouredGraph, DegreeSpec, EdgeSet, Graph, RawGraph, VertexId};
pub use palette::{PaletteSystem, Role};
