//! Large bipartite graphs of diameter 3 near the bipartite Moore bound.
//!
//! The crate builds `Θ_t`, `Φ_m` and `Φ_m(a_1, ..., a_{d-3})`, decides the
//! diameter of the latter from its two-step residues, searches offset tuples
//! exhaustively, and checks the structure that any bipartite `(d, 3, -4)`-graph
//! must have.

pub mod bitset;
pub mod bounds;
pub mod caseanalysis;
pub mod circulant;
pub mod error;
pub mod fixtures;
pub mod graph;
pub mod search;
pub mod structure;

pub use bounds::{defect, max_m_upper_bound, moore_bound, DefectRecord};
pub use circulant::{
    affine_equivalence, build_phi, build_phi_spec, build_theta, canonicalize, diameter3_test,
    two_step_residues, PhiSpec, ResidueCoverage,
};
pub use error::{Error, Result};
pub use graph::{BipartiteGraph, DistanceProfile, Extent, Regularity, Side, Vertex, INFINITE};
pub use search::{max_m, search_offsets, MaxMReport, SearchMode, SearchReport, SearchTask};
