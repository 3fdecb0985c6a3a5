//! Executable forms of the expansion view of well-separated sets in
//! squared-Euclidean point sets.
//!
//! The crate validates point sets whose squared distances obey the triangle
//! inequality, builds ε-threshold graphs `G_{V,ε}`, certifies (α,β)-node
//! expansion exactly for small graphs (and falsifies it heuristically for
//! larger ones), finds well-separated set pairs, and converts between
//! non-expansion witnesses and separated pairs in both directions.

pub mod cli;
pub mod error;
pub mod exact;
pub mod expansion;
pub mod generators;
pub mod geometry;
pub mod graph;
pub mod reductions;
pub mod separation;
pub mod sweep;

pub use error::{Error, Result};
pub use expansion::{
    certify_expansion_exact, certify_expansion_exact_with_limit, falsify_expansion_randomized,
    is_expanding_set, k_steps, size_window, ExpanderParams, ExpansionCertificate, Method, SizeWindow,
    Verdict,
};
pub use generators::{gen_antipodal, gen_hypercube, gen_orthonormal, gen_random_sphere, FamilySpec};
pub use geometry::{
    average_squared_distance, squared_distance, validate_triangle_inequalities, validate_unit_sphere,
    PointSet, Tolerance, TriangleViolation,
};
pub use graph::{build_threshold_graph, Graph, ThresholdGraph, VertexSet};
pub use reductions::{
    check_generalized, check_main_theorem_instance, extract_separated_from_witness,
    witness_from_separated_pair, CheckOptions, EmbeddedGraph, GeneralizedHit, InstanceReport,
};
pub use separation::{
    best_separated_pair_exact, find_separated_pair_projection, separation_of, verify_well_separated,
    SeparatedPair,
};
