//! Signed graph workbench.
//!
//! Cartesian products of signed graphs, their prime s-decomposition,
//! switching equivalence and balance, and exact signed chromatic numbers by
//! homomorphism search, plus the named graphs and constructive colorings used
//! to reproduce the known chromatic-number results.

pub mod error;
pub mod graph;
pub mod switching;
pub mod product;
pub mod union_find;
pub mod factor_ordinary;
pub mod s_factor;
pub mod homomorphism;
pub mod constructions;
pub mod verify;
pub mod io;

pub use error::{Error, Result};
pub use graph::{walk_sign, Edge, Sign, SignedGraph, Vertex, Walk};
pub use switching::{canonical_form, classify_cycle, equivalent, is_balanced, switch, Balance, CycleClass, SwitchSet};
pub use product::{cartesian_product, product_many, CoordinateSystem, Layer};
pub use factor_ordinary::{factorize, is_prime_ordinary, OrdinaryDecomposition};
pub use s_factor::{is_s_prime, s_decompose, s_decompose_traced, s_prime_split, SDecomposition, Split, Step, StepAction};
pub use homomorphism::{
    chromatic_number, enumerate_targets, find_homomorphism, induced_target, is_s_redundant, signed_isomorphic,
    signed_isomorphism, validate, ChromaticCertificate, LowerBoundEvidence, SignedHomomorphism, MAX_TARGET_ORDER,
};
pub use constructions::{make, NamedGraph};
pub use io::{parse_graph, write_graph};
pub use verify::{Expectation, Report, ReportEntry};
