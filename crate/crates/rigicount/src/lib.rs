//! Realisation counting toolkit for graphs.
//!
//! The central fact this crate makes checkable: when a graph carries a
//! construction ordering that starts inside a globally rigid core and
//! finishes with exact degree-d attachments, its number of equivalent
//! non-congruent realisations in dimension d is exactly 2^(n - t), where
//! t is the size of the (d+1)-core. The crate provides:
//!
//! - [`graph`]: k-core peeling, exact vertex connectivity, the cone;
//! - [`random`]: seeded edge-ordering evolution G(n, M, sigma), G(n, p)
//!   and minimum-degree hitting times;
//! - [`ordering`]: the two-pass construction ordering and the
//!   d-neighbourly property;
//! - [`rigidity`]: randomized rank and stress-matrix rigidity tests over
//!   GF(2^31 - 1);
//! - [`certify`]: assembly of the deterministic or randomized evidence
//!   chain into a count certificate, including the spherical variant;
//! - [`enumerate`]: numerical branch enumeration of realisations, the
//!   independent oracle for certificates;
//! - [`psd`]: rank-d partial PSD matrices, their cores, spherical
//!   normalisation and completion counting;
//! - [`props`]: desk-scale checkers for the adjacency, sparsity and
//!   core-size properties.

pub mod certify;
pub mod enumerate;
pub mod field;
mod gfp;
pub mod graph;
pub mod ordering;
pub mod props;
pub mod psd;
pub mod random;
pub mod rigidity;

pub use field::NumField;
pub use graph::{Graph, GraphError, PeelTrace};
