//! Exact arithmetic in the Hodge ring, the de Rham ring, and the
//! Hodge-de Rham ring of smooth proper varieties in positive
//! characteristic, together with a verifier that certifies their structure
//! theorems degree by degree with integer lattice algebra.

pub mod catalog;
pub mod check;
pub mod hdr;
pub mod derham;
pub mod hodge;
pub mod json;
pub mod lattice;
pub mod report;
pub mod poly;

pub use check::VerifyFailure;
pub use lattice::IntMatrix;
pub use poly::{GradedPolynomial, PolyError, RingContext};
