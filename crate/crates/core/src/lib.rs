//! Exact-arithmetic workbench for mapping-space models.
//!
//! Given a finite-dimensional rational cohomology ring with Poincaré duality
//! of formal dimension 2n, this crate builds the Brown–Szczarba model of
//! Map(X, S^{2n}), the minimal Sullivan models of its degree-0 and degree-1
//! components, the degree-1 splitting certificate, and the self-closeness
//! numbers of both components together with verified witness self-maps.
//!
//! All arithmetic is exact over Q; no floating point is used anywhere.

pub mod bs_models;
pub mod cga;
pub mod error;
pub mod poincare;
pub mod qmatrix;
pub mod ringgen;
pub mod scalar;
pub mod selfclose;
pub mod splitting;
pub mod verify;

pub use error::{Error, Result};
