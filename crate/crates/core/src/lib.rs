//! Local first integrals of vector fields at a singular point whose linear
//! part has one zero eigenvalue and a nonresonant remainder.
//!
//! The field is written `x1' = f1(x)`, `y' = B y + g(x)` with `B` in Jordan
//! form. [`integral`] builds formal first integrals degree by degree,
//! [`locus`] finds and flattens the curve of equilibria through the origin,
//! [`spectral`] and [`homological`] handle the linear algebra, and
//! [`smalldiv`] certifies divergence for Liouville-type eigenvalues.

pub mod algebra;
pub mod cli;
pub mod dynlab;
pub mod error;
pub mod field;
pub mod homological;
pub mod integral;
pub mod locus;
pub mod smalldiv;
pub mod spectral;

pub use error::{Error, Result};
