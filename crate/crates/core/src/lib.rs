//! Computer-assisted existence proofs for the 1D semilinear heat equation
//! `u_t - nu u_xx = g(u)` on `(0,1)` with homogeneous Dirichlet data.
//!
//! The pipeline builds a non-rigorous approximate solution, then encloses
//! every constant of a Schauder fixed-point argument in interval arithmetic
//! on space-time P1 finite elements, one time step at a time.

pub mod approx;
pub mod assembly;
pub mod constants;
pub mod error;
pub mod imatrix;
pub mod interval;
pub mod linalg;
pub mod mesh;
pub mod poly;
pub mod problem;
pub mod quadrature;
pub mod report;
pub mod verifier;

pub use error::{Error, Result};
pub use imatrix::IMatrix;
pub use interval::Interval;
pub use mesh::{SpatialMesh, TemporalMesh};
