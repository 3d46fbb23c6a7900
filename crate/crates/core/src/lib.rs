//! Anisotropic distance fields measured by the gauge (Minkowski functional)
//! of a convex polytope.
//!
//! The crate is organised bottom-up:
//!
//! - [`polytope`]: polytopes stored in dual form, gauge and support
//!   functions, normal cones, subdifferentials and face classification.
//! - [`boundary`]: the oriented boundary of the domain, its inward normal
//!   and the Hessian of the Euclidean distance.
//! - [`distance`]: the brute-force distance oracle, the closed-form fields of
//!   the worked example setups and the touching-ball certificate.
//! - [`regularity`]: first and second derivatives of the distance, the
//!   signed distance, finite-difference oracles and ridge scanning.
//! - [`verify`]: the property suites shared by the test-suite and the CLI.

pub mod boundary;
pub mod distance;
mod error;
pub mod polytope;
pub mod regularity;
pub mod tol;
pub mod verify;

pub use error::{Error, Result};

/// Points and directions in `R^n`.
pub type Vector = nalgebra::DVector<f64>;
/// Square matrices acting on [`Vector`].
pub type Matrix = nalgebra::DMatrix<f64>;

/// Shorthand for building a [`Vector`] from a slice.
pub fn vector(coords: &[f64]) -> Vector {
    Vector::from_column_slice(coords)
}

pub use boundary::{BoundaryShape, Membership};
pub use distance::{DistanceOracle, DistanceResult, Problem, RegionTag};
pub use polytope::DualPolytope;
