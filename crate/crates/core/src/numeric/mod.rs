//! Exact arithmetic over `Q` and `Q(i)` with small dense linear algebra.
//!
//! Nothing in here rounds. The only float conversions are the explicit
//! `to_f64` adapters used by the geodesic integrator.

pub mod field;
pub mod intmat;
pub mod matrix;
pub mod random;
pub mod subspace;

pub use field::{parse_scalar, rat, ratio, scalar_to_f64, Field, GaussianScalar, Scalar};
pub use matrix::{vec_ops, Matrix};
pub use random::RationalRange;
pub use subspace::{Subspace, VecDisplay};

/// Column vector of exact rationals.
pub type Vector = Vec<Scalar>;
