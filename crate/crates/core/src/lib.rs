//! Exact construction and verification of Abelian simply transitive affine
//! groups of symplectic type, and of the flat special Kähler structures built
//! from holomorphic potentials with isotropic cubic support.
//!
//! Every algebraic identity is decided over `Q` or `Q(i)`. Floating point
//! appears only in [`kahler::geodesic`], behind explicit conversions.

pub mod affine;
pub mod cubic;
pub mod error;
pub mod kahler;
pub mod numeric;
pub mod symplectic;

pub use affine::{AffineMap, GroupChart};
pub use cubic::{CubicForm, EndoFamily, StratumReport};
pub use error::{Error, Result};
pub use kahler::{HermitianSpace, HoloPotential, SKStructure};
pub use numeric::{GaussianScalar, Matrix, Scalar, Subspace, Vector};
pub use symplectic::SymplecticSpace;
