//! Flat special Kähler structures on the standard pseudo-Hermitian space,
//! built from holomorphic polynomial potentials.

pub mod geodesic;
pub mod hermitian;
pub mod polynomial;
pub mod potential;
pub mod structure;

pub use geodesic::{ClosedFormGeodesic, Connection, Trajectory};
pub use hermitian::HermitianSpace;
pub use polynomial::Polynomial;
pub use potential::HoloPotential;
pub use structure::{rigidity, PointCheck, RigidityReport, SKStructure, SkReport, TrivialFactor};
