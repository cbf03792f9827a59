//! Exact-arithmetic toolkit for representations of surface groups into the
//! n-torus: density certification, orbit-closure normal forms under the
//! integer symplectic group, numeric orbit exploration, and a symplectic
//! variant of Kronecker approximation.

pub mod angle;
pub mod cli;
pub mod density;
pub mod error;
pub mod examples;
pub mod io;
pub mod kronecker;
pub mod lattice;
pub mod orbit;
pub mod symplectic;

pub use angle::{Angle, AngleVector, Rational, SymbolTable, ThetaMatrix};
pub use density::{certify_density, DensityCertificate};
pub use error::{Error, Result};
