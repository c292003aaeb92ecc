//! Local densities of hermitian lattices over the two ramified quadratic
//! extensions of an unramified 2-adic ring.
//!
//! The pipeline is: [`lattice::HermitianLattice`] → [`jordan::jordan_split`] →
//! [`forms`] (residue-field forms) → [`density::local_density`]. The
//! [`oracle`] module counts congruence solutions independently.

pub mod cli;
pub mod density;
pub mod error;
pub mod forms;
pub mod gen;
pub mod io;
pub mod jordan;
pub mod lattice;
pub mod oracle;
pub mod ring;
pub mod selftest;

pub use error::{Error, Result, Stage};
