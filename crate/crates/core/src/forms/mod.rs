//! Residue-field forms induced on the quotients of the sublattice chain, and the κ-linear
//! algebra behind them.

mod arf;
mod chain;
pub mod linalg;

pub use arf::{arf, predicted_zero_count, zero_count, QuadForm};
pub use chain::{
    all_chains, induced_quadratic, induced_symplectic, special_vector, sublattice_chain, FormKind, QuotientDims,
    ResidueForm, SublatticeChain,
};
