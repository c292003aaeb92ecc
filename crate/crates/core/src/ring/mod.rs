//! Arithmetic in A/2^k = GR(2^k, r) and in B = A ⊕ Aπ mod π^{2k}.

mod ext;
mod galois;
mod matrix;
mod residue;

pub use ext::{BElem, Case, PiVal, RingContext};
pub use galois::{AElem, GaloisRing, MAX_DEGREE};
pub use matrix::{random_elem, Matrix};
pub use residue::{frobenius_sqrt, KElem, ResidueField, CONWAY};
