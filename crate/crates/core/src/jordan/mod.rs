//! Jordan splittings, block types, and normal forms.

mod canonical;
mod classify;
mod split;

pub use canonical::{canonicalize, canonicalize_block, rewrite_bound_pair, CanonicalForm, NormalForm, Residual};
pub use classify::{classify, BlockSpec, BlockType, Boundness, Classification, JordanBlock, RankParity};
pub use split::{jordan_split, jordan_split_at, JordanDecomposition};
