//! Split a scrambled lattice into modular blocks, read off the type flags and rebuild it from
//! the canonical descriptors.

use std::sync::Arc;

use herm2::gen::random_lattice;
use herm2::jordan::{canonicalize, jordan_split};
use herm2::ring::{Case, Matrix, RingContext};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() -> herm2::Result<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for case in [Case::One, Case::Two] {
        let r = Arc::new(RingContext::new(case, 1, &[1], 16)?);
        let (l, _) = random_lattice(&r, 5, 4, &mut rng);
        let dec = jordan_split(&l)?;
        println!("{case}, rank {}, v_π(det) = {:?}", l.rank(), l.det_val());
        for b in &dec.classification.blocks {
            println!(
                "  L_{}: rank {}, {:?}, {:?}, {:?}",
                b.i, b.rank, b.block_type, b.rank_parity, b.boundness
            );
        }
        let back = Matrix::congruence(&r, l.gram(), &dec.witness);
        println!("  witness reproduces the split Gram: {}", back.eq_mod(&r, &dec.split_gram, dec.precision));

        let cf = canonicalize(&dec)?;
        for nf in &cf.blocks {
            println!("  normal form at {}: H({})^{} ⊕ {}", nf.i, nf.i, nf.hyperbolic, nf.residual.tag());
        }
        println!("  model Gram verified mod π^{}", cf.verified_precision);
    }
    Ok(())
}
