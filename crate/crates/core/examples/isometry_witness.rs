//! The bound pair A(4a, 2δ, π) ⊕ (2c) in Case 2: its canonical model, an explicit rewrite,
//! and an isometry found by digit-by-digit search.

use std::sync::Arc;

use herm2::density::local_density;
use herm2::gen::bound_pair_lattice;
use herm2::jordan::{canonicalize, jordan_split, rewrite_bound_pair};
use herm2::lattice::HermitianLattice;
use herm2::oracle::{isometry_search, DEFAULT_BUDGET};
use herm2::ring::{Case, Matrix, RingContext};

fn main() -> herm2::Result<()> {
    let r = Arc::new(RingContext::new(Case::Two, 1, &[1], 12)?);
    let g = r.galois();
    for (a, c) in [(1, 1), (1, 3), (3, 1)] {
        let l = bound_pair_lattice(&r, a, c)?;
        let (u, gram) = rewrite_bound_pair(&r, &g.from_int(a), &g.from_int(c))?;
        let rewrite_ok = Matrix::congruence(&r, l.gram(), &u).eq_mod(&r, &gram, r.pi_precision());

        let cf = canonicalize(&jordan_split(&l)?)?;
        let model = HermitianLattice::new(r.clone(), cf.model_gram.clone())?;
        let tags: Vec<_> = cf.blocks.iter().map(|b| format!("{}:{}", b.i, b.residual.tag())).collect();
        let found = isometry_search(&l, &model, 10, DEFAULT_BUDGET)?;
        let same_density = local_density(&l)?.beta_l == local_density(&model)?.beta_l;
        println!(
            "a = {a}, c = {c}: rewrite {rewrite_ok}, model {tags:?}, isometry mod π^10 {}, equal β_L {same_density}",
            found.is_some()
        );
    }
    let one = HermitianLattice::diagonal(&r, &[1])?;
    let two = HermitianLattice::diagonal(&r, &[2])?;
    println!("(1) vs (2): {:?}", isometry_search(&one, &two, 6, DEFAULT_BUDGET)?.is_some());
    Ok(())
}
