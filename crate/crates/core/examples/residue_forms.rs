//! The sublattice chain at each index, the symplectic and quadratic residue forms it carries,
//! and Arf invariants checked against a direct zero count.

use std::sync::Arc;

use herm2::forms::{all_chains, predicted_zero_count, zero_count};
use herm2::jordan::jordan_split;
use herm2::lattice::HermitianLattice;
use herm2::ring::{Case, RingContext};

fn main() -> herm2::Result<()> {
    for case in [Case::One, Case::Two] {
        let r = Arc::new(RingContext::new(case, 1, &[1], 16)?);
        let l = HermitianLattice::hyperbolic(&r, 0)?
            .direct_sum(&HermitianLattice::hyperbolic(&r, 1)?)?
            .direct_sum(&HermitianLattice::diagonal(&r, &[1, 2])?)?;
        let dec = jordan_split(&l)?;
        println!("{case}");
        for chain in all_chains(&dec)? {
            let dims = chain.quotient_dims();
            println!(
                "  i = {}: dim A/B = {}, dim W/X = {}, e = {:?}",
                chain.index, dims.a_mod_b, dims.w_mod_x, chain.e
            );
            for form in chain.symplectic.iter().chain(chain.quadratic.iter()) {
                print!("    {:?} on {}, dim {}", form.kind, form.space, form.dim);
                if let (Some(q), Some(a)) = (&form.quadratic, form.arf) {
                    let k = r.kappa();
                    print!(", Arf {a}, zeros {} (predicted {})", zero_count(k, q), predicted_zero_count(r.f(), q.dim(), Some(a)));
                }
                println!();
            }
        }
    }
    Ok(())
}
