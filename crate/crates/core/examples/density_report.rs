//! β_L with its intermediate quantities, for a few lattices given inline and for any lattice
//! file passed on the command line.

use std::sync::Arc;

use herm2::density::{local_density, DensityReport};
use herm2::lattice::HermitianLattice;
use herm2::ring::{Case, RingContext};

fn show(name: &str, rep: &DensityReport) {
    println!("{} {name}: β_L = {}", rep.case, rep.beta_l);
    println!("  N = {} (N_H {} − N_M {}), β = {}", rep.exponents.n, rep.exponents.n_h, rep.exponents.n_m, rep.beta);
    for f in &rep.factors {
        println!("  {:?}({}) at i = {}: order {}, dim {}", f.factor.kind, f.factor.dim_space, f.factor.i, f.order, f.dim);
    }
    println!(
        "  dim reductive {} + unipotent {} = n² = {}",
        rep.dim_reductive,
        rep.dim_unipotent_radical,
        rep.n * rep.n
    );
    println!("  |G̃(κ)| = {}, β_L = {} · f^{}", rep.order_gtilde, rep.mantissa, rep.f_exponent);
}

fn main() -> herm2::Result<()> {
    if let Some(path) = std::env::args().nth(1) {
        let l = herm2::io::read_lattice(path.as_ref(), None)?;
        show(&path, &local_density(&l)?);
        return Ok(());
    }
    for case in [Case::One, Case::Two] {
        for r in [1, 2] {
            let ring = Arc::new(RingContext::new(case, r, &[1], 16)?);
            show(&format!("H(0), f = {}", ring.f()), &local_density(&HermitianLattice::hyperbolic(&ring, 0)?)?);
            show(&format!("diag(1,2), f = {}", ring.f()), &local_density(&HermitianLattice::diagonal(&ring, &[1, 2])?)?);
            let mixed = HermitianLattice::hyperbolic(&ring, 1)?.direct_sum(&HermitianLattice::diagonal(&ring, &[1, 4])?)?;
            show(&format!("H(1) ⊕ diag(1,4), f = {}", ring.f()), &local_density(&mixed)?);
        }
    }
    Ok(())
}
