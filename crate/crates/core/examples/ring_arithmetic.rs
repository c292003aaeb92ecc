//! Arithmetic in B = A[π] for both ramified cases: the defining relation of π, conjugation,
//! trace and norm, valuations and inverses.

use std::sync::Arc;

use herm2::io::belem_to_json;
use herm2::ring::{Case, RingContext};

fn main() -> herm2::Result<()> {
    for case in [Case::One, Case::Two] {
        let r = Arc::new(RingContext::new(case, 2, &[1], 8)?);
        let show = |x: &herm2::ring::BElem| belem_to_json(&r, x);
        let pi = r.pi();
        let pi2 = r.mul(&pi, &pi);
        println!("{case}, f = {}, precision 2^{}", r.f(), r.precision());
        println!("  π² = {}", show(&pi2));
        println!("  σ(π) = {}", show(&r.sigma(&pi)));
        println!("  Tr(π) = {:?}, N(π) = {:?}", r.trace(&pi), r.norm(&pi));

        let x = r.from_ints(3, 5);
        let inv = r.inv(&x)?;
        println!("  x = 3 + 5π, x⁻¹ = {}, x·x⁻¹ = {}", show(&inv), show(&r.mul(&x, &inv)));
        for e in 0..5 {
            println!("  v_π(π^{e}·x) = {:?}", r.val(&r.mul(&r.pi_pow(e), &x)));
        }
        println!("  v_π(0) = {:?}", r.val(&r.zero()));
    }
    Ok(())
}
