//! Random and named lattices for tests, examples and self-checks.

use std::sync::Arc;

use rand::seq::SliceRandom;
use rand::Rng;

use crate::error::Result;
use crate::jordan::{classify, BlockSpec, Classification};
use crate::lattice::HermitianLattice;
use crate::ring::{random_elem, AElem, BElem, Case, Matrix, RingContext};

/// Random unit of A.
pub fn random_unit_a<R: Rng + ?Sized>(ctx: &RingContext, rng: &mut R) -> AElem {
    loop {
        let x = random_elem(ctx, rng).a0;
        if ctx.galois().is_unit(&x) {
            return x;
        }
    }
}

/// Random unit of B.
pub fn random_unit_b<R: Rng + ?Sized>(ctx: &RingContext, rng: &mut R) -> BElem {
    loop {
        let x = random_elem(ctx, rng);
        if ctx.is_unit(&x) {
            return x;
        }
    }
}

/// Random element of A with π-valuation at least v.
fn random_a_at_least<R: Rng + ?Sized>(ctx: &RingContext, v: u32, rng: &mut R) -> AElem {
    let s = (v + 1) / 2;
    ctx.galois().shl(&random_elem(ctx, rng).a0, s)
}

/// A random π^v-modular piece of rank 1 (v even) or 2.
pub fn random_piece<R: Rng + ?Sized>(ctx: &Arc<RingContext>, v: u32, rank: usize, rng: &mut R) -> Matrix {
    let g = ctx.galois();
    if rank == 1 {
        assert!(v % 2 == 0);
        let a = g.shl(&random_unit_a(ctx, rng), v / 2);
        return Matrix::from_rows(vec![vec![ctx.from_a(a)]]).expect("square");
    }
    let c = ctx.mul(&ctx.pi_pow(v), &random_unit_b(ctx, rng));
    let (a, b) = match rng.gen_range(0..3) {
        0 => (ctx.zero(), ctx.zero()),
        _ => (ctx.from_a(random_a_at_least(ctx, v + 1, rng)), ctx.from_a(random_a_at_least(ctx, v + 1, rng))),
    };
    Matrix::from_rows(vec![vec![a, c], vec![ctx.sigma(&c), b]]).expect("square")
}

/// Random lattice of rank ≤ max_rank with scales in 0..=max_scale, scrambled by a random unit
/// base change. Also returns the unscrambled block-diagonal lattice.
pub fn random_lattice<R: Rng + ?Sized>(
    ctx: &Arc<RingContext>,
    max_rank: usize,
    max_scale: u32,
    rng: &mut R,
) -> (HermitianLattice, HermitianLattice) {
    loop {
        let target = rng.gen_range(1..=max_rank);
        let mut g = Matrix::zeros(0, 0);
        while g.rows() < target {
            let v = rng.gen_range(0..=max_scale);
            let room = target - g.rows();
            let rank = if v % 2 == 1 || room >= 2 && rng.gen_bool(0.5) { 2 } else { 1 };
            if rank > room {
                continue;
            }
            g = g.direct_sum(&random_piece(ctx, v, rank, rng));
        }
        let Ok(plain) = HermitianLattice::new(ctx.clone(), g) else { continue };
        let u = Matrix::random_unit(ctx, plain.rank(), rng);
        let scrambled = plain.base_change(&u).expect("unit base change");
        return (scrambled, plain);
    }
}

/// A(4a, 2δ, π) ⊕ (2c) in Case 2, δ the ring parameter.
pub fn bound_pair_lattice(ctx: &Arc<RingContext>, a: i64, c: i64) -> Result<HermitianLattice> {
    let g = ctx.galois();
    let two_delta = ctx.from_a(g.mul_int(ctx.param(), 2));
    let plane = HermitianLattice::binary(ctx, ctx.from_int(4 * a), two_delta, ctx.pi())?;
    plane.direct_sum(&HermitianLattice::diagonal(ctx, &[2 * c])?)
}

/// Random type data: ranks ≤ max_rank in total, indices in lo..=hi. Odd indices and even type II
/// blocks get even ranks, as modular lattices of those kinds must.
pub fn random_classification<R: Rng + ?Sized>(case: Case, max_rank: usize, lo: i64, hi: i64, rng: &mut R) -> Classification {
    let mut indices: Vec<i64> = (lo..=hi).collect();
    indices.shuffle(rng);
    let mut specs = Vec::new();
    let mut total = 0usize;
    for i in indices {
        if total >= max_rank || rng.gen_bool(0.45) {
            continue;
        }
        let room = max_rank - total;
        let even = i.rem_euclid(2) == 0;
        let type_one = even && rng.gen_bool(0.5) || !even && rng.gen_bool(0.5);
        let need_even = !even || !type_one;
        let rank = if need_even {
            if room < 2 {
                continue;
            }
            2 * rng.gen_range(1..=room / 2)
        } else {
            rng.gen_range(1..=room)
        };
        total += rank;
        specs.push(BlockSpec { i, rank, norm_minimal: type_one });
    }
    classify(case, &specs)
}
