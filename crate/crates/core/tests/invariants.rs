use std::sync::Arc;

use num_bigint::BigUint;
use num_traits::Zero;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use herm2::density::{analyze, local_density};
use herm2::gen::random_lattice;
use herm2::io::{lattice_to_json, parse_lattice};
use herm2::jordan::{canonicalize, jordan_split};
use herm2::lattice::HermitianLattice;
use herm2::oracle::{congruence_count, isometry_search, normalized_density, stabilization_floor, DEFAULT_BUDGET};
use herm2::ring::{Case, Matrix, PiVal, RingContext};

fn ring(two: bool, r: usize) -> Arc<RingContext> {
    let case = if two { Case::Two } else { Case::One };
    Arc::new(RingContext::new(case, r, &[1], 16).unwrap())
}

fn setup(seed: u64, two: bool, r: usize, max_rank: usize) -> (Arc<RingContext>, ChaCha8Rng, HermitianLattice) {
    let ctx = ring(two, r);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (l, _) = random_lattice(&ctx, max_rank, 4, &mut rng);
    (ctx, rng, l)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn ideals_are_isometry_invariants(seed: u64, two: bool) {
        let (ctx, mut rng, l) = setup(seed, two, 1, 5);
        let moved = l.base_change(&Matrix::random_unit(&ctx, l.rank(), &mut rng)).unwrap();
        prop_assert_eq!(moved.scale_exp(), l.scale_exp());
        prop_assert_eq!(moved.norm_exp(), l.norm_exp());
        prop_assert!(l.norm_exp() >= l.scale_exp());
    }

    #[test]
    fn direct_sum_takes_minima(seed: u64, two: bool) {
        let (ctx, mut rng, a) = setup(seed, two, 1, 3);
        let (b, _) = random_lattice(&ctx, 3, 4, &mut rng);
        let s = a.direct_sum(&b).unwrap();
        prop_assert_eq!(s.scale_exp(), a.scale_exp().min(b.scale_exp()));
        prop_assert_eq!(s.norm_exp(), a.norm_exp().min(b.norm_exp()));
    }

    #[test]
    fn splitting_is_complete(seed: u64, two: bool, r in 1usize..=2) {
        let (ctx, _, l) = setup(seed, two, r, 6);
        let dec = jordan_split(&l).unwrap();
        let blocks = &dec.classification.blocks;
        prop_assert_eq!(blocks.iter().map(|b| b.rank).sum::<usize>(), l.rank());
        prop_assert!(blocks.windows(2).all(|w| w[0].i < w[1].i));
        let back = Matrix::congruence(&ctx, l.gram(), &dec.witness);
        prop_assert!(back.eq_mod(&ctx, &dec.block_diagonal_gram(), dec.precision));
        for (idx, b) in blocks.iter().enumerate() {
            let block = HermitianLattice::new(ctx.clone(), dec.block_gram(idx)).unwrap();
            prop_assert_eq!(block.scale_exp(), PiVal::Finite(b.i as u32));
        }
    }

    #[test]
    fn type_data_and_density_survive_base_change(seed: u64, two: bool, r in 1usize..=2) {
        let (ctx, mut rng, l) = setup(seed, two, r, 5);
        let base = local_density(&l).unwrap();
        let moved = local_density(&l.base_change(&Matrix::random_unit(&ctx, l.rank(), &mut rng)).unwrap()).unwrap();
        prop_assert_eq!(moved.classification().signature(), base.classification().signature());
        prop_assert_eq!(&moved.beta_l, &base.beta_l);
        prop_assert_eq!(&moved.factors, &base.factors);
    }

    #[test]
    fn rescaling_shifts_indices_by_two(seed: u64, two: bool) {
        let (_, _, l) = setup(seed, two, 1, 5);
        let before = jordan_split(&l).unwrap().classification.signature();
        let after = jordan_split(&l.rescale(1)).unwrap().classification.signature();
        let shifted: Vec<_> = before.into_iter().map(|(i, n, t, p, b)| (i + 2, n, t, p, b)).collect();
        prop_assert_eq!(after, shifted);
    }

    #[test]
    fn quotients_are_small_and_match_types(seed: u64, two: bool, r in 1usize..=2) {
        let (_, _, l) = setup(seed, two, r, 6);
        let (dec, chains) = analyze(&l).unwrap();
        for (b, chain) in dec.classification.blocks.iter().zip(&chains) {
            let dims = chain.quotient_dims();
            prop_assert!(dims.a_mod_b <= 1 && dims.w_mod_x <= 1);
            prop_assert_eq!(chain.b_proper(), b.type_one());
        }
    }

    #[test]
    fn residue_forms_survive_base_change(seed: u64, two: bool) {
        let (ctx, mut rng, l) = setup(seed, two, 1, 5);
        let moved = l.base_change(&Matrix::random_unit(&ctx, l.rank(), &mut rng)).unwrap();
        let shape = |l: &HermitianLattice| {
            let (_, chains) = analyze(l).unwrap();
            chains
                .iter()
                .flat_map(|c| c.symplectic.iter().chain(c.quadratic.iter()))
                .map(|f| (f.index, f.kind, f.dim, f.arf))
                .collect::<Vec<_>>()
        };
        prop_assert_eq!(shape(&l), shape(&moved));
    }

    #[test]
    fn report_sanity(seed: u64, two: bool, r in 1usize..=2) {
        let (_, _, l) = setup(seed, two, r, 6);
        let rep = local_density(&l).unwrap();
        prop_assert!(rep.dim_unipotent_radical >= 0);
        prop_assert!(rep.factors.iter().all(|f| f.order >= BigUint::from(1u32)));
        let unipotent = BigUint::from(rep.f).pow(rep.dim_unipotent_radical as u32);
        prop_assert!((&rep.order_gtilde % &unipotent).is_zero());
        let reductive = &rep.order_gtilde / unipotent;
        prop_assert!((reductive % (BigUint::from(1u32) << rep.beta as usize)).is_zero());
        prop_assert_eq!(rep.n * rep.n, (rep.dim_reductive + rep.dim_unipotent_radical) as usize);
    }

    #[test]
    fn lattice_files_round_trip(seed: u64, two: bool, r in 1usize..=3) {
        let (_, _, l) = setup(seed, two, r, 4);
        let back = parse_lattice(&lattice_to_json(&l).to_string(), None).unwrap();
        prop_assert_eq!(back, l);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(8))]

    #[test]
    fn counts_survive_base_change(seed: u64, two: bool) {
        let ctx = ring(two, 1);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (l, _) = random_lattice(&ctx, 2, 2, &mut rng);
        let moved = l.base_change(&Matrix::random_unit(&ctx, l.rank(), &mut rng)).unwrap();
        for d in 1..=2 {
            prop_assert_eq!(congruence_count(&l, d, DEFAULT_BUDGET).unwrap(), congruence_count(&moved, d, DEFAULT_BUDGET).unwrap());
        }
    }

    #[test]
    fn canonical_models_are_isometric(seed: u64, two: bool) {
        let ctx = ring(two, 1);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (l, _) = random_lattice(&ctx, 2, 3, &mut rng);
        let cf = canonicalize(&jordan_split(&l).unwrap()).unwrap();
        prop_assert!(cf.verified_precision >= ctx.pi_precision() - 2);
        let model = HermitianLattice::new(ctx.clone(), cf.model_gram.clone()).unwrap();
        let u = isometry_search(&l, &model, 6, DEFAULT_BUDGET).unwrap();
        prop_assert!(u.is_some());
    }
}

#[test]
fn lift_fibers_are_regular_past_the_floor() {
    for two in [false, true] {
        let ctx = ring(two, 1);
        for l in [
            HermitianLattice::diagonal(&ctx, &[1]).unwrap(),
            HermitianLattice::diagonal(&ctx, &[2]).unwrap(),
            HermitianLattice::hyperbolic(&ctx, 0).unwrap(),
            HermitianLattice::diagonal(&ctx, &[1, 2]).unwrap(),
        ] {
            let p = normalized_density(&l, 5, DEFAULT_BUDGET).unwrap();
            assert!(p.is_stable());
            let floor = stabilization_floor(&l);
            for (d, fiber) in p.depths.iter().zip(&p.lift_fibers) {
                if *d > floor {
                    let (lo, hi) = fiber.unwrap();
                    assert_eq!(lo, hi, "fiber at d = {d}");
                }
            }
        }
    }
}
