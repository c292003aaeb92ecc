//! Named invariant suites, small enough to run on every invocation of the self-test.

use std::collections::BTreeMap;
use std::sync::Arc;

use num_bigint::BigUint;
use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::density::{appendix_ledger, assemble, compute_n, local_density, reductive_factors, FactorKind, ReductiveFactor};
use crate::forms::{arf, predicted_zero_count, zero_count, QuadForm};
use crate::gen::{random_classification, random_lattice};
use crate::jordan::jordan_split;
use crate::lattice::HermitianLattice;
use crate::oracle::classical::{orthogonal_group_size, sum_of_planes, symplectic_group_size};
use crate::oracle::{normalized_density, rank_one_direct_count, congruence_count, DEFAULT_BUDGET};
use crate::ring::{Case, KElem, Matrix, ResidueField, RingContext};

pub type SuiteResult = std::result::Result<(), String>;

pub struct Suite {
    pub name: &'static str,
    pub run: fn() -> SuiteResult,
}

pub fn suites() -> Vec<Suite> {
    vec![
        Suite { name: "density.dimension_closure", run: dimension_closure },
        Suite { name: "density.n_identity", run: n_identity },
        Suite { name: "density.component_power", run: component_power },
        Suite { name: "groups.order_enumeration", run: order_enumeration },
        Suite { name: "forms.arf_zero_count", run: arf_zero_count },
        Suite { name: "forms.type_dual_path", run: type_dual_path },
        Suite { name: "jordan.isometry_invariance", run: isometry_invariance },
        Suite { name: "jordan.scaling_covariance", run: scaling_covariance },
        Suite { name: "oracle.rank_one_paths", run: rank_one_paths },
        Suite { name: "oracle.unimodular_match", run: unimodular_match },
    ]
}

/// Runs every suite; returns (name, outcome) in order.
pub fn run_all() -> Vec<(&'static str, SuiteResult)> {
    suites().into_iter().map(|s| (s.name, (s.run)())).collect()
}

fn check(cond: bool, msg: impl FnOnce() -> String) -> SuiteResult {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn ring(case: Case, r: usize) -> Arc<RingContext> {
    Arc::new(RingContext::new(case, r, &[1], 20).expect("valid ring"))
}

fn dimension_closure() -> SuiteResult {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    for case in [Case::One, Case::Two] {
        for _ in 0..200 {
            let c = random_classification(case, 6, -2, 6, &mut rng);
            let n = c.total_rank() as i64;
            let red: i64 = reductive_factors(&c, &BTreeMap::new()).iter().map(|f| f.group_dim()).sum();
            check(appendix_ledger(&c).l + red == n * n, || format!("closure fails for {:?}", c.signature()))?;
        }
    }
    Ok(())
}

fn n_identity() -> SuiteResult {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    for case in [Case::One, Case::Two] {
        for _ in 0..200 {
            let c = random_classification(case, 6, -2, 6, &mut rng);
            let e = compute_n(&c);
            check(e.n == e.n_h - e.n_m, || format!("N ≠ N_H − N_M for {:?}", c.signature()))?;
        }
    }
    Ok(())
}

fn component_power() -> SuiteResult {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for case in [Case::One, Case::Two] {
        for _ in 0..100 {
            let c = random_classification(case, 6, -2, 6, &mut rng);
            let rep = assemble(&c, 2, &BTreeMap::new());
            let reductive = rep.order_gtilde.clone() / BigUint::from(2u32).pow(rep.dim_unipotent_radical as u32);
            let two_beta = BigUint::from(1u32) << rep.beta as usize;
            check((reductive % two_beta).is_zero() && rep.dim_unipotent_radical >= 0, || {
                format!("2^β does not divide the reductive part for {:?}", c.signature())
            })?;
        }
    }
    Ok(())
}

fn order_enumeration() -> SuiteResult {
    let k = ResidueField::new(1);
    let cases: [(FactorKind, usize, u64); 4] = [
        (FactorKind::Sp, 2, symplectic_group_size(&k, 2)),
        (FactorKind::Sp, 4, symplectic_group_size(&k, 4)),
        (FactorKind::OPlus, 2, orthogonal_group_size(&k, &sum_of_planes(&k, &[false]))),
        (FactorKind::OMinus, 2, orthogonal_group_size(&k, &sum_of_planes(&k, &[true]))),
    ];
    for (kind, d, counted) in cases {
        let formula = ReductiveFactor::new(kind, d, 0).group_order(2);
        check(formula == BigUint::from(counted), || format!("{kind:?}({d}) order {formula} vs enumeration {counted}"))?;
    }
    Ok(())
}

fn arf_zero_count() -> SuiteResult {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let k = ResidueField::new(1);
    let mut seen = 0;
    while seen < 100 {
        let d = 2 * rng.gen_range(1..=3);
        let diag: Vec<KElem> = (0..d).map(|_| KElem(rng.gen_range(0..2))).collect();
        let mut polar = vec![vec![KElem::ZERO; d]; d];
        for a in 0..d {
            for b in a + 1..d {
                let v = KElem(rng.gen_range(0..2));
                polar[a][b] = v;
                polar[b][a] = v;
            }
        }
        let q = QuadForm { diag, polar };
        let Ok(a) = arf(&k, &q) else { continue };
        check(zero_count(&k, &q) == predicted_zero_count(2, d, Some(a)), || format!("zero count mismatch for {q:?}"))?;
        seen += 1;
    }
    Ok(())
}

fn type_dual_path() -> SuiteResult {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    for case in [Case::One, Case::Two] {
        let r = ring(case, 1);
        for _ in 0..10 {
            let (l, _) = random_lattice(&r, 4, 3, &mut rng);
            let (dec, chains) = crate::density::analyze(&l).map_err(|e| e.to_string())?;
            for (b, chain) in dec.classification.blocks.iter().zip(&chains) {
                check(chain.b_proper() == b.type_one(), || {
                    format!("block {} typed {:?} but A ⊋ B is {}", b.i, b.block_type, chain.b_proper())
                })?;
            }
        }
    }
    Ok(())
}

fn isometry_invariance() -> SuiteResult {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for case in [Case::One, Case::Two] {
        let r = ring(case, 1);
        for _ in 0..5 {
            let (l, _) = random_lattice(&r, 4, 3, &mut rng);
            let base = local_density(&l).map_err(|e| e.to_string())?;
            for _ in 0..3 {
                let u = Matrix::random_unit(&r, l.rank(), &mut rng);
                let moved = local_density(&l.base_change(&u).map_err(|e| e.to_string())?).map_err(|e| e.to_string())?;
                check(moved.classification().signature() == base.classification().signature() && moved.beta_l == base.beta_l, || {
                    format!("base change altered the report ({} vs {})", base.beta_l, moved.beta_l)
                })?;
            }
        }
    }
    Ok(())
}

fn scaling_covariance() -> SuiteResult {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    for case in [Case::One, Case::Two] {
        let r = ring(case, 1);
        for _ in 0..5 {
            let (l, _) = random_lattice(&r, 3, 2, &mut rng);
            let before = jordan_split(&l).map_err(|e| e.to_string())?.classification;
            let after = jordan_split(&l.rescale(1)).map_err(|e| e.to_string())?.classification;
            check(after.signature() == before.shifted(1).signature(), || "rescaling did not shift indices by 2".into())?;
            let shifted_down = before.shifted(-1);
            let _ = assemble(&shifted_down, 2, &BTreeMap::new());
        }
    }
    Ok(())
}

fn rank_one_paths() -> SuiteResult {
    for case in [Case::One, Case::Two] {
        let r = ring(case, 1);
        for a in [1, 3, 2] {
            let l = HermitianLattice::diagonal(&r, &[a]).map_err(|e| e.to_string())?;
            for d in 1..=3 {
                let lifted = congruence_count(&l, d, DEFAULT_BUDGET).map_err(|e| e.to_string())?;
                let direct = rank_one_direct_count(&l, d).map_err(|e| e.to_string())?;
                check(lifted == BigUint::from(direct), || format!("({a}) at d={d}: {lifted} vs {direct}"))?;
            }
        }
    }
    Ok(())
}

fn unimodular_match() -> SuiteResult {
    for case in [Case::One, Case::Two] {
        let r = ring(case, 1);
        for l in [HermitianLattice::diagonal(&r, &[1]), HermitianLattice::hyperbolic(&r, 0)] {
            let l = l.map_err(|e| e.to_string())?;
            let p = normalized_density(&l, 5, DEFAULT_BUDGET).map_err(|e| e.to_string())?;
            let beta = local_density(&l).map_err(|e| e.to_string())?.beta_l;
            check(p.stabilized_value.as_ref() == Some(&beta), || {
                format!("{case}: oracle {:?} vs formula {beta}", p.stabilized_value.as_ref().map(|v| v.to_string()))
            })?;
        }
    }
    Ok(())
}
