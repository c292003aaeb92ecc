//! Integer invariants read off the type data: factor list, β, N, and the dimension ledger.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::groups::{FactorKind, ReductiveFactor};
use crate::forms::FormKind;
use crate::jordan::{Boundness, Classification, JordanBlock, RankParity};
use crate::ring::Case;

/// Kind and κ-dimension of the residue form the reductive quotient acts on at a nonzero block.
pub fn expected_form(case: Case, b: &JordanBlock) -> (FormKind, usize) {
    let n = b.rank;
    match (case, b.is_even()) {
        (Case::One, true) => {
            let d = match b.rank_parity {
                RankParity::Odd => n - 1,
                RankParity::Even => n - 2,
                RankParity::NotApplicable => n,
            };
            (FormKind::Symplectic, d)
        }
        (Case::One, false) => (FormKind::Quadratic, if b.is_bound() { n + 1 } else { n }),
        (Case::Two, true) => {
            let d = match (b.rank_parity, b.boundness) {
                (RankParity::Odd, _) => n,
                (RankParity::Even, _) => n - 1,
                (RankParity::NotApplicable, Boundness::BoundII) => n + 1,
                (RankParity::NotApplicable, _) => n,
            };
            (FormKind::Quadratic, d)
        }
        (Case::Two, false) => {
            let free_one = b.type_one() && !b.is_bound();
            (FormKind::Symplectic, if free_one { n - 2 } else { n })
        }
    }
}

/// Whether the factor at this block is an even-dimensional orthogonal group, whose sign needs
/// the Arf invariant of the residue form.
pub fn needs_arf(case: Case, b: &JordanBlock) -> bool {
    let (kind, d) = expected_form(case, b);
    kind == FormKind::Quadratic && d % 2 == 0 && d > 0
}

/// One factor per nonzero block; Sp of dimension 0 is dropped. `arfs` supplies the Arf
/// invariant of each block with [`needs_arf`]; a missing entry reads as 0.
pub fn reductive_factors(cls: &Classification, arfs: &BTreeMap<i64, u8>) -> Vec<ReductiveFactor> {
    let mut out = Vec::new();
    for b in &cls.blocks {
        let (kind, d) = expected_form(cls.case, b);
        let fk = match kind {
            FormKind::Symplectic if d == 0 => continue,
            FormKind::Symplectic => FactorKind::Sp,
            FormKind::Quadratic if d % 2 == 1 => FactorKind::SOOdd,
            FormKind::Quadratic if arfs.get(&b.i).copied().unwrap_or(0) == 0 => FactorKind::OPlus,
            FormKind::Quadratic => FactorKind::OMinus,
        };
        out.push(ReductiveFactor::new(fk, d, b.i));
    }
    out
}

/// Exponent of the 2-group of components. Absent blocks take their type from the
/// classification's rule for zero lattices.
pub fn component_beta(cls: &Classification) -> u32 {
    let t = |j: i64| cls.type_one(j);
    let (lo, hi) = match (cls.blocks.first(), cls.blocks.last()) {
        (Some(a), Some(b)) => (a.i - 1, b.i + 1),
        _ => return 0,
    };
    let mut beta = 0;
    for j in lo..=hi {
        let hit = match (cls.case, j.rem_euclid(2) == 0) {
            (Case::One, true) => t(j) && !t(j + 2),
            (Case::One, false) => false,
            (Case::Two, true) => t(j) && !t(j + 2) && !t(j + 3) && !t(j + 4),
            (Case::Two, false) => t(j) && !t(j - 1) && !t(j + 1) && !t(j + 2) && !t(j + 3),
        };
        beta += hit as u32;
    }
    beta
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Exponents {
    #[serde(rename = "N")]
    pub n: i64,
    #[serde(rename = "N_M")]
    pub n_m: i64,
    #[serde(rename = "N_H")]
    pub n_h: i64,
    /// Odd free type-I blocks (Case 2); zero in Case 1.
    pub a: i64,
}

/// d_i = i·n_i(n_i − 1)/2.
pub fn d_i(i: i64, n: usize) -> i64 {
    let n = n as i64;
    i * n * (n - 1) / 2
}

/// N, N_M and N_H, each from its own formula.
pub fn compute_n(cls: &Classification) -> Exponents {
    let bl = &cls.blocks;
    let n = |b: &JordanBlock| b.rank as i64;
    let mut cross_i = 0;
    let mut cross_gap = 0;
    let mut cross_j = 0;
    for (x, p) in bl.iter().enumerate() {
        for q in &bl[x + 1..] {
            let nn = n(p) * n(q);
            cross_i += p.i * nn;
            cross_gap += (q.i - p.i) * nn;
            cross_j += q.i * nn;
        }
    }
    let d: i64 = bl.iter().map(|b| d_i(b.i, b.rank)).sum();
    let odd_shift = match cls.case {
        Case::One => 1,
        Case::Two => 3,
    };
    let linear: i64 = bl
        .iter()
        .map(|b| if b.is_even() { (b.i + 2) / 2 * n(b) } else { (b.i + odd_shift).div_euclid(2) * n(b) })
        .sum();
    match cls.case {
        Case::One => {
            let even_one = || bl.iter().filter(|b| b.is_even() && b.type_one());
            let nm = even_one().map(|b| 2 * n(b) - 1).sum::<i64>() + cross_gap;
            let nh = even_one().map(|b| n(b) - 1).sum::<i64>() + cross_j + linear + d;
            let nn = cross_i + linear + d - even_one().map(n).sum::<i64>();
            Exponents { n: nn, n_m: nm, n_h: nh, a: 0 }
        }
        Case::Two => {
            let a = bl.iter().filter(|b| !b.is_even() && b.type_one() && !b.is_bound()).count() as i64;
            let ones: i64 = bl.iter().filter(|b| b.type_one()).map(n).sum();
            let nm = 2 * ones + cross_gap - a;
            let nh = ones + cross_j + linear + d - a;
            let nn = cross_i + linear + d - ones;
            Exponents { n: nn, n_m: nm, n_h: nh, a }
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DimLedger {
    #[serde(rename = "dim_G1")]
    pub dim_g1: i64,
    pub l_prime: i64,
    pub l: i64,
}

/// Dimension of the connected unipotent pieces: G̃¹ and the kernel of its map to the reductive
/// quotient. l = dim_G1 + l_prime is the dimension of the unipotent radical.
pub fn appendix_ledger(cls: &Classification) -> DimLedger {
    let bl = &cls.blocks;
    let n = |b: &JordanBlock| b.rank as i64;
    let mut cross = 0;
    for (x, p) in bl.iter().enumerate() {
        for q in &bl[x + 1..] {
            cross += n(p) * n(q);
        }
    }
    let tri_plus = |b: &JordanBlock| (n(b) * n(b) + n(b)) / 2;
    let tri_minus = |b: &JordanBlock| (n(b) * n(b) - n(b)) / 2;
    let (dim_g1, l_prime) = match cls.case {
        Case::One => {
            let g1 = cross
                + bl.iter().map(|b| if b.is_even() { tri_minus(b) } else { tri_plus(b) }).sum::<i64>()
                + bl.iter().filter(|b| b.is_even() && b.type_one()).count() as i64;
            let lp = cross
                - bl.iter().filter(|b| !b.is_even() && b.is_bound()).map(n).sum::<i64>()
                + bl
                    .iter()
                    .map(|b| match b.rank_parity {
                        RankParity::Odd => n(b) - 1,
                        RankParity::Even => 2 * n(b) - 2,
                        RankParity::NotApplicable => 0,
                    })
                    .sum::<i64>();
            (g1, lp)
        }
        Case::Two => {
            let even_one = bl.iter().filter(|b| b.is_even() && b.type_one()).count() as i64;
            let even_one_capped =
                bl.iter().filter(|b| b.is_even() && b.type_one() && !cls.type_one(b.i + 2)).count() as i64;
            let odd_free_one: Vec<&JordanBlock> =
                bl.iter().filter(|b| !b.is_even() && b.type_one() && !b.is_bound()).collect();
            let g1 = cross
                + bl.iter().map(|b| if b.is_even() { tri_plus(b) } else { tri_minus(b) }).sum::<i64>()
                + odd_free_one.len() as i64
                - even_one
                + even_one_capped;
            let lp = cross
                + bl.iter().filter(|b| b.rank_parity == RankParity::Even).map(|b| n(b) - 1).sum::<i64>()
                + odd_free_one.iter().map(|b| 2 * n(b) - 2).sum::<i64>()
                - bl.iter().filter(|b| b.boundness == Boundness::BoundII).map(n).sum::<i64>()
                + even_one
                - even_one_capped;
            (g1, lp)
        }
    };
    DimLedger { dim_g1, l_prime, l: dim_g1 + l_prime }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gen::random_classification;
    use crate::jordan::{classify, BlockSpec};
    use rand::SeedableRng;

    fn cls(case: Case, blocks: &[(i64, usize, bool)]) -> Classification {
        let specs: Vec<BlockSpec> =
            blocks.iter().map(|&(i, rank, norm_minimal)| BlockSpec { i, rank, norm_minimal }).collect();
        classify(case, &specs)
    }

    #[test]
    fn n_for_small_unimodular_lattices() {
        assert_eq!(compute_n(&cls(Case::One, &[(0, 2, false)])).n, 2);
        assert_eq!(compute_n(&cls(Case::One, &[(0, 1, true)])).n, 0);
        assert_eq!(compute_n(&Classification::empty(Case::Two)), Exponents { n: 0, n_m: 0, n_h: 0, a: 0 });
    }

    #[test]
    fn beta_examples() {
        assert_eq!(component_beta(&cls(Case::One, &[(0, 1, true)])), 1);
        assert_eq!(component_beta(&cls(Case::One, &[(0, 2, false)])), 0);
        assert_eq!(component_beta(&cls(Case::One, &[(0, 1, true), (2, 1, true)])), 1);
    }

    #[test]
    fn single_block_ledgers() {
        for n in [2usize, 4, 6] {
            let c = cls(Case::One, &[(0, n, false)]);
            let l = appendix_ledger(&c);
            assert_eq!((l.dim_g1, l.l_prime), (((n * n - n) / 2) as i64, 0));
            let c = cls(Case::Two, &[(0, n, false)]);
            let l = appendix_ledger(&c);
            assert_eq!((l.dim_g1, l.l_prime), (((n * n + n) / 2) as i64, 0));
        }
        assert_eq!(appendix_ledger(&Classification::empty(Case::One)), DimLedger { dim_g1: 0, l_prime: 0, l: 0 });
    }

    fn closure_holds(c: &Classification) -> bool {
        let n = c.total_rank() as i64;
        let red: i64 = reductive_factors(c, &BTreeMap::new()).iter().map(|f| f.group_dim()).sum();
        appendix_ledger(c).l + red == n * n
    }

    #[test]
    fn closure_on_random_type_data() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        for case in [Case::One, Case::Two] {
            for _ in 0..400 {
                let c = random_classification(case, 6, -2, 6, &mut rng);
                assert!(closure_holds(&c), "{c:?}");
                let e = compute_n(&c);
                assert_eq!(e.n, e.n_h - e.n_m, "{c:?}");
            }
        }
    }
}
