use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::ring::Case;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum BlockType {
    I,
    II,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum RankParity {
    #[serde(rename = "I^o")]
    Odd,
    #[serde(rename = "I^e")]
    Even,
    #[serde(rename = "NA")]
    NotApplicable,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Boundness {
    #[serde(rename = "free")]
    Free,
    /// Even index, type I, with a type-I block two steps away.
    #[serde(rename = "bound_I")]
    BoundI,
    /// Even index, type II, with a type-I block one step away.
    #[serde(rename = "bound_II")]
    BoundII,
    /// Odd index with a type-I neighbor.
    #[serde(rename = "bound")]
    Bound,
}

impl Boundness {
    pub fn is_bound(self) -> bool {
        self != Boundness::Free
    }
}

/// Block data before neighbor-dependent typing. `norm_minimal` is the block's own norm test:
/// n(L_i) = (π^i) for even i, n(L_i) = (π^{i+1}) for odd i.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct BlockSpec {
    pub i: i64,
    pub rank: usize,
    pub norm_minimal: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct JordanBlock {
    pub i: i64,
    pub rank: usize,
    /// Parity type for even i; the odd type for odd i.
    #[serde(rename = "parity")]
    pub block_type: BlockType,
    pub rank_parity: RankParity,
    pub boundness: Boundness,
    /// The block's own norm test; odd Case 2 blocks may still be type I through a neighbor.
    /// For odd bound blocks in Case 2 this depends on the splitting chosen, so it is not part
    /// of [`Classification::signature`].
    pub norm_minimal: bool,
}

impl JordanBlock {
    pub fn is_even(&self) -> bool {
        self.i.rem_euclid(2) == 0
    }

    pub fn type_one(&self) -> bool {
        self.block_type == BlockType::I
    }

    pub fn is_bound(&self) -> bool {
        self.boundness.is_bound()
    }
}

/// Classified type data: the nonzero blocks of a Jordan splitting with all flags set.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Classification {
    pub case: Case,
    pub blocks: Vec<JordanBlock>,
}

/// Type flags from block data alone. Absent indices count as zero lattices.
///
/// Even i: type I iff the norm test holds. Odd i: type II in Case 1; in Case 2 type I iff
/// A_i ⊋ B_i, which holds iff the block's own norm test holds or an adjacent even block is
/// of type I (their norm generators survive in A_i/πA_i with nonzero (1/2^m)q).
pub fn classify(case: Case, specs: &[BlockSpec]) -> Classification {
    let mut own: BTreeMap<i64, (usize, bool)> = BTreeMap::new();
    for s in specs.iter().filter(|s| s.rank > 0) {
        let e = own.entry(s.i).or_insert((0, false));
        e.0 += s.rank;
        e.1 |= s.norm_minimal;
    }
    let probe = Probe { case, own: &own };
    let blocks = own
        .iter()
        .map(|(&i, &(rank, norm_minimal))| {
            let t1 = probe.type_one(i);
            let even = i.rem_euclid(2) == 0;
            let boundness = if even {
                match (t1, probe.type_one(i - 2) || probe.type_one(i + 2), probe.type_one(i - 1) || probe.type_one(i + 1)) {
                    (true, true, _) => Boundness::BoundI,
                    (false, _, true) => Boundness::BoundII,
                    _ => Boundness::Free,
                }
            } else if probe.type_one(i - 1) || probe.type_one(i + 1) {
                Boundness::Bound
            } else {
                Boundness::Free
            };
            let rank_parity = match (even && t1, rank % 2) {
                (true, 1) => RankParity::Odd,
                (true, _) => RankParity::Even,
                _ => RankParity::NotApplicable,
            };
            JordanBlock {
                i,
                rank,
                block_type: if t1 { BlockType::I } else { BlockType::II },
                rank_parity,
                boundness,
                norm_minimal,
            }
        })
        .collect();
    Classification { case, blocks }
}

struct Probe<'a> {
    case: Case,
    own: &'a BTreeMap<i64, (usize, bool)>,
}

impl Probe<'_> {
    fn own_flag(&self, i: i64) -> bool {
        self.own.get(&i).map_or(false, |&(n, f)| n > 0 && f)
    }

    fn type_one(&self, i: i64) -> bool {
        if i.rem_euclid(2) == 0 {
            return self.own_flag(i);
        }
        match self.case {
            Case::One => false,
            Case::Two => self.own_flag(i) || self.own_flag(i - 1) || self.own_flag(i + 1),
        }
    }
}

impl Classification {
    pub fn empty(case: Case) -> Self {
        Classification { case, blocks: Vec::new() }
    }

    pub fn from_specs(case: Case, specs: &[BlockSpec]) -> Self {
        classify(case, specs)
    }

    pub fn specs(&self) -> Vec<BlockSpec> {
        self.blocks.iter().map(|b| BlockSpec { i: b.i, rank: b.rank, norm_minimal: b.norm_minimal }).collect()
    }

    pub fn block(&self, i: i64) -> Option<&JordanBlock> {
        self.blocks.iter().find(|b| b.i == i)
    }

    pub fn rank_at(&self, i: i64) -> usize {
        self.block(i).map_or(0, |b| b.rank)
    }

    pub fn total_rank(&self) -> usize {
        self.blocks.iter().map(|b| b.rank).sum()
    }

    /// Type of L_i for any i, including zero blocks.
    pub fn type_one(&self, i: i64) -> bool {
        let own: BTreeMap<i64, (usize, bool)> =
            self.blocks.iter().map(|b| (b.i, (b.rank, b.norm_minimal))).collect();
        Probe { case: self.case, own: &own }.type_one(i)
    }

    /// Smallest N with n_i = 0 for all i ≥ N.
    pub fn n_bound(&self) -> i64 {
        self.blocks.last().map_or(0, |b| b.i + 1)
    }

    /// Type data of π^j L: indices shift by 2j.
    pub fn shifted(&self, j: i64) -> Self {
        let specs: Vec<BlockSpec> =
            self.specs().into_iter().map(|s| BlockSpec { i: s.i + 2 * j, ..s }).collect();
        classify(self.case, &specs)
    }

    /// Lists compared by the isometry-invariance checks.
    pub fn signature(&self) -> Vec<(i64, usize, BlockType, RankParity, Boundness)> {
        self.blocks.iter().map(|b| (b.i, b.rank, b.block_type, b.rank_parity, b.boundness)).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spec(i: i64, rank: usize, norm_minimal: bool) -> BlockSpec {
        BlockSpec { i, rank, norm_minimal }
    }

    #[test]
    fn hyperbolic_unimodular_is_free_type_two() {
        let c = classify(Case::One, &[spec(0, 2, false)]);
        assert_eq!(c.blocks[0].block_type, BlockType::II);
        assert_eq!(c.blocks[0].boundness, Boundness::Free);
    }

    #[test]
    fn adjacent_even_type_one_blocks_are_bound() {
        let c = classify(Case::Two, &[spec(0, 1, true), spec(2, 1, true)]);
        assert!(c.blocks.iter().all(|b| b.boundness == Boundness::BoundI));
    }

    #[test]
    fn odd_case_two_norm_test() {
        let c = classify(Case::Two, &[spec(1, 2, true)]);
        assert_eq!(c.blocks[0].block_type, BlockType::I);
        assert_eq!(c.blocks[0].boundness, Boundness::Free);
        let c = classify(Case::Two, &[spec(1, 2, false)]);
        assert_eq!(c.blocks[0].block_type, BlockType::II);
    }

    #[test]
    fn odd_case_two_type_from_neighbor() {
        // A(4a,2δ,π) ⊕ (2c) and H(1) ⊕ (2c') must classify identically.
        let a = classify(Case::Two, &[spec(1, 2, true), spec(2, 1, true)]);
        let b = classify(Case::Two, &[spec(1, 2, false), spec(2, 1, true)]);
        assert_eq!(a.signature(), b.signature());
        assert_eq!(a.blocks[0].block_type, BlockType::I);
        assert_eq!(a.blocks[0].boundness, Boundness::Bound);
    }

    #[test]
    fn zero_odd_block_can_bind_even_type_two() {
        let c = classify(Case::Two, &[spec(0, 2, false), spec(2, 1, true)]);
        assert!(c.type_one(1));
        assert_eq!(c.blocks[0].boundness, Boundness::BoundII);
        let c = classify(Case::One, &[spec(0, 2, false), spec(2, 1, true)]);
        assert_eq!(c.blocks[0].boundness, Boundness::Free);
    }

    #[test]
    fn case_one_odd_blocks_are_type_two() {
        let c = classify(Case::One, &[spec(1, 2, true), spec(2, 1, true)]);
        assert_eq!(c.blocks[0].block_type, BlockType::II);
        assert_eq!(c.blocks[0].boundness, Boundness::Bound);
        assert_eq!(c.blocks[1].boundness, Boundness::Free);
    }

    #[test]
    fn shifting_preserves_flags() {
        let c = classify(Case::Two, &[spec(-1, 2, true), spec(0, 3, false), spec(3, 1, false), spec(4, 1, true)]);
        let s = c.shifted(1);
        for (a, b) in c.blocks.iter().zip(&s.blocks) {
            assert_eq!(a.i + 2, b.i);
            assert_eq!((a.block_type, a.rank_parity, a.boundness), (b.block_type, b.rank_parity, b.boundness));
        }
    }
}
