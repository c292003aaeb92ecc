//! Finite classical groups over κ = F_f.

use num_bigint::BigUint;
use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum FactorKind {
    Sp,
    #[serde(rename = "O_plus")]
    OPlus,
    #[serde(rename = "O_minus")]
    OMinus,
    /// Odd-dimensional orthogonal group in characteristic 2; counted through Sp(dim − 1).
    #[serde(rename = "SO_odd")]
    SOOdd,
}

/// One factor of the maximal reductive quotient.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ReductiveFactor {
    pub kind: FactorKind,
    pub dim_space: usize,
    pub i: i64,
}

impl ReductiveFactor {
    pub fn new(kind: FactorKind, dim_space: usize, i: i64) -> Self {
        let f = ReductiveFactor { kind, dim_space, i };
        debug_assert!(f.is_valid(), "invalid factor {f:?}");
        f
    }

    pub fn is_valid(&self) -> bool {
        match self.kind {
            FactorKind::Sp => self.dim_space % 2 == 0,
            FactorKind::OPlus | FactorKind::OMinus => self.dim_space % 2 == 0 && self.dim_space >= 2,
            FactorKind::SOOdd => self.dim_space % 2 == 1,
        }
    }

    /// Half the dimension of the symplectic space the factor is counted through.
    fn m(&self) -> u32 {
        (self.dim_space / 2) as u32
    }

    pub fn group_order(&self, f: u64) -> BigUint {
        let m = self.m();
        let fb = BigUint::from(f);
        let prod = |upto: u32| (1..=upto).fold(BigUint::from(1u32), |acc, i| acc * (fb.pow(2 * i) - 1u32));
        match self.kind {
            FactorKind::Sp | FactorKind::SOOdd => fb.pow(m * m) * prod(m),
            FactorKind::OPlus => BigUint::from(2u32) * fb.pow(m * (m - 1)) * (fb.pow(m) - 1u32) * prod(m - 1),
            FactorKind::OMinus => BigUint::from(2u32) * fb.pow(m * (m - 1)) * (fb.pow(m) + 1u32) * prod(m - 1),
        }
    }

    pub fn group_dim(&self) -> i64 {
        let m = self.m() as i64;
        match self.kind {
            FactorKind::Sp | FactorKind::SOOdd => m * (2 * m + 1),
            FactorKind::OPlus | FactorKind::OMinus => m * (2 * m - 1),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::classical::{orthogonal_group_size, sum_of_planes, symplectic_group_size};
    use crate::ring::ResidueField;

    #[test]
    fn orders_match_enumeration_over_f2() {
        let k = ResidueField::new(1);
        let order = |kind, d| ReductiveFactor::new(kind, d, 0).group_order(2);
        assert_eq!(order(FactorKind::Sp, 2), BigUint::from(symplectic_group_size(&k, 2)));
        assert_eq!(order(FactorKind::Sp, 4), BigUint::from(symplectic_group_size(&k, 4)));
        assert_eq!(order(FactorKind::OPlus, 2), BigUint::from(orthogonal_group_size(&k, &sum_of_planes(&k, &[false]))));
        assert_eq!(order(FactorKind::OMinus, 2), BigUint::from(orthogonal_group_size(&k, &sum_of_planes(&k, &[true]))));
        assert_eq!(order(FactorKind::OPlus, 4), BigUint::from(orthogonal_group_size(&k, &sum_of_planes(&k, &[false, false]))));
        assert_eq!(order(FactorKind::OMinus, 4), BigUint::from(orthogonal_group_size(&k, &sum_of_planes(&k, &[false, true]))));
    }

    #[test]
    fn orders_over_f4_in_dimension_two() {
        let k = ResidueField::new(2);
        let order = |kind| ReductiveFactor::new(kind, 2, 0).group_order(4);
        assert_eq!(order(FactorKind::Sp), BigUint::from(symplectic_group_size(&k, 2)));
        assert_eq!(order(FactorKind::OPlus), BigUint::from(orthogonal_group_size(&k, &sum_of_planes(&k, &[false]))));
        assert_eq!(order(FactorKind::OMinus), BigUint::from(orthogonal_group_size(&k, &sum_of_planes(&k, &[true]))));
    }

    #[test]
    fn trivial_factors() {
        assert_eq!(ReductiveFactor::new(FactorKind::Sp, 0, 0).group_order(4), BigUint::from(1u32));
        assert_eq!(ReductiveFactor::new(FactorKind::SOOdd, 1, 0).group_order(4), BigUint::from(1u32));
        assert_eq!(ReductiveFactor::new(FactorKind::SOOdd, 1, 0).group_dim(), 0);
    }
}
