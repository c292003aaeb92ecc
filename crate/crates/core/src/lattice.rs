//! Hermitian lattices as Gram matrices over B.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::ring::{BElem, Matrix, PiVal, RingContext};

/// Nondegeneracy headroom: det valuation must not exceed 2k − 4.
pub const DEGENERACY_HEADROOM: u32 = 4;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HermitianLattice {
    ring: Arc<RingContext>,
    gram: Matrix,
}

impl HermitianLattice {
    /// Validate and canonicalize (diagonal a1 = 0).
    pub fn new(ring: Arc<RingContext>, gram: Matrix) -> Result<Self> {
        let l = Self::new_unchecked_nondegenerate(ring, gram)?;
        if l.rank() > 0 {
            let bound = l.ring.pi_precision().saturating_sub(DEGENERACY_HEADROOM);
            match l.det_val() {
                PiVal::Finite(v) if v <= bound => {}
                PiVal::Finite(v) => return Err(Error::Degenerate { det_val: Some(v), bound }),
                PiVal::Exhausted => return Err(Error::Degenerate { det_val: None, bound }),
            }
        }
        Ok(l)
    }

    /// Symmetry checks only; used for intermediate lattices whose determinant is known.
    pub fn new_unchecked_nondegenerate(ring: Arc<RingContext>, mut gram: Matrix) -> Result<Self> {
        if !gram.is_square() {
            return Err(Error::NotSquare);
        }
        let n = gram.rows();
        for i in 0..n {
            for j in i..n {
                if gram[(i, j)] != ring.sigma(&gram[(j, i)]) {
                    return Err(Error::NotHermitian { row: i, col: j });
                }
            }
            gram[(i, i)] = ring.canonical_fixed(&gram[(i, i)]);
        }
        Ok(HermitianLattice { ring, gram })
    }

    pub fn from_rows(ring: &Arc<RingContext>, rows: Vec<Vec<BElem>>) -> Result<Self> {
        Self::new(ring.clone(), Matrix::from_rows(rows)?)
    }

    pub fn zero(ring: &Arc<RingContext>) -> Self {
        HermitianLattice { ring: ring.clone(), gram: Matrix::zeros(0, 0) }
    }

    /// Diagonal lattice (a_1) ⊕ ... ⊕ (a_n) with a_j ∈ A given as integers.
    pub fn diagonal(ring: &Arc<RingContext>, entries: &[i64]) -> Result<Self> {
        let n = entries.len();
        let gram = Matrix::from_fn(n, n, |i, j| if i == j { ring.from_int(entries[i]) } else { ring.zero() });
        Self::new(ring.clone(), gram)
    }

    /// A(a, b, c): Gram [[a, c], [σ(c), b]].
    pub fn binary(ring: &Arc<RingContext>, a: BElem, b: BElem, c: BElem) -> Result<Self> {
        Self::from_rows(ring, vec![vec![a, c], vec![ring.sigma(&c), b]])
    }

    /// The hyperbolic plane H(i) = A(0, 0, π^i).
    pub fn hyperbolic(ring: &Arc<RingContext>, i: u32) -> Result<Self> {
        Self::binary(ring, ring.zero(), ring.zero(), ring.pi_pow(i))
    }

    pub fn ring(&self) -> &Arc<RingContext> {
        &self.ring
    }

    pub fn gram(&self) -> &Matrix {
        &self.gram
    }

    pub fn rank(&self) -> usize {
        self.gram.rows()
    }

    pub fn det_val(&self) -> PiVal {
        if self.rank() == 0 {
            return PiVal::Finite(0);
        }
        self.gram.det_val(&self.ring)
    }

    /// σ(ᵗU)·G·U for U with unit determinant.
    pub fn base_change(&self, u: &Matrix) -> Result<Self> {
        if u.rows() != self.rank() || !u.is_square() {
            return Err(Error::NotSquare);
        }
        if !u.is_unimodular(&self.ring) {
            return Err(Error::SingularU);
        }
        self.sublattice(u)
    }

    /// σ(ᵗU)·G·U for arbitrary U (passage to a sublattice).
    pub fn sublattice(&self, u: &Matrix) -> Result<Self> {
        let g = Matrix::congruence(&self.ring, &self.gram, u);
        Self::new_unchecked_nondegenerate(self.ring.clone(), g)
    }

    /// Exponent of the scale ideal s(L) = (π^s).
    pub fn scale_exp(&self) -> PiVal {
        self.gram.min_val(&self.ring)
    }

    /// Exponent of the norm ideal, generated by the g_jj, Tr(g_jk) and Tr(π g_jk).
    pub fn norm_exp(&self) -> PiVal {
        norm_exp_of(&self.ring, &self.gram)
    }

    pub fn direct_sum(&self, other: &Self) -> Result<Self> {
        if !self.ring.same_ring(&other.ring) {
            return Err(Error::ContextMismatch);
        }
        Ok(HermitianLattice { ring: self.ring.clone(), gram: self.gram.direct_sum(&other.gram) })
    }

    /// Gram ↦ N(π)^j·Gram, i.e. the lattice π^j L; shifts scale by 2j.
    pub fn rescale(&self, j: u32) -> Self {
        let np = self.ring.from_a(self.ring.galois().pow(&self.ring.norm_pi(), j as u64));
        let gram = self.gram.map(|x| self.ring.mul(x, &np));
        HermitianLattice { ring: self.ring.clone(), gram }
    }

    /// Same Gram entries read in a context of different precision.
    pub fn with_ring(&self, ring: &Arc<RingContext>) -> Result<Self> {
        let mut gram = self.gram.map(|x| ring.convert(&self.ring, x));
        // lifted representatives need not stay conjugate above the old precision
        for i in 0..gram.rows() {
            for j in 0..i {
                gram[(i, j)] = ring.sigma(&gram[(j, i)]);
            }
        }
        Self::new(ring.clone(), gram)
    }
}

/// π-adic exponent of the norm ideal of a Gram matrix.
pub fn norm_exp_of(ring: &RingContext, g: &Matrix) -> PiVal {
    let n = g.rows();
    let a = ring.galois();
    let mut best = PiVal::Exhausted;
    for i in 0..n {
        best = best.min(ring.val(&g[(i, i)]));
        for j in i + 1..n {
            let t = a.val2(&ring.trace(&g[(i, j)]));
            let tp = a.val2(&ring.trace(&ring.mul(&ring.pi(), &g[(i, j)])));
            for v in [t, tp].into_iter().flatten() {
                best = best.min(PiVal::Finite(2 * v));
            }
        }
    }
    best
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::Case;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn ring(case: Case) -> Arc<RingContext> {
        Arc::new(RingContext::new(case, 1, &[1], 16).unwrap())
    }

    #[test]
    fn raising_precision_keeps_scrambled_lattices_hermitian() {
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        for case in [Case::One, Case::Two] {
            let r = ring(case);
            let finer = Arc::new(r.with_precision(30).unwrap());
            for _ in 0..20 {
                let (l, _) = crate::gen::random_lattice(&r, 4, 4, &mut rng);
                let lifted = l.with_ring(&finer).unwrap();
                assert_eq!(lifted.with_ring(&r).unwrap(), l);
                assert_eq!(lifted.det_val(), l.det_val());
            }
        }
    }

    #[test]
    fn scale_and_norm_examples() {
        for case in [Case::One, Case::Two] {
            let r = ring(case);
            let h0 = HermitianLattice::hyperbolic(&r, 0).unwrap();
            assert_eq!(h0.scale_exp(), PiVal::Finite(0));
            assert_eq!(h0.norm_exp(), PiVal::Finite(2));
            let d1 = HermitianLattice::diagonal(&r, &[1]).unwrap();
            assert_eq!((d1.scale_exp(), d1.norm_exp()), (PiVal::Finite(0), PiVal::Finite(0)));
            let d2 = HermitianLattice::diagonal(&r, &[2]).unwrap();
            assert_eq!((d2.scale_exp(), d2.norm_exp()), (PiVal::Finite(2), PiVal::Finite(2)));
            assert_eq!(h0.rescale(1).scale_exp(), PiVal::Finite(2));
            assert_eq!(d1.rescale(2).norm_exp(), PiVal::Finite(4));
            let s = d1.direct_sum(&h0).unwrap();
            assert_eq!(s.rank(), 3);
            assert_eq!(s.norm_exp(), PiVal::Finite(0));
        }
    }

    #[test]
    fn rejects_non_hermitian() {
        let r = ring(Case::Two);
        let g = vec![vec![r.one(), r.pi()], vec![r.pi(), r.one()]];
        assert!(matches!(HermitianLattice::from_rows(&r, g), Err(Error::NotHermitian { .. })));
    }

    #[test]
    fn rejects_degenerate() {
        let r = ring(Case::One);
        assert!(matches!(HermitianLattice::diagonal(&r, &[1, 0]), Err(Error::Degenerate { .. })));
    }

    #[test]
    fn base_change_preserves_invariants() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for case in [Case::One, Case::Two] {
            let r = ring(case);
            let l = HermitianLattice::hyperbolic(&r, 1)
                .unwrap()
                .direct_sum(&HermitianLattice::diagonal(&r, &[2]).unwrap())
                .unwrap();
            for _ in 0..20 {
                let u = Matrix::random_unit(&r, 3, &mut rng);
                let m = l.base_change(&u).unwrap();
                assert_eq!(m.scale_exp(), l.scale_exp());
                assert_eq!(m.norm_exp(), l.norm_exp());
                assert_eq!(m.det_val(), l.det_val());
                let back = m.base_change(&u.inverse(&r).unwrap()).unwrap();
                assert_eq!(back, l);
            }
        }
    }

    #[test]
    fn basis_move_on_diag() {
        // (e1, (1−β)e1 + βe2) on diag(1,1): the Gram becomes [[1, 1−β], [1−β, (1−β)² + β²]].
        let r = ring(Case::One);
        let l = HermitianLattice::diagonal(&r, &[1, 1]).unwrap();
        let beta = r.from_int(3);
        let omb = r.sub(&r.one(), &beta);
        let u = Matrix::from_rows(vec![vec![r.one(), omb], vec![r.zero(), beta]]).unwrap();
        let m = l.base_change(&u).unwrap();
        assert_eq!(m.gram()[(0, 1)], omb);
        assert_eq!(m.gram()[(1, 1)], r.from_int(4 + 9));
    }
}
