//! The Galois ring GR(2^k, r) = (Z/2^k)[t]/(Φ).

use super::residue::{KElem, ResidueField, CONWAY};
use crate::error::{Error, Result};

pub const MAX_DEGREE: usize = 8;

/// Element of A/2^k: coefficients of 1, t, ..., t^{r-1}; unused slots stay zero.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Default)]
pub struct AElem(pub [u64; MAX_DEGREE]);

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GaloisRing {
    r: usize,
    k: u32,
    mask: u64,
    /// Φ = t^r + Σ phi[j] t^j with phi[j] ∈ {0,1}.
    phi: [u64; MAX_DEGREE],
}

impl GaloisRing {
    pub fn new(r: usize, k: u32) -> Result<Self> {
        if r == 0 || r > MAX_DEGREE {
            return Err(Error::UnsupportedDegree { r, max: MAX_DEGREE });
        }
        if k == 0 || k > 64 {
            return Err(Error::UnsupportedPrecision { k });
        }
        let mut phi = [0u64; MAX_DEGREE];
        for (j, p) in phi.iter_mut().enumerate().take(r) {
            *p = (CONWAY[r] >> j) as u64 & 1;
        }
        let mask = if k == 64 { u64::MAX } else { (1u64 << k) - 1 };
        Ok(GaloisRing { r, k, mask, phi })
    }

    pub fn degree(&self) -> usize {
        self.r
    }

    pub fn precision(&self) -> u32 {
        self.k
    }

    pub fn mask(&self) -> u64 {
        self.mask
    }

    pub fn residue_field(&self) -> ResidueField {
        ResidueField::new(self.r)
    }

    pub fn zero(&self) -> AElem {
        AElem::default()
    }

    pub fn one(&self) -> AElem {
        self.from_int(1)
    }

    pub fn from_int(&self, v: i64) -> AElem {
        let mut a = AElem::default();
        a.0[0] = (v as u64) & self.mask;
        a
    }

    /// Coefficients beyond degree r-1 are rejected by the caller; here they are reduced mod 2^k.
    pub fn from_coeffs(&self, c: &[u64]) -> AElem {
        let mut a = AElem::default();
        for (j, &v) in c.iter().enumerate().take(self.r) {
            a.0[j] = v & self.mask;
        }
        a
    }

    pub fn coeffs(&self, a: &AElem) -> Vec<u64> {
        a.0[..self.r].to_vec()
    }

    pub fn add(&self, a: &AElem, b: &AElem) -> AElem {
        let mut c = AElem::default();
        for j in 0..self.r {
            c.0[j] = a.0[j].wrapping_add(b.0[j]) & self.mask;
        }
        c
    }

    pub fn sub(&self, a: &AElem, b: &AElem) -> AElem {
        let mut c = AElem::default();
        for j in 0..self.r {
            c.0[j] = a.0[j].wrapping_sub(b.0[j]) & self.mask;
        }
        c
    }

    pub fn neg(&self, a: &AElem) -> AElem {
        self.sub(&self.zero(), a)
    }

    pub fn mul_int(&self, a: &AElem, s: i64) -> AElem {
        let mut c = AElem::default();
        for j in 0..self.r {
            c.0[j] = a.0[j].wrapping_mul(s as u64) & self.mask;
        }
        c
    }

    pub fn mul(&self, a: &AElem, b: &AElem) -> AElem {
        let r = self.r;
        if r == 1 {
            let mut c = AElem::default();
            c.0[0] = a.0[0].wrapping_mul(b.0[0]) & self.mask;
            return c;
        }
        let mut prod = [0u64; 2 * MAX_DEGREE];
        for i in 0..r {
            if a.0[i] == 0 {
                continue;
            }
            for j in 0..r {
                prod[i + j] = prod[i + j].wrapping_add(a.0[i].wrapping_mul(b.0[j]));
            }
        }
        // Arithmetic mod 2^64 then masking is the ring map Z/2^64 -> Z/2^k.
        for d in (r..2 * r - 1).rev() {
            let c = prod[d];
            if c == 0 {
                continue;
            }
            prod[d] = 0;
            for j in 0..r {
                if self.phi[j] != 0 {
                    prod[d - r + j] = prod[d - r + j].wrapping_sub(c);
                }
            }
        }
        let mut out = AElem::default();
        for j in 0..r {
            out.0[j] = prod[j] & self.mask;
        }
        out
    }

    pub fn is_zero(&self, a: &AElem) -> bool {
        a.0[..self.r].iter().all(|&c| c == 0)
    }

    /// 2-adic valuation; `None` when a ≡ 0 mod 2^k.
    pub fn val2(&self, a: &AElem) -> Option<u32> {
        a.0[..self.r]
            .iter()
            .filter(|&&c| c != 0)
            .map(|c| c.trailing_zeros())
            .min()
    }

    pub fn is_unit(&self, a: &AElem) -> bool {
        self.val2(a) == Some(0)
    }

    /// Multiply by 2^s.
    pub fn shl(&self, a: &AElem, s: u32) -> AElem {
        let mut c = AElem::default();
        if s >= 64 {
            return c;
        }
        for j in 0..self.r {
            c.0[j] = (a.0[j] << s) & self.mask;
        }
        c
    }

    /// Exact division by 2^s; the top s digits of the result are unknown and set to zero.
    pub fn shr(&self, a: &AElem, s: u32) -> AElem {
        debug_assert!(self.val2(a).map_or(true, |v| v >= s));
        let mut c = AElem::default();
        if s >= 64 {
            return c;
        }
        for j in 0..self.r {
            c.0[j] = a.0[j] >> s;
        }
        c
    }

    pub fn residue(&self, a: &AElem) -> KElem {
        let mut bits = 0u16;
        for j in 0..self.r {
            bits |= ((a.0[j] & 1) as u16) << j;
        }
        KElem(bits)
    }

    /// Lift with coefficients in {0,1}.
    pub fn lift(&self, c: KElem) -> AElem {
        let mut a = AElem::default();
        for j in 0..self.r {
            a.0[j] = ((c.0 >> j) & 1) as u64;
        }
        a
    }

    pub fn inv(&self, a: &AElem) -> Result<AElem> {
        if !self.is_unit(a) {
            return Err(Error::NonUnitInverse);
        }
        let field = self.residue_field();
        let r0 = field.inv(self.residue(a)).ok_or(Error::NonUnitInverse)?;
        let mut x = self.lift(r0);
        let two = self.from_int(2);
        // Newton: each step doubles the number of correct digits.
        let mut correct = 1u32;
        while correct < self.k {
            let ax = self.mul(a, &x);
            x = self.mul(&x, &self.sub(&two, &ax));
            correct *= 2;
        }
        Ok(x)
    }

    pub fn pow(&self, a: &AElem, mut e: u64) -> AElem {
        let mut base = *a;
        let mut acc = self.one();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            base = self.mul(&base, &base);
            e >>= 1;
        }
        acc
    }

    /// Reinterpret an element at a different precision. Growing sign-extends, so small
    /// negative integers keep their meaning.
    pub fn convert_from(&self, other: &GaloisRing, a: &AElem) -> AElem {
        debug_assert_eq!(self.r, other.r);
        let mut out = AElem::default();
        let shift = 64 - other.k;
        for j in 0..self.r {
            let signed = ((a.0[j] << shift) as i64) >> shift;
            out.0[j] = (signed as u64) & self.mask;
        }
        out
    }
}
