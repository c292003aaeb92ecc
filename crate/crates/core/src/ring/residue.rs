//! The residue field κ = F_2[t]/(Φ mod 2), elements as bitmasks.

use serde::{Deserialize, Serialize};

/// Conway polynomials over F_2, bit j is the coefficient of t^j (leading bit included).
pub const CONWAY: [u16; 9] = [
    0,
    0b11,
    0b111,
    0b1011,
    0b10011,
    0b100101,
    0b1011011,
    0b10000011,
    0b100011101,
];

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Default, Serialize, Deserialize)]
pub struct KElem(pub u16);

impl KElem {
    pub const ZERO: KElem = KElem(0);
    pub const ONE: KElem = KElem(1);

    pub fn is_zero(self) -> bool {
        self.0 == 0
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ResidueField {
    r: usize,
    poly: u16,
}

impl ResidueField {
    pub fn new(r: usize) -> Self {
        ResidueField { r, poly: CONWAY[r] }
    }

    pub fn degree(&self) -> usize {
        self.r
    }

    pub fn order(&self) -> u64 {
        1u64 << self.r
    }

    pub fn elements(&self) -> impl Iterator<Item = KElem> {
        (0..(1u16 << self.r)).map(KElem)
    }

    pub fn add(&self, a: KElem, b: KElem) -> KElem {
        KElem(a.0 ^ b.0)
    }

    pub fn mul(&self, a: KElem, b: KElem) -> KElem {
        let mut prod: u32 = 0;
        for j in 0..self.r {
            if (b.0 >> j) & 1 == 1 {
                prod ^= (a.0 as u32) << j;
            }
        }
        for d in (self.r..2 * self.r).rev() {
            if (prod >> d) & 1 == 1 {
                prod ^= (self.poly as u32) << (d - self.r);
            }
        }
        KElem(prod as u16)
    }

    pub fn pow(&self, a: KElem, mut e: u64) -> KElem {
        let mut base = a;
        let mut acc = KElem::ONE;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    pub fn inv(&self, a: KElem) -> Option<KElem> {
        if a.is_zero() {
            None
        } else {
            Some(self.pow(a, self.order() - 2))
        }
    }

    pub fn square(&self, a: KElem) -> KElem {
        self.mul(a, a)
    }

    /// The unique square root; squaring is bijective on κ.
    pub fn sqrt(&self, c: KElem) -> KElem {
        self.pow(c, 1u64 << (self.r - 1))
    }

    /// Absolute trace κ -> F_2.
    pub fn abs_trace(&self, a: KElem) -> u8 {
        let mut acc = KElem::ZERO;
        let mut x = a;
        for _ in 0..self.r {
            acc = self.add(acc, x);
            x = self.square(x);
        }
        debug_assert!(acc.0 <= 1);
        acc.0 as u8
    }
}

/// Alias used by callers that only need the Frobenius root.
pub fn frobenius_sqrt(field: &ResidueField, c: KElem) -> KElem {
    field.sqrt(c)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn conway_polynomials_are_irreducible() {
        // A degree-r polynomial is irreducible iff no polynomial of degree 1..=r/2 divides it.
        fn rem(mut a: u32, b: u32) -> u32 {
            let db = 31 - b.leading_zeros();
            while a != 0 && 31 - a.leading_zeros() >= db {
                a ^= b << (31 - a.leading_zeros() - db);
            }
            a
        }
        for r in 1..=8usize {
            let p = CONWAY[r] as u32;
            for d in 1..=r / 2 {
                for q in (1u32 << d)..(1u32 << (d + 1)) {
                    assert_ne!(rem(p, q), 0, "r={r} divisible by {q:b}");
                }
            }
        }
    }

    #[test]
    fn field_axioms_small() {
        for r in 1..=4 {
            let k = ResidueField::new(r);
            for a in k.elements() {
                if !a.is_zero() {
                    assert_eq!(k.mul(a, k.inv(a).unwrap()), KElem::ONE);
                }
                assert_eq!(k.square(k.sqrt(a)), a);
                for b in k.elements() {
                    assert_eq!(k.mul(a, b), k.mul(b, a));
                }
            }
        }
    }

    #[test]
    fn frobenius_root_in_f4() {
        let k = ResidueField::new(2);
        let t = KElem(0b10);
        let t2 = k.square(t);
        assert_eq!(t2, KElem(0b11));
        assert_eq!(frobenius_sqrt(&k, t), t2);
        assert_eq!(frobenius_sqrt(&k, KElem::ONE), KElem::ONE);
        assert_eq!(frobenius_sqrt(&k, KElem::ZERO), KElem::ZERO);
    }

    #[test]
    fn trace_is_onto_f2() {
        for r in 1..=8 {
            let k = ResidueField::new(r);
            let ones = k.elements().filter(|&a| k.abs_trace(a) == 1).count();
            assert_eq!(ones as u64, k.order() / 2);
        }
    }
}
