//! The ramified quadratic extension B = A ⊕ Aπ, truncated mod π^{2k}.

use std::fmt;

use super::galois::{AElem, GaloisRing};
use super::residue::{KElem, ResidueField};
use crate::error::{Error, Result, Stage};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Case {
    /// π = 1 + √(1+2u): π² = 2π + 2u, σ(π) = 2 − π.
    One,
    /// π = √(2δ): π² = 2δ, σ(π) = −π.
    Two,
}

impl Case {
    pub fn number(self) -> u8 {
        match self {
            Case::One => 1,
            Case::Two => 2,
        }
    }

    pub fn from_number(n: u64) -> Option<Case> {
        match n {
            1 => Some(Case::One),
            2 => Some(Case::Two),
            _ => None,
        }
    }
}

impl serde::Serialize for Case {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_u8(self.number())
    }
}

impl<'de> serde::Deserialize<'de> for Case {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let n = u64::deserialize(d)?;
        Case::from_number(n).ok_or_else(|| serde::de::Error::custom(format!("case must be 1 or 2, got {n}")))
    }
}

impl fmt::Display for Case {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Case {}", self.number())
    }
}

/// π-adic valuation; `Exhausted` means the element vanishes at working precision.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum PiVal {
    Finite(u32),
    Exhausted,
}

impl PiVal {
    pub fn finite(self) -> Option<u32> {
        match self {
            PiVal::Finite(v) => Some(v),
            PiVal::Exhausted => None,
        }
    }

    pub fn at_least(self, v: u32) -> bool {
        match self {
            PiVal::Finite(w) => w >= v,
            PiVal::Exhausted => true,
        }
    }
}

/// a0 + a1·π. Carries no context: arithmetic goes through [`RingContext`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Default)]
pub struct BElem {
    pub a0: AElem,
    pub a1: AElem,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RingContext {
    case: Case,
    a: GaloisRing,
    kappa: ResidueField,
    param: AElem,
    /// π² = pi_sq.a0 + pi_sq.a1·π
    pi_sq: BElem,
    /// N(π)/2 and its inverse; N(π) = −2u or −2δ.
    half_norm_pi: AElem,
    half_norm_pi_inv: AElem,
}

impl RingContext {
    /// Build a context; `param` holds the coefficients of the lift of u (Case 1) or δ (Case 2).
    pub fn new(case: Case, r: usize, param: &[i64], k: u32) -> Result<Self> {
        let a = GaloisRing::new(r, k)?;
        if param.len() > r {
            return Err(Error::Parse(format!(
                "parameter has {} coefficients, residue degree is {r}",
                param.len()
            )));
        }
        let coeffs: Vec<u64> = param.iter().map(|&c| c as u64).collect();
        Self::from_param(case, a, a_from(&coeffs))
    }

    fn from_param(case: Case, a: GaloisRing, raw: [u64; super::galois::MAX_DEGREE]) -> Result<Self> {
        let param = a.from_coeffs(&raw);
        if !a.is_unit(&param) {
            return Err(Error::NonUnitParam);
        }
        let two_param = a.mul_int(&param, 2);
        let pi_sq = match case {
            Case::One => BElem { a0: two_param, a1: a.from_int(2) },
            Case::Two => BElem { a0: two_param, a1: a.zero() },
        };
        let half_norm_pi = a.neg(&param);
        let half_norm_pi_inv = a.inv(&half_norm_pi)?;
        let kappa = a.residue_field();
        let ctx = RingContext { case, a, kappa, param, pi_sq, half_norm_pi, half_norm_pi_inv };
        ctx.check_uniformizer()?;
        Ok(ctx)
    }

    /// π satisfies x² − Tr(π)x + N(π) with Tr(π) ∈ 2A and N(π) ∈ 2A^×, and σ fixes A.
    fn check_uniformizer(&self) -> Result<()> {
        let a = &self.a;
        let pi = self.pi();
        let root = self.add(&self.sub(&self.mul(&pi, &pi), &self.mul(&self.from_a(self.trace(&pi)), &pi)), &self.from_a(self.norm(&pi)));
        let ok = root == self.zero()
            && a.val2(&self.trace(&pi)).is_none_or(|v| v >= 1)
            && a.val2(&self.norm(&pi)).is_none_or(|v| v == 1)
            && self.val(&pi) == PiVal::Finite(1)
            && self.sigma(&self.sigma(&pi)) == pi;
        if ok {
            Ok(())
        } else {
            Err(Error::internal(Stage::Ring, "uniformizer identities fail"))
        }
    }

    /// Same ring at a different 2-adic precision.
    pub fn with_precision(&self, k: u32) -> Result<Self> {
        let a = GaloisRing::new(self.a.degree(), k)?;
        Self::from_param(self.case, a, self.param.0)
    }

    pub fn case(&self) -> Case {
        self.case
    }

    pub fn galois(&self) -> &GaloisRing {
        &self.a
    }

    pub fn kappa(&self) -> &ResidueField {
        &self.kappa
    }

    pub fn residue_degree(&self) -> usize {
        self.a.degree()
    }

    /// f = #κ.
    pub fn f(&self) -> u64 {
        self.kappa.order()
    }

    /// 2-adic precision k.
    pub fn precision(&self) -> u32 {
        self.a.precision()
    }

    /// π-adic precision 2k.
    pub fn pi_precision(&self) -> u32 {
        2 * self.a.precision()
    }

    pub fn param(&self) -> &AElem {
        &self.param
    }

    /// δ ≡ 1 mod 2; only meaningful in Case 2.
    pub fn param_normalized(&self) -> bool {
        self.kappa_of_a(&self.param) == KElem::ONE
    }

    pub fn same_ring(&self, other: &RingContext) -> bool {
        self == other
    }

    /// Reinterpret an element of another context of the same ring at this precision.
    pub fn convert(&self, other: &RingContext, x: &BElem) -> BElem {
        BElem { a0: self.a.convert_from(&other.a, &x.a0), a1: self.a.convert_from(&other.a, &x.a1) }
    }

    // ---- constructors ----

    pub fn zero(&self) -> BElem {
        BElem::default()
    }

    pub fn one(&self) -> BElem {
        self.from_a(self.a.one())
    }

    pub fn pi(&self) -> BElem {
        BElem { a0: self.a.zero(), a1: self.a.one() }
    }

    pub fn from_a(&self, a0: AElem) -> BElem {
        BElem { a0, a1: self.a.zero() }
    }

    pub fn from_int(&self, v: i64) -> BElem {
        self.from_a(self.a.from_int(v))
    }

    /// a0 + a1π from integer scalars.
    pub fn from_ints(&self, a0: i64, a1: i64) -> BElem {
        BElem { a0: self.a.from_int(a0), a1: self.a.from_int(a1) }
    }

    pub fn pi_pow(&self, e: u32) -> BElem {
        let mut x = self.one();
        for _ in 0..e {
            x = self.mul_pi(&x);
        }
        x
    }

    // ---- ring operations ----

    pub fn add(&self, x: &BElem, y: &BElem) -> BElem {
        BElem { a0: self.a.add(&x.a0, &y.a0), a1: self.a.add(&x.a1, &y.a1) }
    }

    pub fn sub(&self, x: &BElem, y: &BElem) -> BElem {
        BElem { a0: self.a.sub(&x.a0, &y.a0), a1: self.a.sub(&x.a1, &y.a1) }
    }

    pub fn neg(&self, x: &BElem) -> BElem {
        BElem { a0: self.a.neg(&x.a0), a1: self.a.neg(&x.a1) }
    }

    pub fn mul(&self, x: &BElem, y: &BElem) -> BElem {
        let a = &self.a;
        let p00 = a.mul(&x.a0, &y.a0);
        let cross = a.add(&a.mul(&x.a0, &y.a1), &a.mul(&x.a1, &y.a0));
        if a.is_zero(&x.a1) || a.is_zero(&y.a1) {
            return BElem { a0: p00, a1: cross };
        }
        let p11 = a.mul(&x.a1, &y.a1);
        BElem {
            a0: a.add(&p00, &a.mul(&p11, &self.pi_sq.a0)),
            a1: a.add(&cross, &a.mul(&p11, &self.pi_sq.a1)),
        }
    }

    pub fn mul_a(&self, x: &BElem, c: &AElem) -> BElem {
        BElem { a0: self.a.mul(&x.a0, c), a1: self.a.mul(&x.a1, c) }
    }

    pub fn mul_pi(&self, x: &BElem) -> BElem {
        self.mul(x, &self.pi())
    }

    pub fn sigma(&self, x: &BElem) -> BElem {
        match self.case {
            Case::One => BElem {
                a0: self.a.add(&x.a0, &self.a.mul_int(&x.a1, 2)),
                a1: self.a.neg(&x.a1),
            },
            Case::Two => BElem { a0: x.a0, a1: self.a.neg(&x.a1) },
        }
    }

    /// x + σ(x) ∈ A.
    pub fn trace(&self, x: &BElem) -> AElem {
        match self.case {
            Case::One => self.a.mul_int(&self.a.add(&x.a0, &x.a1), 2),
            Case::Two => self.a.mul_int(&x.a0, 2),
        }
    }

    /// x·σ(x) ∈ A.
    pub fn norm(&self, x: &BElem) -> AElem {
        self.mul(x, &self.sigma(x)).a0
    }

    pub fn is_zero(&self, x: &BElem) -> bool {
        self.a.is_zero(&x.a0) && self.a.is_zero(&x.a1)
    }

    pub fn val(&self, x: &BElem) -> PiVal {
        let v0 = self.a.val2(&x.a0).map(|v| 2 * v);
        let v1 = self.a.val2(&x.a1).map(|v| 2 * v + 1);
        match (v0, v1) {
            (None, None) => PiVal::Exhausted,
            (Some(a), None) | (None, Some(a)) => PiVal::Finite(a),
            (Some(a), Some(b)) => PiVal::Finite(a.min(b)),
        }
    }

    pub fn is_unit(&self, x: &BElem) -> bool {
        self.a.is_unit(&x.a0)
    }

    pub fn inv(&self, x: &BElem) -> Result<BElem> {
        let n = self.norm(x);
        let ninv = self.a.inv(&n)?;
        Ok(self.mul_a(&self.sigma(x), &ninv))
    }

    /// x / π^v; requires val(x) ≥ v. The result is known mod π^{2k−2v}.
    pub fn div_pi_pow(&self, x: &BElem, v: u32) -> Result<BElem> {
        if v == 0 {
            return Ok(*x);
        }
        if !self.val(x).at_least(v) {
            return Err(Error::internal(crate::error::Stage::Ring, "division by π^v of element of smaller valuation"));
        }
        let spi = self.sigma(&self.pi());
        let mut y = *x;
        for _ in 0..v {
            y = self.mul(&y, &spi);
        }
        let y = BElem { a0: self.a.shr(&y.a0, v), a1: self.a.shr(&y.a1, v) };
        Ok(self.mul_a(&y, &self.a.pow(&self.half_norm_pi_inv, v as u64)))
    }

    /// x / N(π)^m; requires val(x) ≥ 2m.
    pub fn div_norm_pi_pow(&self, x: &BElem, m: u32) -> Result<BElem> {
        if m == 0 {
            return Ok(*x);
        }
        if !self.val(x).at_least(2 * m) {
            return Err(Error::internal(crate::error::Stage::Ring, "division by N(π)^m of element of smaller valuation"));
        }
        let y = BElem { a0: self.a.shr(&x.a0, m), a1: self.a.shr(&x.a1, m) };
        Ok(self.mul_a(&y, &self.a.pow(&self.half_norm_pi_inv, m as u64)))
    }

    /// N(π) = π·σ(π).
    pub fn norm_pi(&self) -> AElem {
        self.a.mul_int(&self.half_norm_pi, 2)
    }

    /// Residue class mod π.
    pub fn residue(&self, x: &BElem) -> KElem {
        self.a.residue(&x.a0)
    }

    pub fn kappa_of_a(&self, a: &AElem) -> KElem {
        self.a.residue(a)
    }

    /// Teichmüller-free lift of a residue (coefficients in {0,1}).
    pub fn lift(&self, c: KElem) -> BElem {
        self.from_a(self.a.lift(c))
    }

    /// σ(x) = x at working precision.
    pub fn is_sigma_fixed(&self, x: &BElem) -> bool {
        self.sigma(x) == *x
    }

    /// Canonical representative of a σ-fixed element: a1 = 0.
    pub fn canonical_fixed(&self, x: &BElem) -> BElem {
        self.from_a(x.a0)
    }

    /// x ≡ y mod π^e.
    pub fn eq_mod(&self, x: &BElem, y: &BElem, e: u32) -> bool {
        self.val(&self.sub(x, y)).at_least(e)
    }

    /// Reduce mod π^e (keep only the π-adic digits below e).
    pub fn truncate(&self, x: &BElem, e: u32) -> BElem {
        let m0 = low_mask((e + 1) / 2);
        let m1 = low_mask(e / 2);
        let mut y = *x;
        for j in 0..self.residue_degree() {
            y.a0.0[j] &= m0;
            y.a1.0[j] &= m1;
        }
        y
    }
}

fn low_mask(bits: u32) -> u64 {
    if bits >= 64 {
        u64::MAX
    } else {
        (1u64 << bits) - 1
    }
}

fn a_from(c: &[u64]) -> [u64; super::galois::MAX_DEGREE] {
    let mut out = [0u64; super::galois::MAX_DEGREE];
    out[..c.len()].copy_from_slice(c);
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn ctx(case: Case, r: usize) -> RingContext {
        RingContext::new(case, r, &[1], 12).unwrap()
    }

    fn elem(ctx: &RingContext, c: &[u64]) -> BElem {
        let r = ctx.residue_degree();
        let g = ctx.galois();
        BElem { a0: g.from_coeffs(&c[..r]), a1: g.from_coeffs(&c[r..2 * r]) }
    }

    #[test]
    fn uniformizer_identities() {
        let c1 = RingContext::new(Case::One, 1, &[1], 4).unwrap();
        let pi = c1.pi();
        let s = c1.sigma(&pi);
        assert_eq!(c1.add(&s, &pi), c1.from_int(2));
        assert_eq!(c1.mul(&s, &pi), c1.from_int(-2));
        assert_eq!(c1.val(&c1.add(&s, &pi)), PiVal::Finite(2));
        assert_eq!(c1.val(&c1.mul(&s, &pi)), PiVal::Finite(2));
        assert_eq!(c1.trace(&c1.one()), c1.galois().from_int(2));
        assert_eq!(c1.trace(&pi), c1.galois().from_int(2));

        let c2 = RingContext::new(Case::Two, 1, &[1], 4).unwrap();
        let pi = c2.pi();
        assert_eq!(c2.sigma(&pi), c2.neg(&pi));
        assert_eq!(c2.mul(&pi, &pi), c2.from_int(2));
        assert_eq!(c2.trace(&pi), c2.galois().zero());
        assert_eq!(c2.norm(&pi), c2.galois().from_int(-2));
    }

    #[test]
    fn rejects_bad_parameters() {
        assert!(matches!(RingContext::new(Case::One, 1, &[0], 4), Err(Error::NonUnitParam)));
        assert!(matches!(RingContext::new(Case::One, 9, &[1], 4), Err(Error::UnsupportedDegree { .. })));
    }

    #[test]
    fn valuations() {
        let c = ctx(Case::One, 2);
        assert_eq!(c.val(&c.from_int(2)), PiVal::Finite(2));
        assert_eq!(c.val(&c.mul(&c.pi(), &c.pi())), PiVal::Finite(2));
        assert_eq!(c.val(&c.zero()), PiVal::Exhausted);
        assert_eq!(c.val(&c.pi_pow(7)), PiVal::Finite(7));
    }

    #[test]
    fn division_by_pi_powers() {
        for case in [Case::One, Case::Two] {
            let c = ctx(case, 3);
            let x = c.from_ints(5, 3);
            for v in 0..6 {
                let y = c.mul(&x, &c.pi_pow(v));
                let q = c.div_pi_pow(&y, v).unwrap();
                assert!(c.eq_mod(&q, &x, c.pi_precision() - 2 * v));
            }
            let n = c.from_a(c.norm_pi());
            let y = c.mul(&c.mul(&x, &n), &n);
            assert_eq!(c.div_norm_pi_pow(&y, 2).unwrap(), x);
        }
    }

    fn arb_pair() -> impl Strategy<Value = (bool, usize, Vec<u64>, Vec<u64>, Vec<u64>)> {
        (any::<bool>(), 1usize..=4).prop_flat_map(|(c, r)| {
            (
                Just(c),
                Just(r),
                prop::collection::vec(any::<u64>(), 2 * r),
                prop::collection::vec(any::<u64>(), 2 * r),
                prop::collection::vec(any::<u64>(), 2 * r),
            )
        })
    }

    proptest! {
        #[test]
        fn sigma_is_involutive_automorphism((c, r, xs, ys, zs) in arb_pair()) {
            let ctx = ctx(if c { Case::One } else { Case::Two }, r);
            let (x, y, z) = (elem(&ctx, &xs), elem(&ctx, &ys), elem(&ctx, &zs));
            prop_assert_eq!(ctx.sigma(&ctx.sigma(&x)), x);
            prop_assert_eq!(ctx.sigma(&ctx.add(&x, &y)), ctx.add(&ctx.sigma(&x), &ctx.sigma(&y)));
            prop_assert_eq!(ctx.sigma(&ctx.mul(&x, &y)), ctx.mul(&ctx.sigma(&x), &ctx.sigma(&y)));
            prop_assert_eq!(ctx.mul(&ctx.mul(&x, &y), &z), ctx.mul(&x, &ctx.mul(&y, &z)));
            prop_assert_eq!(ctx.mul(&x, &ctx.add(&y, &z)), ctx.add(&ctx.mul(&x, &y), &ctx.mul(&x, &z)));
            let t = ctx.from_a(ctx.trace(&x));
            prop_assert_eq!(t, ctx.add(&x, &ctx.sigma(&x)));
            let n = ctx.from_a(ctx.norm(&x));
            prop_assert_eq!(n, ctx.mul(&x, &ctx.sigma(&x)));
        }

        #[test]
        fn valuation_is_multiplicative((c, r, xs, ys, _zs) in arb_pair()) {
            let ctx = ctx(if c { Case::One } else { Case::Two }, r);
            let (x, y) = (elem(&ctx, &xs), elem(&ctx, &ys));
            prop_assert_eq!(ctx.val(&x), ctx.val(&ctx.sigma(&x)));
            if let (PiVal::Finite(a), PiVal::Finite(b)) = (ctx.val(&x), ctx.val(&y)) {
                if a + b < ctx.pi_precision() {
                    prop_assert_eq!(ctx.val(&ctx.mul(&x, &y)), PiVal::Finite(a + b));
                }
                if a < ctx.precision() {
                    prop_assert_eq!(ctx.galois().val2(&ctx.norm(&x)), Some(a));
                }
            }
            if ctx.is_unit(&x) {
                let xi = ctx.inv(&x).unwrap();
                prop_assert_eq!(ctx.mul(&x, &xi), ctx.one());
            } else {
                prop_assert!(ctx.inv(&x).is_err());
            }
        }
    }
}
