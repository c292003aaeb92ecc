//! Reference values recomputed here with plain integer arithmetic, independent of the library's
//! ring code, then compared with what the library reports.

use std::sync::Arc;

use num_bigint::BigUint;
use num_rational::BigRational;

use herm2::density::local_density;
use herm2::lattice::HermitianLattice;
use herm2::oracle::{congruence_count, normalized_density, DEFAULT_BUDGET};
use herm2::ring::{Case, RingContext};

/// B/2^d B for r = 1 as pairs (a, b) ↦ a + bπ with both coordinates mod 2^d.
#[derive(Clone, Copy)]
struct Toy {
    case: Case,
    m: u64,
}

impl Toy {
    fn new(case: Case, d: u32) -> Self {
        Toy { case, m: 1 << d }
    }

    fn mul(&self, x: (u64, u64), y: (u64, u64)) -> (u64, u64) {
        let m = self.m;
        let (a, b, c, e) = (x.0, x.1, y.0, y.1);
        match self.case {
            // π² = 2π + 2
            Case::One => ((a * c + 2 * b * e) % m, (a * e + b * c + 2 * b * e) % m),
            // π² = 2
            Case::Two => ((a * c + 2 * b * e) % m, (a * e + b * c) % m),
        }
    }

    fn sigma(&self, x: (u64, u64)) -> (u64, u64) {
        let m = self.m;
        match self.case {
            Case::One => ((x.0 + 2 * x.1) % m, (m - x.1) % m),
            Case::Two => (x.0, (m - x.1) % m),
        }
    }

    fn add(&self, x: (u64, u64), y: (u64, u64)) -> (u64, u64) {
        ((x.0 + y.0) % self.m, (x.1 + y.1) % self.m)
    }

    fn elements(&self) -> Vec<(u64, u64)> {
        (0..self.m).flat_map(|a| (0..self.m).map(move |b| (a, b))).collect()
    }
}

fn ring(case: Case) -> Arc<RingContext> {
    Arc::new(RingContext::new(case, 1, &[1], 16).unwrap())
}

fn rank_one_count(case: Case, a: u64, d: u32) -> u64 {
    let t = Toy::new(case, d);
    let a = (a % t.m, 0);
    t.elements().into_iter().filter(|&x| t.mul(a, t.mul(t.sigma(x), x)) == a).count() as u64
}

#[test]
fn rank_one_counts_match_plain_enumeration() {
    for case in [Case::One, Case::Two] {
        let r = ring(case);
        for a in [1i64, 3, 5] {
            let l = HermitianLattice::diagonal(&r, &[a]).unwrap();
            for d in 1..=4 {
                let expected = rank_one_count(case, a as u64, d);
                assert_eq!(congruence_count(&l, d, DEFAULT_BUDGET).unwrap(), BigUint::from(expected), "{case:?} ({a}) d={d}");
            }
        }
    }
    // x·σ(x) ≡ 1 mod 2 in Case 2: a² ≡ 1 with b free
    assert_eq!(rank_one_count(Case::Two, 1, 1), 2);
}

/// #{X ∈ M_2(B/2^d B) : σ(ᵗX)·H(0)·X ≡ H(0)}.
fn hyperbolic_count(case: Case, d: u32) -> u64 {
    let t = Toy::new(case, d);
    let els = t.elements();
    let (zero, one) = ((0, 0), (1 % t.m, 0));
    let mut total = 0;
    // columns v = (x0, x1) with v*Hv = 0 first, then pair them
    let isotropic: Vec<_> = els
        .iter()
        .flat_map(|&p| els.iter().map(move |&q| (p, q)))
        .filter(|&(p, q)| t.add(t.mul(t.sigma(p), q), t.mul(t.sigma(q), p)) == zero)
        .collect();
    for &(p0, p1) in &isotropic {
        for &(q0, q1) in &isotropic {
            if t.add(t.mul(t.sigma(p0), q1), t.mul(t.sigma(p1), q0)) == one {
                total += 1;
            }
        }
    }
    total
}

#[test]
fn hyperbolic_plane_density_is_three() {
    let r = ring(Case::One);
    let h0 = HermitianLattice::hyperbolic(&r, 0).unwrap();
    let beta = local_density(&h0).unwrap().beta_l;
    assert_eq!(beta, BigRational::from_integer(3.into()));

    let p = normalized_density(&h0, 4, DEFAULT_BUDGET).unwrap();
    for (d, raw) in p.depths.iter().zip(&p.raw_counts) {
        if *d <= 3 {
            assert_eq!(*raw, BigUint::from(hyperbolic_count(Case::One, *d)), "d={d}");
        }
    }
    let at3 = BigRational::new(hyperbolic_count(Case::One, 3).into(), (1u64 << 12).into());
    assert_eq!(at3, beta);
}

fn f2_group_order(preserves: impl Fn([[u8; 2]; 2]) -> bool) -> usize {
    (0..16u8)
        .map(|bits| [[bits & 1, (bits >> 1) & 1], [(bits >> 2) & 1, (bits >> 3) & 1]])
        .filter(|m| (m[0][0] * m[1][1] + m[0][1] * m[1][0]) % 2 == 1)
        .filter(|m| preserves(*m))
        .count()
}

#[test]
fn small_group_orders_match_enumeration() {
    use herm2::density::{FactorKind, ReductiveFactor};
    let apply = |m: [[u8; 2]; 2], v: [u8; 2]| [(m[0][0] * v[0] + m[0][1] * v[1]) % 2, (m[1][0] * v[0] + m[1][1] * v[1]) % 2];
    let vectors = [[0, 0], [0, 1], [1, 0], [1, 1]];
    let q_plus = |v: [u8; 2]| v[0] * v[1] % 2;
    let q_minus = |v: [u8; 2]| (v[0] + v[0] * v[1] + v[1]) % 2;
    let sp = f2_group_order(|_| true);
    let o_plus = f2_group_order(|m| vectors.iter().all(|&v| q_plus(apply(m, v)) == q_plus(v)));
    let o_minus = f2_group_order(|m| vectors.iter().all(|&v| q_minus(apply(m, v)) == q_minus(v)));
    assert_eq!((sp, o_plus, o_minus), (6, 2, 6));
    for (kind, n) in [(FactorKind::Sp, sp), (FactorKind::OPlus, o_plus), (FactorKind::OMinus, o_minus)] {
        assert_eq!(ReductiveFactor::new(kind, 2, 0).group_order(2), BigUint::from(n));
    }
}
