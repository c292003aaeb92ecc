//! Quadratic forms over κ and their Arf invariant.

use serde::{Deserialize, Serialize};

use super::linalg::{self, KMat, KVec};
use crate::error::{Error, Result};
use crate::ring::{KElem, ResidueField};

/// q(x) = Σ x_a²·diag_a + Σ_{a<b} x_a x_b·polar_ab. `polar` is symmetric with zero diagonal.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct QuadForm {
    pub diag: Vec<KElem>,
    pub polar: KMat,
}

impl QuadForm {
    pub fn dim(&self) -> usize {
        self.diag.len()
    }

    pub fn eval(&self, k: &ResidueField, x: &[KElem]) -> KElem {
        let mut acc = KElem::ZERO;
        for a in 0..x.len() {
            acc = k.add(acc, k.mul(k.square(x[a]), self.diag[a]));
            for b in a + 1..x.len() {
                acc = k.add(acc, k.mul(k.mul(x[a], x[b]), self.polar[a][b]));
            }
        }
        acc
    }

    pub fn polar_eval(&self, k: &ResidueField, x: &[KElem], y: &[KElem]) -> KElem {
        linalg::bilinear(k, &self.polar, x, y)
    }

    /// Change of basis: the form on the span of `basis` (rows in current coordinates).
    pub fn restrict(&self, k: &ResidueField, basis: &[KVec]) -> QuadForm {
        let d = basis.len();
        let diag = basis.iter().map(|v| self.eval(k, v)).collect();
        let polar = (0..d)
            .map(|s| (0..d).map(|t| if s == t { KElem::ZERO } else { self.polar_eval(k, &basis[s], &basis[t]) }).collect())
            .collect();
        QuadForm { diag, polar }
    }

    /// Nonsingular: no nonzero vector of the polar radical is a zero of q.
    pub fn is_nonsingular(&self, k: &ResidueField) -> bool {
        let rad = linalg::kernel(k, &self.polar, self.dim());
        // On the radical q is Frobenius-semilinear, so its zeros form the kernel of a linear
        // functional: trivial only in dimension ≤ 1.
        rad.is_empty() || (rad.len() == 1 && !self.eval(k, &rad[0]).is_zero())
    }
}

/// Arf invariant in F_2 of a nonsingular even-dimensional form, by symplectic reduction.
pub fn arf(k: &ResidueField, q: &QuadForm) -> Result<u8> {
    let d = q.dim();
    if d % 2 == 1 {
        return Err(Error::OddDimension);
    }
    let mut rest: Vec<KVec> = (0..d).map(|j| linalg::unit_vec(d, j)).collect();
    let mut acc = KElem::ZERO;
    while let Some(e) = rest.pop() {
        let Some(pos) = rest.iter().position(|v| !q.polar_eval(k, &e, v).is_zero()) else {
            return Err(Error::internal(crate::Stage::Forms, "polar form is degenerate"));
        };
        let f0 = rest.remove(pos);
        let c = k.inv(q.polar_eval(k, &e, &f0)).expect("nonzero");
        let f = linalg::scale(k, c, &f0);
        acc = k.add(acc, k.mul(q.eval(k, &e), q.eval(k, &f)));
        rest = rest
            .into_iter()
            .map(|v| {
                let bf = q.polar_eval(k, &v, &f);
                let be = q.polar_eval(k, &v, &e);
                linalg::add(k, &linalg::add(k, &v, &linalg::scale(k, bf, &e)), &linalg::scale(k, be, &f))
            })
            .collect();
    }
    Ok(k.abs_trace(acc))
}

/// Number of x ∈ κ^d with q(x) = 0, by enumeration.
pub fn zero_count(k: &ResidueField, q: &QuadForm) -> u64 {
    let d = q.dim();
    let f = k.order();
    let total = f.pow(d as u32);
    let mut n = 0;
    let mut x = vec![KElem::ZERO; d];
    for code in 0..total {
        let mut c = code;
        for slot in x.iter_mut() {
            *slot = KElem((c % f) as u16);
            c /= f;
        }
        if q.eval(k, &x).is_zero() {
            n += 1;
        }
    }
    n
}

/// Zero count of a nonsingular form of dimension d: f^{d−1} + ε(f^{d/2} − f^{d/2−1}) for even d
/// with ε = +1 iff the Arf invariant vanishes, and f^{d−1} for odd d.
pub fn predicted_zero_count(f: u64, d: usize, arf: Option<u8>) -> u64 {
    if d == 0 {
        return 1;
    }
    let base = f.pow(d as u32 - 1);
    match (d % 2, arf) {
        (0, Some(a)) => {
            let t = f.pow(d as u32 / 2) - f.pow(d as u32 / 2 - 1);
            if a == 0 {
                base + t
            } else {
                base - t
            }
        }
        _ => base,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn form(diag: &[u16], polar: &[(usize, usize, u16)]) -> QuadForm {
        let d = diag.len();
        let mut p = vec![vec![KElem::ZERO; d]; d];
        for &(a, b, v) in polar {
            p[a][b] = KElem(v);
            p[b][a] = KElem(v);
        }
        QuadForm { diag: diag.iter().map(|&v| KElem(v)).collect(), polar: p }
    }

    #[test]
    fn hyperbolic_and_anisotropic_planes() {
        let k = ResidueField::new(1);
        assert_eq!(arf(&k, &form(&[0, 0], &[(0, 1, 1)])).unwrap(), 0);
        assert_eq!(arf(&k, &form(&[1, 1], &[(0, 1, 1)])).unwrap(), 1);
        assert_eq!(zero_count(&k, &form(&[1, 1], &[(0, 1, 1)])), 1);
    }

    #[test]
    fn sum_of_two_hyperbolics() {
        let k = ResidueField::new(1);
        let q = form(&[0, 0, 0, 0], &[(0, 1, 1), (2, 3, 1)]);
        assert_eq!(arf(&k, &q).unwrap(), 0);
        assert_eq!(zero_count(&k, &q), 8 + 4 - 2);
        assert_eq!(predicted_zero_count(2, 4, Some(0)), 10);
    }

    #[test]
    fn arf_matches_zero_count_on_random_forms() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(4);
        for r in [1usize, 2] {
            let k = ResidueField::new(r);
            let f = k.order();
            let mut seen = 0;
            while seen < 200 {
                let d = 2 * rng.gen_range(1..=if r == 1 { 3 } else { 2 });
                let diag: Vec<u16> = (0..d).map(|_| rng.gen_range(0..f as u16)).collect();
                let mut pol = Vec::new();
                for a in 0..d {
                    for b in a + 1..d {
                        pol.push((a, b, rng.gen_range(0..f as u16)));
                    }
                }
                let q = form(&diag, &pol);
                let Ok(a) = arf(&k, &q) else { continue };
                assert_eq!(zero_count(&k, &q), predicted_zero_count(f, d, Some(a)));
                seen += 1;
            }
        }
    }

    #[test]
    fn odd_dimension_has_no_arf() {
        let k = ResidueField::new(1);
        assert!(matches!(arf(&k, &form(&[1], &[])), Err(Error::OddDimension)));
    }
}
