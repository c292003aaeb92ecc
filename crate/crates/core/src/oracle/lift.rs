//! One π-adic digit of lifting for σ(ᵗX)·G·X ≡ T.
//!
//! For e ≥ 1 and X with the congruence holding mod π^e, the residue of
//! (σ(ᵗX′)·G·X′ − T)/π^e at X′ = X + π^e·D depends only on D mod π and is affine in D: the
//! quadratic term carries N(π)^e. With m = res(G·X) and res(σ(π)^e/π^e) = 1 the linear part is
//! D ↦ ᵗD·m + ᵗm·D, so the admissible digits form an affine subspace of M_n(κ).

use crate::forms::linalg::{self, KMat, KVec};
use crate::ring::{KElem, Matrix, RingContext};

pub(crate) struct Lifter<'a> {
    pub ctx: &'a RingContext,
    pub g: &'a Matrix,
    pub t: &'a Matrix,
    n: usize,
    /// π^e·E_ab for each layer e and elementary matrix E_ab (row-major).
    elementary: Vec<Vec<Matrix>>,
    dual: Option<Dual>,
}

/// The extra condition X·Ĝ·σ(ᵗX) ≡ T̂, imposed while the layer being fixed is below `until`.
/// With Y = σ(ᵗX) it is the primal condition for Ĝ in Y, and a digit D of X is the digit ᵗD of Y
/// up to the unit σ(π)^e/π^e, whose residue is 1.
pub(crate) struct Dual {
    pub g_hat: Matrix,
    pub t_hat: Matrix,
    pub until: u32,
}

/// Admissible digits at one node: particular + span(kernel), or none.
pub(crate) struct DigitSpace {
    pub particular: KVec,
    pub kernel: KMat,
}

impl<'a> Lifter<'a> {
    pub fn new(ctx: &'a RingContext, g: &'a Matrix, t: &'a Matrix, layers: u32) -> Self {
        let n = g.rows();
        let elementary = (0..layers)
            .map(|e| {
                let p = ctx.pi_pow(e);
                (0..n * n)
                    .map(|s| Matrix::from_fn(n, n, |a, b| if a * n + b == s { p } else { ctx.zero() }))
                    .collect()
            })
            .collect();
        Lifter { ctx, g, t, n, elementary, dual: None }
    }

    pub fn with_dual(mut self, dual: Dual) -> Self {
        self.dual = Some(dual);
        self
    }

    pub fn holds(&self, x: &Matrix, e: u32) -> bool {
        let primal = Matrix::congruence(self.ctx, self.g, x).eq_mod(self.ctx, self.t, e);
        primal
            && self.dual.as_ref().map_or(true, |d| {
                let y = x.conj_transpose(self.ctx);
                Matrix::congruence(self.ctx, &d.g_hat, &y).eq_mod(self.ctx, &d.t_hat, e.min(d.until))
            })
    }

    #[cfg(test)]
    fn residue_error(&self, x: &Matrix, e: u32) -> KVec {
        self.residue_error_with(x, &self.g.mul(self.ctx, x), self.t, e)
    }

    /// Residue of (σ(ᵗX)·G·X − T)/π^e with G·X supplied.
    fn residue_error_with(&self, x: &Matrix, gx: &Matrix, t: &Matrix, e: u32) -> KVec {
        let ctx = self.ctx;
        let p = x.conj_transpose(ctx).mul(ctx, gx).sub(ctx, t);
        (0..self.n * self.n)
            .map(|s| {
                let v = p[(s / self.n, s % self.n)];
                if ctx.val(&v).at_least(e + 1) {
                    KElem::ZERO
                } else {
                    ctx.residue(&ctx.div_pi_pow(&v, e).expect("congruence holds mod π^e"))
                }
            })
            .collect()
    }

    /// Columns of the linear part, one per elementary matrix E_ab (row-major), entries row-major.
    fn linear_part(&self, gx: &Matrix) -> Vec<KVec> {
        let k = self.ctx.kappa();
        let n = self.n;
        let m: Vec<Vec<KElem>> = (0..n).map(|i| (0..n).map(|j| self.ctx.residue(&gx[(i, j)])).collect()).collect();
        (0..n * n)
            .map(|s| {
                let (a, b) = (s / n, s % n);
                (0..n * n)
                    .map(|t| {
                        let (i, j) = (t / n, t % n);
                        let mut v = KElem::ZERO;
                        if i == b {
                            v = k.add(v, m[a][j]);
                        }
                        if j == b {
                            v = k.add(v, m[a][i]);
                        }
                        v
                    })
                    .collect()
            })
            .collect()
    }

    /// The same columns by evaluating the residue error at X + π^e·E_ab.
    #[cfg(test)]
    fn linear_part_by_evaluation(&self, x: &Matrix, e: u32) -> Vec<KVec> {
        let k = self.ctx.kappa();
        let c0 = self.residue_error(x, e);
        self.elementary[e as usize]
            .iter()
            .map(|d| linalg::add(k, &self.residue_error(&x.add(self.ctx, d), e), &c0))
            .collect()
    }

    /// Digits D at layer e ≥ 1 with the congruence holding mod π^{e+1} at X + π^e·D.
    pub fn digits(&self, x: &Matrix, e: u32) -> Option<DigitSpace> {
        let k = self.ctx.kappa();
        let m = self.n * self.n;
        let gx = self.g.mul(self.ctx, x);
        let mut c0 = self.residue_error_with(x, &gx, self.t, e);
        let cols = self.linear_part(&gx);
        let mut a: KMat = (0..m).map(|row| cols.iter().map(|c| c[row]).collect()).collect();
        if let Some(d) = self.dual.as_ref().filter(|d| e < d.until) {
            let y = x.conj_transpose(self.ctx);
            let gy = d.g_hat.mul(self.ctx, &y);
            c0.extend(self.residue_error_with(&y, &gy, &d.t_hat, e));
            let cols = self.linear_part(&gy);
            let n = self.n;
            // digit E_ab of X is E_ba of Y
            a.extend((0..m).map(|row| (0..m).map(|s| cols[(s % n) * n + s / n][row]).collect::<KVec>()));
        }
        // char 2: A·D = −c0 = c0
        let particular = linalg::solve(k, &a, &c0)?;
        Some(DigitSpace { particular, kernel: linalg::kernel(k, &a, m) })
    }

    pub fn count(&self, space: &DigitSpace) -> u64 {
        self.ctx.f().pow(space.kernel.len() as u32)
    }

    /// X + π^e·D for every admissible D.
    pub fn children(&self, x: &Matrix, e: u32, space: &DigitSpace) -> Vec<Matrix> {
        let k = self.ctx.kappa();
        let m = self.n * self.n;
        let f = self.ctx.f();
        let dim = space.kernel.len();
        (0..f.pow(dim as u32))
            .map(|mut code| {
                let coeffs: Vec<KElem> = (0..dim)
                    .map(|_| {
                        let c = KElem((code % f) as u16);
                        code /= f;
                        c
                    })
                    .collect();
                let d = linalg::add(k, &space.particular, &linalg::combine(k, &space.kernel, &coeffs, m));
                let mut y = x.clone();
                for (s, c) in d.iter().enumerate() {
                    if !c.is_zero() {
                        let cell = &mut y[(s / self.n, s % self.n)];
                        *cell = self.ctx.add(cell, &self.ctx.mul(&self.ctx.lift(*c), &self.elementary[e as usize][s][(s / self.n, s % self.n)]));
                    }
                }
                y
            })
            .collect()
    }
}

/// Every n×n matrix over κ, lifted.
pub(crate) fn residue_matrices(ctx: &RingContext, n: usize) -> Vec<Matrix> {
    let f = ctx.f();
    (0..f.pow((n * n) as u32))
        .map(|mut code| {
            Matrix::from_fn(n, n, |_, _| {
                let c = KElem((code % f) as u16);
                code /= f;
                ctx.lift(c)
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::Case;
    use rand::SeedableRng;
    use std::sync::Arc;

    #[test]
    fn closed_form_linear_part_matches_evaluation() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
        for case in [Case::One, Case::Two] {
            for r in [1, 2] {
                let ctx = Arc::new(RingContext::new(case, r, &[1], 10).unwrap());
                for _ in 0..20 {
                    let (l, _) = crate::gen::random_lattice(&ctx, 3, 3, &mut rng);
                    let x = Matrix::random(&ctx, l.rank(), l.rank(), &mut rng);
                    // X solves σ(ᵗX)·G·X ≡ T for T its own image
                    let t = Matrix::congruence(&ctx, l.gram(), &x);
                    let lifter = Lifter::new(&ctx, l.gram(), &t, 6);
                    for e in 1..6 {
                        assert_eq!(lifter.linear_part(&l.gram().mul(&ctx, &x)), lifter.linear_part_by_evaluation(&x, e));
                    }
                }
            }
        }
    }
}
