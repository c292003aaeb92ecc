use std::sync::atomic::{AtomicBool, AtomicU64, Ordering};

use rayon::prelude::*;

use super::lift::{residue_matrices, Dual, Lifter};
use super::{at_depth, checked_rank, CountProfile, MAX_SEARCH_RANK};
use crate::error::{Error, Result};
use crate::forms::linalg;
use crate::lattice::HermitianLattice;
use crate::ring::{BElem, Matrix, PiVal, RingContext};

struct Search<'a> {
    lifter: Lifter<'a>,
    depth: u32,
    budget: u64,
    states: &'a AtomicU64,
    over: &'a AtomicBool,
}

impl Search<'_> {
    fn dfs(&self, u: &Matrix, e: u32) -> Option<Matrix> {
        if e == self.depth {
            return Some(u.clone());
        }
        let space = self.lifter.digits(u, e)?;
        for v in self.lifter.children(u, e, &space) {
            if self.over.load(Ordering::Relaxed) {
                return None;
            }
            if self.states.fetch_add(1, Ordering::Relaxed) >= self.budget {
                self.over.store(true, Ordering::Relaxed);
                return None;
            }
            if let Some(w) = self.dfs(&v, e + 1) {
                return Some(w);
            }
        }
        None
    }
}

fn det(ctx: &RingContext, g: &Matrix) -> BElem {
    let n = g.rows();
    if n == 0 {
        return ctx.one();
    }
    let rest: Vec<usize> = (1..n).collect();
    (0..n).fold(ctx.zero(), |acc, j| {
        let cols: Vec<usize> = (0..n).filter(|&c| c != j).collect();
        let term = ctx.mul(&g[(0, j)], &det(ctx, &g.submatrix(&rest, &cols)));
        if j % 2 == 0 {
            ctx.add(&acc, &term)
        } else {
            ctx.sub(&acc, &term)
        }
    })
}

fn adjugate(ctx: &RingContext, g: &Matrix) -> Matrix {
    let n = g.rows();
    Matrix::from_fn(n, n, |i, j| {
        let rows: Vec<usize> = (0..n).filter(|&r| r != j).collect();
        let cols: Vec<usize> = (0..n).filter(|&c| c != i).collect();
        let m = det(ctx, &g.submatrix(&rows, &cols));
        if (i + j) % 2 == 0 {
            m
        } else {
            ctx.neg(&m)
        }
    })
}

/// (t, 2^t·G⁻¹) with t least making it integral, or None when det G vanishes at working precision.
fn scaled_inverse(ctx: &RingContext, g: &Matrix, t: Option<u32>) -> Option<(u32, Matrix)> {
    let d = det(ctx, g);
    let v = ctx.val(&d).finite()?;
    let adj = adjugate(ctx, g);
    let low = adj.min_val(ctx).finite().unwrap_or(v);
    let t = t.unwrap_or(v.saturating_sub(low).div_ceil(2));
    let u_inv = ctx.inv(&ctx.div_pi_pow(&d, v).ok()?).ok()?;
    let two_t = ctx.from_int(1i64 << t.min(62));
    let mut out = Matrix::zeros(g.rows(), g.rows());
    for i in 0..g.rows() {
        for j in 0..g.rows() {
            let x = ctx.div_pi_pow(&ctx.mul(&two_t, &adj[(i, j)]), v).ok()?;
            out[(i, j)] = ctx.mul(&x, &u_inv);
        }
    }
    Some((t, out))
}

/// The dual condition for σ(ᵗU)·G1·U ≡ G2 mod π^depth: U·(2^t·G2⁻¹)·σ(ᵗU) ≡ 2^t·G1⁻¹ mod
/// π^{depth−2t}, with t making both sides integral. It constrains the digits along the top
/// scale of G1 as soon as they are chosen, where the primal condition only sees them 2t layers
/// later.
fn dual_condition(ctx: &RingContext, g1: &Matrix, g2: &Matrix, depth: u32) -> Option<Dual> {
    let (t1, _) = scaled_inverse(ctx, g1, None)?;
    let (t2, _) = scaled_inverse(ctx, g2, None)?;
    let t = t1.max(t2);
    let (_, t_hat) = scaled_inverse(ctx, g1, Some(t))?;
    let (_, g_hat) = scaled_inverse(ctx, g2, Some(t))?;
    Some(Dual { g_hat, t_hat, until: depth.saturating_sub(2 * t) })
}

/// Some invertible U with σ(ᵗU)·G1·U ≡ G2 mod π^depth, or None if no such U exists mod π^depth.
pub fn isometry_search(l1: &HermitianLattice, l2: &HermitianLattice, depth: u32, budget: u64) -> Result<Option<Matrix>> {
    search(l1, l2, depth, budget, true)
}

fn search(l1: &HermitianLattice, l2: &HermitianLattice, depth: u32, budget: u64, use_dual: bool) -> Result<Option<Matrix>> {
    checked_rank(l1, MAX_SEARCH_RANK)?;
    if !l1.ring().same_ring(l2.ring()) {
        return Err(Error::ContextMismatch);
    }
    if l1.rank() != l2.rank() {
        return Ok(None);
    }
    // room for the division by det in the dual condition
    let v = match (l1.det_val(), l2.det_val()) {
        (PiVal::Finite(a), PiVal::Finite(b)) => a.max(b),
        _ => 0,
    };
    let two_adic = (depth + v).div_ceil(2);
    let (l1, l2) = (at_depth(l1, two_adic)?, at_depth(l2, two_adic)?);
    let ctx: &RingContext = l1.ring();
    let k = ctx.kappa();
    let n = l1.rank();
    if depth == 0 {
        return Ok(Some(Matrix::identity(ctx, n)));
    }
    let states = AtomicU64::new(0);
    let over = AtomicBool::new(false);
    let mut lifter = Lifter::new(ctx, l1.gram(), l2.gram(), depth);
    if let Some(d) = dual_condition(ctx, l1.gram(), l2.gram(), depth).filter(|_| use_dual) {
        lifter = lifter.with_dual(d);
    }
    let s = Search { lifter, depth, budget, states: &states, over: &over };
    let found = residue_matrices(ctx, n).par_iter().find_map_any(|u| {
        let residue: Vec<Vec<_>> = u.to_rows().iter().map(|r| r.iter().map(|x| ctx.residue(x)).collect()).collect();
        if linalg::rank(k, &residue) < n || !s.lifter.holds(u, 1) {
            return None;
        }
        s.dfs(u, 1)
    });
    if found.is_none() && over.load(Ordering::Relaxed) {
        let partial = CountProfile { rank: n, f: ctx.f(), states: states.load(Ordering::Relaxed), ..Default::default() };
        return Err(Error::BudgetExceeded { budget, partial: Box::new(partial) });
    }
    Ok(found)
}
