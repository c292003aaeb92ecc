use std::sync::Arc;

use super::classify::{classify, BlockSpec, Classification};
use crate::error::{Error, Result, Stage};
use crate::lattice::{norm_exp_of, HermitianLattice};
use crate::ring::{BElem, Case, Matrix, PiVal, RingContext};

/// A Jordan splitting L = ⊕ L_i with its witness.
#[derive(Clone, Debug)]
pub struct JordanDecomposition {
    /// The input lattice, at the precision the split was computed with.
    pub lattice: HermitianLattice,
    pub classification: Classification,
    /// Columns are the split basis in input coordinates.
    pub witness: Matrix,
    /// σ(ᵗU)·G·U; block diagonal modulo π^precision.
    pub split_gram: Matrix,
    /// First column of each block of `classification.blocks`.
    pub offsets: Vec<usize>,
    /// π-adic digits to which `split_gram` is exact.
    pub precision: u32,
}

impl JordanDecomposition {
    pub fn ring(&self) -> &Arc<RingContext> {
        self.lattice.ring()
    }

    pub fn case(&self) -> Case {
        self.classification.case
    }

    pub fn rank(&self) -> usize {
        self.lattice.rank()
    }

    /// Column range of block `idx` in the split basis.
    pub fn block_range(&self, idx: usize) -> std::ops::Range<usize> {
        let start = self.offsets[idx];
        start..start + self.classification.blocks[idx].rank
    }

    pub fn block_index(&self, i: i64) -> Option<usize> {
        self.classification.blocks.iter().position(|b| b.i == i)
    }

    /// Gram matrix of block `idx` in the split basis.
    pub fn block_gram(&self, idx: usize) -> Matrix {
        let r: Vec<usize> = self.block_range(idx).collect();
        self.split_gram.submatrix(&r, &r)
    }

    /// Split Gram with off-block entries cleared.
    pub fn block_diagonal_gram(&self) -> Matrix {
        let n = self.rank();
        let mut owner = vec![0usize; n];
        for idx in 0..self.classification.blocks.len() {
            for c in self.block_range(idx) {
                owner[c] = idx;
            }
        }
        Matrix::from_fn(n, n, |a, b| if owner[a] == owner[b] { self.split_gram[(a, b)] } else { BElem::default() })
    }
}

/// Split with automatic precision doubling (up to k = 64). Re-reads the Gram entries at the
/// new precision with sign extension.
pub fn jordan_split(lattice: &HermitianLattice) -> Result<JordanDecomposition> {
    let mut l = lattice.clone();
    loop {
        match jordan_split_at(&l) {
            Err(Error::PrecisionExhausted { .. }) if l.ring().precision() < 64 => {
                let k = (2 * l.ring().precision()).min(64);
                let ring = Arc::new(l.ring().with_precision(k)?);
                l = lattice.with_ring(&ring)?;
            }
            other => return other,
        }
    }
}

/// Split at the lattice's own precision.
///
/// Pivot rule: at the least valuation v of the unsplit part, split off a rank-1 piece if some
/// e_j, e_j + e_k or e_j + πe_k has norm of valuation v (only possible for even v), otherwise the
/// first off-diagonal pair of valuation v, whose determinant then has valuation exactly 2v.
pub fn jordan_split_at(lattice: &HermitianLattice) -> Result<JordanDecomposition> {
    let ring = lattice.ring().clone();
    let ctx: &RingContext = &ring;
    let n = lattice.rank();
    let mut w = lattice.gram().clone();
    let mut u = Matrix::identity(ctx, n);
    let mut active: Vec<usize> = (0..n).collect();
    let mut pieces: Vec<(u32, Vec<usize>)> = Vec::new();
    let mut prec = ctx.pi_precision();
    let exhausted = || Error::PrecisionExhausted { stage: Stage::Jordan };

    while !active.is_empty() {
        let v = min_active_val(ctx, &w, &active, prec).ok_or_else(exhausted)?;
        let mut rank_one = None;
        if v % 2 == 0 {
            rank_one = active.iter().copied().find(|&j| capped(ctx, &w[(j, j)], prec) == Some(v));
            if rank_one.is_none() {
                'search: for (aj, &j) in active.iter().enumerate() {
                    for &k in &active[aj + 1..] {
                        for c in [ctx.one(), ctx.pi()] {
                            let q = pair_norm(ctx, &w, j, k, &c);
                            if capped(ctx, &q, prec) == Some(v) {
                                add_column_multiple(ctx, &mut w, &mut u, j, k, &c);
                                rank_one = Some(j);
                                break 'search;
                            }
                        }
                    }
                }
            }
        }
        if let Some(p) = rank_one {
            project_rank_one(ctx, &mut w, &mut u, &active, p, v)?;
            active.retain(|&j| j != p);
            pieces.push((v, vec![p]));
            prec = prec.saturating_sub(v);
        } else {
            let (j, k) = first_pair(ctx, &w, &active, v, prec).ok_or_else(exhausted)?;
            project_rank_two(ctx, &mut w, &mut u, &active, j, k, v)?;
            active.retain(|&x| x != j && x != k);
            pieces.push((v, vec![j, k]));
            prec = prec.saturating_sub(2 * v);
        }
    }

    let order: Vec<usize> = pieces.iter().flat_map(|(_, cols)| cols.iter().copied()).collect();
    let witness = Matrix::from_fn(n, n, |r, c| u[(r, order[c])]);
    let split_gram = Matrix::congruence(ctx, lattice.gram(), &witness);

    let mut specs = Vec::new();
    let mut offsets = Vec::new();
    let mut col = 0usize;
    let mut idx = 0usize;
    while idx < pieces.len() {
        let v = pieces[idx].0;
        let start = col;
        while idx < pieces.len() && pieces[idx].0 == v {
            col += pieces[idx].1.len();
            idx += 1;
        }
        let range: Vec<usize> = (start..col).collect();
        let block = split_gram.submatrix(&range, &range);
        let target = if v % 2 == 0 { v } else { v + 1 };
        if target + 2 >= prec {
            return Err(exhausted());
        }
        let norm = norm_exp_of(ctx, &block);
        specs.push(BlockSpec { i: v as i64, rank: range.len(), norm_minimal: norm == PiVal::Finite(target) });
        offsets.push(start);
    }
    let classification = classify(ctx.case(), &specs);
    Ok(JordanDecomposition { lattice: lattice.clone(), classification, witness, split_gram, offsets, precision: prec })
}

fn capped(ctx: &RingContext, x: &BElem, prec: u32) -> Option<u32> {
    ctx.val(x).finite().filter(|&v| v < prec)
}

fn min_active_val(ctx: &RingContext, w: &Matrix, active: &[usize], prec: u32) -> Option<u32> {
    let mut best: Option<u32> = None;
    for &a in active {
        for &b in active {
            if let Some(v) = capped(ctx, &w[(a, b)], prec) {
                best = Some(best.map_or(v, |m| m.min(v)));
            }
        }
    }
    best
}

fn first_pair(ctx: &RingContext, w: &Matrix, active: &[usize], v: u32, prec: u32) -> Option<(usize, usize)> {
    for (aj, &j) in active.iter().enumerate() {
        for &k in &active[aj + 1..] {
            if capped(ctx, &w[(j, k)], prec) == Some(v) {
                return Some((j, k));
            }
        }
    }
    None
}

/// h(e_j + c e_k, e_j + c e_k).
fn pair_norm(ctx: &RingContext, w: &Matrix, j: usize, k: usize, c: &BElem) -> BElem {
    let t = ctx.from_a(ctx.trace(&ctx.mul(c, &w[(j, k)])));
    let nk = ctx.mul(&ctx.from_a(ctx.norm(c)), &w[(k, k)]);
    ctx.add(&ctx.add(&w[(j, j)], &t), &nk)
}

/// e_j ← e_j + c e_k on both the Gram and the basis.
fn add_column_multiple(ctx: &RingContext, w: &mut Matrix, u: &mut Matrix, j: usize, k: usize, c: &BElem) {
    let n = w.rows();
    let new_jj = pair_norm(ctx, w, j, k, c);
    for r in 0..n {
        u[(r, j)] = ctx.add(&u[(r, j)], &ctx.mul(&u[(r, k)], c));
    }
    for r in 0..n {
        if r == j {
            continue;
        }
        // h(e_r, e_j + c e_k) = w_rj + c w_rk
        let x = ctx.add(&w[(r, j)], &ctx.mul(c, &w[(r, k)]));
        w[(r, j)] = x;
        w[(j, r)] = ctx.sigma(&x);
    }
    w[(j, j)] = ctx.canonical_fixed(&new_jj);
}

/// Make every active y ≠ p orthogonal to p, whose norm has valuation v = 2w.
fn project_rank_one(ctx: &RingContext, w: &mut Matrix, u: &mut Matrix, active: &[usize], p: usize, v: u32) -> Result<()> {
    let g = ctx.div_pi_pow(&w[(p, p)], v)?;
    let ginv = ctx.inv(&g)?;
    // coefficient c_y = h(p, y) / h(p, p), computed as (h(p,y)/π^v)·(h(p,p)/π^v)^{-1}
    let others: Vec<usize> = active.iter().copied().filter(|&y| y != p).collect();
    let coeff: Vec<BElem> = others
        .iter()
        .map(|&y| ctx.div_pi_pow(&w[(p, y)], v).map(|q| ctx.mul(&q, &ginv)))
        .collect::<Result<_>>()?;
    apply_projection(ctx, w, u, &others, &[p], &[coeff]);
    Ok(())
}

/// Make every active y orthogonal to the π^v-modular plane (j, k).
fn project_rank_two(
    ctx: &RingContext,
    w: &mut Matrix,
    u: &mut Matrix,
    active: &[usize],
    j: usize,
    k: usize,
    v: u32,
) -> Result<()> {
    let a = w[(j, j)];
    let b = w[(k, k)];
    let c = w[(j, k)];
    let det = ctx.sub(&ctx.mul(&a, &b), &ctx.mul(&c, &ctx.sigma(&c)));
    let d = ctx.div_pi_pow(&det, 2 * v)?;
    let dinv = ctx.inv(&d)?;
    let others: Vec<usize> = active.iter().copied().filter(|&y| y != j && y != k).collect();
    let mut cj = Vec::with_capacity(others.len());
    let mut ck = Vec::with_capacity(others.len());
    for &y in &others {
        let (hj, hk) = (w[(j, y)], w[(k, y)]);
        // P^{-1} = det^{-1}·[[b, −c], [−σ(c), a]]
        let nj = ctx.sub(&ctx.mul(&b, &hj), &ctx.mul(&c, &hk));
        let nk = ctx.sub(&ctx.mul(&a, &hk), &ctx.mul(&ctx.sigma(&c), &hj));
        cj.push(ctx.mul(&ctx.div_pi_pow(&nj, 2 * v)?, &dinv));
        ck.push(ctx.mul(&ctx.div_pi_pow(&nk, 2 * v)?, &dinv));
    }
    apply_projection(ctx, w, u, &others, &[j, k], &[cj, ck]);
    Ok(())
}

/// y ← y − Σ_t piv_t·coeff[t][y]; Gram updated as w_yz ← w_yz − Σ_t σ(coeff[t][y])·w_{t z}.
fn apply_projection(
    ctx: &RingContext,
    w: &mut Matrix,
    u: &mut Matrix,
    others: &[usize],
    pivots: &[usize],
    coeff: &[Vec<BElem>],
) {
    let n = w.rows();
    for (yi, &y) in others.iter().enumerate() {
        for r in 0..n {
            let mut x = u[(r, y)];
            for (t, &p) in pivots.iter().enumerate() {
                x = ctx.sub(&x, &ctx.mul(&u[(r, p)], &coeff[t][yi]));
            }
            u[(r, y)] = x;
        }
    }
    let old = w.clone();
    for (yi, &y) in others.iter().enumerate() {
        for &z in others.iter().skip(yi) {
            let mut x = old[(y, z)];
            for (t, &p) in pivots.iter().enumerate() {
                x = ctx.sub(&x, &ctx.mul(&ctx.sigma(&coeff[t][yi]), &old[(p, z)]));
            }
            if y == z {
                x = ctx.canonical_fixed(&x);
            }
            w[(y, z)] = x;
            w[(z, y)] = ctx.sigma(&x);
        }
        for &p in pivots {
            w[(y, p)] = BElem::default();
            w[(p, y)] = BElem::default();
        }
    }
}
