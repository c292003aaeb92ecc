//! The sublattices A_i ⊇ B_i ⊇ … of a Jordan-split lattice and the residue forms they carry.
//!
//! Coordinates: A_i is spanned by w_a = π^{s_a}·e_a with e_a the split basis and
//! s_a = max(0, i − j_a), j_a the scale of the block holding e_a. Every subspace of
//! A_i/πA_i is stored as independent rows in κ^n with respect to (w_a).

use serde::Serialize;

use super::arf::{arf, QuadForm};
use super::linalg::{self, KMat, KVec};
use crate::error::{Error, Result, Stage};
use crate::jordan::JordanDecomposition;
use crate::ring::{AElem, BElem, Case, KElem, Matrix, RingContext};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum FormKind {
    Symplectic,
    Quadratic,
}

/// A nondegenerate symplectic or nonsingular quadratic form over κ on a named quotient.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ResidueForm {
    pub index: i64,
    pub kind: FormKind,
    /// Quotient carrying the form: "B/Y", "A/Z" or "B/Z".
    pub space: &'static str,
    pub dim: usize,
    /// Symplectic: the Gram matrix. Quadratic: the polar form.
    pub gram: KMat,
    /// Quadratic kind only.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub quadratic: Option<QuadForm>,
    /// Quadratic kind with even dimension only.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub arf: Option<u8>,
}

/// Quotient data at one index i.
#[derive(Clone, Debug, Serialize)]
pub struct SublatticeChain {
    pub index: i64,
    pub case: Case,
    /// s_a above.
    pub shifts: Vec<u32>,
    /// Residue of h/π^i (odd i) or h/(πσ(π))^{i/2} (even i) on A_i/πA_i.
    pub bilinear: KMat,
    /// The linear functional whose kernel is B_i/πA_i (square roots of the scaled norms);
    /// all zero when B_i = A_i.
    pub norm_roots: KVec,
    pub x: KMat,
    pub b: KMat,
    pub w: KMat,
    /// Defined for even i in Case 1 and odd i in Case 2.
    pub y: Option<KMat>,
    /// Defined for odd i in Case 1 (inside A_i/πA_i) and even i in Case 2 (inside B_i/πB_i, in
    /// the coordinates of `b_lattice_basis`).
    pub z: Option<KMat>,
    /// Case 2, even i: lattice basis of B_i (columns over the split basis) used for B_i/πB_i.
    #[serde(skip)]
    pub b_lattice_basis: Option<Matrix>,
    /// Special vector e ∈ A_i/X_i (zero when B_i = A_i or i is odd).
    pub e: KVec,
    /// B_i = A_i taken by convention (Case 1, odd i) rather than as a kernel.
    pub b_by_convention: bool,
    pub symplectic: Option<ResidueForm>,
    pub quadratic: Option<ResidueForm>,
}

/// Dimensions of the quotients that are at most 1.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct QuotientDims {
    pub a_mod_b: usize,
    pub w_mod_x: usize,
}

impl SublatticeChain {
    pub fn rank(&self) -> usize {
        self.shifts.len()
    }

    pub fn quotient_dims(&self) -> QuotientDims {
        let n = self.rank();
        QuotientDims { a_mod_b: n - self.b.len(), w_mod_x: self.w.len() - self.x.len() }
    }

    /// A_i ⊋ B_i.
    pub fn b_proper(&self) -> bool {
        !self.b_by_convention && self.b.len() < self.rank()
    }
}

fn forms_err(msg: &str) -> Error {
    Error::internal(Stage::Forms, msg)
}

/// a / 2^s for a ∈ 2^s A, reduced mod 2.
fn reduce_a(ctx: &RingContext, a: &AElem, s: u32) -> Result<KElem> {
    let g = ctx.galois();
    if !g.val2(a).map_or(true, |v| v >= s) {
        return Err(forms_err("scaled value is not integral"));
    }
    if s >= g.precision() {
        return Err(Error::PrecisionExhausted { stage: Stage::Forms });
    }
    Ok(ctx.kappa_of_a(&g.shr(a, s)))
}

fn residue_of_quotient(ctx: &RingContext, x: &BElem, pi_exp: u32, norm_exp: u32) -> Result<KElem> {
    if ctx.val(x).finite().is_none() {
        return Ok(KElem::ZERO);
    }
    let y = ctx.div_norm_pi_pow(x, norm_exp)?;
    let y = ctx.div_pi_pow(&y, pi_exp)?;
    Ok(ctx.residue(&y))
}

/// The chain at index i ≥ 0 for the decomposition's lattice.
pub fn sublattice_chain(dec: &JordanDecomposition, i: i64) -> Result<SublatticeChain> {
    if i < 0 {
        return Err(Error::CaseMismatch(format!("index {i} is below the scale of any integral lattice")));
    }
    let ctx: &RingContext = dec.ring();
    let k = ctx.kappa();
    let n = dec.rank();
    if 2 * i as u32 + 6 > dec.precision {
        return Err(Error::PrecisionExhausted { stage: Stage::Forms });
    }
    let iu = i as u32;
    let m = (iu + 1) / 2;
    let even = iu % 2 == 0;
    let case = ctx.case();

    let mut shifts = vec![0u32; n];
    for (idx, b) in dec.classification.blocks.iter().enumerate() {
        for c in dec.block_range(idx) {
            shifts[c] = (i - b.i).max(0) as u32;
        }
    }
    let s = dec.block_diagonal_gram();
    let h = Matrix::from_fn(n, n, |a, b| {
        let l = ctx.sigma(&ctx.pi_pow(shifts[a]));
        ctx.mul(&ctx.mul(&l, &ctx.pi_pow(shifts[b])), &s[(a, b)])
    });

    let bilinear: KMat = (0..n)
        .map(|a| {
            (0..n)
                .map(|b| if even { residue_of_quotient(ctx, &h[(a, b)], 0, m) } else { residue_of_quotient(ctx, &h[(a, b)], iu, 0) })
                .collect::<Result<_>>()
        })
        .collect::<Result<_>>()?;
    let x = linalg::kernel(k, &bilinear, n);
    let all: KMat = (0..n).map(|a| linalg::unit_vec(n, a)).collect();

    let additive = even || case == Case::Two;
    let norm_roots: KVec = if !additive {
        linalg::zero_vec(n)
    } else if even {
        (0..n).map(|a| k.sqrt(bilinear[a][a])).collect()
    } else {
        (0..n).map(|a| reduce_a(ctx, &h[(a, a)].a0, m).map(|q| k.sqrt(q))).collect::<Result<_>>()?
    };
    let b_space: KMat = if norm_roots.iter().all(|c| c.is_zero()) {
        all.clone()
    } else {
        linalg::kernel(k, &vec![norm_roots.clone()], n)
    };

    let e = if even && b_space.len() < n {
        linalg::solve(k, &bilinear, &norm_roots).ok_or(Error::NoSolution)?
    } else {
        linalg::zero_vec(n)
    };
    let w = if e.iter().any(|c| !c.is_zero()) {
        let mut t = x.clone();
        t.push(e.clone());
        linalg::span_basis(k, &t)
    } else {
        x.clone()
    };

    let mut chain = SublatticeChain {
        index: i,
        case,
        shifts,
        bilinear,
        norm_roots,
        x,
        b: b_space,
        w,
        y: None,
        z: None,
        b_lattice_basis: None,
        e,
        b_by_convention: !additive,
        symplectic: None,
        quadratic: None,
    };

    match (case, even) {
        (Case::One, true) => {
            let f = chain.bilinear.clone();
            symplectic_part(ctx, &mut chain, f)?;
        }
        (Case::Two, false) => {
            let f: KMat = (0..n)
                .map(|a| (0..n).map(|b| residue_of_quotient(ctx, &h[(a, b)], 1, m - 1)).collect::<Result<_>>())
                .collect::<Result<_>>()?;
            symplectic_part(ctx, &mut chain, f)?;
        }
        (Case::One, false) => {
            let q = QuadForm {
                diag: (0..n).map(|a| reduce_a(ctx, &h[(a, a)].a0, m)).collect::<Result<_>>()?,
                polar: (0..n)
                    .map(|a| {
                        (0..n)
                            .map(|b| if a == b { Ok(KElem::ZERO) } else { reduce_a(ctx, &ctx.trace(&h[(a, b)]), m) })
                            .collect::<Result<_>>()
                    })
                    .collect::<Result<_>>()?,
            };
            quadratic_part(ctx, &mut chain, &q, &all, "A/Z")?;
        }
        (Case::Two, true) => {
            // (1/2^{m+1})q is well defined on B_i/πB_i, not on B_i/πA_i: take the lattice basis
            // (lifts of a κ-basis of B_i/πA_i) ∪ (π·lifts of a complement).
            let comp = linalg::complement_in(k, &chain.b, &all);
            let mut t = Matrix::zeros(n, n);
            for (col, (v, scale)) in chain.b.iter().map(|v| (v, false)).chain(comp.iter().map(|v| (v, true))).enumerate() {
                let c: Vec<BElem> = v
                    .iter()
                    .map(|x| if scale { ctx.mul_pi(&ctx.lift(*x)) } else { ctx.lift(*x) })
                    .collect();
                t.set_column(col, &c);
            }
            let gb = Matrix::congruence(ctx, &h, &t);
            let q = QuadForm {
                diag: (0..n).map(|a| reduce_a(ctx, &gb[(a, a)].a0, m + 1)).collect::<Result<_>>()?,
                polar: (0..n)
                    .map(|a| {
                        (0..n)
                            .map(|b| if a == b { Ok(KElem::ZERO) } else { reduce_a(ctx, &ctx.trace(&gb[(a, b)]), m + 1) })
                            .collect::<Result<_>>()
                    })
                    .collect::<Result<_>>()?,
            };
            chain.b_lattice_basis = Some(t);
            quadratic_part(ctx, &mut chain, &q, &all, "B/Z")?;
        }
    }
    Ok(chain)
}

fn symplectic_part(ctx: &RingContext, chain: &mut SublatticeChain, f: KMat) -> Result<()> {
    let k = ctx.kappa();
    let n = chain.rank();
    let y = linalg::radical_in(k, &f, &chain.b, n);
    let comp = linalg::complement_in(k, &y, &chain.b);
    let gram = linalg::restrict(k, &f, &comp);
    let alternating = (0..comp.len()).all(|a| gram[a][a].is_zero());
    if !alternating || linalg::rank(k, &gram) != comp.len() {
        return Err(forms_err("induced form on B/Y is not symplectic"));
    }
    chain.symplectic = Some(ResidueForm {
        index: chain.index,
        kind: FormKind::Symplectic,
        space: "B/Y",
        dim: comp.len(),
        gram,
        quadratic: None,
        arf: None,
    });
    chain.y = Some(linalg::span_basis(k, &y));
    Ok(())
}

fn quadratic_part(ctx: &RingContext, chain: &mut SublatticeChain, q: &QuadForm, all: &[KVec], space: &'static str) -> Result<()> {
    let k = ctx.kappa();
    let n = q.dim();
    let rad = linalg::kernel(k, &q.polar, n);
    // q restricted to the radical is Σ λ_t²·q(r_t); its zeros are the kernel of Σ λ_t·√q(r_t).
    let roots: KVec = rad.iter().map(|r| k.sqrt(q.eval(k, r))).collect();
    let z: KMat = if rad.is_empty() {
        Vec::new()
    } else if roots.iter().all(|c| c.is_zero()) {
        rad.clone()
    } else {
        linalg::kernel(k, &vec![roots], rad.len()).iter().map(|c| linalg::combine(k, &rad, c, n)).collect()
    };
    let comp = linalg::complement_in(k, &z, all);
    let qbar = q.restrict(k, &comp);
    if !qbar.is_nonsingular(k) {
        return Err(forms_err("induced quadratic form is singular"));
    }
    let dim = comp.len();
    let a = if dim % 2 == 0 && dim > 0 { Some(arf(k, &qbar)?) } else { None };
    chain.quadratic = Some(ResidueForm {
        index: chain.index,
        kind: FormKind::Quadratic,
        space,
        dim,
        gram: qbar.polar.clone(),
        quadratic: Some(qbar),
        arf: a,
    });
    chain.z = Some(z);
    Ok(())
}

/// The special vector e at even i (zero when B_i = A_i).
pub fn special_vector(dec: &JordanDecomposition, i: i64) -> Result<KVec> {
    if i % 2 != 0 {
        return Err(Error::CaseMismatch(format!("special vector needs even index, got {i}")));
    }
    Ok(sublattice_chain(dec, i)?.e)
}

/// h_i on B_i/Y_i: Case 1 with even i, Case 2 with odd i.
pub fn induced_symplectic(dec: &JordanDecomposition, i: i64) -> Result<ResidueForm> {
    let ok = matches!((dec.case(), i.rem_euclid(2)), (Case::One, 0) | (Case::Two, 1));
    if !ok {
        return Err(Error::CaseMismatch(format!("no symplectic form at index {i} in Case {}", dec.case().number())));
    }
    sublattice_chain(dec, i)?.symplectic.ok_or_else(|| forms_err("missing symplectic form"))
}

/// q̄_i: on A_i/Z_i in Case 1 with odd i, on B_i/Z_i in Case 2 with even i.
pub fn induced_quadratic(dec: &JordanDecomposition, i: i64) -> Result<ResidueForm> {
    let ok = matches!((dec.case(), i.rem_euclid(2)), (Case::One, 1) | (Case::Two, 0));
    if !ok {
        return Err(Error::CaseMismatch(format!("no quadratic form at index {i} in Case {}", dec.case().number())));
    }
    sublattice_chain(dec, i)?.quadratic.ok_or_else(|| forms_err("missing quadratic form"))
}

/// Chains at every index from 0 to one past the largest block scale.
pub fn all_chains(dec: &JordanDecomposition) -> Result<Vec<SublatticeChain>> {
    let top = dec.classification.blocks.last().map_or(0, |b| b.i + 1);
    (0..=top.max(0)).map(|i| sublattice_chain(dec, i)).collect()
}
