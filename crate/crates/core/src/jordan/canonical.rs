//! Normal forms of Jordan blocks: H(i)^λ ⊕ K with K of rank ≤ 2.
//!
//! Witnesses are found by a digit search to a moderate depth followed by Newton refinement,
//! so the output is exact at working precision up to a few lost digits.

use super::split::JordanDecomposition;
use crate::error::{Error, Result};
use crate::ring::{AElem, BElem, Case, KElem, Matrix, PiVal, RingContext};

/// π-adic depth reached by the digit search before Newton steps take over.
const SEARCH_DEPTH: u32 = 12;
/// Largest digit-search branching factor attempted.
const MAX_BRANCHING: u64 = 1 << 16;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Residual {
    Empty,
    /// (a), a ≡ 1 mod 2.
    Unit { a: AElem },
    /// A(1, 2b, 1).
    OddUnimodularPlane { b: AElem },
    /// A(2δ, 2b, 1).
    EvenUnimodularPlane { b: AElem },
    /// A(2, 2b, π).
    RamifiedPlane { b: AElem },
    /// A(4a, 2δ, π).
    FreeOddPlane { a: AElem },
}

impl Residual {
    pub fn tag(&self) -> &'static str {
        match self {
            Residual::Empty => "empty",
            Residual::Unit { .. } => "(a)",
            Residual::OddUnimodularPlane { .. } => "A(1,2b,1)",
            Residual::EvenUnimodularPlane { .. } => "A(2delta,2b,1)",
            Residual::RamifiedPlane { .. } => "A(2,2b,pi)",
            Residual::FreeOddPlane { .. } => "A(4a,2delta,pi)",
        }
    }

    pub fn rank(&self) -> usize {
        match self {
            Residual::Empty => 0,
            Residual::Unit { .. } => 1,
            _ => 2,
        }
    }

    /// Gram matrix at scale i0 ∈ {0, 1}.
    pub fn gram(&self, ctx: &RingContext) -> Matrix {
        let a = |x: &AElem| ctx.from_a(*x);
        let two = |x: &AElem| ctx.from_a(ctx.galois().mul_int(x, 2));
        let delta = ctx.from_a(*ctx.param());
        let rows = match self {
            Residual::Empty => vec![],
            Residual::Unit { a: u } => vec![vec![a(u)]],
            Residual::OddUnimodularPlane { b } => vec![vec![ctx.one(), ctx.one()], vec![ctx.one(), two(b)]],
            Residual::EvenUnimodularPlane { b } => {
                vec![vec![ctx.mul(&ctx.from_int(2), &delta), ctx.one()], vec![ctx.one(), two(b)]]
            }
            Residual::RamifiedPlane { b } => {
                vec![vec![ctx.from_int(2), ctx.pi()], vec![ctx.sigma(&ctx.pi()), two(b)]]
            }
            Residual::FreeOddPlane { a: x } => vec![
                vec![ctx.from_a(ctx.galois().mul_int(x, 4)), ctx.pi()],
                vec![ctx.sigma(&ctx.pi()), ctx.mul(&ctx.from_int(2), &delta)],
            ],
        };
        Matrix::from_rows(rows).expect("square")
    }
}

/// Normal form of one Jordan block.
#[derive(Clone, Debug)]
pub struct NormalForm {
    pub i: i64,
    /// Number of hyperbolic planes H(i).
    pub hyperbolic: usize,
    pub residual: Residual,
    /// Columns: the normal-form basis in input coordinates.
    pub basis: Matrix,
    /// Block Gram predicted by the descriptor, at scale i.
    pub model_gram: Matrix,
}

#[derive(Clone, Debug)]
pub struct CanonicalForm {
    pub blocks: Vec<NormalForm>,
    /// Columns: the full normal-form basis in input coordinates.
    pub witness: Matrix,
    /// ⊕ of the block model Grams.
    pub model_gram: Matrix,
    /// Largest e with σ(ᵗW)·G·W ≡ model_gram mod π^e.
    pub verified_precision: u32,
}

/// Normal form of block `idx` (computed as part of the whole decomposition, since bound odd
/// blocks in Case 2 borrow a vector from a neighbor).
pub fn canonicalize_block(dec: &JordanDecomposition, idx: usize) -> Result<NormalForm> {
    let cf = canonicalize(dec)?;
    cf.blocks.into_iter().nth(idx).ok_or_else(|| Error::CanonFail(format!("no block {idx}")))
}

pub fn canonicalize(dec: &JordanDecomposition) -> Result<CanonicalForm> {
    let ring = dec.ring().clone();
    let ctx: &RingContext = &ring;
    let n = dec.rank();
    let s = dec.block_diagonal_gram();
    let blocks = &dec.classification.blocks;
    if blocks.iter().any(|b| b.i < 0) {
        return Err(Error::CanonFail("negative scale".into()));
    }
    // Vectors in split coordinates, per block.
    let mut vecs: Vec<Vec<Vec<BElem>>> = (0..blocks.len())
        .map(|idx| dec.block_range(idx).map(|c| unit_vector(ctx, n, c)).collect())
        .collect();

    if ctx.case() == Case::Two {
        for idx in 0..blocks.len() {
            let b = &blocks[idx];
            if b.is_even() || !b.type_one() || !b.norm_minimal {
                continue;
            }
            let neighbor = [b.i + 1, b.i - 1].into_iter().find_map(|j| {
                dec.block_index(j).filter(|&k| blocks[k].norm_minimal)
            });
            let Some(nb) = neighbor else { continue };
            absorb_neighbor(ctx, &s, &mut vecs, idx, nb, blocks[nb].i > b.i)?;
        }
    }

    let mut out = Vec::with_capacity(blocks.len());
    let mut cols: Vec<Vec<BElem>> = Vec::with_capacity(n);
    for (idx, b) in blocks.iter().enumerate() {
        let vb = columns_to_matrix(&vecs[idx], n);
        let gb = Matrix::congruence(ctx, &s, &vb);
        let (hyp, residual, local) = normal_form(ctx, &gb, b.i as u32, b.type_one())?;
        let basis_split = vb.mul(ctx, &local);
        for c in 0..basis_split.cols() {
            cols.push(basis_split.column(c));
        }
        let model = model_block(ctx, b.i as u32, hyp, &residual);
        let basis = dec.witness.mul(ctx, &basis_split);
        out.push(NormalForm { i: b.i, hyperbolic: hyp, residual, basis, model_gram: model });
    }
    let w_split = columns_to_matrix(&cols, n);
    let witness = dec.witness.mul(ctx, &w_split);
    let mut model_gram = Matrix::zeros(0, 0);
    for nf in &out {
        model_gram = model_gram.direct_sum(&nf.model_gram);
    }
    let actual = Matrix::congruence(ctx, dec.lattice.gram(), &witness);
    let diff = actual.sub(ctx, &model_gram);
    let verified_precision = diff.min_val(ctx).finite().unwrap_or(ctx.pi_precision());
    Ok(CanonicalForm { blocks: out, witness, model_gram, verified_precision })
}

/// Gram of H(i)^λ ⊕ K at scale i.
fn model_block(ctx: &RingContext, i: u32, hyp: usize, residual: &Residual) -> Matrix {
    let i0 = i % 2;
    let scale = ctx.from_a(ctx.galois().pow(&ctx.norm_pi(), ((i - i0) / 2) as u64));
    let h = Matrix::from_rows(vec![
        vec![ctx.zero(), ctx.pi_pow(i0)],
        vec![ctx.sigma(&ctx.pi_pow(i0)), ctx.zero()],
    ])
    .expect("square");
    let mut g = Matrix::zeros(0, 0);
    for _ in 0..hyp {
        g = g.direct_sum(&h);
    }
    g = g.direct_sum(&residual.gram(ctx));
    g.map(|x| ctx.mul(x, &scale))
}

/// Replace each basis vector b of the odd block by b + λ·w (w a norm generator of the type-I
/// neighbor, times π when the neighbor is below) so the block's norm rises to n(H(i)), then
/// re-orthogonalize the neighbor.
fn absorb_neighbor(
    ctx: &RingContext,
    s: &Matrix,
    vecs: &mut [Vec<Vec<BElem>>],
    idx: usize,
    nb: usize,
    upper: bool,
) -> Result<()> {
    let g = ctx.galois();
    let k = ctx.kappa();
    let nvecs = vecs[nb].clone();
    let w0 = norm_generator(ctx, s, &nvecs).ok_or_else(|| Error::CanonFail("neighbor has no norm generator".into()))?;
    let w = if upper { w0 } else { w0.iter().map(|x| ctx.mul_pi(x)).collect() };
    let qw = hform(ctx, s, &w, &w);
    let vw = ctx.val(&qw).finite().ok_or_else(|| Error::CanonFail("precision".into()))?;
    let m = vw / 2;
    let qw_bar = ctx.kappa_of_a(&g.shr(&qw.a0, m));
    let qw_inv = k.inv(qw_bar).ok_or_else(|| Error::CanonFail("neighbor norm".into()))?;
    for b in vecs[idx].iter_mut() {
        let qb = hform(ctx, s, b, b);
        if !ctx.val(&qb).at_least(2 * m) {
            return Err(Error::CanonFail("odd block norm below neighbor".into()));
        }
        let qb_bar = ctx.kappa_of_a(&g.shr(&qb.a0, m));
        let lam = ctx.lift(k.sqrt(k.mul(qb_bar, qw_inv)));
        for (bi, wi) in b.iter_mut().zip(&w) {
            *bi = ctx.add(bi, &ctx.mul(wi, &lam));
        }
    }
    let p = vecs[idx].clone();
    let i = gram_of(ctx, s, &p).min_val(ctx).finite().unwrap_or(0);
    for y in vecs[nb].iter_mut() {
        *y = project_off(ctx, s, &p, i, y)?;
    }
    Ok(())
}

/// A vector among v_a, v_a + v_b, v_a + πv_b whose norm generates the norm ideal of the span.
fn norm_generator(ctx: &RingContext, s: &Matrix, v: &[Vec<BElem>]) -> Option<Vec<BElem>> {
    let mut cands: Vec<Vec<BElem>> = v.to_vec();
    for a in 0..v.len() {
        for b in a + 1..v.len() {
            for c in [ctx.one(), ctx.pi()] {
                cands.push(v[a].iter().zip(&v[b]).map(|(x, y)| ctx.add(x, &ctx.mul(y, &c))).collect());
            }
        }
    }
    cands.into_iter().min_by_key(|x| ctx.val(&hform(ctx, s, x, x)))
}

/// y − Σ p_t·c_t with c = Gp^{-1}·h(P, y), Gp the π^i-modular Gram of P.
fn project_off(ctx: &RingContext, s: &Matrix, p: &[Vec<BElem>], i: u32, y: &[BElem]) -> Result<Vec<BElem>> {
    let r = p.len();
    let gp = Matrix::from_fn(r, r, |a, b| hform(ctx, s, &p[a], &p[b]));
    let scaled = gp.map(|x| ctx.div_pi_pow(x, i).unwrap_or_default());
    let inv = scaled.inverse(ctx).map_err(|_| Error::CanonFail("block not modular".into()))?;
    let rhs: Vec<BElem> = p.iter().map(|pa| ctx.div_pi_pow(&hform(ctx, s, pa, y), i)).collect::<Result<_>>()?;
    let mut out = y.to_vec();
    for t in 0..r {
        let mut c = ctx.zero();
        for (u, rv) in rhs.iter().enumerate() {
            c = ctx.add(&c, &ctx.mul(&inv[(t, u)], rv));
        }
        for (o, pt) in out.iter_mut().zip(&p[t]) {
            *o = ctx.sub(o, &ctx.mul(pt, &c));
        }
    }
    Ok(out)
}

/// Normal form of a single π^i-modular Gram. Returns (λ, K, local basis columns).
fn normal_form(ctx: &RingContext, gb: &Matrix, i: u32, type_one: bool) -> Result<(usize, Residual, Matrix)> {
    let n = gb.rows();
    let i0 = i % 2;
    let shift = (i - i0) / 2;
    let g0 = gb.map(|x| ctx.div_norm_pi_pow(x, shift).unwrap_or_default());
    let fail = |what: &str| Error::CanonFail(format!("{what} (scale {i}, rank {n})"));

    // Current complement: basis columns in local coordinates.
    let mut cur: Vec<Vec<BElem>> = (0..n).map(|c| unit_vector(ctx, n, c)).collect();
    let mut done: Vec<Vec<BElem>> = Vec::new();
    let mut hyp = 0usize;
    loop {
        let m = cur.len();
        let gc = gram_of(ctx, &g0, &cur);
        let norm = crate::lattice::norm_exp_of(ctx, &gc);
        // Rank-2 residuals that are themselves hyperbolic: Case 1 type II unimodular, and
        // Case 2 odd blocks whose norm is n(H(1)) = (4).
        let split_plane = m >= 3
            || (m == 2
                && match (ctx.case(), i0) {
                    (Case::One, 0) => norm == PiVal::Finite(2),
                    (Case::Two, 1) => norm == PiVal::Finite(4),
                    _ => false,
                });
        if !split_plane {
            break;
        }
        let (x, y) = find_hyperbolic_pair(ctx, &gc, i0).ok_or_else(|| fail("no hyperbolic pair"))?;
        let xl = combine(ctx, &cur, &x);
        let yl = combine(ctx, &cur, &y);
        let pivots = unit_minor(ctx, &x, &y).ok_or_else(|| fail("pair not primitive"))?;
        let rest: Vec<Vec<BElem>> = cur
            .iter()
            .enumerate()
            .filter(|(j, _)| !pivots.contains(j))
            .map(|(_, c)| c.clone())
            .collect();
        let p = vec![xl.clone(), yl.clone()];
        cur = rest.iter().map(|c| project_off(ctx, &g0, &p, i0, c)).collect::<Result<_>>()?;
        done.push(xl);
        done.push(yl);
        hyp += 1;
    }

    let m = cur.len();
    let gc = gram_of(ctx, &g0, &cur);
    let g = ctx.galois();
    let k = ctx.kappa();
    let two_delta = ctx.mul(&ctx.from_int(2), &ctx.from_a(*ctx.param()));
    let (residual, vecs): (Residual, Vec<Vec<BElem>>) = match (m, i0) {
        (0, _) => (Residual::Empty, vec![]),
        (1, 0) => {
            let c = gc[(0, 0)].a0;
            let t = g.lift(k.sqrt(k.inv(ctx.kappa_of_a(&c)).ok_or_else(|| fail("non-unit rank-1 block"))?));
            let a = g.mul(&g.mul(&t, &t), &c);
            (Residual::Unit { a }, vec![scale_vec(ctx, &cur[0], &ctx.from_a(t))])
        }
        (2, 0) if type_one => {
            let x = find_vector_with_norm(ctx, &gc, 0, &ctx.one()).ok_or_else(|| fail("no unit-norm vector"))?;
            let z0 = dual_partner(ctx, &gc, &x, &ctx.one()).ok_or_else(|| fail("no partner"))?;
            let w0: Vec<BElem> = z0.iter().zip(&x).map(|(a, b)| ctx.sub(a, b)).collect();
            let qw = hform(ctx, &gc, &w0, &w0).a0;
            let mu = g.lift(k.sqrt(k.inv(ctx.kappa_of_a(&qw)).ok_or_else(|| fail("degenerate complement"))?));
            let z: Vec<BElem> = x.iter().zip(&w0).map(|(a, b)| ctx.add(a, &ctx.mul(b, &ctx.from_a(mu)))).collect();
            let b = g.shr(&hform(ctx, &gc, &z, &z).a0, 1);
            (Residual::OddUnimodularPlane { b }, vec![combine(ctx, &cur, &x), combine(ctx, &cur, &z)])
        }
        (2, 0) => {
            let x = find_vector_with_norm(ctx, &gc, 0, &two_delta).ok_or_else(|| fail("no norm-2δ vector"))?;
            let z = dual_partner(ctx, &gc, &x, &ctx.one()).ok_or_else(|| fail("no partner"))?;
            let b = g.shr(&hform(ctx, &gc, &z, &z).a0, 1);
            (Residual::EvenUnimodularPlane { b }, vec![combine(ctx, &cur, &x), combine(ctx, &cur, &z)])
        }
        (2, _) if ctx.case() == Case::One => {
            let x = find_vector_with_norm(ctx, &gc, 1, &ctx.from_int(2)).ok_or_else(|| fail("no norm-2 vector"))?;
            let z = dual_partner(ctx, &gc, &x, &ctx.pi()).ok_or_else(|| fail("no partner"))?;
            let b = g.shr(&hform(ctx, &gc, &z, &z).a0, 1);
            (Residual::RamifiedPlane { b }, vec![combine(ctx, &cur, &x), combine(ctx, &cur, &z)])
        }
        (2, _) => {
            // e2 with norm 2δ; e1 = (1 + sπ)z0 + s·e2 keeps h(e1, e2) = π and makes Q(e1) ∈ 4A.
            let e2 = find_vector_with_norm(ctx, &gc, 1, &two_delta).ok_or_else(|| fail("no norm-2δ vector"))?;
            let z0 = dual_partner(ctx, &gc, &e2, &ctx.sigma(&ctx.pi())).ok_or_else(|| fail("no partner"))?;
            let q0 = g.shr(&hform(ctx, &gc, &z0, &z0).a0, 1);
            let dinv = k.inv(ctx.kappa_of_a(ctx.param())).expect("unit parameter");
            let s = ctx.lift(k.sqrt(k.mul(ctx.kappa_of_a(&q0), dinv)));
            let c1 = ctx.add(&ctx.one(), &ctx.mul(&s, &ctx.pi()));
            let e1: Vec<BElem> = z0.iter().zip(&e2).map(|(a, b)| ctx.add(&ctx.mul(a, &c1), &ctx.mul(b, &s))).collect();
            let q1 = hform(ctx, &gc, &e1, &e1).a0;
            if !g.val2(&q1).map_or(true, |v| v >= 2) {
                return Err(fail("norm adjustment failed"));
            }
            let a = g.shr(&q1, 2);
            (Residual::FreeOddPlane { a }, vec![combine(ctx, &cur, &e1), combine(ctx, &cur, &e2)])
        }
        _ => return Err(fail("unexpected residual rank")),
    };
    done.extend(vecs);
    Ok((hyp, residual, columns_to_matrix(&done, n)))
}

fn unit_vector(ctx: &RingContext, n: usize, c: usize) -> Vec<BElem> {
    (0..n).map(|r| if r == c { ctx.one() } else { ctx.zero() }).collect()
}

fn columns_to_matrix(cols: &[Vec<BElem>], n: usize) -> Matrix {
    Matrix::from_fn(n, cols.len(), |r, c| cols[c][r])
}

fn scale_vec(ctx: &RingContext, v: &[BElem], c: &BElem) -> Vec<BElem> {
    v.iter().map(|x| ctx.mul(x, c)).collect()
}

/// Σ coeff_j · basis_j.
fn combine(ctx: &RingContext, basis: &[Vec<BElem>], coeff: &[BElem]) -> Vec<BElem> {
    let n = basis.first().map_or(0, |b| b.len());
    let mut out = vec![ctx.zero(); n];
    for (b, c) in basis.iter().zip(coeff) {
        for (o, x) in out.iter_mut().zip(b) {
            *o = ctx.add(o, &ctx.mul(x, c));
        }
    }
    out
}

fn gram_of(ctx: &RingContext, g: &Matrix, vecs: &[Vec<BElem>]) -> Matrix {
    let m = vecs.len();
    Matrix::from_fn(m, m, |a, b| hform(ctx, g, &vecs[a], &vecs[b]))
}

/// h(x, y) = σ(ᵗx)·G·y.
pub(crate) fn hform(ctx: &RingContext, g: &Matrix, x: &[BElem], y: &[BElem]) -> BElem {
    let mut acc = ctx.zero();
    for (a, xa) in x.iter().enumerate() {
        if ctx.is_zero(xa) {
            continue;
        }
        let sx = ctx.sigma(xa);
        let mut row = ctx.zero();
        for (b, yb) in y.iter().enumerate() {
            row = ctx.add(&row, &ctx.mul(&g[(a, b)], yb));
        }
        acc = ctx.add(&acc, &ctx.mul(&sx, &row));
    }
    acc
}

/// Two coordinates whose 2×2 minor of [x y] is a unit.
fn unit_minor(ctx: &RingContext, x: &[BElem], y: &[BElem]) -> Option<[usize; 2]> {
    let n = x.len();
    for a in 0..n {
        for b in a + 1..n {
            let d = ctx.sub(&ctx.mul(&x[a], &y[b]), &ctx.mul(&x[b], &y[a]));
            if ctx.is_unit(&d) {
                return Some([a, b]);
            }
        }
    }
    None
}

/// z with h(x, z) = target and (x, z) a basis of the plane.
fn dual_partner(ctx: &RingContext, g: &Matrix, x: &[BElem], target: &BElem) -> Option<Vec<BElem>> {
    let n = x.len();
    let v = ctx.val(target).finite()?;
    let unit_t = ctx.div_pi_pow(target, v).ok()?;
    let qx = hform(ctx, g, x, x);
    if ctx.val(&qx) == PiVal::Finite(v) {
        // x is itself a norm generator: complete it to a basis by some e_j, then solve
        // h(x, e_j + αx) = target for α.
        let j = (0..n).find(|&j| unit_minor(ctx, x, &unit_vector(ctx, n, j)).is_some())?;
        let e = unit_vector(ctx, n, j);
        let rhs = ctx.sub(target, &hform(ctx, g, x, &e));
        let alpha = ctx.mul(&ctx.div_pi_pow(&rhs, v).ok()?, &ctx.inv(&ctx.div_pi_pow(&qx, v).ok()?).ok()?);
        return Some(e.iter().zip(x).map(|(a, b)| ctx.add(a, &ctx.mul(b, &alpha))).collect());
    }
    for j in 0..n {
        let e = unit_vector(ctx, n, j);
        let h = hform(ctx, g, x, &e);
        if ctx.val(&h) == PiVal::Finite(v) {
            let hu = ctx.div_pi_pow(&h, v).ok()?;
            let c = ctx.mul(&unit_t, &ctx.inv(&hu).ok()?);
            return Some(scale_vec(ctx, &e, &c));
        }
    }
    None
}

/// Depth-first search over π-adic digits of `len` coordinates; `ok(v, e)` tests a prefix
/// known mod π^{e+1}.
fn digit_search(
    ctx: &RingContext,
    len: usize,
    levels: u32,
    ok: &dyn Fn(&[BElem], u32) -> bool,
) -> Option<Vec<BElem>> {
    let f = ctx.f();
    let branching = f.checked_pow(len as u32)?;
    if branching > MAX_BRANCHING {
        return None;
    }
    let mut v = vec![ctx.zero(); len];
    fn rec(
        ctx: &RingContext,
        v: &mut Vec<BElem>,
        e: u32,
        levels: u32,
        branching: u64,
        ok: &dyn Fn(&[BElem], u32) -> bool,
    ) -> bool {
        if e == levels {
            return true;
        }
        let f = ctx.f();
        let pe = ctx.pi_pow(e);
        let saved = v.clone();
        for code in 0..branching {
            let mut c = code;
            for slot in v.iter_mut() {
                let d = KElem((c % f) as u16);
                c /= f;
                if !d.is_zero() {
                    *slot = ctx.add(slot, &ctx.mul(&pe, &ctx.lift(d)));
                }
            }
            if ok(v, e) && rec(ctx, v, e + 1, levels, branching, ok) {
                return true;
            }
            v.clone_from(&saved);
        }
        false
    }
    if rec(ctx, &mut v, 0, levels, branching, ok) {
        Some(v)
    } else {
        None
    }
}

/// Primitive x with h(x, x) = target exactly (at working precision, up to lost digits).
pub(crate) fn find_vector_with_norm(ctx: &RingContext, g: &Matrix, i0: u32, target: &BElem) -> Option<Vec<BElem>> {
    let n = g.rows();
    let levels = SEARCH_DEPTH.saturating_sub(i0);
    let seed = digit_search(ctx, n, levels, &|x, e| {
        if e == 0 && x.iter().all(|c| !ctx.is_unit(c)) {
            return false;
        }
        let d = ctx.sub(&hform(ctx, g, x, x), target);
        ctx.val(&d).at_least(e + 1 + i0)
    })?;
    let mut x = seed;
    for _ in 0..64 {
        let err = ctx.sub(target, &hform(ctx, g, &x, &x));
        if ctx.is_zero(&err) {
            return Some(x);
        }
        let j = (0..n).min_by_key(|&j| ctx.val(&hform(ctx, g, &x, &unit_vector(ctx, n, j))))?;
        let y = unit_vector(ctx, n, j);
        let w = hform(ctx, g, &x, &y);
        let t = newton_step(ctx, &err.a0, &w)?;
        for (xi, yi) in x.iter_mut().zip(&y) {
            *xi = ctx.add(xi, &ctx.mul(yi, &t));
        }
    }
    let err = ctx.sub(target, &hform(ctx, g, &x, &x));
    ctx.val(&err).at_least(ctx.pi_precision().saturating_sub(8)).then_some(x)
}

/// t with Tr(t·w) = err, i.e. t = (err/2)/w.
fn newton_step(ctx: &RingContext, err: &AElem, w: &BElem) -> Option<BElem> {
    let g = ctx.galois();
    if g.val2(err).map_or(false, |v| v == 0) {
        return None;
    }
    let tau = ctx.from_a(g.shr(err, 1));
    let vw = ctx.val(w).finite()?;
    if !ctx.val(&tau).at_least(vw) {
        return None;
    }
    let wu = ctx.div_pi_pow(w, vw).ok()?;
    Some(ctx.mul(&ctx.div_pi_pow(&tau, vw).ok()?, &ctx.inv(&wu).ok()?))
}

/// (x, y) with h(x,x) = h(y,y) = 0 and h(x,y) = π^{i0}.
pub(crate) fn find_hyperbolic_pair(ctx: &RingContext, g: &Matrix, i0: u32) -> Option<(Vec<BElem>, Vec<BElem>)> {
    let n = g.rows();
    let levels = SEARCH_DEPTH.saturating_sub(i0);
    let pi0 = ctx.pi_pow(i0);
    let seed = digit_search(ctx, 2 * n, levels, &|v, e| {
        let (x, y) = v.split_at(n);
        let need = e + 1 + i0;
        ctx.val(&hform(ctx, g, x, x)).at_least(need)
            && ctx.val(&hform(ctx, g, y, y)).at_least(need)
            && ctx.val(&ctx.sub(&hform(ctx, g, x, y), &pi0)).at_least(need)
    })?;
    let mut x = seed[..n].to_vec();
    let mut y = seed[n..].to_vec();
    // Make x isotropic: x ← x + y·t with Tr(t·h(x,y)) = −Q(x).
    for _ in 0..64 {
        let q = hform(ctx, g, &x, &x);
        if ctx.is_zero(&q) {
            break;
        }
        let t = newton_step(ctx, &ctx.galois().neg(&q.a0), &hform(ctx, g, &x, &y))?;
        for (xi, yi) in x.iter_mut().zip(&y) {
            *xi = ctx.add(xi, &ctx.mul(yi, &t));
        }
    }
    // Normalize h(x, y) = π^{i0}.
    let h = hform(ctx, g, &x, &y);
    let hu = ctx.div_pi_pow(&h, i0).ok()?;
    let c = ctx.inv(&hu).ok()?;
    y = scale_vec(ctx, &y, &c);
    // y ← y + x·s with Tr(s·σ(π^{i0})) = −Q(y).
    let qy = hform(ctx, g, &y, &y);
    if !ctx.is_zero(&qy) {
        let s = newton_step(ctx, &ctx.galois().neg(&qy.a0), &ctx.sigma(&pi0))?;
        for (yi, xi) in y.iter_mut().zip(&x) {
            *yi = ctx.add(yi, &ctx.mul(xi, &s));
        }
    }
    Some((x, y))
}

/// The basis (e1 − (2aπ/δ)e2, e2 + e3, (cπ/δ)e1 + e3) of A(4a, 2δ, π) ⊕ (2c) in Case 2, and the
/// Gram A(−4a−16a², 2(δ+c), π(1+4a)) ⊕ (2c(1 − 4ac/δ)) it produces.
pub fn rewrite_bound_pair(ctx: &RingContext, a: &AElem, c: &AElem) -> Result<(Matrix, Matrix)> {
    if ctx.case() != Case::Two {
        return Err(Error::CaseMismatch("bound-pair rewrite needs Case 2".into()));
    }
    let g = ctx.galois();
    let delta = *ctx.param();
    let dinv = g.inv(&delta)?;
    let (ab, cb) = (ctx.from_a(*a), ctx.from_a(*c));
    let t = ctx.neg(&ctx.mul(&ctx.mul(&ctx.from_int(2), &ab), &ctx.mul(&ctx.pi(), &ctx.from_a(dinv))));
    let s = ctx.mul(&cb, &ctx.mul(&ctx.pi(), &ctx.from_a(dinv)));
    let (o, z) = (ctx.one(), ctx.zero());
    let u = Matrix::from_rows(vec![vec![o, z, s], vec![t, o, z], vec![z, o, o]])?;
    let four_a = g.mul_int(a, 4);
    let a11 = g.neg(&g.add(&four_a, &g.mul_int(&g.mul(a, a), 16)));
    let a22 = g.mul_int(&g.add(&delta, c), 2);
    let a12 = ctx.mul(&ctx.pi(), &ctx.from_a(g.add(&g.one(), &four_a)));
    let c3 = g.mul(&g.mul_int(c, 2), &g.sub(&g.one(), &g.mul(&g.mul(&four_a, c), &dinv)));
    let z3 = ctx.zero();
    let gram = Matrix::from_rows(vec![
        vec![ctx.from_a(a11), a12, z3],
        vec![ctx.sigma(&a12), ctx.from_a(a22), z3],
        vec![z3, z3, ctx.from_a(c3)],
    ])?;
    Ok((u, gram))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gen;
    use crate::jordan::jordan_split;
    use crate::lattice::HermitianLattice;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;
    use std::sync::Arc;

    fn ring(case: Case) -> Arc<RingContext> {
        Arc::new(RingContext::new(case, 1, &[1], 24).unwrap())
    }

    fn canon(l: &HermitianLattice) -> CanonicalForm {
        let dec = jordan_split(l).unwrap();
        let cf = canonicalize(&dec).unwrap();
        assert!(cf.verified_precision >= 20, "verified only to {}", cf.verified_precision);
        assert!(cf.witness.is_unimodular(dec.ring()));
        cf
    }

    #[test]
    fn hyperbolic_plane_case_one() {
        let r = ring(Case::One);
        let cf = canon(&HermitianLattice::hyperbolic(&r, 0).unwrap());
        assert_eq!(cf.blocks[0].hyperbolic, 1);
        assert_eq!(cf.blocks[0].residual, Residual::Empty);
    }

    #[test]
    fn odd_unimodular_plane() {
        let r = ring(Case::One);
        let cf = canon(&HermitianLattice::diagonal(&r, &[1, 1]).unwrap());
        assert_eq!(cf.blocks[0].hyperbolic, 0);
        assert_eq!(cf.blocks[0].residual.tag(), "A(1,2b,1)");
    }

    #[test]
    fn scrambled_lattices_reach_normal_form() {
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        for case in [Case::One, Case::Two] {
            let r = ring(case);
            for _ in 0..15 {
                let (l, _) = gen::random_lattice(&r, 4, 3, &mut rng);
                let cf = canon(&l);
                let dec = jordan_split(&l).unwrap();
                for (nf, b) in cf.blocks.iter().zip(&dec.classification.blocks) {
                    assert_eq!(2 * nf.hyperbolic + nf.residual.rank(), b.rank);
                }
            }
        }
    }

    #[test]
    fn bound_pair_becomes_hyperbolic() {
        let r = ring(Case::Two);
        let l = gen::bound_pair_lattice(&r, 1, 1).unwrap();
        let cf = canon(&l);
        assert_eq!(cf.blocks[0].i, 1);
        assert_eq!(cf.blocks[0].hyperbolic, 1);
        assert_eq!(cf.blocks[0].residual, Residual::Empty);
        assert_eq!(cf.blocks[1].residual.tag(), "(a)");
    }

    #[test]
    fn explicit_rewrite_basis() {
        for (a, c) in [(1i64, 1i64), (3, 5), (2, 7)] {
            let r = ring(Case::Two);
            let g = r.galois();
            let l = gen::bound_pair_lattice(&r, a, c).unwrap();
            let (u, expect) = rewrite_bound_pair(&r, &g.from_int(a), &g.from_int(c)).unwrap();
            let got = Matrix::congruence(&r, l.gram(), &u);
            assert!(got.eq_mod(&r, &expect, r.pi_precision() - 4));
            assert!(u.is_unimodular(&r));
            let plane = HermitianLattice::new(r.clone(), got.submatrix(&[0, 1], &[0, 1])).unwrap();
            assert_eq!(plane.norm_exp(), PiVal::Finite(4));
        }
    }
}
