//! Dense matrices over B. Arithmetic takes the owning [`RingContext`] explicitly.

use rand::Rng;

use super::ext::{BElem, PiVal, RingContext};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<BElem>,
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix { rows, cols, data: vec![BElem::default(); rows * cols] }
    }

    pub fn identity(ctx: &RingContext, n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = ctx.one();
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<BElem>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::NotSquare);
        }
        Ok(Matrix { rows: r, cols: c, data: rows.into_iter().flatten().collect() })
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> BElem) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Matrix { rows, cols, data }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn row(&self, i: usize) -> &[BElem] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn to_rows(&self) -> Vec<Vec<BElem>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn column(&self, j: usize) -> Vec<BElem> {
        (0..self.rows).map(|i| self[(i, j)]).collect()
    }

    pub fn set_column(&mut self, j: usize, col: &[BElem]) {
        for (i, v) in col.iter().enumerate() {
            self[(i, j)] = *v;
        }
    }

    pub fn submatrix(&self, rows: &[usize], cols: &[usize]) -> Matrix {
        Matrix::from_fn(rows.len(), cols.len(), |i, j| self[(rows[i], cols[j])])
    }

    pub fn mul(&self, ctx: &RingContext, other: &Matrix) -> Matrix {
        assert_eq!(self.cols, other.rows);
        let mut out = Matrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for l in 0..self.cols {
                let a = self[(i, l)];
                if ctx.is_zero(&a) {
                    continue;
                }
                for j in 0..other.cols {
                    let p = ctx.mul(&a, &other[(l, j)]);
                    out[(i, j)] = ctx.add(&out[(i, j)], &p);
                }
            }
        }
        out
    }

    pub fn add(&self, ctx: &RingContext, other: &Matrix) -> Matrix {
        Matrix::from_fn(self.rows, self.cols, |i, j| ctx.add(&self[(i, j)], &other[(i, j)]))
    }

    pub fn sub(&self, ctx: &RingContext, other: &Matrix) -> Matrix {
        Matrix::from_fn(self.rows, self.cols, |i, j| ctx.sub(&self[(i, j)], &other[(i, j)]))
    }

    pub fn map(&self, f: impl Fn(&BElem) -> BElem) -> Matrix {
        Matrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(f).collect() }
    }

    /// σ(ᵗM).
    pub fn conj_transpose(&self, ctx: &RingContext) -> Matrix {
        Matrix::from_fn(self.cols, self.rows, |i, j| ctx.sigma(&self[(j, i)]))
    }

    /// σ(ᵗU)·G·U.
    pub fn congruence(ctx: &RingContext, g: &Matrix, u: &Matrix) -> Matrix {
        u.conj_transpose(ctx).mul(ctx, &g.mul(ctx, u))
    }

    /// Block-diagonal sum.
    pub fn direct_sum(&self, other: &Matrix) -> Matrix {
        let (r, c) = (self.rows + other.rows, self.cols + other.cols);
        let mut m = Matrix::zeros(r, c);
        for i in 0..self.rows {
            for j in 0..self.cols {
                m[(i, j)] = self[(i, j)];
            }
        }
        for i in 0..other.rows {
            for j in 0..other.cols {
                m[(self.rows + i, self.cols + j)] = other[(i, j)];
            }
        }
        m
    }

    /// Minimum valuation over all entries.
    pub fn min_val(&self, ctx: &RingContext) -> PiVal {
        self.data.iter().map(|x| ctx.val(x)).min().unwrap_or(PiVal::Exhausted)
    }

    /// Entrywise congruence mod π^e.
    pub fn eq_mod(&self, ctx: &RingContext, other: &Matrix, e: u32) -> bool {
        self.rows == other.rows
            && self.cols == other.cols
            && self.data.iter().zip(&other.data).all(|(a, b)| ctx.eq_mod(a, b, e))
    }

    /// Valuation of the determinant, by full pivoting on the entry of least valuation.
    pub fn det_val(&self, ctx: &RingContext) -> PiVal {
        assert!(self.is_square());
        let n = self.rows;
        let mut m = self.clone();
        let mut total = 0u32;
        let mut lost = 0u32;
        for step in 0..n {
            let mut best: Option<(usize, usize, u32)> = None;
            for i in step..n {
                for j in step..n {
                    if let PiVal::Finite(v) = ctx.val(&m[(i, j)]) {
                        if best.map_or(true, |(_, _, b)| v < b) {
                            best = Some((i, j, v));
                        }
                    }
                }
            }
            let Some((pi, pj, v)) = best else { return PiVal::Exhausted };
            if v + lost >= ctx.pi_precision() {
                return PiVal::Exhausted;
            }
            m.swap_rows(step, pi);
            m.swap_cols(step, pj);
            total += v;
            let p = m[(step, step)];
            // Row elimination with quotient m[i][step]/p, computed by dividing out π^v first.
            let unit = ctx.div_pi_pow(&p, v).expect("pivot valuation");
            let unit_inv = match ctx.inv(&unit) {
                Ok(x) => x,
                Err(_) => return PiVal::Exhausted,
            };
            for i in step + 1..n {
                let e = m[(i, step)];
                if ctx.is_zero(&e) {
                    continue;
                }
                let q = ctx.mul(&ctx.div_pi_pow(&e, v).expect("minimal pivot"), &unit_inv);
                for j in step..n {
                    let t = ctx.mul(&q, &m[(step, j)]);
                    m[(i, j)] = ctx.sub(&m[(i, j)], &t);
                }
            }
            lost += v;
        }
        PiVal::Finite(total)
    }

    pub fn is_unimodular(&self, ctx: &RingContext) -> bool {
        self.det_val(ctx) == PiVal::Finite(0)
    }

    /// Inverse of a matrix with unit determinant.
    pub fn inverse(&self, ctx: &RingContext) -> Result<Matrix> {
        assert!(self.is_square());
        let n = self.rows;
        let mut m = self.clone();
        let mut inv = Matrix::identity(ctx, n);
        for col in 0..n {
            let piv = (col..n).find(|&i| ctx.is_unit(&m[(i, col)])).ok_or(Error::SingularU)?;
            m.swap_rows(col, piv);
            inv.swap_rows(col, piv);
            let s = ctx.inv(&m[(col, col)])?;
            for j in 0..n {
                m[(col, j)] = ctx.mul(&s, &m[(col, j)]);
                inv[(col, j)] = ctx.mul(&s, &inv[(col, j)]);
            }
            for i in 0..n {
                if i == col {
                    continue;
                }
                let c = m[(i, col)];
                if ctx.is_zero(&c) {
                    continue;
                }
                for j in 0..n {
                    let t = ctx.mul(&c, &m[(col, j)]);
                    m[(i, j)] = ctx.sub(&m[(i, j)], &t);
                    let t = ctx.mul(&c, &inv[(col, j)]);
                    inv[(i, j)] = ctx.sub(&inv[(i, j)], &t);
                }
            }
        }
        Ok(inv)
    }

    pub fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    pub fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for i in 0..self.rows {
            self.data.swap(i * self.cols + a, i * self.cols + b);
        }
    }

    /// Uniformly random matrix at working precision.
    pub fn random<R: Rng + ?Sized>(ctx: &RingContext, rows: usize, cols: usize, rng: &mut R) -> Matrix {
        Matrix::from_fn(rows, cols, |_, _| random_elem(ctx, rng))
    }

    /// Random matrix with unit determinant (rejection sampling).
    pub fn random_unit<R: Rng + ?Sized>(ctx: &RingContext, n: usize, rng: &mut R) -> Matrix {
        loop {
            let m = Matrix::random(ctx, n, n, rng);
            if m.is_unimodular(ctx) {
                return m;
            }
        }
    }
}

pub fn random_elem<R: Rng + ?Sized>(ctx: &RingContext, rng: &mut R) -> BElem {
    let g = ctx.galois();
    let r = ctx.residue_degree();
    let a0: Vec<u64> = (0..r).map(|_| rng.gen()).collect();
    let a1: Vec<u64> = (0..r).map(|_| rng.gen()).collect();
    BElem { a0: g.from_coeffs(&a0), a1: g.from_coeffs(&a1) }
}

impl std::ops::Index<(usize, usize)> for Matrix {
    type Output = BElem;
    fn index(&self, (i, j): (usize, usize)) -> &BElem {
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for Matrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut BElem {
        &mut self.data[i * self.cols + j]
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::Case;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn inverse_round_trip() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for case in [Case::One, Case::Two] {
            let ctx = RingContext::new(case, 2, &[1, 1], 16).unwrap();
            for n in 1..5 {
                let u = Matrix::random_unit(&ctx, n, &mut rng);
                let ui = u.inverse(&ctx).unwrap();
                assert_eq!(u.mul(&ctx, &ui), Matrix::identity(&ctx, n));
            }
        }
    }

    #[test]
    fn det_valuation_of_diagonal() {
        let ctx = RingContext::new(Case::Two, 1, &[1], 16).unwrap();
        let d = Matrix::from_rows(vec![
            vec![ctx.pi(), ctx.zero()],
            vec![ctx.zero(), ctx.from_int(4)],
        ])
        .unwrap();
        assert_eq!(d.det_val(&ctx), PiVal::Finite(5));
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let u = Matrix::random_unit(&ctx, 2, &mut rng);
        assert_eq!(d.mul(&ctx, &u).det_val(&ctx), PiVal::Finite(5));
    }
}
