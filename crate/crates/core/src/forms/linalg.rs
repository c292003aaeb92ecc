//! Dense linear algebra over κ. Vectors are rows; subspaces are lists of independent rows.

use crate::ring::{KElem, ResidueField};

pub type KVec = Vec<KElem>;
pub type KMat = Vec<KVec>;

pub fn zero_vec(n: usize) -> KVec {
    vec![KElem::ZERO; n]
}

pub fn unit_vec(n: usize, j: usize) -> KVec {
    let mut v = zero_vec(n);
    v[j] = KElem::ONE;
    v
}

pub fn add(k: &ResidueField, x: &[KElem], y: &[KElem]) -> KVec {
    x.iter().zip(y).map(|(a, b)| k.add(*a, *b)).collect()
}

pub fn scale(k: &ResidueField, c: KElem, x: &[KElem]) -> KVec {
    x.iter().map(|a| k.mul(c, *a)).collect()
}

pub fn dot(k: &ResidueField, x: &[KElem], y: &[KElem]) -> KElem {
    x.iter().zip(y).fold(KElem::ZERO, |acc, (a, b)| k.add(acc, k.mul(*a, *b)))
}

/// x·M·yᵀ.
pub fn bilinear(k: &ResidueField, m: &KMat, x: &[KElem], y: &[KElem]) -> KElem {
    let mut acc = KElem::ZERO;
    for (a, xa) in x.iter().enumerate() {
        if xa.is_zero() {
            continue;
        }
        acc = k.add(acc, k.mul(*xa, dot(k, &m[a], y)));
    }
    acc
}

/// Σ c_j·rows_j.
pub fn combine(k: &ResidueField, rows: &[KVec], c: &[KElem], n: usize) -> KVec {
    let mut out = zero_vec(n);
    for (r, cj) in rows.iter().zip(c) {
        if !cj.is_zero() {
            out = add(k, &out, &scale(k, *cj, r));
        }
    }
    out
}

/// Reduced row echelon form in place; returns the pivot columns.
pub fn rref(k: &ResidueField, m: &mut KMat) -> Vec<usize> {
    let rows = m.len();
    let cols = m.first().map_or(0, |r| r.len());
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !m[i][c].is_zero()) else { continue };
        m.swap(r, p);
        let inv = k.inv(m[r][c]).expect("nonzero pivot");
        m[r] = scale(k, inv, &m[r]);
        for i in 0..rows {
            if i != r && !m[i][c].is_zero() {
                let f = m[i][c];
                let sub = scale(k, f, &m[r]);
                m[i] = add(k, &m[i], &sub);
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

pub fn rank(k: &ResidueField, rows: &[KVec]) -> usize {
    let mut m = rows.to_vec();
    rref(k, &mut m).len()
}

/// Basis of {x : M·xᵀ = 0}, x of length `cols`.
pub fn kernel(k: &ResidueField, m: &KMat, cols: usize) -> KMat {
    let mut a = m.to_vec();
    let pivots = rref(k, &mut a);
    let free: Vec<usize> = (0..cols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&fc| {
            let mut x = unit_vec(cols, fc);
            for (r, &pc) in pivots.iter().enumerate() {
                // char 2: −a = a
                x[pc] = a[r][fc];
            }
            x
        })
        .collect()
}

/// Independent basis of the span of `rows`.
pub fn span_basis(k: &ResidueField, rows: &[KVec]) -> KMat {
    let mut out: KMat = Vec::new();
    for r in rows {
        let mut t = out.clone();
        t.push(r.clone());
        if rank(k, &t) > out.len() {
            out.push(r.clone());
        }
    }
    out
}

/// Vectors of `sup` extending a basis of `sub` (⊆ span sup) to a basis of span(sup ∪ sub).
pub fn complement_in(k: &ResidueField, sub: &[KVec], sup: &[KVec]) -> KMat {
    let mut acc: KMat = span_basis(k, sub);
    let mut out = Vec::new();
    for v in sup {
        let mut t = acc.clone();
        t.push(v.clone());
        if rank(k, &t) > acc.len() {
            acc.push(v.clone());
            out.push(v.clone());
        }
    }
    out
}

pub fn contains(k: &ResidueField, space: &[KVec], v: &[KElem]) -> bool {
    let mut t = space.to_vec();
    let r0 = rank(k, &t);
    t.push(v.to_vec());
    rank(k, &t) == r0
}

/// Some x with M·xᵀ = rhs, if any.
pub fn solve(k: &ResidueField, m: &KMat, rhs: &[KElem]) -> Option<KVec> {
    let cols = m.first().map_or(0, |r| r.len());
    let mut aug: KMat = m.iter().zip(rhs).map(|(r, b)| {
        let mut row = r.clone();
        row.push(*b);
        row
    }).collect();
    let pivots = rref(k, &mut aug);
    if pivots.contains(&cols) {
        return None;
    }
    let mut x = zero_vec(cols);
    for (r, &pc) in pivots.iter().enumerate() {
        x[pc] = aug[r][cols];
    }
    Some(x)
}

/// Gram matrix of `m` on the vectors `basis`: G_st = basis_s·M·basis_tᵀ.
pub fn restrict(k: &ResidueField, m: &KMat, basis: &[KVec]) -> KMat {
    basis.iter().map(|x| basis.iter().map(|y| bilinear(k, m, x, y)).collect()).collect()
}

/// Radical of the form M restricted to span(basis), in ambient coordinates.
pub fn radical_in(k: &ResidueField, m: &KMat, basis: &[KVec], n: usize) -> KMat {
    let g = restrict(k, m, basis);
    kernel(k, &g, basis.len()).iter().map(|c| combine(k, basis, c, n)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn kernel_is_annihilated() {
        let k = ResidueField::new(2);
        let t = KElem(2);
        let m = vec![vec![KElem::ONE, t, KElem::ZERO], vec![t, k.mul(t, t), KElem::ZERO]];
        let ker = kernel(&k, &m, 3);
        assert_eq!(ker.len(), 2);
        for x in &ker {
            for row in &m {
                assert!(dot(&k, row, x).is_zero());
            }
        }
    }

    #[test]
    fn solve_and_complement() {
        let k = ResidueField::new(1);
        let m = vec![vec![KElem::ONE, KElem::ONE], vec![KElem::ZERO, KElem::ONE]];
        let x = solve(&k, &m, &[KElem::ZERO, KElem::ONE]).unwrap();
        assert_eq!(x, vec![KElem::ONE, KElem::ONE]);
        let sub = vec![vec![KElem::ONE, KElem::ONE]];
        let sup = vec![unit_vec(2, 0), unit_vec(2, 1)];
        assert_eq!(complement_in(&k, &sub, &sup), vec![unit_vec(2, 0)]);
    }
}
