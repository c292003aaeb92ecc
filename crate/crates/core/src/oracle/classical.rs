//! Finite classical group orders by exhaustive enumeration over κ, for small dimensions.

use crate::forms::linalg::{self, KMat, KVec};
use crate::forms::QuadForm;
use crate::ring::{KElem, ResidueField};

fn all_matrices(k: &ResidueField, d: usize) -> impl Iterator<Item = KMat> + '_ {
    let f = k.order();
    (0..f.pow((d * d) as u32)).map(move |mut c| {
        (0..d)
            .map(|_| {
                (0..d)
                    .map(|_| {
                        let e = KElem((c % f) as u16);
                        c /= f;
                        e
                    })
                    .collect()
            })
            .collect()
    })
}

fn columns(m: &KMat) -> Vec<KVec> {
    (0..m.len()).map(|j| m.iter().map(|r| r[j]).collect()).collect()
}

fn count_invertible(k: &ResidueField, d: usize, keep: impl Fn(&[KVec]) -> bool) -> u64 {
    all_matrices(k, d).filter(|m| linalg::rank(k, m) == d && keep(&columns(m))).count() as u64
}

/// Number of g ∈ GL_d(κ) with J(gx, gy) = J(x, y) for the standard alternating form J.
pub fn symplectic_group_size(k: &ResidueField, d: usize) -> u64 {
    let mut j = vec![vec![KElem::ZERO; d]; d];
    for a in 0..d / 2 {
        j[2 * a][2 * a + 1] = KElem::ONE;
        j[2 * a + 1][2 * a] = KElem::ONE;
    }
    count_invertible(k, d, |cols| (0..d).all(|a| (0..d).all(|b| linalg::bilinear(k, &j, &cols[a], &cols[b]) == j[a][b])))
}

/// Number of g ∈ GL_d(κ) with q∘g = q.
pub fn orthogonal_group_size(k: &ResidueField, q: &QuadForm) -> u64 {
    let d = q.dim();
    count_invertible(k, d, |cols| {
        (0..d).all(|a| q.eval(k, &cols[a]) == q.diag[a])
            && (0..d).all(|a| (0..d).all(|b| a == b || q.polar_eval(k, &cols[a], &cols[b]) == q.polar[a][b]))
    })
}

/// ⊕ of planes xy (false) or x² + xy + c·y² with abs_trace(c) = 1 (true).
pub fn sum_of_planes(k: &ResidueField, anisotropic: &[bool]) -> QuadForm {
    let c = k.elements().find(|&c| k.abs_trace(c) == 1).expect("κ has trace-one elements");
    let d = 2 * anisotropic.len();
    let mut polar = vec![vec![KElem::ZERO; d]; d];
    let mut diag = vec![KElem::ZERO; d];
    for (a, &an) in anisotropic.iter().enumerate() {
        polar[2 * a][2 * a + 1] = KElem::ONE;
        polar[2 * a + 1][2 * a] = KElem::ONE;
        if an {
            diag[2 * a] = KElem::ONE;
            diag[2 * a + 1] = c;
        }
    }
    QuadForm { diag, polar }
}
