//! Floating-point complex dense linear algebra on top of `nalgebra`.

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::scalar::Complex64;

pub type CMatrix = DMatrix<Complex64>;

/// Eigenvalues from a complex Schur decomposition.
pub fn eigenvalues(m: &CMatrix) -> Vec<Complex64> {
    if m.nrows() == 0 {
        return Vec::new();
    }
    let schur = nalgebra::linalg::Schur::new(m.clone());
    let (_, t) = schur.unpack();
    (0..t.nrows()).map(|i| t[(i, i)]).collect()
}

/// Unit vector minimizing `|(m - lambda) x|`, with the achieved residual.
pub fn null_vector(m: &CMatrix, lambda: Complex64) -> (DVector<Complex64>, f64) {
    let n = m.nrows();
    let shifted = m - CMatrix::identity(n, n) * lambda;
    let svd = nalgebra::linalg::SVD::new(shifted, false, true);
    let v_t = svd.v_t.expect("requested right singular vectors");
    let (k, s) = svd
        .singular_values
        .iter()
        .enumerate()
        .min_by(|a, b| a.1.partial_cmp(b.1).unwrap_or(std::cmp::Ordering::Equal))
        .map(|(k, s)| (k, *s))
        .expect("nonempty matrix");
    let v = v_t.row(k).transpose().map(|z| z.conj());
    (v, s)
}

/// Orthonormal columns spanning the `k` right singular directions of
/// `m - lambda` with the smallest singular values.
pub fn near_null_space(m: &CMatrix, lambda: Complex64, k: usize) -> CMatrix {
    let n = m.nrows();
    let shifted = m - CMatrix::identity(n, n) * lambda;
    let svd = nalgebra::linalg::SVD::new(shifted, false, true);
    let v_t = svd.v_t.expect("requested right singular vectors");
    let mut order: Vec<usize> = (0..svd.singular_values.len()).collect();
    order.sort_by(|&a, &b| {
        svd.singular_values[a].partial_cmp(&svd.singular_values[b]).unwrap_or(std::cmp::Ordering::Equal)
    });
    CMatrix::from_fn(n, k, |i, j| v_t[(order[j], i)].conj())
}

/// Ratio of extreme singular values.
pub fn condition_number(m: &CMatrix) -> f64 {
    let sv = m.clone().singular_values();
    let max = sv.iter().cloned().fold(0.0, f64::max);
    let min = sv.iter().cloned().fold(f64::INFINITY, f64::min);
    if min == 0.0 {
        f64::INFINITY
    } else {
        max / min
    }
}

/// Solves `m x = b`, refusing matrices with condition number above `max_cond`.
pub fn solve(m: &CMatrix, b: &DVector<Complex64>, max_cond: f64) -> Result<DVector<Complex64>> {
    let cond = condition_number(m);
    if !cond.is_finite() || cond > max_cond {
        return Err(Error::SingularJacobian(cond));
    }
    m.clone().lu().solve(b).ok_or(Error::SingularJacobian(cond))
}

/// Minimum-norm least-squares solution, dropping singular values below
/// `rel_cut` times the largest.
pub fn min_norm_solve(m: &CMatrix, b: &DVector<Complex64>, rel_cut: f64) -> Result<DVector<Complex64>> {
    let svd = m.clone().svd(true, true);
    let max = svd.singular_values.iter().cloned().fold(0.0, f64::max);
    if max == 0.0 || !max.is_finite() {
        return Err(Error::SingularJacobian(f64::INFINITY));
    }
    svd.solve(b, rel_cut * max).map_err(|e| Error::Internal(e.to_string()))
}

pub fn from_rows(rows: &[Vec<Complex64>]) -> CMatrix {
    let n = rows.len();
    let k = rows.first().map_or(0, |r| r.len());
    DMatrix::from_fn(n, k, |i, j| rows[i][j])
}

pub fn hermitian_norm(v: &[Complex64]) -> f64 {
    v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

/// Determinant of the Hermitian Gram matrix of the unit-normalized vectors.
pub fn normalized_gram_determinant(vectors: &[Vec<Complex64>]) -> f64 {
    let k = vectors.len();
    if k == 0 {
        return 1.0;
    }
    let units: Vec<Vec<Complex64>> = vectors
        .iter()
        .map(|v| {
            let n = hermitian_norm(v);
            v.iter().map(|z| z / n).collect()
        })
        .collect();
    let g = DMatrix::from_fn(k, k, |i, j| {
        units[i].iter().zip(&units[j]).map(|(a, b)| a.conj() * b).sum::<Complex64>()
    });
    g.determinant().re
}
