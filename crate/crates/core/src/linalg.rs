//! Dense linear algebra over a [`Scalar`] field: row reduction, null spaces,
//! determinants and incremental subspaces with coordinate recovery.

use crate::scalar::Scalar;

pub type Matrix<T> = Vec<Vec<T>>;

/// Reduced row echelon form. Returns the nonzero rows and their pivot columns.
///
/// For inexact fields pivoting picks the largest modulus and treats entries
/// below `1e-12` times the row scale as zero.
pub fn rref<T: Scalar>(mut rows: Matrix<T>, ncols: usize) -> (Matrix<T>, Vec<usize>) {
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        if r == rows.len() {
            break;
        }
        let pick = if T::EXACT {
            (r..rows.len()).find(|&i| !rows[i][c].is_zero())
        } else {
            let best = (r..rows.len()).max_by(|&i, &j| {
                rows[i][c].abs_approx().partial_cmp(&rows[j][c].abs_approx()).unwrap_or(std::cmp::Ordering::Equal)
            });
            best.filter(|&i| rows[i][c].abs_approx() > 1e-12)
        };
        let Some(p) = pick else { continue };
        rows.swap(r, p);
        let inv = T::one() / rows[r][c].clone();
        for x in rows[r].iter_mut() {
            *x = x.clone() * inv.clone();
        }
        for i in 0..rows.len() {
            if i != r && !rows[i][c].is_zero() {
                let f = rows[i][c].clone();
                for k in 0..ncols {
                    if !rows[r][k].is_zero() {
                        rows[i][k] = rows[i][k].clone() - f.clone() * rows[r][k].clone();
                    }
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    rows.truncate(r);
    (rows, pivots)
}

pub fn rank<T: Scalar>(rows: &Matrix<T>, ncols: usize) -> usize {
    rref(rows.clone(), ncols).1.len()
}

/// Basis of `{x : A x = 0}` read off the reduced echelon form, one vector per
/// free column in increasing order.
pub fn nullspace<T: Scalar>(rows: &Matrix<T>, ncols: usize) -> Matrix<T> {
    let (r, pivots) = rref(rows.clone(), ncols);
    let mut is_pivot = vec![false; ncols];
    for &p in &pivots {
        is_pivot[p] = true;
    }
    (0..ncols)
        .filter(|&c| !is_pivot[c])
        .map(|free| {
            let mut v = vec![T::zero(); ncols];
            v[free] = T::one();
            for (row, &p) in r.iter().zip(&pivots) {
                v[p] = -row[free].clone();
            }
            v
        })
        .collect()
}

pub fn determinant<T: Scalar>(m: &Matrix<T>) -> T {
    let n = m.len();
    let mut a = m.clone();
    let mut det = T::one();
    for c in 0..n {
        let Some(p) = (c..n).find(|&i| !a[i][c].is_zero()) else {
            return T::zero();
        };
        if p != c {
            a.swap(p, c);
            det = -det;
        }
        let piv = a[c][c].clone();
        det = det * piv.clone();
        for i in c + 1..n {
            if !a[i][c].is_zero() {
                let f = a[i][c].clone() / piv.clone();
                for k in c..n {
                    a[i][k] = a[i][k].clone() - f.clone() * a[c][k].clone();
                }
            }
        }
    }
    det
}

pub fn mat_mul<T: Scalar>(a: &Matrix<T>, b: &Matrix<T>) -> Matrix<T> {
    let n = b.first().map_or(0, |r| r.len());
    a.iter()
        .map(|row| {
            (0..n)
                .map(|j| {
                    row.iter()
                        .zip(b)
                        .filter(|(x, _)| !x.is_zero())
                        .fold(T::zero(), |s, (x, brow)| s + x.clone() * brow[j].clone())
                })
                .collect()
        })
        .collect()
}

pub fn identity<T: Scalar>(n: usize) -> Matrix<T> {
    (0..n).map(|i| (0..n).map(|j| if i == j { T::one() } else { T::zero() }).collect()).collect()
}

pub fn transpose<T: Scalar>(a: &Matrix<T>) -> Matrix<T> {
    let n = a.first().map_or(0, |r| r.len());
    (0..n).map(|j| a.iter().map(|row| row[j].clone()).collect()).collect()
}

pub fn is_zero_matrix<T: Scalar>(a: &Matrix<T>) -> bool {
    a.iter().all(|r| r.iter().all(|x| x.is_zero()))
}

pub fn dot<T: Scalar>(u: &[T], v: &[T]) -> T {
    u.iter().zip(v).fold(T::zero(), |s, (a, b)| s + a.clone() * b.clone())
}

/// A growing subspace spanned by inserted vectors, able to express members
/// in terms of the inserted vectors.
#[derive(Clone, Debug)]
pub struct Subspace<T> {
    dim: usize,
    echelon: Vec<(usize, Vec<T>)>,
    // echelon[i] = sum_j transform[i][j] * inserted[j]
    transform: Vec<Vec<T>>,
    count: usize,
}

impl<T: Scalar> Subspace<T> {
    pub fn new(dim: usize) -> Self {
        Subspace { dim, echelon: Vec::new(), transform: Vec::new(), count: 0 }
    }

    pub fn len(&self) -> usize {
        self.count
    }

    pub fn is_empty(&self) -> bool {
        self.count == 0
    }

    fn reduce(&self, v: &[T]) -> (Vec<T>, Vec<T>) {
        let mut r = v.to_vec();
        let mut coeffs = vec![T::zero(); self.count];
        for ((p, row), tr) in self.echelon.iter().zip(&self.transform) {
            if r[*p].is_zero() {
                continue;
            }
            let f = r[*p].clone();
            for (x, y) in r.iter_mut().zip(row) {
                if !y.is_zero() {
                    *x = x.clone() - f.clone() * y.clone();
                }
            }
            for (c, t) in coeffs.iter_mut().zip(tr) {
                if !t.is_zero() {
                    *c = c.clone() + f.clone() * t.clone();
                }
            }
        }
        (r, coeffs)
    }

    /// Inserts `v` if it is independent of the current span.
    pub fn insert(&mut self, v: &[T]) -> bool {
        assert_eq!(v.len(), self.dim);
        let (r, coeffs) = self.reduce(v);
        let Some(p) = r.iter().position(|x| !x.is_zero()) else {
            return false;
        };
        let inv = T::one() / r[p].clone();
        let row: Vec<T> = r.into_iter().map(|x| x * inv.clone()).collect();
        let mut tr: Vec<T> = coeffs.into_iter().map(|c| -(c * inv.clone())).collect();
        tr.push(inv);
        for t in self.transform.iter_mut() {
            t.push(T::zero());
        }
        // keep earlier echelon rows reduced at the new pivot
        for (i, (_, erow)) in self.echelon.iter_mut().enumerate() {
            if !erow[p].is_zero() {
                let f = erow[p].clone();
                for (x, y) in erow.iter_mut().zip(&row) {
                    *x = x.clone() - f.clone() * y.clone();
                }
                for (x, y) in self.transform[i].iter_mut().zip(&tr) {
                    *x = x.clone() - f.clone() * y.clone();
                }
            }
        }
        self.echelon.push((p, row));
        self.transform.push(tr);
        self.count += 1;
        true
    }

    /// Coefficients of `v` in the inserted vectors, or `None` if outside the span.
    pub fn coordinates(&self, v: &[T]) -> Option<Vec<T>> {
        let (r, coeffs) = self.reduce(v);
        r.iter().all(|x| x.is_zero()).then_some(coeffs)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{rat, Rational};

    fn m(rows: &[&[i64]]) -> Matrix<Rational> {
        rows.iter().map(|r| r.iter().map(|&x| rat(x)).collect()).collect()
    }

    #[test]
    fn nullspace_is_annihilated() {
        let a = m(&[&[1, 2, 3, 4], &[2, 4, 6, 8], &[0, 1, 1, 0]]);
        let ns = nullspace(&a, 4);
        assert_eq!(ns.len(), 2);
        for v in &ns {
            for row in &a {
                assert_eq!(dot(row, v), rat(0));
            }
        }
    }

    #[test]
    fn determinant_small() {
        assert_eq!(determinant(&m(&[&[2, 1], &[7, 4]])), rat(1));
        assert_eq!(determinant(&m(&[&[0, 1], &[1, 0]])), rat(-1));
        assert_eq!(determinant(&m(&[&[1, 2], &[2, 4]])), rat(0));
    }

    #[test]
    fn subspace_coordinates() {
        let mut s = Subspace::new(3);
        assert!(s.insert(&[rat(1), rat(1), rat(0)]));
        assert!(s.insert(&[rat(0), rat(1), rat(1)]));
        assert!(!s.insert(&[rat(1), rat(2), rat(1)]));
        let c = s.coordinates(&[rat(2), rat(5), rat(3)]).unwrap();
        assert_eq!(c, vec![rat(2), rat(3)]);
        assert!(s.coordinates(&[rat(1), rat(0), rat(0)]).is_none());
    }
}
