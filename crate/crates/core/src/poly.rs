//! Univariate polynomials over a [`Scalar`] field.

use crate::linalg::{identity, mat_mul, Matrix};
use crate::scalar::{Complex64, Scalar};

/// Coefficients from the constant term upward, without trailing zeros.
#[derive(Clone, Debug, PartialEq)]
pub struct Poly<T>(Vec<T>);

impl<T: Scalar> Poly<T> {
    pub fn new(mut coeffs: Vec<T>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Poly(coeffs)
    }

    pub fn zero() -> Self {
        Poly(Vec::new())
    }

    pub fn constant(c: T) -> Self {
        Self::new(vec![c])
    }

    /// `x - r`.
    pub fn linear_root(r: T) -> Self {
        Self::new(vec![-r, T::one()])
    }

    pub fn from_roots(roots: &[T]) -> Self {
        roots.iter().fold(Self::constant(T::one()), |p, r| p.mul(&Self::linear_root(r.clone())))
    }

    pub fn coeffs(&self) -> &[T] {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    /// Degree, with `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.0.len().checked_sub(1)
    }

    pub fn leading(&self) -> T {
        self.0.last().cloned().unwrap_or_else(T::zero)
    }

    pub fn eval(&self, x: &T) -> T {
        self.0.iter().rev().fold(T::zero(), |acc, c| acc * x.clone() + c.clone())
    }

    pub fn derivative(&self) -> Self {
        Self::new(self.0.iter().enumerate().skip(1).map(|(k, c)| c.clone() * T::from_i64(k as i64)).collect())
    }

    pub fn add(&self, o: &Self) -> Self {
        let n = self.0.len().max(o.0.len());
        Self::new(
            (0..n)
                .map(|i| {
                    let a = self.0.get(i).cloned().unwrap_or_else(T::zero);
                    let b = o.0.get(i).cloned().unwrap_or_else(T::zero);
                    a + b
                })
                .collect(),
        )
    }

    pub fn scale(&self, s: &T) -> Self {
        Self::new(self.0.iter().map(|c| c.clone() * s.clone()).collect())
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.scale(&-T::one()))
    }

    pub fn mul(&self, o: &Self) -> Self {
        if self.is_zero() || o.is_zero() {
            return Self::zero();
        }
        let mut out = vec![T::zero(); self.0.len() + o.0.len() - 1];
        for (i, a) in self.0.iter().enumerate() {
            for (j, b) in o.0.iter().enumerate() {
                out[i + j] = out[i + j].clone() + a.clone() * b.clone();
            }
        }
        Self::new(out)
    }

    /// Multiplication by `x^k`.
    pub fn shift(&self, k: usize) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        let mut v = vec![T::zero(); k];
        v.extend(self.0.iter().cloned());
        Self::new(v)
    }

    /// Quotient and remainder; panics on division by zero.
    pub fn divrem(&self, d: &Self) -> (Self, Self) {
        let dd = d.degree().expect("division by the zero polynomial");
        let lead = d.leading();
        let mut rem = self.0.clone();
        let mut quo = vec![T::zero(); self.0.len().saturating_sub(dd)];
        while rem.len() > dd {
            let k = rem.len() - 1 - dd;
            let f = rem.last().cloned().unwrap() / lead.clone();
            for (i, c) in d.0.iter().enumerate() {
                rem[k + i] = rem[k + i].clone() - f.clone() * c.clone();
            }
            quo[k] = f;
            rem.pop();
            while rem.last().is_some_and(|c| c.is_zero()) && rem.len() > dd {
                rem.pop();
            }
        }
        (Self::new(quo), Self::new(rem))
    }

    pub fn monic(&self) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        self.scale(&(T::one() / self.leading()))
    }

    /// Monic greatest common divisor.
    pub fn gcd(&self, o: &Self) -> Self {
        let (mut a, mut b) = (self.clone(), o.clone());
        while !b.is_zero() {
            let r = a.divrem(&b).1;
            a = b;
            b = r;
        }
        a.monic()
    }

    /// `self` divides `o` exactly.
    pub fn divides(&self, o: &Self) -> bool {
        o.divrem(self).1.is_zero()
    }

    /// Product of the distinct irreducible factors.
    pub fn squarefree_part(&self) -> Self {
        let g = self.gcd(&self.derivative());
        self.divrem(&g).0.monic()
    }

    /// Evaluation at a square matrix.
    pub fn eval_matrix(&self, a: &Matrix<T>) -> Matrix<T> {
        let n = a.len();
        let mut acc: Matrix<T> = vec![vec![T::zero(); n]; n];
        for c in self.0.iter().rev() {
            acc = mat_mul(&acc, a);
            for (i, row) in acc.iter_mut().enumerate() {
                row[i] = row[i].clone() + c.clone();
            }
        }
        acc
    }
}

/// Characteristic polynomial `det(x I - A)` by the Faddeev-LeVerrier recursion.
pub fn characteristic_polynomial<T: Scalar>(a: &Matrix<T>) -> Poly<T> {
    let n = a.len();
    let mut coeffs = vec![T::zero(); n + 1];
    coeffs[n] = T::one();
    let mut m: Matrix<T> = vec![vec![T::zero(); n]; n];
    let id = identity::<T>(n);
    for k in 1..=n {
        // M_k = A M_{k-1} + c_{n-k+1} I
        let am = mat_mul(a, &m);
        m = am
            .iter()
            .zip(&id)
            .map(|(r, ir)| r.iter().zip(ir).map(|(x, e)| x.clone() + e.clone() * coeffs[n - k + 1].clone()).collect())
            .collect();
        let amk = mat_mul(a, &m);
        let tr = (0..n).fold(T::zero(), |s, i| s + amk[i][i].clone());
        coeffs[n - k] = -(tr / T::from_i64(k as i64));
    }
    Poly::new(coeffs)
}

/// Numerical roots of a polynomial with complex coefficients, from the
/// companion matrix followed by Newton polishing.
pub fn numeric_roots(p: &Poly<Complex64>) -> Vec<Complex64> {
    let Some(deg) = p.degree() else { return Vec::new() };
    if deg == 0 {
        return Vec::new();
    }
    let lead = p.leading();
    let c: Vec<Complex64> = p.coeffs().iter().map(|x| x / lead).collect();
    let mut comp = nalgebra::DMatrix::<Complex64>::zeros(deg, deg);
    for i in 1..deg {
        comp[(i, i - 1)] = Complex64::new(1.0, 0.0);
    }
    for i in 0..deg {
        comp[(i, deg - 1)] = -c[i];
    }
    let mut roots = crate::numeric::eigenvalues(&comp);
    let dp = p.derivative();
    for r in roots.iter_mut() {
        for _ in 0..8 {
            let d = dp.eval(r);
            if d.norm() == 0.0 {
                break;
            }
            let step = p.eval(r) / d;
            *r -= step;
            if step.norm() <= 1e-16 * r.norm().max(1.0) {
                break;
            }
        }
    }
    roots
}
