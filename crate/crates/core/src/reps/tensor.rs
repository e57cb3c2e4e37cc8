//! Tensor products of modules with the Koszul sign rule
//! `(a ⊗ b)(v ⊗ w) = (-1)^{|b||v|} a v ⊗ b w`.
//!
//! Basis vectors are multi-indices in mixed radix, first factor most
//! significant.

use std::collections::BTreeMap;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::linalg::{nullspace, Matrix};
use crate::reps::module::RepModule;
use crate::scalar::{Rational, Scalar};
use crate::sparse::SparseOperator;
use crate::superalg::{koszul, Parity, ParitySequence, Weight};

#[derive(Clone, Debug)]
pub struct TensorProduct {
    ps: ParitySequence,
    factors: Vec<Arc<RepModule>>,
    strides: Vec<usize>,
    dim: usize,
}

impl TensorProduct {
    pub fn new(factors: Vec<Arc<RepModule>>) -> Result<Self> {
        let ps = factors
            .first()
            .ok_or_else(|| Error::DimensionMismatch("empty tensor product".into()))?
            .parity_sequence()
            .clone();
        if factors.iter().any(|f| f.parity_sequence() != &ps) {
            return Err(Error::DimensionMismatch("factors over different parity sequences".into()));
        }
        let mut strides = vec![1; factors.len()];
        let mut dim: usize = 1;
        for k in (0..factors.len()).rev() {
            strides[k] = dim;
            dim = dim
                .checked_mul(factors[k].dim())
                .ok_or_else(|| Error::TooLarge("tensor product dimension overflows".into()))?;
        }
        Ok(TensorProduct { ps, factors, strides, dim })
    }

    pub fn power(module: Arc<RepModule>, n: usize) -> Result<Self> {
        Self::new(vec![module; n])
    }

    /// `(C^{m|n})^{⊗n}`.
    pub fn defining_power(ps: &ParitySequence, n: usize) -> Result<Self> {
        Self::power(Arc::new(RepModule::defining(ps)?), n)
    }

    pub fn parity_sequence(&self) -> &ParitySequence {
        &self.ps
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn num_factors(&self) -> usize {
        self.factors.len()
    }

    pub fn factor(&self, k: usize) -> &Arc<RepModule> {
        &self.factors[k]
    }

    pub fn digit(&self, idx: usize, k: usize) -> usize {
        (idx / self.strides[k]) % self.factors[k].dim()
    }

    pub fn multi_index(&self, idx: usize) -> Vec<usize> {
        (0..self.factors.len()).map(|k| self.digit(idx, k)).collect()
    }

    pub fn index_of(&self, multi: &[usize]) -> usize {
        multi.iter().zip(&self.strides).map(|(d, s)| d * s).sum()
    }

    pub fn parity(&self, idx: usize) -> Parity {
        (0..self.factors.len()).fold(Parity::Even, |p, k| p + self.factors[k].basis_parities()[self.digit(idx, k)])
    }

    pub fn weight(&self, idx: usize) -> Weight {
        (0..self.factors.len()).fold(Weight::zero(self.ps.len()), |w, k| {
            &w + &self.factors[k].basis_weights()[self.digit(idx, k)]
        })
    }

    /// Parity of the basis vectors of factors before `k` in the word `idx`.
    fn prefix_parity(&self, idx: usize, k: usize) -> Parity {
        (0..k).fold(Parity::Even, |p, j| p + self.factors[j].basis_parities()[self.digit(idx, j)])
    }

    /// `1 ⊗ .. ⊗ X ⊗ .. ⊗ 1` with `X` in position `k`; `X` must carry its parity.
    pub fn site_operator(&self, k: usize, x: &SparseOperator) -> Result<SparseOperator> {
        let p = x.parity.ok_or(Error::MissingParity)?;
        if k >= self.factors.len() {
            return Err(Error::Index(format!("site {k} of {}", self.factors.len())));
        }
        let d = self.factors[k].dim();
        if x.nrows() != d || x.ncols() != d {
            return Err(Error::DimensionMismatch(format!("operator is {}x{}, site has dimension {d}", x.nrows(), x.ncols())));
        }
        let cols = columns(x);
        let mut out = SparseOperator::zeros(self.dim, self.dim);
        for idx in 0..self.dim {
            let c = self.digit(idx, k);
            let sign = koszul(p, self.prefix_parity(idx, k));
            for (r, v) in &cols[c] {
                let target = idx + r * self.strides[k] - c * self.strides[k];
                out.add_to(target, idx, v.clone() * Rational::from_integer(sign.into()));
            }
        }
        Ok(out.with_parity(p))
    }

    /// Coproduct of `E_ab`: the sum of its site operators.
    pub fn total_generator(&self, a: usize, b: usize) -> Result<SparseOperator> {
        let mut out = SparseOperator::zeros(self.dim, self.dim);
        for k in 0..self.factors.len() {
            out = out.add(&self.site_operator(k, self.factors[k].generator(a, b))?)?;
        }
        Ok(out.with_parity(self.ps.generator_parity(a, b)))
    }

    /// Applies the site operator `E_ab^{(k)}` to a vector over any field.
    pub fn apply_site<T: Scalar>(&self, k: usize, a: usize, b: usize, v: &[T]) -> Vec<T> {
        let x = self.factors[k].generator(a, b);
        let p = self.ps.generator_parity(a, b);
        let cols = columns(x);
        let mut out = vec![T::zero(); self.dim];
        for (idx, val) in v.iter().enumerate() {
            if val.is_zero() {
                continue;
            }
            let c = self.digit(idx, k);
            if cols[c].is_empty() {
                continue;
            }
            let sign = T::from_i64(koszul(p, self.prefix_parity(idx, k)));
            for (r, coeff) in &cols[c] {
                let target = idx + r * self.strides[k] - c * self.strides[k];
                out[target] = out[target].clone() + sign.clone() * T::from_rational(coeff) * val.clone();
            }
        }
        out
    }

    /// Applies the coproduct of `E_ab`.
    pub fn apply_total<T: Scalar>(&self, a: usize, b: usize, v: &[T]) -> Vec<T> {
        let mut out = vec![T::zero(); self.dim];
        for k in 0..self.factors.len() {
            for (o, x) in out.iter_mut().zip(self.apply_site(k, a, b, v)) {
                *o = o.clone() + x;
            }
        }
        out
    }

    /// Basis indices grouped by weight.
    pub fn weight_spaces(&self) -> BTreeMap<Weight, Vec<usize>> {
        let mut out: BTreeMap<Weight, Vec<usize>> = BTreeMap::new();
        for idx in 0..self.dim {
            out.entry(self.weight(idx)).or_default().push(idx);
        }
        out
    }

    pub fn weight_space(&self, weight: &Weight) -> Vec<usize> {
        (0..self.dim).filter(|&i| &self.weight(i) == weight).collect()
    }

    /// Basis of the vectors of the given weight killed by every `E_a`, as
    /// full-length vectors, from the reduced echelon form.
    pub fn singular_vectors(&self, weight: &Weight) -> Result<Vec<Vec<Rational>>> {
        let idxs = self.weight_space(weight);
        self.singular_in(&idxs)
    }

    pub(crate) fn singular_in(&self, idxs: &[usize]) -> Result<Vec<Vec<Rational>>> {
        if idxs.is_empty() {
            return Ok(Vec::new());
        }
        let mut rows: BTreeMap<(usize, usize), Vec<Rational>> = BTreeMap::new();
        for a in 0..self.ps.rank() {
            let cols: Vec<_> = self.factors.iter().map(|f| columns(f.generator(a, a + 1))).collect();
            let p = self.ps.generator_parity(a, a + 1);
            for (j, &idx) in idxs.iter().enumerate() {
                for (t, v) in self.image_of_basis(&cols, p, idx) {
                    let row = rows.entry((a, t)).or_insert_with(|| vec![Rational::from_integer(0.into()); idxs.len()]);
                    row[j] += v;
                }
            }
        }
        let mat: Matrix<Rational> = rows.into_values().collect();
        let ns = if mat.is_empty() { crate::linalg::identity(idxs.len()) } else { nullspace(&mat, idxs.len()) };
        Ok(ns
            .into_iter()
            .map(|c| {
                let mut v = vec![Rational::from_integer(0.into()); self.dim];
                for (x, &idx) in c.into_iter().zip(idxs) {
                    v[idx] = x;
                }
                v
            })
            .collect())
    }

    /// Image of a basis vector under a coproduct given by per-site columns.
    fn image_of_basis(&self, cols: &[Vec<Vec<(usize, Rational)>>], p: Parity, idx: usize) -> Vec<(usize, Rational)> {
        let mut out = Vec::new();
        let mut prefix = Parity::Even;
        for k in 0..self.factors.len() {
            let c = self.digit(idx, k);
            let sign = Rational::from_integer(koszul(p, prefix).into());
            for (r, v) in &cols[k][c] {
                out.push((idx + r * self.strides[k] - c * self.strides[k], v * &sign));
            }
            prefix = prefix + self.factors[k].basis_parities()[c];
        }
        out
    }

    /// Kronecker product of site vectors (no signs).
    pub fn tensor_vectors<T: Scalar>(&self, parts: &[Vec<T>]) -> Vec<T> {
        let mut out = vec![T::one()];
        for p in parts {
            let mut next = Vec::with_capacity(out.len() * p.len());
            for x in &out {
                for y in p {
                    next.push(x.clone() * y.clone());
                }
            }
            out = next;
        }
        out
    }

    /// `(⊗_k G_k) v` for the site Shapovalov forms.
    pub fn apply_gram<T: Scalar>(&self, v: &[T]) -> Vec<T> {
        let mut cur = v.to_vec();
        for k in 0..self.factors.len() {
            let g = self.factors[k].gram();
            if is_identity(g) {
                continue;
            }
            let mut next = vec![T::zero(); self.dim];
            for (idx, val) in cur.iter().enumerate() {
                if val.is_zero() {
                    continue;
                }
                let c = self.digit(idx, k);
                for (r, row) in g.iter().enumerate() {
                    if !row[c].is_zero() {
                        let t = idx + r * self.strides[k] - c * self.strides[k];
                        next[t] = next[t].clone() + T::from_rational(&row[c]) * val.clone();
                    }
                }
            }
            cur = next;
        }
        cur
    }

    /// Tensor Shapovalov form `<u, v>` (bilinear).
    pub fn shapovalov<T: Scalar>(&self, u: &[T], v: &[T]) -> T {
        crate::linalg::dot(u, &self.apply_gram(v))
    }

    /// Gram matrix of the tensor Shapovalov form on a list of vectors.
    pub fn shapovalov_gram<T: Scalar>(&self, vs: &[Vec<T>]) -> Matrix<T> {
        let gv: Vec<Vec<T>> = vs.iter().map(|v| self.apply_gram(v)).collect();
        vs.iter().map(|u| gv.iter().map(|w| crate::linalg::dot(u, w)).collect()).collect()
    }

    /// The full tensor Gram matrix as a sparse operator.
    pub fn gram_operator(&self) -> SparseOperator {
        let mut out = SparseOperator::zeros(self.dim, self.dim);
        for idx in 0..self.dim {
            let mut unit = vec![Rational::from_integer(0.into()); self.dim];
            unit[idx] = Rational::from_integer(1.into());
            for (r, v) in self.apply_gram(&unit).into_iter().enumerate() {
                out.add_to(r, idx, v);
            }
        }
        out.with_parity(Parity::Even)
    }
}

fn columns(x: &SparseOperator) -> Vec<Vec<(usize, Rational)>> {
    let mut cols = vec![Vec::new(); x.ncols()];
    for (r, c, v) in x.iter() {
        cols[c].push((r, v.clone()));
    }
    cols
}

fn is_identity(g: &Matrix<Rational>) -> bool {
    g.iter().enumerate().all(|(i, row)| {
        row.iter().enumerate().all(|(j, x)| if i == j { x == &Rational::from_integer(1.into()) } else { x.is_zero() })
    })
}
