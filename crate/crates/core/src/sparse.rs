//! Sparse matrices over a [`Scalar`] field, with an optional parity tag.
//!
//! Rows are ordered maps so iteration order, and therefore every derived
//! result, is deterministic.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::scalar::{Rational, Scalar};
use crate::superalg::{koszul, Parity};

#[derive(Clone, Debug, PartialEq)]
pub struct SparseMatrix<T> {
    nrows: usize,
    ncols: usize,
    rows: Vec<BTreeMap<usize, T>>,
    /// Declared parity of a homogeneous operator.
    pub parity: Option<Parity>,
}

/// Operators with exact rational entries.
pub type SparseOperator = SparseMatrix<Rational>;

impl<T: Scalar> SparseMatrix<T> {
    pub fn zeros(nrows: usize, ncols: usize) -> Self {
        SparseMatrix { nrows, ncols, rows: vec![BTreeMap::new(); nrows], parity: None }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.rows[i].insert(i, T::one());
        }
        m.parity = Some(Parity::Even);
        m
    }

    pub fn from_triplets(nrows: usize, ncols: usize, entries: impl IntoIterator<Item = (usize, usize, T)>) -> Self {
        let mut m = Self::zeros(nrows, ncols);
        for (r, c, v) in entries {
            m.add_to(r, c, v);
        }
        m
    }

    pub fn with_parity(mut self, p: Parity) -> Self {
        self.parity = Some(p);
        self
    }

    pub fn nrows(&self) -> usize {
        self.nrows
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    pub fn nnz(&self) -> usize {
        self.rows.iter().map(|r| r.len()).sum()
    }

    pub fn get(&self, r: usize, c: usize) -> T {
        self.rows[r].get(&c).cloned().unwrap_or_else(T::zero)
    }

    pub fn row(&self, r: usize) -> &BTreeMap<usize, T> {
        &self.rows[r]
    }

    /// Adds `v` to entry `(r, c)`, dropping it if the sum vanishes.
    pub fn add_to(&mut self, r: usize, c: usize, v: T) {
        if v.is_zero() {
            return;
        }
        let row = &mut self.rows[r];
        match row.remove(&c) {
            Some(old) => {
                let s = old + v;
                if !s.is_zero() {
                    row.insert(c, s);
                }
            }
            None => {
                row.insert(c, v);
            }
        }
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, usize, &T)> {
        self.rows.iter().enumerate().flat_map(|(r, row)| row.iter().map(move |(c, v)| (r, *c, v)))
    }

    pub fn is_zero(&self) -> bool {
        self.rows.iter().all(|r| r.is_empty())
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.ncols, self.nrows);
        for (r, c, v) in self.iter() {
            t.rows[c].insert(r, v.clone());
        }
        t.parity = self.parity;
        t
    }

    pub fn scale(&self, s: &T) -> Self {
        let mut out = Self::zeros(self.nrows, self.ncols);
        if !s.is_zero() {
            for (r, c, v) in self.iter() {
                out.add_to(r, c, v.clone() * s.clone());
            }
        }
        out.parity = self.parity;
        out
    }

    pub fn add(&self, o: &Self) -> Result<Self> {
        self.check_same_shape(o)?;
        let mut out = self.clone();
        for (r, c, v) in o.iter() {
            out.add_to(r, c, v.clone());
        }
        out.parity = if self.parity == o.parity { self.parity } else { None };
        Ok(out)
    }

    pub fn sub(&self, o: &Self) -> Result<Self> {
        self.add(&o.scale(&-T::one()))
    }

    pub fn mul(&self, o: &Self) -> Result<Self> {
        if self.ncols != o.nrows {
            return Err(Error::DimensionMismatch(format!(
                "cannot multiply {}x{} by {}x{}",
                self.nrows, self.ncols, o.nrows, o.ncols
            )));
        }
        let mut out = Self::zeros(self.nrows, o.ncols);
        for (r, row) in self.rows.iter().enumerate() {
            for (k, a) in row {
                for (c, b) in &o.rows[*k] {
                    out.add_to(r, *c, a.clone() * b.clone());
                }
            }
        }
        out.parity = match (self.parity, o.parity) {
            (Some(p), Some(q)) => Some(p + q),
            _ => None,
        };
        Ok(out)
    }

    /// Ordinary commutator `ab - ba`.
    pub fn commutator(&self, o: &Self) -> Result<Self> {
        self.mul(o)?.sub(&o.mul(self)?)
    }

    /// Supercommutator `ab - (-1)^{|a||b|} ba`; both parities must be declared.
    pub fn supercommutator(&self, o: &Self) -> Result<Self> {
        let (p, q) = match (self.parity, o.parity) {
            (Some(p), Some(q)) => (p, q),
            _ => return Err(Error::MissingParity),
        };
        let ab = self.mul(o)?;
        let ba = o.mul(self)?;
        let mut out = ab.sub(&ba.scale(&T::from_i64(koszul(p, q))))?;
        out.parity = Some(p + q);
        Ok(out)
    }

    pub fn apply(&self, v: &[T]) -> Result<Vec<T>> {
        if v.len() != self.ncols {
            return Err(Error::DimensionMismatch(format!(
                "vector of length {} for {} columns",
                v.len(),
                self.ncols
            )));
        }
        Ok(self
            .rows
            .iter()
            .map(|row| row.iter().fold(T::zero(), |s, (c, a)| s + a.clone() * v[*c].clone()))
            .collect())
    }

    pub fn map<U: Scalar>(&self, f: impl Fn(&T) -> U) -> SparseMatrix<U> {
        let mut out = SparseMatrix::zeros(self.nrows, self.ncols);
        for (r, c, v) in self.iter() {
            out.add_to(r, c, f(v));
        }
        out.parity = self.parity;
        out
    }

    pub fn to_dense(&self) -> Vec<Vec<T>> {
        let mut d = vec![vec![T::zero(); self.ncols]; self.nrows];
        for (r, c, v) in self.iter() {
            d[r][c] = v.clone();
        }
        d
    }

    pub fn from_dense(d: &[Vec<T>]) -> Self {
        let ncols = d.first().map_or(0, |r| r.len());
        Self::from_triplets(
            d.len(),
            ncols,
            d.iter().enumerate().flat_map(|(r, row)| row.iter().enumerate().map(move |(c, v)| (r, c, v.clone()))),
        )
    }

    /// Parity of the operator as read off its support, if homogeneous.
    pub fn infer_parity(&self, row_parities: &[Parity], col_parities: &[Parity]) -> Option<Parity> {
        let mut found = None;
        for (r, c, _) in self.iter() {
            let p = row_parities[r] + col_parities[c];
            match found {
                None => found = Some(p),
                Some(q) if q != p => return None,
                _ => {}
            }
        }
        Some(found.unwrap_or(Parity::Even))
    }

    /// Position of the first nonzero entry.
    pub fn first_nonzero(&self) -> Option<(usize, usize)> {
        self.rows.iter().enumerate().find_map(|(r, row)| row.keys().next().map(|c| (r, *c)))
    }

    /// First entry where `self` and `o` differ, if any.
    pub fn first_difference(&self, o: &Self) -> Option<(usize, usize)> {
        self.sub(o).ok()?.first_nonzero()
    }

    fn check_same_shape(&self, o: &Self) -> Result<()> {
        if self.nrows != o.nrows || self.ncols != o.ncols {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} vs {}x{}",
                self.nrows, self.ncols, o.nrows, o.ncols
            )));
        }
        Ok(())
    }
}
