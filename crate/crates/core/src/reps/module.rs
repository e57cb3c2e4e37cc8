//! Finite-dimensional gl(m|n)-modules given by explicit generator matrices.

use std::collections::BTreeMap;
use std::sync::Arc;

use num::traits::{One, Zero};

use crate::error::{Error, Result};
use crate::linalg::{dot, nullspace, Matrix, Subspace};
use crate::reps::hook::{hook_to_weight, HookPartition};
use crate::reps::tensor::TensorProduct;
use crate::scalar::{format_rational, rat, Rational};
use crate::sparse::SparseOperator;
use crate::superalg::{koszul, Parity, ParitySequence, Weight};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ModuleKind {
    Defining,
    Hook(HookPartition),
    Gl11 { r: Rational, s: Rational },
    Dual(Box<ModuleKind>),
}

/// An irreducible highest-weight module with exact generator matrices.
///
/// The grading is normalized so that the highest-weight vector is even.
#[derive(Clone, Debug)]
pub struct RepModule {
    ps: ParitySequence,
    dim: usize,
    gens: Vec<Vec<SparseOperator>>,
    basis_parities: Vec<Parity>,
    basis_weights: Vec<Weight>,
    hw_vector: Vec<Rational>,
    hw_weight: Weight,
    gram: Matrix<Rational>,
    kind: ModuleKind,
    polynomial: bool,
}

impl RepModule {
    /// Builds a module from the Chevalley generators `E_a = E_{a,a+1}`,
    /// `F_a = E_{a+1,a}` and the diagonal `E_aa`.
    pub fn from_simple_generators(
        ps: &ParitySequence,
        e: Vec<SparseOperator>,
        f: Vec<SparseOperator>,
        d: Vec<SparseOperator>,
        basis_parities: Vec<Parity>,
        kind: ModuleKind,
        polynomial: bool,
    ) -> Result<Self> {
        let k = ps.len();
        let dim = basis_parities.len();
        if e.len() != k - 1 || f.len() != k - 1 || d.len() != k {
            return Err(Error::DimensionMismatch("wrong number of generators".into()));
        }
        if e.iter().chain(&f).chain(&d).any(|x| x.nrows() != dim || x.ncols() != dim) {
            return Err(Error::DimensionMismatch(format!("generators must be {dim}x{dim}")));
        }
        let mut gens: Vec<Vec<SparseOperator>> = vec![vec![SparseOperator::zeros(dim, dim); k]; k];
        for (a, x) in d.into_iter().enumerate() {
            gens[a][a] = x.with_parity(Parity::Even);
        }
        for (a, (x, y)) in e.into_iter().zip(f).enumerate() {
            let p = ps.simple_root_parity(a);
            gens[a][a + 1] = x.with_parity(p);
            gens[a + 1][a] = y.with_parity(p);
        }
        for gap in 2..k {
            for a in 0..k - gap {
                let b = a + gap;
                gens[a][b] = gens[a][b - 1].supercommutator(&gens[b - 1][b])?;
                gens[b][a] = gens[b][a + 1].supercommutator(&gens[a + 1][a])?;
            }
        }
        for a in 0..k {
            for b in 0..k {
                let want = ps.generator_parity(a, b);
                if !gens[a][b].is_zero() && gens[a][b].infer_parity(&basis_parities, &basis_parities) != Some(want) {
                    return Err(Error::Inhomogeneous(format!("E_{a}{b} does not have parity {want:?}")));
                }
            }
        }
        let mut basis_weights = vec![Weight::zero(k); dim];
        for (a, row) in gens.iter().enumerate() {
            let h = &row[a];
            for (r, c, v) in h.iter() {
                if r != c {
                    return Err(Error::Internal(format!("E_{a}{a} is not diagonal")));
                }
                basis_weights[r].0[a] = v.clone();
            }
        }
        // joint kernel of the raising operators
        let mut rows: Matrix<Rational> = Vec::new();
        for a in 0..k - 1 {
            rows.extend(gens[a][a + 1].to_dense());
        }
        let kernel = if rows.is_empty() { crate::linalg::identity(dim) } else { nullspace(&rows, dim) };
        let singular: Vec<Vec<Rational>> = kernel
            .into_iter()
            .flat_map(|v| split_by_weight(&v, &basis_weights))
            .collect();
        let mut lines = Subspace::new(dim);
        for v in &singular {
            lines.insert(v);
        }
        if lines.len() != 1 {
            return Err(Error::Internal(format!("module has {} singular lines, expected 1", lines.len())));
        }
        let hw_vector = singular.into_iter().next().unwrap();
        let support = hw_vector.iter().position(|x| !x.is_zero()).unwrap();
        let hw_weight = basis_weights[support].clone();
        let mut basis_parities = basis_parities;
        if basis_parities[support].is_odd() {
            for p in basis_parities.iter_mut() {
                *p = p.flip();
            }
        }
        let mut module = RepModule {
            ps: ps.clone(),
            dim,
            gens,
            basis_parities,
            basis_weights,
            hw_vector,
            hw_weight,
            gram: Vec::new(),
            kind,
            polynomial,
        };
        module.gram = module.solve_shapovalov()?;
        Ok(module)
    }

    /// The defining module C^{m|n} with its standard basis.
    pub fn defining(ps: &ParitySequence) -> Result<Self> {
        let k = ps.len();
        let unit = |r: usize, c: usize| SparseOperator::from_triplets(k, k, [(r, c, rat(1))]);
        Self::from_simple_generators(
            ps,
            (0..k - 1).map(|a| unit(a, a + 1)).collect(),
            (0..k - 1).map(|a| unit(a + 1, a)).collect(),
            (0..k).map(|a| unit(a, a)).collect(),
            ps.bits().to_vec(),
            ModuleKind::Defining,
            true,
        )
    }

    /// The gl(1|1)-module with basis `(v, F v)` and highest weight `(r, s)`.
    /// `r + s = 0` gives the trivial module when `r = 0` and is rejected otherwise.
    pub fn gl11(r: Rational, s: Rational) -> Result<Self> {
        let ps = ParitySequence::parse("01")?;
        let h = &r + &s;
        if h.is_zero() {
            if r.is_zero() {
                return Self::one_dimensional(&ps, Weight(vec![r.clone(), s.clone()]), ModuleKind::Gl11 { r, s });
            }
            return Err(Error::OneDimensionalNotPolynomial(format_rational(&r), format_rational(&s)));
        }
        let polynomial = r.is_integer() && s.is_integer() && r >= Rational::one() && s >= Rational::zero();
        let e = SparseOperator::from_triplets(2, 2, [(0, 1, h)]);
        let f = SparseOperator::from_triplets(2, 2, [(1, 0, rat(1))]);
        let d1 = SparseOperator::from_triplets(2, 2, [(0, 0, r.clone()), (1, 1, &r - rat(1))]);
        let d2 = SparseOperator::from_triplets(2, 2, [(0, 0, s.clone()), (1, 1, &s + rat(1))]);
        Self::from_simple_generators(
            &ps,
            vec![e],
            vec![f],
            vec![d1, d2],
            vec![Parity::Even, Parity::Odd],
            ModuleKind::Gl11 { r, s },
            polynomial,
        )
    }

    /// The one-dimensional gl(1|1)-module `L(r, -r)`, flagged non-polynomial
    /// for `r != 0`.
    pub fn gl11_one_dimensional(r: Rational) -> Result<Self> {
        let ps = ParitySequence::parse("01")?;
        let s = -r.clone();
        Self::one_dimensional(&ps, Weight(vec![r.clone(), s.clone()]), ModuleKind::Gl11 { r, s })
    }

    fn one_dimensional(ps: &ParitySequence, w: Weight, kind: ModuleKind) -> Result<Self> {
        let k = ps.len();
        for a in 0..k - 1 {
            // a character must vanish on [E_a, F_a]
            let h = crate::superalg::coroot_pairing(ps, a, &w);
            if !h.is_zero() {
                return Err(Error::Internal(format!("{w} is not a character")));
            }
        }
        let zero = || SparseOperator::zeros(1, 1);
        let polynomial = w.0.iter().all(|x| x.is_zero());
        Self::from_simple_generators(
            ps,
            (0..k - 1).map(|_| zero()).collect(),
            (0..k - 1).map(|_| zero()).collect(),
            w.0.iter().map(|x| SparseOperator::from_triplets(1, 1, [(0, 0, x.clone())])).collect(),
            vec![Parity::Even],
            kind,
            polynomial,
        )
    }

    /// The dual module, with `(X f)(v) = -(-1)^{|X||f|} f(X v)` on the dual basis.
    pub fn dual(&self) -> Result<Self> {
        let k = self.ps.len();
        let dualize = |x: &SparseOperator| {
            let p = x.parity.unwrap_or(Parity::Even);
            let mut out = SparseOperator::zeros(self.dim, self.dim);
            for (i, j, v) in x.iter() {
                let s = -koszul(p, self.basis_parities[i]);
                out.add_to(j, i, v.clone() * rat(s));
            }
            out
        };
        Self::from_simple_generators(
            &self.ps,
            (0..k - 1).map(|a| dualize(&self.gens[a][a + 1])).collect(),
            (0..k - 1).map(|a| dualize(&self.gens[a + 1][a])).collect(),
            (0..k).map(|a| dualize(&self.gens[a][a])).collect(),
            self.basis_parities.clone(),
            ModuleKind::Dual(Box::new(self.kind.clone())),
            false,
        )
    }

    /// Realizes `V(mu)` as the submodule of `(C^{m|n})^{⊗|mu|}` generated by
    /// a singular vector of weight `hook_to_weight(mu)`.
    pub fn realize(mu: &HookPartition, ps: &ParitySequence) -> Result<Self> {
        let lambda = hook_to_weight(mu, ps)?;
        let boxes = mu.size();
        if boxes == 0 {
            return Self::one_dimensional(ps, lambda, ModuleKind::Hook(mu.clone()));
        }
        if boxes == 1 {
            return Self::defining(ps);
        }
        let space = TensorProduct::power(Arc::new(Self::defining(ps)?), boxes)?;
        let sing = space.singular_vectors(&lambda)?;
        let hw = sing.into_iter().next().ok_or_else(|| Error::Internal(format!("no singular vector of weight {lambda}")))?;
        let k = ps.len();
        let lowering: Vec<SparseOperator> = (0..k - 1).map(|a| space.total_generator(a + 1, a)).collect::<Result<_>>()?;
        let mut basis = vec![hw];
        let mut span = Subspace::new(space.dim());
        span.insert(&basis[0]);
        let mut next = 0;
        while next < basis.len() {
            for f in &lowering {
                let v = f.apply(&basis[next])?;
                if span.insert(&v) {
                    basis.push(v);
                }
            }
            next += 1;
        }
        let express = |x: &SparseOperator| -> Result<SparseOperator> {
            let mut out = SparseOperator::zeros(basis.len(), basis.len());
            for (j, b) in basis.iter().enumerate() {
                let img = x.apply(b)?;
                let c = span.coordinates(&img).ok_or_else(|| Error::Internal("span is not invariant".into()))?;
                for (i, v) in c.into_iter().enumerate() {
                    out.add_to(i, j, v);
                }
            }
            Ok(out)
        };
        let e = (0..k - 1).map(|a| express(&space.total_generator(a, a + 1)?)).collect::<Result<Vec<_>>>()?;
        let f = lowering.iter().map(express).collect::<Result<Vec<_>>>()?;
        let d = (0..k).map(|a| express(&space.total_generator(a, a)?)).collect::<Result<Vec<_>>>()?;
        let parities = basis
            .iter()
            .map(|b| {
                let i = b.iter().position(|x| !x.is_zero()).unwrap();
                space.parity(i)
            })
            .collect();
        Self::from_simple_generators(ps, e, f, d, parities, ModuleKind::Hook(mu.clone()), true)
    }

    pub fn parity_sequence(&self) -> &ParitySequence {
        &self.ps
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// `E_ab` acting on the module.
    pub fn generator(&self, a: usize, b: usize) -> &SparseOperator {
        &self.gens[a][b]
    }

    pub fn raising(&self, a: usize) -> &SparseOperator {
        &self.gens[a][a + 1]
    }

    pub fn lowering(&self, a: usize) -> &SparseOperator {
        &self.gens[a + 1][a]
    }

    pub fn basis_parities(&self) -> &[Parity] {
        &self.basis_parities
    }

    pub fn basis_weights(&self) -> &[Weight] {
        &self.basis_weights
    }

    pub fn hw_vector(&self) -> &[Rational] {
        &self.hw_vector
    }

    pub fn hw_weight(&self) -> &Weight {
        &self.hw_weight
    }

    /// Shapovalov form in the module basis, normalized to 1 on the
    /// highest-weight vector.
    pub fn gram(&self) -> &Matrix<Rational> {
        &self.gram
    }

    pub fn kind(&self) -> &ModuleKind {
        &self.kind
    }

    pub fn is_polynomial(&self) -> bool {
        self.polynomial
    }

    /// Parity string of the basis, e.g. `"0110"`.
    pub fn parity_string(&self) -> String {
        self.basis_parities.iter().map(|p| char::from(b'0' + p.bit())).collect()
    }

    /// Checks `[E_ab, E_cd] = delta_bc E_ad - (-1)^{(|a|+|b|)(|c|+|d|)} delta_ad E_cb`
    /// for all generator pairs, returning the first violation.
    pub fn check_relations(&self) -> std::result::Result<(), String> {
        let k = self.ps.len();
        for a in 0..k {
            for b in 0..k {
                for c in 0..k {
                    for d in 0..k {
                        let lhs = self.gens[a][b].supercommutator(&self.gens[c][d]).map_err(|e| e.to_string())?;
                        let mut rhs = SparseOperator::zeros(self.dim, self.dim);
                        if b == c {
                            rhs = rhs.add(&self.gens[a][d]).unwrap();
                        }
                        if a == d {
                            let s = koszul(self.ps.generator_parity(a, b), self.ps.generator_parity(c, d));
                            rhs = rhs.sub(&self.gens[c][b].scale(&rat(s))).unwrap();
                        }
                        if let Some((r, col)) = lhs.first_difference(&rhs) {
                            return Err(format!("[E_{a}{b}, E_{c}{d}] differs at ({r}, {col})"));
                        }
                    }
                }
            }
        }
        Ok(())
    }

    /// Solves for the symmetric bilinear form with `<E_a x, y> = <x, F_a y>`,
    /// supported on equal weights and equal to 1 on the highest-weight vector.
    fn solve_shapovalov(&self) -> Result<Matrix<Rational>> {
        let n = self.dim;
        let mut index: BTreeMap<(usize, usize), usize> = BTreeMap::new();
        for i in 0..n {
            for j in i..n {
                if self.basis_weights[i] == self.basis_weights[j] {
                    let next = index.len();
                    index.insert((i, j), next);
                }
            }
        }
        let var = |i: usize, j: usize| index.get(&(i.min(j), i.max(j))).copied();
        let unknowns = index.len();
        let mut eqs: Matrix<Rational> = Vec::new();
        for a in 0..self.ps.len() - 1 {
            let e = self.raising(a);
            let f = self.lowering(a);
            let et = e.transpose();
            // (E^T G)_{ij} - (G F)_{ij} = 0
            for i in 0..n {
                for j in 0..n {
                    let mut row = vec![Rational::zero(); unknowns];
                    let mut any = false;
                    for (k, v) in et.row(i) {
                        if let Some(x) = var(*k, j) {
                            row[x] += v;
                            any = true;
                        }
                    }
                    for k in 0..n {
                        let fv = f.get(k, j);
                        if !fv.is_zero() {
                            if let Some(x) = var(i, k) {
                                row[x] -= fv;
                                any = true;
                            }
                        }
                    }
                    if any && row.iter().any(|x| !x.is_zero()) {
                        eqs.push(row);
                    }
                }
            }
        }
        let sols = nullspace(&eqs, unknowns);
        let build = |sol: &[Rational]| -> Matrix<Rational> {
            let mut g = vec![vec![Rational::zero(); n]; n];
            for (&(i, j), &x) in &index {
                g[i][j] = sol[x].clone();
                g[j][i] = sol[x].clone();
            }
            g
        };
        let norm_of = |g: &Matrix<Rational>| {
            let gv: Vec<Rational> = g.iter().map(|row| dot(row, &self.hw_vector)).collect();
            dot(&self.hw_vector, &gv)
        };
        let Some(sol) = sols.iter().find(|s| !norm_of(&build(s)).is_zero()) else {
            return Err(Error::Internal("no contravariant form".into()));
        };
        if sols.len() != 1 {
            return Err(Error::Internal(format!("contravariant form not unique ({} solutions)", sols.len())));
        }
        let g = build(sol);
        let c = norm_of(&g);
        Ok(g.into_iter().map(|row| row.into_iter().map(|x| x / c.clone()).collect()).collect())
    }
}

/// Splits a vector into its weight components.
fn split_by_weight(v: &[Rational], weights: &[Weight]) -> Vec<Vec<Rational>> {
    let mut parts: BTreeMap<&Weight, Vec<Rational>> = BTreeMap::new();
    for (i, x) in v.iter().enumerate() {
        if !x.is_zero() {
            parts.entry(&weights[i]).or_insert_with(|| vec![Rational::zero(); v.len()])[i] = x.clone();
        }
    }
    parts.into_values().collect()
}
