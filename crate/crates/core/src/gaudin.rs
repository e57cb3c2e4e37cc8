//! Gaudin chains: sites with coordinates, the Hamiltonians
//! `H_i = sum_{j != i} Omega_ij / (z_i - z_j)` with
//! `Omega_ij = sum_{a,b} (-1)^{|b|} E_ab^{(i)} E_ba^{(j)}`, their structural
//! checks, and brute-force joint spectra.

use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::linalg::{identity, is_zero_matrix, mat_mul, rank, Matrix, Subspace};
use crate::numeric;
use crate::poly::characteristic_polynomial;
use crate::reps::{RepModule, TensorProduct};
use crate::scalar::{rat, Complex64, GaussianRational, Rational, Scalar};
use crate::sparse::{SparseMatrix, SparseOperator};
use crate::superalg::{ParitySequence, Weight};

/// Default cap on the dimension handled by brute-force diagonalization.
pub const DEFAULT_MAX_DIM: usize = 4096;

#[derive(Clone, Debug)]
pub struct Site {
    pub z: GaussianRational,
    pub module: Arc<RepModule>,
}

#[derive(Clone, Debug)]
pub struct ChainSpec {
    ps: ParitySequence,
    sites: Vec<Site>,
    space: TensorProduct,
}

impl ChainSpec {
    pub fn new(sites: Vec<Site>) -> Result<Self> {
        for i in 0..sites.len() {
            for j in i + 1..sites.len() {
                if sites[i].z == sites[j].z {
                    return Err(Error::DuplicateSite(i, j));
                }
            }
        }
        let space = TensorProduct::new(sites.iter().map(|s| s.module.clone()).collect())?;
        Ok(ChainSpec { ps: space.parity_sequence().clone(), sites, space })
    }

    /// `N` copies of the defining module at the given points.
    pub fn defining(ps: &ParitySequence, z: &[GaussianRational]) -> Result<Self> {
        let m = Arc::new(RepModule::defining(ps)?);
        Self::new(z.iter().map(|z| Site { z: z.clone(), module: m.clone() }).collect())
    }

    pub fn parity_sequence(&self) -> &ParitySequence {
        &self.ps
    }

    pub fn sites(&self) -> &[Site] {
        &self.sites
    }

    pub fn len(&self) -> usize {
        self.sites.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sites.is_empty()
    }

    pub fn space(&self) -> &TensorProduct {
        &self.space
    }

    pub fn dim(&self) -> usize {
        self.space.dim()
    }

    pub fn z(&self) -> Vec<GaussianRational> {
        self.sites.iter().map(|s| s.z.clone()).collect()
    }

    /// Highest weight of the tensor product of highest-weight vectors.
    pub fn total_weight(&self) -> Weight {
        self.sites.iter().fold(Weight::zero(self.ps.len()), |w, s| &w + s.module.hw_weight())
    }

    /// Same modules at new coordinates.
    pub fn with_coordinates(&self, z: &[GaussianRational]) -> Result<Self> {
        if z.len() != self.sites.len() {
            return Err(Error::DimensionMismatch(format!("{} coordinates for {} sites", z.len(), self.sites.len())));
        }
        Self::new(
            self.sites
                .iter()
                .zip(z)
                .map(|(s, z)| Site { z: z.clone(), module: s.module.clone() })
                .collect(),
        )
    }
}

/// `Omega_ij`, exact.
pub fn pair_operator(chain: &ChainSpec, i: usize, j: usize) -> Result<SparseOperator> {
    let sp = chain.space();
    let ps = chain.parity_sequence();
    let k = ps.len();
    let mut out = SparseOperator::zeros(sp.dim(), sp.dim());
    for a in 0..k {
        for b in 0..k {
            let x = sp.site_operator(i, sp.factor(i).generator(a, b))?;
            let y = sp.site_operator(j, sp.factor(j).generator(b, a))?;
            out = out.add(&x.mul(&y)?.scale(&rat(ps.sign(b))))?;
        }
    }
    Ok(out.with_parity(crate::superalg::Parity::Even))
}

/// All Hamiltonians `H_1, ..., H_N` with exact Gaussian-rational entries.
pub fn hamiltonians(chain: &ChainSpec) -> Result<Vec<SparseMatrix<GaussianRational>>> {
    let n = chain.len();
    let dim = chain.dim();
    let mut hs = vec![SparseMatrix::<GaussianRational>::zeros(dim, dim); n];
    for i in 0..n {
        for j in i + 1..n {
            let omega = pair_operator(chain, i, j)?.map(GaussianRational::from_rational);
            let d = chain.sites[i].z.clone() - chain.sites[j].z.clone();
            let c = GaussianRational::one() / d;
            // Omega_ij = Omega_ji
            hs[i] = hs[i].add(&omega.scale(&c))?;
            hs[j] = hs[j].add(&omega.scale(&-c))?;
        }
    }
    Ok(hs.into_iter().map(|h| h.with_parity(crate::superalg::Parity::Even)).collect())
}

pub fn hamiltonian(chain: &ChainSpec, i: usize) -> Result<SparseMatrix<GaussianRational>> {
    if i >= chain.len() {
        return Err(Error::Index(format!("site {i} of {}", chain.len())));
    }
    Ok(hamiltonians(chain)?.swap_remove(i))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HamiltonianReport {
    pub commute: bool,
    pub invariant: bool,
    pub symmetric: bool,
    pub sum_zero: bool,
    /// First failing check with its location.
    pub counterexample: Option<String>,
}

impl HamiltonianReport {
    pub fn all_pass(&self) -> bool {
        self.commute && self.invariant && self.symmetric && self.sum_zero
    }
}

/// Exact checks: pairwise commutation, invariance under the generators
/// `E_a`, `F_a`, `E_aa`, symmetry for the tensor Shapovalov form, zero sum.
pub fn verify_hamiltonians(chain: &ChainSpec) -> Result<HamiltonianReport> {
    let hs = hamiltonians(chain)?;
    let sp = chain.space();
    let k = chain.parity_sequence().len();
    let mut report =
        HamiltonianReport { commute: true, invariant: true, symmetric: true, sum_zero: true, counterexample: None };
    let note = |r: &mut HamiltonianReport, msg: String| {
        if r.counterexample.is_none() {
            r.counterexample = Some(msg);
        }
    };
    for i in 0..hs.len() {
        for j in i + 1..hs.len() {
            let c = hs[i].commutator(&hs[j])?;
            if let Some((r, col)) = c.first_nonzero() {
                report.commute = false;
                note(&mut report, format!("[H_{i}, H_{j}] nonzero at ({r}, {col})"));
            }
        }
    }
    let mut gens = Vec::new();
    for a in 0..k {
        gens.push((a, a));
        if a + 1 < k {
            gens.push((a, a + 1));
            gens.push((a + 1, a));
        }
    }
    for &(a, b) in &gens {
        let x = sp.total_generator(a, b)?.map(GaussianRational::from_rational);
        for (i, h) in hs.iter().enumerate() {
            let c = h.commutator(&x)?;
            if let Some((r, col)) = c.first_nonzero() {
                report.invariant = false;
                note(&mut report, format!("[H_{i}, E_{a}{b}] nonzero at ({r}, {col})"));
            }
        }
    }
    let g = sp.gram_operator().map(GaussianRational::from_rational);
    for (i, h) in hs.iter().enumerate() {
        let lhs = h.transpose().mul(&g)?;
        let rhs = g.mul(h)?;
        if let Some((r, col)) = lhs.first_difference(&rhs) {
            report.symmetric = false;
            note(&mut report, format!("H_{i} not symmetric at ({r}, {col})"));
        }
    }
    let dim = chain.dim();
    let mut sum = SparseMatrix::<GaussianRational>::zeros(dim, dim);
    for h in &hs {
        sum = sum.add(h)?;
    }
    if let Some((r, col)) = sum.first_nonzero() {
        report.sum_zero = false;
        note(&mut report, format!("sum of Hamiltonians nonzero at ({r}, {col})"));
    }
    Ok(report)
}

/// Matrix of an operator restricted to an invariant subspace spanned by `basis`.
pub fn restrict<T: Scalar>(op: &SparseMatrix<T>, basis: &[Vec<T>]) -> Result<Matrix<T>> {
    let dim = op.ncols();
    let mut span = Subspace::new(dim);
    for b in basis {
        if !span.insert(b) {
            return Err(Error::Internal("restriction basis is dependent".into()));
        }
    }
    let k = basis.len();
    let mut out = vec![vec![T::zero(); k]; k];
    for (j, b) in basis.iter().enumerate() {
        let img = op.apply(b)?;
        let c = span.coordinates(&img).ok_or_else(|| Error::Internal("subspace is not invariant".into()))?;
        for (i, x) in c.into_iter().enumerate() {
            out[i][j] = x;
        }
    }
    Ok(out)
}

#[derive(Clone, Debug, PartialEq)]
pub struct JordanInfo {
    pub diagonalizable: bool,
    /// Largest Jordan block.
    pub max_block: usize,
    /// The eigenvalue when there is only one.
    pub single_eigenvalue: Option<GaussianRational>,
    /// Block sizes in decreasing order, when there is a single eigenvalue.
    pub blocks: Option<Vec<usize>>,
}

/// Exact Jordan structure information: a matrix is diagonalizable iff the
/// squarefree part `s` of its characteristic polynomial annihilates it, and
/// the largest block is the least `k` with `s(A)^k = 0`.
pub fn jordan_info(a: &Matrix<GaussianRational>) -> JordanInfo {
    let n = a.len();
    if n == 0 {
        return JordanInfo { diagonalizable: true, max_block: 0, single_eigenvalue: None, blocks: Some(Vec::new()) };
    }
    let cp = characteristic_polynomial(a);
    let s = cp.squarefree_part();
    let sa = s.eval_matrix(a);
    let mut power = sa.clone();
    let mut max_block = 1;
    while !is_zero_matrix(&power) && max_block <= n {
        power = mat_mul(&power, &sa);
        max_block += 1;
    }
    let single = (s.degree() == Some(1)).then(|| -s.coeffs()[0].clone());
    let blocks = single.as_ref().map(|lambda| {
        let id = identity::<GaussianRational>(n);
        let shifted: Matrix<GaussianRational> = a
            .iter()
            .zip(&id)
            .map(|(r, ir)| r.iter().zip(ir).map(|(x, e)| x.clone() - e.clone() * lambda.clone()).collect())
            .collect();
        // r_k = rank (A - lambda)^k; blocks of size >= k number r_{k-1} - r_k
        let mut ranks = vec![n];
        let mut p = identity::<GaussianRational>(n);
        for _ in 0..n {
            p = mat_mul(&p, &shifted);
            ranks.push(rank(&p, n));
        }
        let at_least: Vec<usize> = (1..=n).map(|k| ranks[k - 1] - ranks[k]).collect();
        let mut sizes = Vec::new();
        for k in (1..=n).rev() {
            let exact = at_least[k - 1] - at_least.get(k).copied().unwrap_or(0);
            sizes.extend(std::iter::repeat_n(k, exact));
        }
        sizes
    });
    JordanInfo { diagonalizable: max_block == 1, max_block, single_eigenvalue: single, blocks }
}

/// Joint spectrum of the Hamiltonians on the singular vectors of one weight.
#[derive(Clone, Debug)]
pub struct StratumSpectrum {
    pub weight: Weight,
    pub dim: usize,
    /// One tuple `(E_1, ..., E_N)` per joint eigenvector, with multiplicity.
    pub eigenvalues: Vec<Vec<Complex64>>,
    pub jordan: JordanInfo,
}

#[derive(Clone, Debug)]
pub struct Spectrum {
    pub strata: Vec<StratumSpectrum>,
}

impl Spectrum {
    pub fn singular_dimension(&self) -> usize {
        self.strata.iter().map(|s| s.dim).sum()
    }

    pub fn stratum(&self, w: &Weight) -> Option<&StratumSpectrum> {
        self.strata.iter().find(|s| &s.weight == w)
    }
}

/// Basis of the whole singular subspace, stratified by weight.
pub fn singular_strata(chain: &ChainSpec) -> Result<Vec<(Weight, Vec<Vec<Rational>>)>> {
    let sp = chain.space();
    let mut out = Vec::new();
    for (w, idxs) in sp.weight_spaces() {
        let vs = sp.singular_in(&idxs)?;
        if !vs.is_empty() {
            out.push((w, vs));
        }
    }
    Ok(out)
}

/// Restricts every Hamiltonian to each singular stratum exactly and
/// diagonalizes a generic combination numerically.
pub fn brute_spectrum(chain: &ChainSpec, max_dim: usize, seed: u64) -> Result<Spectrum> {
    if chain.dim() > max_dim {
        return Err(Error::TooLarge(format!("dimension {} exceeds cap {max_dim}", chain.dim())));
    }
    let hs = hamiltonians(chain)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut strata = Vec::new();
    for (weight, basis) in singular_strata(chain)? {
        let gb: Vec<Vec<GaussianRational>> =
            basis.iter().map(|v| v.iter().map(GaussianRational::from_rational).collect()).collect();
        let ms: Vec<Matrix<GaussianRational>> = hs.iter().map(|h| restrict(h, &gb)).collect::<Result<_>>()?;
        let k = gb.len();
        let coeffs: Vec<i64> = (0..ms.len()).map(|_| rng.gen_range(1..=97)).collect();
        let mut comb = vec![vec![GaussianRational::zero(); k]; k];
        for (m, c) in ms.iter().zip(&coeffs) {
            for i in 0..k {
                for j in 0..k {
                    comb[i][j] = comb[i][j].clone() + m[i][j].clone() * GaussianRational::from_i64(*c);
                }
            }
        }
        let jordan = jordan_info(&comb);
        let eigenvalues = joint_eigenvalues(&ms, &comb);
        strata.push(StratumSpectrum { weight, dim: k, eigenvalues, jordan });
    }
    Ok(Spectrum { strata })
}

fn to_cmatrix(m: &Matrix<GaussianRational>) -> numeric::CMatrix {
    let k = m.len();
    numeric::CMatrix::from_fn(k, k, |i, j| m[i][j].to_complex())
}

/// Eigenvalue tuples from eigenvectors of the combination; degenerate
/// clusters get the average eigenvalue of each restricted operator.
fn joint_eigenvalues(ms: &[Matrix<GaussianRational>], comb: &Matrix<GaussianRational>) -> Vec<Vec<Complex64>> {
    let k = comb.len();
    let kc = to_cmatrix(comb);
    let cms: Vec<numeric::CMatrix> = ms.iter().map(to_cmatrix).collect();
    let evs = numeric::eigenvalues(&kc);
    let scale = evs.iter().map(|z| z.norm()).fold(1.0, f64::max);
    let mut used = vec![false; k];
    let mut out = Vec::new();
    for i in 0..k {
        if used[i] {
            continue;
        }
        let cluster: Vec<usize> = (i..k).filter(|&j| !used[j] && (evs[j] - evs[i]).norm() <= 1e-8 * scale).collect();
        for &j in &cluster {
            used[j] = true;
        }
        if cluster.len() == 1 {
            let (x, _) = numeric::null_vector(&kc, evs[i]);
            let xx: Complex64 = x.iter().map(|z| z.norm_sqr()).sum::<f64>().into();
            out.push(
                cms.iter()
                    .map(|m| {
                        let mx = m * &x;
                        mx.iter().zip(x.iter()).map(|(a, b)| a * b.conj()).sum::<Complex64>() / xx
                    })
                    .collect(),
            );
        } else {
            // compress each operator onto the approximate eigenspace
            let q = numeric::near_null_space(&kc, evs[i], cluster.len());
            let c = cluster.len() as f64;
            let tuple: Vec<Complex64> = cms
                .iter()
                .map(|m| {
                    let r = q.adjoint() * m * &q;
                    r.trace() / c
                })
                .collect();
            for _ in 0..cluster.len() {
                out.push(tuple.clone());
            }
        }
    }
    out
}

/// Numeric version of the Hamiltonians for floating-point checks.
pub fn hamiltonians_complex(chain: &ChainSpec) -> Result<Vec<SparseMatrix<Complex64>>> {
    Ok(hamiltonians(chain)?.iter().map(|h| h.map(|x| x.to_complex())).collect())
}
