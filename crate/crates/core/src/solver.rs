//! Numerical solution of the Bethe equations: damped Newton, path tracking,
//! the completeness homotopy over Pieri chains, and verification of
//! solutions against the Gaudin Hamiltonians.

use std::sync::Arc;

use nalgebra::DVector;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::bethe::{two_point_solve, weight_function, BetheProblem};
use crate::error::{Error, Result};
use crate::gaudin::{hamiltonians_complex, ChainSpec, Site};
use crate::linalg::Matrix;
use crate::numeric::{self, CMatrix};
use crate::poly::{numeric_roots, Poly};
use crate::reps::{added_box_index, pieri_chains, HookPartition, RepModule};
use crate::scalar::{rational_approx, rational_to_f64, Complex64, GaussianRational, Scalar};
use crate::sparse::SparseMatrix;
use crate::superalg::{ParitySequence, Weight};

#[derive(Clone, Debug)]
pub struct SolverConfig {
    /// Residual tolerance, relative to the largest term of each equation.
    pub tol: f64,
    pub max_iter: usize,
    /// Jacobians with a larger condition number after equilibration are refused.
    pub max_cond: f64,
    /// Starting value of the scaling parameter of the homotopy.
    pub eps0: f64,
    /// Smallest path step before a chain is declared stalled.
    pub step_floor: f64,
    /// Largest path step.
    pub max_step: f64,
    /// Tolerance for identifying two solutions.
    pub equiv_tol: f64,
    /// Relative tolerance of singularity and eigenvector checks.
    pub check_tol: f64,
    /// Iterates farther than this multiple of `1 + max |z|` count as divergent.
    pub escape_radius: f64,
    pub seed: u64,
}

impl Default for SolverConfig {
    fn default() -> Self {
        SolverConfig {
            tol: 1e-12,
            max_iter: 60,
            max_cond: 1e12,
            eps0: 1e-2,
            step_floor: 1e-8,
            max_step: 0.1,
            equiv_tol: 1e-7,
            check_tol: 1e-8,
            escape_radius: 1e6,
            seed: 0,
        }
    }
}

#[derive(Clone, Debug)]
pub struct NewtonResult {
    pub roots: Vec<Complex64>,
    pub iterations: usize,
    /// Final relative residual.
    pub residual: f64,
}

/// `max_i |r_i| / max(1, largest term of equation i)`.
pub fn relative_residual(prob: &BetheProblem, z: &[Complex64], t: &[Complex64]) -> Result<f64> {
    let r = prob.residual_at(z, t)?;
    let s = prob.term_scale_at(z, t);
    Ok(r.iter().zip(&s).map(|(x, m)| x.norm() / m.max(1.0)).fold(0.0, f64::max))
}

/// `max_i |r_i| / (largest term of equation i)`, invariant under rescaling
/// all coordinates; used to accept damped steps.
fn merit(prob: &BetheProblem, z: &[Complex64], t: &[Complex64]) -> Result<f64> {
    let r = prob.residual_at(z, t)?;
    let s = prob.term_scale_at(z, t);
    Ok(r.iter().zip(&s).map(|(x, m)| if *m > 0.0 { x.norm() / m } else { x.norm() }).fold(0.0, f64::max))
}

/// The equations multiplied through by their denominators, with Jacobian.
/// Unlike the rational form this system is not homogeneous, so Newton steps
/// are not forced along rays when the problem is scale invariant.
fn cleared_system(prob: &BetheProblem, z: &[Complex64], t: &[Complex64]) -> (Vec<Complex64>, Matrix<Complex64>) {
    let n = t.len();
    let colours = prob.colours();
    let mut g = vec![Complex64::new(0.0, 0.0); n];
    let mut jac = vec![vec![Complex64::new(0.0, 0.0); n]; n];
    for i in 0..n {
        // (pole, coefficient, root index when the pole is a root)
        let mut poles: Vec<(Complex64, f64, Option<usize>)> = Vec::new();
        for (s, zs) in z.iter().enumerate() {
            let a = rational_to_f64(prob.site_pairing(colours[i], s));
            if a != 0.0 {
                poles.push((*zs, -a, None));
            }
        }
        for j in (0..n).filter(|&j| j != i) {
            let b = rational_to_f64(prob.root_pairing(colours[i], colours[j]));
            if b != 0.0 {
                poles.push((t[j], b, Some(j)));
            }
        }
        let f: Vec<Complex64> = poles.iter().map(|(w, _, _)| t[i] - w).collect();
        for (p, (_, coef, _)) in poles.iter().enumerate() {
            let others = |skip: &[usize]| -> Complex64 {
                (0..f.len()).filter(|q| !skip.contains(q)).map(|q| f[q]).product()
            };
            g[i] += coef * others(&[p]);
            for (q, (_, _, root)) in poles.iter().enumerate().filter(|&(q, _)| q != p) {
                let d = coef * others(&[p, q]);
                jac[i][i] += d;
                if let Some(k) = root {
                    jac[i][*k] -= d;
                }
            }
        }
    }
    (g, jac)
}

/// Solves `J x = b` after row and column equilibration. With `max_cond`
/// `None` the step is the minimum-norm least-squares solution.
fn equilibrated_solve(j: &Matrix<Complex64>, b: &[Complex64], max_cond: Option<f64>) -> Result<Vec<Complex64>> {
    let rows = j.len();
    let n = j.first().map_or(0, |r| r.len());
    if n == 0 {
        return Ok(Vec::new());
    }
    let row: Vec<f64> = j.iter().map(|r| 1.0 / r.iter().map(|x| x.norm()).fold(f64::MIN_POSITIVE, f64::max)).collect();
    let col: Vec<f64> = (0..n)
        .map(|c| 1.0 / (0..rows).map(|r| j[r][c].norm() * row[r]).fold(f64::MIN_POSITIVE, f64::max))
        .collect();
    let m = CMatrix::from_fn(rows, n, |r, c| j[r][c] * row[r] * col[c]);
    let rhs = DVector::from_fn(rows, |r, _| b[r] * row[r]);
    let y = match max_cond {
        Some(c) => numeric::solve(&m, &rhs, c)?,
        None => numeric::min_norm_solve(&m, &rhs, 1e-10)?,
    };
    Ok((0..n).map(|c| y[c] * col[c]).collect())
}

/// Damped Newton iteration at explicit site coordinates.
pub fn newton_at(
    prob: &BetheProblem,
    z: &[Complex64],
    start: &[Complex64],
    cfg: &SolverConfig,
    max_iter: usize,
) -> Result<NewtonResult> {
    damped_newton(prob, z, start, cfg, max_iter, &StepRule::Strict(cfg.max_cond))
}

/// Gauss-Newton with minimum-norm steps on the denominator-free equations,
/// which also converges onto positive-dimensional solution sets where the
/// Jacobian is singular.
pub fn newton_min_norm(prob: &BetheProblem, start: &[Complex64], cfg: &SolverConfig) -> Result<NewtonResult> {
    let z = prob.z_as::<Complex64>()?;
    let rule = StepRule::MinNorm(scale_gauge(&z, start.len(), &mut ChaCha8Rng::seed_from_u64(cfg.seed)));
    damped_newton(prob, &z, start, cfg, cfg.max_iter, &rule)
}

/// How a Newton step is computed.
enum StepRule {
    /// Square solve of the rational equations, refusing ill-conditioned Jacobians.
    Strict(f64),
    /// Minimum-norm least squares on the denominator-free equations, with an
    /// optional gauge `a . (t - centre) = 1`.
    MinNorm(Option<(Complex64, Vec<Complex64>)>),
}

/// With all sites at one point the equations are invariant under scaling
/// about it and Newton steps degenerate to rescalings; a random linear
/// normalization picks one point on each ray of solutions.
fn scale_gauge(z: &[Complex64], n: usize, rng: &mut ChaCha8Rng) -> Option<(Complex64, Vec<Complex64>)> {
    let centre = *z.first()?;
    if z.iter().any(|x| (x - centre).norm() > 0.0) {
        return None;
    }
    let a = (0..n).map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))).collect();
    Some((centre, a))
}

fn gauge_residual(gauge: &Option<(Complex64, Vec<Complex64>)>, t: &[Complex64]) -> f64 {
    match gauge {
        Some((c, a)) => (t.iter().zip(a).map(|(x, w)| (x - c) * w).sum::<Complex64>() - 1.0).norm(),
        None => 0.0,
    }
}

fn damped_newton(
    prob: &BetheProblem,
    z: &[Complex64],
    start: &[Complex64],
    cfg: &SolverConfig,
    max_iter: usize,
    rule: &StepRule,
) -> Result<NewtonResult> {
    let gauge = match rule {
        StepRule::MinNorm(g) => g.clone(),
        StepRule::Strict(_) => None,
    };
    let merit = |t: &[Complex64]| merit(prob, z, t).map(|m| m.max(gauge_residual(&gauge, t)));
    let mut t = start.to_vec();
    if let Some((c, a)) = &gauge {
        // rescale onto the gauge plane; exact by scale invariance
        let k: Complex64 = t.iter().zip(a).map(|(x, w)| (x - c) * w).sum();
        if k.norm() > 0.0 {
            t.iter_mut().for_each(|x| *x = c + (*x - c) / k);
        }
    }
    let mut res = relative_residual(prob, z, &t)?;
    let mut m = merit(&t)?;
    let bound = cfg.escape_radius * (1.0 + z.iter().map(|x| x.norm()).fold(0.0, f64::max));
    for it in 0..=max_iter {
        let far = t.iter().map(|x| x.norm()).fold(0.0, f64::max);
        if far > bound {
            return Err(Error::Diverged(far));
        }
        if res <= cfg.tol {
            return Ok(NewtonResult { roots: t, iterations: it, residual: res });
        }
        if it == max_iter {
            break;
        }
        let step = match rule {
            StepRule::Strict(c) => equilibrated_solve(&prob.jacobian_at(z, &t)?, &prob.residual_at(z, &t)?, Some(*c))?,
            StepRule::MinNorm(_) => {
                let (mut g, mut j) = cleared_system(prob, z, &t);
                if let Some((c, a)) = &gauge {
                    g.push(t.iter().zip(a).map(|(x, w)| (x - c) * w).sum::<Complex64>() - 1.0);
                    j.push(a.clone());
                }
                equilibrated_solve(&j, &g, None)?
            }
        };
        let mut lambda = 1.0;
        let mut accepted = None;
        while lambda >= 1.0 / 1024.0 {
            let cand: Vec<Complex64> = t.iter().zip(&step).map(|(a, d)| a - d * lambda).collect();
            if cand.iter().all(|x| x.re.is_finite() && x.im.is_finite()) {
                if let (Ok(cm), Ok(cr)) = (merit(&cand), relative_residual(prob, z, &cand)) {
                    if cm < m || cr <= cfg.tol {
                        accepted = Some((cand, cm, cr));
                        break;
                    }
                }
            }
            lambda /= 2.0;
        }
        match accepted {
            Some((cand, cm, cr)) => {
                t = cand;
                m = cm;
                res = cr;
            }
            // stagnation: no damped step reduces the residual
            None => break,
        }
    }
    Err(Error::MaxIterExceeded(max_iter))
}

/// Damped Newton at the problem's own site coordinates.
pub fn newton(prob: &BetheProblem, start: &[Complex64], cfg: &SolverConfig) -> Result<NewtonResult> {
    let z = prob.z_as::<Complex64>()?;
    newton_at(prob, &z, start, cfg, cfg.max_iter)
}

fn min_separation(z: &[Complex64], t: &[Complex64]) -> f64 {
    let pts: Vec<&Complex64> = z.iter().chain(t).collect();
    let mut m = f64::INFINITY;
    for i in 0..pts.len() {
        for j in i + 1..pts.len() {
            m = m.min((pts[i] - pts[j]).norm());
        }
    }
    m
}

/// Follows a solution along site coordinates `path(s)`, `s` from 0 to 1,
/// with a tangent predictor, a Newton corrector and step halving.
pub fn track(
    prob: &BetheProblem,
    path: &dyn Fn(f64) -> Vec<Complex64>,
    start: &[Complex64],
    cfg: &SolverConfig,
) -> Result<Vec<Complex64>> {
    let mut s = 0.0;
    let mut h = cfg.max_step;
    let mut t = newton_at(prob, &path(0.0), start, cfg, cfg.max_iter)?.roots;
    while s < 1.0 {
        if h < cfg.step_floor {
            return Err(Error::ContinuationStall(format!("step below {} at s = {s}", cfg.step_floor)));
        }
        let s1 = (s + h).min(1.0);
        let z0 = path(s);
        let z1 = path(s1);
        match corrector_step(prob, &z0, &z1, &t, cfg) {
            Some(next) => {
                t = next;
                s = s1;
                h = (h * 1.5).min(cfg.max_step);
            }
            None => h /= 2.0,
        }
    }
    Ok(newton_at(prob, &path(1.0), &t, cfg, cfg.max_iter)?.roots)
}

fn corrector_step(
    prob: &BetheProblem,
    z0: &[Complex64],
    z1: &[Complex64],
    t: &[Complex64],
    cfg: &SolverConfig,
) -> Option<Vec<Complex64>> {
    let dz: Vec<Complex64> = z1.iter().zip(z0).map(|(a, b)| a - b).collect();
    let j = prob.jacobian_at(z0, t).ok()?;
    let jz = prob.site_jacobian_at(z0, t).ok()?;
    let rhs: Vec<Complex64> = jz.iter().map(|row| row.iter().zip(&dz).map(|(a, b)| a * b).sum()).collect();
    let pred: Vec<Complex64> = match equilibrated_solve(&j, &rhs, Some(cfg.max_cond)) {
        Ok(dt) => t.iter().zip(&dt).map(|(a, d)| a - d).collect(),
        Err(_) => t.to_vec(),
    };
    let sep = min_separation(z1, &pred);
    let corr = newton_at(prob, z1, &pred, cfg, 8).ok()?;
    let moved = corr.roots.iter().zip(&pred).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max);
    // a large correction suggests a jump to a neighbouring path
    (moved <= 0.25 * sep).then_some(corr.roots)
}

/// Result of checking a candidate Bethe vector.
#[derive(Clone, Debug)]
pub struct VerificationReport {
    pub residual: f64,
    pub zero_vector: bool,
    /// `max_a |E_a w| / |w|`.
    pub singular_residual: f64,
    pub eigenvalues: Vec<Complex64>,
    /// `max_i |H_i w - E_i w| / (|w| max(1, |E_i|))`.
    pub eigen_residual: f64,
    /// Shapovalov square `<w, w>`.
    pub norm2: Complex64,
    pub vector: Vec<Complex64>,
    pub pole: Option<String>,
    pub tol: f64,
    pub check_tol: f64,
}

impl VerificationReport {
    pub fn residual_ok(&self) -> bool {
        self.pole.is_none() && self.residual <= self.tol
    }

    pub fn singular(&self) -> bool {
        self.pole.is_none() && !self.zero_vector && self.singular_residual <= self.check_tol
    }

    pub fn eigen_ok(&self) -> bool {
        self.pole.is_none() && !self.zero_vector && self.eigen_residual <= self.check_tol
    }

    pub fn pass(&self) -> bool {
        self.residual_ok() && self.singular() && self.eigen_ok()
    }
}

/// Verifies roots against a chain, caching the Hamiltonians.
pub struct Verifier {
    hamiltonians: Vec<SparseMatrix<Complex64>>,
    cfg: SolverConfig,
}

impl Verifier {
    pub fn new(chain: &ChainSpec, cfg: &SolverConfig) -> Result<Self> {
        Ok(Verifier { hamiltonians: hamiltonians_complex(chain)?, cfg: cfg.clone() })
    }

    pub fn verify(&self, prob: &BetheProblem, t: &[Complex64]) -> Result<VerificationReport> {
        let z = prob.z_as::<Complex64>()?;
        let mut report = VerificationReport {
            residual: f64::INFINITY,
            zero_vector: true,
            singular_residual: f64::INFINITY,
            eigenvalues: Vec::new(),
            eigen_residual: f64::INFINITY,
            norm2: Complex64::new(0.0, 0.0),
            vector: Vec::new(),
            pole: None,
            tol: self.cfg.tol,
            check_tol: self.cfg.check_tol,
        };
        match relative_residual(prob, &z, t) {
            Ok(r) => report.residual = r,
            Err(Error::PoleCollision(m)) => {
                report.pole = Some(m);
                return Ok(report);
            }
            Err(e) => return Err(e),
        }
        let w = weight_function(prob, t)?;
        let wn = numeric::hermitian_norm(&w);
        report.zero_vector = wn == 0.0;
        let space = prob.chain().space();
        if !report.zero_vector {
            report.singular_residual = (0..prob.parity_sequence().rank())
                .map(|a| numeric::hermitian_norm(&space.apply_total(a, a + 1, &w)) / wn)
                .fold(0.0, f64::max);
        }
        let e = prob.eigenvalues(t)?;
        if !report.zero_vector {
            let mut worst: f64 = 0.0;
            for (h, ei) in self.hamiltonians.iter().zip(&e) {
                let hw = h.apply(&w)?;
                let d: Vec<Complex64> = hw.iter().zip(&w).map(|(a, b)| a - ei * b).collect();
                worst = worst.max(numeric::hermitian_norm(&d) / (wn * ei.norm().max(1.0)));
            }
            report.eigen_residual = worst;
        }
        report.norm2 = space.shapovalov(&w, &w);
        report.eigenvalues = e;
        report.vector = w;
        Ok(report)
    }
}

/// One-shot verification.
pub fn verify_solution(prob: &BetheProblem, t: &[Complex64], cfg: &SolverConfig) -> Result<VerificationReport> {
    Verifier::new(prob.chain(), cfg)?.verify(prob, t)
}

/// Distinct eigenvalue tuples (sup-norm gap above `1e-6`) and linearly
/// independent vectors (normalized Gram determinant above `1e-10`).
pub fn simple_spectrum_check(eigen: &[Vec<Complex64>], vectors: &[Vec<Complex64>]) -> bool {
    for i in 0..eigen.len() {
        for j in i + 1..eigen.len() {
            let gap = eigen[i].iter().zip(&eigen[j]).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max);
            if gap <= 1e-6 {
                return false;
            }
        }
    }
    numeric::normalized_gram_determinant(vectors) > 1e-10
}

/// Outcome of the exact analysis of a problem with a single root.
#[derive(Clone, Debug)]
pub struct SingleRootAnalysis {
    /// Numerator of the single equation after clearing denominators.
    pub numerator: Poly<GaussianRational>,
    /// Roots of the numerator away from the sites.
    pub roots: Vec<Complex64>,
    /// The equation holds identically.
    pub identically_zero: bool,
}

impl SingleRootAnalysis {
    /// The numerator is a nonzero constant: no finite solution exists.
    pub fn proven_empty(&self) -> bool {
        !self.identically_zero && self.numerator.degree() == Some(0)
    }
}

/// Clears denominators in `-sum_s a_s / (t - z_s) = 0` exactly.
pub fn solve_single_root(prob: &BetheProblem) -> Result<SingleRootAnalysis> {
    if prob.num_roots() != 1 {
        return Err(Error::DimensionMismatch(format!("{} roots, expected one", prob.num_roots())));
    }
    let c = prob.colours()[0];
    let z = prob.chain().z();
    let mut p = Poly::<GaussianRational>::zero();
    for (s, _) in z.iter().enumerate() {
        let a = prob.site_pairing(c, s);
        if a.is_zero() {
            continue;
        }
        let others: Vec<GaussianRational> =
            z.iter().enumerate().filter(|&(k, _)| k != s).map(|(_, x)| x.clone()).collect();
        p = p.sub(&Poly::from_roots(&others).scale(&GaussianRational::real(a.clone())));
    }
    let identically_zero = p.is_zero();
    let pc = Poly::new(p.coeffs().iter().map(|x| x.to_complex()).collect());
    let zc: Vec<Complex64> = z.iter().map(|x| x.to_complex()).collect();
    let scale = zc.iter().map(|x| x.norm()).fold(1.0, f64::max);
    let roots = numeric_roots(&pc)
        .into_iter()
        .filter(|r| zc.iter().all(|zs| (r - zs).norm() > 1e-9 * scale))
        .collect();
    Ok(SingleRootAnalysis { numerator: p, roots, identically_zero })
}

/// A verified solution attached to a Pieri chain.
#[derive(Clone, Debug)]
pub struct ChainSolution {
    pub chain: Vec<HookPartition>,
    pub l: Vec<usize>,
    pub roots: Vec<Complex64>,
    pub weight: Weight,
    pub report: VerificationReport,
}

#[derive(Clone, Debug)]
pub struct CompletionReport {
    pub solutions: Vec<ChainSolution>,
    /// Chains whose path could not be followed, with the reason.
    pub unresolved: Vec<(Vec<HookPartition>, String)>,
    /// Pairs of solution indices with equivalent roots.
    pub duplicates: Vec<(usize, usize)>,
    /// Scaled site data used for the start configuration.
    pub scaled_sites: Vec<i64>,
}

impl CompletionReport {
    pub fn all_verified(&self) -> bool {
        self.unresolved.is_empty() && self.duplicates.is_empty() && self.solutions.iter().all(|s| s.report.pass())
    }

    pub fn eigen_tuples(&self) -> Vec<Vec<Complex64>> {
        self.solutions.iter().map(|s| s.report.eigenvalues.clone()).collect()
    }

    pub fn vectors(&self) -> Vec<Vec<Complex64>> {
        self.solutions.iter().map(|s| s.report.vector.clone()).collect()
    }
}

/// Start roots for a Pieri chain at scaled sites `eps^{N-k} zt_k`, from
/// iterated two-point solutions, in canonical colour order.
pub fn chain_start(
    chain: &[HookPartition],
    ps: &ParitySequence,
    zt: &[Complex64],
    eps: Complex64,
) -> Result<(Vec<usize>, Vec<Complex64>)> {
    let n = chain.len();
    let mut l = vec![0usize; ps.rank()];
    let mut roots: Vec<(usize, Complex64)> = Vec::new();
    for k in 1..n {
        let a = added_box_index(&chain[k - 1], &chain[k], ps)?;
        let tbar = two_point_solve(&chain[k - 1], a, ps)?;
        let zk = zt[k] * eps.powi((n - k) as i32);
        for (c, tb) in tbar.iter().enumerate() {
            l[c] += 1;
            roots.push((c, zk * rational_to_f64(tb)));
        }
    }
    roots.sort_by_key(|(c, _)| *c);
    Ok((l, roots.into_iter().map(|(_, t)| t).collect()))
}

/// Site positions of the scaled start family.
fn scaled_positions(zt: &[Complex64], eps: Complex64) -> Vec<Complex64> {
    let n = zt.len();
    zt.iter().enumerate().map(|(k, x)| x * eps.powi((n - k) as i32)).collect()
}

/// Every Bethe vector of `(C^{m|n})^{⊗N}` at sites `z`, one per Pieri chain,
/// by continuation from the clustered configuration.
pub fn homotopy_complete(ps: &ParitySequence, z: &[GaussianRational], cfg: &SolverConfig) -> Result<CompletionReport> {
    let n = z.len();
    let target_chain = ChainSpec::defining(ps, z)?;
    let verifier = Verifier::new(&target_chain, cfg)?;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut zt_int: Vec<i64> = Vec::with_capacity(n);
    while zt_int.len() < n {
        let x = rng.gen_range(1..=100);
        if !zt_int.contains(&x) {
            zt_int.push(x);
        }
    }
    let zt: Vec<Complex64> = zt_int.iter().map(|&x| Complex64::new(x as f64, 0.0)).collect();
    let zc: Vec<Complex64> = z.iter().map(|x| x.to_complex()).collect();
    let spread = zc.iter().chain(&zt).map(|x| x.norm()).fold(1.0, f64::max);
    let detour: Vec<Complex64> = (0..n)
        .map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)) * spread)
        .collect();
    let chains = pieri_chains(n, ps.m(), ps.n());
    // a complex phase keeps the site ratios off the real line, where roots can collide
    let theta = rng.gen_range(0.5..2.5);
    let scale = |s: f64| Complex64::from_polar(cfg.eps0.powf(1.0 - s), theta * (1.0 - s));

    let run = |chain: &Vec<HookPartition>, max_step: f64| -> Result<(Vec<usize>, Vec<Complex64>)> {
        let mut local = cfg.clone();
        local.max_step = max_step;
        let (l, start) = chain_start(chain, ps, &zt, scale(0.0))?;
        let prob = BetheProblem::new(target_chain.clone(), l.clone())?;
        if start.is_empty() {
            return Ok((l, start));
        }
        let phase1 = |s: f64| scaled_positions(&zt, scale(s));
        let t1 = track(&prob, &phase1, &start, &local)?;
        let phase2 = |s: f64| -> Vec<Complex64> {
            (0..n).map(|k| zt[k] * (1.0 - s) + zc[k] * s + detour[k] * (s * (1.0 - s))).collect()
        };
        let t2 = track(&prob, &phase2, &t1, &local)?;
        Ok((l, prob.canonicalize(&t2)))
    };

    let attempt = |max_step: f64, which: &[usize]| -> Vec<(usize, Result<(Vec<usize>, Vec<Complex64>)>)> {
        which.par_iter().map(|&i| (i, run(&chains[i], max_step))).collect()
    };
    let all: Vec<usize> = (0..chains.len()).collect();
    let mut results: Vec<Option<Result<(Vec<usize>, Vec<Complex64>)>>> = vec![None; chains.len()];
    for (i, r) in attempt(cfg.max_step, &all) {
        results[i] = Some(r);
    }
    // retry failed or colliding chains with shorter steps
    for step in [cfg.max_step / 5.0, cfg.max_step / 25.0] {
        let bad = problem_chains(&results, cfg.equiv_tol, &target_chain);
        if bad.is_empty() {
            break;
        }
        for (i, r) in attempt(step, &bad) {
            results[i] = Some(r);
        }
    }

    let mut solutions = Vec::new();
    let mut unresolved = Vec::new();
    for (chain, r) in chains.iter().zip(results) {
        match r.expect("every chain attempted") {
            Ok((l, roots)) => {
                let prob = BetheProblem::new(target_chain.clone(), l.clone())?;
                let report = verifier.verify(&prob, &roots)?;
                solutions.push(ChainSolution { chain: chain.clone(), l, roots, weight: prob.lambda_inf(), report });
            }
            Err(e) => unresolved.push((chain.clone(), e.to_string())),
        }
    }
    let duplicates = find_duplicates(&solutions, &target_chain, cfg.equiv_tol);
    Ok(CompletionReport { solutions, unresolved, duplicates, scaled_sites: zt_int })
}

fn problem_chains(
    results: &[Option<Result<(Vec<usize>, Vec<Complex64>)>>],
    tol: f64,
    chain: &ChainSpec,
) -> Vec<usize> {
    let mut bad = Vec::new();
    for (i, r) in results.iter().enumerate() {
        match r {
            Some(Ok((li, ti))) => {
                let prob = match BetheProblem::new(chain.clone(), li.clone()) {
                    Ok(p) => p,
                    Err(_) => continue,
                };
                for (j, other) in results.iter().enumerate().take(i) {
                    if let Some(Ok((lj, tj))) = other {
                        if li == lj && prob.equivalent(ti, tj, tol) {
                            bad.push(i);
                            if !bad.contains(&j) {
                                bad.push(j);
                            }
                        }
                    }
                }
            }
            _ => bad.push(i),
        }
    }
    bad.sort_unstable();
    bad.dedup();
    bad
}

fn find_duplicates(solutions: &[ChainSolution], chain: &ChainSpec, tol: f64) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    for i in 0..solutions.len() {
        for j in i + 1..solutions.len() {
            if solutions[i].l == solutions[j].l {
                if let Ok(p) = BetheProblem::new(chain.clone(), solutions[i].l.clone()) {
                    if p.equivalent(&solutions[i].roots, &solutions[j].roots, tol) {
                        out.push((i, j));
                    }
                }
            }
        }
    }
    out
}

/// Multi-start minimum-norm Newton from seeded random starts; returns the
/// pairwise inequivalent converged solutions in canonical form.
pub fn multi_start(prob: &BetheProblem, starts: usize, radius: f64, cfg: &SolverConfig) -> Result<Vec<Vec<Complex64>>> {
    let z = prob.z_as::<Complex64>()?;
    let centre = z.iter().sum::<Complex64>() / z.len().max(1) as f64;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let rule = StepRule::MinNorm(scale_gauge(&z, prob.num_roots(), &mut rng));
    let seeds: Vec<Vec<Complex64>> = (0..starts)
        .map(|_| {
            (0..prob.num_roots())
                .map(|_| centre + Complex64::new(rng.gen_range(-radius..radius), rng.gen_range(-radius..radius)))
                .collect()
        })
        .collect();
    let found: Vec<Vec<Complex64>> = seeds
        .par_iter()
        .filter_map(|s| damped_newton(prob, &z, s, cfg, cfg.max_iter, &rule).ok().map(|r| prob.canonicalize(&r.roots)))
        .collect();
    let mut out: Vec<Vec<Complex64>> = Vec::new();
    for f in found {
        if !out.iter().any(|o| prob.equivalent(o, &f, cfg.equiv_tol)) {
            out.push(f);
        }
    }
    Ok(out)
}

/// Whether no two roots of the same colour coincide (to `tol`).
pub fn is_admissible(prob: &BetheProblem, t: &[Complex64], tol: f64) -> bool {
    let c = prob.colours();
    let scale = t.iter().map(|x| x.norm()).fold(1.0, f64::max);
    for i in 0..t.len() {
        for j in i + 1..t.len() {
            if c[i] == c[j] && (t[i] - t[j]).norm() <= tol * scale {
                return false;
            }
        }
    }
    true
}

/// Matches solution eigenvalue tuples per weight against brute-force strata
/// as multisets, with sup-norm tolerance relative to `max(1, |E|)`.
pub fn matches_brute_force(solutions: &[ChainSolution], spectrum: &crate::gaudin::Spectrum, tol: f64) -> bool {
    if solutions.len() != spectrum.singular_dimension() {
        return false;
    }
    for stratum in &spectrum.strata {
        let mine: Vec<&Vec<Complex64>> =
            solutions.iter().filter(|s| s.weight == stratum.weight).map(|s| &s.report.eigenvalues).collect();
        if mine.len() != stratum.eigenvalues.len() {
            return false;
        }
        let mut used = vec![false; mine.len()];
        for e in &stratum.eigenvalues {
            let hit = (0..mine.len()).find(|&k| {
                !used[k] && e.iter().zip(mine[k]).all(|(a, b)| (a - b).norm() <= tol * a.norm().max(1.0))
            });
            match hit {
                Some(k) => used[k] = true,
                None => return false,
            }
        }
    }
    true
}

/// Rational approximations of complex site coordinates.
pub fn rationalize(z: &[Complex64], max_den: i64) -> Vec<GaussianRational> {
    z.iter().map(|x| GaussianRational::new(rational_approx(x.re, max_den), rational_approx(x.im, max_den))).collect()
}

/// Sites carrying `module` at each coordinate.
pub fn uniform_chain(module: Arc<RepModule>, z: &[GaussianRational]) -> Result<ChainSpec> {
    ChainSpec::new(z.iter().map(|x| Site { z: x.clone(), module: module.clone() }).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{rat, ratio};

    fn g(q: crate::scalar::Rational) -> GaussianRational {
        GaussianRational::real(q)
    }

    #[test]
    fn newton_two_sites() {
        let ps = ParitySequence::parse("010").unwrap();
        let chain = ChainSpec::defining(&ps, &[g(rat(1)), g(rat(0))]).unwrap();
        let prob = BetheProblem::new(chain, vec![1, 0]).unwrap();
        let r = newton(&prob, &[Complex64::new(0.4, 0.0)], &SolverConfig::default()).unwrap();
        assert!((r.roots[0] - Complex64::new(0.5, 0.0)).norm() < 1e-13);
        let r0 = newton(&prob, &[Complex64::new(0.5, 0.0)], &SolverConfig::default()).unwrap();
        assert_eq!(r0.iterations, 0);
        assert!(matches!(
            newton(&prob, &[Complex64::new(1.0, 0.0)], &SolverConfig::default()),
            Err(Error::PoleCollision(_))
        ));
        let rep = verify_solution(&prob, &r.roots, &SolverConfig::default()).unwrap();
        assert!(rep.pass());
        assert!((rep.eigenvalues[0] + 1.0).norm() < 1e-12);
        assert!((rep.eigenvalues[1] - 1.0).norm() < 1e-12);
    }

    #[test]
    fn single_root_without_solution() {
        let ps = ParitySequence::parse("010").unwrap();
        let a = Arc::new(RepModule::defining(&ps).unwrap());
        let mu = HookPartition::new(vec![1, 1], 2, 1).unwrap();
        let b = Arc::new(RepModule::realize(&mu, &ps).unwrap().dual().unwrap());
        assert_eq!(b.hw_weight(), &Weight::from_ints(&[0, -1, -1]));
        let chain = ChainSpec::new(vec![Site { z: g(rat(0)), module: a }, Site { z: g(ratio(1, 3)), module: b }]).unwrap();
        let prob = BetheProblem::new(chain, vec![1, 0]).unwrap();
        let an = solve_single_root(&prob).unwrap();
        assert!(an.proven_empty());
        assert!(an.roots.is_empty());
    }

    #[test]
    fn complete_gl11_three_sites() {
        let ps = ParitySequence::parse("01").unwrap();
        let z = [g(rat(0)), g(ratio(3, 2)), g(ratio(-7, 3))];
        let rep = homotopy_complete(&ps, &z, &SolverConfig::default()).unwrap();
        assert!(rep.all_verified(), "{:?}", rep.unresolved);
        assert_eq!(rep.solutions.len(), 4);
        assert!(simple_spectrum_check(&rep.eigen_tuples(), &rep.vectors()));
    }

    #[test]
    fn cleared_jacobian_matches_finite_differences() {
        let ps = ParitySequence::parse("010").unwrap();
        let chain = ChainSpec::defining(&ps, &[g(rat(0)), g(ratio(3, 2)), g(rat(-2))]).unwrap();
        let prob = BetheProblem::new(chain, vec![2, 1]).unwrap();
        let z = prob.z_as::<Complex64>().unwrap();
        let t = [Complex64::new(0.7, 0.2), Complex64::new(-0.9, 1.1), Complex64::new(2.3, -0.4)];
        let (g0, j) = cleared_system(&prob, &z, &t);
        // cleared equations vanish where the rational ones do, scaled by the denominators
        let r = prob.residual(&t).unwrap();
        assert!(g0.iter().zip(&r).all(|(a, b)| (a.norm() > 0.0) == (b.norm() > 0.0)));
        let h = 1e-6;
        for k in 0..t.len() {
            let mut tp = t;
            tp[k] += h;
            let mut tm = t;
            tm[k] -= h;
            let (gp, _) = cleared_system(&prob, &z, &tp);
            let (gm, _) = cleared_system(&prob, &z, &tm);
            for i in 0..t.len() {
                let fd = (gp[i] - gm[i]) / (2.0 * h);
                assert!((fd - j[i][k]).norm() < 1e-6 * j[i][k].norm().max(1.0), "({i},{k})");
            }
        }
    }

    #[test]
    fn scan_on_a_scale_invariant_problem() {
        let ps = ParitySequence::parse("010").unwrap();
        let mu = HookPartition::new(vec![1, 1], 2, 1).unwrap();
        let module = Arc::new(RepModule::realize(&mu, &ps).unwrap());
        let chain = uniform_chain(module, &[g(rat(0))]).unwrap();
        // residual 1/s has no finite zero; iterates must not be accepted at infinity
        let lone = BetheProblem::new(chain.clone(), vec![0, 1]).unwrap();
        let found = multi_start(&lone, 20, 4.0, &SolverConfig::default()).unwrap();
        assert!(found.is_empty());
        // the family t = 2 s
        let pair = BetheProblem::new(chain, vec![1, 1]).unwrap();
        let found = multi_start(&pair, 20, 4.0, &SolverConfig::default()).unwrap();
        assert!(!found.is_empty());
        for t in found {
            assert!((t[0] - 2.0 * t[1]).norm() < 1e-9 * t[0].norm());
        }
    }
}
