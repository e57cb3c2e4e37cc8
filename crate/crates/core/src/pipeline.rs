//! Problem-file driven solving and verification: picks a closed form when
//! the instance has one, and falls back to continuation or multi-start Newton.

use crate::bethe::{gl11_solve, gl21_one_point, map_two_point, two_point_solve, weight_function, BetheProblem};
use crate::error::{Error, Result};
use crate::gaudin::{brute_spectrum, singular_strata, ChainSpec};
use crate::io::{
    complex_text, float_text, ProblemFile, RootsFile, SolutionEntry, SolveReport, UnresolvedEntry, VerifyEntry,
    VerifyReport, SCHEMA,
};
use crate::reps::{HookPartition, ModuleKind};
use crate::scalar::{format_rational, rat, Complex64, GaussianRational, Rational, Scalar};
use crate::solver::{
    homotopy_complete, is_admissible, matches_brute_force, multi_start, simple_spectrum_check, solve_single_root,
    ChainSolution, SolverConfig, VerificationReport, Verifier,
};
use crate::superalg::ParitySequence;

const DEFAULT_STARTS: usize = 64;

/// Accepts a report whose residual vanishes and whose vector is either a
/// verified eigenvector or zero (then both checks hold trivially).
fn accepted(r: &VerificationReport) -> bool {
    r.residual_ok() && (r.zero_vector || (r.singular() && r.eigen_ok()))
}

fn entry(
    prob: &BetheProblem,
    roots: &[Complex64],
    exact: Option<Vec<String>>,
    report: &VerificationReport,
    chain: Option<&[HookPartition]>,
) -> SolutionEntry {
    SolutionEntry {
        l: prob.l().to_vec(),
        roots: roots.iter().map(|x| complex_text(*x)).collect(),
        exact_roots: exact,
        weight: prob.lambda_inf().to_strings(),
        eigenvalues: report.eigenvalues.iter().map(|e| complex_text(*e)).collect(),
        residual: float_text(report.residual),
        singular_residual: float_text(report.singular_residual),
        eigen_residual: float_text(report.eigen_residual),
        norm2: complex_text(report.norm2),
        zero_vector: report.zero_vector,
        verified: accepted(report),
        chain: chain.map(|c| c.iter().map(|mu| mu.parts().to_vec()).collect()),
    }
}

fn report(method: &str, chain: &ChainSpec, solutions: Vec<SolutionEntry>) -> SolveReport {
    SolveReport {
        schema: SCHEMA.into(),
        method: method.into(),
        parities: chain.parity_sequence().to_string(),
        dim: chain.dim(),
        solutions,
        unresolved: Vec::new(),
        singular_dimension: None,
        brute_force_match: None,
        simple_spectrum: None,
        notes: Vec::new(),
    }
}

fn gaussian_text(x: &GaussianRational) -> String {
    if x.im.is_zero() {
        format_rational(&x.re)
    } else {
        let im = format_rational(&x.im);
        let sign = if im.starts_with('-') { "" } else { "+" };
        format!("{}{sign}{im}i", format_rational(&x.re))
    }
}

/// `(mu, a)` when the chain is `C^{m|n}` at one site and a realized hook at the
/// other, and `l` counts one root for each of the first `a` simple roots.
fn two_point_shape(chain: &ChainSpec, l: &[usize]) -> Option<(HookPartition, usize, usize)> {
    if chain.len() != 2 {
        return None;
    }
    let a = l.iter().take_while(|&&x| x == 1).count();
    if l[a..].iter().any(|&x| x != 0) {
        return None;
    }
    let kinds: Vec<&ModuleKind> = chain.sites().iter().map(|s| s.module.kind()).collect();
    match (kinds[0], kinds[1]) {
        (ModuleKind::Defining, ModuleKind::Hook(mu)) => Some((mu.clone(), a, 0)),
        (ModuleKind::Hook(mu), ModuleKind::Defining) => Some((mu.clone(), a, 1)),
        (ModuleKind::Defining, ModuleKind::Defining) => Some((HookPartition::single_box(), a, 0)),
        _ => None,
    }
}

/// `(r1, r2)` for one typical polynomial gl(2|1) module at a single site.
fn one_point_shape(chain: &ChainSpec) -> Option<(i64, i64)> {
    if chain.len() != 1 || chain.parity_sequence().to_string() != "010" {
        return None;
    }
    let m = &chain.sites()[0].module;
    if !m.is_polynomial() {
        return None;
    }
    let w = m.hw_weight().coords();
    let int = |q: &Rational| q.is_integer().then(|| q.to_integer().try_into().ok()).flatten();
    let (r1, r2): (i64, i64) = (int(&(&w[0] + &w[1]))?, int(&(&w[1] + &w[2]))?);
    (r1 > r2 && r2 > 0).then_some((r1, r2))
}

fn is_gl11(chain: &ChainSpec) -> bool {
    chain.parity_sequence().len() == 2 && chain.parity_sequence().n() == 1
}

fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn go(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            go(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(0, n, k, &mut Vec::new(), &mut out);
    out
}

/// All gl(1|1) solutions with `k` roots: `k`-subsets of the roots of the
/// decoupled equation.
fn gl11_solutions(chain: &ChainSpec, k: usize, verifier: &Verifier) -> Result<Vec<SolutionEntry>> {
    let prob = BetheProblem::new(chain.clone(), vec![k])?;
    let h: Vec<Rational> = (0..chain.len()).map(|s| prob.site_pairing(0, s).clone()).collect();
    let sol = gl11_solve(&h, &chain.z())?;
    let mut out = Vec::new();
    for sub in subsets(sol.roots.len(), k) {
        let t: Vec<Complex64> = sub.iter().map(|&i| sol.roots[i]).collect();
        let r = verifier.verify(&prob, &t)?;
        out.push(entry(&prob, &t, None, &r, None));
    }
    Ok(out)
}

fn check_cap(chain: &ChainSpec, max_dim: usize) -> Result<()> {
    if chain.dim() > max_dim {
        return Err(Error::TooLarge(format!("dimension {} exceeds cap {max_dim}", chain.dim())));
    }
    Ok(())
}

/// Solves the problem in `p`; with no `l` given, finds every Bethe vector.
pub fn solve_problem(p: &ProblemFile) -> Result<SolveReport> {
    let spec = p.config();
    let cfg = spec.solver_config();
    let chain = p.chain()?;
    check_cap(&chain, spec.max_dim())?;
    let Some(l) = &p.l else {
        return complete_chain(&chain, &cfg, spec.max_dim());
    };
    let prob = BetheProblem::new(chain.clone(), l.clone())?;
    let verifier = Verifier::new(&chain, &cfg)?;
    let ps = chain.parity_sequence().clone();

    if prob.num_roots() == 0 {
        let r = verifier.verify(&prob, &[])?;
        return Ok(report("trivial", &chain, vec![entry(&prob, &[], Some(Vec::new()), &r, None)]));
    }
    if let Some((mu, a, def)) = two_point_shape(&chain, l) {
        let z = chain.z();
        let mut rep = report("two-point", &chain, Vec::new());
        match two_point_solve(&mu, a, &ps) {
            Ok(tbar) => {
                let t = map_two_point(&tbar, &z[def], &z[1 - def]);
                let tc: Vec<Complex64> = t.iter().map(|x| x.to_complex()).collect();
                let r = verifier.verify(&prob, &tc)?;
                let exact = t.iter().map(gaussian_text).collect();
                rep.solutions.push(entry(&prob, &tc, Some(exact), &r, None));
            }
            Err(Error::NoSuchComponent(m)) => rep.notes.push(format!("no solution: {m}")),
            Err(e) => return Err(e),
        }
        return Ok(rep);
    }
    if is_gl11(&chain) {
        if let Ok(solutions) = gl11_solutions(&chain, l[0], &verifier) {
            return Ok(report("gl11", &chain, solutions));
        }
    }
    if let (Some((r1, r2)), [l1, l2]) = (one_point_shape(&chain), l.as_slice()) {
        return one_point(&prob, r1, r2, *l1, *l2, &spec.c_param, &verifier);
    }
    if prob.num_roots() == 1 {
        let an = solve_single_root(&prob)?;
        let mut rep = report("single-root", &chain, Vec::new());
        if an.identically_zero {
            rep.notes.push("the equation holds identically; every admissible t is a solution".into());
        } else if an.proven_empty() {
            rep.notes.push("no solution: the cleared equation is a nonzero constant".into());
        }
        for t in an.roots {
            let r = verifier.verify(&prob, &[t])?;
            rep.solutions.push(entry(&prob, &[t], None, &r, None));
        }
        return Ok(rep);
    }
    if chain.sites().iter().all(|s| matches!(s.module.kind(), ModuleKind::Defining)) {
        let mut rep = continuation(&chain, &cfg)?;
        rep.solutions.retain(|s| &s.l == l);
        return Ok(rep);
    }
    let starts = spec.starts.unwrap_or(DEFAULT_STARTS);
    let zc = prob.z_as::<Complex64>()?;
    let radius = zc.iter().map(|x| x.norm()).fold(1.0, f64::max) * 2.0;
    let mut rep = report("multi-start", &chain, Vec::new());
    rep.notes.push(format!("{starts} random starts; the list need not be complete"));
    for t in multi_start(&prob, starts, radius, &cfg)? {
        if is_admissible(&prob, &t, 1e-6) {
            let r = verifier.verify(&prob, &t)?;
            rep.solutions.push(entry(&prob, &t, None, &r, None));
        }
    }
    Ok(rep)
}

fn one_point(
    prob: &BetheProblem,
    r1: i64,
    r2: i64,
    l1: usize,
    l2: usize,
    c_param: &Option<crate::io::Number>,
    verifier: &Verifier,
) -> Result<SolveReport> {
    let mut rep = report("gl21-one-point", prob.chain(), Vec::new());
    let families = gl21_one_point(r1, r2, l1, l2)?;
    let Some(fam) = families.first() else {
        rep.notes.push(format!("no admissible solutions: need l1 = l2 in {{0, {}}}", r1 - r2));
        return Ok(rep);
    };
    let c = match c_param {
        Some(n) => n.to_rational()?,
        None => rat(1),
    };
    let z0 = prob.chain().z()[0].clone();
    let shift = |x: Complex64| x + z0.to_complex();
    let (roots, exact) = match fam.rational_roots(&c) {
        Some((t, s)) => {
            let all: Vec<Rational> = t.into_iter().chain(s).collect();
            let exact = all.iter().map(|x| gaussian_text(&(GaussianRational::real(x.clone()) + z0.clone()))).collect();
            (all.iter().map(|x| shift(x.to_complex())).collect::<Vec<_>>(), Some(exact))
        }
        None => {
            let (t, s) = fam.roots(c.to_complex());
            (t.into_iter().chain(s).map(shift).collect(), None)
        }
    };
    rep.notes.push(format!(
        "one-parameter family at c = {}: first roots solve u^{l} = {r1} c, second u^{l} = {r2} c (u = t - z)",
        format_rational(&c),
        l = fam.l
    ));
    let r = verifier.verify(prob, &roots)?;
    if r.zero_vector {
        rep.notes.push("the Bethe vector vanishes in this simple module".into());
    }
    rep.solutions.push(entry(prob, &roots, exact, &r, None));
    Ok(rep)
}

fn continuation(chain: &ChainSpec, cfg: &SolverConfig) -> Result<SolveReport> {
    let ps: &ParitySequence = chain.parity_sequence();
    let c = homotopy_complete(ps, &chain.z(), cfg)?;
    let mut rep = report("homotopy", chain, Vec::new());
    for s in &c.solutions {
        let prob = BetheProblem::new(chain.clone(), s.l.clone())?;
        rep.solutions.push(entry(&prob, &s.roots, None, &s.report, Some(&s.chain)));
    }
    rep.unresolved = c
        .unresolved
        .iter()
        .map(|(chain, reason)| UnresolvedEntry {
            chain: chain.iter().map(|mu| mu.parts().to_vec()).collect(),
            reason: reason.clone(),
        })
        .collect();
    for (i, j) in &c.duplicates {
        rep.notes.push(format!("solutions {i} and {j} are equivalent"));
    }
    rep.simple_spectrum = Some(simple_spectrum_check(&c.eigen_tuples(), &c.vectors()));
    Ok(rep)
}

/// Every Bethe vector of the chain, with the cross-checks of completeness:
/// dimension of the singular subspace, brute-force spectrum, simplicity.
pub fn complete_chain(chain: &ChainSpec, cfg: &SolverConfig, max_dim: usize) -> Result<SolveReport> {
    check_cap(chain, max_dim)?;
    let mut rep = if chain.sites().iter().all(|s| matches!(s.module.kind(), ModuleKind::Defining)) {
        continuation(chain, cfg)?
    } else if is_gl11(chain) {
        let verifier = Verifier::new(chain, cfg)?;
        let mut solutions = Vec::new();
        for k in 0..chain.len() {
            solutions.extend(gl11_solutions(chain, k, &verifier)?);
        }
        let mut rep = report("gl11", chain, solutions);
        let eig: Vec<Vec<Complex64>> = rep
            .solutions
            .iter()
            .map(|s| s.eigenvalues.iter().map(crate::io::parse_complex).collect::<Result<_>>())
            .collect::<Result<_>>()?;
        let mut vectors = Vec::new();
        for s in &rep.solutions {
            let prob = BetheProblem::new(chain.clone(), s.l.clone())?;
            let roots: Vec<Complex64> = s.roots.iter().map(crate::io::parse_complex).collect::<Result<_>>()?;
            vectors.push(weight_function(&prob, &roots)?);
        }
        rep.simple_spectrum = Some(simple_spectrum_check(&eig, &vectors));
        rep
    } else {
        return Err(Error::Parse(
            "finding all Bethe vectors needs a chain of defining modules or of gl(1|1) modules; give l".into(),
        ));
    };
    let dim: usize = singular_strata(chain)?.iter().map(|(_, b)| b.len()).sum();
    rep.singular_dimension = Some(dim);
    let spectrum = brute_spectrum(chain, max_dim, cfg.seed)?;
    let sols: Vec<ChainSolution> = rep
        .solutions
        .iter()
        .map(|s| -> Result<ChainSolution> {
            let prob = BetheProblem::new(chain.clone(), s.l.clone())?;
            let roots: Vec<Complex64> = s.roots.iter().map(crate::io::parse_complex).collect::<Result<_>>()?;
            let report = Verifier::new(chain, cfg)?.verify(&prob, &roots)?;
            Ok(ChainSolution { chain: Vec::new(), l: s.l.clone(), roots, weight: prob.lambda_inf(), report })
        })
        .collect::<Result<_>>()?;
    rep.brute_force_match = Some(matches_brute_force(&sols, &spectrum, 1e-7));
    if rep.solutions.iter().any(|s| s.zero_vector) {
        rep.notes.push("zero Bethe vectors do not count towards completeness".into());
    }
    Ok(rep)
}

/// Checks each root set of `roots` against the problem.
pub fn verify_roots(p: &ProblemFile, roots: &RootsFile) -> Result<VerifyReport> {
    let spec = p.config();
    let cfg = spec.solver_config();
    let chain = p.chain()?;
    check_cap(&chain, spec.max_dim())?;
    let verifier = Verifier::new(&chain, &cfg)?;
    let mut entries = Vec::new();
    for s in &roots.solutions {
        let prob = BetheProblem::new(chain.clone(), s.l.clone())?;
        let t = s.complex_roots()?;
        let r = verifier.verify(&prob, &t)?;
        let exact_residual_zero = match s.exact_roots() {
            Ok(te) => prob.residual(&te).map(|r| r.iter().all(|x| x.is_zero())).unwrap_or(false),
            Err(_) => false,
        };
        entries.push(VerifyEntry {
            l: s.l.clone(),
            residual: float_text(r.residual),
            exact_residual_zero,
            zero_vector: r.zero_vector,
            singular_residual: float_text(r.singular_residual),
            eigenvalues: r.eigenvalues.iter().map(|e| complex_text(*e)).collect(),
            eigen_residual: float_text(r.eigen_residual),
            norm2: complex_text(r.norm2),
            residual_ok: r.residual_ok(),
            singular: r.singular(),
            eigen_ok: r.eigen_ok(),
            pass: accepted(&r),
            pole: r.pole.clone(),
        });
    }
    let pass = entries.iter().all(|e| e.pass);
    Ok(VerifyReport { schema: SCHEMA.into(), entries, pass })
}
