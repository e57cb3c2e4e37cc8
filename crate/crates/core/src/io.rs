//! JSON problem, roots and report files (schema `supergaudin/1`).
//!
//! Exact quantities are written as `"p/q"` strings and complex numbers as
//! `[re, im]` pairs of strings, so that files round-trip byte for byte.

use std::collections::HashMap;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gaudin::{ChainSpec, Site, DEFAULT_MAX_DIM};
use crate::reps::{HookPartition, RepModule};
use crate::scalar::{format_rational, parse_rational, Complex64, GaussianRational, Rational};
use crate::solver::SolverConfig;
use crate::superalg::ParitySequence;

pub const SCHEMA: &str = "supergaudin/1";

/// A rational written as a string (`"3/2"`, `"-4"`, `"0.25"`) or a JSON integer.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Number {
    Int(i64),
    Text(String),
}

impl Number {
    pub fn to_rational(&self) -> Result<Rational> {
        match self {
            Number::Int(n) => Ok(Rational::from_integer((*n).into())),
            Number::Text(s) => parse_rational(s),
        }
    }
}

impl From<&Rational> for Number {
    fn from(q: &Rational) -> Self {
        Number::Text(format_rational(q))
    }
}

/// A site coordinate: `[re, im]` or a single real number.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Coordinate {
    Pair([Number; 2]),
    Real(Number),
}

impl Coordinate {
    pub fn to_gaussian(&self) -> Result<GaussianRational> {
        match self {
            Coordinate::Pair([re, im]) => Ok(GaussianRational::new(re.to_rational()?, im.to_rational()?)),
            Coordinate::Real(re) => Ok(GaussianRational::real(re.to_rational()?)),
        }
    }
}

impl From<&GaussianRational> for Coordinate {
    fn from(z: &GaussianRational) -> Self {
        Coordinate::Pair([Number::from(&z.re), Number::from(&z.im)])
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TaggedModule {
    Hook(Vec<usize>),
    DualHook(Vec<usize>),
    Gl11([Number; 2]),
}

/// Module at a site: `"box"`, a hook array `[2, 1]`, `{"hook": [...]}`,
/// `{"dual_hook": [...]}` or `{"gl11": [r, s]}`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ModuleSpec {
    Named(String),
    Hook(Vec<usize>),
    Tagged(TaggedModule),
}

impl ModuleSpec {
    pub fn build(&self, ps: &ParitySequence) -> Result<RepModule> {
        let hook = |parts: &[usize]| HookPartition::new(parts.to_vec(), ps.m(), ps.n());
        match self {
            ModuleSpec::Named(name) if name == "box" => RepModule::defining(ps),
            ModuleSpec::Named(name) => Err(Error::Parse(format!("unknown module {name:?}"))),
            ModuleSpec::Hook(parts) | ModuleSpec::Tagged(TaggedModule::Hook(parts)) => {
                RepModule::realize(&hook(parts)?, ps)
            }
            ModuleSpec::Tagged(TaggedModule::DualHook(parts)) => RepModule::realize(&hook(parts)?, ps)?.dual(),
            ModuleSpec::Tagged(TaggedModule::Gl11([r, s])) => {
                if ps.len() != 2 || ps.n() != 1 {
                    return Err(Error::Parse("gl11 modules need m = n = 1".into()));
                }
                RepModule::gl11(r.to_rational()?, s.to_rational()?)
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SiteSpec {
    pub z: Coordinate,
    pub module: ModuleSpec,
}

/// Optional solver settings; unset fields keep their defaults.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigSpec {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tol: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub check_tol: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub eps0: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub max_step: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub step_floor: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub max_iter: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub max_dim: Option<usize>,
    /// Parameter of one-point solution families.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub c_param: Option<Number>,
    /// Random starts for the multi-start fallback.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub starts: Option<usize>,
}

impl ConfigSpec {
    pub fn solver_config(&self) -> SolverConfig {
        let d = SolverConfig::default();
        SolverConfig {
            seed: self.seed.unwrap_or(d.seed),
            tol: self.tol.unwrap_or(d.tol),
            check_tol: self.check_tol.unwrap_or(d.check_tol),
            eps0: self.eps0.unwrap_or(d.eps0),
            max_step: self.max_step.unwrap_or(d.max_step),
            step_floor: self.step_floor.unwrap_or(d.step_floor),
            max_iter: self.max_iter.unwrap_or(d.max_iter),
            ..d
        }
    }

    pub fn max_dim(&self) -> usize {
        self.max_dim.unwrap_or(DEFAULT_MAX_DIM)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProblemFile {
    pub schema: String,
    pub m: usize,
    pub n: usize,
    #[serde(default = "distinguished")]
    pub parities: String,
    pub sites: Vec<SiteSpec>,
    /// Root counts per simple root; absent means "all Bethe vectors".
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub l: Option<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub config: Option<ConfigSpec>,
}

fn distinguished() -> String {
    "distinguished".into()
}

fn check_schema(schema: &str) -> Result<()> {
    if schema != SCHEMA {
        return Err(Error::Parse(format!("unsupported schema {schema:?}, expected {SCHEMA:?}")));
    }
    Ok(())
}

impl ProblemFile {
    pub fn parse(text: &str) -> Result<Self> {
        let p: ProblemFile = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        check_schema(&p.schema)?;
        Ok(p)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("problem serializes")
    }

    pub fn parity_sequence(&self) -> Result<ParitySequence> {
        ParitySequence::resolve(&self.parities, self.m, self.n)
    }

    pub fn config(&self) -> ConfigSpec {
        self.config.clone().unwrap_or_default()
    }

    /// Builds the chain, sharing one module among sites with the same spec.
    pub fn chain(&self) -> Result<ChainSpec> {
        let ps = self.parity_sequence()?;
        if self.sites.is_empty() {
            return Err(Error::Parse("no sites".into()));
        }
        let mut built: HashMap<String, Arc<RepModule>> = HashMap::new();
        let mut sites = Vec::with_capacity(self.sites.len());
        for s in &self.sites {
            let key = serde_json::to_string(&s.module).expect("module serializes");
            let module = match built.get(&key) {
                Some(m) => m.clone(),
                None => {
                    let m = Arc::new(s.module.build(&ps)?);
                    built.insert(key, m.clone());
                    m
                }
            };
            sites.push(Site { z: s.z.to_gaussian()?, module });
        }
        ChainSpec::new(sites)
    }
}

/// Complex number as a pair of decimal strings.
pub fn complex_text(z: Complex64) -> [String; 2] {
    [float_text(z.re), float_text(z.im)]
}

/// Shortest decimal string that parses back to the same `f64`.
pub fn float_text(x: f64) -> String {
    format!("{x:?}")
}

pub fn parse_float(s: &str) -> Result<f64> {
    s.trim().parse::<f64>().map_err(|_| Error::Parse(format!("not a number: {s:?}")))
}

pub fn parse_complex(pair: &[String; 2]) -> Result<Complex64> {
    Ok(Complex64::new(parse_float(&pair[0])?, parse_float(&pair[1])?))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RootsEntry {
    pub l: Vec<usize>,
    /// Roots in colour order, as `[re, im]`.
    pub roots: Vec<[String; 2]>,
}

impl RootsEntry {
    pub fn complex_roots(&self) -> Result<Vec<Complex64>> {
        self.roots.iter().map(parse_complex).collect()
    }

    /// The roots as exact Gaussian rationals, reading each decimal exactly.
    pub fn exact_roots(&self) -> Result<Vec<GaussianRational>> {
        self.roots.iter().map(|[re, im]| Ok(GaussianRational::new(parse_rational(re)?, parse_rational(im)?))).collect()
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RootsFile {
    pub schema: String,
    pub solutions: Vec<RootsEntry>,
}

impl RootsFile {
    pub fn parse(text: &str) -> Result<Self> {
        // reports carry the same solution list, so they are accepted too
        let v: serde_json::Value = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        let is_report = v.get("method").is_some();
        let f: RootsFile = if is_report {
            let r: SolveReport = serde_json::from_value(v).map_err(|e| Error::Parse(e.to_string()))?;
            r.roots_file()
        } else {
            serde_json::from_value(v).map_err(|e| Error::Parse(e.to_string()))?
        };
        check_schema(&f.schema)?;
        Ok(f)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("roots serialize")
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SolutionEntry {
    pub l: Vec<usize>,
    pub roots: Vec<[String; 2]>,
    /// Exact roots, when known in closed form.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub exact_roots: Option<Vec<String>>,
    pub weight: Vec<String>,
    pub eigenvalues: Vec<[String; 2]>,
    pub residual: String,
    pub singular_residual: String,
    pub eigen_residual: String,
    pub norm2: [String; 2],
    #[serde(default)]
    pub zero_vector: bool,
    pub verified: bool,
    /// Pieri chain label, for solutions found by continuation.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub chain: Option<Vec<Vec<usize>>>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct UnresolvedEntry {
    pub chain: Vec<Vec<usize>>,
    pub reason: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SolveReport {
    pub schema: String,
    pub method: String,
    pub parities: String,
    pub dim: usize,
    pub solutions: Vec<SolutionEntry>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub unresolved: Vec<UnresolvedEntry>,
    /// Dimension of the singular subspace, when it was computed.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub singular_dimension: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub brute_force_match: Option<bool>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub simple_spectrum: Option<bool>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
}

impl SolveReport {
    pub fn parse(text: &str) -> Result<Self> {
        let r: SolveReport = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        check_schema(&r.schema)?;
        Ok(r)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn all_verified(&self) -> bool {
        self.unresolved.is_empty() && self.solutions.iter().all(|s| s.verified)
    }

    pub fn roots_file(&self) -> RootsFile {
        RootsFile {
            schema: self.schema.clone(),
            solutions: self.solutions.iter().map(|s| RootsEntry { l: s.l.clone(), roots: s.roots.clone() }).collect(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VerifyEntry {
    pub l: Vec<usize>,
    pub residual: String,
    /// Residual is exactly zero at the roots read as exact rationals.
    pub exact_residual_zero: bool,
    pub zero_vector: bool,
    pub singular_residual: String,
    pub eigenvalues: Vec<[String; 2]>,
    pub eigen_residual: String,
    pub norm2: [String; 2],
    pub residual_ok: bool,
    pub singular: bool,
    pub eigen_ok: bool,
    pub pass: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub pole: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VerifyReport {
    pub schema: String,
    pub entries: Vec<VerifyEntry>,
    pub pass: bool,
}

impl VerifyReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const PROBLEM: &str = r#"{
        "schema": "supergaudin/1",
        "m": 2, "n": 1, "parities": "010",
        "sites": [
            {"z": ["1", "0"], "module": "box"},
            {"z": "0", "module": {"dual_hook": [1, 1]}},
            {"z": [2, "1/2"], "module": [2]}
        ],
        "l": [1, 0],
        "config": {"seed": 7, "tol": 1e-12}
    }"#;

    #[test]
    fn problem_round_trip() {
        let p = ProblemFile::parse(PROBLEM).unwrap();
        assert_eq!(p.config().solver_config().seed, 7);
        let again = ProblemFile::parse(&p.to_json()).unwrap();
        assert_eq!(again, p);
        assert_eq!(again.to_json(), p.to_json());
        let chain = p.chain().unwrap();
        assert_eq!(chain.len(), 3);
        assert_eq!(chain.dim(), 3 * 4 * 5);
    }

    #[test]
    fn rejects_bad_input() {
        assert!(ProblemFile::parse("{}").is_err());
        assert!(ProblemFile::parse(&PROBLEM.replace("supergaudin/1", "other/2")).is_err());
        let dup = PROBLEM.replace(r#""z": "0""#, r#""z": ["1", "0"]"#);
        assert!(matches!(ProblemFile::parse(&dup).unwrap().chain(), Err(Error::DuplicateSite(0, 1))));
        let bad = PROBLEM.replace(r#""parities": "010""#, r#""parities": "100""#);
        assert!(ProblemFile::parse(&bad).unwrap().chain().is_err());
        let unknown = PROBLEM.replace(r#""module": "box""#, r#""module": "boxes""#);
        assert!(ProblemFile::parse(&unknown).unwrap().chain().is_err());
    }

    #[test]
    fn floats_round_trip() {
        for x in [0.5, -1e-300, 1.0 / 3.0, 12345.678e30, 0.0] {
            assert_eq!(parse_float(&float_text(x)).unwrap(), x);
        }
        let entry = RootsEntry { l: vec![1], roots: vec![complex_text(Complex64::new(0.5, -0.25))] };
        assert_eq!(entry.exact_roots().unwrap()[0], GaussianRational::new(crate::scalar::ratio(1, 2), crate::scalar::ratio(-1, 4)));
    }
}
