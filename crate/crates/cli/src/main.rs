//! `supergaudin` command-line tool.
//!
//! Exit codes: 0 all checks pass, 1 a check failed, 2 bad input, 3 size cap
//! exceeded, 4 unresolved continuation paths, 5 pole collision.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde_json::json;

use supergaudin::bethe::gl21_one_point;
use supergaudin::io::{
    complex_text, ConfigSpec, Coordinate, ModuleSpec, Number, ProblemFile, RootsFile, SiteSpec, SolveReport,
    TaggedModule, VerifyReport, SCHEMA,
};
use supergaudin::pipeline::{solve_problem, verify_roots};
use supergaudin::scalar::{format_rational, parse_rational, Complex64, Scalar};
use supergaudin::superalg::{cartan_matrix, ParitySequence};
use supergaudin::Error;

#[derive(Parser)]
#[command(name = "supergaudin", version, about = "Bethe ansatz for gl(m|n) Gaudin models")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone, Default)]
struct Common {
    /// Emit machine-readable JSON instead of a table.
    #[arg(long, global = true)]
    json: bool,
    /// Random seed for start systems.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Newton tolerance on the relative residual.
    #[arg(long, global = true)]
    tol: Option<f64>,
    /// Largest tensor-space dimension to build.
    #[arg(long, global = true)]
    max_dim: Option<usize>,
}

#[derive(Subcommand)]
enum Command {
    /// Cartan matrix, symmetrized form and simple-root parities.
    Structure {
        m: usize,
        n: usize,
        #[arg(long, default_value = "distinguished")]
        parities: String,
        #[command(flatten)]
        common: Common,
    },
    /// Solve the Bethe ansatz equations of a problem file.
    Solve {
        problem: PathBuf,
        /// Also write the JSON report here.
        #[arg(long)]
        out: Option<PathBuf>,
        #[command(flatten)]
        common: Common,
    },
    /// Check root sets against a problem file.
    Verify {
        problem: PathBuf,
        roots: PathBuf,
        #[command(flatten)]
        common: Common,
    },
    /// All Bethe vectors of a chain of defining modules.
    Complete {
        m: usize,
        n: usize,
        /// Site coordinates ("p/q" or "re,im"); repeat the flag or quote a space-separated list.
        #[arg(long, required = true, allow_hyphen_values = true)]
        z: Vec<String>,
        #[arg(long, default_value = "distinguished")]
        parities: String,
        #[command(flatten)]
        common: Common,
    },
    /// gl(1|1) chain with modules L(r, s) at the given sites.
    Gl11 {
        /// Site coordinates, as for `complete`.
        #[arg(long, required = true, allow_hyphen_values = true)]
        z: Vec<String>,
        /// First highest-weight entry per site (defaults to 1).
        #[arg(long, allow_hyphen_values = true)]
        r: Vec<String>,
        /// Second highest-weight entry per site (defaults to 0).
        #[arg(long, allow_hyphen_values = true)]
        s: Vec<String>,
        /// Number of roots; all counts when omitted.
        #[arg(long)]
        l: Option<usize>,
        #[command(flatten)]
        common: Common,
    },
    /// One-point gl(2|1) solution families for the module of weight (r1 - r2, r2, 0).
    Gl21 {
        #[arg(long)]
        r1: i64,
        #[arg(long)]
        r2: i64,
        /// Family parameter.
        #[arg(long, default_value = "1")]
        c: String,
        /// Largest root count per colour to list.
        #[arg(long)]
        max_l: Option<usize>,
        #[command(flatten)]
        common: Common,
    },
}

/// Failure with its exit code.
struct Failure {
    code: u8,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::Parse(_)
            | Error::InvalidParity(_)
            | Error::InvalidHook(_)
            | Error::DuplicateSite(..)
            | Error::DimensionMismatch(_)
            | Error::Index(_)
            | Error::OneDimensionalNotPolynomial(..)
            | Error::FieldMismatch(_) => 2,
            Error::TooLarge(_) => 3,
            Error::ContinuationStall(_) => 4,
            Error::PoleCollision(_) => 5,
            _ => 1,
        };
        Failure { code, message: e.to_string() }
    }
}

fn input_error(message: impl Into<String>) -> Failure {
    Failure { code: 2, message: message.into() }
}

type Outcome = Result<u8, Failure>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}

/// Flattens repeated flags whose values may themselves be space-separated lists.
fn split(values: Vec<String>) -> Vec<String> {
    values.iter().flat_map(|v| v.split_whitespace().map(String::from)).collect()
}

fn run(command: Command) -> Outcome {
    match command {
        Command::Structure { m, n, parities, common } => structure(m, n, &parities, &common),
        Command::Solve { problem, out, common } => {
            let p = apply(read_problem(&problem)?, &common);
            solve(&p, out.as_deref(), &common)
        }
        Command::Verify { problem, roots, common } => verify(&problem, &roots, &common),
        Command::Complete { m, n, z, parities, common } => {
            let sites = coordinates(&split(z))?
                .into_iter()
                .map(|z| SiteSpec { z, module: ModuleSpec::Named("box".into()) })
                .collect();
            solve(&apply(problem(m, n, parities, sites, None), &common), None, &common)
        }
        Command::Gl11 { z, r, s, l, common } => {
            let z = coordinates(&split(z))?;
            let (r, s) = (split(r), split(s));
            let entries = |v: &[String], default: i64, name: &str| -> Result<Vec<Number>, Failure> {
                match v.len() {
                    0 => Ok(vec![Number::Int(default); z.len()]),
                    k if k == z.len() => Ok(v.iter().map(|x| Number::Text(x.clone())).collect()),
                    k => Err(input_error(format!("--{name} has {k} entries for {} sites", z.len()))),
                }
            };
            let (r, s) = (entries(&r, 1, "r")?, entries(&s, 0, "s")?);
            let sites = z
                .into_iter()
                .zip(r.into_iter().zip(s))
                .map(|(z, (r, s))| SiteSpec { z, module: ModuleSpec::Tagged(TaggedModule::Gl11([r, s])) })
                .collect();
            solve(&apply(problem(1, 1, "01".into(), sites, l.map(|k| vec![k])), &common), None, &common)
        }
        Command::Gl21 { r1, r2, c, max_l, common } => gl21(r1, r2, &c, max_l, &common),
    }
}

fn problem(m: usize, n: usize, parities: String, sites: Vec<SiteSpec>, l: Option<Vec<usize>>) -> ProblemFile {
    ProblemFile { schema: SCHEMA.into(), m, n, parities, sites, l, config: None }
}

/// Command-line flags override the file's solver settings.
fn apply(mut p: ProblemFile, common: &Common) -> ProblemFile {
    let mut cfg = p.config.take().unwrap_or_default();
    cfg.seed = common.seed.or(cfg.seed);
    cfg.tol = common.tol.or(cfg.tol);
    cfg.max_dim = common.max_dim.or(cfg.max_dim);
    p.config = (cfg != ConfigSpec::default()).then_some(cfg);
    p
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| input_error(format!("{}: {e}", path.display())))
}

fn read_problem(path: &Path) -> Result<ProblemFile, Failure> {
    Ok(ProblemFile::parse(&read(path)?)?)
}

fn coordinates(z: &[String]) -> Result<Vec<Coordinate>, Failure> {
    z.iter()
        .map(|s| {
            let parts: Vec<&str> = s.split(',').map(str::trim).collect();
            for p in &parts {
                parse_rational(p)?;
            }
            Ok(match parts.as_slice() {
                [re] => Coordinate::Real(Number::Text(re.to_string())),
                [re, im] => Coordinate::Pair([Number::Text(re.to_string()), Number::Text(im.to_string())]),
                _ => return Err(input_error(format!("bad coordinate {s:?}"))),
            })
        })
        .collect()
}

fn matrix_rows(m: &[Vec<i64>]) -> String {
    m.iter().map(|r| format!("  {r:?}")).collect::<Vec<_>>().join("\n")
}

fn structure(m: usize, n: usize, parities: &str, common: &Common) -> Outcome {
    let ps = ParitySequence::resolve(parities, m, n)?;
    let rd = cartan_matrix(&ps);
    let root_parities: Vec<&str> =
        rd.simple_root_parities.iter().map(|p| if p.is_odd() { "odd" } else { "even" }).collect();
    if common.json {
        let v = json!({
            "schema": SCHEMA,
            "parities": ps.to_string(),
            "cartan": rd.cartan,
            "symmetrized": rd.symmetrized,
            "simple_root_parities": root_parities,
        });
        println!("{}", serde_json::to_string_pretty(&v).expect("json"));
    } else {
        println!("gl({m}|{n}) with parity sequence {ps}");
        if ps.rank() == 0 {
            println!("no simple roots");
        } else {
            println!("Cartan matrix (row x, column y: alpha_x(H_y)):\n{}", matrix_rows(&rd.cartan));
            println!("symmetrized Cartan matrix:\n{}", matrix_rows(&rd.symmetrized));
            println!("simple-root parities: {}", root_parities.join(" "));
        }
    }
    Ok(0)
}

fn complex(pair: &[String; 2]) -> String {
    if pair[1].parse::<f64>().map(|x| x == 0.0).unwrap_or(false) {
        pair[0].clone()
    } else {
        format!("{}{}{}i", pair[0], if pair[1].starts_with('-') { "" } else { "+" }, pair[1])
    }
}

fn list(items: &[[String; 2]]) -> String {
    items.iter().map(complex).collect::<Vec<_>>().join(", ")
}

fn print_solve(rep: &SolveReport) {
    println!("method: {}  parities: {}  dimension: {}", rep.method, rep.parities, rep.dim);
    println!("{} solution(s)", rep.solutions.len());
    for (i, s) in rep.solutions.iter().enumerate() {
        let status = match (s.verified, s.zero_vector) {
            (true, true) => "verified (zero vector)",
            (true, false) => "verified",
            (false, _) => "FAILED",
        };
        println!("[{i}] l = {:?}  {status}", s.l);
        if let Some(c) = &s.chain {
            println!("    chain: {c:?}");
        }
        match &s.exact_roots {
            Some(e) => println!("    roots: {}", e.join(", ")),
            None => println!("    roots: {}", list(&s.roots)),
        }
        println!("    weight: ({})", s.weight.join(", "));
        println!("    eigenvalues: {}", list(&s.eigenvalues));
        println!(
            "    residual {}  singular {}  eigen {}  norm2 {}",
            s.residual,
            s.singular_residual,
            s.eigen_residual,
            complex(&s.norm2)
        );
    }
    for u in &rep.unresolved {
        println!("unresolved chain {:?}: {}", u.chain, u.reason);
    }
    if let Some(d) = rep.singular_dimension {
        let nonzero = rep.solutions.iter().filter(|s| !s.zero_vector).count();
        println!("singular subspace dimension: {d}  Bethe vectors: {nonzero}");
    }
    if let Some(b) = rep.brute_force_match {
        println!("matches direct diagonalization: {b}");
    }
    if let Some(b) = rep.simple_spectrum {
        println!("simple joint spectrum: {b}");
    }
    for n in &rep.notes {
        println!("note: {n}");
    }
}

fn solve(p: &ProblemFile, out: Option<&Path>, common: &Common) -> Outcome {
    let rep = solve_problem(p)?;
    let text = rep.to_json();
    if let Some(path) = out {
        fs::write(path, &text).map_err(|e| Failure { code: 1, message: format!("{}: {e}", path.display()) })?;
    }
    if common.json {
        println!("{text}");
    } else {
        print_solve(&rep);
    }
    if !rep.unresolved.is_empty() {
        return Ok(4);
    }
    let complete = rep.singular_dimension.is_none_or(|d| {
        rep.solutions.iter().filter(|s| !s.zero_vector).count() == d
    });
    let checks = [rep.brute_force_match, rep.simple_spectrum].iter().all(|c| c.unwrap_or(true));
    Ok(if rep.all_verified() && complete && checks { 0 } else { 1 })
}

fn print_verify(rep: &VerifyReport) {
    for (i, e) in rep.entries.iter().enumerate() {
        println!("[{i}] l = {:?}  {}", e.l, if e.pass { "pass" } else { "FAIL" });
        if let Some(p) = &e.pole {
            println!("    pole: {p}");
        }
        println!("    residual {} ({})", e.residual, if e.residual_ok { "ok" } else { "too large" });
        if e.exact_residual_zero {
            println!("    residual vanishes exactly at the rational roots");
        }
        if e.zero_vector {
            println!("    Bethe vector is zero");
        }
        println!("    singular residual {} ({})", e.singular_residual, if e.singular { "ok" } else { "too large" });
        println!("    eigenvalues: {}", list(&e.eigenvalues));
        println!("    eigen residual {} ({})", e.eigen_residual, if e.eigen_ok { "ok" } else { "too large" });
        println!("    norm2 {}", complex(&e.norm2));
    }
    println!("{}", if rep.pass { "all checks pass" } else { "some checks failed" });
}

fn verify(problem: &Path, roots: &Path, common: &Common) -> Outcome {
    let p = apply(read_problem(problem)?, common);
    let r = RootsFile::parse(&read(roots)?)?;
    let rep = verify_roots(&p, &r)?;
    if common.json {
        println!("{}", rep.to_json());
    } else {
        print_verify(&rep);
    }
    Ok(if rep.entries.iter().any(|e| e.pole.is_some()) {
        5
    } else if rep.pass {
        0
    } else {
        1
    })
}

fn gl21(r1: i64, r2: i64, c: &str, max_l: Option<usize>, common: &Common) -> Outcome {
    let c = parse_rational(c)?;
    let max_l = max_l.unwrap_or((r1 - r2).max(0) as usize);
    let mut rows = Vec::new();
    for l in 0..=max_l {
        for fam in gl21_one_point(r1, r2, l, l)? {
            let (t, s): (Vec<String>, Vec<String>) = match fam.rational_roots(&c) {
                Some((t, s)) => (t.iter().map(format_rational).collect(), s.iter().map(format_rational).collect()),
                None => {
                    let (t, s) = fam.roots(c.to_complex());
                    let text = |v: Vec<Complex64>| v.into_iter().map(|x| complex(&complex_text(x))).collect();
                    (text(t), text(s))
                }
            };
            rows.push((fam.l, t, s));
        }
    }
    if common.json {
        let v: Vec<_> = rows.iter().map(|(l, t, s)| json!({"l": [l, l], "first": t, "second": s})).collect();
        let doc = json!({"schema": SCHEMA, "r1": r1, "r2": r2, "c": format_rational(&c), "families": v});
        println!("{}", serde_json::to_string_pretty(&doc).expect("json"));
    } else {
        println!("gl(2|1), one site at 0, highest weight ({}, {r2}, 0), c = {}", r1 - r2, format_rational(&c));
        if rows.is_empty() {
            println!("no admissible solutions with l1 = l2 <= {max_l}");
        }
        for (l, t, s) in &rows {
            println!("l = ({l}, {l}): first roots [{}], second roots [{}]", t.join(", "), s.join(", "));
        }
    }
    Ok(0)
}
