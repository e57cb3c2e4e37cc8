//! Closed-form Bethe solutions: two-point chains `C^{m|n} ⊗ V(mu)`, the
//! decoupled gl(1|1) chain, and the one-site gl(2|1) chain with both simple
//! roots odd.

use num::traits::Signed;

use crate::error::{Error, Result};
use crate::poly::{numeric_roots, Poly};
use crate::reps::{box_addable, hook_to_weight, HookPartition};
use crate::scalar::{rat, Complex64, GaussianRational, QuadraticRational, Rational, Scalar};
use crate::superalg::ParitySequence;

/// Roots for the chain with the defining module at `1` and `V(mu)` at `0`,
/// for the summand `lambda + eps_a`. Root `s` has colour `s`; `a = 0` gives
/// no roots.
pub fn two_point_solve(mu: &HookPartition, a: usize, ps: &ParitySequence) -> Result<Vec<Rational>> {
    let lambda = hook_to_weight(mu, ps)?;
    if a >= ps.len() || !box_addable(ps, &lambda, a)? {
        return Err(Error::NoSuchComponent(format!("no summand {mu} + box at coordinate {a} for {ps}")));
    }
    let sa = rat(ps.sign(a));
    let mut roots = Vec::with_capacity(a);
    let mut prod = Rational::one();
    for s in 0..a {
        let tail: i64 = (s + 1..a).map(|r| ps.sign(r)).sum();
        let shifted = rat(ps.sign(s)) * &lambda.0[s] - &sa * &lambda.0[a] + rat(tail);
        let den = rat(ps.sign(s)) + &shifted;
        if den.is_zero() {
            return Err(Error::Internal(format!("degenerate recursion at step {s}")));
        }
        prod = prod * shifted / den;
        roots.push(prod.clone());
    }
    Ok(roots)
}

/// Moves two-point roots from sites `(1, 0)` to `(z_def, z_other)`.
pub fn map_two_point(roots: &[Rational], z_def: &GaussianRational, z_other: &GaussianRational) -> Vec<GaussianRational> {
    let d = z_def.clone() - z_other.clone();
    roots.iter().map(|t| z_other.clone() + d.clone() * GaussianRational::real(t.clone())).collect()
}

/// Roots of the decoupled gl(1|1) equation `sum_j h_j / (t - z_j) = 0`.
#[derive(Clone, Debug)]
pub struct Gl11Roots {
    /// `sum_j h_j prod_{k != j} (t - z_k)`.
    pub numerator: Poly<GaussianRational>,
    pub roots: Vec<Complex64>,
    /// The degree dropped below `N - 1` because `sum_j h_j = 0`.
    pub degenerate: bool,
}

pub fn gl11_solve(h: &[Rational], z: &[GaussianRational]) -> Result<Gl11Roots> {
    if h.len() != z.len() {
        return Err(Error::DimensionMismatch(format!("{} weights for {} sites", h.len(), z.len())));
    }
    if h.iter().any(|x| x.is_zero()) {
        return Err(Error::Parse("gl(1|1) site with h = 0".into()));
    }
    let mut p = Poly::<GaussianRational>::zero();
    for (j, hj) in h.iter().enumerate() {
        let others: Vec<GaussianRational> =
            z.iter().enumerate().filter(|&(k, _)| k != j).map(|(_, zk)| zk.clone()).collect();
        p = p.add(&Poly::from_roots(&others).scale(&GaussianRational::real(hj.clone())));
    }
    let expected = z.len().saturating_sub(1);
    let degenerate = p.degree().unwrap_or(0) < expected;
    let pc = Poly::new(p.coeffs().iter().map(|c| c.to_complex()).collect());
    Ok(Gl11Roots { roots: numeric_roots(&pc), numerator: p, degenerate })
}

/// Exact roots when the numerator has real rational coefficients, degree at
/// most two and real roots.
pub fn gl11_exact_roots(sol: &Gl11Roots) -> Option<Vec<QuadraticRational>> {
    let c = sol.numerator.coeffs();
    if c.iter().any(|x| !x.im.is_zero()) {
        return None;
    }
    let c: Vec<Rational> = c.iter().map(|x| x.re.clone()).collect();
    match c.len() {
        0 | 1 => Some(Vec::new()),
        2 => Some(vec![QuadraticRational::rational(-c[0].clone() / c[1].clone())]),
        3 => {
            let disc = &c[1] * &c[1] - rat(4) * &c[0] * &c[2];
            if disc.is_negative() {
                return None;
            }
            let two_a = rat(2) * &c[2];
            let mid = -c[1].clone() / &two_a;
            let half = Rational::one() / &two_a;
            let r1 = QuadraticRational::new(mid.clone(), -half.clone(), &disc);
            let r2 = QuadraticRational::new(mid, half, &disc);
            Some(vec![r1, r2])
        }
        _ => None,
    }
}

/// Per-root factors `sum_i h_i / (t_k - z_i)^2`.
pub fn gl11_norms<T: Scalar>(h: &[Rational], z: &[T], roots: &[T]) -> Vec<T> {
    roots
        .iter()
        .map(|t| {
            h.iter().zip(z).fold(T::zero(), |s, (hi, zi)| {
                let d = t.clone() - zi.clone();
                s + T::from_rational(hi) / (d.clone() * d)
            })
        })
        .collect()
}

/// Squared Shapovalov norm of the Bethe vector built from `roots`.
pub fn gl11_bethe_vector_norm<T: Scalar>(h: &[Rational], z: &[T], roots: &[T]) -> T {
    gl11_norms(h, z, roots).into_iter().fold(T::one(), |p, x| p * x)
}

/// A family of one-site gl(2|1) solutions with `l` roots of each colour:
/// the first colour at the roots of `u^l - r1 c`, the second at the roots of
/// `u^l - r2 c`, for any nonzero `c`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OnePointFamily {
    pub r1: i64,
    pub r2: i64,
    pub l: usize,
}

impl OnePointFamily {
    fn poly(&self, r: i64, c: &Rational) -> Poly<Rational> {
        let mut coeffs = vec![Rational::zero(); self.l + 1];
        coeffs[0] = -(rat(r) * c);
        coeffs[self.l] = coeffs[self.l].clone() + Rational::one();
        Poly::new(coeffs)
    }

    /// Polynomial whose roots are the first-colour roots.
    pub fn first_poly(&self, c: &Rational) -> Poly<Rational> {
        self.poly(self.r1, c)
    }

    /// Polynomial whose roots are the second-colour roots.
    pub fn second_poly(&self, c: &Rational) -> Poly<Rational> {
        self.poly(self.r2, c)
    }

    /// Numerical roots `(t, s)` at parameter `c`.
    pub fn roots(&self, c: Complex64) -> (Vec<Complex64>, Vec<Complex64>) {
        let lroot = |r: i64| -> Vec<Complex64> {
            if self.l == 0 {
                return Vec::new();
            }
            let base = (c * r as f64).powf(1.0 / self.l as f64);
            (0..self.l)
                .map(|k| base * Complex64::from_polar(1.0, 2.0 * std::f64::consts::PI * k as f64 / self.l as f64))
                .collect()
        };
        (lroot(self.r1), lroot(self.r2))
    }

    /// Exact rational roots, available for `l <= 1`.
    pub fn rational_roots(&self, c: &Rational) -> Option<(Vec<Rational>, Vec<Rational>)> {
        match self.l {
            0 => Some((Vec::new(), Vec::new())),
            1 => Some((vec![rat(self.r1) * c], vec![rat(self.r2) * c])),
            _ => None,
        }
    }
}

/// Admissible solutions of the one-site gl(2|1) equations at `z = 0` for the
/// typical module with `H_1 v = r1 v`, `H_2 v = r2 v`.
pub fn gl21_one_point(r1: i64, r2: i64, l1: usize, l2: usize) -> Result<Vec<OnePointFamily>> {
    if !(r1 > r2 && r2 > 0) {
        return Err(Error::Parse(format!("need r1 > r2 > 0, got r1={r1}, r2={r2}")));
    }
    if l1 != l2 {
        return Ok(Vec::new());
    }
    if l1 == 0 || l1 as i64 == r1 - r2 {
        Ok(vec![OnePointFamily { r1, r2, l: l1 }])
    } else {
        Ok(Vec::new())
    }
}

/// Exact certificate that `family` at parameter `c` solves the equations:
/// with `y1`, `y2` the two root polynomials, `y1 | -r1 y2 + u y2'` and
/// `y2 | r2 y1 + u y1'`; both squarefree, coprime and nonvanishing at `0`.
pub fn gl21_verify_family(family: &OnePointFamily, c: &Rational) -> bool {
    if family.l == 0 {
        return true;
    }
    if c.is_zero() {
        return false;
    }
    let y1 = family.first_poly(c);
    let y2 = family.second_poly(c);
    let u = Poly::new(vec![Rational::zero(), Rational::one()]);
    let e1 = y2.scale(&rat(-family.r1)).add(&u.mul(&y2.derivative()));
    let e2 = y1.scale(&rat(family.r2)).add(&u.mul(&y1.derivative()));
    let squarefree = |p: &Poly<Rational>| p.gcd(&p.derivative()).degree() == Some(0);
    let zero = Rational::zero();
    y1.divides(&e1)
        && y2.divides(&e2)
        && squarefree(&y1)
        && squarefree(&y2)
        && y1.gcd(&y2).degree() == Some(0)
        && !y1.eval(&zero).is_zero()
        && !y2.eval(&zero).is_zero()
}

/// Coefficients of the one-site gl(2|1) weight function on its surviving
/// words, with colours `0 = F_1`, `1 = F_2`.
#[derive(Clone, Debug, PartialEq)]
pub enum Gl21ClosedForm<T> {
    /// Equal root counts: coefficients of `(F_1F_2)^l v` and `(F_2F_1)^l v`.
    Balanced { f1f2: T, f2f1: T },
    /// Root counts differing by one: the coefficient of the alternating word
    /// starting and ending with `first_colour`.
    Unbalanced { first_colour: usize, coeff: T },
}

impl<T: Scalar> Gl21ClosedForm<T> {
    /// The words with their coefficients, leftmost operator first.
    pub fn words(&self, l1: usize, l2: usize) -> Vec<(Vec<usize>, T)> {
        let alt = |start: usize, len: usize| (0..len).map(|i| (start + i) % 2).collect::<Vec<_>>();
        match self {
            Gl21ClosedForm::Balanced { f1f2, f2f1 } => {
                if l1 == 0 {
                    vec![(Vec::new(), f1f2.clone())]
                } else {
                    vec![(alt(0, 2 * l1), f1f2.clone()), (alt(1, 2 * l1), f2f1.clone())]
                }
            }
            Gl21ClosedForm::Unbalanced { first_colour, coeff } => vec![(alt(*first_colour, l1 + l2), coeff.clone())],
        }
    }
}

fn vandermonde<T: Scalar>(x: &[T]) -> T {
    let mut p = T::one();
    for i in 0..x.len() {
        for j in i + 1..x.len() {
            p = p * (x[i].clone() - x[j].clone());
        }
    }
    p
}

fn cross<T: Scalar>(x: &[T], y: &[T]) -> T {
    x.iter().fold(T::one(), |p, a| y.iter().fold(p, |q, b| q * (a.clone() - b.clone())))
}

fn to_site<T: Scalar>(x: &[T], z: &T) -> T {
    x.iter().fold(T::one(), |p, a| p * (a.clone() - z.clone()))
}

fn parity_sign<T: Scalar>(k: usize) -> T {
    if k.is_multiple_of(2) {
        T::one()
    } else {
        -T::one()
    }
}

/// Closed form of the one-site gl(2|1) weight function at `z` with first
/// colour roots `t` and second colour roots `s`.
pub fn gl21_closed_form<T: Scalar>(z: &T, t: &[T], s: &[T]) -> Result<Gl21ClosedForm<T>> {
    let (l1, l2) = (t.len(), s.len());
    if l1 == l2 {
        let l = l1;
        let common = parity_sign::<T>(l) * vandermonde(s) * vandermonde(t) / cross(s, t);
        return Ok(Gl21ClosedForm::Balanced {
            f1f2: common.clone() / to_site(s, z),
            f2f1: common / to_site(t, z),
        });
    }
    let (long, short, first_colour) = if l1 == l2 + 1 {
        (t, s, 0)
    } else if l2 == l1 + 1 {
        (s, t, 1)
    } else {
        return Err(Error::ZeroFunction);
    };
    let coeff = vandermonde(short) * vandermonde(long) / (cross(long, short) * to_site(long, z));
    Ok(Gl21ClosedForm::Unbalanced { first_colour, coeff })
}
