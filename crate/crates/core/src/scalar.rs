//! Scalar fields: exact rationals, Gaussian rationals, real quadratic
//! extensions `Q(sqrt d)`, and double-precision complex numbers.
//!
//! Algorithms that must run both exactly and in floating point are written
//! against the [`Scalar`] trait.

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num::bigint::BigInt;
use num::rational::BigRational;
use num::traits::{One, Signed, ToPrimitive, Zero};
use num::Complex;

use crate::error::{Error, Result};

pub type Rational = BigRational;
pub type Complex64 = Complex<f64>;

/// Relative threshold below which a floating-point denominator counts as zero.
pub const POLE_TOL: f64 = 1e-12;

/// A field the Bethe ansatz machinery can be evaluated over.
pub trait Scalar:
    Clone
    + fmt::Debug
    + PartialEq
    + Send
    + Sync
    + 'static
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
{
    const EXACT: bool;

    fn zero() -> Self;
    fn one() -> Self;
    fn is_zero(&self) -> bool;
    fn from_rational(q: &Rational) -> Self;
    /// Embeds a Gaussian rational, or `None` when the field cannot hold it.
    fn try_from_gaussian(g: &GaussianRational) -> Option<Self>;
    fn to_complex(&self) -> Complex64;

    fn from_i64(n: i64) -> Self {
        Self::from_rational(&Rational::from_integer(BigInt::from(n)))
    }

    fn abs_approx(&self) -> f64 {
        self.to_complex().norm()
    }

    /// Zero for exact fields; below `POLE_TOL * scale` in modulus otherwise.
    fn is_negligible(&self, scale: f64) -> bool {
        if Self::EXACT {
            self.is_zero()
        } else {
            self.abs_approx() <= POLE_TOL * scale.max(1.0)
        }
    }
}

pub fn rat(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn ratio(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn rational_to_f64(q: &Rational) -> f64 {
    q.to_f64().unwrap_or_else(|| {
        // very large numerators or denominators
        let n = q.numer().to_f64().unwrap_or(f64::NAN);
        let d = q.denom().to_f64().unwrap_or(f64::NAN);
        n / d
    })
}

impl Scalar for Rational {
    const EXACT: bool = true;
    fn zero() -> Self {
        Zero::zero()
    }
    fn one() -> Self {
        One::one()
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn from_rational(q: &Rational) -> Self {
        q.clone()
    }
    fn try_from_gaussian(g: &GaussianRational) -> Option<Self> {
        Zero::is_zero(&g.im).then(|| g.re.clone())
    }
    fn to_complex(&self) -> Complex64 {
        Complex64::new(rational_to_f64(self), 0.0)
    }
}

impl Scalar for Complex64 {
    const EXACT: bool = false;
    fn zero() -> Self {
        Complex64::new(0.0, 0.0)
    }
    fn one() -> Self {
        Complex64::new(1.0, 0.0)
    }
    fn is_zero(&self) -> bool {
        self.re == 0.0 && self.im == 0.0
    }
    fn from_rational(q: &Rational) -> Self {
        Complex64::new(rational_to_f64(q), 0.0)
    }
    fn try_from_gaussian(g: &GaussianRational) -> Option<Self> {
        Some(g.to_complex())
    }
    fn to_complex(&self) -> Complex64 {
        *self
    }
}

/// `re + i im` with rational parts.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GaussianRational {
    pub re: Rational,
    pub im: Rational,
}

impl GaussianRational {
    pub fn new(re: Rational, im: Rational) -> Self {
        GaussianRational { re, im }
    }

    pub fn real(re: Rational) -> Self {
        GaussianRational { re, im: Zero::zero() }
    }

    pub fn conj(&self) -> Self {
        GaussianRational::new(self.re.clone(), -self.im.clone())
    }

    pub fn norm_sqr(&self) -> Rational {
        &self.re * &self.re + &self.im * &self.im
    }
}

impl fmt::Display for GaussianRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if Zero::is_zero(&self.im) {
            write!(f, "{}", self.re)
        } else {
            write!(f, "{}+{}i", self.re, self.im)
        }
    }
}

impl Add for GaussianRational {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        GaussianRational::new(self.re + o.re, self.im + o.im)
    }
}

impl Sub for GaussianRational {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        GaussianRational::new(self.re - o.re, self.im - o.im)
    }
}

impl Mul for GaussianRational {
    type Output = Self;
    fn mul(self, o: Self) -> Self {
        GaussianRational::new(
            &self.re * &o.re - &self.im * &o.im,
            &self.re * &o.im + &self.im * &o.re,
        )
    }
}

impl Div for GaussianRational {
    type Output = Self;
    fn div(self, o: Self) -> Self {
        let n = o.norm_sqr();
        assert!(!Zero::is_zero(&n), "division by zero");
        let p = self * o.conj();
        GaussianRational::new(p.re / &n, p.im / n)
    }
}

impl Neg for GaussianRational {
    type Output = Self;
    fn neg(self) -> Self {
        GaussianRational::new(-self.re, -self.im)
    }
}

impl Scalar for GaussianRational {
    const EXACT: bool = true;
    fn zero() -> Self {
        GaussianRational::real(Zero::zero())
    }
    fn one() -> Self {
        GaussianRational::real(One::one())
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(&self.re) && Zero::is_zero(&self.im)
    }
    fn from_rational(q: &Rational) -> Self {
        GaussianRational::real(q.clone())
    }
    fn try_from_gaussian(g: &GaussianRational) -> Option<Self> {
        Some(g.clone())
    }
    fn to_complex(&self) -> Complex64 {
        Complex64::new(rational_to_f64(&self.re), rational_to_f64(&self.im))
    }
}

/// `a + b sqrt(d)` with `d` a squarefree integer other than 0 and 1.
///
/// Values with `b = 0` are compatible with every radicand; combining two
/// values with different nonzero radicands panics.
#[derive(Clone, Debug)]
pub struct QuadraticRational {
    pub a: Rational,
    pub b: Rational,
    pub d: BigInt,
}

impl QuadraticRational {
    pub fn rational(a: Rational) -> Self {
        QuadraticRational { a, b: Zero::zero(), d: BigInt::zero() }
    }

    /// Builds `a + b sqrt(r)` for a rational `r`, reducing the radicand to a
    /// squarefree integer. A perfect square collapses into the rational part.
    pub fn new(a: Rational, b: Rational, r: &Rational) -> Self {
        // sqrt(p/q) = sqrt(p q) / q
        let pq = r.numer() * r.denom();
        let (outside, inside) = squarefree_split(&pq);
        let coeff = b * Rational::new(outside, r.denom().clone());
        if inside.is_one() {
            QuadraticRational::rational(a + coeff)
        } else if inside.is_zero() {
            QuadraticRational::rational(a)
        } else {
            QuadraticRational { a, b: coeff, d: inside }
        }
    }

    fn radicand(&self, o: &Self) -> BigInt {
        match (Zero::is_zero(&self.b), Zero::is_zero(&o.b)) {
            (true, _) => o.d.clone(),
            (_, true) => self.d.clone(),
            _ => {
                assert_eq!(self.d, o.d, "mixed quadratic radicands");
                self.d.clone()
            }
        }
    }

    fn d_rat(d: &BigInt) -> Rational {
        Rational::from_integer(d.clone())
    }

    pub fn conj(&self) -> Self {
        QuadraticRational { a: self.a.clone(), b: -self.b.clone(), d: self.d.clone() }
    }
}

/// Splits `n` as `s^2 * k` with `k` squarefree (sign kept in `k`), by trial
/// division. Returns `(s, k)`.
pub fn squarefree_split(n: &BigInt) -> (BigInt, BigInt) {
    if n.is_zero() {
        return (BigInt::one(), BigInt::zero());
    }
    let sign = if n.is_negative() { -BigInt::one() } else { BigInt::one() };
    let mut rest = n.abs();
    let mut outside = BigInt::one();
    let mut p = BigInt::from(2);
    while &p * &p <= rest {
        let sq = &p * &p;
        while (&rest % &sq).is_zero() {
            rest /= &sq;
            outside *= &p;
        }
        p += 1;
    }
    (outside, sign * rest)
}

impl PartialEq for QuadraticRational {
    fn eq(&self, o: &Self) -> bool {
        if self.a != o.a || self.b != o.b {
            return false;
        }
        Zero::is_zero(&self.b) || self.d == o.d
    }
}

impl Add for QuadraticRational {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        let d = self.radicand(&o);
        QuadraticRational { a: self.a + o.a, b: self.b + o.b, d }
    }
}

impl Sub for QuadraticRational {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        let d = self.radicand(&o);
        QuadraticRational { a: self.a - o.a, b: self.b - o.b, d }
    }
}

impl Mul for QuadraticRational {
    type Output = Self;
    fn mul(self, o: Self) -> Self {
        let d = self.radicand(&o);
        let dr = Self::d_rat(&d);
        QuadraticRational {
            a: &self.a * &o.a + &self.b * &o.b * dr,
            b: &self.a * &o.b + &self.b * &o.a,
            d,
        }
    }
}

impl Div for QuadraticRational {
    type Output = Self;
    fn div(self, o: Self) -> Self {
        let d = self.radicand(&o);
        let dr = Self::d_rat(&d);
        let n = &o.a * &o.a - &o.b * &o.b * dr;
        assert!(!Zero::is_zero(&n), "division by zero");
        let p = self * o.conj();
        QuadraticRational { a: p.a / &n, b: p.b / n, d }
    }
}

impl Neg for QuadraticRational {
    type Output = Self;
    fn neg(self) -> Self {
        QuadraticRational { a: -self.a, b: -self.b, d: self.d }
    }
}

impl Scalar for QuadraticRational {
    const EXACT: bool = true;
    fn zero() -> Self {
        QuadraticRational::rational(Zero::zero())
    }
    fn one() -> Self {
        QuadraticRational::rational(One::one())
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(&self.a) && Zero::is_zero(&self.b)
    }
    fn from_rational(q: &Rational) -> Self {
        QuadraticRational::rational(q.clone())
    }
    fn try_from_gaussian(g: &GaussianRational) -> Option<Self> {
        Zero::is_zero(&g.im).then(|| QuadraticRational::rational(g.re.clone()))
    }
    fn to_complex(&self) -> Complex64 {
        let a = rational_to_f64(&self.a);
        if Zero::is_zero(&self.b) {
            return Complex64::new(a, 0.0);
        }
        let b = rational_to_f64(&self.b);
        let d = self.d.to_f64().unwrap_or(f64::NAN);
        if d >= 0.0 {
            Complex64::new(a + b * d.sqrt(), 0.0)
        } else {
            Complex64::new(a, b * (-d).sqrt())
        }
    }
}

/// Parses `"p/q"`, an integer, or a decimal with optional exponent into an
/// exact rational.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let s = s.trim();
    let bad = || Error::Parse(format!("not a rational number: {s:?}"));
    if s.is_empty() || s.len() > 4096 {
        return Err(bad());
    }
    if let Some((p, q)) = s.split_once('/') {
        let p: BigInt = parse_int(p).ok_or_else(bad)?;
        let q: BigInt = parse_int(q).ok_or_else(bad)?;
        if q.is_zero() {
            return Err(Error::Parse(format!("zero denominator in {s:?}")));
        }
        return Ok(Rational::new(p, q));
    }
    let (mantissa, exp) = match s.find(['e', 'E']) {
        Some(i) => {
            let e: i64 = s[i + 1..].parse().map_err(|_| bad())?;
            (&s[..i], e)
        }
        None => (s, 0),
    };
    if exp.abs() > 10_000 {
        return Err(bad());
    }
    let (neg, body) = match mantissa.strip_prefix('-') {
        Some(b) => (true, b),
        None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (int_part, frac_part) = body.split_once('.').unwrap_or((body, ""));
    if int_part.is_empty() && frac_part.is_empty() {
        return Err(bad());
    }
    if !int_part.bytes().chain(frac_part.bytes()).all(|c| c.is_ascii_digit()) {
        return Err(bad());
    }
    let digits = format!("{int_part}{frac_part}");
    let mut value = Rational::from_integer(digits.parse::<BigInt>().map_err(|_| bad())?);
    let shift = exp - frac_part.len() as i64;
    let ten = Rational::from_integer(BigInt::from(10));
    let factor = num::pow::pow(ten, shift.unsigned_abs() as usize);
    if shift >= 0 {
        value *= factor;
    } else {
        value /= factor;
    }
    Ok(if neg { -value } else { value })
}

fn parse_int(s: &str) -> Option<BigInt> {
    let s = s.trim();
    let body = s.strip_prefix(['-', '+']).unwrap_or(s);
    if body.is_empty() || !body.bytes().all(|c| c.is_ascii_digit()) {
        return None;
    }
    s.parse().ok()
}

/// Formats as `"p/q"`, or `"p"` for integers.
pub fn format_rational(q: &Rational) -> String {
    if q.denom().is_one() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

/// Closest rational with denominator at most `max_den`, by continued fractions.
pub fn rational_approx(x: f64, max_den: i64) -> Rational {
    let (mut h0, mut h1, mut k0, mut k1) = (0i128, 1i128, 1i128, 0i128);
    let mut y = x;
    for _ in 0..64 {
        let a = y.floor();
        let ai = a as i128;
        let h2 = ai * h1 + h0;
        let k2 = ai * k1 + k0;
        if k2 > max_den as i128 {
            break;
        }
        (h0, h1, k0, k1) = (h1, h2, k1, k2);
        let frac = y - a;
        if frac.abs() < 1e-15 {
            break;
        }
        y = 1.0 / frac;
    }
    Rational::new(BigInt::from(h1), BigInt::from(k1))
}
