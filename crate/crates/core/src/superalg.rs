//! Root data of gl(m|n): parity sequences, weights, the invariant form and
//! Cartan matrices.
//!
//! Indices are 0-based throughout. The simple root `alpha_a` is
//! `eps_a - eps_{a+1}` for `a` in `0..m+n-1`.

use std::fmt;
use std::ops::{Add, Neg, Sub};

use num::traits::Zero;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::{format_rational, rat, Rational};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Parity {
    Even,
    Odd,
}

impl Parity {
    pub fn from_bit(b: u8) -> Option<Parity> {
        match b {
            0 => Some(Parity::Even),
            1 => Some(Parity::Odd),
            _ => None,
        }
    }

    pub fn bit(self) -> u8 {
        match self {
            Parity::Even => 0,
            Parity::Odd => 1,
        }
    }

    pub fn is_odd(self) -> bool {
        self == Parity::Odd
    }

    /// `(-1)^p`.
    pub fn sign(self) -> i64 {
        if self.is_odd() {
            -1
        } else {
            1
        }
    }

    pub fn flip(self) -> Parity {
        self + Parity::Odd
    }
}

impl Add for Parity {
    type Output = Parity;
    fn add(self, o: Parity) -> Parity {
        if self == o {
            Parity::Even
        } else {
            Parity::Odd
        }
    }
}

/// Sign `(-1)^{p q}` of exchanging homogeneous elements of parities `p`, `q`.
pub fn koszul(p: Parity, q: Parity) -> i64 {
    if p.is_odd() && q.is_odd() {
        -1
    } else {
        1
    }
}

/// Parities of the standard basis of C^{m|n}, with the first entry even.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ParitySequence {
    bits: Vec<Parity>,
}

impl ParitySequence {
    pub fn new(bits: Vec<Parity>) -> Result<Self> {
        match bits.first() {
            None => Err(Error::InvalidParity("empty sequence".into())),
            Some(Parity::Odd) => Err(Error::InvalidParity("first entry must be even".into())),
            Some(Parity::Even) => Ok(ParitySequence { bits }),
        }
    }

    pub fn from_bits(bits: &[u8]) -> Result<Self> {
        let v = bits
            .iter()
            .map(|&b| Parity::from_bit(b).ok_or_else(|| Error::InvalidParity(format!("entry {b} is not 0 or 1"))))
            .collect::<Result<Vec<_>>>()?;
        Self::new(v)
    }

    /// `m` zeros followed by `n` ones.
    pub fn distinguished(m: usize, n: usize) -> Result<Self> {
        if m == 0 {
            return Err(Error::InvalidParity("m must be positive".into()));
        }
        let mut v = vec![Parity::Even; m];
        v.extend(std::iter::repeat_n(Parity::Odd, n));
        Self::new(v)
    }

    /// Parses a string of `0`/`1` characters such as `"0110"`.
    pub fn parse(s: &str) -> Result<Self> {
        let s = s.trim();
        if s.len() > 4096 {
            return Err(Error::InvalidParity("sequence too long".into()));
        }
        let bits = s
            .chars()
            .map(|c| match c {
                '0' => Ok(Parity::Even),
                '1' => Ok(Parity::Odd),
                _ => Err(Error::InvalidParity(format!("unexpected character {c:?}"))),
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(bits)
    }

    /// Accepts `"distinguished"` or an explicit string, checking the counts.
    pub fn resolve(spec: &str, m: usize, n: usize) -> Result<Self> {
        let ps = if spec.trim() == "distinguished" {
            Self::distinguished(m, n)?
        } else {
            Self::parse(spec)?
        };
        if ps.m() != m || ps.n() != n {
            return Err(Error::InvalidParity(format!(
                "{ps} has {} even and {} odd entries, expected {m} and {n}",
                ps.m(),
                ps.n()
            )));
        }
        Ok(ps)
    }

    pub fn len(&self) -> usize {
        self.bits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }

    pub fn m(&self) -> usize {
        self.bits.iter().filter(|p| !p.is_odd()).count()
    }

    pub fn n(&self) -> usize {
        self.bits.iter().filter(|p| p.is_odd()).count()
    }

    /// Number of simple roots.
    pub fn rank(&self) -> usize {
        self.bits.len() - 1
    }

    pub fn bits(&self) -> &[Parity] {
        &self.bits
    }

    pub fn parity(&self, a: usize) -> Parity {
        self.bits[a]
    }

    /// `(-1)^{|a|}`.
    pub fn sign(&self, a: usize) -> i64 {
        self.bits[a].sign()
    }

    /// Parity of `E_ab`.
    pub fn generator_parity(&self, a: usize, b: usize) -> Parity {
        self.bits[a] + self.bits[b]
    }

    /// Parity of the simple root vectors `E_a`, `F_a`.
    pub fn simple_root_parity(&self, a: usize) -> Parity {
        self.bits[a] + self.bits[a + 1]
    }

    /// `(eps_a, eps_b) = (-1)^{|a|} delta_ab`.
    pub fn eps_inner(&self, a: usize, b: usize) -> i64 {
        if a == b {
            self.sign(a)
        } else {
            0
        }
    }
}

impl fmt::Display for ParitySequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for p in &self.bits {
            write!(f, "{}", p.bit())?;
        }
        Ok(())
    }
}

/// A weight `sum_a lambda_a eps_a`, stored by its coordinates.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Weight(pub Vec<Rational>);

impl Weight {
    pub fn zero(dim: usize) -> Self {
        Weight(vec![Rational::zero(); dim])
    }

    pub fn from_ints(v: &[i64]) -> Self {
        Weight(v.iter().map(|&x| rat(x)).collect())
    }

    pub fn eps(dim: usize, a: usize) -> Self {
        let mut w = Self::zero(dim);
        w.0[a] = rat(1);
        w
    }

    pub fn simple_root(dim: usize, a: usize) -> Self {
        let mut w = Self::zero(dim);
        w.0[a] = rat(1);
        w.0[a + 1] = rat(-1);
        w
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn coords(&self) -> &[Rational] {
        &self.0
    }

    pub fn scale(&self, c: &Rational) -> Weight {
        Weight(self.0.iter().map(|x| x * c).collect())
    }

    pub fn to_strings(&self) -> Vec<String> {
        self.0.iter().map(format_rational).collect()
    }
}

impl fmt::Display for Weight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({})", self.to_strings().join(","))
    }
}

impl Add for &Weight {
    type Output = Weight;
    fn add(self, o: &Weight) -> Weight {
        Weight(self.0.iter().zip(&o.0).map(|(a, b)| a + b).collect())
    }
}

impl Sub for &Weight {
    type Output = Weight;
    fn sub(self, o: &Weight) -> Weight {
        Weight(self.0.iter().zip(&o.0).map(|(a, b)| a - b).collect())
    }
}

impl Neg for &Weight {
    type Output = Weight;
    fn neg(self) -> Weight {
        Weight(self.0.iter().map(|a| -a).collect())
    }
}

/// The invariant form `(u, v) = sum_a (-1)^{|a|} u_a v_a`.
pub fn weight_inner(ps: &ParitySequence, u: &Weight, v: &Weight) -> Result<Rational> {
    if u.dim() != ps.len() || v.dim() != ps.len() {
        return Err(Error::DimensionMismatch(format!(
            "weights of length {} and {} for gl with {} coordinates",
            u.dim(),
            v.dim(),
            ps.len()
        )));
    }
    Ok(u.0
        .iter()
        .zip(&v.0)
        .enumerate()
        .map(|(a, (x, y))| x * y * rat(ps.sign(a)))
        .fold(Rational::zero(), |s, t| s + t))
}

/// `lambda(H_a)` where `H_a = E_aa - (-1)^{|a|+|a+1|} E_{a+1,a+1}`.
pub fn coroot_pairing(ps: &ParitySequence, a: usize, lambda: &Weight) -> Rational {
    let s = rat(ps.simple_root_parity(a).sign());
    &lambda.0[a] - s * &lambda.0[a + 1]
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RootData {
    /// `cartan[x][y] = alpha_x(H_y)`, so `[H_y, E_x] = cartan[x][y] E_x`.
    pub cartan: Vec<Vec<i64>>,
    /// `symmetrized[x][y] = (alpha_x, alpha_y)`.
    pub symmetrized: Vec<Vec<i64>>,
    pub simple_root_parities: Vec<Parity>,
}

pub fn cartan_matrix(ps: &ParitySequence) -> RootData {
    root_data_from_bits(ps.bits())
}

/// Root data for an arbitrary 0/1 vector, without the leading-even check.
pub fn root_data_from_bits(bits: &[Parity]) -> RootData {
    let r = bits.len().saturating_sub(1);
    let eps = |a: usize, b: usize| if a == b { bits[a].sign() } else { 0 };
    let inner = |x: usize, y: usize| eps(x, y) - eps(x, y + 1) - eps(x + 1, y) + eps(x + 1, y + 1);
    let delta = |a: usize, b: usize| i64::from(a == b);
    let mut cartan = vec![vec![0; r]; r];
    let mut symmetrized = vec![vec![0; r]; r];
    for x in 0..r {
        for y in 0..r {
            symmetrized[x][y] = inner(x, y);
            // alpha_x = eps_x - eps_{x+1} evaluated on E_yy - s E_{y+1,y+1}
            let s = (bits[y] + bits[y + 1]).sign();
            cartan[x][y] = delta(x, y) - delta(x + 1, y) - s * (delta(x, y + 1) - delta(x + 1, y + 1));
        }
    }
    RootData {
        cartan,
        symmetrized,
        simple_root_parities: (0..r).map(|a| bits[a] + bits[a + 1]).collect(),
    }
}
