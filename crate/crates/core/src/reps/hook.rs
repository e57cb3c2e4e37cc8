//! Hook partitions, their highest weights, the Pieri rule, box addability
//! and Casimir eigenvalues.

use std::fmt;

use num::traits::Zero;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::{rat, Rational};
use crate::superalg::{ParitySequence, Weight};

/// A partition with `mu_{m+1} <= n`, stored as nonincreasing positive parts.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct HookPartition(Vec<usize>);

impl HookPartition {
    /// Validates the shape for gl(m|n).
    pub fn new(parts: Vec<usize>, m: usize, n: usize) -> Result<Self> {
        let parts: Vec<usize> = parts.into_iter().filter(|&p| p > 0).collect();
        if parts.windows(2).any(|w| w[0] < w[1]) {
            return Err(Error::InvalidHook(format!("{parts:?} is not nonincreasing")));
        }
        if parts.get(m).is_some_and(|&p| p > n) {
            return Err(Error::InvalidHook(format!("{parts:?} does not fit the ({m}, {n}) hook")));
        }
        Ok(HookPartition(parts))
    }

    pub fn single_box() -> Self {
        HookPartition(vec![1])
    }

    pub fn parts(&self) -> &[usize] {
        &self.0
    }

    pub fn size(&self) -> usize {
        self.0.iter().sum()
    }

    pub fn part(&self, i: usize) -> usize {
        self.0.get(i).copied().unwrap_or(0)
    }

    pub fn conjugate(&self) -> Vec<usize> {
        let cols = self.part(0);
        (0..cols).map(|j| self.0.iter().filter(|&&p| p > j).count()).collect()
    }
}

impl fmt::Display for HookPartition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s: Vec<String> = self.0.iter().map(|p| p.to_string()).collect();
        write!(f, "({})", s.join(","))
    }
}

/// Highest weight of the irreducible module labelled by `mu`, read off the
/// diagram along the parity sequence: an even entry takes the next unused row,
/// an odd entry the next unused column, each cut by the regions already taken.
pub fn hook_to_weight(mu: &HookPartition, ps: &ParitySequence) -> Result<Weight> {
    HookPartition::new(mu.0.clone(), ps.m(), ps.n())?;
    let conj = mu.conjugate();
    let (mut evens, mut odds) = (0usize, 0usize);
    let mut w = Vec::with_capacity(ps.len());
    for a in 0..ps.len() {
        let v = if ps.parity(a).is_odd() {
            let col = conj.get(odds).copied().unwrap_or(0);
            odds += 1;
            col.saturating_sub(evens)
        } else {
            let row = mu.part(evens);
            evens += 1;
            row.saturating_sub(odds)
        };
        w.push(rat(v as i64));
    }
    Ok(Weight(w))
}

/// Hook partitions obtained from `mu` by adding one box, in row order.
pub fn pieri(mu: &HookPartition, m: usize, n: usize) -> Vec<HookPartition> {
    let len = mu.0.len();
    (0..=len)
        .filter(|&i| i == 0 || mu.part(i - 1) > mu.part(i))
        .filter_map(|i| {
            let mut p = mu.0.clone();
            if i == len {
                p.push(1);
            } else {
                p[i] += 1;
            }
            HookPartition::new(p, m, n).ok()
        })
        .collect()
}

/// All chains `(1) = mu_1, mu_2, ..., mu_len` growing one box at a time.
pub fn pieri_chains(len: usize, m: usize, n: usize) -> Vec<Vec<HookPartition>> {
    if len == 0 {
        return vec![Vec::new()];
    }
    let mut chains = vec![vec![HookPartition::single_box()]];
    for _ in 1..len {
        chains = chains
            .into_iter()
            .flat_map(|c| {
                let last = c.last().cloned().unwrap();
                pieri(&last, m, n).into_iter().map(move |next| {
                    let mut c2 = c.clone();
                    c2.push(next);
                    c2
                })
            })
            .collect();
    }
    chains
}

/// Index `b` with `hook_to_weight(bigger) = hook_to_weight(smaller) + eps_b`.
pub fn added_box_index(smaller: &HookPartition, bigger: &HookPartition, ps: &ParitySequence) -> Result<usize> {
    let d = &hook_to_weight(bigger, ps)? - &hook_to_weight(smaller, ps)?;
    let one = rat(1);
    let hits: Vec<usize> = (0..d.dim()).filter(|&b| d.0[b] == one).collect();
    let rest_zero = (0..d.dim()).all(|b| d.0[b].is_zero() || d.0[b] == one);
    if hits.len() == 1 && rest_zero {
        Ok(hits[0])
    } else {
        Err(Error::InvalidHook(format!("{bigger} is not {smaller} plus one box")))
    }
}

/// Whether `lambda + eps_target` is again the highest weight of a hook
/// partition, for `lambda` itself such a weight.
///
/// The first coordinate can always grow; for `target >= 1` the test is
/// `lambda_r - (-1)^{|target|+|r|} lambda_target
///   + (-1)^{|r|} sum_{r<b<target} (-1)^{|b|} > 0` for every `r < target`.
pub fn box_addable(ps: &ParitySequence, lambda: &Weight, target: usize) -> Result<bool> {
    if lambda.dim() != ps.len() {
        return Err(Error::DimensionMismatch(format!("weight of length {} for {ps}", lambda.dim())));
    }
    if target >= ps.len() {
        return Err(Error::Index(format!("coordinate {target} out of range")));
    }
    for r in 0..target {
        let s_rt = rat((ps.parity(r) + ps.parity(target)).sign());
        let tail: i64 = (r + 1..target).map(|b| ps.sign(b)).sum();
        let v = &lambda.0[r] - s_rt * &lambda.0[target] + rat(ps.sign(r) * tail);
        if v <= Rational::zero() {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Eigenvalue of `sum_{a,b} (-1)^{|b|} E_ab E_ba` on `L(lambda)`.
pub fn casimir_value(ps: &ParitySequence, lambda: &Weight) -> Rational {
    (0..ps.len())
        .map(|a| {
            let above: i64 = (a + 1..ps.len()).map(|b| ps.sign(b)).sum();
            let below: i64 = (0..a).map(|b| ps.sign(b)).sum();
            let l = &lambda.0[a];
            l * l * rat(ps.sign(a)) + l * rat(above - below)
        })
        .fold(Rational::zero(), |s, t| s + t)
}

/// `(-1)^{|r|} lambda_r - (-1)^{|a+1|} lambda_{a+1} + sum_{b=r}^{a} (-1)^{|b|}`,
/// which equals `-(C(lambda + eps_{a+1}) - C(lambda + eps_r)) / 2`.
pub fn casimir_diff(ps: &ParitySequence, lambda: &Weight, r: usize, a: usize) -> Result<Rational> {
    if r > a || a + 1 >= ps.len() {
        return Err(Error::Index(format!("need r <= a < {}, got r={r}, a={a}", ps.len() - 1)));
    }
    let sum: i64 = (r..=a).map(|b| ps.sign(b)).sum();
    Ok(&lambda.0[r] * rat(ps.sign(r)) - &lambda.0[a + 1] * rat(ps.sign(a + 1)) + rat(sum))
}
