//! Ordered partitions and the weight function
//! `w(z, t) = sum_n (-1)^{|n|} omega_n(z, t) F_n v`.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::scalar::{Rational, Scalar};
use crate::superalg::ParitySequence;

use super::BetheProblem;

/// Largest number of roots the partition sum accepts.
pub const MAX_PARTITION_ROOTS: usize = 8;
/// Largest number of sites the partition sum accepts.
pub const MAX_PARTITION_SITES: usize = 6;

/// A distribution of the roots `0..l` over `N` sites, each site carrying an
/// ordered sequence. `F_n v` applies, at site `k`, the word
/// `F_{c(parts[k][0])} ... F_{c(parts[k][last])}` to the highest weight vector.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct OrderedPartition {
    pub parts: Vec<Vec<usize>>,
}

impl OrderedPartition {
    pub fn shape(&self) -> Vec<usize> {
        self.parts.iter().map(Vec::len).collect()
    }

    /// The concatenated tuple `(n^1_1, .., n^N_{p_N})`.
    pub fn tuple(&self) -> Vec<usize> {
        self.parts.iter().flatten().copied().collect()
    }

    pub fn is_valid(&self, l: usize) -> bool {
        let mut t = self.tuple();
        t.sort_unstable();
        t == (0..l).collect::<Vec<_>>()
    }
}

/// `l! * C(l + N - 1, N - 1)`, or `None` on overflow.
pub fn partition_count(l: usize, n: usize) -> Option<u128> {
    if n == 0 {
        return Some(u128::from(l == 0));
    }
    let mut f: u128 = 1;
    for k in 1..=l as u128 {
        f = f.checked_mul(k)?;
    }
    let mut c: u128 = 1;
    for k in 1..n as u128 {
        c = c.checked_mul(l as u128 + k)? / k;
    }
    f.checked_mul(c)
}

/// All ordered partitions of `0..l` into `n` parts, in a fixed order.
pub fn ordered_partitions(l: usize, n: usize) -> Vec<OrderedPartition> {
    fn rec(site: usize, n: usize, used: &mut Vec<bool>, cur: &mut Vec<Vec<usize>>, out: &mut Vec<OrderedPartition>) {
        if site == n {
            if used.iter().all(|&u| u) {
                out.push(OrderedPartition { parts: cur.clone() });
            }
            return;
        }
        cur.push(Vec::new());
        seq(site, n, used, cur, out);
        cur.pop();
    }
    fn seq(site: usize, n: usize, used: &mut Vec<bool>, cur: &mut Vec<Vec<usize>>, out: &mut Vec<OrderedPartition>) {
        rec(site + 1, n, used, cur, out);
        for r in 0..used.len() {
            if !used[r] {
                used[r] = true;
                cur[site].push(r);
                seq(site, n, used, cur, out);
                cur[site].pop();
                used[r] = false;
            }
        }
    }
    let mut out = Vec::new();
    if n == 0 {
        if l == 0 {
            out.push(OrderedPartition { parts: Vec::new() });
        }
        return out;
    }
    rec(0, n, &mut vec![false; l], &mut Vec::new(), &mut out);
    out
}

/// `(-1)^{|n|}`: one factor `-1` for every pair of odd-coloured roots whose
/// relative order the tuple reverses.
pub fn partition_sign(n: &OrderedPartition, colours: &[usize], ps: &ParitySequence) -> i64 {
    tuple_sign(&n.tuple(), |r| ps.simple_root_parity(colours[r]).is_odd())
}

fn tuple_sign(tuple: &[usize], odd: impl Fn(usize) -> bool) -> i64 {
    let mut s = 1;
    for i in 0..tuple.len() {
        for j in i + 1..tuple.len() {
            if tuple[i] > tuple[j] && odd(tuple[i]) && odd(tuple[j]) {
                s = -s;
            }
        }
    }
    s
}

/// Depth-first enumeration of the partition sum. Each site's sequence is
/// built from the right, so `extend` sees operators in application order and
/// can prune vanishing branches early. `leaf` receives the per-site states
/// and `(-1)^{|n|} omega_n`.
struct PartitionWalk<'a, T, S> {
    colours: &'a [usize],
    odd: Vec<bool>,
    z: &'a [T],
    t: &'a [T],
    scale: f64,
    extend: &'a dyn Fn(usize, &S, usize) -> Option<S>,
}

impl<'a, T: Scalar, S: Clone> PartitionWalk<'a, T, S> {
    fn run(&self, init: Vec<S>, leaf: &mut dyn FnMut(&[S], T)) -> Result<()> {
        let mut used = vec![false; self.t.len()];
        let mut states = Vec::with_capacity(init.len());
        let mut parts = Vec::with_capacity(init.len());
        self.site(0, &init, &mut used, &mut states, &mut parts, T::one(), leaf)
    }

    #[allow(clippy::too_many_arguments)]
    fn site(
        &self,
        k: usize,
        init: &[S],
        used: &mut Vec<bool>,
        states: &mut Vec<S>,
        parts: &mut Vec<Vec<usize>>,
        coeff: T,
        leaf: &mut dyn FnMut(&[S], T),
    ) -> Result<()> {
        if k == init.len() {
            if used.iter().all(|&u| u) {
                let tuple: Vec<usize> = parts.iter().flat_map(|p| p.iter().rev()).copied().collect();
                let sign = tuple_sign(&tuple, |r| self.odd[r]);
                let c = if sign < 0 { -coeff } else { coeff };
                leaf(states, c);
            }
            return Ok(());
        }
        parts.push(Vec::new());
        let r = self.grow(k, init, init[k].clone(), used, states, parts, coeff, leaf);
        parts.pop();
        r
    }

    #[allow(clippy::too_many_arguments)]
    fn grow(
        &self,
        k: usize,
        init: &[S],
        state: S,
        used: &mut Vec<bool>,
        states: &mut Vec<S>,
        parts: &mut Vec<Vec<usize>>,
        coeff: T,
        leaf: &mut dyn FnMut(&[S], T),
    ) -> Result<()> {
        let remaining = used.iter().filter(|&&u| !u).count();
        if k + 1 < init.len() || remaining == 0 {
            states.push(state.clone());
            self.site(k + 1, init, used, states, parts, coeff.clone(), leaf)?;
            states.pop();
        }
        for r in 0..used.len() {
            if used[r] {
                continue;
            }
            let Some(next) = (self.extend)(k, &state, self.colours[r]) else { continue };
            let base = match parts[k].last() {
                Some(&prev) => self.t[prev].clone(),
                None => self.z[k].clone(),
            };
            let d = self.t[r].clone() - base;
            if d.is_negligible(self.scale) {
                return Err(Error::PoleCollision(match parts[k].last() {
                    Some(prev) => format!("roots {r} and {prev} coincide"),
                    None => format!("root {r} meets site {k}"),
                }));
            }
            used[r] = true;
            parts[k].push(r);
            let res = self.grow(k, init, next, used, states, parts, coeff.clone() / d, leaf);
            parts[k].pop();
            used[r] = false;
            res?;
        }
        Ok(())
    }
}

fn check_caps(l: usize, n: usize) -> Result<()> {
    if l > MAX_PARTITION_ROOTS || n > MAX_PARTITION_SITES {
        return Err(Error::TooLarge(format!(
            "weight function with {l} roots on {n} sites exceeds the cap of {MAX_PARTITION_ROOTS} roots, {MAX_PARTITION_SITES} sites"
        )));
    }
    Ok(())
}

fn scale_of<T: Scalar>(z: &[T], t: &[T]) -> f64 {
    z.iter().chain(t).map(|x| x.abs_approx()).fold(1.0, f64::max)
}

/// The weight function as a vector in the chain space.
pub fn weight_function<T: Scalar>(prob: &BetheProblem, t: &[T]) -> Result<Vec<T>> {
    let chain = prob.chain();
    check_caps(t.len(), chain.len())?;
    if t.len() != prob.num_roots() {
        return Err(Error::DimensionMismatch(format!("{} roots for a problem with {}", t.len(), prob.num_roots())));
    }
    let z = prob.z_as::<T>()?;
    let ps = prob.parity_sequence();
    let odd: Vec<bool> = prob.colours().iter().map(|&c| ps.simple_root_parity(c).is_odd()).collect();
    let sites = chain.sites();
    let space = chain.space();
    let mut strides = vec![1usize; sites.len()];
    for k in (0..sites.len().saturating_sub(1)).rev() {
        strides[k] = strides[k + 1] * sites[k + 1].module.dim();
    }
    let extend = |k: usize, v: &Vec<Rational>, c: usize| -> Option<Vec<Rational>> {
        let w = sites[k].module.lowering(c).apply(v).ok()?;
        w.iter().any(|x| !num::Zero::is_zero(x)).then_some(w)
    };
    let walk = PartitionWalk { colours: prob.colours(), odd, z: &z, t, scale: scale_of(&z, t), extend: &extend };
    let init: Vec<Vec<Rational>> = sites.iter().map(|s| s.module.hw_vector().to_vec()).collect();
    let mut out = vec![T::zero(); space.dim()];
    walk.run(init, &mut |states, coeff| {
        let mut acc: Vec<(usize, T)> = vec![(0, coeff)];
        for (k, v) in states.iter().enumerate() {
            let mut next = Vec::new();
            for (idx, c) in &acc {
                for (i, x) in v.iter().enumerate() {
                    if !num::Zero::is_zero(x) {
                        next.push((idx + i * strides[k], c.clone() * T::from_rational(x)));
                    }
                }
            }
            acc = next;
        }
        for (idx, c) in acc {
            out[idx] = out[idx].clone() + c;
        }
    })?;
    Ok(out)
}

/// Coefficients of the weight function on formal words: keys list, per site,
/// the colours of the lowering operators from left to right. Words with two
/// adjacent equal odd colours are dropped.
pub type WordExpansion<T> = BTreeMap<Vec<Vec<usize>>, T>;

/// The weight function expanded over formal words, independently of any
/// module. `odd_colour[c]` is the parity of `F_c`.
pub fn weight_function_words<T: Scalar>(
    colours: &[usize],
    odd_colour: &[bool],
    z: &[T],
    t: &[T],
) -> Result<WordExpansion<T>> {
    check_caps(t.len(), z.len())?;
    if colours.len() != t.len() || colours.iter().any(|&c| c >= odd_colour.len()) {
        return Err(Error::DimensionMismatch("colour assignment does not match the roots".into()));
    }
    let odd: Vec<bool> = colours.iter().map(|&c| odd_colour[c]).collect();
    let extend = |_: usize, w: &Vec<usize>, c: usize| -> Option<Vec<usize>> {
        if w.first() == Some(&c) && odd_colour[c] {
            return None;
        }
        let mut next = Vec::with_capacity(w.len() + 1);
        next.push(c);
        next.extend_from_slice(w);
        Some(next)
    };
    let walk = PartitionWalk { colours, odd, z, t, scale: scale_of(z, t), extend: &extend };
    let mut out = WordExpansion::new();
    walk.run(vec![Vec::new(); z.len()], &mut |states, coeff| {
        let e = out.entry(states.to_vec()).or_insert_with(T::zero);
        *e = e.clone() + coeff;
    })?;
    out.retain(|_, v| !v.is_zero());
    Ok(out)
}
