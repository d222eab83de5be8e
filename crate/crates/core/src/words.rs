//! Word-level primitives: periods, critical exponents, prefix and suffix
//! repetition counts, fractional powers, and the reference admissibility scan.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::spec::LanguageSpec;
use crate::word::{display, Symbol, Word};

fn ratio(num: usize, den: usize) -> BigRational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

/// Strict border array: `border[i]` is the length of the longest proper
/// border of `w[..=i]`.
fn border_array(w: &[Symbol]) -> Vec<usize> {
    let mut border = vec![0; w.len()];
    let mut k = 0;
    for i in 1..w.len() {
        while k > 0 && w[i] != w[k] {
            k = border[k - 1];
        }
        if w[i] == w[k] {
            k += 1;
        }
        border[i] = k;
    }
    border
}

/// All periods of `w` in increasing order. The last element is always `|w|`
/// and the first is the least period.
pub fn periods(w: &[Symbol]) -> Result<Vec<usize>> {
    if w.is_empty() {
        return Err(Error::EmptyWord);
    }
    let n = w.len();
    let border = border_array(w);
    // periods are n - b for every border b (including the empty border)
    let mut out = Vec::new();
    let mut b = border[n - 1];
    loop {
        out.push(n - b);
        if b == 0 {
            break;
        }
        b = border[b - 1];
    }
    Ok(out)
}

pub fn least_period(w: &[Symbol]) -> Result<usize> {
    if w.is_empty() {
        return Err(Error::EmptyWord);
    }
    Ok(w.len() - border_array(w)[w.len() - 1])
}

/// A factor `w[start .. start+len]` that has period `period`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Repetition {
    pub start: usize,
    pub len: usize,
    pub period: usize,
}

impl Repetition {
    pub fn exponent(&self) -> BigRational {
        ratio(self.len, self.period)
    }

    pub fn exponent_f64(&self) -> f64 {
        self.len as f64 / self.period as f64
    }

    /// `(v)^e` where `v` is the period block, as displayed for `w`.
    pub fn render(&self, w: &[Symbol]) -> String {
        let block = display(&w[self.start..self.start + self.period]);
        format!("({block})^{}", RatioDisplay(&self.exponent()))
    }
}

/// Formats `p/q` as `p` when `q = 1` and `{p/q}` otherwise.
pub struct RatioDisplay<'a>(pub &'a BigRational);

impl fmt::Display for RatioDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_integer() {
            write!(f, "{}", self.0.numer())
        } else {
            write!(f, "{{{}/{}}}", self.0.numer(), self.0.denom())
        }
    }
}

/// The factor of largest exponent, leftmost among those with the smallest
/// period on ties.
pub fn critical_repetition(w: &[Symbol]) -> Result<Repetition> {
    if w.is_empty() {
        return Err(Error::EmptyWord);
    }
    let n = w.len();
    let mut best = Repetition {
        start: 0,
        len: 1,
        period: 1,
    };
    for p in 1..n {
        let mut run_start = 0;
        let mut run = 0;
        for i in 0..n - p {
            if w[i] == w[i + p] {
                if run == 0 {
                    run_start = i;
                }
                run += 1;
                continue;
            }
            consider(&mut best, run_start, run, p);
            run = 0;
        }
        consider(&mut best, run_start, run, p);
    }
    Ok(best)
}

fn consider(best: &mut Repetition, start: usize, run: usize, p: usize) {
    if run == 0 {
        return;
    }
    let len = run + p;
    if len * best.period > best.len * p {
        *best = Repetition {
            start,
            len,
            period: p,
        };
    }
}

/// `max |s| / per(s)` over nonempty factors `s` of `w`.
pub fn critical_exponent(w: &[Symbol]) -> Result<BigRational> {
    critical_repetition(w).map(|r| r.exponent())
}

/// Length `k` of the longest prefix of `w` that is a prefix of
/// `(w[..ell])^∞`. Requires `1 ≤ ell ≤ |w|`.
#[inline]
pub fn prefix_repeat_len(w: &[Symbol], ell: usize) -> usize {
    let mut k = ell;
    while k < w.len() && w[k] == w[k - ell] {
        k += 1;
    }
    k
}

/// Suffix analogue of [`prefix_repeat_len`].
#[inline]
pub fn suffix_repeat_len(w: &[Symbol], ell: usize) -> usize {
    let n = w.len();
    let mut k = ell;
    while k < n && w[n - 1 - k] == w[n - 1 - k + ell] {
        k += 1;
    }
    k
}

fn check_ell(w: &[Symbol], ell: usize) -> Result<()> {
    if ell == 0 || ell > w.len() {
        return Err(Error::BadIndex(format!(
            "length {ell} outside 1..={}",
            w.len()
        )));
    }
    Ok(())
}

/// How many times `w[..ell]` repeats at the start of `w`, as `k/ell`.
pub fn pre_count(w: &[Symbol], ell: usize) -> Result<BigRational> {
    check_ell(w, ell)?;
    Ok(ratio(prefix_repeat_len(w, ell), ell))
}

/// How many times the length-`ell` suffix repeats at the end of `w`.
pub fn suf_count(w: &[Symbol], ell: usize) -> Result<BigRational> {
    check_ell(w, ell)?;
    Ok(ratio(suffix_repeat_len(w, ell), ell))
}

/// The first `α·|v|` symbols of `v^∞`.
pub fn power(v: &[Symbol], alpha: &BigRational) -> Result<Word> {
    if v.is_empty() {
        return Err(Error::EmptyWord);
    }
    if *alpha < BigRational::one() {
        return Err(Error::BadInput(format!("exponent {alpha} is below 1")));
    }
    let len = alpha * BigInt::from(v.len());
    if !len.is_integer() {
        return Err(Error::NonIntegralPower {
            exponent: alpha.to_string(),
            len: v.len(),
        });
    }
    let len = len
        .to_integer()
        .to_usize()
        .ok_or_else(|| Error::BadInput("power too long".into()))?;
    Ok(v.iter()
        .copied()
        .cycle()
        .take(len)
        .collect::<Vec<_>>()
        .into())
}

/// Drops the first `i` and last `k` symbols.
pub fn truncate(w: &[Symbol], i: usize, k: usize) -> Result<Word> {
    if i + k > w.len() {
        return Err(Error::BadIndex(format!(
            "cannot remove {i}+{k} symbols from a word of length {}",
            w.len()
        )));
    }
    Ok(Word::from_slice(&w[i..w.len() - k]))
}

/// First forbidden factor found by the direct scan over start positions and
/// periods, extended to its maximal length for that start and period.
pub fn forbidden_factor_oracle(w: &[Symbol], spec: &LanguageSpec) -> Option<Repetition> {
    let n = w.len();
    for start in 0..n {
        for p in 1..=(n - start) {
            let mut len = p;
            while start + len < n && w[start + len] == w[start + len - p] {
                len += 1;
            }
            if spec.forbids(len, p) {
                return Some(Repetition {
                    start,
                    len,
                    period: p,
                });
            }
        }
    }
    None
}

/// Reference membership test for the factorial language: no factor has a
/// forbidden exponent. Cubic-time direct scan.
pub fn is_admissible_oracle(w: &[Symbol], spec: &LanguageSpec) -> bool {
    forbidden_factor_oracle(w, spec).is_none()
}
