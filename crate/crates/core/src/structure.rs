//! Good words and 4-power concatenations.
//!
//! `G` is the set of admissible words with no prefix and no suffix equal to
//! a 4-power; `A = {v⁴ : v admissible}` and `C = A* ∩ L`. Every admissible
//! word splits as `u^p · v · u^s` with `u^p, u^s ∈ C` and `v ∈ G`. The
//! ambient language is the factorial language `L̃`.
//!
//! The block power is a parameter of the `*_with_power` functions; the
//! unsuffixed API fixes it at [`BLOCK_POWER`].

use std::collections::BTreeSet;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::language::{enumerate, forbidden_suffix, is_admissible};
use crate::spec::LanguageSpec;
use crate::word::{Symbol, Word};
use crate::words::{prefix_repeat_len, suffix_repeat_len};

pub const BLOCK_POWER: usize = 4;

fn check_member(w: &[Symbol], spec: &LanguageSpec) -> Result<()> {
    crate::word::check_symbols(w, spec.d())?;
    if !is_admissible(w, spec) {
        return Err(Error::NotInLanguage(crate::word::display(w)));
    }
    Ok(())
}

/// No prefix and no suffix of `w` is a `power`-power. Does not check
/// admissibility.
pub fn is_good_word(w: &[Symbol], power: usize) -> bool {
    let n = w.len();
    (1..=n / power).all(|ell| {
        prefix_repeat_len(w, ell) < power * ell && suffix_repeat_len(w, ell) < power * ell
    })
}

pub fn is_good(w: &[Symbol], spec: &LanguageSpec) -> Result<bool> {
    is_good_with_power(w, spec, BLOCK_POWER)
}

pub fn is_good_with_power(w: &[Symbol], spec: &LanguageSpec, power: usize) -> Result<bool> {
    check_member(w, spec)?;
    Ok(is_good_word(w, power))
}

#[inline]
fn is_block(seg: &[Symbol], power: usize) -> bool {
    let len = seg.len();
    len > 0 && len.is_multiple_of(power) && prefix_repeat_len(seg, len / power) == len
}

/// `reach[i]` is true when `w[..i]` is a concatenation of `power`-powers.
/// Blocks are factors of `w`, so their roots are admissible whenever `w` is.
fn prefix_reach(w: &[Symbol], power: usize) -> Vec<bool> {
    let n = w.len();
    let mut reach = vec![false; n + 1];
    reach[0] = true;
    for j in power..=n {
        reach[j] = (1..=j / power)
            .map(|t| j - t * power)
            .any(|i| reach[i] && is_block(&w[i..j], power));
    }
    reach
}

/// `w` is a concatenation of `power`-powers. Does not check admissibility.
pub fn is_power_concat_word(w: &[Symbol], power: usize) -> bool {
    prefix_reach(w, power)[w.len()]
}

pub fn is_power_concat(w: &[Symbol], spec: &LanguageSpec) -> Result<bool> {
    is_power_concat_with_power(w, spec, BLOCK_POWER)
}

pub fn is_power_concat_with_power(w: &[Symbol], spec: &LanguageSpec, power: usize) -> Result<bool> {
    check_member(w, spec)?;
    Ok(is_power_concat_word(w, power))
}

/// `w = prefix · core · suffix` with greedy maximal `prefix` and `suffix`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Decomposition {
    pub prefix: Word,
    pub core: Word,
    pub suffix: Word,
}

impl Decomposition {
    pub fn joined(&self) -> Word {
        Word::concat(&[&self.prefix, &self.core, &self.suffix])
    }
}

pub fn decompose(w: &[Symbol], spec: &LanguageSpec) -> Result<Decomposition> {
    decompose_with_power(w, spec, BLOCK_POWER)
}

pub fn decompose_with_power(
    w: &[Symbol],
    spec: &LanguageSpec,
    power: usize,
) -> Result<Decomposition> {
    check_member(w, spec)?;
    let n = w.len();
    let pre = prefix_reach(w, power);
    let p = (0..=n).rev().find(|&i| pre[i]).unwrap_or(0);
    // reversal maps A* onto itself
    let rev: Vec<Symbol> = w.iter().rev().copied().collect();
    let suf = prefix_reach(&rev, power);
    let s = (0..=n - p).rev().find(|&k| suf[k]).unwrap_or(0);
    Ok(Decomposition {
        prefix: Word::from_slice(&w[..p]),
        core: Word::from_slice(&w[p..n - s]),
        suffix: Word::from_slice(&w[n - s..]),
    })
}

/// All good words of length `n`, in lexicographic order.
pub fn good_words(spec: &LanguageSpec, n: usize) -> Vec<Word> {
    enumerate(*spec, n)
        .filter(|w| is_good_word(w, BLOCK_POWER))
        .collect()
}

/// Every distinct admissible word of length `len` that is a concatenation of
/// `power`-powers, built block by block.
pub fn power_concat_words(spec: &LanguageSpec, len: usize, power: usize) -> BTreeSet<Word> {
    let mut out = BTreeSet::new();
    if !len.is_multiple_of(power) {
        return out;
    }
    let roots: Vec<Vec<Word>> = (0..=len / power)
        .map(|q| {
            if q == 0 {
                Vec::new()
            } else {
                enumerate(*spec, q).collect()
            }
        })
        .collect();
    let mut buf = Vec::with_capacity(len);
    grow(&mut buf, len, power, spec, &roots, &mut out);
    out
}

fn grow(
    buf: &mut Vec<Symbol>,
    len: usize,
    power: usize,
    spec: &LanguageSpec,
    roots: &[Vec<Word>],
    out: &mut BTreeSet<Word>,
) {
    if buf.len() == len {
        out.insert(Word::from_slice(buf));
        return;
    }
    let remaining = (len - buf.len()) / power;
    for q in 1..=remaining {
        for root in &roots[q] {
            let mark = buf.len();
            let ok = (0..q * power).all(|i| {
                buf.push(root[i % q]);
                forbidden_suffix(buf, spec).is_none()
            });
            if ok {
                grow(buf, len, power, spec, roots, out);
            }
            buf.truncate(mark);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(s: &str) -> Word {
        s.parse().unwrap()
    }

    fn big() -> LanguageSpec {
        LanguageSpec::plus(2, 12, 1).unwrap()
    }

    /// Membership in A* by trying every first block, recursively.
    fn brute_concat(w: &[Symbol]) -> bool {
        if w.is_empty() {
            return true;
        }
        (1..=w.len() / 4).any(|q| {
            let block = &w[..4 * q];
            (0..4 * q).all(|i| block[i] == block[i % q]) && brute_concat(&w[4 * q..])
        })
    }

    fn brute_good(w: &[Symbol]) -> bool {
        let n = w.len();
        !(1..=n / 4).any(|q| {
            let pre = &w[..4 * q];
            let suf = &w[n - 4 * q..];
            (0..4 * q).all(|i| pre[i] == pre[i % q]) || (0..4 * q).all(|i| suf[i] == suf[i % q])
        })
    }

    #[test]
    fn is_good_examples() {
        assert!(!is_good(&w("0000"), &big()).unwrap());
        assert!(is_good(&w("01"), &big()).unwrap());
        assert!(is_good(&[], &big()).unwrap());
        let sq = LanguageSpec::free(2, 2, 1).unwrap();
        assert!(matches!(
            is_good(&w("00"), &sq),
            Err(Error::NotInLanguage(_))
        ));
    }

    #[test]
    fn good_four_letter_ternary() {
        let spec = LanguageSpec::free(3, 12, 1).unwrap();
        assert_eq!(good_words(&spec, 4).len(), 78);
    }

    #[test]
    fn is_good_matches_brute_force() {
        let spec = big();
        for n in 0..=12 {
            for v in enumerate(spec, n) {
                assert_eq!(is_good(&v, &spec).unwrap(), brute_good(&v), "{v}");
            }
        }
    }

    #[test]
    fn power_concat_examples() {
        assert!(is_power_concat(&w("0000"), &big()).unwrap());
        assert!(is_power_concat(&w("00001111"), &big()).unwrap());
        assert!(brute_concat(&w("00001111")));
        assert!(!is_power_concat(&w("001"), &big()).unwrap());
        assert!(is_power_concat(&[], &big()).unwrap());
        assert!(is_power_concat(&w("0101010100000000"), &big()).unwrap());
    }

    #[test]
    fn power_concat_matches_brute_force() {
        let spec = big();
        for n in 0..=14 {
            for v in enumerate(spec, n) {
                assert_eq!(is_power_concat(&v, &spec).unwrap(), brute_concat(&v), "{v}");
            }
        }
    }

    #[test]
    fn decompose_examples() {
        let spec = big();
        let d = decompose(&w("01"), &spec).unwrap();
        assert_eq!((d.prefix.len(), d.core, d.suffix.len()), (0, w("01"), 0));
        let d = decompose(&w("0000"), &spec).unwrap();
        assert_eq!(d.prefix, w("0000"));
        assert!(d.core.is_empty() && d.suffix.is_empty());
        let d = decompose(&w("00001"), &spec).unwrap();
        assert_eq!(
            (d.prefix, d.core, d.suffix),
            (w("0000"), w("1"), Word::empty())
        );
        let d = decompose(&w("100000"), &spec).unwrap();
        assert_eq!(
            (d.prefix, d.core, d.suffix),
            (Word::empty(), w("10"), w("0000"))
        );
    }

    #[test]
    fn decomposition_invariants_exhaustive() {
        let spec = big();
        for n in 0..=11 {
            for v in enumerate(spec, n) {
                let d = decompose(&v, &spec).unwrap();
                assert_eq!(d.joined(), v);
                assert!(brute_concat(&d.prefix) && brute_concat(&d.suffix));
                assert!(brute_good(&d.core), "{v} -> {d:?}");
                // greedy maximality
                assert!((d.prefix.len() + 1..=n).all(|i| !brute_concat(&v[..i])));
                let budget = n - d.prefix.len();
                assert!((d.suffix.len() + 1..=budget).all(|k| !brute_concat(&v[n - k..])));
            }
        }
    }

    #[test]
    fn non_good_words_of_length_eight() {
        // A^8 minus G_8 is covered by a^4·w, v·b^4 and u^4 with |u| = 2;
        // the only overlaps are a^4·b^4 and the u^4 with u = aa.
        for d in [2usize, 3] {
            let spec = LanguageSpec::free(d, 12, 1).unwrap();
            let all = d.pow(8);
            let cover = d * d.pow(4) + d.pow(4) * d - d * d + (d * d - d);
            assert_eq!(all - good_words(&spec, 8).len(), cover);
            assert_eq!(cover, 2 * d.pow(5) - d);
        }
    }

    #[test]
    fn constructive_concat_matches_filter() {
        for spec in [
            big(),
            LanguageSpec::free(3, 12, 1).unwrap(),
            LanguageSpec::free(2, 5, 1).unwrap(),
        ] {
            for len in 0..=12 {
                let built = power_concat_words(&spec, len, 4);
                let filtered: BTreeSet<Word> =
                    enumerate(spec, len).filter(|v| brute_concat(v)).collect();
                assert_eq!(built, filtered, "{spec} len {len}");
            }
        }
    }
}
