//! Enumeration and exact counting of the factorial language `L̃(d, β)` and
//! of its extendable approximations `Ext_m`.
//!
//! A word `w` of length `n` is in `Ext_m` when some `u`, `v` of length `m`
//! make `uwv` admissible. Because the language is factorial, `Ext_m(n)` is
//! exactly the set of length-`n` factors at offset `m` of admissible words
//! of length `n + 2m`, and `Ext_{m+1}(n) ⊆ Ext_m(n)`.

use std::collections::{BTreeMap, BTreeSet, HashSet};
use std::sync::atomic::{AtomicBool, AtomicU64, Ordering};

use num_bigint::BigUint;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::spec::LanguageSpec;
use crate::word::{check_symbols, Symbol, Word};
use crate::words::Repetition;

/// Given `buf` whose proper prefix `buf[..n-1]` is admissible, returns a
/// forbidden suffix of `buf` if one exists.
///
/// Any newly created forbidden factor ends at the last position, so it is
/// enough to test, for each period `p`, whether the longest suffix with
/// period `p` reaches the forbidden length for `p`.
#[inline]
pub fn forbidden_suffix(buf: &[Symbol], spec: &LanguageSpec) -> Option<Repetition> {
    let n = buf.len();
    let last = n.checked_sub(1)?;
    let mut p = 1;
    loop {
        let need = spec.min_forbidden_len(p);
        if need > n {
            return None;
        }
        let matches = need - p;
        let mut k = 0;
        while k < matches && buf[last - k] == buf[last - k - p] {
            k += 1;
        }
        if k == matches {
            return Some(Repetition {
                start: n - need,
                len: need,
                period: p,
            });
        }
        p += 1;
    }
}

/// First position at which a forbidden factor appears, scanning prefixes.
pub fn first_violation(w: &[Symbol], spec: &LanguageSpec) -> Option<Repetition> {
    (1..=w.len()).find_map(|i| forbidden_suffix(&w[..i], spec))
}

/// Incremental membership test; agrees with
/// [`is_admissible_oracle`](crate::words::is_admissible_oracle).
pub fn is_admissible(w: &[Symbol], spec: &LanguageSpec) -> bool {
    first_violation(w, spec).is_none()
}

/// A DFS node: an admissible word together with its language.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EnumState {
    word: Word,
    spec: LanguageSpec,
}

impl EnumState {
    pub fn new(spec: LanguageSpec) -> Self {
        EnumState {
            word: Word::empty(),
            spec,
        }
    }

    /// Builds a state from an arbitrary word, checking admissibility.
    pub fn from_word(word: Word, spec: LanguageSpec) -> Result<Self> {
        word.check_alphabet(spec.d())?;
        if !is_admissible(&word, &spec) {
            return Err(Error::NotInLanguage(word.to_string()));
        }
        Ok(EnumState { word, spec })
    }

    pub fn word(&self) -> &Word {
        &self.word
    }

    pub fn spec(&self) -> &LanguageSpec {
        &self.spec
    }

    /// `Ok(None)` means the extended word is rejected.
    pub fn extend(&self, symbol: Symbol) -> Result<Option<EnumState>> {
        if symbol as usize >= self.spec.d() {
            return Err(Error::BadSymbol {
                symbol: symbol as u32,
                d: self.spec.d(),
            });
        }
        let mut word = self.word.clone();
        word.push(symbol);
        if forbidden_suffix(&word, &self.spec).is_some() {
            return Ok(None);
        }
        Ok(Some(EnumState {
            word,
            spec: self.spec,
        }))
    }
}

/// Lexicographic stream of the admissible words of one length, optionally
/// restricted to those starting with a fixed admissible prefix.
pub struct Enumerate {
    spec: LanguageSpec,
    target: usize,
    floor: usize,
    buf: Vec<Symbol>,
    next_symbol: Vec<Symbol>,
    done: bool,
}

impl Enumerate {
    pub fn new(spec: LanguageSpec, n: usize) -> Self {
        Self::with_prefix(spec, &[], n).expect("empty prefix is admissible")
    }

    pub fn with_prefix(spec: LanguageSpec, prefix: &[Symbol], n: usize) -> Result<Self> {
        check_symbols(prefix, spec.d())?;
        if !is_admissible(prefix, &spec) {
            return Err(Error::NotInLanguage(crate::word::display(prefix)));
        }
        let mut next_symbol = vec![0; n + 1];
        let done = prefix.len() > n;
        if !done {
            next_symbol[prefix.len()] = 0;
        }
        Ok(Enumerate {
            spec,
            target: n,
            floor: prefix.len(),
            buf: prefix.to_vec(),
            next_symbol,
            done,
        })
    }
}

impl Iterator for Enumerate {
    type Item = Word;

    fn next(&mut self) -> Option<Word> {
        if self.done {
            return None;
        }
        if self.floor == self.target {
            self.done = true;
            return Some(Word::from_slice(&self.buf));
        }
        let d = self.spec.d() as Symbol;
        loop {
            let depth = self.buf.len();
            let s = self.next_symbol[depth];
            if s >= d {
                if depth == self.floor {
                    self.done = true;
                    return None;
                }
                self.buf.pop();
                continue;
            }
            self.next_symbol[depth] = s + 1;
            self.buf.push(s);
            if forbidden_suffix(&self.buf, &self.spec).is_some() {
                self.buf.pop();
                continue;
            }
            if self.buf.len() == self.target {
                let out = Word::from_slice(&self.buf);
                self.buf.pop();
                return Some(out);
            }
            self.next_symbol[depth + 1] = 0;
        }
    }
}

/// Lazy lexicographic stream of `L̃_n`.
pub fn enumerate(spec: LanguageSpec, n: usize) -> Enumerate {
    Enumerate::new(spec, n)
}

/// Shortest prefix length giving at least `min_shards` shards (capped at `n`).
fn shard_depth(d: usize, n: usize, min_shards: usize) -> usize {
    let mut depth = 0;
    let mut width = 1usize;
    while width < min_shards && depth < n {
        width = width.saturating_mul(d);
        depth += 1;
    }
    depth
}

/// `L̃_n` in lexicographic order, computed in parallel by sharding on
/// prefixes. The output does not depend on the thread count.
pub fn enumerate_sharded(spec: LanguageSpec, n: usize) -> Vec<Word> {
    let depth = shard_depth(spec.d(), n, 256);
    let prefixes: Vec<Word> = enumerate(spec, depth).collect();
    prefixes
        .par_iter()
        .map(|p| {
            Enumerate::with_prefix(spec, p, n)
                .expect("prefix came from the enumerator")
                .collect::<Vec<_>>()
        })
        .collect::<Vec<_>>()
        .into_iter()
        .flatten()
        .collect()
}

/// Number of words in `L̃_n` satisfying `pred`, counted in parallel shards.
pub fn count_where<F>(spec: LanguageSpec, n: usize, pred: F) -> u64
where
    F: Fn(&[Symbol]) -> bool + Sync,
{
    let depth = shard_depth(spec.d(), n, 256);
    let prefixes: Vec<Word> = enumerate(spec, depth).collect();
    prefixes
        .par_iter()
        .map(|p| {
            if p.len() == n {
                return pred(p) as u64;
            }
            let mut hits = 0;
            let mut buf = p.to_vec();
            walk(&mut buf, &spec, n, &mut |w| {
                if w.len() == n && pred(w) {
                    hits += 1;
                }
                true
            });
            hits
        })
        .sum()
}

/// Calls `visit` on every admissible proper extension of `buf` up to length
/// `max_len`, depth first in lexicographic order. Stops early when `visit`
/// returns false; the return value reports whether the walk finished.
pub fn walk<F>(buf: &mut Vec<Symbol>, spec: &LanguageSpec, max_len: usize, visit: &mut F) -> bool
where
    F: FnMut(&[Symbol]) -> bool,
{
    if buf.len() >= max_len {
        return true;
    }
    for s in 0..spec.d() as Symbol {
        buf.push(s);
        let ok = if forbidden_suffix(buf, spec).is_some() {
            true
        } else {
            visit(buf) && walk(buf, spec, max_len, visit)
        };
        buf.pop();
        if !ok {
            return false;
        }
    }
    true
}

/// Packs a word into a base-`d` integer; `None` if it does not fit.
fn pack(w: &[Symbol], d: usize) -> Option<u128> {
    let mut code: u128 = 0;
    for &s in w {
        code = code.checked_mul(d as u128)?.checked_add(s as u128)?;
    }
    // leading symbol 0 would collide across lengths, but keys are per length
    Some(code)
}

/// Exact counts `count(n, m) = #Ext_m(n)`, with `count(n, 0) = #L̃_n`.
///
/// Entries present in the table are complete; a budget-limited computation
/// leaves later entries absent.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CountTable {
    spec: LanguageSpec,
    n_max: usize,
    m_max: usize,
    entries: BTreeMap<(usize, usize), BigUint>,
}

impl CountTable {
    pub fn new(spec: LanguageSpec, n_max: usize, m_max: usize) -> Self {
        CountTable {
            spec,
            n_max,
            m_max,
            entries: BTreeMap::new(),
        }
    }

    pub fn spec(&self) -> &LanguageSpec {
        &self.spec
    }

    pub fn n_max(&self) -> usize {
        self.n_max
    }

    pub fn m_max(&self) -> usize {
        self.m_max
    }

    pub fn count(&self, n: usize, m: usize) -> Option<&BigUint> {
        self.entries.get(&(n, m))
    }

    pub fn insert(&mut self, n: usize, m: usize, count: BigUint) {
        self.entries.insert((n, m), count);
    }

    pub fn entries(&self) -> impl Iterator<Item = ((usize, usize), &BigUint)> {
        self.entries.iter().map(|(&k, v)| (k, v))
    }

    /// True if every `(n, m)` with `n ≤ n_max`, `m ≤ m_max` is filled.
    pub fn is_complete(&self) -> bool {
        (0..=self.n_max).all(|n| (0..=self.m_max).all(|m| self.entries.contains_key(&(n, m))))
    }

    /// Largest computed depth for length `n` with its count.
    pub fn deepest(&self, n: usize) -> Option<(usize, &BigUint)> {
        self.entries
            .range((n, 0)..=(n, usize::MAX))
            .next_back()
            .map(|(&(_, m), c)| (m, c))
    }

    /// Smallest `m*` such that the counts for length `n` are constant on
    /// `m*..=m_last`, where `m_last` is the deepest contiguous computed depth.
    pub fn stabilization_depth(&self, n: usize) -> Option<usize> {
        let mut counts = Vec::new();
        for m in 0.. {
            match self.entries.get(&(n, m)) {
                Some(c) => counts.push(c),
                None => break,
            }
        }
        let last = counts.last()?;
        let mut m_star = counts.len() - 1;
        while m_star > 0 && counts[m_star - 1] == *last {
            m_star -= 1;
        }
        Some(m_star)
    }
}

/// Resource limit for counting, in visited search nodes.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Budget {
    pub max_nodes: u64,
}

impl Budget {
    pub const UNLIMITED: Budget = Budget {
        max_nodes: u64::MAX,
    };
}

struct LevelResult {
    leaves: u64,
    middles: Vec<HashSet<u128>>,
}

/// Counts for all `(n, m)` with `n + 2m = len` in `wanted`, walking the
/// search tree to depth `len` in parallel shards.
fn count_level(
    spec: &LanguageSpec,
    len: usize,
    wanted: &[(usize, usize)],
    nodes: &AtomicU64,
    budget: Budget,
) -> Option<Vec<BigUint>> {
    let d = spec.d();
    let depth = shard_depth(d, len, 256);
    let prefixes: Vec<Word> = enumerate(*spec, depth).collect();
    if nodes.fetch_add(prefixes.len() as u64, Ordering::Relaxed) > budget.max_nodes {
        return None;
    }
    let aborted = AtomicBool::new(false);
    let ext: Vec<(usize, usize)> = wanted.iter().copied().filter(|&(_, m)| m > 0).collect();

    let record = |w: &[Symbol], acc: &mut LevelResult| {
        acc.leaves += 1;
        for (slot, &(n, m)) in ext.iter().enumerate() {
            let key = pack(&w[m..m + n], d).expect("checked packable");
            acc.middles[slot].insert(key);
        }
    };

    let results: Vec<LevelResult> = prefixes
        .par_iter()
        .map(|prefix| {
            let mut acc = LevelResult {
                leaves: 0,
                middles: vec![HashSet::new(); ext.len()],
            };
            if prefix.len() == len {
                record(prefix, &mut acc);
                return acc;
            }
            let mut buf = prefix.to_vec();
            let mut local = 0u64;
            walk(&mut buf, spec, len, &mut |w| {
                local += 1;
                if local.is_multiple_of(4096) {
                    let total = nodes.fetch_add(4096, Ordering::Relaxed) + 4096;
                    if total > budget.max_nodes || aborted.load(Ordering::Relaxed) {
                        aborted.store(true, Ordering::Relaxed);
                        return false;
                    }
                }
                if w.len() == len {
                    record(w, &mut acc);
                }
                true
            });
            nodes.fetch_add(local % 4096, Ordering::Relaxed);
            acc
        })
        .collect();

    if aborted.load(Ordering::Relaxed) || nodes.load(Ordering::Relaxed) > budget.max_nodes {
        return None;
    }
    let leaves: u64 = results.iter().map(|r| r.leaves).sum();
    let mut merged: Vec<HashSet<u128>> = vec![HashSet::new(); ext.len()];
    for r in results {
        for (dst, src) in merged.iter_mut().zip(r.middles) {
            if dst.is_empty() {
                *dst = src;
            } else {
                dst.extend(src);
            }
        }
    }
    let mut ext_counts = merged.into_iter();
    Some(
        wanted
            .iter()
            .map(|&(_, m)| {
                if m == 0 {
                    BigUint::from(leaves)
                } else {
                    BigUint::from(ext_counts.next().expect("one set per depth").len())
                }
            })
            .collect(),
    )
}

/// Fills `count(n, m)` for every `n ≤ n_max`, `m ≤ m_max`.
pub fn count_table(
    spec: LanguageSpec,
    n_max: usize,
    m_max: usize,
    budget: Budget,
) -> Result<CountTable> {
    fill_table(CountTable::new(spec, n_max, m_max), budget)
}

/// Computes the entries missing from `table`, level by level, so that a
/// budget failure leaves every shorter level complete.
pub fn fill_table(mut table: CountTable, budget: Budget) -> Result<CountTable> {
    let spec = table.spec;
    let (n_max, m_max) = (table.n_max, table.m_max);
    if m_max > 0 && n_max > 0 && pack(&vec![(spec.d() - 1) as Symbol; n_max], spec.d()).is_none() {
        return Err(Error::BadInput(format!(
            "extension counts need words of length {n_max} to fit in 128 bits"
        )));
    }
    let nodes = AtomicU64::new(0);
    for len in 0..=n_max + 2 * m_max {
        let wanted: Vec<(usize, usize)> = (0..=m_max)
            .filter(|&m| 2 * m <= len && len - 2 * m <= n_max)
            .map(|m| (len - 2 * m, m))
            .filter(|key| !table.entries.contains_key(key))
            .collect();
        if wanted.is_empty() {
            continue;
        }
        match count_level(&spec, len, &wanted, &nodes, budget) {
            Some(counts) => {
                for (&(n, m), c) in wanted.iter().zip(counts) {
                    table.entries.insert((n, m), c);
                }
            }
            None => {
                return Err(Error::BudgetExceeded {
                    budget: budget.max_nodes,
                    partial: Box::new(table),
                })
            }
        }
    }
    Ok(table)
}

/// Distinct length-`n` words extendable by `m` symbols on both sides, in
/// lexicographic order.
pub fn extendable_words(spec: LanguageSpec, n: usize, m: usize) -> Vec<Word> {
    if m == 0 {
        return enumerate_sharded(spec, n);
    }
    let total = n + 2 * m;
    let depth = shard_depth(spec.d(), total, 256);
    let prefixes: Vec<Word> = enumerate(spec, depth).collect();
    let shards: Vec<BTreeSet<Word>> = prefixes
        .par_iter()
        .map(|p| {
            let mut mids = BTreeSet::new();
            if p.len() == total {
                mids.insert(Word::from_slice(&p[m..m + n]));
                return mids;
            }
            let mut buf = p.to_vec();
            walk(&mut buf, &spec, total, &mut |w| {
                if w.len() == total {
                    mids.insert(Word::from_slice(&w[m..m + n]));
                }
                true
            });
            mids
        })
        .collect();
    let mut all = BTreeSet::new();
    for s in shards {
        all.extend(s);
    }
    all.into_iter().collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::words::is_admissible_oracle;

    fn w(s: &str) -> Word {
        s.parse().unwrap()
    }

    fn state(s: &str, spec: LanguageSpec) -> EnumState {
        EnumState::from_word(w(s), spec).unwrap()
    }

    #[test]
    fn extend_examples() {
        let sq = LanguageSpec::free(2, 2, 1).unwrap();
        assert!(state("010", sq).extend(1).unwrap().is_none());
        assert_eq!(
            state("010", sq).extend(0).unwrap(),
            None,
            "0100 contains 00"
        );
        for d in 2..=5 {
            let spec = LanguageSpec::free(d, 3, 2).unwrap();
            for s in 0..d as Symbol {
                assert!(EnumState::new(spec).extend(s).unwrap().is_some());
            }
        }
        let four = LanguageSpec::free(2, 4, 1).unwrap();
        let four_plus = LanguageSpec::plus(2, 4, 1).unwrap();
        assert!(state("000", four).extend(0).unwrap().is_none());
        assert!(state("000", four_plus).extend(0).unwrap().is_some());
    }

    #[test]
    fn extend_rejects_bad_symbol() {
        let spec = LanguageSpec::free(2, 3, 1).unwrap();
        assert!(matches!(
            EnumState::new(spec).extend(2),
            Err(Error::BadSymbol { symbol: 2, d: 2 })
        ));
    }

    #[test]
    fn from_word_rejects_inadmissible() {
        let sq = LanguageSpec::free(2, 2, 1).unwrap();
        assert!(matches!(
            EnumState::from_word(w("00"), sq),
            Err(Error::NotInLanguage(_))
        ));
    }

    #[test]
    fn enumerate_examples() {
        let sq = LanguageSpec::free(2, 2, 1).unwrap();
        let got: Vec<String> = enumerate(sq, 3).map(|w| w.to_string()).collect();
        assert_eq!(got, vec!["010", "101"]);
        assert_eq!(enumerate(sq, 4).count(), 0);
        assert_eq!(enumerate(sq, 0).collect::<Vec<_>>(), vec![Word::empty()]);
        let big = LanguageSpec::free(3, 12, 1).unwrap();
        assert_eq!(enumerate(big, 2).count(), 9);
    }

    #[test]
    fn enumerate_is_sorted_and_matches_oracle() {
        let spec = LanguageSpec::plus(2, 7, 3).unwrap();
        for n in 0..=12 {
            let words: Vec<Word> = enumerate(spec, n).collect();
            assert!(words.windows(2).all(|p| p[0] < p[1]));
            let brute: Vec<Word> = (0..1u32 << n)
                .map(|c| Word::new((0..n).rev().map(|i| ((c >> i) & 1) as Symbol).collect()))
                .filter(|v| is_admissible_oracle(v, &spec))
                .collect();
            assert_eq!(words, brute, "n = {n}");
        }
    }

    #[test]
    fn sharded_equals_sequential() {
        let spec = LanguageSpec::free(3, 2, 1).unwrap();
        for n in [0, 1, 5, 9, 12] {
            let seq: Vec<Word> = enumerate(spec, n).collect();
            assert_eq!(enumerate_sharded(spec, n), seq);
        }
    }

    #[test]
    fn with_prefix_restricts() {
        let sq = LanguageSpec::free(3, 2, 1).unwrap();
        let all: Vec<Word> = enumerate(sq, 5).collect();
        let pre = w("01");
        let sub: Vec<Word> = Enumerate::with_prefix(sq, &pre, 5).unwrap().collect();
        let expect: Vec<Word> = all.into_iter().filter(|v| v.starts_with(&pre)).collect();
        assert_eq!(sub, expect);
    }

    #[test]
    fn count_table_square_free_binary() {
        let sq = LanguageSpec::free(2, 2, 1).unwrap();
        let t = count_table(sq, 6, 1, Budget::UNLIMITED).unwrap();
        let c = |n| t.count(n, 0).unwrap().clone();
        assert_eq!(c(0), BigUint::from(1u32));
        assert_eq!(c(1), BigUint::from(2u32));
        assert_eq!(c(2), BigUint::from(2u32));
        assert_eq!(c(3), BigUint::from(2u32));
        assert_eq!(c(4), BigUint::from(0u32));
        assert_eq!(c(6), BigUint::from(0u32));
        // 010 and 101 have no admissible extension on both sides
        assert_eq!(t.count(1, 1).unwrap(), &BigUint::from(2u32));
        assert_eq!(t.count(2, 1).unwrap(), &BigUint::from(0u32));
        assert!(t.is_complete());
    }

    #[test]
    fn count_table_short_words_unconstrained() {
        let spec = LanguageSpec::plus(2, 12, 1).unwrap();
        let t = count_table(spec, 8, 0, Budget::UNLIMITED).unwrap();
        assert_eq!(t.count(8, 0).unwrap(), &BigUint::from(256u32));
        let spec = LanguageSpec::free(3, 9, 2).unwrap();
        let t = count_table(spec, 4, 0, Budget::UNLIMITED).unwrap();
        assert_eq!(t.count(4, 0).unwrap(), &BigUint::from(81u32));
    }

    #[test]
    fn ext_counts_match_brute_force() {
        let spec = LanguageSpec::free(3, 2, 1).unwrap();
        let t = count_table(spec, 6, 2, Budget::UNLIMITED).unwrap();
        for n in 0..=6 {
            for m in 0..=2 {
                let brute = extendable_words(spec, n, m).len();
                let slow = enumerate(spec, n)
                    .filter(|v| enumerate(spec, n + 2 * m).any(|long| long[m..m + n] == v[..]))
                    .count();
                assert_eq!(brute, slow);
                assert_eq!(t.count(n, m).unwrap(), &BigUint::from(brute), "({n},{m})");
            }
        }
    }

    #[test]
    fn budget_returns_partial_table() {
        let spec = LanguageSpec::free(3, 3, 1).unwrap();
        match count_table(spec, 14, 0, Budget { max_nodes: 20_000 }) {
            Err(Error::BudgetExceeded { partial, budget }) => {
                assert_eq!(budget, 20_000);
                assert!(!partial.is_complete());
                let full = count_table(spec, 14, 0, Budget::UNLIMITED).unwrap();
                let mut seen = 0;
                for ((n, m), c) in partial.entries() {
                    assert_eq!(full.count(n, m), Some(c));
                    seen += 1;
                }
                assert!(seen > 0);
            }
            other => panic!("expected budget error, got {other:?}"),
        }
    }

    #[test]
    fn stabilization_depth_reported() {
        let spec = LanguageSpec::free(3, 2, 1).unwrap();
        let t = count_table(spec, 3, 3, Budget::UNLIMITED).unwrap();
        for n in 0..=3 {
            let m_star = t.stabilization_depth(n).unwrap();
            let last = t.count(n, 3).unwrap();
            assert!((m_star..=3).all(|m| t.count(n, m).unwrap() == last));
            if m_star > 0 {
                assert_ne!(t.count(n, m_star - 1).unwrap(), last);
            }
        }
    }

    #[test]
    fn fast_check_agrees_with_oracle_ternary() {
        let specs = [
            LanguageSpec::free(3, 2, 1).unwrap(),
            LanguageSpec::plus(3, 7, 4).unwrap(),
            LanguageSpec::free(3, 3, 1).unwrap(),
        ];
        for n in 0..=7u32 {
            for code in 0..3u32.pow(n) {
                let mut c = code;
                let v: Vec<Symbol> = (0..n)
                    .map(|_| {
                        let s = (c % 3) as Symbol;
                        c /= 3;
                        s
                    })
                    .collect();
                for spec in &specs {
                    assert_eq!(is_admissible(&v, spec), is_admissible_oracle(&v, spec));
                }
            }
        }
    }
}
