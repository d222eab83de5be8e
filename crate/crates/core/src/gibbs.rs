//! Empirical approximation of the measure of maximal entropy.
//!
//! Take the uniform measure on a finite base set of length-`n` words and
//! average its shifts. At finite `n` a cylinder `[v]` can only be read at
//! offsets keeping `v` inside the window, so
//!
//! `μ_n[v] = (1/K) Σ_{k<K} #{w ∈ base : w[k..k+|v|] = v} / #base`,
//! with `K = n − |v| + 1`.
//!
//! The base is `Ext_m(n)`, which approaches the extendable language from
//! above as `m` grows. All masses are exact rationals.

use std::collections::{BTreeMap, HashMap};

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::entropy::{closed_form_lower_bound, LogBound};
use crate::error::{Error, Result};
use crate::gluing::four_word_gap;
use crate::language::{count_where, extendable_words};
use crate::spec::LanguageSpec;
use crate::structure::{good_words, is_good_word, BLOCK_POWER};
use crate::word::{check_symbols, display, Symbol, Word};

#[derive(Clone, Debug)]
pub struct EmpiricalMeasure {
    spec: LanguageSpec,
    n: usize,
    m: usize,
    base: Vec<Word>,
}

fn ratio(num: u64, den: u64) -> BigRational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

/// Renders an exact rational as `p/q`.
pub fn rational_str(r: &BigRational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

impl EmpiricalMeasure {
    /// Measure built on `Ext_m(n)`.
    pub fn new(spec: LanguageSpec, n: usize, m: usize) -> Result<Self> {
        Self::from_base(spec, n, m, extendable_words(spec, n, m))
    }

    pub fn from_base(spec: LanguageSpec, n: usize, m: usize, base: Vec<Word>) -> Result<Self> {
        if base.is_empty() {
            return Err(Error::EmptyLanguage(n));
        }
        if let Some(w) = base.iter().find(|w| w.len() != n) {
            return Err(Error::BadInput(format!(
                "base word {w} does not have length {n}"
            )));
        }
        Ok(EmpiricalMeasure { spec, n, m, base })
    }

    pub fn spec(&self) -> &LanguageSpec {
        &self.spec
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn base(&self) -> &[Word] {
        &self.base
    }

    fn check_word(&self, v: &[Symbol], extra: usize) -> Result<()> {
        check_symbols(v, self.spec.d()).map_err(|e| Error::BadInput(e.to_string()))?;
        if v.len() + extra > self.n {
            return Err(Error::BadInput(format!(
                "cylinder of length {} does not fit in length {}",
                v.len() + extra,
                self.n
            )));
        }
        Ok(())
    }

    /// Occurrences of `u` at offset `k` followed by `v` at `k + |u| + gap`,
    /// summed over every offset, and the number of offsets.
    fn joint_hits(&self, u: &[Symbol], gap: usize, v: &[Symbol]) -> (u64, usize) {
        let span = u.len() + gap + v.len();
        let offsets = self.n - span + 1;
        let hits = self
            .base
            .par_iter()
            .map(|w| {
                (0..offsets)
                    .filter(|&k| w[k..k + u.len()] == *u && w[k + u.len() + gap..k + span] == *v)
                    .count() as u64
            })
            .sum();
        (hits, offsets)
    }

    /// `μ_n[v]`.
    pub fn measure(&self, v: &[Symbol]) -> Result<BigRational> {
        self.check_word(v, 0)?;
        let (hits, offsets) = self.joint_hits(v, 0, &[]);
        Ok(ratio(hits, offsets as u64 * self.base.len() as u64))
    }

    /// Offset-averaged mass of `[u] ∩ σ^{−(|u|+gap)}[v]`.
    pub fn joint(&self, u: &[Symbol], gap: usize, v: &[Symbol]) -> Result<BigRational> {
        self.check_word(u, gap + v.len())?;
        check_symbols(v, self.spec.d()).map_err(|e| Error::BadInput(e.to_string()))?;
        let (hits, offsets) = self.joint_hits(u, gap, v);
        Ok(ratio(hits, offsets as u64 * self.base.len() as u64))
    }

    /// Occurrence totals of every length-`j` word over the offsets `range`.
    fn cylinder_hits(&self, j: usize, range: std::ops::Range<usize>) -> BTreeMap<Word, u64> {
        let merged = self
            .base
            .par_iter()
            .fold(HashMap::<&[Symbol], u64>::new, |mut acc, w| {
                for k in range.clone() {
                    *acc.entry(&w[k..k + j]).or_insert(0) += 1;
                }
                acc
            })
            .reduce(HashMap::new, |mut a, b| {
                for (k, v) in b {
                    *a.entry(k).or_insert(0) += v;
                }
                a
            });
        merged
            .into_iter()
            .map(|(k, v)| (Word::from_slice(k), v))
            .collect()
    }

    /// Masses of every length-`j` cylinder with positive mass, in
    /// lexicographic order.
    pub fn cylinder_masses(&self, j: usize) -> Result<BTreeMap<Word, BigRational>> {
        if j > self.n {
            return Err(Error::BadInput(format!("j = {j} exceeds n = {}", self.n)));
        }
        let offsets = self.n - j + 1;
        let den = offsets as u64 * self.base.len() as u64;
        Ok(self
            .cylinder_hits(j, 0..offsets)
            .into_iter()
            .map(|(w, h)| (w, ratio(h, den)))
            .collect())
    }

    /// `Σ_v |μ'[v] − μ''[v]|` over length-`j` cylinders, where `μ'` averages
    /// offsets `0..K−1` and `μ''` offsets `1..K`. Zero for a shift-invariant
    /// measure.
    pub fn shift_discrepancy(&self, j: usize) -> Result<BigRational> {
        if j >= self.n {
            return Err(Error::BadInput(format!(
                "shift discrepancy needs j < n, got j = {j}, n = {}",
                self.n
            )));
        }
        let offsets = self.n - j + 1;
        let den = (offsets as u64 - 1) * self.base.len() as u64;
        let left = self.cylinder_hits(j, 0..offsets - 1);
        let right = self.cylinder_hits(j, 1..offsets);
        let mut total = 0u64;
        for (w, &a) in &left {
            let b = right.get(w).copied().unwrap_or(0);
            total += a.abs_diff(b);
        }
        for (w, &b) in &right {
            if !left.contains_key(w) {
                total += b;
            }
        }
        Ok(ratio(total, den))
    }
}

/// `μ_n[v]` on `Ext_m(n)`.
pub fn empirical_measure(
    spec: LanguageSpec,
    n: usize,
    m: usize,
    v: &[Symbol],
) -> Result<BigRational> {
    if v.len() > n {
        return Err(Error::BadInput(format!(
            "|v| = {} exceeds n = {n}",
            v.len()
        )));
    }
    EmpiricalMeasure::new(spec, n, m)?.measure(v)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MassEntry {
    pub word: Word,
    /// Exact mass as `p/q`.
    pub mass: String,
    pub mass_f64: f64,
    /// `mass · e^{j·h_lo}`.
    pub ratio: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GibbsRatioReport {
    pub spec: LanguageSpec,
    pub n: usize,
    pub m: usize,
    pub j: usize,
    pub base_size: usize,
    pub h_lo: LogBound,
    pub good_words: usize,
    pub min_ratio: f64,
    pub argmin: Word,
    pub all_positive: bool,
    pub entries: Vec<MassEntry>,
}

/// `μ_n[v]·e^{j·h_lo}` for every `v ∈ G_j`, with `h_lo` the closed-form
/// lower bound rounded down.
pub fn gibbs_ratio_report(measure: &EmpiricalMeasure, j: usize) -> Result<GibbsRatioReport> {
    let spec = *measure.spec();
    let h_lo = closed_form_lower_bound(&spec)?;
    let masses = measure.cylinder_masses(j)?;
    let scale = (j as f64 * h_lo.value_rounded_down()).exp();
    let zero = BigRational::zero();
    let entries: Vec<MassEntry> = good_words(&spec, j)
        .into_iter()
        .map(|v| {
            let mass = masses.get(&v).unwrap_or(&zero);
            let f = mass.to_f64().unwrap_or(0.0);
            MassEntry {
                mass: rational_str(mass),
                mass_f64: f,
                ratio: f * scale,
                word: v,
            }
        })
        .collect();
    let Some(first) = entries.first() else {
        return Err(Error::EmptyLanguage(j));
    };
    let mut argmin = first;
    for e in &entries {
        if e.ratio < argmin.ratio {
            argmin = e;
        }
    }
    let all_positive = entries
        .iter()
        .all(|e| masses.get(&e.word).is_some_and(|r| r.is_positive()));
    Ok(GibbsRatioReport {
        spec,
        n: measure.n(),
        m: measure.m(),
        j,
        base_size: measure.base().len(),
        h_lo,
        good_words: entries.len(),
        min_ratio: argmin.ratio,
        argmin: argmin.word.clone(),
        all_positive,
        entries,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TwoStepReport {
    pub spec: LanguageSpec,
    pub n: usize,
    pub m: usize,
    pub u: Word,
    pub v: Word,
    pub gap: usize,
    /// Exact joint mass as `p/q`.
    pub joint: String,
    pub joint_f64: f64,
    /// `joint · e^{(|u|+|v|)·h_lo}`.
    pub scaled: f64,
    pub positive: bool,
}

/// Joint mass of `u` followed, after the four-word connector length `T`,
/// by `v`.
pub fn two_step_gibbs_report(
    measure: &EmpiricalMeasure,
    u: &[Symbol],
    v: &[Symbol],
) -> Result<TwoStepReport> {
    let spec = *measure.spec();
    let gap = four_word_gap(&spec)?;
    let h_lo = closed_form_lower_bound(&spec)?;
    for x in [u, v] {
        check_symbols(x, spec.d()).map_err(|e| Error::BadInput(e.to_string()))?;
        if !crate::language::is_admissible(x, &spec) || !is_good_word(x, BLOCK_POWER) {
            return Err(Error::BadInput(format!(
                "{} is not a good word",
                display(x)
            )));
        }
    }
    let joint = measure.joint(u, gap, v)?;
    let f = joint.to_f64().unwrap_or(0.0);
    Ok(TwoStepReport {
        spec,
        n: measure.n(),
        m: measure.m(),
        u: Word::from_slice(u),
        v: Word::from_slice(v),
        gap,
        joint: rational_str(&joint),
        joint_f64: f,
        scaled: f * ((u.len() + v.len()) as f64 * h_lo.value_rounded_down()).exp(),
        positive: joint.is_positive(),
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct EntropyReport {
    pub spec: LanguageSpec,
    pub n: usize,
    pub m: usize,
    pub j: usize,
    /// `H_j = −Σ μ[w] log μ[w]` over length-`j` cylinders.
    pub h_j: f64,
    pub h_j_per_symbol: f64,
    pub support: usize,
    pub factorial_count: String,
    /// `log(#L̃_j)/j`, which `H_j/j` can never exceed.
    pub support_bound: f64,
    pub within_bound: bool,
    pub normalized: bool,
    pub h_lo: Option<LogBound>,
    /// `(1/n)·log #Ext_m(n)`.
    pub h_hi: LogBound,
}

pub fn empirical_entropy(measure: &EmpiricalMeasure, j: usize) -> Result<EntropyReport> {
    if j == 0 {
        return Err(Error::BadInput("entropy needs j >= 1".into()));
    }
    let spec = *measure.spec();
    let masses = measure.cylinder_masses(j)?;
    let total: BigRational = masses.values().sum();
    let h_j: f64 = masses
        .values()
        .map(|r| {
            let p = r.to_f64().unwrap_or(0.0);
            -p * p.ln()
        })
        .sum();
    let factorial = count_where(spec, j, |_| true);
    let support_bound = (factorial as f64).ln() / j as f64;
    let h_j_per_symbol = h_j / j as f64;
    Ok(EntropyReport {
        spec,
        n: measure.n(),
        m: measure.m(),
        j,
        h_j,
        h_j_per_symbol,
        support: masses.len(),
        factorial_count: factorial.to_string(),
        support_bound,
        // slack for the float evaluation of H_j only
        within_bound: h_j_per_symbol <= support_bound + 1e-12,
        normalized: total.is_one(),
        h_lo: closed_form_lower_bound(&spec).ok(),
        h_hi: LogBound::new(measure.n() as u64, BigUint::from(measure.base().len())),
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DiscrepancyRow {
    pub n: usize,
    pub discrepancy: String,
    pub discrepancy_f64: f64,
}

/// Shift discrepancy of length-`j` cylinders for each `n`, on `Ext_m(n)`.
pub fn shift_discrepancy_series(
    spec: LanguageSpec,
    lengths: &[usize],
    m: usize,
    j: usize,
) -> Result<Vec<DiscrepancyRow>> {
    lengths
        .iter()
        .map(|&n| {
            let r = EmpiricalMeasure::new(spec, n, m)?.shift_discrepancy(j)?;
            Ok(DiscrepancyRow {
                n,
                discrepancy_f64: r.to_f64().unwrap_or(f64::NAN),
                discrepancy: rational_str(&r),
            })
        })
        .collect()
}

/// CSV with header `word,mass,mass_f64`.
pub fn distribution_csv(masses: &BTreeMap<Word, BigRational>) -> String {
    let mut out = String::from("word,mass,mass_f64\n");
    for (w, r) in masses {
        out.push_str(&format!(
            "{},{},{}\n",
            w,
            rational_str(r),
            r.to_f64().unwrap_or(f64::NAN)
        ));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::language::enumerate;

    fn w(s: &str) -> Word {
        s.parse().unwrap()
    }

    fn binary() -> LanguageSpec {
        LanguageSpec::plus(2, 12, 1).unwrap()
    }

    fn ternary() -> LanguageSpec {
        LanguageSpec::free(3, 12, 1).unwrap()
    }

    /// Direct evaluation of the offset average, one offset at a time.
    fn brute_measure(base: &[Word], n: usize, v: &[Symbol]) -> BigRational {
        let k_count = n - v.len() + 1;
        let mut acc = BigRational::zero();
        for k in 0..k_count {
            let hits = base.iter().filter(|w| &w[k..k + v.len()] == v).count();
            acc += ratio(hits as u64, base.len() as u64);
        }
        acc / BigRational::from_integer(BigInt::from(k_count))
    }

    #[test]
    fn empty_cylinder_has_full_mass() {
        assert!(empirical_measure(binary(), 6, 0, &[]).unwrap().is_one());
    }

    #[test]
    fn symbol_swap_symmetry() {
        let r = empirical_measure(binary(), 8, 0, &w("0")).unwrap();
        assert_eq!(r, ratio(1, 2));
    }

    #[test]
    fn errors() {
        assert!(matches!(
            empirical_measure(binary(), 3, 0, &w("0101")),
            Err(Error::BadInput(_))
        ));
        let sq = LanguageSpec::free(2, 2, 1).unwrap();
        assert!(matches!(
            empirical_measure(sq, 5, 0, &w("0")),
            Err(Error::EmptyLanguage(5))
        ));
        let mu = EmpiricalMeasure::new(binary(), 4, 0).unwrap();
        assert!(mu.measure(&[2]).is_err());
    }

    #[test]
    fn matches_brute_force() {
        let spec = LanguageSpec::free(2, 3, 1).unwrap();
        for m in 0..=2 {
            let mu = EmpiricalMeasure::new(spec, 7, m).unwrap();
            for j in 0..=4 {
                let masses = mu.cylinder_masses(j).unwrap();
                for v in enumerate(spec, j) {
                    let expect = brute_measure(mu.base(), 7, &v);
                    assert_eq!(mu.measure(&v).unwrap(), expect);
                    assert_eq!(masses.get(&v).cloned().unwrap_or_default(), expect);
                }
            }
        }
    }

    #[test]
    fn normalization() {
        let mu = EmpiricalMeasure::new(ternary(), 6, 1).unwrap();
        for j in 0..=6 {
            let total: BigRational = mu.cylinder_masses(j).unwrap().values().sum();
            assert!(total.is_one(), "j = {j}");
        }
    }

    #[test]
    fn ratios_positive_on_small_ternary() {
        let mu = EmpiricalMeasure::new(ternary(), 8, 0).unwrap();
        let r = gibbs_ratio_report(&mu, 4).unwrap();
        assert_eq!(r.good_words, 78);
        assert!(r.all_positive && r.min_ratio > 0.0);
        // single offset: every base word has mass 1/#base
        let r = gibbs_ratio_report(&mu, 8).unwrap();
        assert!(r.entries.iter().all(|e| e.mass == format!("1/{}", 6561)));
    }

    #[test]
    fn two_step_specializes() {
        let mu = EmpiricalMeasure::new(ternary(), 7, 0).unwrap();
        let r = two_step_gibbs_report(&mu, &[], &[]).unwrap();
        assert_eq!(r.joint, "1/1");
        assert_eq!(r.gap, 1);
        // v = ε: u is read at the offsets where u plus the gap fits
        let u = w("012");
        let joint = mu.joint(&u, 0, &[]).unwrap();
        assert_eq!(joint, mu.measure(&u).unwrap());
        let r = two_step_gibbs_report(&mu, &u, &w("21")).unwrap();
        assert!(r.positive);
        assert!(two_step_gibbs_report(&mu, &w("0000"), &[]).is_err());
    }

    #[test]
    fn entropy_bounds() {
        let mu = EmpiricalMeasure::new(binary(), 8, 0).unwrap();
        let e = empirical_entropy(&mu, 1).unwrap();
        assert!(e.normalized && e.within_bound);
        // full binary language at this length: uniform cylinders
        assert!((e.h_j - 2f64.ln()).abs() < 1e-12);
        let e = empirical_entropy(&mu, 8).unwrap();
        assert!((e.h_j - 256f64.ln()).abs() < 1e-9);
    }

    #[test]
    fn discrepancy_zero_for_full_shift() {
        let mu = EmpiricalMeasure::new(binary(), 8, 0).unwrap();
        assert!(mu.shift_discrepancy(3).unwrap().is_zero());
        let rows =
            shift_discrepancy_series(LanguageSpec::free(2, 3, 1).unwrap(), &[6, 8], 1, 2).unwrap();
        assert_eq!(rows.len(), 2);
    }

    #[test]
    fn csv_layout() {
        let mu = EmpiricalMeasure::new(binary(), 4, 0).unwrap();
        let csv = distribution_csv(&mu.cylinder_masses(1).unwrap());
        assert_eq!(csv, "word,mass,mass_f64\n0,1/2,0.5\n1,1/2,0.5\n");
    }
}
