//! Certified entropy bounds.
//!
//! Every bound is kept in the exact form `(1/a)·log b` with integers `a`,
//! `b`, and every inequality between two such bounds is decided by
//! comparing `b₁^{a₂}` with `b₂^{a₁}` over unbounded integers. Floats appear
//! only as conveniences in reports.
//!
//! Upper bounds come from subadditivity: `h = inf_n (1/n)·log #L_n`, and
//! `#L_n ≤ #Ext_m(n) ≤ #L̃_n`, so every table entry certifies an upper
//! bound. Lower bounds come from same-length gluing of good words: an
//! injective map `G_n^k → L_{k(n+τ)}` gives `h ≥ log(#G_n)/(n+τ)`, which
//! for `n = 4` (and `n = 8` when `d = 2`) yields the closed forms
//! `¼·log(d³−1)` and `⅛·log 47`.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_integer::Roots;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::gluing::same_length_gap;
use crate::language::{count_where, CountTable};
use crate::spec::LanguageSpec;
use crate::structure::{is_good_word, is_power_concat_word, power_concat_words, BLOCK_POWER};

/// The quantity `(1/a)·log b`; `b = 0` stands for `−∞`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LogBound {
    pub a: u64,
    pub b: BigUint,
}

impl LogBound {
    pub fn new(a: u64, b: impl Into<BigUint>) -> Self {
        assert!(a > 0, "log bound needs a positive denominator");
        LogBound { a, b: b.into() }
    }

    /// Exact comparison via `b₁^{a₂}` against `b₂^{a₁}`.
    pub fn cmp_exact(&self, other: &LogBound) -> Ordering {
        let lhs = self.b.pow(other.a as u32);
        let rhs = other.b.pow(self.a as u32);
        lhs.cmp(&rhs)
    }

    pub fn value(&self) -> f64 {
        ln_biguint(&self.b) / self.a as f64
    }

    /// A float no larger than the true value.
    pub fn value_rounded_down(&self) -> f64 {
        let v = self.value();
        v - v.abs() * 8.0 * f64::EPSILON
    }

    /// `b₁^{L/a₁}` and `b₂^{L/a₂}` over the common denominator `L`; the
    /// integer pair whose order decides the comparison.
    pub fn common_witness(&self, other: &LogBound) -> (u64, BigUint, BigUint) {
        let l = num_integer::lcm(self.a, other.a);
        (
            l,
            self.b.pow((l / self.a) as u32),
            other.b.pow((l / other.a) as u32),
        )
    }
}

impl fmt::Display for LogBound {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.a == 1 {
            write!(f, "log {}", self.b)
        } else {
            write!(f, "(1/{}) log {}", self.a, self.b)
        }
    }
}

impl Serialize for LogBound {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("LogBound", 3)?;
        st.serialize_field("a", &self.a)?;
        st.serialize_field("b", &self.b.to_string())?;
        st.serialize_field("value", &self.value())?;
        st.end()
    }
}

fn ln_biguint(b: &BigUint) -> f64 {
    if b.is_zero() {
        return f64::NEG_INFINITY;
    }
    let bits = b.bits();
    if bits <= 1000 {
        return b.to_f64().expect("fits in f64").ln();
    }
    let shift = bits - 64;
    let top = (b >> shift).to_f64().expect("64 bits");
    top.ln() + shift as f64 * std::f64::consts::LN_2
}

/// A certified interval `[h_lo, h_hi]` for the topological entropy.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Enclosure {
    pub spec: LanguageSpec,
    pub h_lo: LogBound,
    pub h_hi: LogBound,
    pub provenance: String,
}

impl Enclosure {
    pub fn new(
        spec: LanguageSpec,
        h_lo: LogBound,
        h_hi: LogBound,
        provenance: String,
    ) -> Result<Self> {
        if h_lo.cmp_exact(&h_hi) == Ordering::Greater {
            return Err(Error::VerificationFailed(format!(
                "lower bound {h_lo} exceeds upper bound {h_hi}"
            )));
        }
        Ok(Enclosure {
            spec,
            h_lo,
            h_hi,
            provenance,
        })
    }
}

/// `(1/n)·log #L̃_n`.
pub fn upper_entropy_bound(table: &CountTable, n: usize) -> Result<LogBound> {
    if n == 0 {
        return Err(Error::BadInput("upper bound needs n >= 1".into()));
    }
    let count = table
        .count(n, 0)
        .ok_or_else(|| Error::MissingData(format!("count({n}, 0) not in table")))?;
    if count.is_zero() {
        return Err(Error::EmptyLanguage(n));
    }
    Ok(LogBound::new(n as u64, count.clone()))
}

/// Smallest `(1/n)·log count(n, m)` over every nonempty table entry.
pub fn best_upper_bound(table: &CountTable) -> Result<(LogBound, usize, usize)> {
    let mut best: Option<(LogBound, usize, usize)> = None;
    for ((n, m), c) in table.entries() {
        if n == 0 {
            continue;
        }
        if c.is_zero() {
            return Err(Error::EmptyLanguage(n));
        }
        let cand = LogBound::new(n as u64, c.clone());
        let better = match &best {
            None => true,
            Some((b, _, _)) => cand.cmp_exact(b) == Ordering::Less,
        };
        if better {
            best = Some((cand, n, m));
        }
    }
    best.ok_or_else(|| Error::MissingData("table has no entries with n >= 1".into()))
}

/// `¼·log(d³−1)` for `d ≥ 3` and `⅛·log 47` for `d = 2`.
pub fn closed_form_lower_bound(spec: &LanguageSpec) -> Result<LogBound> {
    same_length_gap(spec)?;
    let d = spec.d() as u64;
    Ok(if d >= 3 {
        LogBound::new(4, d * d * d - 1)
    } else {
        LogBound::new(8, 47u32)
    })
}

/// Best of the closed form and `log(#G_n)/(n+τ)` over the supplied counts.
///
/// The counts must be of good words in the extendable language; for short
/// lengths where every word extends (e.g. `n ≤ 8` when `β > 8`) the
/// factorial counts qualify.
pub fn lower_entropy_bound(
    spec: &LanguageSpec,
    good_counts: &BTreeMap<usize, BigUint>,
) -> Result<LogBound> {
    let tau = same_length_gap(spec)? as u64;
    if good_counts.is_empty() {
        return Err(Error::BadInput("no good-word counts supplied".into()));
    }
    let mut best = closed_form_lower_bound(spec)?;
    for (&n, c) in good_counts {
        if n == 0 || c.is_zero() {
            continue;
        }
        let cand = LogBound::new(n as u64 + tau, c.clone());
        if cand.cmp_exact(&best) == Ordering::Greater {
            best = cand;
        }
    }
    Ok(best)
}

/// `#G_n` for `n` in the given range, counted over `L̃_n`.
pub fn good_counts(
    spec: &LanguageSpec,
    lengths: impl IntoIterator<Item = usize>,
) -> BTreeMap<usize, BigUint> {
    lengths
        .into_iter()
        .map(|n| {
            let c = count_where(*spec, n, |w| is_good_word(w, BLOCK_POWER));
            (n, BigUint::from(c))
        })
        .collect()
}

/// Enclosure from the closed-form lower bound and the best table upper bound.
pub fn enclosure(spec: &LanguageSpec, table: &CountTable) -> Result<Enclosure> {
    let h_lo = closed_form_lower_bound(spec)?;
    let (h_hi, n, m) = best_upper_bound(table)?;
    Enclosure::new(
        *spec,
        h_lo,
        h_hi,
        format!("lower: same-length gluing closed form; upper: (1/{n}) log #Ext_{m}({n})"),
    )
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct AstarRow {
    pub n: usize,
    /// Distinct words built block by block.
    pub count: String,
    /// Count from filtering enumerated `L̃_n`, when it fit the budget.
    pub filtered_count: Option<String>,
    /// `½(2d)^{n/4}` for `4 | n`, zero otherwise.
    pub bound: String,
    pub margin: String,
    pub holds: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct AstarReport {
    pub spec: LanguageSpec,
    pub k_max: usize,
    pub rows: Vec<AstarRow>,
    pub all_hold: bool,
}

/// Checks `#(A*)_{4k} ≤ ½(2d)^k` and `#(A*)_n = 0` for `4 ∤ n`, for every
/// `n ≤ 4·k_max`. Counts come from building the concatenations directly;
/// when `d^n ≤ filter_limit`, they are cross-checked against the
/// concatenation test applied to every word of `L̃_n`.
pub fn astar_growth_check(
    spec: &LanguageSpec,
    k_max: usize,
    filter_limit: u64,
) -> Result<AstarReport> {
    if k_max == 0 {
        return Err(Error::BadInput("k_max must be at least 1".into()));
    }
    let mut rows = Vec::new();
    for n in 1..=4 * k_max {
        let built = BigUint::from(power_concat_words(spec, n, BLOCK_POWER).len());
        let fits = (spec.d() as f64).powi(n as i32) <= filter_limit as f64;
        let filtered = fits.then(|| {
            BigUint::from(count_where(*spec, n, |w| {
                is_power_concat_word(w, BLOCK_POWER)
            }))
        });
        if let Some(f) = &filtered {
            if *f != built {
                return Err(Error::VerificationFailed(format!(
                    "A* count at length {n}: built {built}, filtered {f}"
                )));
            }
        }
        let bound = if n % 4 == 0 {
            BigUint::from(2 * spec.d()).pow((n / 4) as u32) / 2u32
        } else {
            BigUint::zero()
        };
        let margin = BigInt::from(bound.clone()) - BigInt::from(built.clone());
        rows.push(AstarRow {
            n,
            count: built.to_string(),
            filtered_count: filtered.map(|f| f.to_string()),
            bound: bound.to_string(),
            holds: margin >= BigInt::zero(),
            margin: margin.to_string(),
        });
    }
    let all_hold = rows.iter().all(|r| r.holds);
    Ok(AstarReport {
        spec: *spec,
        k_max,
        rows,
        all_hold,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GapReport {
    pub spec: LanguageSpec,
    /// `¼·log(2d)`, the growth bound for concatenations of 4-powers.
    pub astar_bound: LogBound,
    pub h_lo: LogBound,
    pub common_denominator: u64,
    pub astar_witness: String,
    pub h_lo_witness: String,
    pub holds: bool,
}

/// Exact check that `¼·log(2d) < h_lo`.
pub fn entropy_gap_verdict(spec: &LanguageSpec) -> Result<GapReport> {
    let h_lo = closed_form_lower_bound(spec)?;
    let astar_bound = LogBound::new(4, 2 * spec.d() as u64);
    let (l, gap_b, lo_b) = astar_bound.common_witness(&h_lo);
    Ok(GapReport {
        spec: *spec,
        holds: gap_b < lo_b,
        astar_witness: gap_b.to_string(),
        h_lo_witness: lo_b.to_string(),
        common_denominator: l,
        astar_bound,
        h_lo,
    })
}

/// Continued-fraction convergent `p/q ≥ √n` with `q ≥ min_den`.
pub fn sqrt_upper(n: u64, min_den: u64) -> BigRational {
    let root = n.sqrt();
    if root * root == n {
        return BigRational::from_integer(BigInt::from(root));
    }
    let (mut m, mut dd, mut a) = (0u64, 1u64, root);
    let (mut p_prev, mut p) = (BigInt::one(), BigInt::from(root));
    let (mut q_prev, mut q) = (BigInt::zero(), BigInt::one());
    let nn = BigInt::from(n);
    loop {
        let above = &p * &p >= &nn * &q * &q;
        if above && q >= BigInt::from(min_den) {
            return BigRational::new(p, q);
        }
        m = dd * a - m;
        dd = (n - m * m) / dd;
        a = (root + m) / dd;
        let p_next = BigInt::from(a) * &p + &p_prev;
        let q_next = BigInt::from(a) * &q + &q_prev;
        p_prev = std::mem::replace(&mut p, p_next);
        q_prev = std::mem::replace(&mut q, q_next);
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct QBound {
    pub spec: LanguageSpec,
    /// Exact rational upper bound, as `p/q`.
    pub value: String,
    pub value_f64: f64,
    /// Rational over-approximation of `√47` used when `d = 2`.
    pub sqrt_upper: Option<String>,
    #[serde(skip)]
    pub exact: BigRational,
}

/// Upper bound on `Q = (Σ_i #C_i e^{−ih})²`: `(1 + d/(d³−2d−1))²` for
/// `d ≥ 3`, and `(1 + 2(s+4)/31)²` with `s ≥ √47` rational for `d = 2`.
pub fn q_constant_bound(spec: &LanguageSpec) -> Result<QBound> {
    same_length_gap(spec)?;
    let d = BigInt::from(spec.d());
    let one = BigRational::one();
    let (inner, sqrt) = if spec.d() >= 3 {
        let den = &d * &d * &d - BigInt::from(2) * &d - BigInt::one();
        (one + BigRational::new(d, den), None)
    } else {
        let s = sqrt_upper(47, 1_000_000);
        let term = (s.clone() + BigRational::from_integer(4.into()))
            * BigRational::new(2.into(), 31.into());
        (one + term, Some(s))
    };
    let exact = &inner * &inner;
    Ok(QBound {
        spec: *spec,
        value: format!("{}/{}", exact.numer(), exact.denom()),
        value_f64: exact.to_f64().unwrap_or(f64::NAN),
        sqrt_upper: sqrt.map(|s| format!("{}/{}", s.numer(), s.denom())),
        exact,
    })
}

/// The additive shift `t` in `#L_n ≤ C·e^{(n+t)h}`.
pub fn card_shift(spec: &LanguageSpec) -> Result<usize> {
    same_length_gap(spec)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CardRow {
    pub n: usize,
    pub m: usize,
    pub count: String,
    /// `⌈e^{n·h_lo}⌉`, computed exactly.
    pub lower_required: String,
    pub lower_holds: bool,
    /// `count / (C·e^{(n+t)·h_hi})`; only certified as `m → ∞`.
    pub upper_ratio: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CardReport {
    pub spec: LanguageSpec,
    pub h_lo: LogBound,
    pub h_hi: LogBound,
    pub constant: f64,
    pub shift: usize,
    pub rows: Vec<CardRow>,
    pub all_lower_hold: bool,
}

/// `⌈b^{n/a}⌉`: the least integer `c` with `c^a ≥ b^n`.
pub fn ceil_exp(bound: &LogBound, n: usize) -> BigUint {
    let target = bound.b.pow(n as u32);
    let r = target.nth_root(bound.a as u32);
    if r.pow(bound.a as u32) >= target {
        r
    } else {
        r + 1u32
    }
}

/// Checks `#Ext_m(n) ≥ ⌈e^{n·h_lo}⌉` at the deepest computed `m` for each
/// `n ≥ 1` in the table, and reports the upper-bound ratio as a diagnostic.
pub fn verify_card_bounds(
    spec: &LanguageSpec,
    table: &CountTable,
    enclosure: &Enclosure,
) -> Result<CardReport> {
    let shift = card_shift(spec)?;
    let q = q_constant_bound(spec)?;
    let constant = q.value_f64;
    let h_hi = enclosure.h_hi.value();
    let mut rows = Vec::new();
    for n in 1..=table.n_max() {
        let Some((m, count)) = table.deepest(n) else {
            continue;
        };
        let required = ceil_exp(&enclosure.h_lo, n);
        let upper = constant * ((n + shift) as f64 * h_hi).exp();
        rows.push(CardRow {
            n,
            m,
            count: count.to_string(),
            lower_holds: *count >= required,
            lower_required: required.to_string(),
            upper_ratio: count.to_f64().unwrap_or(f64::INFINITY) / upper,
        });
    }
    if rows.is_empty() {
        return Err(Error::MissingData("no counts with n >= 1".into()));
    }
    let all_lower_hold = rows.iter().all(|r| r.lower_holds);
    Ok(CardReport {
        spec: *spec,
        h_lo: enclosure.h_lo.clone(),
        h_hi: enclosure.h_hi.clone(),
        constant,
        shift,
        rows,
        all_lower_hold,
    })
}
