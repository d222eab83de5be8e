//! Language parameters: alphabet size, threshold exponent and strictness.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::word::MAX_ALPHABET;

/// Whether exponents equal to the threshold are forbidden (`Free`) or
/// admitted (`Plus`).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    /// Forbids every exponent `α ≥ β`.
    Free,
    /// Forbids every exponent `α > β`.
    Plus,
}

/// The pair `(d, β)` with a strictness mode. `β = p/q` is kept reduced.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "RawSpec", into = "RawSpec")]
pub struct LanguageSpec {
    d: usize,
    num: u64,
    den: u64,
    mode: Mode,
}

#[derive(Serialize, Deserialize)]
struct RawSpec {
    d: usize,
    beta: [u64; 2],
    mode: Mode,
}

impl TryFrom<RawSpec> for LanguageSpec {
    type Error = Error;

    fn try_from(raw: RawSpec) -> Result<Self> {
        LanguageSpec::new(raw.d, raw.beta[0], raw.beta[1], raw.mode)
    }
}

impl From<LanguageSpec> for RawSpec {
    fn from(s: LanguageSpec) -> Self {
        RawSpec {
            d: s.d,
            beta: [s.num, s.den],
            mode: s.mode,
        }
    }
}

impl LanguageSpec {
    /// `β = num/den`; must satisfy `2 ≤ d ≤ 36` and `β > 1`.
    pub fn new(d: usize, num: u64, den: u64, mode: Mode) -> Result<Self> {
        if !(2..=MAX_ALPHABET).contains(&d) {
            return Err(Error::InvalidSpec(format!(
                "alphabet size {d} outside 2..={MAX_ALPHABET}"
            )));
        }
        if den == 0 {
            return Err(Error::InvalidSpec("zero denominator".into()));
        }
        if num <= den {
            return Err(Error::InvalidSpec(format!(
                "beta {num}/{den} must exceed 1"
            )));
        }
        let g = num.gcd(&den);
        Ok(LanguageSpec {
            d,
            num: num / g,
            den: den / g,
            mode,
        })
    }

    pub fn free(d: usize, num: u64, den: u64) -> Result<Self> {
        Self::new(d, num, den, Mode::Free)
    }

    pub fn plus(d: usize, num: u64, den: u64) -> Result<Self> {
        Self::new(d, num, den, Mode::Plus)
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn mode(&self) -> Mode {
        self.mode
    }

    /// Reduced `(p, q)` with `β = p/q`.
    pub fn beta_parts(&self) -> (u64, u64) {
        (self.num, self.den)
    }

    pub fn beta(&self) -> BigRational {
        BigRational::new(BigInt::from(self.num), BigInt::from(self.den))
    }

    /// True if a repetition of length `len` with period `period` is
    /// forbidden, i.e. `len/period ≥ β` (free) or `> β` (plus).
    #[inline]
    pub fn forbids(&self, len: usize, period: usize) -> bool {
        let lhs = len as u128 * self.den as u128;
        let rhs = self.num as u128 * period as u128;
        match self.mode {
            Mode::Free => lhs >= rhs,
            Mode::Plus => lhs > rhs,
        }
    }

    /// Shortest length at which period `period` becomes forbidden.
    #[inline]
    pub fn min_forbidden_len(&self, period: usize) -> usize {
        let prod = self.num as u128 * period as u128;
        let q = self.den as u128;
        let len = match self.mode {
            Mode::Free => prod.div_ceil(q),
            Mode::Plus => prod / q + 1,
        };
        len.min(usize::MAX as u128) as usize
    }

    /// `β ≥ t` in the order where `t⁺` sits just above `t`.
    pub fn beta_at_least(&self, t: u64) -> bool {
        self.num as u128 >= t as u128 * self.den as u128
    }

    /// `β > t` in the same order, so `t⁺` exceeds `t`.
    pub fn beta_exceeds(&self, t: u64) -> bool {
        let lhs = self.num as u128;
        let rhs = t as u128 * self.den as u128;
        lhs > rhs || (lhs == rhs && self.mode == Mode::Plus)
    }

    /// Short label such as `d2-b12_1-plus`, usable in file names.
    pub fn label(&self) -> String {
        let mode = match self.mode {
            Mode::Free => "free",
            Mode::Plus => "plus",
        };
        format!("d{}-b{}_{}-{}", self.d, self.num, self.den, mode)
    }
}

impl fmt::Display for LanguageSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "d={}, beta={}", self.d, self.num)?;
        if self.den != 1 {
            write!(f, "/{}", self.den)?;
        }
        if self.mode == Mode::Plus {
            write!(f, "+")?;
        }
        Ok(())
    }
}

/// A threshold written `P`, `P/Q`, or either followed by `+`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct BetaArg {
    pub num: u64,
    pub den: u64,
    pub plus: bool,
}

impl FromStr for BetaArg {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let (body, plus) = match s.strip_suffix('+') {
            Some(b) => (b, true),
            None => (s, false),
        };
        let bad = || Error::InvalidSpec(format!("cannot parse beta {s:?}"));
        let (num, den) = match body.split_once('/') {
            Some((p, q)) => (
                p.trim().parse().map_err(|_| bad())?,
                q.trim().parse().map_err(|_| bad())?,
            ),
            None => (body.parse().map_err(|_| bad())?, 1),
        };
        Ok(BetaArg { num, den, plus })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reduces_beta() {
        let s = LanguageSpec::free(2, 14, 6).unwrap();
        assert_eq!(s.beta_parts(), (7, 3));
        assert_eq!(s.to_string(), "d=2, beta=7/3");
    }

    #[test]
    fn rejects_bad_parameters() {
        assert!(LanguageSpec::free(1, 3, 1).is_err());
        assert!(LanguageSpec::free(37, 3, 1).is_err());
        assert!(LanguageSpec::free(2, 1, 1).is_err());
        assert!(LanguageSpec::free(2, 3, 0).is_err());
    }

    #[test]
    fn boundary_exponent_depends_on_mode() {
        let free = LanguageSpec::free(2, 4, 1).unwrap();
        let plus = LanguageSpec::plus(2, 4, 1).unwrap();
        assert!(free.forbids(4, 1));
        assert!(!plus.forbids(4, 1));
        assert!(plus.forbids(5, 1));
        assert_eq!(free.min_forbidden_len(1), 4);
        assert_eq!(plus.min_forbidden_len(1), 5);
        let frac = LanguageSpec::plus(2, 7, 3).unwrap();
        // 7/3 with period 3 is exactly length 7
        assert!(!frac.forbids(7, 3));
        assert!(frac.forbids(8, 3));
        assert_eq!(frac.min_forbidden_len(3), 8);
    }

    #[test]
    fn regime_order() {
        let s8 = LanguageSpec::free(2, 8, 1).unwrap();
        let s8p = LanguageSpec::plus(2, 8, 1).unwrap();
        let s17_2 = LanguageSpec::free(2, 17, 2).unwrap();
        assert!(s8.beta_at_least(8) && !s8.beta_exceeds(8));
        assert!(s8p.beta_exceeds(8));
        assert!(s17_2.beta_exceeds(8) && !s17_2.beta_at_least(9));
    }

    #[test]
    fn parse_beta() {
        assert_eq!(
            "12+".parse::<BetaArg>().unwrap(),
            BetaArg {
                num: 12,
                den: 1,
                plus: true
            }
        );
        assert_eq!(
            "7/3".parse::<BetaArg>().unwrap(),
            BetaArg {
                num: 7,
                den: 3,
                plus: false
            }
        );
        assert!("x".parse::<BetaArg>().is_err());
    }

    #[test]
    fn serde_shape() {
        let s = LanguageSpec::plus(2, 12, 1).unwrap();
        let j = serde_json::to_string(&s).unwrap();
        assert_eq!(j, r#"{"d":2,"beta":[12,1],"mode":"plus"}"#);
        let back: LanguageSpec = serde_json::from_str(&j).unwrap();
        assert_eq!(back, s);
    }
}
