//! Constructive gluing of good words.
//!
//! Connectors are chosen from the boundary symbols of the words being
//! joined: a connector whose first symbol differs from the periodic
//! continuation of the left word, and whose last symbol differs from the
//! backwards continuation of the right word, leaves every short prefix and
//! suffix repetition count unchanged. Among the valid connectors the
//! lexicographically smallest is used, so certificates are deterministic.
//!
//! Each operation is gated on the parameter regime in which it is known to
//! succeed:
//!
//! | operation          | regime                         | connector length |
//! |--------------------|--------------------------------|------------------|
//! | same length (GbG)  | `d ≥ 3`, `β ≥ 8`               | 1                |
//! | same length (GuG)  | `d = 2`, `β > 8` (incl. `8⁺`)  | 2                |
//! | four words (GGGG)  | `β ≥ 16`                       | 0                |
//! | four words (GpGqGrG)| `d ≥ 3`, `β ≥ 12`             | 1                |
//! | four words (GpGqGrG)| `d = 2`, `β > 12`             | 2                |

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::language::is_admissible;
use crate::spec::LanguageSpec;
use crate::structure::{is_good_word, BLOCK_POWER};
use crate::word::{Symbol, Word};
use crate::words::{is_admissible_oracle, periods};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Claim {
    InLanguage,
    InGood,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Lemma {
    GbG,
    GuG,
    #[serde(rename = "GGGG")]
    Gggg,
    GpGqGrG,
    #[serde(rename = "chain")]
    Chain,
}

/// Marks how a connector was picked among the valid ones.
pub const CONNECTOR_CHOICE: &str = "lexicographic-min";

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GlueCertificate {
    pub inputs: Vec<Word>,
    pub connectors: Vec<Word>,
    pub result: Word,
    pub claim: Claim,
    pub lemma: Lemma,
    pub spec: LanguageSpec,
    pub connector_choice: String,
}

impl GlueCertificate {
    fn new(
        spec: &LanguageSpec,
        lemma: Lemma,
        inputs: Vec<Word>,
        connectors: Vec<Word>,
        claim: Claim,
    ) -> Self {
        let mut result = Vec::new();
        for (i, w) in inputs.iter().enumerate() {
            if i > 0 {
                result.extend_from_slice(&connectors[i - 1]);
            }
            result.extend_from_slice(w);
        }
        GlueCertificate {
            inputs,
            connectors,
            result: result.into(),
            claim,
            lemma,
            spec: *spec,
            connector_choice: CONNECTOR_CHOICE.to_string(),
        }
    }

    /// Replays the certificate against the reference admissibility scan.
    pub fn verify(&self) -> Result<()> {
        if self.inputs.is_empty() || self.connectors.len() + 1 != self.inputs.len() {
            return Err(Error::VerificationFailed(
                "need exactly one connector between consecutive inputs".into(),
            ));
        }
        let mut joined = self.inputs[0].clone().into_symbols();
        for (c, w) in self.connectors.iter().zip(&self.inputs[1..]) {
            joined.extend_from_slice(c);
            joined.extend_from_slice(w);
        }
        if joined[..] != self.result[..] {
            return Err(Error::VerificationFailed(
                "result is not the alternating concatenation".into(),
            ));
        }
        self.result.check_alphabet(self.spec.d())?;
        if !is_admissible_oracle(&self.result, &self.spec) {
            return Err(Error::VerificationFailed(format!(
                "{} is not admissible",
                self.result
            )));
        }
        if self.claim == Claim::InGood && !is_good_word(&self.result, BLOCK_POWER) {
            return Err(Error::VerificationFailed(format!(
                "{} is not a good word",
                self.result
            )));
        }
        Ok(())
    }
}

/// A symbol `a` such that appending any word not starting with `a` keeps
/// `pre_ℓ(v)` unchanged for every `ℓ ≤ ⌈|v|/2⌉`.
///
/// If `v` has a period `k ≤ ⌈|v|/2⌉`, the least such `k` determines `a` as
/// the next symbol of `(v[..k])^∞`; otherwise every symbol works and the
/// smallest is returned.
pub fn block_symbol(v: &[Symbol]) -> Result<Symbol> {
    let half = v.len().div_ceil(2);
    let least = periods(v)?.into_iter().find(|&p| p <= half);
    Ok(match least {
        Some(k) => v[v.len() % k],
        None => 0,
    })
}

/// `(a1, a2)`: the symbols a connector must avoid at its first and last
/// position to preserve the short prefix counts of `v` and the short suffix
/// counts of `w`.
pub fn boundary_symbols(v: &[Symbol], w: &[Symbol]) -> Result<(Symbol, Symbol)> {
    let rev: Vec<Symbol> = w.iter().rev().copied().collect();
    Ok((block_symbol(v)?, block_symbol(&rev)?))
}

/// Smallest connector of length `len` avoiding `a1` first and `a2` last.
fn smallest_connector(len: usize, a1: Symbol, a2: Symbol, d: usize) -> Option<Word> {
    let avoid = |bad: &[Symbol]| (0..d as Symbol).find(|s| !bad.contains(s));
    match len {
        0 => Some(Word::empty()),
        1 => avoid(&[a1, a2]).map(|b| Word::new(vec![b])),
        _ => {
            let mut u = vec![0; len];
            u[0] = avoid(&[a1])?;
            u[len - 1] = avoid(&[a2])?;
            Some(Word::new(u))
        }
    }
}

/// Connector length for same-length gluing, or `UnsupportedRegime`.
pub fn same_length_gap(spec: &LanguageSpec) -> Result<usize> {
    if spec.d() >= 3 && spec.beta_at_least(8) {
        Ok(1)
    } else if spec.d() == 2 && spec.beta_exceeds(8) {
        Ok(2)
    } else {
        Err(Error::UnsupportedRegime(format!(
            "same-length gluing needs d >= 3 and beta >= 8, or d = 2 and beta > 8; got {spec}"
        )))
    }
}

/// Connector length for four-word gluing, or `UnsupportedRegime`.
pub fn four_word_gap(spec: &LanguageSpec) -> Result<usize> {
    if spec.beta_at_least(16) {
        Ok(0)
    } else if spec.d() >= 3 && spec.beta_at_least(12) {
        Ok(1)
    } else if spec.d() == 2 && spec.beta_exceeds(12) {
        Ok(2)
    } else {
        Err(Error::UnsupportedRegime(format!(
            "four-word gluing needs beta >= 16, d >= 3 and beta >= 12, or d = 2 and beta > 12; got {spec}"
        )))
    }
}

fn require_good(w: &[Symbol], spec: &LanguageSpec) -> Result<()> {
    crate::word::check_symbols(w, spec.d()).map_err(|e| Error::BadInput(e.to_string()))?;
    if !is_admissible(w, spec) {
        return Err(Error::BadInput(format!(
            "{} is not in the language",
            crate::word::display(w)
        )));
    }
    if !is_good_word(w, BLOCK_POWER) {
        return Err(Error::BadInput(format!(
            "{} begins or ends with a 4-power",
            crate::word::display(w)
        )));
    }
    Ok(())
}

fn connector_between(v: &[Symbol], w: &[Symbol], len: usize, d: usize) -> Result<Word> {
    // an empty side places no constraint on the connector
    let rev: Vec<Symbol> = w.iter().rev().copied().collect();
    let a1 = if v.is_empty() { 0 } else { block_symbol(v)? };
    let a2 = if w.is_empty() { 0 } else { block_symbol(&rev)? };
    smallest_connector(len, a1, a2, d).ok_or_else(|| {
        Error::UnsupportedRegime(format!("no connector of length {len} over {d} symbols"))
    })
}

/// Glues two good words of equal length (regime already checked). The result
/// is verified to be admissible and good.
fn glue_pair(v: &[Symbol], w: &[Symbol], spec: &LanguageSpec, gap: usize) -> Result<(Word, Word)> {
    let u = connector_between(v, w, gap, spec.d())?;
    let joined = Word::concat(&[v, &u, w]);
    if !is_admissible(&joined, spec) || !is_good_word(&joined, BLOCK_POWER) {
        return Err(Error::VerificationFailed(format!(
            "gluing {} and {} with {u} gave {joined}, which is not good",
            crate::word::display(v),
            crate::word::display(w)
        )));
    }
    Ok((u, joined))
}

/// `v·u·w ∈ G` for good `v`, `w` of the same length.
pub fn glue_same_length(
    v: &[Symbol],
    w: &[Symbol],
    spec: &LanguageSpec,
) -> Result<GlueCertificate> {
    let gap = same_length_gap(spec)?;
    require_good(v, spec)?;
    require_good(w, spec)?;
    if v.len() != w.len() {
        return Err(Error::BadInput(format!(
            "lengths differ: {} vs {}",
            v.len(),
            w.len()
        )));
    }
    let (u, _) = glue_pair(v, w, spec, gap)?;
    let lemma = if gap == 1 { Lemma::GbG } else { Lemma::GuG };
    Ok(GlueCertificate::new(
        spec,
        lemma,
        vec![v.into(), w.into()],
        vec![u],
        Claim::InGood,
    ))
}

/// `u·p·v·q·w·r·x ∈ L` for good `u, v, w, x` of any lengths.
pub fn glue_four(
    u: &[Symbol],
    v: &[Symbol],
    w: &[Symbol],
    x: &[Symbol],
    spec: &LanguageSpec,
) -> Result<GlueCertificate> {
    let gap = four_word_gap(spec)?;
    let inputs = [u, v, w, x];
    for word in inputs {
        require_good(word, spec)?;
    }
    let connectors = inputs
        .windows(2)
        .map(|pair| connector_between(pair[0], pair[1], gap, spec.d()))
        .collect::<Result<Vec<_>>>()?;
    let lemma = if gap == 0 {
        Lemma::Gggg
    } else {
        Lemma::GpGqGrG
    };
    let cert = GlueCertificate::new(
        spec,
        lemma,
        inputs.iter().map(|&s| Word::from_slice(s)).collect(),
        connectors,
        Claim::InLanguage,
    );
    if !is_admissible(&cert.result, spec) {
        return Err(Error::VerificationFailed(format!(
            "four-word gluing produced inadmissible {}",
            cert.result
        )));
    }
    Ok(cert)
}

/// Glues `2^ℓ` good words of equal length into one good word by gluing the
/// two halves recursively and then joining them.
fn glue_doubling(words: &[Word], spec: &LanguageSpec, gap: usize) -> Result<(Word, Vec<Word>)> {
    if words.len() == 1 {
        return Ok((words[0].clone(), Vec::new()));
    }
    let (left, right) = words.split_at(words.len() / 2);
    let (lw, mut lc) = glue_doubling(left, spec, gap)?;
    let (rw, rc) = glue_doubling(right, spec, gap)?;
    let (u, joined) = glue_pair(&lw, &rw, spec, gap)?;
    lc.push(u);
    lc.extend(rc);
    Ok((joined, lc))
}

/// `w⁽¹⁾u⁽¹⁾w⁽²⁾⋯u⁽ᵏ⁻¹⁾w⁽ᵏ⁾ ∈ L` for good words of a common length.
///
/// The list is padded to a power of two with copies of its last word, glued
/// by doubling, and the result truncated back to the first `k` words. For
/// `k` a power of two the result is also good.
pub fn glue_chain(words: &[Word], spec: &LanguageSpec) -> Result<GlueCertificate> {
    let gap = same_length_gap(spec)?;
    let first = words
        .first()
        .ok_or_else(|| Error::BadInput("nothing to glue".into()))?;
    if let Some(bad) = words.iter().find(|w| w.len() != first.len()) {
        return Err(Error::LengthMismatch(format!(
            "{} has length {}, expected {}",
            bad,
            bad.len(),
            first.len()
        )));
    }
    for w in words {
        require_good(w, spec)?;
    }
    let k = words.len();
    let mut padded = words.to_vec();
    padded.resize(k.next_power_of_two(), words[k - 1].clone());
    let (_, mut connectors) = glue_doubling(&padded, spec, gap)?;
    connectors.truncate(k - 1);
    let claim = if k.is_power_of_two() {
        Claim::InGood
    } else {
        Claim::InLanguage
    };
    let cert = GlueCertificate::new(spec, Lemma::Chain, words.to_vec(), connectors, claim);
    if !is_admissible(&cert.result, spec) {
        return Err(Error::VerificationFailed(format!(
            "truncated chain {} is not admissible",
            cert.result
        )));
    }
    Ok(cert)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::structure::good_words;
    use crate::words::pre_count;
    use crate::words::suf_count;

    fn w(s: &str) -> Word {
        s.parse().unwrap()
    }

    fn ternary() -> LanguageSpec {
        LanguageSpec::free(3, 12, 1).unwrap()
    }

    fn binary() -> LanguageSpec {
        LanguageSpec::plus(2, 12, 1).unwrap()
    }

    /// Tries every symbol and keeps those satisfying the preservation
    /// contract for all short `ℓ` and every continuation up to length 3.
    fn valid_blockers(v: &[Symbol], d: usize) -> Vec<Symbol> {
        let half = v.len().div_ceil(2);
        (0..d as Symbol)
            .filter(|&a| {
                (0..d as Symbol).filter(|&s| s != a).all(|s| {
                    let vu = Word::concat(&[v, &[s], &[0, 1]]);
                    (1..=half).all(|l| pre_count(&vu, l).unwrap() == pre_count(v, l).unwrap())
                })
            })
            .collect()
    }

    #[test]
    fn block_symbol_examples() {
        // letters a, b map to 10, 11
        assert_eq!(block_symbol(&w("aa")).unwrap(), 10);
        assert_eq!(block_symbol(&w("ab")).unwrap(), 0);
        assert_eq!(block_symbol(&w("aba")).unwrap(), 11);
        assert!(matches!(block_symbol(&[]), Err(Error::EmptyWord)));
    }

    #[test]
    fn block_symbol_is_a_valid_blocker() {
        for n in 1..=9 {
            for code in 0..3u32.pow(n) {
                let mut c = code;
                let v: Vec<Symbol> = (0..n)
                    .map(|_| {
                        let s = (c % 3) as Symbol;
                        c /= 3;
                        s
                    })
                    .collect();
                let a = block_symbol(&v).unwrap();
                assert!(valid_blockers(&v, 3).contains(&a), "{v:?} -> {a}");
            }
        }
    }

    #[test]
    fn boundary_symbol_examples() {
        assert_eq!(boundary_symbols(&w("aa"), &w("aa")).unwrap(), (10, 10));
        assert_eq!(boundary_symbols(&w("ab"), &w("ba")).unwrap(), (0, 0));
        assert_eq!(boundary_symbols(&w("aba"), &w("aba")).unwrap(), (11, 11));
        assert!(matches!(
            boundary_symbols(&w("a"), &[]),
            Err(Error::EmptyWord)
        ));
    }

    #[test]
    fn same_length_exhaustive_ternary_g4() {
        let spec = ternary();
        let g4 = good_words(&spec, 4);
        assert_eq!(g4.len(), 78);
        for v in &g4 {
            for x in &g4 {
                let cert = glue_same_length(v, x, &spec).unwrap();
                assert_eq!(cert.lemma, Lemma::GbG);
                assert_eq!(cert.connectors[0].len(), 1);
                cert.verify().unwrap();
                let r = &cert.result;
                for l in 1..=2 {
                    assert_eq!(pre_count(r, l).unwrap(), pre_count(v, l).unwrap());
                    assert_eq!(suf_count(r, l).unwrap(), suf_count(x, l).unwrap());
                }
            }
        }
    }

    #[test]
    fn same_length_binary_uses_two_symbols() {
        let spec = binary();
        let g4 = good_words(&spec, 4);
        assert_eq!(g4.len(), 14);
        for v in &g4 {
            for x in &g4 {
                let cert = glue_same_length(v, x, &spec).unwrap();
                assert_eq!(cert.lemma, Lemma::GuG);
                assert_eq!(cert.connectors[0].len(), 2);
                cert.verify().unwrap();
            }
        }
    }

    #[test]
    fn same_length_small_example() {
        let spec = ternary();
        let v = w("01");
        let cert = glue_same_length(&v, &v, &spec).unwrap();
        // boundary symbols of 01 are unconstrained (0, 0), so b = 1
        assert_eq!(cert.result, w("01101"));
        cert.verify().unwrap();
    }

    #[test]
    fn same_length_regime_and_input_errors() {
        let low = LanguageSpec::free(3, 15, 2).unwrap();
        assert!(matches!(
            glue_same_length(&w("01"), &w("01"), &low),
            Err(Error::UnsupportedRegime(_))
        ));
        let eight = LanguageSpec::free(2, 8, 1).unwrap();
        assert!(matches!(
            glue_same_length(&w("01"), &w("01"), &eight),
            Err(Error::UnsupportedRegime(_))
        ));
        let eight_plus = LanguageSpec::plus(2, 8, 1).unwrap();
        assert!(glue_same_length(&w("01"), &w("10"), &eight_plus).is_ok());
        let spec = ternary();
        assert!(matches!(
            glue_same_length(&w("01"), &w("012"), &spec),
            Err(Error::BadInput(_))
        ));
        assert!(matches!(
            glue_same_length(&w("0000"), &w("0120"), &spec),
            Err(Error::BadInput(_))
        ));
    }

    #[test]
    fn four_word_regimes() {
        let g16 = LanguageSpec::free(2, 16, 1).unwrap();
        assert_eq!(four_word_gap(&g16).unwrap(), 0);
        assert_eq!(four_word_gap(&ternary()).unwrap(), 1);
        assert_eq!(four_word_gap(&binary()).unwrap(), 2);
        assert!(four_word_gap(&LanguageSpec::free(2, 12, 1).unwrap()).is_err());
        assert!(four_word_gap(&LanguageSpec::free(3, 11, 1).unwrap()).is_err());
    }

    #[test]
    fn four_word_examples() {
        let g16 = LanguageSpec::free(2, 16, 1).unwrap();
        let cert = glue_four(&w("0001"), &w("0111"), &w("010"), &w("1"), &g16).unwrap();
        assert_eq!(cert.lemma, Lemma::Gggg);
        assert!(cert.connectors.iter().all(|c| c.is_empty()));
        assert_eq!(cert.result, w("000101110101"));
        cert.verify().unwrap();

        let spec = ternary();
        let cert = glue_four(&w("0001"), &w("1112"), &w("01"), &w("2"), &spec).unwrap();
        assert!(cert.connectors.iter().all(|c| c.len() == 1));
        cert.verify().unwrap();

        let spec = binary();
        let cert = glue_four(&w("0001"), &w("0111"), &w("01"), &w("1"), &spec).unwrap();
        assert!(cert.connectors.iter().all(|c| c.len() == 2));
        cert.verify().unwrap();
    }

    #[test]
    fn chain_examples() {
        let spec = ternary();
        let v = w("0102");
        let one = glue_chain(std::slice::from_ref(&v), &spec).unwrap();
        assert_eq!(one.result, v);
        assert!(one.connectors.is_empty());

        let x = w("1201");
        let two = glue_chain(&[v.clone(), x.clone()], &spec).unwrap();
        let pair = glue_same_length(&v, &x, &spec).unwrap();
        assert_eq!(two.result, pair.result);
        assert_eq!(two.claim, Claim::InGood);

        let three = glue_chain(&[v.clone(), x.clone(), v.clone()], &spec).unwrap();
        assert_eq!(three.result.len(), 14);
        assert_eq!(three.claim, Claim::InLanguage);
        three.verify().unwrap();
    }

    #[test]
    fn chain_errors() {
        let spec = ternary();
        assert!(matches!(glue_chain(&[], &spec), Err(Error::BadInput(_))));
        assert!(matches!(
            glue_chain(&[w("01"), w("012")], &spec),
            Err(Error::LengthMismatch(_))
        ));
        assert!(matches!(
            glue_chain(&[w("0000")], &spec),
            Err(Error::BadInput(_))
        ));
    }

    #[test]
    fn certificate_json_shape() {
        let spec = ternary();
        let cert = glue_same_length(&w("01"), &w("01"), &spec).unwrap();
        let v: serde_json::Value = serde_json::to_value(&cert).unwrap();
        assert_eq!(v["inputs"], serde_json::json!(["01", "01"]));
        assert_eq!(v["connectors"], serde_json::json!(["1"]));
        assert_eq!(v["result"], "01101");
        assert_eq!(v["claim"], "IN_GOOD");
        assert_eq!(v["lemma"], "GbG");
        let back: GlueCertificate = serde_json::from_value(v).unwrap();
        assert_eq!(back, cert);
    }

    #[test]
    fn tampered_certificate_fails() {
        let spec = binary();
        let mut cert = glue_same_length(&w("01"), &w("01"), &spec).unwrap();
        cert.result = w("0000000000000");
        assert!(cert.verify().is_err());
    }
}
