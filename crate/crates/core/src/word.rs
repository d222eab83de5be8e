//! Finite words over `{0, …, d−1}`.
//!
//! Symbols are displayed as `0-9` followed by `a-z`, so alphabets of up to
//! 36 symbols round-trip through their string form.

use std::fmt;
use std::ops::Deref;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

pub type Symbol = u8;

/// Largest alphabet with a one-character display form.
pub const MAX_ALPHABET: usize = 36;

const DIGITS: &[u8; MAX_ALPHABET] = b"0123456789abcdefghijklmnopqrstuvwxyz";

pub fn symbol_char(s: Symbol) -> char {
    DIGITS[s as usize] as char
}

pub fn char_symbol(c: char) -> Option<Symbol> {
    let c = c.to_ascii_lowercase();
    DIGITS
        .iter()
        .position(|&b| b as char == c)
        .map(|i| i as Symbol)
}

#[derive(Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Word(Vec<Symbol>);

impl Word {
    pub fn new(symbols: Vec<Symbol>) -> Self {
        Word(symbols)
    }

    pub fn empty() -> Self {
        Word(Vec::new())
    }

    pub fn from_slice(symbols: &[Symbol]) -> Self {
        Word(symbols.to_vec())
    }

    pub fn symbols(&self) -> &[Symbol] {
        &self.0
    }

    pub fn into_symbols(self) -> Vec<Symbol> {
        self.0
    }

    pub fn reversed(&self) -> Word {
        Word(self.0.iter().rev().copied().collect())
    }

    pub fn concat(parts: &[&[Symbol]]) -> Word {
        Word(parts.concat())
    }

    pub fn push(&mut self, s: Symbol) {
        self.0.push(s);
    }

    /// Fails with `BadSymbol` if any symbol is outside `{0, …, d−1}`.
    pub fn check_alphabet(&self, d: usize) -> Result<()> {
        check_symbols(&self.0, d)
    }
}

pub fn check_symbols(symbols: &[Symbol], d: usize) -> Result<()> {
    match symbols.iter().find(|&&s| s as usize >= d) {
        Some(&s) => Err(Error::BadSymbol {
            symbol: s as u32,
            d,
        }),
        None => Ok(()),
    }
}

impl Deref for Word {
    type Target = [Symbol];

    fn deref(&self) -> &[Symbol] {
        &self.0
    }
}

impl From<Vec<Symbol>> for Word {
    fn from(v: Vec<Symbol>) -> Self {
        Word(v)
    }
}

impl From<&[Symbol]> for Word {
    fn from(v: &[Symbol]) -> Self {
        Word(v.to_vec())
    }
}

impl FromStr for Word {
    type Err = Error;

    /// Parses the alphanumeric display form. `ε` and the empty string both
    /// denote the empty word.
    fn from_str(s: &str) -> Result<Word> {
        if s == "ε" {
            return Ok(Word::empty());
        }
        s.chars()
            .map(|c| char_symbol(c).ok_or_else(|| Error::BadInput(format!("bad symbol {c:?}"))))
            .collect::<Result<Vec<_>>>()
            .map(Word)
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &s in &self.0 {
            write!(f, "{}", symbol_char(s))?;
        }
        Ok(())
    }
}

impl fmt::Debug for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Word(\"{self}\")")
    }
}

pub fn display(symbols: &[Symbol]) -> String {
    symbols.iter().map(|&s| symbol_char(s)).collect()
}

impl Serialize for Word {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Word {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Word, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn display_round_trip() {
        let w: Word = "0a1z".parse().unwrap();
        assert_eq!(w.symbols(), &[0, 10, 1, 35]);
        assert_eq!(w.to_string(), "0a1z");
    }

    #[test]
    fn empty_forms() {
        assert!("".parse::<Word>().unwrap().is_empty());
        assert!("ε".parse::<Word>().unwrap().is_empty());
    }

    #[test]
    fn rejects_punctuation() {
        assert!(matches!("0-1".parse::<Word>(), Err(Error::BadInput(_))));
    }

    #[test]
    fn alphabet_check() {
        let w: Word = "012".parse().unwrap();
        assert!(w.check_alphabet(3).is_ok());
        assert!(matches!(
            w.check_alphabet(2),
            Err(Error::BadSymbol { symbol: 2, d: 2 })
        ));
    }

    #[test]
    fn serde_as_string() {
        let w: Word = "0110".parse().unwrap();
        let j = serde_json::to_string(&w).unwrap();
        assert_eq!(j, "\"0110\"");
        let back: Word = serde_json::from_str(&j).unwrap();
        assert_eq!(back, w);
    }
}
