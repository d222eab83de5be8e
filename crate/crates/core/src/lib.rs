//! Power-free languages over finite alphabets.
//!
//! A word is `β`-free when none of its factors is an `α`-power with
//! `α ≥ β` (or `α > β` in the "plus" mode). This crate provides exact
//! admissibility checks, enumeration and counting of the factorial language
//! and its extendable approximations, the decomposition into 4-power
//! concatenations and good words, constructive gluing of good words,
//! certified entropy enclosures, and an empirical approximation of the
//! measure of maximal entropy.

#![forbid(unsafe_code)]

pub mod cache;
pub mod cli;
pub mod entropy;
pub mod error;
pub mod gibbs;
pub mod gluing;
pub mod language;
pub mod spec;
pub mod structure;
pub mod suite;
pub mod word;
pub mod words;

pub use error::{Error, Result};
pub use spec::{LanguageSpec, Mode};
pub use word::{Symbol, Word};
