//! Finite automata deciding irreducibility of compositions.
//!
//! [`AutomatonN`] is the complete interim automaton; read right-to-left it
//! accepts a word iff the last value of its nonsquare chain is a nonsquare.
//! Reversing it, determinizing and pruning non-accepting subsets gives
//! [`PartialDfaM`], whose language is the prefix-closed set of words every
//! prefix of which composes to an irreducible polynomial.

mod export;
mod interim;
mod partial;

use thiserror::Error;

pub use export::{AutomatonJson, FieldJson, LetterJson, StateJson, TransitionJson};
pub use interim::{
    format_subset, parse_subset, AutomatonN, ExportFormat, LazyVerdict, NState, StateSet,
};
pub use partial::{CanonicalForm, PartialDfaM};

use crate::monoid::Alphabet;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum AutomatonError {
    #[error("alphabet is empty")]
    EmptyAlphabet,
    #[error("distinguished and regular states can only be merged when -1 is a square")]
    MergeNotLicensed,
    #[error("unsupported export format {0:?}")]
    UnsupportedFormat(String),
    #[error("word count does not fit in 128 bits")]
    CountOverflow,
    #[error("cannot parse automaton: {0}")]
    Parse(String),
}

/// Builds `N(S)` and the partial DFA derived from it.
pub fn build(alphabet: &Alphabet) -> Result<(AutomatonN, PartialDfaM), AutomatonError> {
    let n = AutomatonN::build(alphabet)?;
    let m = PartialDfaM::from_interim(&n);
    Ok((n, m))
}
