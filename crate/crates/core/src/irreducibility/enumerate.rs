use std::sync::Arc;

use crate::automaton::PartialDfaM;
use crate::field::{FqCtx, FqElem};
use crate::monoid::{Alphabet, Freedom, Word};
use crate::poly::FqPoly;

use super::IrrError;

/// An accepted word together with the state of the partial DFA it ends in.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LevelEntry {
    pub word: Word,
    pub state: u32,
}

/// All accepted words of one length, in lexicographic order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Level {
    pub length: usize,
    pub entries: Vec<LevelEntry>,
}

impl Level {
    /// Level 0: just the empty word, at the start state.
    pub fn root(m: &PartialDfaM) -> Level {
        Level {
            length: 0,
            entries: vec![LevelEntry {
                word: Word::empty(),
                state: m.start(),
            }],
        }
    }

    /// Appends every letter to every word and keeps the defined transitions.
    /// Prefix-closedness makes this reach every accepted word of the next length.
    pub fn extend(&self, m: &PartialDfaM) -> Level {
        let mut entries = Vec::new();
        for e in &self.entries {
            for letter in 0..m.alphabet().len() {
                if let Some(state) = m.next(e.state, letter) {
                    let mut word = e.word.clone();
                    word.push(letter);
                    entries.push(LevelEntry { word, state });
                }
            }
        }
        Level {
            length: self.length + 1,
            entries,
        }
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn words(&self) -> impl Iterator<Item = &Word> {
        self.entries.iter().map(|e| &e.word)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LevelListing {
    pub level: Level,
    /// Whether distinct words are known to give distinct polynomials.
    /// Listing words is valid either way.
    pub freedom: Freedom,
}

/// All accepted words of length `n` over `alphabet`.
pub fn enumerate_level(alphabet: &Alphabet, n: usize) -> Result<LevelListing, IrrError> {
    let (_, m) = crate::automaton::build(alphabet)?;
    Ok(LevelListing {
        level: enumerate_level_with(&m, n),
        freedom: alphabet.freedom_certificate(),
    })
}

pub fn enumerate_level_with(m: &PartialDfaM, n: usize) -> Level {
    (0..n).fold(Level::root(m), |level, _| level.extend(m))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ShiftedComposition {
    pub shift: FqElem,
    pub word: Word,
    /// `π(word)(x + shift)`
    pub poly: FqPoly,
}

/// Streams the monic irreducible compositions of `n` monic quadratics, as
/// `π(w)(x + a)` for each shift `a` (outer loop) and accepted word `w` over
/// the maximal alphabet (inner loop). Each polynomial is built inside out
/// starting from `x + a`.
#[derive(Debug)]
pub struct IrreducibleStream {
    ctx: Arc<FqCtx>,
    alphabet: Alphabet,
    words: Vec<Word>,
    shift: u32,
    pos: usize,
}

impl IrreducibleStream {
    pub fn words(&self) -> &[Word] {
        &self.words
    }

    /// Total number of polynomials the stream yields.
    pub fn total(&self) -> usize {
        self.words.len() * self.ctx.order() as usize
    }
}

impl Iterator for IrreducibleStream {
    type Item = ShiftedComposition;

    fn next(&mut self) -> Option<ShiftedComposition> {
        if self.pos == self.words.len() {
            self.pos = 0;
            self.shift += 1;
        }
        let shift = self.ctx.elem(self.shift)?;
        let word = self.words.get(self.pos)?.clone();
        self.pos += 1;
        let poly = self
            .alphabet
            .pi_from(&word, FqPoly::linear(&self.ctx, shift));
        Some(ShiftedComposition { shift, word, poly })
    }
}

pub fn enumerate_irreducible_degree(
    ctx: &Arc<FqCtx>,
    n: usize,
) -> Result<IrreducibleStream, IrrError> {
    if n == 0 {
        return Err(IrrError::ZeroLength);
    }
    let alphabet = Alphabet::maximal(ctx);
    let (_, m) = crate::automaton::build(&alphabet)?;
    let words = enumerate_level_with(&m, n)
        .entries
        .into_iter()
        .map(|e| e.word)
        .collect();
    Ok(IrreducibleStream {
        ctx: Arc::clone(ctx),
        alphabet,
        words,
        shift: 0,
        pos: 0,
    })
}
