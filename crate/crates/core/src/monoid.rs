//! Alphabets of monic quadratics, words over them, and the evaluation morphism
//! sending a word `f_1 ... f_k` to the composition `f_1 ∘ ... ∘ f_k`.
//!
//! Words are stored outermost-first: index 0 is the outermost factor.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;
use std::sync::Arc;

use thiserror::Error;

use crate::field::{FieldError, FqCtx, FqElem};
use crate::poly::FqPoly;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum MonoidError {
    #[error("letter index {index} out of range for an alphabet of {len} letters")]
    IndexOutOfRange { index: usize, len: usize },
    #[error("alphabet has a duplicate letter (a={a}, b={b})")]
    DuplicateLetter { a: String, b: String },
    #[error("alphabet is empty")]
    EmptyAlphabet,
    #[error("polynomial is not monic of degree 2")]
    NotMonicQuadratic,
    #[error("search would visit {needed} words, over the budget of {budget}")]
    BudgetExceeded { needed: u128, budget: u128 },
    #[error("unknown letter {0:?}")]
    UnknownLetter(String),
    #[error("cannot parse alphabet entry {0:?}")]
    Parse(String),
    #[error(transparent)]
    Field(#[from] FieldError),
}

/// The letter `(x - a)^2 - b`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MonicQuad {
    pub a: FqElem,
    pub b: FqElem,
}

impl MonicQuad {
    pub fn new(a: FqElem, b: FqElem) -> Self {
        MonicQuad { a, b }
    }

    /// Expanded form `x^2 - 2a x + (a^2 - b)`.
    pub fn to_poly(self, ctx: &Arc<FqCtx>) -> FqPoly {
        let two_a = ctx.add(self.a, self.a);
        let c0 = ctx.sub(ctx.mul(self.a, self.a), self.b);
        FqPoly::from_coeffs(ctx, vec![c0, ctx.neg(two_a), FqElem::ONE])
    }

    /// Completes the square of a monic quadratic.
    pub fn from_poly(f: &FqPoly) -> Result<Self, MonoidError> {
        if f.degree() != Some(2) || !f.is_monic() {
            return Err(MonoidError::NotMonicQuadratic);
        }
        let ctx = f.ctx();
        let a = ctx.neg(ctx.mul(f.coeff(1), ctx.half()));
        let b = ctx.sub(ctx.mul(a, a), f.coeff(0));
        Ok(MonicQuad { a, b })
    }

    pub fn eval(self, ctx: &FqCtx, x: FqElem) -> FqElem {
        let d = ctx.sub(x, self.a);
        ctx.sub(ctx.mul(d, d), self.b)
    }
}

/// Default display names: `f, g, h, ...` for the first 21 letters, then `L21, L22, ...`.
pub fn default_letter_name(i: usize) -> String {
    if i < 21 {
        ((b'f' + i as u8) as char).to_string()
    } else {
        format!("L{i}")
    }
}

/// An ordered set of distinct monic quadratics over one field.
#[derive(Clone)]
pub struct Alphabet {
    ctx: Arc<FqCtx>,
    letters: Vec<MonicQuad>,
    names: Vec<String>,
}

impl fmt::Debug for Alphabet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list()
            .entries(self.letters.iter().zip(&self.names).map(|(l, n)| {
                format!("{n}: a={} b={}", self.ctx.format(l.a), self.ctx.format(l.b))
            }))
            .finish()
    }
}

impl PartialEq for Alphabet {
    fn eq(&self, other: &Self) -> bool {
        *self.ctx == *other.ctx && self.letters == other.letters && self.names == other.names
    }
}

impl Alphabet {
    pub fn new(ctx: &Arc<FqCtx>, letters: Vec<MonicQuad>) -> Result<Self, MonoidError> {
        let names = (0..letters.len()).map(default_letter_name).collect();
        Self::with_names(ctx, letters, names)
    }

    pub fn with_names(
        ctx: &Arc<FqCtx>,
        letters: Vec<MonicQuad>,
        names: Vec<String>,
    ) -> Result<Self, MonoidError> {
        assert_eq!(letters.len(), names.len(), "one name per letter");
        let mut seen = BTreeSet::new();
        for l in &letters {
            if !seen.insert(*l) {
                return Err(MonoidError::DuplicateLetter {
                    a: ctx.format(l.a),
                    b: ctx.format(l.b),
                });
            }
        }
        Ok(Alphabet {
            ctx: Arc::clone(ctx),
            letters,
            names,
        })
    }

    /// `{x^2 - b : b in F_q}` in element order.
    pub fn maximal(ctx: &Arc<FqCtx>) -> Self {
        let letters = ctx
            .elements()
            .map(|b| MonicQuad::new(FqElem::ZERO, b))
            .collect();
        Self::new(ctx, letters).expect("distinct letters")
    }

    /// Parses `a=<elem> b=<elem>` entries separated by `;` or newlines; `b=<elem>`
    /// alone means `a = 0`, and an optional `name=<id>` renames the letter.
    /// `#` starts a comment.
    pub fn parse(ctx: &Arc<FqCtx>, s: &str) -> Result<Self, MonoidError> {
        let mut letters = Vec::new();
        let mut names = Vec::new();
        for entry in s.split(['\n', ';']) {
            let entry = entry.split('#').next().unwrap_or("").trim();
            if entry.is_empty() {
                continue;
            }
            let (mut a, mut b, mut name) = (None, None, None);
            for tok in entry.split_whitespace() {
                let (key, val) = tok
                    .split_once('=')
                    .ok_or_else(|| MonoidError::Parse(entry.to_string()))?;
                match key {
                    "a" => a = Some(ctx.parse(val)?),
                    "b" => b = Some(ctx.parse(val)?),
                    "name" => name = Some(val.to_string()),
                    _ => return Err(MonoidError::Parse(entry.to_string())),
                }
            }
            let b = b.ok_or_else(|| MonoidError::Parse(entry.to_string()))?;
            names.push(name.unwrap_or_else(|| default_letter_name(letters.len())));
            letters.push(MonicQuad::new(a.unwrap_or(FqElem::ZERO), b));
        }
        if letters.is_empty() {
            return Err(MonoidError::EmptyAlphabet);
        }
        Self::with_names(ctx, letters, names)
    }

    pub fn ctx(&self) -> &Arc<FqCtx> {
        &self.ctx
    }

    pub fn letters(&self) -> &[MonicQuad] {
        &self.letters
    }

    pub fn letter(&self, i: usize) -> MonicQuad {
        self.letters[i]
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn index_of(&self, letter: MonicQuad) -> Option<usize> {
        self.letters.iter().position(|&l| l == letter)
    }

    fn check(&self, w: &Word) -> Result<(), MonoidError> {
        match w.0.iter().find(|&&i| i >= self.len()) {
            Some(&index) => Err(MonoidError::IndexOutOfRange {
                index,
                len: self.len(),
            }),
            None => Ok(()),
        }
    }

    /// `π(w)`, composed innermost-out.
    pub fn pi(&self, w: &Word) -> Result<FqPoly, MonoidError> {
        self.check(w)?;
        Ok(self.pi_from(w, FqPoly::x(&self.ctx)))
    }

    /// `π(w) ∘ inner`, composed innermost-out starting from `inner`.
    pub fn pi_from(&self, w: &Word, inner: FqPoly) -> FqPoly {
        w.0.iter().rev().fold(inner, |acc, &i| {
            let l = self.letters[i];
            acc.apply_quadratic(l.a, l.b)
        })
    }

    /// Parses a word: a run of single-character names (`"ggf"`), or names
    /// separated by spaces or commas. `""`, `"-"` and `"ε"` are the empty word.
    pub fn parse_word(&self, s: &str) -> Result<Word, MonoidError> {
        let s = s.trim();
        if s.is_empty() || s == "-" || s == "ε" {
            return Ok(Word::empty());
        }
        let lookup = |tok: &str| {
            self.names
                .iter()
                .position(|n| n == tok)
                .ok_or_else(|| MonoidError::UnknownLetter(tok.to_string()))
        };
        let tokens: Vec<&str> = s.split([' ', ',']).filter(|t| !t.is_empty()).collect();
        if tokens.len() > 1 {
            return tokens
                .into_iter()
                .map(lookup)
                .collect::<Result<_, _>>()
                .map(Word);
        }
        if let Ok(i) = lookup(s) {
            return Ok(Word(vec![i]));
        }
        s.chars()
            .map(|c| lookup(&c.to_string()))
            .collect::<Result<_, _>>()
            .map(Word)
    }

    /// Renders a word outermost-first; names are concatenated when they are
    /// all single characters and space-separated otherwise.
    pub fn format_word(&self, w: &Word) -> String {
        if w.is_empty() {
            return "ε".to_string();
        }
        let parts: Vec<&str> = w.0.iter().map(|&i| self.names[i].as_str()).collect();
        if parts.iter().all(|p| p.chars().count() == 1) {
            parts.concat()
        } else {
            parts.join(" ")
        }
    }

    /// `D_S`, the set of `b`-components.
    pub fn distinguished_set(&self) -> BTreeSet<FqElem> {
        self.letters.iter().map(|l| l.b).collect()
    }

    /// The fibres `A_b` and their difference sets.
    pub fn a_fibers(&self) -> Fibers {
        let mut by_b: BTreeMap<FqElem, BTreeSet<FqElem>> = BTreeMap::new();
        for l in &self.letters {
            by_b.entry(l.b).or_default().insert(l.a);
        }
        let ctx = &self.ctx;
        let mut union = BTreeSet::new();
        let fibers = by_b
            .into_iter()
            .map(|(b, a_values)| {
                let differences: BTreeSet<FqElem> = a_values
                    .iter()
                    .flat_map(|&x| a_values.iter().map(move |&y| ctx.sub(x, y)))
                    .collect();
                union.extend(differences.iter().copied());
                (
                    b,
                    Fiber {
                        a_values,
                        differences,
                    },
                )
            })
            .collect();
        Fibers { fibers, union }
    }

    /// `u ~ v`: `π(v) - π(u)` is a constant lying in some `A_b - A_b`.
    pub fn words_related(&self, u: &Word, v: &Word) -> Result<bool, MonoidError> {
        let diff = self.pi(v)?.sub(&self.pi(u)?);
        let c = match diff.degree() {
            None => FqElem::ZERO,
            Some(0) => diff.coeff(0),
            Some(_) => return Ok(false),
        };
        Ok(self.a_fibers().union.contains(&c))
    }

    /// Sufficient freedom criteria: `|D_S| = |S|` or `|D_S| = 1`.
    pub fn freedom_certificate(&self) -> Freedom {
        let d = self.distinguished_set().len();
        if d == self.len() {
            Freedom::Free(FreedomReason::AllDistinct)
        } else if d == 1 {
            Freedom::Free(FreedomReason::SingleValue)
        } else {
            Freedom::Unknown
        }
    }

    /// Looks for two distinct equal-length words with the same image, trying
    /// lengths `1..=max_len` in order. Within a length, words are visited in
    /// lexicographic order and the first repeated image is reported as
    /// `(earlier, later)`.
    pub fn collision_search(
        &self,
        max_len: usize,
        budget: u128,
    ) -> Result<Option<(Word, Word)>, MonoidError> {
        let n = self.len() as u128;
        let needed: u128 = (1..=max_len as u32).map(|l| n.saturating_pow(l)).sum();
        if needed > budget {
            return Err(MonoidError::BudgetExceeded { needed, budget });
        }
        for len in 1..=max_len {
            let mut seen: HashMap<FqPoly, Word> = HashMap::new();
            for w in all_words(self.len(), len) {
                let p = self.pi(&w)?;
                if let Some(prev) = seen.get(&p) {
                    return Ok(Some((prev.clone(), w)));
                }
                seen.insert(p, w);
            }
        }
        Ok(None)
    }
}

/// A word over an alphabet, outermost letter first.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Word(pub Vec<usize>);

impl Word {
    pub fn empty() -> Self {
        Word(Vec::new())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn letters(&self) -> &[usize] {
        &self.0
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut v = self.0.clone();
        v.extend_from_slice(&other.0);
        Word(v)
    }

    /// Drops the outermost letter.
    pub fn suffix(&self) -> Word {
        Word(self.0.get(1..).unwrap_or(&[]).to_vec())
    }

    pub fn prefix(&self, len: usize) -> Word {
        Word(self.0[..len].to_vec())
    }

    pub fn push(&mut self, letter: usize) {
        self.0.push(letter);
    }
}

impl From<Vec<usize>> for Word {
    fn from(v: Vec<usize>) -> Self {
        Word(v)
    }
}

/// All words of the given length in lexicographic order.
pub fn all_words(alphabet_len: usize, len: usize) -> impl Iterator<Item = Word> {
    let total = alphabet_len
        .checked_pow(len as u32)
        .expect("word count overflows");
    (0..total).map(move |mut n| {
        let mut v = vec![0; len];
        for slot in v.iter_mut().rev() {
            *slot = n % alphabet_len;
            n /= alphabet_len;
        }
        Word(v)
    })
}

/// All words of length `0..=max_len`, shortest first.
pub fn all_words_up_to(alphabet_len: usize, max_len: usize) -> impl Iterator<Item = Word> {
    (0..=max_len).flat_map(move |l| all_words(alphabet_len, l))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Fiber {
    pub a_values: BTreeSet<FqElem>,
    pub differences: BTreeSet<FqElem>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Fibers {
    pub fibers: BTreeMap<FqElem, Fiber>,
    /// Union of all difference sets.
    pub union: BTreeSet<FqElem>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FreedomReason {
    /// `|D_S| = |S|`
    AllDistinct,
    /// `|D_S| = 1`
    SingleValue,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Freedom {
    Free(FreedomReason),
    Unknown,
}

impl fmt::Display for Freedom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Freedom::Free(FreedomReason::AllDistinct) => write!(f, "Free: |D_S| = |S|"),
            Freedom::Free(FreedomReason::SingleValue) => write!(f, "Free: |D_S| = 1"),
            Freedom::Unknown => write!(f, "Unknown"),
        }
    }
}
