use crate::field::FqElem;
use crate::monoid::{Alphabet, Word};

use super::IrrError;

/// The nonsquare chain of a word `f_1 ... f_k`:
/// `b_1, f_1(-b_2), (f_1 ∘ f_2)(-b_3), ..., (f_1 ∘ ... ∘ f_{k-1})(-b_k)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChainReport {
    /// Chain values computed so far; stops at the first square.
    pub values: Vec<FqElem>,
    /// Nonsquare flag per computed value.
    pub verdicts: Vec<bool>,
    /// 1-based position of the first square value.
    pub first_failure: Option<usize>,
    /// Length of the word the report describes.
    pub word_len: usize,
}

impl ChainReport {
    pub fn is_irreducible(&self) -> bool {
        self.first_failure.is_none()
    }
}

/// The composition `π(w)` is irreducible iff every chain value is a nonsquare.
/// Each value is found by pushing `-b_j` through `f_{j-1}, ..., f_1` pointwise,
/// innermost first; evaluation stops at the first square.
pub fn chain_irreducible(w: &Word, alphabet: &Alphabet) -> Result<ChainReport, IrrError> {
    if w.is_empty() {
        return Err(IrrError::EmptyWord);
    }
    if let Some(&index) = w.letters().iter().find(|&&i| i >= alphabet.len()) {
        return Err(crate::monoid::MonoidError::IndexOutOfRange {
            index,
            len: alphabet.len(),
        }
        .into());
    }
    let ctx = alphabet.ctx();
    let letters: Vec<_> = w.letters().iter().map(|&i| alphabet.letter(i)).collect();
    let mut report = ChainReport {
        values: Vec::new(),
        verdicts: Vec::new(),
        first_failure: None,
        word_len: w.len(),
    };
    for j in 0..letters.len() {
        let value = if j == 0 {
            letters[0].b
        } else {
            letters[..j]
                .iter()
                .rev()
                .fold(ctx.neg(letters[j].b), |acc, l| l.eval(ctx, acc))
        };
        let ok = ctx.is_nonsquare(value);
        report.values.push(value);
        report.verdicts.push(ok);
        if !ok {
            report.first_failure = Some(j + 1);
            break;
        }
    }
    Ok(report)
}
