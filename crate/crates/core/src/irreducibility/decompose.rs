use std::fmt;
use std::sync::Arc;

use crate::automaton::{AutomatonN, LazyVerdict};
use crate::field::{FqCtx, FqElem};
use crate::monoid::{Alphabet, Word};
use crate::poly::FqPoly;

use super::IrrError;

/// `F = (x^2 - a_1) ∘ ... ∘ (x^2 - a_n) ∘ (x - b)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CanonicalChain {
    /// `a_1, ..., a_n`, outermost first.
    pub a_values: Vec<FqElem>,
    /// The root `b` of the trailing linear factor `x - b`.
    pub b: FqElem,
}

impl CanonicalChain {
    pub fn recompose(&self, ctx: &Arc<FqCtx>) -> FqPoly {
        let inner = FqPoly::linear(ctx, ctx.neg(self.b));
        self.a_values
            .iter()
            .rev()
            .fold(inner, |acc, &a| acc.apply_quadratic(FqElem::ZERO, a))
    }

    /// The chain as a word over the maximal alphabet `{x^2 - c}`, whose
    /// letter for `x^2 - c` is the index of `c`.
    pub fn word(&self) -> Word {
        Word(self.a_values.iter().map(|a| a.index() as usize).collect())
    }
}

fn check_monic(f: &FqPoly) -> Result<usize, IrrError> {
    let d = f.degree().ok_or(IrrError::NotPowerOfTwo(0))?;
    if !f.is_monic() {
        return Err(IrrError::NotMonic);
    }
    Ok(d)
}

/// Writes `F = (x^2 - a) ∘ H` with `H` monic of half the degree.
///
/// Matches coefficients from the top to find the unique monic `H0` with
/// `H0(0) = 0` and `deg(F - H0^2) <= d`, reads `F = H0^2 + e1 H0 + e0` off the
/// remainder, and verifies that identity exactly. Completing the square in
/// `x^2 + e1 x + e0 = (x + c)^2 - a` gives `H = H0 + c`.
pub fn decompose_quadratic_outer(f: &FqPoly) -> Result<(FqElem, FqPoly), IrrError> {
    let deg = check_monic(f)?;
    if deg == 0 || deg % 2 == 1 {
        return Err(IrrError::OddDegree(deg));
    }
    let ctx = f.ctx();
    let d = deg / 2;
    let half = ctx.half();
    let mut h = vec![FqElem::ZERO; d + 1];
    h[d] = FqElem::ONE;
    for j in 1..d {
        let target = deg - j;
        let mut s = FqElem::ZERO;
        for i in (d - j + 1)..d {
            let k = target - i;
            if k > d - j && k < d {
                s = ctx.add(s, ctx.mul(h[i], h[k]));
            }
        }
        h[d - j] = ctx.mul(ctx.sub(f.coeff(target), s), half);
    }
    let h0 = FqPoly::from_coeffs(ctx, h);
    let h0_sq = h0.square();
    let rem = f.sub(&h0_sq);
    if rem.degree().is_some_and(|r| r > d) {
        return Err(IrrError::NotDecomposable { level: 1 });
    }
    let e1 = rem.coeff(d);
    let e0 = rem.coeff(0);
    let rebuilt = h0_sq.add(&h0.scale(e1)).add_constant(e0);
    if &rebuilt != f {
        return Err(IrrError::NotDecomposable { level: 1 });
    }
    let c = ctx.mul(e1, half);
    let a = ctx.sub(ctx.mul(c, c), e0);
    Ok((a, h0.add_constant(c)))
}

/// Peels outer quadratics until a monic linear factor remains.
pub fn full_decompose(f: &FqPoly) -> Result<CanonicalChain, IrrError> {
    let deg = check_monic(f)?;
    if deg < 2 || !deg.is_power_of_two() {
        return Err(IrrError::NotPowerOfTwo(deg));
    }
    let mut a_values = Vec::new();
    let mut cur = f.clone();
    while cur.degree() > Some(1) {
        let level = a_values.len() + 1;
        let (a, h) = decompose_quadratic_outer(&cur).map_err(|e| match e {
            IrrError::NotDecomposable { .. } => IrrError::NotDecomposable { level },
            other => other,
        })?;
        a_values.push(a);
        cur = h;
    }
    let b = cur.ctx().neg(cur.coeff(0));
    Ok(CanonicalChain { a_values, b })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DecompositionVerdict {
    Irreducible,
    /// 1-based index of the first square chain value.
    Reducible {
        index: usize,
    },
    /// The polynomial is not a composition of monic quadratics; `level` is
    /// the 1-based peeling step that failed.
    NotDecomposable {
        level: usize,
    },
}

impl fmt::Display for DecompositionVerdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DecompositionVerdict::Irreducible => write!(f, "Irreducible"),
            DecompositionVerdict::Reducible { index } => write!(f, "Reducible({index})"),
            DecompositionVerdict::NotDecomposable { level } => {
                write!(f, "NotDecomposable({level})")
            }
        }
    }
}

/// Irreducibility test for compositions of monic quadratics: decompose, then
/// run the chain word through the interim automaton of the maximal alphabet.
/// The automaton is built once per field.
#[derive(Clone, Debug)]
pub struct DecompositionTester {
    interim: AutomatonN,
}

impl DecompositionTester {
    pub fn new(ctx: &Arc<FqCtx>) -> Self {
        let interim =
            AutomatonN::build(&Alphabet::maximal(ctx)).expect("maximal alphabet is nonempty");
        DecompositionTester { interim }
    }

    pub fn alphabet(&self) -> &Alphabet {
        self.interim.alphabet()
    }

    /// Irreducibility is invariant under `x -> x + c`, so the linear factor is dropped.
    pub fn test(&self, f: &FqPoly) -> Result<DecompositionVerdict, IrrError> {
        let chain = match full_decompose(f) {
            Ok(chain) => chain,
            Err(IrrError::NotDecomposable { level }) => {
                return Ok(DecompositionVerdict::NotDecomposable { level })
            }
            Err(e) => return Err(e),
        };
        Ok(match self.interim.lazy_run(&chain.word()) {
            LazyVerdict::Accepted => DecompositionVerdict::Irreducible,
            LazyVerdict::Rejected { at } => DecompositionVerdict::Reducible { index: at },
        })
    }

    /// The unique `(a, w)` with `F(x) = π(w)(x + a)` over the maximal alphabet.
    pub fn canonicalize(&self, f: &FqPoly) -> Result<(FqElem, Word), IrrError> {
        let chain = full_decompose(f)?;
        let word = chain.word();
        if !self.interim.lazy_accepts(&word) {
            return Err(IrrError::NotIrreducible);
        }
        Ok((f.ctx().neg(chain.b), word))
    }
}

pub fn test_decomposable(f: &FqPoly) -> Result<DecompositionVerdict, IrrError> {
    DecompositionTester::new(f.ctx()).test(f)
}

pub fn canonicalize(f: &FqPoly) -> Result<(FqElem, Word), IrrError> {
    DecompositionTester::new(f.ctx()).canonicalize(f)
}
