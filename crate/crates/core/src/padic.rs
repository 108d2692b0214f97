//! p-adic integers at fixed precision, quadratics over them, and the
//! reduction of local irreducibility to the residue field.
//!
//! Elements of `Z_p` are stored as residues mod `p^N`. Only the valuation-0
//! test and reduction mod `p` feed any verdict, so answers do not depend on
//! `N` as long as `N >= 1`.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use thiserror::Error;

use crate::field::{FqCtx, FqElem};
use crate::irreducibility::chain_irreducible;
use crate::monoid::{Alphabet, MonicQuad, Word};
use crate::poly::{FqPoly, PolyError};

pub const DEFAULT_PRECISION: u32 = 8;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PadicError {
    #[error("{0} is not an odd prime")]
    NotOddPrime(u64),
    #[error("precision must be at least 1")]
    ZeroPrecision,
    #[error("{p}^{n} does not fit in 63 bits")]
    PrecisionTooLarge { p: u64, n: u32 },
    #[error("chain is empty")]
    EmptyChain,
    #[error("chain mixes different primes or precisions")]
    MixedRings,
    #[error("cannot parse p-adic letter {0:?}")]
    Parse(String),
}

/// `Z / p^N Z`, standing in for `Z_p` at precision `N`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct PadicRing {
    p: u64,
    n: u32,
    modulus: u64,
}

impl PadicRing {
    pub fn new(p: u64, n: u32) -> Result<Self, PadicError> {
        if p < 3 || p.is_multiple_of(2) || !crate::field::is_prime(p) {
            return Err(PadicError::NotOddPrime(p));
        }
        if n == 0 {
            return Err(PadicError::ZeroPrecision);
        }
        let modulus = p
            .checked_pow(n)
            .filter(|&m| m < 1 << 63)
            .ok_or(PadicError::PrecisionTooLarge { p, n })?;
        Ok(PadicRing { p, n, modulus })
    }

    pub fn prime(&self) -> u64 {
        self.p
    }

    pub fn precision(&self) -> u32 {
        self.n
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn from_int(&self, v: i64) -> PadicInt {
        PadicInt {
            ring: *self,
            value: v.rem_euclid(self.modulus as i64) as u64,
        }
    }

    pub fn zero(&self) -> PadicInt {
        self.from_int(0)
    }

    pub fn one(&self) -> PadicInt {
        self.from_int(1)
    }

    /// The residue field `F_p`.
    pub fn residue_field(&self) -> Arc<FqCtx> {
        FqCtx::new(self.p, 1).expect("odd prime")
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct PadicInt {
    ring: PadicRing,
    value: u64,
}

impl fmt::Debug for PadicInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} mod {}^{}", self.value, self.ring.p, self.ring.n)
    }
}

impl fmt::Display for PadicInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.value)
    }
}

impl PadicInt {
    pub fn ring(&self) -> PadicRing {
        self.ring
    }

    /// Residue in `0..p^N`.
    pub fn value(&self) -> u64 {
        self.value
    }

    /// Largest `e <= N` with `p^e` dividing the residue; `N` for zero.
    pub fn valuation(&self) -> u32 {
        if self.value == 0 {
            return self.ring.n;
        }
        let mut v = self.value;
        let mut e = 0;
        while v.is_multiple_of(self.ring.p) {
            v /= self.ring.p;
            e += 1;
        }
        e
    }

    pub fn is_unit(&self) -> bool {
        !self.value.is_multiple_of(self.ring.p)
    }

    /// Reduction mod `p` into `ctx`, which must be the residue field.
    pub fn reduce(&self, ctx: &FqCtx) -> FqElem {
        debug_assert_eq!(ctx.order() as u64, self.ring.p);
        ctx.from_int((self.value % self.ring.p) as i64)
    }
}

impl Add for PadicInt {
    type Output = PadicInt;
    fn add(self, rhs: PadicInt) -> PadicInt {
        debug_assert_eq!(self.ring, rhs.ring);
        let s = self.value + rhs.value;
        let m = self.ring.modulus;
        PadicInt {
            ring: self.ring,
            value: if s >= m { s - m } else { s },
        }
    }
}

impl Neg for PadicInt {
    type Output = PadicInt;
    fn neg(self) -> PadicInt {
        let value = if self.value == 0 {
            0
        } else {
            self.ring.modulus - self.value
        };
        PadicInt {
            ring: self.ring,
            value,
        }
    }
}

impl Sub for PadicInt {
    type Output = PadicInt;
    fn sub(self, rhs: PadicInt) -> PadicInt {
        self + (-rhs)
    }
}

impl Mul for PadicInt {
    type Output = PadicInt;
    fn mul(self, rhs: PadicInt) -> PadicInt {
        debug_assert_eq!(self.ring, rhs.ring);
        let v = (self.value as u128 * rhs.value as u128) % self.ring.modulus as u128;
        PadicInt {
            ring: self.ring,
            value: v as u64,
        }
    }
}

/// `(x - a)^2 - b` over `Z_p`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PadicQuad {
    pub a: PadicInt,
    pub b: PadicInt,
}

impl PadicQuad {
    pub fn new(a: PadicInt, b: PadicInt) -> Self {
        debug_assert_eq!(a.ring, b.ring);
        PadicQuad { a, b }
    }

    pub fn from_ints(ring: PadicRing, a: i64, b: i64) -> Self {
        PadicQuad {
            a: ring.from_int(a),
            b: ring.from_int(b),
        }
    }

    pub fn ring(&self) -> PadicRing {
        self.a.ring
    }

    /// The discriminant `4b`.
    pub fn disc(&self) -> PadicInt {
        self.ring().from_int(4) * self.b
    }

    /// Whether the discriminant is a unit; `4` is a unit for odd `p`, so this
    /// is whether `b` is.
    pub fn unit_disc(&self) -> bool {
        self.b.is_unit()
    }

    pub fn reduce(&self, ctx: &FqCtx) -> MonicQuad {
        MonicQuad::new(self.a.reduce(ctx), self.b.reduce(ctx))
    }

    pub fn to_poly(&self) -> PadicPoly {
        PadicPoly::x(self.ring()).apply_quadratic(self.a, self.b)
    }
}

/// Dense polynomial over `Z / p^N Z`, lowest degree first.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PadicPoly {
    ring: PadicRing,
    coeffs: Vec<PadicInt>,
}

impl PadicPoly {
    pub fn from_coeffs(ring: PadicRing, mut coeffs: Vec<PadicInt>) -> Self {
        while coeffs.last().is_some_and(|c| c.value == 0) {
            coeffs.pop();
        }
        PadicPoly { ring, coeffs }
    }

    pub fn x(ring: PadicRing) -> Self {
        Self::from_coeffs(ring, vec![ring.zero(), ring.one()])
    }

    pub fn coeffs(&self) -> &[PadicInt] {
        &self.coeffs
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    fn add_constant(&self, c: PadicInt) -> PadicPoly {
        let mut coeffs = self.coeffs.clone();
        match coeffs.first_mut() {
            Some(c0) => *c0 = *c0 + c,
            None => coeffs.push(c),
        }
        Self::from_coeffs(self.ring, coeffs)
    }

    pub fn mul(&self, other: &PadicPoly) -> PadicPoly {
        if self.coeffs.is_empty() || other.coeffs.is_empty() {
            return Self::from_coeffs(self.ring, Vec::new());
        }
        let mut out = vec![self.ring.zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, &x) in self.coeffs.iter().enumerate() {
            for (j, &y) in other.coeffs.iter().enumerate() {
                out[i + j] = out[i + j] + x * y;
            }
        }
        Self::from_coeffs(self.ring, out)
    }

    /// `(self - a)^2 - b`.
    pub fn apply_quadratic(&self, a: PadicInt, b: PadicInt) -> PadicPoly {
        let t = self.add_constant(-a);
        t.mul(&t).add_constant(-b)
    }

    /// `self ∘ inner`, by Horner's rule.
    pub fn compose(&self, inner: &PadicPoly) -> PadicPoly {
        let mut acc = Self::from_coeffs(self.ring, Vec::new());
        for &c in self.coeffs.iter().rev() {
            acc = acc.mul(inner).add_constant(c);
        }
        acc
    }

    pub fn reduce(&self, ctx: &Arc<FqCtx>) -> FqPoly {
        FqPoly::from_coeffs(ctx, self.coeffs.iter().map(|c| c.reduce(ctx)).collect())
    }
}

/// `f_1 ∘ ... ∘ f_k`.
pub fn compose_chain(chain: &[PadicQuad]) -> Result<PadicPoly, PadicError> {
    let ring = check_chain(chain)?;
    Ok(chain
        .iter()
        .rev()
        .fold(PadicPoly::x(ring), |acc, f| acc.apply_quadratic(f.a, f.b)))
}

/// `disc(g)^2 * 4^deg(g) * g(-b_f)`, which equals `disc(g ∘ f)` up to sign.
/// A linear `g` counts as having discriminant 1.
pub fn disc_composition(g: &FqPoly, f: MonicQuad) -> Result<FqElem, PolyError> {
    let ctx = g.ctx();
    let d = g
        .degree()
        .filter(|&d| d >= 1)
        .ok_or(PolyError::ConstantPolynomial)?;
    let dg = if d == 1 {
        FqElem::ONE
    } else {
        g.discriminant()?
    };
    let four = ctx.pow(ctx.from_int(4), d as u64);
    Ok(ctx.mul(ctx.mul(ctx.mul(dg, dg), four), g.eval(ctx.neg(f.b))))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LocalVerdict {
    Irreducible,
    Reducible,
    /// The outermost quadratic has a non-unit discriminant; reduction mod `p`
    /// says nothing in that case.
    PreconditionFailed,
}

impl fmt::Display for LocalVerdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LocalVerdict::Irreducible => write!(f, "Irreducible"),
            LocalVerdict::Reducible => write!(f, "Reducible"),
            LocalVerdict::PreconditionFailed => write!(f, "PreconditionFailed"),
        }
    }
}

fn check_chain(chain: &[PadicQuad]) -> Result<PadicRing, PadicError> {
    let ring = chain.first().ok_or(PadicError::EmptyChain)?.ring();
    if chain.iter().any(|f| f.a.ring != ring || f.b.ring != ring) {
        return Err(PadicError::MixedRings);
    }
    Ok(ring)
}

/// Irreducibility of `f_1 ∘ ... ∘ f_k` over `Q_p`, decided on the residue
/// field when `disc(f_1)` is a unit.
pub fn local_irreducible(chain: &[PadicQuad]) -> Result<LocalVerdict, PadicError> {
    let ring = check_chain(chain)?;
    if !chain[0].unit_disc() {
        return Ok(LocalVerdict::PreconditionFailed);
    }
    let ctx = ring.residue_field();
    let (alphabet, word) = reduce_chain(&ctx, chain);
    let report = chain_irreducible(&word, &alphabet).expect("nonempty word over its own alphabet");
    Ok(if report.is_irreducible() {
        LocalVerdict::Irreducible
    } else {
        LocalVerdict::Reducible
    })
}

/// The reduced letters as an alphabet (first occurrence order) and the chain as a word over it.
pub fn reduce_chain(ctx: &Arc<FqCtx>, chain: &[PadicQuad]) -> (Alphabet, Word) {
    let mut letters: Vec<MonicQuad> = Vec::new();
    let mut word = Word::empty();
    for f in chain {
        let l = f.reduce(ctx);
        let i = letters.iter().position(|&m| m == l).unwrap_or_else(|| {
            letters.push(l);
            letters.len() - 1
        });
        word.push(i);
    }
    (
        Alphabet::new(ctx, letters).expect("letters are distinct"),
        word,
    )
}

/// Parses letters `a=<int> b=<int>` separated by `;` or newlines. Each letter
/// may also carry `p=<prime>` and `N=<precision>`, overriding the defaults;
/// all letters must end up in the same ring.
pub fn parse_chain(s: &str, p: Option<u64>, n: u32) -> Result<Vec<PadicQuad>, PadicError> {
    let mut out = Vec::new();
    for entry in s.split(['\n', ';']) {
        let entry = entry.split('#').next().unwrap_or("").trim();
        if entry.is_empty() {
            continue;
        }
        let bad = || PadicError::Parse(entry.to_string());
        let (mut a, mut b, mut lp, mut ln) = (0i64, None, p, n);
        for tok in entry.split_whitespace() {
            let (key, val) = tok.split_once('=').ok_or_else(bad)?;
            match key {
                "a" => a = val.parse().map_err(|_| bad())?,
                "b" => b = Some(val.parse().map_err(|_| bad())?),
                "p" => lp = Some(val.parse().map_err(|_| bad())?),
                "N" => ln = val.parse().map_err(|_| bad())?,
                _ => return Err(bad()),
            }
        }
        let ring = PadicRing::new(lp.ok_or_else(bad)?, ln)?;
        out.push(PadicQuad::from_ints(ring, a, b.ok_or_else(bad)?));
    }
    check_chain(&out)?;
    Ok(out)
}
