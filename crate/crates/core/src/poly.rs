//! Dense univariate polynomials over `F_q`.
//!
//! Coefficients are stored low-degree-first with trailing zeros trimmed, so the
//! zero polynomial has an empty coefficient vector and `degree() == None`.

use std::fmt;
use std::hash::{Hash, Hasher};
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use thiserror::Error;

use crate::field::{prime_factors, FieldError, FqCtx, FqElem};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PolyError {
    #[error("division by the zero polynomial")]
    DivisionByZero,
    #[error("gcd of two zero polynomials is undefined")]
    BothZero,
    #[error("irreducibility is undefined for constant polynomials")]
    ConstantPolynomial,
    #[error("discriminant needs degree at least 2")]
    DegreeTooSmall,
    #[error("cannot parse polynomial {0:?}")]
    Parse(String),
    #[error(transparent)]
    Field(#[from] FieldError),
}

#[derive(Clone)]
pub struct FqPoly {
    ctx: Arc<FqCtx>,
    coeffs: Vec<FqElem>,
}

impl PartialEq for FqPoly {
    fn eq(&self, other: &Self) -> bool {
        debug_assert!(self.same_field(other), "polynomials over different fields");
        self.coeffs == other.coeffs
    }
}

impl Eq for FqPoly {}

impl Hash for FqPoly {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.coeffs.hash(state);
    }
}

impl fmt::Debug for FqPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FqPoly({})", self)
    }
}

impl fmt::Display for FqPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, &c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            let cs = self.ctx.format(c);
            match (i, c == FqElem::ONE) {
                (0, _) => write!(f, "{cs}")?,
                (1, true) => write!(f, "x")?,
                (1, false) => write!(f, "{cs}*x")?,
                (_, true) => write!(f, "x^{i}")?,
                (_, false) => write!(f, "{cs}*x^{i}")?,
            }
        }
        Ok(())
    }
}

/// Accumulates products in `u64` for prime fields; `p < 2^20` keeps each
/// product below `2^40`, so this many terms can be summed before reducing.
const PRIME_ACC_CHUNK: usize = 1 << 23;

fn reduce_acc(acc: &mut [u64], p: u64) {
    for a in acc.iter_mut() {
        *a %= p;
    }
}

fn mul_slices(ctx: &FqCtx, a: &[FqElem], b: &[FqElem]) -> Vec<FqElem> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let n = a.len() + b.len() - 1;
    if ctx.is_prime_field() {
        let p = ctx.characteristic() as u64;
        let bs: Vec<u64> = b.iter().map(|e| e.index() as u64).collect();
        let mut acc = vec![0u64; n];
        for (i, &x) in a.iter().enumerate() {
            if !x.is_zero() {
                let x = x.index() as u64;
                for (s, &y) in acc[i..i + bs.len()].iter_mut().zip(&bs) {
                    *s += x * y;
                }
            }
            if (i + 1) % PRIME_ACC_CHUNK == 0 {
                reduce_acc(&mut acc, p);
            }
        }
        acc.into_iter()
            .map(|v| ctx.from_int((v % p) as i64))
            .collect()
    } else {
        let mut out = vec![FqElem::ZERO; n];
        for (i, &x) in a.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, &y) in b.iter().enumerate() {
                out[i + j] = ctx.add(out[i + j], ctx.mul(x, y));
            }
        }
        out
    }
}

fn square_slice(ctx: &FqCtx, a: &[FqElem]) -> Vec<FqElem> {
    if a.is_empty() {
        return Vec::new();
    }
    let n = 2 * a.len() - 1;
    if ctx.is_prime_field() {
        let p = ctx.characteristic() as u64;
        let xs: Vec<u64> = a.iter().map(|e| e.index() as u64).collect();
        let mut acc = vec![0u64; n];
        for (i, &x) in xs.iter().enumerate() {
            acc[2 * i] += x * x;
            if x != 0 {
                let twice = 2 * x;
                let rest = &xs[i + 1..];
                for (s, &y) in acc[2 * i + 1..2 * i + 1 + rest.len()].iter_mut().zip(rest) {
                    *s += twice * y;
                }
            }
            if (i + 1) % (PRIME_ACC_CHUNK / 2) == 0 {
                reduce_acc(&mut acc, p);
            }
        }
        acc.into_iter()
            .map(|v| ctx.from_int((v % p) as i64))
            .collect()
    } else {
        let mut out = vec![FqElem::ZERO; n];
        for (i, &x) in a.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            out[2 * i] = ctx.add(out[2 * i], ctx.mul(x, x));
            let twice = ctx.add(x, x);
            for (j, &y) in a.iter().enumerate().skip(i + 1) {
                out[i + j] = ctx.add(out[i + j], ctx.mul(twice, y));
            }
        }
        out
    }
}

fn trim(v: &mut Vec<FqElem>) {
    while v.last().is_some_and(|c| c.is_zero()) {
        v.pop();
    }
}

impl FqPoly {
    pub fn from_coeffs(ctx: &Arc<FqCtx>, mut coeffs: Vec<FqElem>) -> FqPoly {
        trim(&mut coeffs);
        FqPoly {
            ctx: Arc::clone(ctx),
            coeffs,
        }
    }

    /// Builds a polynomial from element indices, low-degree-first.
    pub fn from_indices(ctx: &Arc<FqCtx>, indices: &[u32]) -> FqPoly {
        let coeffs = indices
            .iter()
            .map(|&i| ctx.elem(i).expect("element index out of range"))
            .collect();
        Self::from_coeffs(ctx, coeffs)
    }

    /// Builds a polynomial with prime-subfield coefficients, low-degree-first.
    pub fn from_ints(ctx: &Arc<FqCtx>, ints: &[i64]) -> FqPoly {
        Self::from_coeffs(ctx, ints.iter().map(|&n| ctx.from_int(n)).collect())
    }

    pub fn zero(ctx: &Arc<FqCtx>) -> FqPoly {
        FqPoly {
            ctx: Arc::clone(ctx),
            coeffs: Vec::new(),
        }
    }

    pub fn constant(ctx: &Arc<FqCtx>, c: FqElem) -> FqPoly {
        Self::from_coeffs(ctx, vec![c])
    }

    pub fn one(ctx: &Arc<FqCtx>) -> FqPoly {
        Self::constant(ctx, FqElem::ONE)
    }

    pub fn x(ctx: &Arc<FqCtx>) -> FqPoly {
        Self::from_coeffs(ctx, vec![FqElem::ZERO, FqElem::ONE])
    }

    /// `x + c`.
    pub fn linear(ctx: &Arc<FqCtx>, c: FqElem) -> FqPoly {
        Self::from_coeffs(ctx, vec![c, FqElem::ONE])
    }

    pub fn ctx(&self) -> &Arc<FqCtx> {
        &self.ctx
    }

    pub fn coeffs(&self) -> &[FqElem] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<FqElem> {
        self.coeffs
    }

    /// Coefficient of `x^i` (zero beyond the degree).
    pub fn coeff(&self, i: usize) -> FqElem {
        self.coeffs.get(i).copied().unwrap_or(FqElem::ZERO)
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn leading(&self) -> Option<FqElem> {
        self.coeffs.last().copied()
    }

    pub fn is_monic(&self) -> bool {
        self.leading() == Some(FqElem::ONE)
    }

    fn same_field(&self, other: &FqPoly) -> bool {
        Arc::ptr_eq(&self.ctx, &other.ctx) || *self.ctx == *other.ctx
    }

    fn with(&self, coeffs: Vec<FqElem>) -> FqPoly {
        Self::from_coeffs(&self.ctx, coeffs)
    }

    pub fn add(&self, other: &FqPoly) -> FqPoly {
        debug_assert!(self.same_field(other));
        let n = self.coeffs.len().max(other.coeffs.len());
        let coeffs = (0..n)
            .map(|i| self.ctx.add(self.coeff(i), other.coeff(i)))
            .collect();
        self.with(coeffs)
    }

    pub fn sub(&self, other: &FqPoly) -> FqPoly {
        debug_assert!(self.same_field(other));
        let n = self.coeffs.len().max(other.coeffs.len());
        let coeffs = (0..n)
            .map(|i| self.ctx.sub(self.coeff(i), other.coeff(i)))
            .collect();
        self.with(coeffs)
    }

    pub fn neg(&self) -> FqPoly {
        self.with(self.coeffs.iter().map(|&c| self.ctx.neg(c)).collect())
    }

    pub fn mul(&self, other: &FqPoly) -> FqPoly {
        debug_assert!(self.same_field(other));
        self.with(mul_slices(&self.ctx, &self.coeffs, &other.coeffs))
    }

    pub fn square(&self) -> FqPoly {
        self.with(square_slice(&self.ctx, &self.coeffs))
    }

    pub fn scale(&self, c: FqElem) -> FqPoly {
        self.with(self.coeffs.iter().map(|&x| self.ctx.mul(x, c)).collect())
    }

    pub fn add_constant(&self, c: FqElem) -> FqPoly {
        let mut coeffs = self.coeffs.clone();
        if coeffs.is_empty() {
            coeffs.push(c);
        } else {
            coeffs[0] = self.ctx.add(coeffs[0], c);
        }
        self.with(coeffs)
    }

    /// `(self - a)^2 - b`, i.e. the quadratic `(x - a)^2 - b` composed on the outside.
    pub fn apply_quadratic(&self, a: FqElem, b: FqElem) -> FqPoly {
        let neg_a = self.ctx.neg(a);
        self.add_constant(neg_a)
            .square()
            .add_constant(self.ctx.neg(b))
    }

    pub fn divmod(&self, divisor: &FqPoly) -> Result<(FqPoly, FqPoly), PolyError> {
        debug_assert!(self.same_field(divisor));
        let dd = divisor.degree().ok_or(PolyError::DivisionByZero)?;
        let ctx = &self.ctx;
        let Some(nd) = self.degree().filter(|&nd| nd >= dd) else {
            return Ok((FqPoly::zero(ctx), self.clone()));
        };
        let lc_inv = ctx.inv(divisor.coeffs[dd])?;
        let mut rem = self.coeffs.clone();
        let mut quot = vec![FqElem::ZERO; nd - dd + 1];
        for i in (0..=nd - dd).rev() {
            let c = ctx.mul(rem[i + dd], lc_inv);
            quot[i] = c;
            if c.is_zero() {
                continue;
            }
            for (j, &d) in divisor.coeffs.iter().enumerate() {
                rem[i + j] = ctx.sub(rem[i + j], ctx.mul(c, d));
            }
        }
        rem.truncate(dd);
        Ok((self.with(quot), self.with(rem)))
    }

    pub fn rem(&self, divisor: &FqPoly) -> Result<FqPoly, PolyError> {
        Ok(self.divmod(divisor)?.1)
    }

    /// Scales to leading coefficient 1; the zero polynomial is returned unchanged.
    pub fn monic(&self) -> FqPoly {
        match self.leading() {
            None => self.clone(),
            Some(lc) => self.scale(self.ctx.inv(lc).expect("nonzero leading coefficient")),
        }
    }

    pub fn derivative(&self) -> FqPoly {
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, &c)| self.ctx.scale_int(c, i as u64))
            .collect();
        self.with(coeffs)
    }

    /// Horner evaluation.
    pub fn eval(&self, a: FqElem) -> FqElem {
        self.coeffs.iter().rev().fold(FqElem::ZERO, |acc, &c| {
            self.ctx.add(self.ctx.mul(acc, a), c)
        })
    }

    /// `self ∘ inner`, i.e. `self(inner(x))`.
    pub fn compose(&self, inner: &FqPoly) -> FqPoly {
        debug_assert!(self.same_field(inner));
        let mut acc = FqPoly::zero(&self.ctx);
        for &c in self.coeffs.iter().rev() {
            acc = acc.mul(inner).add_constant(c);
        }
        acc
    }

    /// `self(x + c)`.
    pub fn shift(&self, c: FqElem) -> FqPoly {
        self.compose(&FqPoly::linear(&self.ctx, c))
    }

    /// Monic greatest common divisor.
    pub fn gcd(&self, other: &FqPoly) -> Result<FqPoly, PolyError> {
        if self.is_zero() && other.is_zero() {
            return Err(PolyError::BothZero);
        }
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            let r = a.rem(&b)?;
            a = b;
            b = r;
        }
        Ok(a.monic())
    }

    /// `self^e mod modulus` by square-and-multiply.
    pub fn powmod(&self, mut e: u64, modulus: &FqPoly) -> Result<FqPoly, PolyError> {
        let mut acc = FqPoly::one(&self.ctx).rem(modulus)?;
        let mut base = self.rem(modulus)?;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base).rem(modulus)?;
            }
            base = base.square().rem(modulus)?;
            e >>= 1;
        }
        Ok(acc)
    }

    /// The residue of `x^(q^e)` modulo `modulus`.
    pub fn powmod_frobenius(e: u64, modulus: &FqPoly) -> Result<FqPoly, PolyError> {
        let d = modulus.degree().ok_or(PolyError::DivisionByZero)?;
        if d == 0 {
            return Err(PolyError::ConstantPolynomial);
        }
        let m = modulus.monic();
        let frob = FrobeniusMatrix::new(&m)?;
        let mut h = FqPoly::x(&m.ctx).rem(&m)?;
        for _ in 0..e {
            h = frob.apply(&h);
        }
        Ok(h)
    }

    /// Rabin's test: `f` of degree `d` is irreducible iff `x^(q^d) = x mod f`
    /// and `gcd(x^(q^(d/r)) - x, f) = 1` for every prime `r | d`.
    pub fn is_irreducible(&self) -> Result<bool, PolyError> {
        let d = match self.degree() {
            None | Some(0) => return Err(PolyError::ConstantPolynomial),
            Some(d) => d,
        };
        if d == 1 {
            return Ok(true);
        }
        let f = self.monic();
        let frob = FrobeniusMatrix::new(&f)?;
        let x = FqPoly::x(&f.ctx).rem(&f)?;
        let mut checkpoints: Vec<usize> = prime_factors(d as u64)
            .into_iter()
            .map(|r| d / r as usize)
            .collect();
        checkpoints.sort_unstable();
        let mut h = x.clone();
        let mut i = 0;
        for cp in checkpoints {
            while i < cp {
                h = frob.apply(&h);
                i += 1;
            }
            if h.sub(&x).gcd(&f)?.degree() != Some(0) {
                return Ok(false);
            }
        }
        while i < d {
            h = frob.apply(&h);
            i += 1;
        }
        Ok(h == x)
    }

    /// `Res(self, other)` by the Euclidean remainder sequence.
    pub fn resultant(&self, other: &FqPoly) -> FqElem {
        let ctx = &self.ctx;
        if self.is_zero() || other.is_zero() {
            return FqElem::ZERO;
        }
        let mut a = self.clone();
        let mut b = other.clone();
        let mut acc = FqElem::ONE;
        loop {
            let m = a.degree().expect("nonzero") as u64;
            let n = b.degree().expect("nonzero") as u64;
            let lc_b = b.leading().expect("nonzero");
            if n == 0 {
                return ctx.mul(acc, ctx.pow(lc_b, m));
            }
            let r = a.rem(&b).expect("nonzero divisor");
            let Some(k) = r.degree() else {
                return FqElem::ZERO;
            };
            if (m * n) % 2 == 1 {
                acc = ctx.neg(acc);
            }
            acc = ctx.mul(acc, ctx.pow(lc_b, m - k as u64));
            a = b;
            b = r;
        }
    }

    /// `disc(f) = (-1)^(d(d-1)/2) Res(f, f') / lc(f)`, adjusted when `deg f' < d - 1`.
    pub fn discriminant(&self) -> Result<FqElem, PolyError> {
        let ctx = &self.ctx;
        let d = match self.degree() {
            Some(d) if d >= 2 => d,
            _ => return Err(PolyError::DegreeTooSmall),
        };
        let df = self.derivative();
        let Some(e) = df.degree() else {
            return Ok(FqElem::ZERO);
        };
        let lc = self.leading().expect("nonzero");
        let mut disc = self.resultant(&df);
        if (d * (d - 1) / 2) % 2 == 1 {
            disc = ctx.neg(disc);
        }
        // Net power of lc is d - 2 - e >= -1.
        disc = ctx.mul(disc, ctx.pow(lc, (d - 1 - e) as u64));
        Ok(ctx.div(disc, lc)?)
    }

    /// Comma-separated coefficients, low-degree-first (`"2,0,1"` for `x^2 + 2`).
    pub fn to_coeff_string(&self) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let parts: Vec<String> = self.coeffs.iter().map(|&c| self.ctx.format(c)).collect();
        parts.join(",")
    }

    /// Parses the comma-separated coefficient format; bracketed extension
    /// field elements may contain commas of their own.
    pub fn parse(ctx: &Arc<FqCtx>, s: &str) -> Result<FqPoly, PolyError> {
        let parts = split_top_level(s.trim(), ',');
        if parts.iter().any(|p| p.trim().is_empty()) {
            return Err(PolyError::Parse(s.to_string()));
        }
        let coeffs = parts
            .iter()
            .map(|p| ctx.parse(p).map_err(|_| PolyError::Parse(s.to_string())))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(Self::from_coeffs(ctx, coeffs))
    }
}

/// Splits on `sep` outside of square brackets.
pub(crate) fn split_top_level(s: &str, sep: char) -> Vec<&str> {
    let mut out = Vec::new();
    let mut depth = 0i32;
    let mut start = 0;
    for (i, ch) in s.char_indices() {
        match ch {
            '[' => depth += 1,
            ']' => depth -= 1,
            c if c == sep && depth == 0 => {
                out.push(&s[start..i]);
                start = i + c.len_utf8();
            }
            _ => {}
        }
    }
    out.push(&s[start..]);
    out
}

/// The `q`-power map on `F_q[x]/(f)` as a matrix: row `j` is `x^(jq) mod f`.
struct FrobeniusMatrix {
    ctx: Arc<FqCtx>,
    rows: Vec<Vec<FqElem>>,
    d: usize,
}

impl FrobeniusMatrix {
    fn new(f: &FqPoly) -> Result<Self, PolyError> {
        let ctx = Arc::clone(&f.ctx);
        let d = f.degree().ok_or(PolyError::DivisionByZero)?;
        let q = ctx.order() as usize;
        let pad = |p: FqPoly| {
            let mut v = p.coeffs;
            v.resize(d, FqElem::ZERO);
            v
        };
        let mut rows = Vec::with_capacity(d);
        if q <= 2 * d {
            // Walk x^i mod f one step at a time and keep every q-th power.
            let mut cur = vec![FqElem::ZERO; d];
            cur[0] = FqElem::ONE;
            rows.push(cur.clone());
            for i in 1..=(d.saturating_sub(1)) * q {
                let top = cur[d - 1];
                for j in (1..d).rev() {
                    cur[j] = cur[j - 1];
                }
                cur[0] = FqElem::ZERO;
                if !top.is_zero() {
                    for (j, c) in cur.iter_mut().enumerate() {
                        *c = ctx.sub(*c, ctx.mul(top, f.coeffs[j]));
                    }
                }
                if i % q == 0 {
                    rows.push(cur.clone());
                }
            }
        } else {
            let xq = FqPoly::x(&ctx).powmod(q as u64, f)?;
            let mut cur = FqPoly::one(&ctx).rem(f)?;
            for j in 0..d {
                if j > 0 {
                    cur = cur.mul(&xq).rem(f)?;
                }
                rows.push(pad(cur.clone()));
            }
        }
        Ok(FrobeniusMatrix { ctx, rows, d })
    }

    fn apply(&self, h: &FqPoly) -> FqPoly {
        let ctx = &self.ctx;
        if ctx.is_prime_field() {
            let p = ctx.characteristic() as u64;
            let mut acc = vec![0u64; self.d];
            for (i, (&hj, row)) in h.coeffs.iter().zip(&self.rows).enumerate() {
                if hj.is_zero() {
                    continue;
                }
                let c = hj.index() as u64;
                for (s, &r) in acc.iter_mut().zip(row) {
                    *s += c * r.index() as u64;
                }
                if (i + 1) % PRIME_ACC_CHUNK == 0 {
                    reduce_acc(&mut acc, p);
                }
            }
            FqPoly::from_coeffs(
                ctx,
                acc.into_iter()
                    .map(|v| ctx.from_int((v % p) as i64))
                    .collect(),
            )
        } else {
            let mut out = vec![FqElem::ZERO; self.d];
            for (&hj, row) in h.coeffs.iter().zip(&self.rows) {
                if hj.is_zero() {
                    continue;
                }
                for (s, &r) in out.iter_mut().zip(row) {
                    *s = ctx.add(*s, ctx.mul(hj, r));
                }
            }
            FqPoly::from_coeffs(ctx, out)
        }
    }
}

impl<'a> Add<&'a FqPoly> for &'a FqPoly {
    type Output = FqPoly;
    fn add(self, rhs: &'a FqPoly) -> FqPoly {
        FqPoly::add(self, rhs)
    }
}

impl<'a> Sub<&'a FqPoly> for &'a FqPoly {
    type Output = FqPoly;
    fn sub(self, rhs: &'a FqPoly) -> FqPoly {
        FqPoly::sub(self, rhs)
    }
}

impl<'a> Mul<&'a FqPoly> for &'a FqPoly {
    type Output = FqPoly;
    fn mul(self, rhs: &'a FqPoly) -> FqPoly {
        FqPoly::mul(self, rhs)
    }
}

impl Neg for &FqPoly {
    type Output = FqPoly;
    fn neg(self) -> FqPoly {
        FqPoly::neg(self)
    }
}
