//! Arithmetic in `F_q` for odd prime powers `q = p^k`.
//!
//! Elements are stored as a single integer index `c_0 + c_1 p + ... + c_{k-1} p^{k-1}`
//! encoding the coordinates with respect to the power basis of the field
//! modulus. In a prime field the index is the residue itself. Extension fields
//! carry exponential, logarithm and Zech tables so that every operation is a
//! handful of lookups.

use std::fmt;
use std::sync::Arc;

use thiserror::Error;

/// Largest field order supported; the automata built on top have `2q + 1` states.
pub const MAX_FIELD_ORDER: u64 = 1 << 20;

/// Fields up to this order also get full addition and multiplication tables.
const FULL_TABLE_LIMIT: u32 = 256;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FieldError {
    #[error("characteristic 2 unsupported")]
    CharacteristicTwo,
    #[error("{0} is not an odd prime")]
    NotOddPrime(u64),
    #[error("invalid extension degree {0}; must be at least 1")]
    InvalidDegree(u32),
    #[error("field order {0} exceeds the supported maximum of 2^20")]
    OrderTooLarge(u64),
    #[error("{0} is not a power of an odd prime")]
    NotPrimePower(u64),
    #[error("division by zero")]
    DivisionByZero,
    #[error("cannot parse field element {0:?}")]
    Parse(String),
}

/// An element of `F_q`, meaningful only together with the [`FqCtx`] it came from.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct FqElem(u32);

impl FqElem {
    pub const ZERO: FqElem = FqElem(0);
    pub const ONE: FqElem = FqElem(1);

    /// The integer index of this element (its residue in a prime field).
    #[inline]
    pub fn index(self) -> u32 {
        self.0
    }

    #[inline]
    pub fn is_zero(self) -> bool {
        self.0 == 0
    }
}

#[derive(Debug)]
struct ExtTables {
    /// `exp[i] = g^i` for `0 <= i < 2(q-1)`.
    exp: Vec<u32>,
    /// `log[a]` for nonzero `a`; `log[0]` is unused.
    log: Vec<u32>,
    /// `zech[n] = log(1 + g^n)`, or `NO_LOG` when `1 + g^n = 0`.
    zech: Vec<u32>,
    /// Full `q x q` tables for small fields.
    add: Option<Vec<u32>>,
    mul: Option<Vec<u32>>,
}

const NO_LOG: u32 = u32::MAX;

/// Field context for `F_{p^k}`. Immutable once built and shared via `Arc`.
pub struct FqCtx {
    p: u32,
    k: u32,
    q: u32,
    modulus: Option<Vec<u32>>,
    tables: Option<ExtTables>,
}

impl fmt::Debug for FqCtx {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FqCtx")
            .field("p", &self.p)
            .field("k", &self.k)
            .field("modulus", &self.modulus)
            .finish()
    }
}

impl PartialEq for FqCtx {
    fn eq(&self, other: &Self) -> bool {
        self.p == other.p && self.k == other.k && self.modulus == other.modulus
    }
}

impl Eq for FqCtx {}

pub(crate) fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

pub(crate) fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            out.push(d);
            while n.is_multiple_of(d) {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// Splits a prime power into `(p, k)`.
pub fn split_prime_power(q: u64) -> Result<(u64, u32), FieldError> {
    if q < 2 {
        return Err(FieldError::NotPrimePower(q));
    }
    let factors = prime_factors(q);
    if factors.len() != 1 {
        return Err(FieldError::NotPrimePower(q));
    }
    let p = factors[0];
    if p == 2 {
        return Err(FieldError::CharacteristicTwo);
    }
    let mut k = 0;
    let mut m = q;
    while m > 1 {
        m /= p;
        k += 1;
    }
    Ok((p, k))
}

// Dense polynomial helpers over F_p used only while bootstrapping an extension.
fn fp_poly_mulmod(a: &[u32], b: &[u32], modulus: &[u32], p: u32) -> Vec<u32> {
    let k = modulus.len() - 1;
    let p64 = p as u64;
    let mut prod = vec![0u64; a.len() + b.len()];
    for (i, &x) in a.iter().enumerate() {
        for (j, &y) in b.iter().enumerate() {
            prod[i + j] = (prod[i + j] + x as u64 * y as u64) % p64;
        }
    }
    for d in (k..prod.len()).rev() {
        let c = prod[d];
        if c == 0 {
            continue;
        }
        prod[d] = 0;
        for (i, &m) in modulus.iter().enumerate().take(k) {
            let idx = d - k + i;
            prod[idx] = (prod[idx] + (p64 - c) * m as u64) % p64;
        }
    }
    prod.truncate(k);
    prod.into_iter().map(|c| c as u32).collect()
}

fn digits(mut index: u32, p: u32, k: u32) -> Vec<u32> {
    (0..k)
        .map(|_| {
            let d = index % p;
            index /= p;
            d
        })
        .collect()
}

fn undigits(ds: &[u32], p: u32) -> u32 {
    ds.iter().rev().fold(0, |acc, &d| acc * p + d)
}

fn mod_pow(mut base: u64, mut e: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    base %= m;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * base % m;
        }
        base = base * base % m;
        e >>= 1;
    }
    acc
}

impl FqCtx {
    /// Builds `F_{p^k}`. For `k > 1` the modulus is the lexicographically
    /// smallest monic irreducible of degree `k`, comparing coefficient vectors
    /// low-degree-first.
    pub fn new(p: u64, k: u32) -> Result<Arc<FqCtx>, FieldError> {
        if p == 2 {
            return Err(FieldError::CharacteristicTwo);
        }
        if !is_prime(p) {
            return Err(FieldError::NotOddPrime(p));
        }
        if k < 1 {
            return Err(FieldError::InvalidDegree(k));
        }
        let q = (p as u128).pow(k);
        if q > MAX_FIELD_ORDER as u128 {
            return Err(FieldError::OrderTooLarge(q.min(u64::MAX as u128) as u64));
        }
        let p = p as u32;
        let q = q as u32;
        if k == 1 {
            return Ok(Arc::new(FqCtx {
                p,
                k,
                q,
                modulus: None,
                tables: None,
            }));
        }
        let modulus = Self::smallest_irreducible(p, k);
        let tables = Self::build_tables(p, k, q, &modulus);
        Ok(Arc::new(FqCtx {
            p,
            k,
            q,
            modulus: Some(modulus),
            tables: Some(tables),
        }))
    }

    /// Convenience constructor from the field order.
    pub fn with_order(q: u64) -> Result<Arc<FqCtx>, FieldError> {
        let (p, k) = split_prime_power(q)?;
        Self::new(p, k)
    }

    fn smallest_irreducible(p: u32, k: u32) -> Vec<u32> {
        let prime = FqCtx::new(p as u64, 1).expect("prime field");
        let count = (p as u64).pow(k);
        for n in 0..count {
            // Lexicographic order with c_0 most significant.
            let mut rest = n;
            let mut coeffs = vec![0u32; k as usize + 1];
            for i in (0..k as usize).rev() {
                coeffs[i] = (rest % p as u64) as u32;
                rest /= p as u64;
            }
            coeffs[k as usize] = 1;
            let poly = crate::poly::FqPoly::from_indices(&prime, &coeffs);
            if poly.is_irreducible().unwrap_or(false) {
                return coeffs;
            }
        }
        unreachable!("irreducible polynomials exist in every degree")
    }

    fn build_tables(p: u32, k: u32, q: u32, modulus: &[u32]) -> ExtTables {
        let order = (q - 1) as u64;
        let factors = prime_factors(order);
        let slow_pow = |g: &[u32], e: u64| -> Vec<u32> {
            let mut acc = vec![0u32; k as usize];
            acc[0] = 1;
            let mut base = g.to_vec();
            let mut e = e;
            while e > 0 {
                if e & 1 == 1 {
                    acc = fp_poly_mulmod(&acc, &base, modulus, p);
                }
                base = fp_poly_mulmod(&base, &base, modulus, p);
                e >>= 1;
            }
            acc
        };
        let one = {
            let mut v = vec![0u32; k as usize];
            v[0] = 1;
            v
        };
        let generator = (2..q)
            .map(|i| digits(i, p, k))
            .find(|g| factors.iter().all(|&r| slow_pow(g, order / r) != one))
            .expect("multiplicative group is cyclic");

        let n = (q - 1) as usize;
        let mut exp = vec![0u32; 2 * n];
        let mut log = vec![0u32; q as usize];
        let mut cur = one.clone();
        for (i, slot) in exp.iter_mut().take(n).enumerate() {
            let idx = undigits(&cur, p);
            *slot = idx;
            log[idx as usize] = i as u32;
            cur = fp_poly_mulmod(&cur, &generator, modulus, p);
        }
        for i in n..2 * n {
            exp[i] = exp[i - n];
        }
        let mut zech = vec![NO_LOG; n];
        for (i, z) in zech.iter_mut().enumerate() {
            let mut ds = digits(exp[i], p, k);
            ds[0] = (ds[0] + 1) % p;
            let idx = undigits(&ds, p);
            if idx != 0 {
                *z = log[idx as usize];
            }
        }
        let mut tables = ExtTables {
            exp,
            log,
            zech,
            add: None,
            mul: None,
        };
        if q <= FULL_TABLE_LIMIT {
            let qs = q as usize;
            let mut add = vec![0u32; qs * qs];
            let mut mul = vec![0u32; qs * qs];
            for a in 0..q {
                let da = digits(a, p, k);
                for b in 0..q {
                    let db = digits(b, p, k);
                    let sum: Vec<u32> = da.iter().zip(&db).map(|(x, y)| (x + y) % p).collect();
                    add[(a * q + b) as usize] = undigits(&sum, p);
                    mul[(a * q + b) as usize] = Self::table_mul(&tables, a, b);
                }
            }
            tables.add = Some(add);
            tables.mul = Some(mul);
        }
        tables
    }

    fn table_mul(t: &ExtTables, a: u32, b: u32) -> u32 {
        if a == 0 || b == 0 {
            return 0;
        }
        t.exp[(t.log[a as usize] + t.log[b as usize]) as usize]
    }

    #[inline]
    pub fn characteristic(&self) -> u32 {
        self.p
    }

    #[inline]
    pub fn degree(&self) -> u32 {
        self.k
    }

    #[inline]
    pub fn order(&self) -> u32 {
        self.q
    }

    #[inline]
    pub fn is_prime_field(&self) -> bool {
        self.k == 1
    }

    /// The defining modulus over `F_p` (low-degree-first), for extension fields.
    pub fn modulus(&self) -> Option<&[u32]> {
        self.modulus.as_deref()
    }

    /// All field elements in index order.
    pub fn elements(&self) -> impl Iterator<Item = FqElem> {
        (0..self.q).map(FqElem)
    }

    /// The element with the given index, if it is in range.
    pub fn elem(&self, index: u32) -> Option<FqElem> {
        (index < self.q).then_some(FqElem(index))
    }

    /// The image of an integer under `Z -> F_p -> F_q`.
    pub fn from_int(&self, n: i64) -> FqElem {
        FqElem(n.rem_euclid(self.p as i64) as u32)
    }

    /// Coordinates in the power basis, low-degree-first.
    pub fn coords(&self, a: FqElem) -> Vec<u32> {
        digits(a.0, self.p, self.k)
    }

    pub fn from_coords(&self, coords: &[u32]) -> Option<FqElem> {
        if coords.len() != self.k as usize || coords.iter().any(|&c| c >= self.p) {
            return None;
        }
        Some(FqElem(undigits(coords, self.p)))
    }

    #[inline]
    pub fn add(&self, a: FqElem, b: FqElem) -> FqElem {
        match &self.tables {
            None => {
                let s = a.0 + b.0;
                FqElem(if s >= self.p { s - self.p } else { s })
            }
            Some(t) => {
                if let Some(add) = &t.add {
                    return FqElem(add[(a.0 * self.q + b.0) as usize]);
                }
                if a.0 == 0 {
                    return b;
                }
                if b.0 == 0 {
                    return a;
                }
                let n = self.q - 1;
                let la = t.log[a.0 as usize];
                let lb = t.log[b.0 as usize];
                let diff = if lb >= la { lb - la } else { lb + n - la };
                match t.zech[diff as usize] {
                    NO_LOG => FqElem::ZERO,
                    z => FqElem(t.exp[(la + z) as usize]),
                }
            }
        }
    }

    #[inline]
    pub fn neg(&self, a: FqElem) -> FqElem {
        if a.0 == 0 {
            return a;
        }
        match &self.tables {
            None => FqElem(self.p - a.0),
            Some(t) => {
                let half = (self.q - 1) / 2;
                FqElem(t.exp[(t.log[a.0 as usize] + half) as usize])
            }
        }
    }

    #[inline]
    pub fn sub(&self, a: FqElem, b: FqElem) -> FqElem {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn mul(&self, a: FqElem, b: FqElem) -> FqElem {
        match &self.tables {
            None => FqElem(((a.0 as u64 * b.0 as u64) % self.p as u64) as u32),
            Some(t) => {
                if let Some(mul) = &t.mul {
                    return FqElem(mul[(a.0 * self.q + b.0) as usize]);
                }
                FqElem(Self::table_mul(t, a.0, b.0))
            }
        }
    }

    pub fn inv(&self, a: FqElem) -> Result<FqElem, FieldError> {
        if a.0 == 0 {
            return Err(FieldError::DivisionByZero);
        }
        Ok(match &self.tables {
            None => FqElem(mod_pow(a.0 as u64, self.p as u64 - 2, self.p as u64) as u32),
            Some(t) => {
                let n = self.q - 1;
                let l = t.log[a.0 as usize];
                FqElem(t.exp[((n - l) % n) as usize])
            }
        })
    }

    pub fn div(&self, a: FqElem, b: FqElem) -> Result<FqElem, FieldError> {
        Ok(self.mul(a, self.inv(b)?))
    }

    pub fn pow(&self, a: FqElem, mut e: u64) -> FqElem {
        let mut acc = FqElem::ONE;
        let mut base = a;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    /// `n * a` for a nonnegative integer `n`.
    pub fn scale_int(&self, a: FqElem, n: u64) -> FqElem {
        self.mul(a, self.from_int((n % self.p as u64) as i64))
    }

    /// Euler's criterion: `a` is a nonsquare iff `a != 0` and `a^((q-1)/2) = -1`.
    /// Zero counts as a square.
    pub fn is_nonsquare(&self, a: FqElem) -> bool {
        if a.is_zero() {
            return false;
        }
        self.pow(a, ((self.q - 1) / 2) as u64) == self.neg(FqElem::ONE)
    }

    pub fn is_square(&self, a: FqElem) -> bool {
        !self.is_nonsquare(a)
    }

    /// `1/2`, which exists because the characteristic is odd.
    pub fn half(&self) -> FqElem {
        FqElem(self.p.div_ceil(2))
    }

    /// Formats an element: `"3"` in a prime field, `"[c0,c1,...]"` otherwise.
    pub fn format(&self, a: FqElem) -> String {
        if self.k == 1 {
            a.0.to_string()
        } else {
            let cs: Vec<String> = self.coords(a).iter().map(|c| c.to_string()).collect();
            format!("[{}]", cs.join(","))
        }
    }

    /// Parses the textual element format. Prime fields also accept negative
    /// and out-of-range integers, reduced mod `p`; an extension field accepts
    /// a bare integer as an element of the prime subfield.
    pub fn parse(&self, s: &str) -> Result<FqElem, FieldError> {
        let s = s.trim();
        let err = || FieldError::Parse(s.to_string());
        if let Some(inner) = s.strip_prefix('[').and_then(|r| r.strip_suffix(']')) {
            let cs: Vec<i64> = inner
                .split(',')
                .map(|c| c.trim().parse::<i64>().map_err(|_| err()))
                .collect::<Result<_, _>>()?;
            if cs.len() != self.k as usize {
                return Err(err());
            }
            let reduced: Vec<u32> = cs
                .iter()
                .map(|c| c.rem_euclid(self.p as i64) as u32)
                .collect();
            return self.from_coords(&reduced).ok_or_else(err);
        }
        let n: i64 = s.parse().map_err(|_| err())?;
        Ok(self.from_int(n))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn squares(ctx: &FqCtx) -> Vec<FqElem> {
        let mut v: Vec<FqElem> = ctx.elements().map(|x| ctx.mul(x, x)).collect();
        v.sort();
        v.dedup();
        v
    }

    #[test]
    fn rejects_bad_parameters() {
        assert_eq!(FqCtx::new(2, 1).unwrap_err(), FieldError::CharacteristicTwo);
        assert_eq!(FqCtx::new(9, 1).unwrap_err(), FieldError::NotOddPrime(9));
        assert_eq!(FqCtx::new(1, 1).unwrap_err(), FieldError::NotOddPrime(1));
        assert_eq!(FqCtx::new(5, 0).unwrap_err(), FieldError::InvalidDegree(0));
        assert!(matches!(
            FqCtx::new(3, 20),
            Err(FieldError::OrderTooLarge(_))
        ));
        assert_eq!(
            split_prime_power(4).unwrap_err(),
            FieldError::CharacteristicTwo
        );
        assert_eq!(
            split_prime_power(12).unwrap_err(),
            FieldError::NotPrimePower(12)
        );
        assert_eq!(split_prime_power(49).unwrap(), (7, 2));
    }

    #[test]
    fn prime_fields_have_no_modulus() {
        let f5 = FqCtx::new(5, 1).unwrap();
        assert_eq!(f5.order(), 5);
        assert!(f5.modulus().is_none());
        let f3 = FqCtx::new(3, 1).unwrap();
        assert_eq!(f3.order(), 3);
    }

    #[test]
    fn f9_modulus_is_lexicographic_minimum() {
        // Monic irreducible quadratics over F_3, found by checking for roots.
        let mut irreducible = Vec::new();
        for c0 in 0..3u32 {
            for c1 in 0..3u32 {
                let has_root = (0..3u32).any(|x| (x * x + c1 * x + c0) % 3 == 0);
                if !has_root {
                    irreducible.push(vec![c0, c1, 1]);
                }
            }
        }
        assert_eq!(irreducible.len(), 3);
        let min = irreducible.iter().min().unwrap().clone();
        let f9 = FqCtx::new(3, 2).unwrap();
        assert_eq!(f9.modulus().unwrap(), &min[..]);
        assert_eq!(min, vec![1, 0, 1]);
    }

    #[test]
    fn euler_criterion_matches_enumeration() {
        let f5 = FqCtx::new(5, 1).unwrap();
        assert_eq!(squares(&f5), vec![FqElem(0), FqElem(1), FqElem(4)]);
        assert!(f5.is_nonsquare(f5.from_int(2)));
        let f3 = FqCtx::new(3, 1).unwrap();
        assert!(!f3.is_nonsquare(f3.from_int(1)));
        assert!(f3.is_nonsquare(f3.from_int(2)));
        for q in [3u64, 5, 7, 9, 11, 25, 27, 49] {
            let ctx = FqCtx::with_order(q).unwrap();
            assert!(!ctx.is_nonsquare(FqElem::ZERO));
            let sq = squares(&ctx);
            let mut nonsquares = 0;
            for a in ctx.elements() {
                assert_eq!(ctx.is_nonsquare(a), !sq.contains(&a), "q={q} a={a:?}");
                nonsquares += ctx.is_nonsquare(a) as u32;
            }
            assert_eq!(nonsquares, (ctx.order() - 1) / 2);
        }
    }

    #[test]
    fn quadratic_character_is_multiplicative() {
        for q in [3u64, 5, 7, 9, 25] {
            let ctx = FqCtx::with_order(q).unwrap();
            for a in ctx.elements().skip(1) {
                for b in ctx.elements().skip(1) {
                    assert_eq!(
                        ctx.is_nonsquare(ctx.mul(a, b)),
                        ctx.is_nonsquare(a) ^ ctx.is_nonsquare(b)
                    );
                }
            }
        }
    }

    #[test]
    fn field_axioms_exhaustive() {
        for q in [3u64, 5, 7, 9, 25] {
            let ctx = FqCtx::with_order(q).unwrap();
            let els: Vec<FqElem> = ctx.elements().collect();
            for &a in &els {
                assert_eq!(ctx.add(a, ctx.neg(a)), FqElem::ZERO);
                if !a.is_zero() {
                    assert_eq!(ctx.mul(a, ctx.inv(a).unwrap()), FqElem::ONE);
                    assert_eq!(ctx.pow(a, (ctx.order() - 1) as u64), FqElem::ONE);
                }
                for &b in &els {
                    assert_eq!(ctx.add(a, b), ctx.add(b, a));
                    assert_eq!(ctx.mul(a, b), ctx.mul(b, a));
                    for &c in &els {
                        assert_eq!(ctx.add(ctx.add(a, b), c), ctx.add(a, ctx.add(b, c)));
                        assert_eq!(ctx.mul(ctx.mul(a, b), c), ctx.mul(a, ctx.mul(b, c)));
                        assert_eq!(
                            ctx.mul(a, ctx.add(b, c)),
                            ctx.add(ctx.mul(a, b), ctx.mul(a, c))
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn large_extension_uses_zech_addition() {
        // 3^6 = 729 is above the full-table limit.
        let ctx = FqCtx::new(3, 6).unwrap();
        for a in ctx.elements().step_by(37) {
            for b in ctx.elements().step_by(53) {
                let want: Vec<u32> = ctx
                    .coords(a)
                    .iter()
                    .zip(ctx.coords(b))
                    .map(|(x, y)| (x + y) % 3)
                    .collect();
                assert_eq!(ctx.coords(ctx.add(a, b)), want);
                assert_eq!(ctx.sub(ctx.add(a, b), b), a);
            }
        }
    }

    #[test]
    fn inverse_of_two_in_f5() {
        let f5 = FqCtx::new(5, 1).unwrap();
        assert_eq!(f5.inv(f5.from_int(2)).unwrap(), f5.from_int(3));
        assert_eq!(
            f5.inv(FqElem::ZERO).unwrap_err(),
            FieldError::DivisionByZero
        );
    }

    #[test]
    fn text_format() {
        let f5 = FqCtx::new(5, 1).unwrap();
        assert_eq!(f5.parse("-2").unwrap(), f5.from_int(3));
        assert_eq!(f5.format(f5.from_int(3)), "3");
        let f9 = FqCtx::new(3, 2).unwrap();
        let a = f9.parse("[2,1]").unwrap();
        assert_eq!(f9.coords(a), vec![2, 1]);
        assert_eq!(f9.format(a), "[2,1]");
        assert_eq!(f9.parse("2").unwrap(), f9.from_int(2));
        assert!(f9.parse("[1,2,0]").is_err());
        assert!(f9.parse("x").is_err());
    }
}
