//! Helpers shared by the integration tests and the acceptance run.

#![allow(dead_code)]

use std::collections::HashSet;
use std::sync::Arc;

use quadcomp::field::{FqCtx, FqElem};
use quadcomp::irreducibility::CanonicalChain;
use quadcomp::monoid::{Alphabet, MonicQuad};
use quadcomp::poly::FqPoly;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub const GRID_ORDERS: [u64; 4] = [3, 5, 7, 9];

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn random_elem(ctx: &FqCtx, rng: &mut ChaCha8Rng) -> FqElem {
    ctx.elem(rng.gen_range(0..ctx.order())).unwrap()
}

/// `count` distinct letters, drawn uniformly from all `q^2` quadratics.
pub fn letter_sample(ctx: &Arc<FqCtx>, count: usize, rng: &mut ChaCha8Rng) -> Vec<MonicQuad> {
    let mut all: Vec<MonicQuad> = ctx
        .elements()
        .flat_map(|a| ctx.elements().map(move |b| MonicQuad::new(a, b)))
        .collect();
    all.shuffle(rng);
    all.truncate(count);
    all
}

/// Every alphabet of one or two letters from a seeded sample of `sample`
/// letters, plus the maximal alphabet.
pub fn alphabet_grid(q: u64, sample: usize, seed: u64) -> Vec<Alphabet> {
    let ctx = FqCtx::with_order(q).unwrap();
    let letters = letter_sample(&ctx, sample, &mut rng(seed ^ q));
    let mut out = Vec::new();
    for i in 0..letters.len() {
        out.push(Alphabet::new(&ctx, vec![letters[i]]).unwrap());
        for j in i + 1..letters.len() {
            out.push(Alphabet::new(&ctx, vec![letters[i], letters[j]]).unwrap());
        }
    }
    out.push(Alphabet::maximal(&ctx));
    out
}

/// All irreducible polynomials of the form `g_1 ∘ ... ∘ g_n` with every `g_i`
/// a monic quadratic, found by composing every tuple and asking Rabin.
pub fn brute_force_compositions(ctx: &Arc<FqCtx>, n: usize) -> HashSet<FqPoly> {
    let quads: Vec<FqPoly> = ctx
        .elements()
        .flat_map(|a| ctx.elements().map(move |b| (a, b)))
        .map(|(a, b)| MonicQuad::new(a, b).to_poly(ctx))
        .collect();
    let mut level: HashSet<FqPoly> = std::iter::once(FqPoly::x(ctx)).collect();
    for _ in 0..n {
        level = level
            .iter()
            .flat_map(|p| quads.iter().map(move |g| g.compose(p)))
            .collect();
    }
    level
        .into_iter()
        .filter(|p| p.is_irreducible().unwrap())
        .collect()
}

pub fn random_chain(ctx: &FqCtx, n: usize, rng: &mut ChaCha8Rng) -> CanonicalChain {
    CanonicalChain {
        a_values: (0..n).map(|_| random_elem(ctx, rng)).collect(),
        b: random_elem(ctx, rng),
    }
}

pub fn random_monic(ctx: &Arc<FqCtx>, degree: usize, rng: &mut ChaCha8Rng) -> FqPoly {
    let mut coeffs: Vec<FqElem> = (0..degree).map(|_| random_elem(ctx, rng)).collect();
    coeffs.push(FqElem::ONE);
    FqPoly::from_coeffs(ctx, coeffs)
}
