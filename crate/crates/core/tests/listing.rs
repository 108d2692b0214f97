mod common;

use std::collections::HashSet;

use quadcomp::field::FqCtx;
use quadcomp::irreducibility::{
    canonicalize, chain_irreducible, enumerate_irreducible_degree, enumerate_level, full_decompose,
    DecompositionTester, DecompositionVerdict, IrrError,
};
use quadcomp::monoid::{all_words, Alphabet};
use quadcomp::poly::FqPoly;
use rand::Rng;

use common::*;

#[test]
fn level_listing_equals_filtered_words() {
    for q in [3u64, 5, 9] {
        for s in alphabet_grid(q, 4, 10) {
            if s.len() > 3 {
                continue;
            }
            for n in 1..=6 {
                let listed: Vec<_> = enumerate_level(&s, n)
                    .unwrap()
                    .level
                    .words()
                    .cloned()
                    .collect();
                let filtered: Vec<_> = all_words(s.len(), n)
                    .filter(|w| {
                        (1..=n).all(|k| {
                            chain_irreducible(&w.prefix(k), &s)
                                .unwrap()
                                .is_irreducible()
                        })
                    })
                    .collect();
                assert_eq!(listed, filtered);
            }
        }
    }
}

#[test]
fn listing_matches_brute_force() {
    for (q, n) in [(3u64, 1usize), (3, 2), (5, 2), (3, 3)] {
        let ctx = FqCtx::new(q, 1).unwrap();
        let listed: HashSet<FqPoly> = enumerate_irreducible_degree(&ctx, n)
            .unwrap()
            .map(|c| c.poly)
            .collect();
        assert_eq!(listed, brute_force_compositions(&ctx, n), "q={q} n={n}");
    }
}

#[test]
fn shift_classes_are_disjoint() {
    for (q, n) in [(3u64, 1usize), (3, 2), (3, 3), (5, 1), (5, 2), (5, 3)] {
        let ctx = FqCtx::new(q, 1).unwrap();
        let all: Vec<_> = enumerate_irreducible_degree(&ctx, n).unwrap().collect();
        let distinct: HashSet<&FqPoly> = all.iter().map(|c| &c.poly).collect();
        assert_eq!(distinct.len(), all.len(), "q={q} n={n}");
    }
}

#[test]
fn listed_polynomials_round_trip() {
    let ctx = FqCtx::new(5, 1).unwrap();
    let tester = DecompositionTester::new(&ctx);
    for c in enumerate_irreducible_degree(&ctx, 3).unwrap() {
        let chain = full_decompose(&c.poly).unwrap();
        assert_eq!(chain.recompose(&ctx), c.poly);
        assert_eq!(
            tester.canonicalize(&c.poly).unwrap(),
            (c.shift, c.word.clone())
        );
        assert_eq!(
            tester.test(&c.poly).unwrap(),
            DecompositionVerdict::Irreducible
        );
    }
}

#[test]
fn random_chains_round_trip() {
    let mut rng = rng(20);
    for q in [3u64, 7, 9, 25] {
        let ctx = FqCtx::with_order(q).unwrap();
        for _ in 0..40 {
            let chain = random_chain(&ctx, rng.gen_range(1..=5), &mut rng);
            assert_eq!(full_decompose(&chain.recompose(&ctx)).unwrap(), chain);
        }
    }
}

#[test]
fn verdict_is_translation_invariant() {
    let mut rng = rng(21);
    for q in [3u64, 5, 7, 9] {
        let ctx = FqCtx::with_order(q).unwrap();
        let tester = DecompositionTester::new(&ctx);
        for _ in 0..60 {
            let f = random_chain(&ctx, rng.gen_range(1..=4), &mut rng).recompose(&ctx);
            let c = random_elem(&ctx, &mut rng);
            let v = tester.test(&f).unwrap();
            let irreducible = |v| v == DecompositionVerdict::Irreducible;
            assert_eq!(
                irreducible(tester.test(&f.shift(c)).unwrap()),
                irreducible(v)
            );
            assert_eq!(irreducible(v), f.is_irreducible().unwrap());
        }
    }
}

#[test]
fn random_monic_polynomials_are_rarely_decomposable() {
    let mut rng = rng(22);
    let ctx = FqCtx::new(7, 1).unwrap();
    let tester = DecompositionTester::new(&ctx);
    for _ in 0..200 {
        let f = random_monic(&ctx, 8, &mut rng);
        match tester.test(&f).unwrap() {
            DecompositionVerdict::NotDecomposable { level } => assert!((1..=3).contains(&level)),
            v => {
                let chain = full_decompose(&f).unwrap();
                assert_eq!(chain.recompose(&ctx), f);
                assert_eq!(
                    v == DecompositionVerdict::Irreducible,
                    f.is_irreducible().unwrap()
                );
            }
        }
    }
}

#[test]
fn canonicalize_rejects_reducible_input() {
    let ctx = FqCtx::new(3, 1).unwrap();
    let s = Alphabet::maximal(&ctx);
    let gg = s.pi(&s.parse_word("gg").unwrap()).unwrap();
    assert_eq!(canonicalize(&gg).unwrap_err(), IrrError::NotIrreducible);
    let not = FqPoly::from_ints(&ctx, &[1, 1, 0, 0, 1]);
    assert!(matches!(
        canonicalize(&not),
        Err(IrrError::NotDecomposable { .. })
    ));
}
