//! The two small alphabets used throughout the tests and docs.

use crate::field::FqCtx;
use crate::monoid::{Alphabet, MonicQuad};

/// `q = 5`, `f = x^2 - 2`, `g = (x - 1)^2 - 3`.
pub fn f5_pair() -> Alphabet {
    let ctx = FqCtx::new(5, 1).expect("F_5");
    let letters = vec![
        MonicQuad::new(ctx.from_int(0), ctx.from_int(2)),
        MonicQuad::new(ctx.from_int(1), ctx.from_int(3)),
    ];
    Alphabet::new(&ctx, letters).expect("distinct letters")
}

/// `q = 3`, `f = x^2`, `g = x^2 - 1`, `h = x^2 - 2`; the maximal alphabet of `F_3`.
pub fn f3_maximal() -> Alphabet {
    Alphabet::maximal(&FqCtx::new(3, 1).expect("F_3"))
}
