//! Irreducible compositions of monic quadratics over finite fields of odd
//! characteristic.
//!
//! A finite alphabet of quadratics `(x - a)^2 - b` is compiled into a partial
//! DFA accepting exactly the words whose compositions (and all their
//! prefixes) are irreducible. Around that sit a nonsquare-chain test, a
//! quadratic decomposition routine, listing of all irreducible compositions of
//! a given degree, and a p-adic layer that reduces to the residue field.
//!
//! ```
//! use quadcomp::field::FqCtx;
//! use quadcomp::monoid::{Alphabet, MonicQuad};
//! use quadcomp::automaton;
//!
//! let ctx = FqCtx::new(5, 1).unwrap();
//! let s = Alphabet::new(&ctx, vec![
//!     MonicQuad::new(ctx.from_int(0), ctx.from_int(2)),
//!     MonicQuad::new(ctx.from_int(1), ctx.from_int(3)),
//! ]).unwrap();
//! let (_, m) = automaton::build(&s).unwrap();
//! assert!(m.accepts(&s.parse_word("ffggf").unwrap()));
//! assert_eq!(m.count_accepted(8).unwrap(), 4);
//! ```

pub mod automaton;
pub mod cli;
pub mod field;
pub mod fixtures;
pub mod irreducibility;
pub mod monoid;
pub mod padic;
pub mod poly;
