//! Deciding, listing and canonicalizing irreducible compositions.

mod chain;
mod decompose;
mod enumerate;

use thiserror::Error;

pub use chain::{chain_irreducible, ChainReport};
pub use decompose::{
    canonicalize, decompose_quadratic_outer, full_decompose, test_decomposable, CanonicalChain,
    DecompositionTester, DecompositionVerdict,
};
pub use enumerate::{
    enumerate_irreducible_degree, enumerate_level, enumerate_level_with, IrreducibleStream, Level,
    LevelEntry, LevelListing, ShiftedComposition,
};

use crate::automaton::AutomatonError;
use crate::monoid::MonoidError;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum IrrError {
    #[error("the criterion needs a nonempty word")]
    EmptyWord,
    #[error("composition length must be at least 1")]
    ZeroLength,
    #[error("polynomial is not monic")]
    NotMonic,
    #[error("degree {0} is odd")]
    OddDegree(usize),
    #[error("degree {0} is not a power of two at least 2")]
    NotPowerOfTwo(usize),
    #[error("not a composition of monic quadratics (failed at level {level})")]
    NotDecomposable { level: usize },
    #[error("polynomial is reducible")]
    NotIrreducible,
    #[error(transparent)]
    Monoid(#[from] MonoidError),
    #[error(transparent)]
    Automaton(#[from] AutomatonError),
}
