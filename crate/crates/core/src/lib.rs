//! Exact invariants, case classification and Riesz regions for averaging
//! operators over graphs of mixed-homogeneous polynomials in two variables.

pub mod classify;
pub mod corpus;
pub mod decomposition;
pub mod factor;
pub mod newton;
pub mod parser;
pub mod poly;
pub mod region;
pub mod univariate;

pub use classify::{classify, lemma_consistency_suite, CaseLabel, ClassifyError, SurfaceInvariants, FT};
pub use parser::{format, parse, ParseError};
pub use poly::{mixed_weight, BivarPoly, MixedWeight, Rational};
