//! Numerical checks: Monte-Carlo pairings of test sets against the averaging
//! operator, log-log slope fits, the scaling identity and level-set measures.

pub mod families;
pub mod fit;
pub mod measure;
pub mod pairing;
pub mod report;
pub mod scaling;
pub mod sets;

use thiserror::Error;

pub use families::{family, necessity_slope_test, normal_form, Condition, Family, FamilyInstance};
pub use fit::SlopeFit;
pub use measure::{measure_slope_test, measure_slope_tests};
pub use pairing::{estimate_pairing, PairingEstimate};
pub use report::{Estimate, Verdict, VerificationReport};
pub use scaling::scaling_identity_check;
pub use sets::{Box3, ESet, Surface};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum VerifyError {
    #[error("a test set has zero volume")]
    DegenerateBox,
    #[error("at least 1000 samples are required, got {0}")]
    TooFewSamples(usize),
    #[error("inapplicable condition: {0}")]
    InapplicableCondition(String),
    #[error("unknown condition {0:?}")]
    UnknownCondition(String),
    #[error("a slope fit needs at least two grid points, got {0}")]
    GridTooShort(usize),
}
