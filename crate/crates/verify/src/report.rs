//! JSON verification reports.

use serde::Serialize;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Verdict {
    Pass,
    Fail,
    /// Nothing to measure (for instance a constant Hessian).
    Degenerate,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Estimate {
    pub param: f64,
    pub value: f64,
    pub stderr: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct VerificationReport {
    pub condition: String,
    pub polynomial: String,
    pub grid: Vec<f64>,
    pub estimates: Vec<Estimate>,
    pub slope: Option<f64>,
    pub intercept: Option<f64>,
    pub residual: Option<f64>,
    pub predicted: Option<f64>,
    pub predicted_exact: Option<String>,
    pub tolerance: f64,
    pub verdict: Verdict,
    pub seed: u64,
    pub samples: usize,
    pub note: Option<String>,
}

impl VerificationReport {
    pub fn passed(&self) -> bool {
        self.verdict != Verdict::Fail
    }
}
