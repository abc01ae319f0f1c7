//! Least-squares power-law fits in log-log coordinates.

use serde::Serialize;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SlopeFit {
    pub points: Vec<(f64, f64)>,
    pub slope: f64,
    pub intercept: f64,
    /// Root-mean-square deviation from the line.
    pub residual: f64,
}

impl SlopeFit {
    /// `None` with fewer than two points, equal abscissae or a non-finite ordinate.
    pub fn new(points: Vec<(f64, f64)>) -> Option<Self> {
        let n = points.len() as f64;
        if points.len() < 2 || points.iter().any(|p| !p.0.is_finite() || !p.1.is_finite()) {
            return None;
        }
        let mx = points.iter().map(|p| p.0).sum::<f64>() / n;
        let my = points.iter().map(|p| p.1).sum::<f64>() / n;
        let sxx: f64 = points.iter().map(|p| (p.0 - mx).powi(2)).sum();
        if sxx == 0.0 {
            return None;
        }
        let sxy: f64 = points.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
        let slope = sxy / sxx;
        let intercept = my - slope * mx;
        let residual = (points.iter().map(|p| (p.1 - slope * p.0 - intercept).powi(2)).sum::<f64>() / n).sqrt();
        Some(Self { points, slope, intercept, residual })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn degenerate_inputs() {
        assert!(SlopeFit::new(vec![(1.0, 2.0)]).is_none());
        assert!(SlopeFit::new(vec![(1.0, 2.0), (1.0, 3.0)]).is_none());
        assert!(SlopeFit::new(vec![(1.0, f64::NEG_INFINITY), (2.0, 3.0)]).is_none());
    }

    proptest! {
        #[test]
        fn exact_lines_are_recovered(a in -10.0f64..10.0, b in -10.0f64..10.0, n in 2usize..10) {
            let pts: Vec<_> = (0..n).map(|i| (-(i as f64) - 3.0, a * (-(i as f64) - 3.0) + b)).collect();
            let f = SlopeFit::new(pts).unwrap();
            prop_assert!((f.slope - a).abs() < 1e-9);
            prop_assert!((f.intercept - b).abs() < 1e-8);
            prop_assert!(f.residual < 1e-8);
        }
    }
}
