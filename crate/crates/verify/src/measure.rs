//! Level-set measures `mu(R_j and {2^-m-1 <= |omega| < 2^-m})` by importance sampling.

use std::f64::consts::LN_2;

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use rsharp_core::decomposition::{covering_for, RegionKind, RegionSpec};
use rsharp_core::poly::{int, rat_to_f64};
use rsharp_core::SurfaceInvariants;

use crate::fit::SlopeFit;
use crate::pairing::{mean_and_stderr, substream, KahanSum, CHUNK};
use crate::report::{Estimate, Verdict, VerificationReport};
use crate::sets::Surface;
use crate::VerifyError;

pub const MEASURE_TOLERANCE: f64 = 0.1;
/// Log-uniform components reach down to `2^-LOG_RANGE`.
const LOG_RANGE: f64 = 40.0;

pub fn default_m_grid() -> Vec<i32> {
    (4..=12).collect()
}

#[derive(Clone, Copy, Debug)]
struct Curve {
    lambda: f64,
    r: i32,
    s: i32,
}

/// Mixture of a uniform law, a log-log law concentrating at the axes and
/// origin, and one law per real curve concentrating along it.
#[derive(Clone, Debug)]
pub struct Sampler {
    curves: Vec<Curve>,
    w_uniform: f64,
    w_loglog: f64,
    w_curve: f64,
}

/// Density of `±2^(-L a)`, `a` uniform on `[0,1]`.
#[inline]
fn log_density(z: f64) -> f64 {
    let a = z.abs();
    if a < 2f64.powf(-LOG_RANGE) || a > 1.0 {
        0.0
    } else {
        1.0 / (2.0 * LOG_RANGE * LN_2 * a)
    }
}

#[inline]
fn log_sample(rng: &mut ChaCha8Rng) -> f64 {
    let v = 2f64.powf(-LOG_RANGE * rng.gen::<f64>());
    if rng.gen::<bool>() {
        v
    } else {
        -v
    }
}

fn real_roots(c: &Curve, z1: f64) -> ([f64; 2], usize) {
    let v = c.lambda * z1.powi(c.r);
    let inv_s = 1.0 / c.s as f64;
    if c.s % 2 == 1 {
        ([v.signum() * v.abs().powf(inv_s), 0.0], 1)
    } else if v > 0.0 {
        let w = v.powf(inv_s);
        ([w, -w], 2)
    } else if v == 0.0 {
        ([0.0, 0.0], 1)
    } else {
        ([0.0, 0.0], 0)
    }
}

impl Sampler {
    pub fn new(regions: &[RegionSpec]) -> Self {
        let curves: Vec<Curve> = regions
            .iter()
            .filter_map(|p| match p.kind {
                RegionKind::AroundRealCurve { lambda } => Some(Curve { lambda, r: p.r as i32, s: p.s as i32 }),
                _ => None,
            })
            .collect();
        let (w_uniform, w_loglog, w_curve) = if curves.is_empty() { (0.3, 0.7, 0.0) } else { (0.2, 0.3, 0.5) };
        Self { curves, w_uniform, w_loglog, w_curve }
    }

    fn z1_marginal(z1: f64) -> f64 {
        let u = if z1.abs() <= 1.0 { 0.5 } else { 0.0 };
        0.5 * u + 0.5 * log_density(z1)
    }

    fn curve_density(c: &Curve, z1: f64, z2: f64) -> f64 {
        let (roots, k) = real_roots(c, z1);
        let cond = if k == 0 {
            if z2.abs() <= 1.0 {
                0.5
            } else {
                0.0
            }
        } else {
            roots[..k].iter().map(|&r0| log_density(z2 - r0)).sum::<f64>() / k as f64
        };
        Self::z1_marginal(z1) * cond
    }

    pub fn density(&self, z1: f64, z2: f64) -> f64 {
        let uni = if z1.abs() <= 1.0 && z2.abs() <= 1.0 { 0.25 } else { 0.0 };
        let mut q = self.w_uniform * uni + self.w_loglog * log_density(z1) * log_density(z2);
        if !self.curves.is_empty() {
            let each = self.w_curve / self.curves.len() as f64;
            q += each * self.curves.iter().map(|c| Self::curve_density(c, z1, z2)).sum::<f64>();
        }
        q
    }

    pub fn sample(&self, rng: &mut ChaCha8Rng) -> (f64, f64) {
        let pick: f64 = rng.gen();
        if pick < self.w_uniform {
            (rng.gen_range(-1.0..=1.0), rng.gen_range(-1.0..=1.0))
        } else if pick < self.w_uniform + self.w_loglog {
            (log_sample(rng), log_sample(rng))
        } else {
            let c = &self.curves[rng.gen_range(0..self.curves.len())];
            let z1 = if rng.gen::<bool>() { rng.gen_range(-1.0..=1.0) } else { log_sample(rng) };
            let (roots, k) = real_roots(c, z1);
            let z2 = if k == 0 { rng.gen_range(-1.0..=1.0) } else { roots[rng.gen_range(0..k)] + log_sample(rng) };
            (z1, z2)
        }
    }
}

/// `m` with `2^-m-1 <= |w| < 2^-m`.
#[inline]
pub fn level_index(w: f64) -> Option<i32> {
    if w == 0.0 || !w.is_finite() {
        return None;
    }
    Some((-w.abs().log2()).ceil() as i32 - 1)
}

/// Estimated measure of `spec` intersected with each dyadic level set.
pub fn level_set_measures(
    omega: &Surface,
    regions: &[RegionSpec],
    spec: &RegionSpec,
    m_grid: &[i32],
    n: usize,
    seed: u64,
) -> Vec<(f64, f64)> {
    let sampler = Sampler::new(regions);
    let bins = m_grid.len();
    let chunks = n.div_ceil(CHUNK);
    let parts: Vec<Vec<(f64, f64)>> = (0..chunks)
        .into_par_iter()
        .map(|k| {
            let mut rng = substream(seed, k as u64);
            let mut acc = vec![(KahanSum::default(), KahanSum::default()); bins];
            for _ in k * CHUNK..((k + 1) * CHUNK).min(n) {
                let (z1, z2) = sampler.sample(&mut rng);
                if !spec.contains(z1, z2) {
                    continue;
                }
                let Some(m) = level_index(omega.eval(z1, z2)) else { continue };
                if let Some(b) = m_grid.iter().position(|&g| g == m) {
                    let v = 1.0 / sampler.density(z1, z2);
                    acc[b].0.add(v);
                    acc[b].1.add(v * v);
                }
            }
            acc.into_iter().map(|(a, b)| (a.value(), b.value())).collect()
        })
        .collect();
    let mut tot = vec![(KahanSum::default(), KahanSum::default()); bins];
    for part in parts {
        for (b, (s, s2)) in part.into_iter().enumerate() {
            tot[b].0.add(s);
            tot[b].1.add(s2);
        }
    }
    tot.into_iter().map(|(s, s2)| mean_and_stderr(s.value(), s2.value(), n)).collect()
}

/// The exponent bound `1 / max(n_j, d_omega)`; `None` when the bound does not apply.
pub fn decay_exponent(inv: &SurfaceInvariants, spec: &RegionSpec) -> Result<f64, VerifyError> {
    let d = &inv.d_omega;
    if spec.index == 0 {
        return Ok(1.0 / rat_to_f64(d));
    }
    let nj = int(spec.mult as i64);
    if &nj == d {
        return Err(VerifyError::InapplicableCondition(format!(
            "region {} has multiplicity equal to d_omega = {d}",
            spec.index
        )));
    }
    Ok(1.0 / rat_to_f64(if &nj > d { &nj } else { d }))
}

pub fn measure_slope_test(
    inv: &SurfaceInvariants,
    spec: &RegionSpec,
    regions: &[RegionSpec],
    m_grid: &[i32],
    n: usize,
    seed: u64,
) -> Result<VerificationReport, VerifyError> {
    let grid: Vec<f64> = m_grid.iter().map(|&m| m as f64).collect();
    let mut report = VerificationReport {
        condition: "measure".into(),
        polynomial: rsharp_core::format(&inv.phi),
        grid: grid.clone(),
        estimates: Vec::new(),
        slope: None,
        intercept: None,
        residual: None,
        predicted: None,
        predicted_exact: None,
        tolerance: MEASURE_TOLERANCE,
        verdict: Verdict::Degenerate,
        seed,
        samples: n,
        note: Some(format!("region R_{}", spec.index)),
    };
    if inv.omega_factors.is_none() || inv.d_omega <= int(0) {
        report.note = Some("constant or vanishing Hessian: level sets are trivial".into());
        return Ok(report);
    }
    let k = decay_exponent(inv, spec)?;
    let omega = Surface::new(&inv.omega);
    let total = n.saturating_mul(m_grid.len().max(1));
    let measures = level_set_measures(&omega, regions, spec, m_grid, total, seed);
    report.samples = total;
    report.estimates = grid
        .iter()
        .zip(&measures)
        .map(|(&param, &(value, stderr))| Estimate { param, value, stderr })
        .collect();
    report.predicted = Some(-k);
    report.predicted_exact = Some(format!("<= -1/{}", 1.0 / k));
    let points: Vec<(f64, f64)> = grid
        .iter()
        .zip(&measures)
        .filter(|(_, m)| m.0 > 0.0)
        .map(|(&g, m)| (g, m.0.log2()))
        .collect();
    let dropped = grid.len() - points.len();
    if let Some(fit) = SlopeFit::new(points) {
        report.verdict = if fit.slope <= -k + MEASURE_TOLERANCE { Verdict::Pass } else { Verdict::Fail };
        report.slope = Some(fit.slope);
        report.intercept = Some(fit.intercept);
        report.residual = Some(fit.residual);
        if dropped > 0 {
            report.note = Some(format!("region R_{}; {dropped} empty level sets left out of the fit", spec.index));
        }
    } else {
        report.note = Some(format!("region R_{}: fewer than two nonempty level sets", spec.index));
    }
    Ok(report)
}

/// One report per region to which the bound applies.
pub fn measure_slope_tests(
    inv: &SurfaceInvariants,
    m_grid: &[i32],
    n: usize,
    seed: u64,
) -> Result<Vec<VerificationReport>, VerifyError> {
    let Some(regions) = covering_for(inv) else {
        return Err(VerifyError::InapplicableCondition(format!("{} has no Hessian factorization", inv.case)));
    };
    let mut out = Vec::new();
    for spec in &regions {
        match measure_slope_test(inv, spec, &regions, m_grid, n, seed.wrapping_add(spec.index as u64)) {
            Ok(r) => out.push(r),
            Err(VerifyError::InapplicableCondition(_)) => continue,
            Err(e) => return Err(e),
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rsharp_core::decomposition::target_region;
    use rsharp_core::{classify, parse};

    #[test]
    fn levels() {
        assert_eq!(level_index(0.75), Some(0));
        assert_eq!(level_index(0.5), Some(0));
        assert_eq!(level_index(-0.3), Some(1));
        assert_eq!(level_index(2f64.powi(-12)), Some(11));
        assert_eq!(level_index(0.0), None);
    }

    #[test]
    fn mixture_density_integrates_to_one() {
        let inv = classify(&parse("(z2 - z1^2)*(z2 + 2*z1^2)*z1^3").unwrap()).unwrap();
        let regions = covering_for(&inv).unwrap();
        let s = Sampler::new(&regions);
        // E_q[1/q * 1_{[-1,1]^2}] = 4 - (mass outside is excluded by the indicator).
        let mut rng = substream(5, 0);
        let n = 400_000;
        let mut acc = 0.0;
        for _ in 0..n {
            let (z1, z2) = s.sample(&mut rng);
            if z1.abs() <= 1.0 && z2.abs() <= 1.0 {
                acc += 1.0 / s.density(z1, z2);
            }
        }
        let est = acc / n as f64;
        assert!((est - 4.0).abs() < 0.1, "{est}");
    }

    #[test]
    fn strip_measure_matches_width() {
        // omega = 8 (z2 - z1^2)^2 ... on R_T the level set |omega| ~ 2^-m is a strip of
        // width ~ 2^-m; the fitted slope is about -1.
        let inv = classify(&parse("(z2 - z1^2)^2").unwrap()).unwrap();
        let regions = covering_for(&inv).unwrap();
        let rt = target_region(&inv, &regions).unwrap();
        let r = measure_slope_test(&inv, rt, &regions, &default_m_grid(), 200_000, 1).unwrap();
        let slope = r.slope.unwrap();
        assert!((slope + 1.0).abs() < 0.1, "{slope}");
        assert_eq!(r.verdict, Verdict::Pass);
    }

    #[test]
    fn constant_hessian_is_degenerate() {
        let inv = classify(&parse("z1*z2").unwrap()).unwrap();
        let regions = covering_for(&inv).unwrap();
        let r = measure_slope_test(&inv, &regions[0], &regions, &default_m_grid(), 10_000, 1).unwrap();
        assert_eq!(r.verdict, Verdict::Degenerate);
    }
}
