//! Pointwise check of the mixed-homogeneous scaling identity
//! `T_R f_sigma(x) = sigma^-(k1+k2) (T_{R_sigma} f)(sigma^k1 x1, sigma^k2 x2, sigma x3)`.

use rayon::prelude::*;

use rsharp_core::poly::rat_to_f64;
use rsharp_core::{BivarPoly, MixedWeight};

use crate::pairing::KahanSum;
use crate::sets::{Box3, Surface};

pub const DEFAULT_RESOLUTION: f64 = 1.0 / 256.0;

/// A 3x3x3 grid of evaluation points avoiding symmetric positions.
pub fn default_x_grid() -> Vec<[f64; 3]> {
    let v = [-0.61, 0.07, 0.73];
    let mut out = Vec::with_capacity(27);
    for &a in &v {
        for &b in &v {
            for &c in &v {
                out.push([a, b * 0.9, c * 1.1]);
            }
        }
    }
    out
}

/// Both sides at one point, with the same tensor midpoint rule on `R = [-1,1]^2`
/// of step `h`; the right side uses the image cells of area `sigma^(k1+k2) h^2`.
pub fn both_sides(surface: &Surface, kappa: (f64, f64), sigma: f64, f: &Box3, x: [f64; 3], h: f64) -> (f64, f64) {
    let n = (2.0 / h).round() as usize;
    let (s1, s2) = (sigma.powf(kappa.0), sigma.powf(kappa.1));
    let area = h * h;
    let image_area = s1 * s2 * area;
    let (mut lhs, mut rhs) = (KahanSum::default(), KahanSum::default());
    for i in 0..n {
        let t1 = -1.0 + (i as f64 + 0.5) * h;
        for j in 0..n {
            let t2 = -1.0 + (j as f64 + 0.5) * h;
            if f.contains([s1 * (x[0] - t1), s2 * (x[1] - t2), sigma * (x[2] - surface.eval(t1, t2))]) {
                lhs.add(area);
            }
            let (u1, u2) = (s1 * t1, s2 * t2);
            if f.contains([s1 * x[0] - u1, s2 * x[1] - u2, sigma * x[2] - surface.eval(u1, u2)]) {
                rhs.add(image_area);
            }
        }
    }
    (lhs.value(), rhs.value() / (s1 * s2))
}

/// Largest relative residual over the evaluation points.
pub fn scaling_identity_check(
    phi: &BivarPoly,
    weight: &MixedWeight,
    sigma: f64,
    f: &Box3,
    xs: &[[f64; 3]],
    h: f64,
) -> f64 {
    let surface = Surface::new(phi);
    let kappa = (rat_to_f64(&weight.kappa1), rat_to_f64(&weight.kappa2));
    let residuals: Vec<f64> = xs
        .par_iter()
        .map(|&x| {
            let (l, r) = both_sides(&surface, kappa, sigma, f, x, h);
            let scale = l.abs().max(r.abs());
            if scale == 0.0 {
                0.0
            } else {
                (l - r).abs() / scale
            }
        })
        .collect();
    residuals.into_iter().fold(0.0, f64::max)
}
