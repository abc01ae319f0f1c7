//! Test sets `E`, `F` and the surface they are paired through.

use serde::Serialize;

use rsharp_core::BivarPoly;

/// `phi(M t)` for a fixed 2x2 matrix `M` (identity unless a float shear was needed).
#[derive(Clone, Debug, PartialEq)]
pub struct Surface {
    terms: Vec<(i32, i32, f64)>,
    map: Option<[[f64; 2]; 2]>,
}

impl Surface {
    pub fn new(phi: &BivarPoly) -> Self {
        Self { terms: phi.to_float_terms(), map: None }
    }

    /// `t -> phi(t1, t2 + lambda t1)`, for slopes only known approximately.
    pub fn sheared(phi: &BivarPoly, lambda: f64) -> Self {
        Self { terms: phi.to_float_terms(), map: Some([[1.0, 0.0], [lambda, 1.0]]) }
    }

    pub fn swapped(&self) -> Self {
        let m = self.map.unwrap_or([[1.0, 0.0], [0.0, 1.0]]);
        Self { terms: self.terms.clone(), map: Some([[m[0][1], m[0][0]], [m[1][1], m[1][0]]]) }
    }

    #[inline]
    pub fn eval(&self, t1: f64, t2: f64) -> f64 {
        let (z1, z2) = match &self.map {
            None => (t1, t2),
            Some(m) => (m[0][0] * t1 + m[0][1] * t2, m[1][0] * t1 + m[1][1] * t2),
        };
        self.terms.iter().map(|&(a, b, c)| c * z1.powi(a) * z2.powi(b)).sum()
    }

    /// Bound on `|phi|` over `|t_i| <= h_i` (ignores the map).
    pub fn sup_bound(&self, h1: f64, h2: f64) -> f64 {
        self.terms.iter().map(|&(a, b, c)| c.abs() * h1.powi(a) * h2.powi(b)).sum()
    }

    /// Bound on `|d phi/dt1| + |d phi/dt2|` over `|t_i| <= h` (ignores the map).
    pub fn lipschitz_bound(&self, h: f64) -> f64 {
        self.terms
            .iter()
            .map(|&(a, b, c)| c.abs() * (a + b) as f64 * h.powi(a + b - 1))
            .sum()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Box3 {
    pub lo: [f64; 3],
    pub hi: [f64; 3],
}

impl Box3 {
    pub fn new(lo: [f64; 3], hi: [f64; 3]) -> Self {
        Self { lo, hi }
    }

    pub fn symmetric(h: [f64; 3]) -> Self {
        Self { lo: [-h[0], -h[1], -h[2]], hi: h }
    }

    pub fn volume(&self) -> f64 {
        (0..3).map(|i| (self.hi[i] - self.lo[i]).max(0.0)).product()
    }

    pub fn is_degenerate(&self) -> bool {
        (0..3).any(|i| self.hi[i] <= self.lo[i])
    }

    #[inline]
    pub fn contains(&self, y: [f64; 3]) -> bool {
        (0..3).all(|i| self.lo[i] <= y[i] && y[i] <= self.hi[i])
    }
}

/// Sets built from the graph, reflected through the origin in the first two
/// coordinates so that `x - (t, phi(t))` lands in them for `t` near `-y'`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub enum ESet {
    Box(Box3),
    /// `y1 in b1, y2 in b2, |y3 + phi(-y1, -y2)| <= width`.
    GraphSlab { b1: [f64; 2], b2: [f64; 2], width: f64 },
    /// `-y1 in b1, |-y2 - lambda (-y1)^r| <= half_width, |y3| <= h3`.
    CurveSlab { b1: [f64; 2], lambda: f64, r: i32, half_width: f64, h3: f64 },
}

impl ESet {
    #[inline]
    pub fn contains(&self, surface: &Surface, y: [f64; 3]) -> bool {
        match *self {
            ESet::Box(b) => b.contains(y),
            ESet::GraphSlab { b1, b2, width } => {
                b1[0] <= y[0]
                    && y[0] <= b1[1]
                    && b2[0] <= y[1]
                    && y[1] <= b2[1]
                    && (y[2] + surface.eval(-y[0], -y[1])).abs() <= width
            }
            ESet::CurveSlab { b1, lambda, r, half_width, h3 } => {
                let u = -y[0];
                b1[0] <= u
                    && u <= b1[1]
                    && (-y[1] - lambda * u.powi(r)).abs() <= half_width
                    && y[2].abs() <= h3
            }
        }
    }

    pub fn volume(&self) -> f64 {
        match *self {
            ESet::Box(b) => b.volume(),
            ESet::GraphSlab { b1, b2, width } => (b1[1] - b1[0]) * (b2[1] - b2[0]) * 2.0 * width,
            ESet::CurveSlab { b1, half_width, h3, .. } => (b1[1] - b1[0]) * 2.0 * half_width * 2.0 * h3,
        }
    }

    /// Maps `(x, u)` with `u` uniform on the unit square to a point `t` of
    /// `[-1,1]^2` and the Jacobian weight; every `t` with
    /// `x - (t, phi(t)) in E` is reachable. Weight 0 means an empty window.
    #[inline]
    pub fn window(&self, x: [f64; 3], u: [f64; 2]) -> ([f64; 2], f64) {
        let clip = |lo: f64, hi: f64| (lo.max(-1.0), hi.min(1.0));
        match *self {
            ESet::Box(Box3 { lo, hi }) => {
                boxed(clip(x[0] - hi[0], x[0] - lo[0]), clip(x[1] - hi[1], x[1] - lo[1]), u)
            }
            ESet::GraphSlab { b1, b2, .. } => boxed(clip(x[0] - b1[1], x[0] - b1[0]), clip(x[1] - b2[1], x[1] - b2[0]), u),
            ESet::CurveSlab { b1, lambda, r, half_width, .. } => {
                let (a, b) = clip(x[0] + b1[0], x[0] + b1[1]);
                if b <= a {
                    return ([0.0, 0.0], 0.0);
                }
                let t1 = a + u[0] * (b - a);
                let c = x[1] + lambda * (t1 - x[0]).powi(r);
                let (lo, hi) = clip(c - half_width, c + half_width);
                if hi <= lo {
                    return ([t1, 0.0], 0.0);
                }
                ([t1, lo + u[1] * (hi - lo)], (b - a) * (hi - lo))
            }
        }
    }
}

#[inline]
fn boxed(i1: (f64, f64), i2: (f64, f64), u: [f64; 2]) -> ([f64; 2], f64) {
    let (w1, w2) = (i1.1 - i1.0, i2.1 - i2.0);
    if w1 <= 0.0 || w2 <= 0.0 {
        return ([0.0, 0.0], 0.0);
    }
    ([i1.0 + u[0] * w1, i2.0 + u[1] * w2], w1 * w2)
}
