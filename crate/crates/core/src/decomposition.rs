//! Covering of `[-1,1]^2` by thin regions around the real factors of the
//! Hessian determinant, plus the complement `R_0`.

use crate::classify::{SurfaceInvariants, FT};
use crate::factor::FactorDecomposition;
use crate::poly::{rat, rat_to_f64, Rational};

#[derive(Clone, Debug, PartialEq)]
pub enum RegionKind {
    /// `|z2^s - lambda z1^r| < eps |z1|^r`
    AroundRealCurve { lambda: f64 },
    /// `|z2|^s < eps |z1|^r`, present when `z2` divides the Hessian.
    AroundZ2Axis,
    /// `|z1|^r < eps |z2|^s`, present when `z1` divides the Hessian.
    AroundZ1Axis,
    /// Outside all the other regions.
    ComplementR0(Vec<RegionKind>),
}

#[derive(Clone, Debug, PartialEq)]
pub struct RegionSpec {
    pub index: usize,
    pub kind: RegionKind,
    pub r: u32,
    pub s: u32,
    /// Multiplicity of the factor in the Hessian; 0 for `R_0`.
    pub mult: u32,
    pub eps_tilde: Rational,
    /// Drop the clipping to `[-1,1]^2`.
    pub extended: bool,
}

impl RegionSpec {
    pub fn extended(&self) -> Self {
        Self { extended: true, ..self.clone() }
    }

    pub fn contains(&self, z1: f64, z2: f64) -> bool {
        region_membership(self, (z1, z2))
    }
}

fn kind_contains(kind: &RegionKind, r: u32, s: u32, eps: f64, z1: f64, z2: f64) -> bool {
    let a = z1.abs().powi(r as i32);
    let b = z2.abs().powi(s as i32);
    match kind {
        RegionKind::AroundRealCurve { lambda } => {
            (z2.powi(s as i32) - lambda * z1.powi(r as i32)).abs() < eps * a
        }
        RegionKind::AroundZ2Axis => b < eps * a,
        RegionKind::AroundZ1Axis => a < eps * b,
        RegionKind::ComplementR0(others) => !others.iter().any(|k| kind_contains(k, r, s, eps, z1, z2)),
    }
}

pub fn region_membership(spec: &RegionSpec, point: (f64, f64)) -> bool {
    let (z1, z2) = point;
    if !spec.extended && (z1.abs() > 1.0 || z2.abs() > 1.0) {
        return false;
    }
    kind_contains(&spec.kind, spec.r, spec.s, rat_to_f64(&spec.eps_tilde), z1, z2)
}

/// `R_0, R_1, R_2, R_3, ...`; absent axis regions are left out.
pub fn covering(omega: &FactorDecomposition, eps_tilde: &Rational) -> Vec<RegionSpec> {
    let (r, s) = (omega.r, omega.s);
    let spec = |index, kind, mult| RegionSpec { index, kind, r, s, mult, eps_tilde: eps_tilde.clone(), extended: false };
    let mut regions = Vec::new();
    if omega.nu1_tilde > 0 {
        regions.push(spec(1, RegionKind::AroundZ1Axis, omega.nu1_tilde));
    }
    if omega.nu2_tilde > 0 {
        regions.push(spec(2, RegionKind::AroundZ2Axis, omega.nu2_tilde));
    }
    for (k, f) in omega.real_factors.iter().enumerate() {
        regions.push(spec(3 + k, RegionKind::AroundRealCurve { lambda: f.root.approx }, f.mult));
    }
    let others = regions.iter().map(|p| p.kind.clone()).collect();
    regions.insert(0, spec(0, RegionKind::ComplementR0(others), 0));
    regions
}

/// Index of the first region containing the point; `R_0` otherwise.
pub fn locate(regions: &[RegionSpec], z1: f64, z2: f64) -> usize {
    regions
        .iter()
        .skip(1)
        .find(|p| p.contains(z1, z2))
        .map_or(0, |p| p.index)
}

const PROBE: usize = 100;
const MAX_HALVINGS: u32 = 60;

fn probe_points() -> impl Iterator<Item = (f64, f64)> {
    let h = 2.0 / PROBE as f64;
    (0..PROBE).flat_map(move |i| (0..PROBE).map(move |j| (-1.0 + (i as f64 + 0.5) * h, -1.0 + (j as f64 + 0.5) * h)))
}

/// Largest `2^-k <= 1/16` making the non-complement regions pairwise
/// disjoint on a fixed 100x100 probe grid.
pub fn choose_eps_tilde(omega: &FactorDecomposition) -> Rational {
    let mut eps = rat(1, 16);
    for _ in 0..MAX_HALVINGS {
        let regions = covering(omega, &eps);
        let overlap = probe_points().any(|(z1, z2)| regions.iter().skip(1).filter(|p| p.contains(z1, z2)).count() > 1);
        if !overlap {
            return eps;
        }
        eps /= Rational::from_integer(2.into());
    }
    eps
}

/// The region of the unique factor `f_T`, when there is one.
pub fn target_region<'a>(inv: &SurfaceInvariants, regions: &'a [RegionSpec]) -> Option<&'a RegionSpec> {
    match &inv.f_t {
        FT::AxisZ1 => regions.iter().find(|p| p.kind == RegionKind::AroundZ1Axis),
        FT::AxisZ2 => regions.iter().find(|p| p.kind == RegionKind::AroundZ2Axis),
        FT::Curve(root) => regions.iter().find(|p| {
            matches!(p.kind, RegionKind::AroundRealCurve { lambda } if lambda == root.approx)
        }),
        FT::None => None,
    }
}

/// Covering of the Hessian of `inv.phi`, with `eps_tilde` chosen by probing.
pub fn covering_for(inv: &SurfaceInvariants) -> Option<Vec<RegionSpec>> {
    let fd = inv.omega_factors.as_ref()?;
    Some(covering(fd, &choose_eps_tilde(fd)))
}
