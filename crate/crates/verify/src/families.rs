//! Test-set families whose pairings decay at the rate each boundary line of
//! the region predicts.

use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use rsharp_core::classify::{CaseLabel, SurfaceInvariants, FT};
use rsharp_core::poly::{int, rat_to_f64};
use rsharp_core::Rational;

use crate::fit::SlopeFit;
use crate::pairing::{estimate_pairing_stream, PairingEstimate};
use crate::report::{Estimate, Verdict, VerificationReport};
use crate::sets::{Box3, ESet, Surface};
use crate::VerifyError;

pub const SLOPE_TOLERANCE: f64 = 0.1;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum Condition {
    QGeP,
    QLe3P,
    ScalingLine,
    CaseNu,
    CaseN1OverN,
    CaseNSlope,
    CaseASlope,
}

impl Condition {
    pub const ALL: [Condition; 7] = [
        Condition::QGeP,
        Condition::QLe3P,
        Condition::ScalingLine,
        Condition::CaseNu,
        Condition::CaseN1OverN,
        Condition::CaseNSlope,
        Condition::CaseASlope,
    ];

    pub fn id(self) -> &'static str {
        match self {
            Condition::QGeP => "q_ge_p",
            Condition::QLe3P => "q_le_3p",
            Condition::ScalingLine => "scaling_line",
            Condition::CaseNu => "case_nu",
            Condition::CaseN1OverN => "case_N_1overN",
            Condition::CaseNSlope => "case_N_slope",
            Condition::CaseASlope => "case_A_slope",
        }
    }

    /// The parameter grows (`K`) rather than shrinks (`eps`).
    pub fn is_large_parameter(self) -> bool {
        self == Condition::QGeP
    }

    pub fn default_grid(self) -> Vec<f64> {
        (3..=8)
            .map(|k| if self.is_large_parameter() { 2f64.powi(k) } else { 2f64.powi(-k) })
            .collect()
    }

    pub fn applies_to(self, case: CaseLabel) -> bool {
        if case.is_excluded() {
            return false;
        }
        match self {
            Condition::QGeP | Condition::QLe3P | Condition::ScalingLine => true,
            Condition::CaseNu => case == CaseLabel::CaseNu,
            Condition::CaseN1OverN | Condition::CaseNSlope => case == CaseLabel::CaseN,
            Condition::CaseASlope => case == CaseLabel::CaseA,
        }
    }

    pub fn applicable(case: CaseLabel) -> Vec<Condition> {
        Self::ALL.into_iter().filter(|c| c.applies_to(case)).collect()
    }
}

impl fmt::Display for Condition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.id())
    }
}

impl FromStr for Condition {
    type Err = VerifyError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Self::ALL
            .into_iter()
            .find(|c| c.id() == s)
            .ok_or_else(|| VerifyError::UnknownCondition(s.to_string()))
    }
}

/// `phi` after a linear change of variables putting `f_T` at `z2 = 0`
/// (cases nu, A) or at `z2 = lambda z1^r` (case N).
#[derive(Clone, Debug, PartialEq)]
pub struct NormalForm {
    pub surface: Surface,
    pub lambda: f64,
    pub r: i32,
}

pub fn normal_form(inv: &SurfaceInvariants, cond: Condition) -> Result<NormalForm, VerifyError> {
    if !cond.applies_to(inv.case) {
        return Err(VerifyError::InapplicableCondition(format!("{cond} does not apply to {}", inv.case)));
    }
    let phi = &inv.phi;
    let plain = |s| NormalForm { surface: s, lambda: 0.0, r: 1 };
    match cond {
        Condition::QGeP | Condition::QLe3P | Condition::ScalingLine => Ok(plain(Surface::new(phi))),
        Condition::CaseNu | Condition::CaseASlope => match &inv.f_t {
            FT::AxisZ2 => Ok(plain(Surface::new(phi))),
            FT::AxisZ1 => Ok(plain(Surface::new(&phi.swap_variables()))),
            FT::Curve(root) => Ok(plain(match root.as_rational() {
                Some(q) => Surface::new(&phi.shear(q)),
                None => Surface::sheared(phi, root.approx),
            })),
            FT::None => Err(VerifyError::InapplicableCondition("no distinguished factor".into())),
        },
        Condition::CaseN1OverN | Condition::CaseNSlope => {
            let FT::Curve(root) = &inv.f_t else {
                return Err(VerifyError::InapplicableCondition("case N without a curve factor".into()));
            };
            let w = inv.weight.as_ref().expect("weight of a non-excluded case");
            if w.s == 1 {
                Ok(NormalForm { surface: Surface::new(phi), lambda: root.approx, r: w.r as i32 })
            } else if w.r == 1 {
                Ok(NormalForm {
                    surface: Surface::new(&phi.swap_variables()),
                    lambda: 1.0 / root.approx,
                    r: w.s as i32,
                })
            } else {
                Err(VerifyError::InapplicableCondition(format!(
                    "curve factor z2^{} - lambda z1^{} is not a graph over either axis",
                    w.s, w.r
                )))
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FamilyInstance {
    pub condition: Condition,
    pub param: f64,
    #[serde(skip)]
    pub surface: Surface,
    pub e: ESet,
    pub f: Box3,
    pub stratified: bool,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Family {
    pub condition: Condition,
    pub normal: NormalForm,
    /// Predicted exponent of the pairing in the parameter.
    pub predicted: Rational,
    /// Exponents of `|E|`, `|F|`.
    pub measure_exponents: (Rational, Rational),
    kappa: (f64, f64),
    mults: (u32, u32, u32),
}

const SCALING_C: f64 = 0.125;

pub fn family(inv: &SurfaceInvariants, cond: Condition) -> Result<Family, VerifyError> {
    let normal = normal_form(inv, cond)?;
    let w = inv.weight.as_ref().expect("weight of a non-excluded case");
    let (nu, a, n) = (inv.nu as i64, inv.a as i64, inv.n as i64);
    let ks = &w.kappa1 + &w.kappa2;
    let (predicted, measure_exponents) = match cond {
        Condition::QGeP => (int(3), (int(3), int(3))),
        Condition::QLe3P => (int(3), (int(1), int(3))),
        Condition::ScalingLine => {
            let m = &ks + int(1);
            (int(2) * &ks + int(1), (m.clone(), m))
        }
        Condition::CaseNu => (int(nu + 2), (int(nu + 1), int(nu + 1))),
        Condition::CaseN1OverN => (int(n + 1), (int(n), int(n))),
        Condition::CaseNSlope => (int(n + 3), (int(n + 1), int(n + 2))),
        Condition::CaseASlope => (int(2 * a + 2), (int(a + 1), int(2 * a + 1))),
    };
    Ok(Family {
        condition: cond,
        normal,
        predicted,
        measure_exponents,
        kappa: (rat_to_f64(&w.kappa1), rat_to_f64(&w.kappa2)),
        mults: (inv.nu, inv.a, inv.n),
    })
}

impl Family {
    pub fn instance(&self, param: f64) -> FamilyInstance {
        let s = &self.normal.surface;
        let (nu, a, n) = (self.mults.0 as i32, self.mults.1 as i32, self.mults.2 as i32);
        let eps = param;
        let (e, f, stratified) = match self.condition {
            Condition::QGeP => {
                let k = param;
                let m = s.sup_bound(1.0, 1.0);
                (ESet::Box(Box3::symmetric([3.0 * k, 3.0 * k, 3.0 * k + m])), Box3::symmetric([k; 3]), false)
            }
            Condition::QLe3P => {
                let c = 1.0 + s.lipschitz_bound(1.0);
                (
                    ESet::GraphSlab { b1: [-0.25, 0.25], b2: [-0.25, 0.25], width: c * eps },
                    Box3::symmetric([eps; 3]),
                    false,
                )
            }
            Condition::ScalingLine => {
                let (k1, k2) = self.kappa;
                let c = SCALING_C;
                let (h1, h2) = (c * eps.powf(k1), c * eps.powf(k2));
                let b = s.sup_bound(4.0 * c, 4.0 * c);
                (
                    ESet::Box(Box3::symmetric([3.0 * h1, 3.0 * h2, (1.0 + b) * eps])),
                    Box3::symmetric([h1, h2, eps]),
                    false,
                )
            }
            Condition::CaseNu => (
                ESet::Box(Box3::symmetric([3.0, 3.0 * eps, 3.0 * eps.powi(nu)])),
                Box3::symmetric([1.0, eps, eps.powi(nu)]),
                false,
            ),
            Condition::CaseN1OverN => {
                let l = self.normal.lambda.abs() + 1.0 / 3.0;
                (
                    ESet::Box(Box3::symmetric([3.0, 3.0 * l, 3.0 * eps.powi(n)])),
                    Box3::symmetric([1.0, l, eps.powi(n)]),
                    true,
                )
            }
            Condition::CaseNSlope => {
                let rho = self.curve_reach();
                (
                    ESet::CurveSlab {
                        b1: [rho / 2.0, rho],
                        lambda: self.normal.lambda,
                        r: self.normal.r,
                        half_width: 3.0 * eps,
                        h3: 3.0 * eps.powi(n),
                    },
                    Box3::symmetric([eps, eps, eps.powi(n)]),
                    false,
                )
            }
            Condition::CaseASlope => (
                ESet::GraphSlab { b1: [-1.0, -0.5], b2: [-3.0 * eps, 3.0 * eps], width: 3.0 * eps.powi(a) },
                Box3::symmetric([eps.powi(a), eps, eps.powi(a)]),
                false,
            ),
        };
        FamilyInstance { condition: self.condition, param, surface: s.clone(), e, f, stratified }
    }

    /// Largest `rho <= 1` with `|lambda| rho^r <= 1`, keeping the curve inside the square.
    fn curve_reach(&self) -> f64 {
        let l = self.normal.lambda.abs();
        if l <= 1.0 {
            1.0
        } else {
            l.powf(-1.0 / self.normal.r as f64)
        }
    }
}

/// Fits `log2 T(E, F)` against `log2 param` over the grid.
pub fn necessity_slope_test(
    inv: &SurfaceInvariants,
    cond: Condition,
    grid: &[f64],
    n: usize,
    seed: u64,
) -> Result<VerificationReport, VerifyError> {
    let fam = family(inv, cond)?;
    if grid.len() < 2 {
        return Err(VerifyError::GridTooShort(grid.len()));
    }
    let mut estimates: Vec<PairingEstimate> = Vec::with_capacity(grid.len());
    for (g, &p) in grid.iter().enumerate() {
        let inst = fam.instance(p);
        estimates.push(estimate_pairing_stream(&inst.surface, &inst.e, &inst.f, n, seed, (g as u64) << 32, inst.stratified)?);
    }
    let predicted = rat_to_f64(&fam.predicted);
    let points: Vec<(f64, f64)> = grid.iter().zip(&estimates).map(|(p, e)| (p.log2(), e.value.log2())).collect();
    let fit = SlopeFit::new(points);
    let verdict = match &fit {
        Some(f) if (f.slope - predicted).abs() <= SLOPE_TOLERANCE => Verdict::Pass,
        _ => Verdict::Fail,
    };
    Ok(VerificationReport {
        condition: cond.id().to_string(),
        polynomial: rsharp_core::format(&inv.phi),
        grid: grid.to_vec(),
        estimates: grid
            .iter()
            .zip(&estimates)
            .map(|(&param, e)| Estimate { param, value: e.value, stderr: e.stderr })
            .collect(),
        slope: fit.as_ref().map(|f| f.slope),
        intercept: fit.as_ref().map(|f| f.intercept),
        residual: fit.as_ref().map(|f| f.residual),
        predicted: Some(predicted),
        predicted_exact: Some(fam.predicted.to_string()),
        tolerance: SLOPE_TOLERANCE,
        verdict,
        seed,
        samples: n,
        note: None,
    })
}

/// `|E|` and `|F|` of an instance.
pub fn volumes(inst: &FamilyInstance) -> (f64, f64) {
    (inst.e.volume(), inst.f.volume())
}

#[cfg(test)]
mod tests {
    use super::*;
    use rsharp_core::{classify, parse};

    fn inv(s: &str) -> SurfaceInvariants {
        classify(&parse(s).unwrap()).unwrap()
    }

    #[test]
    fn condition_ids_round_trip() {
        for c in Condition::ALL {
            assert_eq!(c.id().parse::<Condition>().unwrap(), c);
        }
        assert!("nope".parse::<Condition>().is_err());
    }

    #[test]
    fn applicability() {
        let i = inv("z1*z2");
        assert!(matches!(normal_form(&i, Condition::CaseN1OverN), Err(VerifyError::InapplicableCondition(_))));
        assert!(normal_form(&i, Condition::QLe3P).is_ok());
        assert_eq!(Condition::applicable(inv("(z2 - z1^2)^2").case).len(), 5);
        assert_eq!(Condition::applicable(inv("z1^3").case), vec![]);
    }

    #[test]
    fn normal_forms_put_the_factor_on_the_axis() {
        // f_T = z1 for z1^3 z2^2: swapped form vanishes to order 3 on t2 = 0.
        let nf = normal_form(&inv("z1^3*z2^2"), Condition::CaseNu).unwrap();
        assert!(nf.surface.eval(0.7, 1e-3).abs() < 1e-8);
        // (z2 - z1)^3 z1^2: sheared form vanishes on t2 = 0.
        let nf = normal_form(&inv("z1^2*(z2 - z1)^3"), Condition::CaseNu).unwrap();
        assert!(nf.surface.eval(0.7, 0.0).abs() < 1e-15);
        // z2^2 - z1 style curve z2^s = lambda z1 becomes t2 = t1^s / lambda.
        let nf = normal_form(&inv("(z1 - z2^2)^2"), Condition::CaseNSlope).unwrap();
        assert_eq!((nf.lambda, nf.r), (1.0, 2));
        assert!(nf.surface.eval(0.5, 0.25).abs() < 1e-15);
    }

    #[test]
    fn volumes_follow_the_stated_exponents() {
        for (s, c) in [
            ("(z2 - z1^2)^2", Condition::CaseNSlope),
            ("(z2 - z1^2)^2", Condition::CaseN1OverN),
            ("z1^2 + z2^3", Condition::CaseASlope),
            ("z1^3*z2^2", Condition::CaseNu),
            ("z1^2 + z2^3", Condition::QLe3P),
            ("z1^2 + z2^3", Condition::ScalingLine),
            ("z1*z2", Condition::QGeP),
        ] {
            let fam = family(&inv(s), c).unwrap();
            let (pe, pf) = (rat_to_f64(&fam.measure_exponents.0), rat_to_f64(&fam.measure_exponents.1));
            let (p1, p2) = if c.is_large_parameter() { (16.0, 32.0) } else { (1.0 / 16.0, 1.0 / 32.0) };
            let (e1, f1) = volumes(&fam.instance(p1));
            let (e2, f2) = volumes(&fam.instance(p2));
            let sign = if c.is_large_parameter() { 1.0 } else { -1.0 };
            assert!((sign * (e2 / e1).log2() - pe).abs() < 0.05, "{s} {c}: |E| {}", (e2 / e1).log2());
            assert!((sign * (f2 / f1).log2() - pf).abs() < 1e-9, "{s} {c}: |F|");
        }
    }
}
