//! Curvature invariants and the case taxonomy.

use std::fmt;

use num_traits::{Signed, Zero};
use serde::Serialize;
use thiserror::Error;

use crate::factor::{factor_with, FactorDecomposition, FactorError};
use crate::newton;
use crate::poly::{int, mixed_weight, BivarPoly, MixedWeight, PolyError, Rational, Var};
use crate::univariate::{RootDescriptor, UnivarPoly};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ClassifyError {
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error(transparent)]
    Factor(#[from] FactorError),
    #[error("hypothesis violated: {0}")]
    HypothesisViolation(String),
    #[error("more than one factor of the Hessian determinant has maximal multiplicity {0}")]
    UniquenessViolation(u32),
    #[error("consistency failure ({lemma}): {detail}")]
    ConsistencyFailure { lemma: String, detail: String },
}

impl ClassifyError {
    pub fn consistency(lemma: &str, detail: impl Into<String>) -> Self {
        Self::ConsistencyFailure { lemma: lemma.into(), detail: detail.into() }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum FT {
    AxisZ1,
    AxisZ2,
    Curve(RootDescriptor),
    None,
}

impl FT {
    pub fn label(&self) -> &'static str {
        match self {
            FT::AxisZ1 => "axis_z1",
            FT::AxisZ2 => "axis_z2",
            FT::Curve(_) => "curve",
            FT::None => "none",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum CaseLabel {
    DegenerateTleqDomega,
    CaseNu,
    CaseA,
    CaseN,
    TwistedI,
    TwistedIIa,
    TwistedIIb,
    ExcludedZero,
    ExcludedMonomialPower(u32),
    ExcludedLinearPower(u32),
}

impl CaseLabel {
    pub fn is_excluded(self) -> bool {
        matches!(
            self,
            CaseLabel::ExcludedZero | CaseLabel::ExcludedMonomialPower(_) | CaseLabel::ExcludedLinearPower(_)
        )
    }

    pub fn is_rectangular(self) -> bool {
        matches!(self, CaseLabel::CaseNu | CaseLabel::CaseA | CaseLabel::CaseN)
    }

    pub fn is_twisted(self) -> bool {
        matches!(self, CaseLabel::TwistedI | CaseLabel::TwistedIIa | CaseLabel::TwistedIIb)
    }
}

impl fmt::Display for CaseLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CaseLabel::DegenerateTleqDomega => f.write_str("Degenerate_TleqDomega"),
            CaseLabel::CaseNu => f.write_str("CaseNu"),
            CaseLabel::CaseA => f.write_str("CaseA"),
            CaseLabel::CaseN => f.write_str("CaseN"),
            CaseLabel::TwistedI => f.write_str("TwistedI"),
            CaseLabel::TwistedIIa => f.write_str("TwistedIIa"),
            CaseLabel::TwistedIIb => f.write_str("TwistedIIb"),
            CaseLabel::ExcludedZero => f.write_str("Excluded_Zero"),
            CaseLabel::ExcludedMonomialPower(j) => write!(f, "Excluded_MonomialPower({j})"),
            CaseLabel::ExcludedLinearPower(j) => write!(f, "Excluded_LinearPower({j})"),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SurfaceInvariants {
    pub phi: BivarPoly,
    /// Absent only for the zero polynomial.
    pub weight: Option<MixedWeight>,
    pub phi_factors: Option<FactorDecomposition>,
    pub omega: BivarPoly,
    pub omega_factors: Option<FactorDecomposition>,
    pub d_omega: Rational,
    pub t: u32,
    pub f_t: FT,
    pub nu: u32,
    pub a: u32,
    pub n: u32,
    pub j: u32,
    pub q: i64,
    pub case: CaseLabel,
    /// Homogeneous input whose excess factor has an irrational slope.
    pub adaptation_pending: bool,
}

impl SurfaceInvariants {
    pub fn d_h(&self) -> Option<&Rational> {
        self.weight.as_ref().map(|w| &w.d_h)
    }

    /// Whether `f_T` is one of the axes or a line through the origin.
    pub fn f_t_linear(&self) -> bool {
        match &self.f_t {
            FT::AxisZ1 | FT::AxisZ2 => true,
            FT::Curve(_) => self.weight.as_ref().is_some_and(|w| w.is_homogeneous()),
            FT::None => false,
        }
    }

    /// Multiplicity of `f_T` in `phi` as used for `J`.
    fn phi_mult_of_ft(&self) -> u32 {
        match self.case {
            CaseLabel::CaseNu => self.nu,
            CaseLabel::CaseN | CaseLabel::TwistedIIb | CaseLabel::TwistedIIa => self.n,
            _ => 0,
        }
    }
}

/// `phi(1, u)` for homogeneous `phi`, from its factor data.
fn dehomogenized(fd: &FactorDecomposition) -> UnivarPoly {
    let mut cs = vec![Rational::zero(); fd.nu2_tilde as usize];
    cs.extend(fd.univariate.coeffs().iter().cloned());
    UnivarPoly::new(cs)
}

/// Weighted degree of `z1`, `z2` and a curve factor, in units of `phi`'s degree `m`.
fn factor_weight(f: &FT, w: &MixedWeight) -> u64 {
    match f {
        FT::AxisZ1 => w.s as u64,
        FT::AxisZ2 => w.r as u64,
        FT::Curve(_) => (w.r * w.s) as u64,
        FT::None => 0,
    }
}

fn companion_weight(f: &FT, w: &MixedWeight) -> u64 {
    match f {
        FT::AxisZ2 => w.s as u64,
        FT::AxisZ1 => w.r as u64,
        // z2^s - lambda z1^r pairs with z1 when s = 1 and with z2 when r = 1.
        FT::Curve(_) | FT::None => 1,
    }
}

pub fn check_hypothesis(phi: &BivarPoly) -> Result<(), ClassifyError> {
    for (&(a, b), _) in phi.terms() {
        if a + b == 0 {
            return Err(ClassifyError::HypothesisViolation("phi(0) != 0 (constant term present)".into()));
        }
        if a + b == 1 {
            return Err(ClassifyError::HypothesisViolation("grad phi(0) != 0 (linear term present)".into()));
        }
    }
    Ok(())
}

/// `(omega, d_omega, omega factorization, T)`; the factorization is `None` when omega vanishes.
pub fn omega_invariants(
    phi: &BivarPoly,
    w: &MixedWeight,
) -> Result<(BivarPoly, Rational, Option<FactorDecomposition>, u32), ClassifyError> {
    check_hypothesis(phi)?;
    let omega = phi.hessian_determinant();
    let d_omega = int(2) * &w.d_h - int(2);
    if omega.is_zero() {
        return Ok((omega, d_omega, None, 0));
    }
    match w.distance_of(&omega) {
        Some(d) if d == d_omega => {}
        other => {
            return Err(ClassifyError::consistency(
                "Hessian homogeneity",
                format!("distance of omega is {other:?}, expected {d_omega}"),
            ))
        }
    }
    let fd = factor_with(&omega, w.r, w.s)?;
    let t = fd.max_real_multiplicity();
    Ok((omega, d_omega, Some(fd), t))
}

/// Recognises `C z_i^J` or `C (z2 - lambda z1)^J`; returns `J` and whether the
/// slope is rational (always, for a nonzero `lambda` it is a coefficient ratio).
pub fn linear_power(fd: &FactorDecomposition, w: &MixedWeight) -> Option<(u32, bool)> {
    if !w.is_homogeneous() {
        // Non-homogeneous: only pure axis powers qualify.
        return match (fd.nu1_tilde, fd.nu2_tilde, fd.univariate.degree()) {
            (j, 0, 0) | (0, j, 0) if j > 0 => Some((j, true)),
            _ => None,
        };
    }
    match (fd.nu1_tilde, fd.nu2_tilde, fd.real_factors.as_slice(), fd.complex_layers.is_empty()) {
        (j, 0, [], true) | (0, j, [], true) if j > 0 => Some((j, true)),
        (0, 0, [f], true) => Some((f.mult, f.root.as_rational().is_some())),
        _ => None,
    }
}

pub fn classify(phi: &BivarPoly) -> Result<SurfaceInvariants, ClassifyError> {
    let mut inv = SurfaceInvariants {
        phi: phi.clone(),
        weight: None,
        phi_factors: None,
        omega: BivarPoly::zero(),
        omega_factors: None,
        d_omega: Rational::zero(),
        t: 0,
        f_t: FT::None,
        nu: 0,
        a: 0,
        n: 0,
        j: 0,
        q: 0,
        case: CaseLabel::ExcludedZero,
        adaptation_pending: false,
    };
    if phi.is_zero() {
        return Ok(inv);
    }
    let w = mixed_weight(phi)?;
    let (omega, d_omega, omega_fd, t) = omega_invariants(phi, &w)?;
    let phi_fd = factor_with(phi, w.r, w.s)?;
    inv.omega = omega;
    inv.d_omega = d_omega.clone();
    inv.t = t;

    let Some(omega_fd) = omega_fd else {
        let (j, rational) = linear_power(&phi_fd, &w).ok_or_else(|| {
            ClassifyError::consistency("vanishing Hessian", "omega = 0 but phi is not a power of a linear form")
        })?;
        inv.case = if rational { CaseLabel::ExcludedMonomialPower(j) } else { CaseLabel::ExcludedLinearPower(j) };
        inv.j = j;
        inv.weight = Some(w);
        inv.phi_factors = Some(phi_fd);
        return Ok(inv);
    };

    inv.adaptation_pending = w.is_homogeneous()
        && crate::factor::is_linearly_adapted(phi, &w).is_ok_and(|a| !a)
        && crate::factor::linearly_adapt(phi).is_err();

    if int(t as i64) <= d_omega {
        inv.case = CaseLabel::DegenerateTleqDomega;
        inv.weight = Some(w);
        inv.phi_factors = Some(phi_fd);
        inv.omega_factors = Some(omega_fd);
        return Ok(inv);
    }

    let mut cands = Vec::new();
    if omega_fd.nu1_tilde == t {
        cands.push(FT::AxisZ1);
    }
    if omega_fd.nu2_tilde == t {
        cands.push(FT::AxisZ2);
    }
    for f in &omega_fd.real_factors {
        if f.mult == t {
            cands.push(FT::Curve(f.root.clone()));
        }
    }
    if cands.len() != 1 {
        return Err(ClassifyError::UniquenessViolation(t));
    }
    let f_t = cands.pop().unwrap();
    inv.f_t = f_t.clone();

    let linear = match &f_t {
        FT::AxisZ1 | FT::AxisZ2 => true,
        FT::Curve(_) => w.is_homogeneous(),
        FT::None => unreachable!(),
    };
    if linear {
        let nu = match &f_t {
            FT::AxisZ1 => phi_fd.nu1_tilde,
            FT::AxisZ2 => phi_fd.nu2_tilde,
            FT::Curve(root) => root.multiplicity_in(&phi_fd.univariate),
            FT::None => 0,
        };
        inv.nu = nu;
        if nu >= 1 {
            inv.case = CaseLabel::CaseNu;
        } else {
            let a = match &f_t {
                FT::AxisZ1 => phi.min_positive_exponent(Var::Z1),
                FT::AxisZ2 => phi.min_positive_exponent(Var::Z2),
                FT::Curve(root) => root.first_nonvanishing_derivative(&dehomogenized(&phi_fd)),
                FT::None => None,
            }
            .unwrap_or(0);
            if a == 0 {
                return Err(ClassifyError::consistency(
                    "A is positive",
                    "f_T is linear, does not divide phi, yet no positive power appears",
                ));
            }
            inv.a = a;
            inv.case = if a >= 2 { CaseLabel::CaseA } else { CaseLabel::TwistedI };
        }
    } else {
        let FT::Curve(root) = &f_t else { unreachable!() };
        let n = root.multiplicity_in(&phi_fd.univariate);
        inv.n = n;
        inv.case = match n {
            0 => CaseLabel::TwistedIIa,
            1 => CaseLabel::TwistedIIb,
            _ => CaseLabel::CaseN,
        };
    }

    let wf = factor_weight(&f_t, &w);
    let wc = companion_weight(&f_t, &w);
    let mult = inv.phi_mult_of_ft() as u64;
    let m = w.m as u64;
    if mult * wf > m || !(m - mult * wf).is_multiple_of(wc) {
        return Err(ClassifyError::consistency("J", "leading exponent is not an integer"));
    }
    inv.j = ((m - mult * wf) / wc) as u32;
    let w_omega = 2 * m as i64 - 2 * (w.r + w.s) as i64;
    inv.q = (w_omega - t as i64 * wf as i64) / wc as i64;

    inv.weight = Some(w);
    inv.phi_factors = Some(phi_fd);
    inv.omega_factors = Some(omega_fd);
    Ok(inv)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LemmaCheck {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct LemmaReport {
    pub checks: Vec<LemmaCheck>,
}

impl LemmaReport {
    fn push(&mut self, name: &str, passed: bool, detail: impl Into<String>) {
        self.checks.push(LemmaCheck { name: name.into(), passed, detail: detail.into() });
    }

    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn ensure(&self) -> Result<(), ClassifyError> {
        match self.checks.iter().find(|c| !c.passed) {
            None => Ok(()),
            Some(c) => Err(ClassifyError::consistency(&c.name, c.detail.clone())),
        }
    }
}

/// Multiplicity constraints on mixed-homogeneous factorizations, for a polynomial of distance `d`.
fn multiplicity_bounds(report: &mut LemmaReport, who: &str, fd: &FactorDecomposition, d: &Rational) {
    if fd.r > 1 && fd.s > 1 {
        let ok = fd.real_factors.iter().all(|f| int(f.mult as i64) < *d);
        report.push(&format!("curve factors below distance ({who})"), ok, format!("d = {d}"));
    }
    let mut mults: Vec<u32> = fd.real_factors.iter().map(|f| f.mult).collect();
    mults.extend(fd.complex_layers.iter().flat_map(|&(n, m)| std::iter::repeat_n(m, n as usize)));
    mults.extend([fd.nu1_tilde, fd.nu2_tilde].into_iter().filter(|&k| k > 0));
    let heavy = mults.iter().filter(|&&k| int(k as i64) > *d).count();
    let ok = match heavy {
        0 => true,
        1 => mults.iter().filter(|&&k| int(k as i64) >= *d).count() == 1,
        _ => false,
    };
    report.push(&format!("at most one heavy factor ({who})"), ok, format!("multiplicities {mults:?}, d = {d}"));
}

/// Symbolic identities relating the invariants; failures name the identity.
pub fn lemma_consistency_suite(phi: &BivarPoly, inv: &SurfaceInvariants) -> LemmaReport {
    let mut rep = LemmaReport::default();
    let Some(w) = &inv.weight else {
        rep.push("zero polynomial", phi.is_zero(), "");
        return rep;
    };
    let rs = int((w.r + w.s) as i64);

    // Weighted distances of derivatives and of omega.
    let d1 = phi.partial(Var::Z1);
    if !d1.is_zero() {
        let want = &w.d_h - int(w.s as i64) / &rs;
        let got = w.distance_of(&d1);
        rep.push("distance of d/dz1", got.as_ref() == Some(&want), format!("{got:?} vs {want}"));
    }
    let d2 = phi.partial(Var::Z2);
    if !d2.is_zero() {
        let want = &w.d_h - int(w.r as i64) / &rs;
        let got = w.distance_of(&d2);
        rep.push("distance of d/dz2", got.as_ref() == Some(&want), format!("{got:?} vs {want}"));
    }
    rep.push(
        "d_omega = 2 d_h - 2",
        inv.d_omega == int(2) * &w.d_h - int(2),
        format!("d_omega = {}", inv.d_omega),
    );
    if !inv.omega.is_zero() {
        let got = w.distance_of(&inv.omega);
        rep.push("omega homogeneity", got.as_ref() == Some(&inv.d_omega), format!("{got:?}"));
    }

    // Vanishing Hessian exactly for powers of linear forms.
    let phi_fd = inv.phi_factors.as_ref();
    let is_power = phi_fd.and_then(|fd| linear_power(fd, w)).is_some();
    rep.push(
        "omega = 0 iff phi is a power of a linear form",
        inv.omega.is_zero() == is_power,
        format!("omega zero: {}, linear power: {is_power}", inv.omega.is_zero()),
    );
    if inv.omega.is_zero() && w.is_homogeneous() {
        if let Some(fd) = phi_fd {
            let rebuilt = match (fd.real_factors.as_slice(), fd.nu1_tilde, fd.nu2_tilde) {
                ([f], 0, 0) => f.root.as_rational().map(|lam| {
                    crate::factor::curve_factor(1, 1, lam).pow(f.mult).scale(&fd.constant)
                }),
                ([], j, 0) => Some(BivarPoly::monomial(fd.constant.clone(), j, 0)),
                ([], 0, j) => Some(BivarPoly::monomial(fd.constant.clone(), 0, j)),
                _ => None,
            };
            rep.push(
                "homogeneous with vanishing Hessian is a J-th power",
                rebuilt.as_ref() == Some(phi),
                format!("{rebuilt:?}"),
            );
        }
    }
    if inv.case.is_excluded() {
        return rep;
    }

    if let Some(fd) = phi_fd {
        multiplicity_bounds(&mut rep, "phi", fd, &w.d_h);
        rep.push(
            "degree bookkeeping (phi)",
            fd.weighted_degree() == w.m as u64,
            format!("{} vs m = {}", fd.weighted_degree(), w.m),
        );
    }
    if let Some(fd) = &inv.omega_factors {
        if inv.d_omega.is_positive() {
            multiplicity_bounds(&mut rep, "omega", fd, &inv.d_omega);
        }
    }

    let t = inv.t as i64;
    match inv.case {
        CaseLabel::CaseN => {
            rep.push("T = 2N - 3", t == 2 * inv.n as i64 - 3, format!("T = {t}, N = {}", inv.n));
            let other = if w.s == 1 { w.r } else { w.s } as i64;
            rep.push(
                "Q = 2J + r - 2",
                inv.q == 2 * inv.j as i64 + other - 2,
                format!("Q = {}, J = {}", inv.q, inv.j),
            );
        }
        CaseLabel::CaseA => {
            rep.push("T = A - 2", t == inv.a as i64 - 2, format!("T = {t}, A = {}", inv.a));
        }
        CaseLabel::CaseNu => {
            rep.push("T = 2 nu - 2", t == 2 * inv.nu as i64 - 2, format!("T = {t}, nu = {}", inv.nu));
        }
        _ => {}
    }
    if w.is_homogeneous() {
        let ok = matches!(inv.case, CaseLabel::DegenerateTleqDomega | CaseLabel::CaseNu);
        rep.push("homogeneous: degenerate or case nu", ok, inv.case.to_string());
    }
    if int(t) > inv.d_omega {
        rep.push("T > d_omega has a factor", inv.f_t != FT::None, inv.f_t.label());
    }

    // Newton distance against nu and d_h for adapted inputs.
    let adapted = crate::factor::linearly_adapt(phi).ok().map(|(g, _)| g);
    if let Some(g) = adapted {
        let d = newton::newton_data(&g.support()).d_phi;
        let want = if int(inv.nu as i64) > w.d_h { int(inv.nu as i64) } else { w.d_h.clone() };
        rep.push("d(phi) = max(nu, d_h)", d == want, format!("d = {d}, nu = {}, d_h = {}", inv.nu, w.d_h));
    }
    rep
}
