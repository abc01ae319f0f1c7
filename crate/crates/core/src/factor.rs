//! Factorization of mixed-homogeneous polynomials into
//! `C z1^n1 z2^n2 prod (z2^s - lambda_j z1^r)^{n_j}`.

use num_traits::{One, Zero};
use thiserror::Error;

use crate::newton;
use crate::poly::{int, mixed_weight, BivarPoly, MixedWeight, PolyError, Rational};
use crate::univariate::{isolate_real_roots, squarefree_decomposition, RootDescriptor, UnivarPoly};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FactorError {
    #[error("support does not lie on the weighted line s*a1 + r*a2 = const (r={r}, s={s})")]
    InternalInconsistency { r: u32, s: u32 },
    #[error("the root requiring a linear change of variables is irrational")]
    IrrationalAdaptationRoot,
    #[error(transparent)]
    Poly(#[from] PolyError),
}

#[derive(Clone, Debug, PartialEq)]
pub struct RealFactor {
    pub root: RootDescriptor,
    pub mult: u32,
}

#[derive(Clone, Debug, PartialEq)]
pub struct FactorDecomposition {
    pub r: u32,
    pub s: u32,
    pub constant: Rational,
    pub nu1_tilde: u32,
    pub nu2_tilde: u32,
    /// `p(u)` with `u = z2^s / z1^r`, `p(0) != 0`.
    pub univariate: UnivarPoly,
    pub real_factors: Vec<RealFactor>,
    /// `(number of non-real roots, multiplicity)` per square-free layer.
    pub complex_layers: Vec<(u32, u32)>,
}

impl FactorDecomposition {
    pub fn complex_pair_mult_sum(&self) -> u32 {
        self.complex_layers.iter().map(|(n, m)| n * m).sum()
    }

    pub fn real_mult_sum(&self) -> u32 {
        self.real_factors.iter().map(|f| f.mult).sum()
    }

    /// Largest real-factor multiplicity, axes included.
    pub fn max_real_multiplicity(&self) -> u32 {
        self.real_factors
            .iter()
            .map(|f| f.mult)
            .chain([self.nu1_tilde, self.nu2_tilde])
            .max()
            .unwrap_or(0)
    }

    /// `s*nu1 + r*nu2 + r*s*deg p`.
    pub fn weighted_degree(&self) -> u64 {
        self.s as u64 * self.nu1_tilde as u64
            + self.r as u64 * self.nu2_tilde as u64
            + (self.r * self.s) as u64 * (self.real_mult_sum() + self.complex_pair_mult_sum()) as u64
    }

    /// Product over the real factors only, with root approximations:
    /// `prod (z2^s - lambda_j z1^r)^{n_j}`.
    pub fn real_part(&self, z1: f64, z2: f64) -> f64 {
        let a = z1.powi(self.r as i32);
        let b = z2.powi(self.s as i32);
        self.real_factors
            .iter()
            .map(|f| (b - f.root.approx * a).powi(f.mult as i32))
            .product()
    }
}

/// Strips the monomial content and returns `(nu1, nu2, p)` where the rest of
/// the polynomial is `z1^{r deg p} p(z2^s / z1^r)`.
pub fn associated_univariate(
    poly: &BivarPoly,
    r: u32,
    s: u32,
) -> Result<(u32, u32, UnivarPoly), FactorError> {
    let bad = FactorError::InternalInconsistency { r, s };
    if poly.is_zero() {
        return Err(bad);
    }
    poly.weighted_degree(r, s).ok_or(bad.clone())?;
    let (n1, n2) = poly.monomial_content();
    let top = poly.terms().map(|(e, _)| e.0 - n1).max().unwrap_or(0);
    let mut coeffs: Vec<Rational> = Vec::new();
    for (&(a, b), c) in poly.terms() {
        let (a, b) = (a - n1, b - n2);
        if b % s != 0 {
            return Err(bad);
        }
        let l = (b / s) as usize;
        if top < r * l as u32 || top - r * l as u32 != a {
            return Err(bad);
        }
        if coeffs.len() <= l {
            coeffs.resize(l + 1, Rational::zero());
        }
        coeffs[l] = c.clone();
    }
    let p = UnivarPoly::new(coeffs);
    if top != r * p.degree() as u32 {
        return Err(bad);
    }
    Ok((n1, n2, p))
}

pub fn factor_decomposition(poly: &BivarPoly, weight: &MixedWeight) -> Result<FactorDecomposition, FactorError> {
    factor_with(poly, weight.r, weight.s)
}

/// Decomposition with explicit `(r, s)`, used for the Hessian determinant,
/// which shares the weights of the polynomial it comes from.
pub fn factor_with(poly: &BivarPoly, r: u32, s: u32) -> Result<FactorDecomposition, FactorError> {
    let (nu1_tilde, nu2_tilde, p) = associated_univariate(poly, r, s)?;
    let mut real_factors = Vec::new();
    let mut complex_layers = Vec::new();
    for (q, mult) in squarefree_decomposition(&p) {
        let roots = isolate_real_roots(&q);
        let nonreal = q.degree() as u32 - roots.len() as u32;
        if nonreal > 0 {
            complex_layers.push((nonreal, mult));
        }
        real_factors.extend(roots.into_iter().map(|root| RealFactor { root, mult }));
    }
    real_factors.sort_by(|a, b| a.root.approx.total_cmp(&b.root.approx));
    Ok(FactorDecomposition {
        r,
        s,
        constant: p.lead(),
        nu1_tilde,
        nu2_tilde,
        univariate: p,
        real_factors,
        complex_layers,
    })
}

/// Largest multiplicity of a real irreducible factor; 0 for constants.
pub fn max_real_multiplicity(poly: &BivarPoly, weight: &MixedWeight) -> Result<u32, FactorError> {
    Ok(factor_decomposition(poly, weight)?.max_real_multiplicity())
}

/// Linear adaptedness: no factor `z2 - lambda z1`, `lambda != 0`, of
/// multiplicity above the Newton distance. Only homogeneous polynomials can fail.
pub fn is_linearly_adapted(poly: &BivarPoly, weight: &MixedWeight) -> Result<bool, FactorError> {
    Ok(excess_root(poly, weight)?.is_none())
}

fn excess_root(poly: &BivarPoly, weight: &MixedWeight) -> Result<Option<RealFactor>, FactorError> {
    if !weight.is_homogeneous() {
        return Ok(None);
    }
    let fd = factor_decomposition(poly, weight)?;
    let d = newton::newton_data(&poly.support()).d_phi;
    Ok(fd
        .real_factors
        .into_iter()
        .find(|f| !f.root.is_zero() && int(f.mult as i64) > d))
}

/// Applies `z2 -> z2 + lambda z1` to remove a factor of excess multiplicity.
/// Returns the adapted polynomial and the shear used (zero when none was needed).
pub fn linearly_adapt(poly: &BivarPoly) -> Result<(BivarPoly, Rational), FactorError> {
    let weight = mixed_weight(poly)?;
    match excess_root(poly, &weight)? {
        None => Ok((poly.clone(), Rational::zero())),
        Some(f) => {
            let lambda = f.root.as_rational().ok_or(FactorError::IrrationalAdaptationRoot)?.clone();
            Ok((poly.shear(&lambda), lambda))
        }
    }
}

/// Factor `z2^s - lambda z1^r` of `f`, expanded.
pub fn curve_factor(r: u32, s: u32, lambda: &Rational) -> BivarPoly {
    &BivarPoly::monomial(Rational::one(), 0, s) - &BivarPoly::monomial(lambda.clone(), r, 0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parser::parse;
    use crate::poly::{rat, Var};
    use crate::univariate::RootKind;
    use proptest::prelude::*;

    fn p(s: &str) -> BivarPoly {
        parse(s).unwrap()
    }

    fn fd(s: &str) -> FactorDecomposition {
        let f = p(s);
        factor_decomposition(&f, &mixed_weight(&f).unwrap()).unwrap()
    }

    #[test]
    fn univariate_association() {
        assert_eq!(
            associated_univariate(&p("(z2 - z1^2)^2"), 2, 1).unwrap(),
            (0, 0, UnivarPoly::from_ints(&[1, -2, 1]))
        );
        assert_eq!(
            associated_univariate(&p("z1^4 + z1^2*z2 + 1/6*z2^2"), 2, 1).unwrap(),
            (0, 0, UnivarPoly::new(vec![int(1), int(1), rat(1, 6)]))
        );
        assert_eq!(associated_univariate(&p("z1^3*z2"), 1, 1).unwrap(), (3, 1, UnivarPoly::from_ints(&[1])));
        assert!(matches!(
            associated_univariate(&p("z1^2 + z2"), 1, 1),
            Err(FactorError::InternalInconsistency { .. })
        ));
    }

    #[test]
    fn decompositions() {
        let d = fd("(z2 - z1^2)^2");
        assert_eq!(d.constant, int(1));
        assert_eq!((d.nu1_tilde, d.nu2_tilde), (0, 0));
        assert_eq!(d.real_factors, vec![RealFactor { root: RootDescriptor::rational(int(1)), mult: 2 }]);
        assert_eq!(d.complex_pair_mult_sum(), 0);

        let d = fd("z1^4 + z1^2*z2 + 1/6*z2^2");
        let s3 = 3f64.sqrt();
        assert_eq!(d.real_factors.len(), 2);
        assert!((d.real_factors[0].root.approx - (-3.0 - s3)).abs() < 1e-12);
        assert!((d.real_factors[1].root.approx - (-3.0 + s3)).abs() < 1e-12);
        assert!(d.real_factors.iter().all(|f| f.mult == 1));
        assert!(matches!(d.real_factors[0].root.kind, RootKind::Isolated { .. }));

        let d = fd("z1^2 + z2^3");
        assert_eq!(d.univariate, UnivarPoly::from_ints(&[1, 1]));
        assert_eq!(d.real_factors, vec![RealFactor { root: RootDescriptor::rational(int(-1)), mult: 1 }]);
    }

    #[test]
    fn real_multiplicities() {
        let o = |s: &str| {
            let f = p(s);
            max_real_multiplicity(&f, &mixed_weight(&f).unwrap()).unwrap()
        };
        assert_eq!(o("(z2 - z1^2)^3"), 3);
        assert_eq!(o("z1*z2"), 1);
        assert_eq!(o("z1^2 + z2^2"), 0);
    }

    #[test]
    fn adaptation() {
        let f = p("(z2 - z1)^3*z1");
        let w = mixed_weight(&f).unwrap();
        assert!(!is_linearly_adapted(&f, &w).unwrap());
        let (g, lambda) = linearly_adapt(&f).unwrap();
        assert_eq!(lambda, int(1));
        assert_eq!(g, p("z2^3*z1"));
        let g = p("(z2 - z1^2)^2");
        assert!(is_linearly_adapted(&g, &mixed_weight(&g).unwrap()).unwrap());
        let g = p("z1^2*z2^2");
        assert!(is_linearly_adapted(&g, &mixed_weight(&g).unwrap()).unwrap());
    }

    fn reconstruct_exact(d: &FactorDecomposition) -> Option<BivarPoly> {
        let mut out = BivarPoly::monomial(d.constant.clone(), d.nu1_tilde, d.nu2_tilde);
        for f in &d.real_factors {
            let lam = f.root.as_rational()?;
            out = &out * &curve_factor(d.r, d.s, lam).pow(f.mult);
        }
        if d.complex_pair_mult_sum() > 0 {
            return None;
        }
        Some(out)
    }

    fn product_poly() -> impl Strategy<Value = (BivarPoly, u32, u32)> {
        let pairs = prop_oneof![Just((1u32, 1u32)), Just((2, 1)), Just((1, 2)), Just((3, 2)), Just((2, 3))];
        (
            pairs,
            0u32..3,
            0u32..3,
            proptest::collection::vec((-3i64..4, 1i64..3, 1u32..4), 0..3),
            -3i64..4,
        )
            .prop_map(|((r, s), a, b, facs, c)| {
                let mut f = BivarPoly::monomial(int(if c == 0 { 1 } else { c }), a, b);
                for (n, d, m) in facs {
                    if n != 0 {
                        f = &f * &curve_factor(r, s, &rat(n, d)).pow(m);
                    }
                }
                (f, r, s)
            })
    }

    proptest! {
        #[test]
        fn reconstruction_and_bookkeeping((f, r, s) in product_poly()) {
            let d = factor_with(&f, r, s).unwrap();
            let m = f.weighted_degree(r, s).unwrap();
            prop_assert_eq!(d.weighted_degree(), m);
            prop_assert_eq!(reconstruct_exact(&d), Some(f.clone()));
        }

        #[test]
        fn float_reconstruction_with_complex_part(a in 1i64..5, b in -3i64..4, k in 1u32..3, x in -20i64..20, y in -20i64..20) {
            // (z2^2 + b z2 z1 + a' z1^2) with negative discriminant, times a real factor.
            let c = b * b + a;
            let q = &(&BivarPoly::monomial(int(1), 0, 2) + &BivarPoly::monomial(int(b), 1, 1)) + &BivarPoly::monomial(int(c), 2, 0);
            let f = &q.pow(k) * &(&BivarPoly::var(Var::Z2) - &BivarPoly::monomial(rat(1, 3), 1, 0));
            let d = factor_with(&f, 1, 1).unwrap();
            prop_assert_eq!(d.complex_pair_mult_sum(), 2 * k);
            let (z1, z2) = (x as f64 / 7.0, y as f64 / 5.0);
            let direct = f.evaluate(z1, z2);
            let qv = q.evaluate(z1, z2).powi(k as i32);
            let rebuilt = crate::poly::rat_to_f64(&d.constant) * d.real_part(z1, z2) * qv;
            prop_assert!((direct - rebuilt).abs() <= 1e-9 * (1.0 + direct.abs()));
        }
    }
}
