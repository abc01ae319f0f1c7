//! Sparse bivariate polynomials over the rationals.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

pub type Rational = BigRational;

/// Default cap on the exponent of either variable.
pub const DEFAULT_DEGREE_CAP: u32 = 64;

pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn rat_to_f64(q: &Rational) -> f64 {
    if let (Some(n), Some(d)) = (q.numer().to_f64(), q.denom().to_f64()) {
        if n.is_finite() && d.is_finite() && d != 0.0 {
            return n / d;
        }
    }
    // Huge numerators or denominators: shift both down to a comparable scale first.
    let nb = q.numer().bits() as i64;
    let db = q.denom().bits() as i64;
    let shift_n = (nb - 900).max(0) as usize;
    let shift_d = (db - 900).max(0) as usize;
    let n = (q.numer() >> shift_n).to_f64().unwrap_or(0.0);
    let d = (q.denom() >> shift_d).to_f64().unwrap_or(1.0);
    n / d * 2f64.powi((shift_n as i64 - shift_d as i64) as i32)
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash)]
pub enum Var {
    Z1,
    Z2,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PolyError {
    #[error("exponent {exponent} exceeds the per-variable degree cap {cap}")]
    DegreeCap { exponent: u64, cap: u32 },
    #[error("support is not on a single weighted line; not mixed homogeneous")]
    NotMixedHomogeneous,
    #[error("homogeneity weights are not positive (kappa = ({kappa1}, {kappa2}))")]
    NonpositiveWeight { kappa1: String, kappa2: String },
    #[error("the zero polynomial has no homogeneity weight")]
    ZeroPolynomial,
}

/// Canonical sparse form: exponent pair to nonzero rational coefficient.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct BivarPoly {
    terms: BTreeMap<(u32, u32), Rational>,
}

impl BivarPoly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::constant(Rational::one())
    }

    pub fn constant(c: Rational) -> Self {
        Self::monomial(c, 0, 0)
    }

    pub fn monomial(c: Rational, a1: u32, a2: u32) -> Self {
        let mut p = Self::zero();
        p.add_term((a1, a2), c);
        p
    }

    pub fn var(v: Var) -> Self {
        match v {
            Var::Z1 => Self::monomial(Rational::one(), 1, 0),
            Var::Z2 => Self::monomial(Rational::one(), 0, 1),
        }
    }

    pub fn from_terms<I>(terms: I) -> Self
    where
        I: IntoIterator<Item = ((u32, u32), Rational)>,
    {
        let mut p = Self::zero();
        for (e, c) in terms {
            p.add_term(e, c);
        }
        p
    }

    fn add_term(&mut self, e: (u32, u32), c: Rational) {
        if c.is_zero() {
            return;
        }
        let slot = self.terms.entry(e).or_insert_with(Rational::zero);
        *slot += c;
        if slot.is_zero() {
            self.terms.remove(&e);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, a1: u32, a2: u32) -> Rational {
        self.terms.get(&(a1, a2)).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&(u32, u32), &Rational)> {
        self.terms.iter()
    }

    pub fn support(&self) -> Vec<(u32, u32)> {
        self.terms.keys().copied().collect()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(|&e| e == (0, 0))
    }

    pub fn degree_in(&self, v: Var) -> u32 {
        self.terms
            .keys()
            .map(|&(a, b)| if v == Var::Z1 { a } else { b })
            .max()
            .unwrap_or(0)
    }

    pub fn total_degree(&self) -> u32 {
        self.terms.keys().map(|&(a, b)| a + b).max().unwrap_or(0)
    }

    pub fn scale(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        Self {
            terms: self.terms.iter().map(|(e, v)| (*e, v * c)).collect(),
        }
    }

    /// Product with the per-variable degree cap enforced.
    pub fn try_mul(&self, other: &Self, cap: u32) -> Result<Self, PolyError> {
        let d1 = self.degree_in(Var::Z1) as u64 + other.degree_in(Var::Z1) as u64;
        let d2 = self.degree_in(Var::Z2) as u64 + other.degree_in(Var::Z2) as u64;
        let worst = d1.max(d2);
        if worst > cap as u64 && !self.is_zero() && !other.is_zero() {
            return Err(PolyError::DegreeCap { exponent: worst, cap });
        }
        Ok(self * other)
    }

    pub fn try_pow(&self, k: u32, cap: u32) -> Result<Self, PolyError> {
        let mut acc = Self::one();
        let mut base = self.clone();
        let mut e = k;
        if self.is_zero() {
            return Ok(if k == 0 { Self::one() } else { Self::zero() });
        }
        let worst = self.degree_in(Var::Z1).max(self.degree_in(Var::Z2)) as u64 * k as u64;
        if worst > cap as u64 {
            return Err(PolyError::DegreeCap { exponent: worst, cap });
        }
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        Ok(acc)
    }

    pub fn pow(&self, k: u32) -> Self {
        self.try_pow(k, u32::MAX).expect("uncapped power")
    }

    pub fn partial(&self, v: Var) -> Self {
        let mut out = Self::zero();
        for (&(a, b), c) in &self.terms {
            match v {
                Var::Z1 if a > 0 => out.add_term((a - 1, b), c * int(a as i64)),
                Var::Z2 if b > 0 => out.add_term((a, b - 1), c * int(b as i64)),
                _ => {}
            }
        }
        out
    }

    /// det D^2 of the polynomial.
    pub fn hessian_determinant(&self) -> Self {
        let p1 = self.partial(Var::Z1);
        let p2 = self.partial(Var::Z2);
        let p11 = p1.partial(Var::Z1);
        let p22 = p2.partial(Var::Z2);
        let p12 = p1.partial(Var::Z2);
        &(&p11 * &p22) - &(&p12 * &p12)
    }

    pub fn swap_variables(&self) -> Self {
        Self {
            terms: self.terms.iter().map(|(&(a, b), c)| ((b, a), c.clone())).collect(),
        }
    }

    /// `p(z1, z2 + lambda*z1)`.
    pub fn shear(&self, lambda: &Rational) -> Self {
        let sub = &Self::var(Var::Z2) + &Self::monomial(lambda.clone(), 1, 0);
        let mut out = Self::zero();
        let mut cache: Vec<Self> = vec![Self::one()];
        for (&(a, b), c) in &self.terms {
            while cache.len() <= b as usize {
                let next = cache.last().unwrap() * &sub;
                cache.push(next);
            }
            let term = cache[b as usize].mul_monomial(c, a, 0);
            out = &out + &term;
        }
        out
    }

    fn mul_monomial(&self, c: &Rational, a1: u32, a2: u32) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        Self {
            terms: self
                .terms
                .iter()
                .map(|(&(a, b), v)| ((a + a1, b + a2), v * c))
                .collect(),
        }
    }

    /// Strips the largest monomial factor, returning its exponents.
    pub fn monomial_content(&self) -> (u32, u32) {
        let a = self.terms.keys().map(|e| e.0).min().unwrap_or(0);
        let b = self.terms.keys().map(|e| e.1).min().unwrap_or(0);
        (a, b)
    }

    pub fn evaluate(&self, z1: f64, z2: f64) -> f64 {
        // Horner in z2 over rows of fixed z1-exponent, then in z1.
        let mut rows: BTreeMap<u32, Vec<(u32, f64)>> = BTreeMap::new();
        for (&(a, b), c) in &self.terms {
            rows.entry(a).or_default().push((b, rat_to_f64(c)));
        }
        let mut acc = 0.0;
        let mut last = None;
        for (&a, row) in rows.iter().rev() {
            let mut inner = 0.0;
            let mut lb = None;
            for &(b, c) in row.iter().rev() {
                if let Some(prev) = lb {
                    inner *= z2.powi((prev - b) as i32);
                }
                inner += c;
                lb = Some(b);
            }
            inner *= z2.powi(lb.unwrap_or(0) as i32);
            if let Some(prev) = last {
                acc *= z1.powi((prev - a) as i32);
            }
            acc += inner;
            last = Some(a);
        }
        acc * z1.powi(last.unwrap_or(0) as i32)
    }

    pub fn evaluate_exact(&self, z1: &Rational, z2: &Rational) -> Rational {
        let mut sum = Rational::zero();
        for (&(a, b), c) in &self.terms {
            sum += c * pow_rat(z1, a) * pow_rat(z2, b);
        }
        sum
    }

    /// Common weighted degree `s*a1 + r*a2` of the support, if any.
    pub fn weighted_degree(&self, r: u32, s: u32) -> Option<u64> {
        let mut it = self.terms.keys().map(|&(a, b)| s as u64 * a as u64 + r as u64 * b as u64);
        let first = it.next()?;
        it.all(|w| w == first).then_some(first)
    }

    /// Lowest z2-exponent among terms with positive z2 power, or `None`.
    pub fn min_positive_exponent(&self, v: Var) -> Option<u32> {
        self.terms
            .keys()
            .map(|&(a, b)| if v == Var::Z1 { a } else { b })
            .filter(|&e| e > 0)
            .min()
    }

    /// Compact f64 term list for fast numeric evaluation.
    pub fn to_float_terms(&self) -> Vec<(i32, i32, f64)> {
        self.terms
            .iter()
            .map(|(&(a, b), c)| (a as i32, b as i32, rat_to_f64(c)))
            .collect()
    }
}

pub fn pow_rat(x: &Rational, k: u32) -> Rational {
    num_traits::pow::pow(x.clone(), k as usize)
}

impl fmt::Debug for BivarPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BivarPoly({})", crate::parser::format(self))
    }
}

impl fmt::Display for BivarPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&crate::parser::format(self))
    }
}

impl Add for &BivarPoly {
    type Output = BivarPoly;
    fn add(self, rhs: &BivarPoly) -> BivarPoly {
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.add_term(*e, c.clone());
        }
        out
    }
}

impl Sub for &BivarPoly {
    type Output = BivarPoly;
    fn sub(self, rhs: &BivarPoly) -> BivarPoly {
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.add_term(*e, -c.clone());
        }
        out
    }
}

impl Mul for &BivarPoly {
    type Output = BivarPoly;
    fn mul(self, rhs: &BivarPoly) -> BivarPoly {
        let mut out = BivarPoly::zero();
        for (&(a, b), c) in &self.terms {
            for (&(x, y), d) in &rhs.terms {
                out.add_term((a + x, b + y), c * d);
            }
        }
        out
    }
}

impl Neg for &BivarPoly {
    type Output = BivarPoly;
    fn neg(self) -> BivarPoly {
        BivarPoly {
            terms: self.terms.iter().map(|(e, c)| (*e, -c.clone())).collect(),
        }
    }
}

/// Homogeneity data: `phi(s^k1 z1, s^k2 z2) = s phi(z)` with `k = (s/m, r/m)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MixedWeight {
    pub kappa1: Rational,
    pub kappa2: Rational,
    pub r: u32,
    pub s: u32,
    pub m: u32,
    pub d_h: Rational,
}

impl MixedWeight {
    pub fn from_kappa(kappa1: Rational, kappa2: Rational) -> Result<Self, PolyError> {
        if !kappa1.is_positive() || !kappa2.is_positive() {
            return Err(PolyError::NonpositiveWeight {
                kappa1: kappa1.to_string(),
                kappa2: kappa2.to_string(),
            });
        }
        let ratio = &kappa1 / &kappa2;
        let s = ratio.numer().to_u32().ok_or(PolyError::NotMixedHomogeneous)?;
        let r = ratio.denom().to_u32().ok_or(PolyError::NotMixedHomogeneous)?;
        let m_rat = Rational::from_integer(BigInt::from(s)) / &kappa1;
        if !m_rat.is_integer() {
            return Err(PolyError::NotMixedHomogeneous);
        }
        let m = m_rat.to_integer().to_u32().ok_or(PolyError::NotMixedHomogeneous)?;
        let d_h = rat(m as i64, (r + s) as i64);
        Ok(Self { kappa1, kappa2, r, s, m, d_h })
    }

    pub fn is_homogeneous(&self) -> bool {
        self.r == 1 && self.s == 1
    }

    /// Homogeneous distance of `poly` measured with these weights, when every
    /// support point shares one weighted degree. Derivatives and the Hessian
    /// determinant inherit the weights of the polynomial they come from.
    pub fn distance_of(&self, poly: &BivarPoly) -> Option<Rational> {
        let w = poly.weighted_degree(self.r, self.s)?;
        Some(rat(w as i64, (self.r + self.s) as i64))
    }
}

/// Solves `k1*a1 + k2*a2 = 1` over the support.
pub fn mixed_weight(poly: &BivarPoly) -> Result<MixedWeight, PolyError> {
    let pts = poly.support();
    match pts.len() {
        0 => return Err(PolyError::ZeroPolynomial),
        1 => {
            let (a, b) = pts[0];
            if a + b == 0 {
                return Err(PolyError::NotMixedHomogeneous);
            }
            let k = rat(1, (a + b) as i64);
            return MixedWeight::from_kappa(k.clone(), k);
        }
        _ => {}
    }
    let (p, rest) = (pts[0], &pts[1..]);
    let q = rest
        .iter()
        .copied()
        .find(|q| p.0 as i64 * q.1 as i64 - q.0 as i64 * p.1 as i64 != 0)
        .ok_or(PolyError::NotMixedHomogeneous)?;
    let det = p.0 as i64 * q.1 as i64 - q.0 as i64 * p.1 as i64;
    let k1 = rat(q.1 as i64 - p.1 as i64, det);
    let k2 = rat(p.0 as i64 - q.0 as i64, det);
    for &(a, b) in &pts {
        if &k1 * int(a as i64) + &k2 * int(b as i64) != Rational::one() {
            return Err(PolyError::NotMixedHomogeneous);
        }
    }
    MixedWeight::from_kappa(k1, k2)
}

pub fn gcd_u32(a: u32, b: u32) -> u32 {
    a.gcd(&b)
}
