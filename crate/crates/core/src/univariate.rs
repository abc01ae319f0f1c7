//! Dense univariate polynomials over the rationals, square-free
//! decomposition and Sturm-based real-root isolation.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::poly::{int, rat_to_f64, Rational};

/// Target width of isolating intervals.
pub const ROOT_WIDTH: f64 = 1e-12;

#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct UnivarPoly {
    coeffs: Vec<Rational>,
}

impl fmt::Debug for UnivarPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.coeffs.iter().map(|c| c.to_string()).collect();
        write!(f, "UnivarPoly[{}]", parts.join(", "))
    }
}

impl UnivarPoly {
    pub fn new(mut coeffs: Vec<Rational>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Self { coeffs }
    }

    pub fn from_ints(cs: &[i64]) -> Self {
        Self::new(cs.iter().map(|&c| int(c)).collect())
    }

    pub fn zero() -> Self {
        Self::default()
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree; the zero polynomial reports 0.
    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn lead(&self) -> Rational {
        self.coeffs.last().cloned().unwrap_or_else(Rational::zero)
    }

    pub fn monic(&self) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        let l = self.lead();
        Self::new(self.coeffs.iter().map(|c| c / &l).collect())
    }

    pub fn derivative(&self) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * int(i as i64))
                .collect(),
        )
    }

    pub fn eval(&self, x: &Rational) -> Rational {
        let mut acc = Rational::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    pub fn eval_f64(&self, x: f64) -> f64 {
        let mut acc = 0.0;
        for c in self.coeffs.iter().rev() {
            acc = acc * x + rat_to_f64(c);
        }
        acc
    }

    pub fn sub(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        let z = Rational::zero();
        Self::new(
            (0..n)
                .map(|i| self.coeffs.get(i).unwrap_or(&z) - other.coeffs.get(i).unwrap_or(&z))
                .collect(),
        )
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        let mut out = vec![Rational::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Self::new(out)
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut acc = Self::from_ints(&[1]);
        for _ in 0..k {
            acc = acc.mul(self);
        }
        acc
    }

    pub fn div_rem(&self, d: &Self) -> (Self, Self) {
        assert!(!d.is_zero(), "division by the zero polynomial");
        let mut rem = self.coeffs.clone();
        if rem.len() < d.coeffs.len() {
            return (Self::zero(), self.clone());
        }
        let dl = d.lead();
        let mut quot = vec![Rational::zero(); rem.len() - d.coeffs.len() + 1];
        for k in (0..quot.len()).rev() {
            let q = &rem[k + d.coeffs.len() - 1] / &dl;
            if !q.is_zero() {
                for (j, c) in d.coeffs.iter().enumerate() {
                    rem[k + j] -= &q * c;
                }
            }
            quot[k] = q;
        }
        rem.truncate(d.coeffs.len() - 1);
        (Self::new(quot), Self::new(rem))
    }

    /// Monic gcd.
    pub fn gcd(&self, other: &Self) -> Self {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let r = a.div_rem(&b).1;
            a = b;
            b = r.monic();
        }
        a.monic()
    }

    /// Same polynomial scaled to coprime integer coefficients.
    pub fn primitive(&self) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        let mut l = BigInt::one();
        for c in &self.coeffs {
            l = num_integer::lcm(l, c.denom().clone());
        }
        let ints: Vec<BigInt> = self.coeffs.iter().map(|c| (c * &Rational::from_integer(l.clone())).to_integer()).collect();
        let mut g = BigInt::zero();
        for x in &ints {
            g = num_integer::gcd(g, x.clone());
        }
        Self::new(ints.into_iter().map(|x| Rational::from_integer(x / &g)).collect())
    }

    /// Number of sign changes of the Sturm chain at `x`.
    fn sign_changes(chain: &[UnivarPoly], x: &Rational) -> usize {
        let mut last = 0i8;
        let mut changes = 0;
        for p in chain {
            let v = p.eval(x);
            let s = if v.is_positive() { 1 } else if v.is_negative() { -1 } else { 0 };
            if s != 0 {
                if last != 0 && s != last {
                    changes += 1;
                }
                last = s;
            }
        }
        changes
    }

    pub fn sturm_chain(&self) -> Vec<UnivarPoly> {
        let mut chain = vec![self.primitive(), self.derivative().primitive()];
        loop {
            let n = chain.len();
            if chain[n - 1].is_zero() {
                chain.pop();
                break;
            }
            let r = chain[n - 2].div_rem(&chain[n - 1]).1;
            if r.is_zero() {
                break;
            }
            // Negated remainder, rescaled to keep coefficients small.
            let neg = Self::new(r.coeffs.iter().map(|c| -c.clone()).collect());
            let prim = neg.primitive();
            let fixed = if prim.lead().is_positive() == neg.lead().is_positive() {
                prim
            } else {
                Self::new(prim.coeffs.iter().map(|c| -c.clone()).collect())
            };
            chain.push(fixed);
        }
        chain
    }

    /// Cauchy bound: every root has absolute value below it.
    pub fn cauchy_bound(&self) -> Rational {
        let l = self.lead().abs();
        let m = self.coeffs[..self.coeffs.len().saturating_sub(1)]
            .iter()
            .map(|c| c.abs() / &l)
            .max()
            .unwrap_or_else(Rational::zero);
        Rational::one() + m
    }
}

/// Number of roots of `p` (square-free) in the half-open interval `(lo, hi]`.
pub fn count_roots(chain: &[UnivarPoly], lo: &Rational, hi: &Rational) -> usize {
    UnivarPoly::sign_changes(chain, lo).saturating_sub(UnivarPoly::sign_changes(chain, hi))
}

/// Yun's algorithm: `p = c * prod q_i^{m_i}` with `q_i` monic, square-free, coprime.
pub fn squarefree_decomposition(p: &UnivarPoly) -> Vec<(UnivarPoly, u32)> {
    assert!(!p.is_zero(), "square-free decomposition of zero");
    let mut out = Vec::new();
    if p.degree() == 0 {
        return out;
    }
    let dp = p.derivative();
    let a0 = p.gcd(&dp);
    let mut b = p.div_rem(&a0).0;
    let mut c = dp.div_rem(&a0).0;
    let mut d = c.sub(&b.derivative());
    let mut i = 1;
    while b.degree() > 0 {
        let a = b.gcd(&d);
        if a.degree() > 0 {
            out.push((a.clone(), i));
        }
        b = b.div_rem(&a).0;
        c = d.div_rem(&a).0;
        d = c.sub(&b.derivative());
        i += 1;
    }
    out
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RootKind {
    Rational(Rational),
    /// Unique root of `factor` in the open interval `(lo, hi)`.
    Isolated { lo: Rational, hi: Rational, factor: UnivarPoly },
}

#[derive(Clone, Debug, PartialEq)]
pub struct RootDescriptor {
    pub kind: RootKind,
    pub approx: f64,
}

impl RootDescriptor {
    pub fn rational(q: Rational) -> Self {
        let approx = rat_to_f64(&q);
        Self { kind: RootKind::Rational(q), approx }
    }

    pub fn as_rational(&self) -> Option<&Rational> {
        match &self.kind {
            RootKind::Rational(q) => Some(q),
            RootKind::Isolated { .. } => None,
        }
    }

    pub fn is_zero(&self) -> bool {
        self.as_rational().is_some_and(|q| q.is_zero())
    }

    /// Whether this root is a root of `p`, decided exactly.
    pub fn is_root_of(&self, p: &UnivarPoly) -> bool {
        if p.is_zero() {
            return true;
        }
        match &self.kind {
            RootKind::Rational(q) => p.eval(q).is_zero(),
            RootKind::Isolated { lo, hi, factor } => {
                let g = factor.gcd(p);
                if g.degree() == 0 {
                    return false;
                }
                count_roots(&g.sturm_chain(), lo, hi) > 0
            }
        }
    }

    /// Multiplicity of this root in `p` (0 if not a root).
    pub fn multiplicity_in(&self, p: &UnivarPoly) -> u32 {
        assert!(!p.is_zero(), "multiplicity in the zero polynomial");
        let mut k = 0;
        let mut d = p.clone();
        while self.is_root_of(&d) {
            k += 1;
            d = d.derivative();
        }
        k
    }

    /// Smallest `k >= 1` with `p^(k)` nonzero at this root.
    pub fn first_nonvanishing_derivative(&self, p: &UnivarPoly) -> Option<u32> {
        let mut d = p.derivative();
        let mut k = 1;
        while !d.is_zero() {
            if !self.is_root_of(&d) {
                return Some(k);
            }
            d = d.derivative();
            k += 1;
        }
        None
    }
}

/// All real roots of a square-free polynomial, in increasing order.
pub fn isolate_real_roots(q: &UnivarPoly) -> Vec<RootDescriptor> {
    if q.degree() == 0 {
        return Vec::new();
    }
    let chain = q.sturm_chain();
    let bound = q.cauchy_bound();
    let half = Rational::new(BigInt::from(1), BigInt::from(2));
    let mut stack = vec![(-bound.clone(), bound)];
    let mut found: Vec<(Rational, Rational)> = Vec::new();
    while let Some((lo, hi)) = stack.pop() {
        let n = count_roots(&chain, &lo, &hi);
        match n {
            0 => {}
            1 => found.push((lo, hi)),
            _ => {
                let mid = (&lo + &hi) * &half;
                stack.push((mid.clone(), hi));
                stack.push((lo, mid));
            }
        }
    }
    found.sort_by(|a, b| a.0.cmp(&b.0));
    let prim = q.primitive();
    found
        .into_iter()
        .map(|(lo, hi)| refine(&prim, &chain, lo, hi))
        .collect()
}

fn refine(q: &UnivarPoly, chain: &[UnivarPoly], mut lo: Rational, mut hi: Rational) -> RootDescriptor {
    if q.eval(&hi).is_zero() {
        return RootDescriptor::rational(hi);
    }
    let half = Rational::new(BigInt::from(1), BigInt::from(2));
    let lead = q.lead().abs();
    let width = Rational::new(BigInt::from(1), BigInt::from(1_000_000_000_000i64));
    // Any rational root is k/lead for an integer k; shrink until at most two
    // such candidates remain and test them exactly.
    let lattice = Rational::one() / &lead;
    let target = if lattice < width { lattice.clone() } else { width.clone() };
    while &hi - &lo >= target {
        let mid = (&lo + &hi) * &half;
        if q.eval(&mid).is_zero() {
            return RootDescriptor::rational(mid);
        }
        if count_roots(chain, &lo, &mid) == 1 {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    let scaled_lo = (&lo * &lead).floor();
    for k in [scaled_lo.clone(), scaled_lo + Rational::one()] {
        let cand = k / &lead;
        if cand > lo && cand <= hi && q.eval(&cand).is_zero() {
            return RootDescriptor::rational(cand);
        }
    }
    while &hi - &lo >= width {
        let mid = (&lo + &hi) * &half;
        if count_roots(chain, &lo, &mid) == 1 {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    let approx = 0.5 * (rat_to_f64(&lo) + rat_to_f64(&hi));
    RootDescriptor { kind: RootKind::Isolated { lo, hi, factor: q.monic() }, approx }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::rat;
    use proptest::prelude::*;

    fn u(cs: &[i64]) -> UnivarPoly {
        UnivarPoly::from_ints(cs)
    }

    #[test]
    fn squarefree_layers() {
        // (u-1)^2 = 1 - 2u + u^2
        assert_eq!(squarefree_decomposition(&u(&[1, -2, 1])), vec![(u(&[-1, 1]), 2)]);
        assert_eq!(squarefree_decomposition(&u(&[1, 0, 1])), vec![(u(&[1, 0, 1]), 1)]);
        assert_eq!(squarefree_decomposition(&u(&[0, -1, 0, 1])), vec![(u(&[0, -1, 0, 1]), 1)]);
        // (u+2)(u-1)^3 multiplied out by hand: u^4 - u^3 - 3u^2 + 5u - 2
        let p = u(&[-2, 5, -3, -1, 1]);
        assert_eq!(squarefree_decomposition(&p), vec![(u(&[2, 1]), 1), (u(&[-1, 1]), 3)]);
        assert!(squarefree_decomposition(&u(&[5])).is_empty());
    }

    #[test]
    fn isolates_roots() {
        let r = isolate_real_roots(&u(&[-1, 1]));
        assert_eq!(r, vec![RootDescriptor::rational(rat(1, 1))]);
        assert!(isolate_real_roots(&u(&[1, 0, 1])).is_empty());
        let r = isolate_real_roots(&u(&[-2, 0, 1]));
        assert_eq!(r.len(), 2);
        for (d, exact) in r.iter().zip([-std::f64::consts::SQRT_2, std::f64::consts::SQRT_2]) {
            assert!((d.approx - exact).abs() < 1e-12);
            let RootKind::Isolated { lo, hi, .. } = &d.kind else { panic!("irrational root") };
            assert!(rat_to_f64(&(hi - lo)) <= ROOT_WIDTH);
        }
        // 6u^2 - 5u + 1 = (2u - 1)(3u - 1)
        let r = isolate_real_roots(&u(&[1, -5, 6]));
        assert_eq!(r, vec![RootDescriptor::rational(rat(1, 3)), RootDescriptor::rational(rat(1, 2))]);
        // 1 + u + u^2/6: roots -3 +- sqrt(3)
        let p = UnivarPoly::new(vec![rat(1, 1), rat(1, 1), rat(1, 6)]);
        let r = isolate_real_roots(&p);
        let s3 = 3f64.sqrt();
        assert!((r[0].approx - (-3.0 - s3)).abs() < 1e-12);
        assert!((r[1].approx - (-3.0 + s3)).abs() < 1e-12);
    }

    #[test]
    fn exact_multiplicity_of_irrational_roots() {
        let q = u(&[-2, 0, 1]);
        let roots = isolate_real_roots(&q);
        let p = q.pow(3).mul(&u(&[1, 1]));
        for r in &roots {
            assert_eq!(r.multiplicity_in(&p), 3);
            assert_eq!(r.multiplicity_in(&u(&[-3, 0, 1])), 0);
        }
        // u^2 - 2 has roots +-sqrt 2; (u - sqrt2) divides (u^2-2) but the
        // conjugate interval must not see roots of u + 1.
        assert!(!roots[0].is_root_of(&u(&[1, 1])));
    }

    proptest! {
        #[test]
        fn integer_roots_recovered(roots in proptest::collection::vec((-6i64..7, 1u32..4), 1..4)) {
            let mut p = u(&[1]);
            let mut expect: std::collections::BTreeMap<i64, u32> = Default::default();
            for (r, m) in &roots {
                p = p.mul(&u(&[-r, 1]).pow(*m));
                *expect.entry(*r).or_default() += m;
            }
            let mut got: std::collections::BTreeMap<i64, u32> = Default::default();
            for (q, m) in squarefree_decomposition(&p) {
                for root in isolate_real_roots(&q) {
                    let v = root.as_rational().expect("integer root is rational").to_integer();
                    *got.entry(i64::try_from(v).unwrap()).or_default() += m;
                    prop_assert_eq!(root.multiplicity_in(&p), m);
                }
            }
            prop_assert_eq!(got, expect);
        }

        #[test]
        fn sturm_count_matches_brute_force(cs in proptest::collection::vec(-5i64..6, 2..7)) {
            let p = u(&cs);
            prop_assume!(p.degree() >= 1);
            let layers = squarefree_decomposition(&p);
            let total: usize = layers.iter().map(|(q, _)| isolate_real_roots(q).len()).sum();
            // Sign changes on a fine grid plus exact zeros lower-bound the count of
            // distinct odd-multiplicity roots; isolated roots must be actual roots.
            for (q, _) in &layers {
                for r in isolate_real_roots(q) {
                    prop_assert!(p.eval_f64(r.approx).abs() < 1e-6 * (1.0 + r.approx.abs()).powi(p.degree() as i32));
                }
            }
            prop_assert!(total <= p.degree());
        }
    }
}
