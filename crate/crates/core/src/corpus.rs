//! Seeded generator of random mixed-homogeneous polynomials satisfying
//! `phi(0) = 0`, `grad phi(0) = 0`.

use rand::seq::SliceRandom;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::classify::check_hypothesis;
use crate::factor::curve_factor;
use crate::poly::{gcd_u32, mixed_weight, rat, BivarPoly, Rational, Var};

pub const DEFAULT_MAX_DEGREE: u32 = 12;

pub struct CorpusGenerator {
    rng: ChaCha8Rng,
    max_degree: u32,
}

fn small_rational(rng: &mut ChaCha8Rng, nonzero: bool) -> Rational {
    loop {
        let n: i64 = rng.gen_range(-9..=9);
        if nonzero && n == 0 {
            continue;
        }
        let d: i64 = *[1, 1, 1, 2, 3, 4].choose(rng).unwrap();
        return rat(n, d);
    }
}

impl CorpusGenerator {
    pub fn new(seed: u64, max_degree: u32) -> Self {
        Self { rng: ChaCha8Rng::seed_from_u64(seed), max_degree: max_degree.max(2) }
    }

    fn weights(&mut self) -> (u32, u32) {
        loop {
            let r = self.rng.gen_range(1..=4u32);
            let s = self.rng.gen_range(1..=4u32);
            if gcd_u32(r, s) == 1 {
                return (r, s);
            }
        }
    }

    /// Random coefficients on `s*a1 + r*a2 = m`.
    fn on_support_line(&mut self) -> Option<BivarPoly> {
        let (r, s) = self.weights();
        let dmax = self.max_degree;
        let lines: Vec<Vec<(u32, u32)>> = (2..=dmax * r.max(s))
            .map(|m| {
                (0..=dmax)
                    .flat_map(|a1| (0..=dmax).map(move |a2| (a1, a2)))
                    .filter(|&(a1, a2)| s * a1 + r * a2 == m && a1 + a2 >= 2 && a1 + a2 <= dmax)
                    .collect::<Vec<_>>()
            })
            .filter(|pts| pts.len() >= 2)
            .collect();
        let pts = lines.choose(&mut self.rng)?.clone();
        let mut terms = Vec::new();
        for p in &pts {
            if self.rng.gen_bool(0.6) {
                terms.push((*p, small_rational(&mut self.rng, true)));
            }
        }
        if terms.len() < 2 {
            let mut two: Vec<_> = pts.choose_multiple(&mut self.rng, 2).cloned().collect();
            two.sort();
            terms = two.into_iter().map(|p| (p, small_rational(&mut self.rng, true))).collect();
        }
        Some(BivarPoly::from_terms(terms))
    }

    /// `C z1^a z2^b prod (z2^s - lambda z1^r)^k` times optional quadratic factors.
    fn product_of_factors(&mut self) -> Option<BivarPoly> {
        let (r, s) = self.weights();
        let cap = self.max_degree;
        let mut p = BivarPoly::constant(small_rational(&mut self.rng, true));
        let nfactors = self.rng.gen_range(1..=4);
        for _ in 0..nfactors {
            let k = *[1u32, 1, 2, 2, 3, 4].choose(&mut self.rng).unwrap();
            let f = match self.rng.gen_range(0..10) {
                0 | 1 => BivarPoly::var(Var::Z1),
                2 | 3 => BivarPoly::var(Var::Z2),
                4..=7 => curve_factor(r, s, &small_rational(&mut self.rng, true)),
                _ => {
                    // z2^{2s} + b z2^s z1^r + c z1^{2r}, real or complex roots.
                    let b = small_rational(&mut self.rng, false);
                    let c = small_rational(&mut self.rng, true);
                    BivarPoly::from_terms(vec![
                        ((0, 2 * s), rat(1, 1)),
                        ((r, s), b),
                        ((2 * r, 0), c),
                    ])
                }
            };
            let next = f.try_pow(k, cap).ok().and_then(|fk| p.try_mul(&fk, cap).ok())?;
            if next.total_degree() > cap {
                break;
            }
            p = next;
        }
        Some(p)
    }

    /// Powers of linear forms and monomials, whose Hessians vanish.
    fn linear_power(&mut self) -> BivarPoly {
        let j = self.rng.gen_range(2..=self.max_degree.min(6));
        let lam = small_rational(&mut self.rng, false);
        let base = BivarPoly::from_terms(vec![((0, 1), rat(1, 1)), ((1, 0), -lam)]);
        base.pow(j).scale(&small_rational(&mut self.rng, true))
    }

    fn candidate(&mut self) -> Option<BivarPoly> {
        match self.rng.gen_range(0..20) {
            0 => Some(self.linear_power()),
            1..=9 => self.on_support_line(),
            _ => self.product_of_factors(),
        }
    }

    fn acceptable(&self, p: &BivarPoly) -> bool {
        !p.is_zero()
            && p.total_degree() <= self.max_degree
            && check_hypothesis(p).is_ok()
            && mixed_weight(p).is_ok()
    }

    pub fn next_poly(&mut self) -> BivarPoly {
        loop {
            if let Some(p) = self.candidate() {
                if self.acceptable(&p) {
                    return p;
                }
            }
        }
    }
}

pub fn generate(count: usize, seed: u64, max_degree: u32) -> Vec<BivarPoly> {
    let mut g = CorpusGenerator::new(seed, max_degree);
    (0..count).map(|_| g.next_poly()).collect()
}
