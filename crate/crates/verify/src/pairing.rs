//! Monte-Carlo estimate of `<T chi_E, chi_F>`.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::sets::{Box3, ESet, Surface};
use crate::VerifyError;

pub const CHUNK: usize = 1 << 14;
pub const STRATA_SIDE: usize = 16;
pub const MIN_SAMPLES: usize = 1000;

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct PairingEstimate {
    pub value: f64,
    pub stderr: f64,
    pub samples: usize,
    pub seed: u64,
}

/// Neumaier-compensated running sum.
#[derive(Clone, Copy, Debug, Default)]
pub struct KahanSum {
    sum: f64,
    comp: f64,
}

impl KahanSum {
    #[inline]
    pub fn add(&mut self, v: f64) {
        let t = self.sum + v;
        if self.sum.abs() >= v.abs() {
            self.comp += (self.sum - t) + v;
        } else {
            self.comp += (v - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn value(&self) -> f64 {
        self.sum + self.comp
    }
}

/// Independent generator for `(seed, stream)`.
pub fn substream(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// Runs `n` samples in fixed-size chunks on independent substreams
/// `stream_base + k` and returns the per-chunk `(sum, sum of squares)` in chunk order.
pub fn chunked<F>(n: usize, seed: u64, stream_base: u64, sample: F) -> (f64, f64)
where
    F: Fn(&mut ChaCha8Rng, usize) -> f64 + Sync,
{
    let chunks = n.div_ceil(CHUNK);
    let parts: Vec<(f64, f64)> = (0..chunks)
        .into_par_iter()
        .map(|k| {
            let mut rng = substream(seed, stream_base + k as u64);
            let (mut s, mut s2) = (KahanSum::default(), KahanSum::default());
            for i in k * CHUNK..((k + 1) * CHUNK).min(n) {
                let v = sample(&mut rng, i);
                s.add(v);
                s2.add(v * v);
            }
            (s.value(), s2.value())
        })
        .collect();
    let (mut s, mut s2) = (KahanSum::default(), KahanSum::default());
    for (a, b) in parts {
        s.add(a);
        s2.add(b);
    }
    (s.value(), s2.value())
}

pub fn mean_and_stderr(sum: f64, sum_sq: f64, n: usize) -> (f64, f64) {
    let nf = n as f64;
    let mean = sum / nf;
    let var = if n > 1 { ((sum_sq - nf * mean * mean) / (nf - 1.0)).max(0.0) } else { 0.0 };
    (mean, (var / nf).sqrt())
}

/// `x` uniform on `F`, `t` from the window of `E`; the `(t1, t2)` unit
/// coordinates are stratified over a 16x16 grid when `stratified`.
pub fn estimate_pairing(
    surface: &Surface,
    e: &ESet,
    f: &Box3,
    n: usize,
    seed: u64,
    stratified: bool,
) -> Result<PairingEstimate, VerifyError> {
    estimate_pairing_stream(surface, e, f, n, seed, 0, stratified)
}

pub fn estimate_pairing_stream(
    surface: &Surface,
    e: &ESet,
    f: &Box3,
    n: usize,
    seed: u64,
    stream_base: u64,
    stratified: bool,
) -> Result<PairingEstimate, VerifyError> {
    if f.is_degenerate() || e.volume() <= 0.0 {
        return Err(VerifyError::DegenerateBox);
    }
    if n < MIN_SAMPLES {
        return Err(VerifyError::TooFewSamples(n));
    }
    let fvol = f.volume();
    let strata = STRATA_SIDE * STRATA_SIDE;
    let (sum, sum_sq) = chunked(n, seed, stream_base, |rng, i| {
        let x = [
            rng.gen_range(f.lo[0]..=f.hi[0]),
            rng.gen_range(f.lo[1]..=f.hi[1]),
            rng.gen_range(f.lo[2]..=f.hi[2]),
        ];
        let (a, b): (f64, f64) = (rng.gen(), rng.gen());
        let u = if stratified {
            let k = i % strata;
            [((k / STRATA_SIDE) as f64 + a) / STRATA_SIDE as f64, ((k % STRATA_SIDE) as f64 + b) / STRATA_SIDE as f64]
        } else {
            [a, b]
        };
        let (t, w) = e.window(x, u);
        if w == 0.0 {
            return 0.0;
        }
        let y = [x[0] - t[0], x[1] - t[1], x[2] - surface.eval(t[0], t[1])];
        if e.contains(surface, y) {
            fvol * w
        } else {
            0.0
        }
    });
    let (value, stderr) = mean_and_stderr(sum, sum_sq, n);
    Ok(PairingEstimate { value, stderr, samples: n, seed })
}

#[cfg(test)]
mod tests {
    use super::*;
    use rsharp_core::parse;

    #[test]
    fn constant_indicator() {
        let s = Surface::new(&parse("z1*z2").unwrap());
        let e = ESet::Box(Box3::symmetric([3.0; 3]));
        let f = Box3::symmetric([1.0; 3]);
        let est = estimate_pairing(&s, &e, &f, 20_000, 1, false).unwrap();
        assert!((est.value - 32.0).abs() < 1e-9, "{est:?}");
        assert_eq!(est.stderr, 0.0);
    }

    #[test]
    fn unreachable_set_gives_zero() {
        let s = Surface::new(&parse("z1*z2").unwrap());
        let e = ESet::Box(Box3::new([10.0, 10.0, 10.0], [11.0, 11.0, 11.0]));
        let f = Box3::symmetric([1.0; 3]);
        assert_eq!(estimate_pairing(&s, &e, &f, 5000, 1, true).unwrap().value, 0.0);
    }

    #[test]
    fn errors() {
        let s = Surface::new(&parse("z1*z2").unwrap());
        let e = ESet::Box(Box3::symmetric([1.0; 3]));
        let flat = Box3::new([0.0; 3], [1.0, 1.0, 0.0]);
        assert_eq!(estimate_pairing(&s, &e, &flat, 5000, 1, false), Err(VerifyError::DegenerateBox));
        let f = Box3::symmetric([1.0; 3]);
        assert_eq!(estimate_pairing(&s, &e, &f, 10, 1, false), Err(VerifyError::TooFewSamples(10)));
    }

    #[test]
    fn deterministic_across_thread_counts() {
        let s = Surface::new(&parse("z1^2 + z2^3").unwrap());
        let e = ESet::Box(Box3::symmetric([0.5, 0.5, 0.1]));
        let f = Box3::symmetric([0.2; 3]);
        let run = |threads| {
            rayon::ThreadPoolBuilder::new()
                .num_threads(threads)
                .build()
                .unwrap()
                .install(|| estimate_pairing(&s, &e, &f, 100_000, 42, true).unwrap())
        };
        let a = run(1);
        let b = run(4);
        assert_eq!(a.value.to_bits(), b.value.to_bits());
        assert_eq!(a.stderr.to_bits(), b.stderr.to_bits());
        assert_ne!(a.value, estimate_pairing(&s, &e, &f, 100_000, 43, true).unwrap().value);
    }

    #[test]
    fn unbiased_on_closed_form() {
        // z1*z2, E = [-1/2,1/2]^2 x R, F = [-1/4,1/4]^3: T chi_E(x) = area of
        // (x' - E') within [-1,1]^2 = 1 for all x in F.
        let s = Surface::new(&parse("z1*z2").unwrap());
        let e = ESet::Box(Box3::new([-0.5, -0.5, -10.0], [0.5, 0.5, 10.0]));
        let f = Box3::symmetric([0.25; 3]);
        let est = estimate_pairing(&s, &e, &f, 10_000, 9, false).unwrap();
        assert!((est.value - 0.125).abs() < 1e-12);
    }
}
