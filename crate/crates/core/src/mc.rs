//! Seeded, chunked Monte Carlo harness.
//!
//! Samples are processed in fixed-size chunks; chunk `c` draws from its own
//! ChaCha stream keyed by `(seed, key…, c)`. Results depend only on the seed
//! and the key, never on the number of worker threads.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

pub const CHUNK: u64 = 4096;

fn splitmix(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Deterministic sub-stream for `(seed, key)`.
pub fn substream(seed: u64, key: &[u64]) -> ChaCha8Rng {
    let mut h = splitmix(seed);
    for &k in key {
        h = splitmix(h ^ splitmix(k.wrapping_add(0x632B_E59B_D9B4_E019)));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(h);
    rng
}

/// Running count, sum and sum of squares; merging is associative.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct Accumulator {
    pub count: u64,
    pub sum: f64,
    pub sum_sq: f64,
}

impl Accumulator {
    pub fn push(&mut self, x: f64) {
        self.count += 1;
        self.sum += x;
        self.sum_sq += x * x;
    }

    pub fn merge(mut self, other: Accumulator) -> Accumulator {
        self.count += other.count;
        self.sum += other.sum;
        self.sum_sq += other.sum_sq;
        self
    }

    pub fn mean(&self) -> f64 {
        if self.count == 0 {
            return f64::NAN;
        }
        self.sum / self.count as f64
    }

    /// Standard error of the mean (unbiased variance).
    pub fn stderr(&self) -> f64 {
        if self.count < 2 {
            return 0.0;
        }
        let n = self.count as f64;
        let var = ((self.sum_sq - self.sum * self.sum / n) / (n - 1.0)).max(0.0);
        (var / n).sqrt()
    }

    pub fn estimate(&self) -> Estimate {
        Estimate {
            mean: self.mean(),
            stderr: self.stderr(),
            n_samples: self.count,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Estimate {
    pub mean: f64,
    pub stderr: f64,
    pub n_samples: u64,
}

impl Estimate {
    /// `|mean - reference| <= sigmas · stderr + slack`.
    pub fn agrees_with(&self, reference: f64, sigmas: f64, slack: f64) -> bool {
        (self.mean - reference).abs() <= sigmas * self.stderr + slack
    }
}

/// Runs `body(rng, chunk_len)` once per chunk in parallel; results come back
/// in chunk order.
pub fn run_chunks<T, F>(n_samples: u64, seed: u64, key: &[u64], body: F) -> Vec<T>
where
    T: Send,
    F: Fn(&mut ChaCha8Rng, u64) -> T + Sync,
{
    let chunks = n_samples.div_ceil(CHUNK);
    (0..chunks)
        .into_par_iter()
        .map(|c| {
            let mut full_key = key.to_vec();
            full_key.push(c);
            let mut rng = substream(seed, &full_key);
            let len = CHUNK.min(n_samples - c * CHUNK);
            body(&mut rng, len)
        })
        .collect()
}

/// Mean and standard error of `f` over `n_samples` draws.
pub fn estimate_mean<F>(n_samples: u64, seed: u64, key: &[u64], f: F) -> Estimate
where
    F: Fn(&mut ChaCha8Rng) -> f64 + Sync,
{
    run_chunks(n_samples, seed, key, |rng, len| {
        let mut acc = Accumulator::default();
        for _ in 0..len {
            acc.push(f(rng));
        }
        acc
    })
    .into_iter()
    .fold(Accumulator::default(), Accumulator::merge)
    .estimate()
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::Rng;

    #[test]
    fn deterministic_and_chunk_exact() {
        let a = estimate_mean(10_001, 7, &[1], |rng| rng.gen::<f64>());
        let b = estimate_mean(10_001, 7, &[1], |rng| rng.gen::<f64>());
        assert_eq!(a, b);
        assert_eq!(a.n_samples, 10_001);
        assert!(a.agrees_with(0.5, 4.0, 0.0));
        let c = estimate_mean(10_001, 7, &[2], |rng| rng.gen::<f64>());
        assert_ne!(a.mean, c.mean);
    }

    #[test]
    fn accumulator_stats() {
        let mut acc = Accumulator::default();
        for x in [1.0, 2.0, 3.0, 4.0] {
            acc.push(x);
        }
        assert_eq!(acc.mean(), 2.5);
        // sample variance 5/3, se = sqrt(5/12)
        assert!((acc.stderr() - (5.0f64 / 12.0).sqrt()).abs() < 1e-12);
        let mut one = Accumulator::default();
        one.push(3.0);
        assert_eq!(one.stderr(), 0.0);
    }
}
