//! Seeded Monte Carlo expectation.
//!
//! Every run is split into fixed-size chunks. Chunk `k` draws from
//! `ChaCha8Rng::seed_from_u64(seed)` on stream `k`, so estimates do not
//! depend on how rayon schedules the chunks. Per-chunk moments are merged
//! in chunk order.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Exp, StandardNormal};
use rayon::prelude::*;

/// Samples per RNG stream.
pub const CHUNK: usize = 4096;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct McEstimate {
    pub mean: f64,
    pub stderr: f64,
    pub n: usize,
    pub seed: u64,
}

impl McEstimate {
    /// |mean − target| in units of stderr (∞ if stderr is 0 and they differ).
    pub fn z_score(&self, target: f64) -> f64 {
        let d = (self.mean - target).abs();
        if d == 0.0 {
            0.0
        } else {
            d / self.stderr
        }
    }
}

/// Scalar sampling distributions for [`mc_expectation`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Sampler {
    /// Exponential with the given mean.
    Exponential { mean: f64 },
    Normal { mean: f64, std: f64 },
    Uniform { lo: f64, hi: f64 },
}

impl Sampler {
    fn draw(&self, rng: &mut ChaCha8Rng) -> f64 {
        match *self {
            Sampler::Exponential { mean } => mean * Exp::new(1.0).expect("rate 1").sample(rng),
            Sampler::Normal { mean, std } => {
                let z: f64 = StandardNormal.sample(rng);
                mean + std * z
            }
            Sampler::Uniform { lo, hi } => rng.random_range(lo..hi),
        }
    }
}

/// Running moments (Welford), mergeable with Chan's formula.
#[derive(Debug, Clone, Copy, Default)]
pub struct Moments {
    n: u64,
    mean: f64,
    m2: f64,
}

impl Moments {
    pub fn push(&mut self, x: f64) {
        self.n += 1;
        let d = x - self.mean;
        self.mean += d / self.n as f64;
        self.m2 += d * (x - self.mean);
    }

    pub fn merge(self, o: Moments) -> Moments {
        if self.n == 0 {
            return o;
        }
        if o.n == 0 {
            return self;
        }
        let n = self.n + o.n;
        let d = o.mean - self.mean;
        Moments {
            n,
            mean: self.mean + d * (o.n as f64 / n as f64),
            m2: self.m2 + o.m2 + d * d * (self.n as f64 * o.n as f64 / n as f64),
        }
    }

    pub fn count(&self) -> u64 {
        self.n
    }

    pub fn mean(&self) -> f64 {
        self.mean
    }

    pub fn variance(&self) -> f64 {
        if self.n < 2 {
            0.0
        } else {
            self.m2 / (self.n - 1) as f64
        }
    }

    pub fn estimate(&self, seed: u64) -> McEstimate {
        McEstimate {
            mean: self.mean,
            stderr: (self.variance() / self.n as f64).sqrt(),
            n: self.n as usize,
            seed,
        }
    }
}

/// RNG for stream `stream` of `seed`.
pub fn stream_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// Mixes extra words into a seed (splitmix64 finalizer), for per-task seeds.
pub fn derive_seed(seed: u64, words: &[u64]) -> u64 {
    let mut s = seed;
    for &w in words {
        let mut z = s ^ w.wrapping_add(0x9e37_79b9_7f4a_7c15);
        z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
        s = z ^ (z >> 31);
    }
    s
}

/// Mean of `draw(rng)` over n samples.
pub fn mc_mean<F>(n: usize, seed: u64, draw: F) -> McEstimate
where
    F: Fn(&mut ChaCha8Rng) -> f64 + Sync,
{
    assert!(n >= 2, "need at least two samples");
    let chunks = n.div_ceil(CHUNK);
    let parts: Vec<Moments> = (0..chunks)
        .into_par_iter()
        .map(|k| {
            let mut rng = stream_rng(seed, k as u64);
            let len = CHUNK.min(n - k * CHUNK);
            let mut m = Moments::default();
            for _ in 0..len {
                m.push(draw(&mut rng));
            }
            m
        })
        .collect();
    parts
        .into_iter()
        .fold(Moments::default(), Moments::merge)
        .estimate(seed)
}

/// E[f(X)] for X drawn from `sampler`.
pub fn mc_expectation<F>(sampler: Sampler, integrand: F, n: usize, seed: u64) -> McEstimate
where
    F: Fn(f64) -> f64 + Sync,
{
    mc_mean(n, seed, |rng| integrand(sampler.draw(rng)))
}
