//! Deterministic seeded sampling of rationals, weight vectors, groupings,
//! and probability vectors. Everything is driven by ChaCha8 so a (seed,
//! stream) pair reproduces the exact same inputs on any platform.

use num::rational::BigRational;
use num::Zero;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::entropy::{ProbVector, WeightVector};
use crate::rational::rat;
use crate::tree::Grouping;

/// Default seed used across the CLI and test suites.
pub const DEFAULT_SEED: u64 = 3405691582;

pub struct Sampler {
    rng: ChaCha8Rng,
}

impl Sampler {
    pub fn new(seed: u64) -> Self {
        Sampler {
            rng: ChaCha8Rng::seed_from_u64(seed),
        }
    }

    /// Independent substream of the same seed; used so that, e.g., each
    /// axiom's sample set does not shift when another axiom changes its
    /// draw count.
    pub fn with_stream(seed: u64, stream: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(stream);
        Sampler { rng }
    }

    /// Nonnegative rational with numerator 0..=max_numer, denominator
    /// 1..=max_denom.
    pub fn rational(&mut self, max_numer: u32, max_denom: u32) -> BigRational {
        let p = self.rng.gen_range(0..=max_numer) as i64;
        let q = self.rng.gen_range(1..=max_denom) as i64;
        rat(p, q)
    }

    /// Strictly positive rational with numerator 1..=max_numer.
    pub fn positive_rational(&mut self, max_numer: u32, max_denom: u32) -> BigRational {
        let p = self.rng.gen_range(1..=max_numer) as i64;
        let q = self.rng.gen_range(1..=max_denom) as i64;
        rat(p, q)
    }

    /// Rational scale factor in [1/10, 10].
    pub fn scale_factor(&mut self) -> BigRational {
        let p = self.rng.gen_range(1..=10) as i64;
        let q = self.rng.gen_range(1..=10) as i64;
        rat(p, q)
    }

    /// Weight vector of length 1..=max_len with positive total (all-zero
    /// draws are rejected and resampled).
    pub fn weight_vector(&mut self, max_len: usize, max_numer: u32, max_denom: u32) -> WeightVector {
        loop {
            let len = self.rng.gen_range(1..=max_len);
            let entries: Vec<BigRational> = (0..len)
                .map(|_| self.rational(max_numer, max_denom))
                .collect();
            if entries.iter().any(|e| !e.is_zero()) {
                return WeightVector::new(entries).expect("sampled entries are nonnegative");
            }
        }
    }

    /// Grouping with 1..=max_groups groups of 1..=max_group_len weights.
    /// Individual groups may be all-zero; the total is kept positive.
    pub fn grouping(
        &mut self,
        max_groups: usize,
        max_group_len: usize,
        max_numer: u32,
        max_denom: u32,
    ) -> Grouping {
        loop {
            let n = self.rng.gen_range(1..=max_groups);
            let groups: Vec<WeightVector> = (0..n)
                .map(|_| {
                    let len = self.rng.gen_range(1..=max_group_len);
                    let entries: Vec<BigRational> =
                        (0..len).map(|_| self.rational(max_numer, max_denom)).collect();
                    WeightVector::new(entries).expect("sampled entries are nonnegative")
                })
                .collect();
            if groups.iter().any(|g| !g.total().is_zero()) {
                return Grouping::new(groups).expect("positive total");
            }
        }
    }

    /// Exactly normalized probability vector of the given length, returned
    /// both as floats and as the underlying exact rationals. Entries are
    /// strictly positive.
    pub fn prob_vector(
        &mut self,
        len: usize,
        max_numer: u32,
        max_denom: u32,
    ) -> (ProbVector, Vec<BigRational>) {
        let raw: Vec<BigRational> = (0..len)
            .map(|_| self.positive_rational(max_numer, max_denom))
            .collect();
        let total = raw.iter().fold(BigRational::zero(), |acc, r| acc + r);
        let normalized: Vec<BigRational> = raw.iter().map(|r| r / &total).collect();
        let p = ProbVector::from_rationals(&normalized).expect("exact normalization");
        (p, normalized)
    }

    /// Uniform random permutation of 0..n (Fisher–Yates).
    pub fn permutation(&mut self, n: usize) -> Vec<usize> {
        let mut perm: Vec<usize> = (0..n).collect();
        for i in (1..n).rev() {
            let j = self.rng.gen_range(0..=i);
            perm.swap(i, j);
        }
        perm
    }

    /// Zero-sum direction of Euclidean norm `delta` in n dimensions, for
    /// simplex-preserving perturbations.
    pub fn simplex_direction(&mut self, n: usize, delta: f64) -> Vec<f64> {
        loop {
            let mut v: Vec<f64> = (0..n).map(|_| self.rng.gen_range(-1.0..=1.0)).collect();
            let mean = v.iter().sum::<f64>() / n as f64;
            for x in &mut v {
                *x -= mean;
            }
            let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
            if norm > 1e-12 {
                for x in &mut v {
                    *x *= delta / norm;
                }
                return v;
            }
        }
    }

    pub fn gen_range_usize(&mut self, lo: usize, hi: usize) -> usize {
        self.rng.gen_range(lo..=hi)
    }
}
