//! Neutral Wright-Fisher Monte Carlo.
//!
//! Each replicate evolves the focal-allele count by binomial resampling,
//! `k_{g+1} ~ Binomial(N, k_g / N)`, until it hits 0 or N or the generation
//! limit. Per-generation statistics are accumulated as exact integer sums,
//! so the result does not depend on how replicates are scheduled across
//! threads.
//!
//! # Time calibration
//!
//! Expected heterozygosity `E[x(1−x)]` shrinks by `(1 − 1/N)` per
//! generation. In the diffusion it decays like the slowest mode, `e^{−2t}`.
//! Matching `(1 − 1/N)^g ≈ e^{−g/N}` with `e^{−2t}` gives `t = g / (2N)`
//! ([`time_map`]).

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Binomial, Distribution};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const MIN_POPULATION: u64 = 10;
pub const MIN_REPLICATES: usize = 10_000;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WfConfig {
    pub population_size: u64,
    pub x0: f64,
    pub generations: usize,
    pub replicates: usize,
    pub seed: u64,
}

impl WfConfig {
    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::WfConfig(msg));
        if self.population_size < MIN_POPULATION {
            return bad(format!(
                "population_size must be at least {MIN_POPULATION}, got {}",
                self.population_size
            ));
        }
        if self.replicates < MIN_REPLICATES {
            return bad(format!("replicates must be at least {MIN_REPLICATES}, got {}", self.replicates));
        }
        if !(self.x0 > 0.0 && self.x0 < 1.0) {
            return bad(format!("x0 must lie in (0, 1), got {}", self.x0));
        }
        let k0 = self.initial_count();
        if k0 == 0 || k0 >= self.population_size {
            return bad(format!(
                "initial count round(N·x0) = {k0} must lie strictly between 0 and {}",
                self.population_size
            ));
        }
        Ok(())
    }

    /// `round(N · x0)`.
    pub fn initial_count(&self) -> u64 {
        (self.population_size as f64 * self.x0).round() as u64
    }

    /// Frequency actually simulated, `round(N · x0) / N`.
    pub fn initial_frequency(&self) -> f64 {
        self.initial_count() as f64 / self.population_size as f64
    }
}

/// Diffusion time of generation `g` in a population of size `n`: `g / (2n)`.
pub fn time_map(generation: usize, population_size: u64) -> f64 {
    generation as f64 / (2.0 * population_size as f64)
}

/// Nearest generation to diffusion time `t`.
pub fn generation_for_time(t: f64, population_size: u64) -> usize {
    (2.0 * population_size as f64 * t).round() as usize
}

/// Per-generation statistics over replicates, indexed by generation `0..=G`.
#[derive(Debug, Clone, PartialEq)]
pub struct WfTrajectoryStats {
    pub population_size: u64,
    pub replicates: usize,
    pub fixed_fraction: Vec<f64>,
    pub extinct_fraction: Vec<f64>,
    pub mean_frequency: Vec<f64>,
    /// Standard error of `mean_frequency`.
    pub frequency_stderr: Vec<f64>,
    /// Mean of `x(1−x)`.
    pub mean_heterozygosity: Vec<f64>,
    /// Standard error of `mean_heterozygosity`.
    pub heterozygosity_stderr: Vec<f64>,
    pub diffusion_times: Vec<f64>,
}

impl WfTrajectoryStats {
    pub fn generations(&self) -> usize {
        self.fixed_fraction.len() - 1
    }

    /// Binomial standard error of a fraction `p` over all replicates.
    pub fn fraction_stderr(&self, p: f64) -> f64 {
        (p * (1.0 - p) / self.replicates as f64).sqrt()
    }
}

#[derive(Debug, Clone)]
struct Accumulator {
    fixed_at: Vec<u64>,
    extinct_at: Vec<u64>,
    // sums over replicates still segregating at each generation
    k: Vec<u64>,
    k2: Vec<u128>,
    het: Vec<u64>,
    het2: Vec<u128>,
}

impl Accumulator {
    fn new(generations: usize) -> Self {
        let len = generations + 1;
        Self {
            fixed_at: vec![0; len],
            extinct_at: vec![0; len],
            k: vec![0; len],
            k2: vec![0; len],
            het: vec![0; len],
            het2: vec![0; len],
        }
    }

    fn merge(mut self, other: Self) -> Self {
        fn add<T: Copy + std::ops::AddAssign>(a: &mut [T], b: &[T]) {
            a.iter_mut().zip(b).for_each(|(x, &y)| *x += y);
        }
        add(&mut self.fixed_at, &other.fixed_at);
        add(&mut self.extinct_at, &other.extinct_at);
        add(&mut self.k, &other.k);
        add(&mut self.k2, &other.k2);
        add(&mut self.het, &other.het);
        add(&mut self.het2, &other.het2);
        self
    }
}

fn run_replicate(cfg: &WfConfig, index: u64, acc: &mut Accumulator) {
    let n = cfg.population_size;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    rng.set_stream(index);
    let mut k = cfg.initial_count();
    for g in 0..=cfg.generations {
        if k == 0 {
            acc.extinct_at[g] += 1;
            return;
        }
        if k == n {
            acc.fixed_at[g] += 1;
            return;
        }
        let h = k * (n - k);
        acc.k[g] += k;
        acc.k2[g] += (k as u128) * (k as u128);
        acc.het[g] += h;
        acc.het2[g] += (h as u128) * (h as u128);
        if g < cfg.generations {
            let p = k as f64 / n as f64;
            k = Binomial::new(n, p).expect("0 < p < 1").sample(&mut rng);
        }
    }
}

/// Runs `cfg.replicates` independent trajectories for `cfg.generations`
/// generations. Replicate `i` draws from ChaCha stream `i` under
/// `cfg.seed`, so the output is a pure function of `cfg`.
pub fn simulate(cfg: &WfConfig) -> Result<WfTrajectoryStats> {
    cfg.validate()?;
    let acc = (0..cfg.replicates as u64)
        .into_par_iter()
        .fold(
            || Accumulator::new(cfg.generations),
            |mut acc, i| {
                run_replicate(cfg, i, &mut acc);
                acc
            },
        )
        .reduce(|| Accumulator::new(cfg.generations), Accumulator::merge);
    Ok(summarize(cfg, &acc))
}

fn summarize(cfg: &WfConfig, acc: &Accumulator) -> WfTrajectoryStats {
    let n = cfg.population_size;
    let nf = n as f64;
    let r = cfg.replicates as f64;
    let len = cfg.generations + 1;
    let mut stats = WfTrajectoryStats {
        population_size: n,
        replicates: cfg.replicates,
        fixed_fraction: Vec::with_capacity(len),
        extinct_fraction: Vec::with_capacity(len),
        mean_frequency: Vec::with_capacity(len),
        frequency_stderr: Vec::with_capacity(len),
        mean_heterozygosity: Vec::with_capacity(len),
        heterozygosity_stderr: Vec::with_capacity(len),
        diffusion_times: (0..len).map(|g| time_map(g, n)).collect(),
    };
    let (mut fixed, mut extinct) = (0u64, 0u64);
    for g in 0..len {
        fixed += acc.fixed_at[g];
        extinct += acc.extinct_at[g];
        stats.fixed_fraction.push(fixed as f64 / r);
        stats.extinct_fraction.push(extinct as f64 / r);

        // fixed replicates sit at k = N
        let sum_k = acc.k[g] as f64 + fixed as f64 * nf;
        let sum_k2 = acc.k2[g] as f64 + fixed as f64 * nf * nf;
        let (mean, se) = mean_and_stderr(sum_k, sum_k2, r);
        stats.mean_frequency.push(mean / nf);
        stats.frequency_stderr.push(se / nf);

        let (mean, se) = mean_and_stderr(acc.het[g] as f64, acc.het2[g] as f64, r);
        stats.mean_heterozygosity.push(mean / (nf * nf));
        stats.heterozygosity_stderr.push(se / (nf * nf));
    }
    stats
}

fn mean_and_stderr(sum: f64, sum_sq: f64, count: f64) -> (f64, f64) {
    let mean = sum / count;
    let var = ((sum_sq - sum * mean) / (count - 1.0)).max(0.0);
    (mean, (var / count).sqrt())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg(x0: f64) -> WfConfig {
        WfConfig { population_size: 50, x0, generations: 200, replicates: 10_000, seed: 7 }
    }

    #[test]
    fn validation() {
        assert!(cfg(0.3).validate().is_ok());
        assert!(WfConfig { population_size: 5, ..cfg(0.3) }.validate().is_err());
        assert!(WfConfig { replicates: 10, ..cfg(0.3) }.validate().is_err());
        assert!(cfg(0.0).validate().is_err());
        // round(50 · 0.005) = 0
        assert!(cfg(0.005).validate().is_err());
        assert!(cfg(0.995).validate().is_err());
    }

    #[test]
    fn time_map_examples() {
        assert_eq!(time_map(0, 200), 0.0);
        assert_eq!(time_map(400, 200), 1.0);
        assert_eq!(generation_for_time(1.5, 200), 600);
    }

    #[test]
    fn deterministic_and_consistent() {
        let a = simulate(&cfg(0.3)).unwrap();
        let b = simulate(&cfg(0.3)).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.generations(), 200);
        assert_eq!(a.fixed_fraction[0], 0.0);
        assert!((a.mean_frequency[0] - 0.3).abs() < 1e-15);
        assert_eq!(a.frequency_stderr[0], 0.0);
        for g in 1..=200 {
            assert!(a.fixed_fraction[g] >= a.fixed_fraction[g - 1]);
            assert!(a.extinct_fraction[g] >= a.extinct_fraction[g - 1]);
            assert!(a.fixed_fraction[g] + a.extinct_fraction[g] <= 1.0);
        }
        let other = simulate(&WfConfig { seed: 8, ..cfg(0.3) }).unwrap();
        assert_ne!(a, other);
    }
}
