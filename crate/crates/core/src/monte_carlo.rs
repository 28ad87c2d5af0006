//! Permutation-sampling baseline.
//!
//! Each sample is a uniform join order. Walking it while carrying
//! `prod (1 - p_j)` over the players already in gives every marginal
//! contribution in O(1), so one sample costs O(n).

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::game::{BernoulliGame, Method, ShapleyVector};
use crate::rng::CounterRng;

pub const DEFAULT_CHUNK: usize = 1024;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct McConfig {
    pub samples: usize,
    pub seed: u64,
    /// Samples per parallel chunk; `None` uses [`DEFAULT_CHUNK`].
    pub chunk: Option<usize>,
}

impl McConfig {
    pub fn new(samples: usize, seed: u64) -> Self {
        Self {
            samples,
            seed,
            chunk: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct McEstimate {
    pub values: Vec<f64>,
    pub stderr: Vec<f64>,
    pub samples_used: usize,
}

impl McEstimate {
    pub fn into_shapley_vector(self) -> ShapleyVector {
        let mut v = ShapleyVector::new(self.values, Method::MonteCarlo);
        v.meta.stderr = Some(self.stderr);
        v
    }
}

/// Marginal contributions of every player along one join order.
pub fn permutation_marginals(probs: &[f64], order: &[usize]) -> Vec<f64> {
    let mut out = vec![0.0; probs.len()];
    let mut miss = 1.0;
    for &i in order {
        out[i] = probs[i] * miss;
        miss *= 1.0 - probs[i];
    }
    out
}

/// Fisher–Yates shuffle driven by sample `k`'s own stream.
pub fn sample_permutation(n: usize, seed: u64, k: u64) -> Vec<usize> {
    let mut rng = CounterRng::new(seed, k);
    let mut order: Vec<usize> = (0..n).collect();
    for j in (1..n).rev() {
        let r = rng.below(j as u64 + 1) as usize;
        order.swap(j, r);
    }
    order
}

#[derive(Debug, Clone)]
struct Moments {
    count: f64,
    mean: Vec<f64>,
    m2: Vec<f64>,
}

impl Moments {
    fn new(n: usize) -> Self {
        Self {
            count: 0.0,
            mean: vec![0.0; n],
            m2: vec![0.0; n],
        }
    }

    fn push(&mut self, x: &[f64]) {
        self.count += 1.0;
        for ((mean, m2), &xi) in self.mean.iter_mut().zip(&mut self.m2).zip(x) {
            let d = xi - *mean;
            *mean += d / self.count;
            *m2 += d * (xi - *mean);
        }
    }

    fn merge(mut self, other: &Moments) -> Self {
        if other.count == 0.0 {
            return self;
        }
        let total = self.count + other.count;
        for j in 0..self.mean.len() {
            let d = other.mean[j] - self.mean[j];
            self.mean[j] += d * other.count / total;
            self.m2[j] += other.m2[j] + d * d * self.count * other.count / total;
        }
        self.count = total;
        self
    }
}

pub fn shapley_mc(game: &BernoulliGame, cfg: &McConfig) -> Result<McEstimate> {
    if cfg.samples == 0 {
        return Err(Error::ZeroSamples);
    }
    let chunk = cfg.chunk.unwrap_or(DEFAULT_CHUNK).max(1);
    let probs = game.probs();
    let n = probs.len();
    let starts: Vec<usize> = (0..cfg.samples).step_by(chunk).collect();
    let partial: Vec<Moments> = starts
        .par_iter()
        .map(|&start| {
            let mut m = Moments::new(n);
            for k in start..(start + chunk).min(cfg.samples) {
                let order = sample_permutation(n, cfg.seed, k as u64);
                m.push(&permutation_marginals(probs, &order));
            }
            m
        })
        .collect();
    let total = partial.iter().fold(Moments::new(n), |acc, m| acc.merge(m));
    let k = total.count;
    let stderr = total
        .m2
        .iter()
        .map(|&m2| {
            if k > 1.0 {
                (m2.max(0.0) / (k - 1.0)).sqrt() / k.sqrt()
            } else {
                0.0
            }
        })
        .collect();
    Ok(McEstimate {
        values: total.mean,
        stderr,
        samples_used: cfg.samples,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConvergenceCell {
    pub seed: u64,
    pub samples: usize,
    pub max_abs_error: f64,
}

/// Max absolute error against `reference` for every (seed, sample count).
pub fn mc_convergence_curve(
    game: &BernoulliGame,
    seeds: &[u64],
    sample_grid: &[usize],
    reference: &[f64],
) -> Result<Vec<ConvergenceCell>> {
    if seeds.is_empty() || sample_grid.is_empty() {
        return Err(Error::Domain("convergence grid must be nonempty".into()));
    }
    if reference.len() != game.n() {
        return Err(Error::Domain(
            "reference length differs from player count".into(),
        ));
    }
    let mut cells = Vec::with_capacity(seeds.len() * sample_grid.len());
    for &seed in seeds {
        for &samples in sample_grid {
            let est = shapley_mc(game, &McConfig::new(samples, seed))?;
            let max_abs_error = est
                .values
                .iter()
                .zip(reference)
                .map(|(a, b)| (a - b).abs())
                .fold(0.0, f64::max);
            cells.push(ConvergenceCell {
                seed,
                samples,
                max_abs_error,
            });
        }
    }
    Ok(cells)
}
