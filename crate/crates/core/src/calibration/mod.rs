//! Repeated-sampling behaviour of the two non-collision probabilities
//! `1 − B(R | Y)` and `1 − C(R | Y)`: seeded Monte Carlo sweeps over σ,
//! exact counterparts, and PIT uniformity diagnostics.
//!
//! The truth is placed at θ = (δ, 0); by rotation invariance of the law of
//! ‖Y‖ this loses no generality.

mod exact;
mod pit;
mod rng;

pub use exact::{exact_row, QUAD_TOL};
pub use pit::{ks_uniform, pit_sample, PitSummary, KS_CRITICAL_1PCT, MIN_PIT_SAMPLES, PIT_BINS};
pub use rng::ReplicateStreams;

use rand::Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};
use crate::inference::{CollisionRadius, Distance, Observation};
use crate::specfun::gamma2;

/// σ values used when none are given: noise well below to well above R = 2.
pub const DEFAULT_SIGMA_GRID: [f64; 7] = [0.25, 0.5, 1.0, 2.0, 4.0, 8.0, 16.0];
pub const DEFAULT_THRESHOLD: f64 = 0.95;
pub const DEFAULT_REPS: usize = 100_000;

/// Ground truth for simulation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Scenario {
    delta_true: Distance,
    sigma: f64,
    radius: CollisionRadius,
}

impl Scenario {
    pub fn new(delta_true: f64, sigma: f64, radius: f64) -> Result<Self> {
        if !(sigma.is_finite() && sigma > 0.0) {
            return Err(domain("Scenario", format!("sigma must be finite and > 0, got {sigma}")));
        }
        Ok(Scenario {
            delta_true: Distance::new(delta_true)?,
            sigma,
            radius: CollisionRadius::new(radius)?,
        })
    }

    pub fn delta_true(&self) -> Distance {
        self.delta_true
    }

    pub fn sigma(&self) -> f64 {
        self.sigma
    }

    pub fn radius(&self) -> CollisionRadius {
        self.radius
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepConfig {
    pub sigma_grid: Vec<f64>,
    pub n_reps: usize,
    pub seed: u64,
    pub threshold: f64,
}

impl Default for SweepConfig {
    fn default() -> Self {
        SweepConfig {
            sigma_grid: DEFAULT_SIGMA_GRID.to_vec(),
            n_reps: DEFAULT_REPS,
            seed: 0,
            threshold: DEFAULT_THRESHOLD,
        }
    }
}

impl SweepConfig {
    pub fn validate(&self) -> Result<()> {
        if self.sigma_grid.is_empty() {
            return Err(Error::InvalidInput("sigma grid is empty".into()));
        }
        for (i, &s) in self.sigma_grid.iter().enumerate() {
            if !(s.is_finite() && s > 0.0) {
                return Err(Error::InvalidInput(format!("sigma grid entry {s} is not a positive number")));
            }
            if i > 0 && s <= self.sigma_grid[i - 1] {
                return Err(Error::InvalidInput("sigma grid must be strictly increasing".into()));
            }
        }
        if self.n_reps == 0 {
            return Err(Error::InvalidInput("n_reps must be at least 1".into()));
        }
        if !(self.threshold > 0.0 && self.threshold < 1.0) {
            return Err(Error::InvalidInput(format!(
                "threshold must be in (0, 1), got {}",
                self.threshold
            )));
        }
        Ok(())
    }
}

/// Exact repeated-sampling summaries for one σ.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ExactSummary {
    /// E[1 − B(R | Y)]
    pub mean_bayes: f64,
    /// E[1 − C(R | Y)]
    pub mean_cd: f64,
    /// P(1 − B(R | Y) > t)
    pub freq_bayes: f64,
    /// P(1 − C(R | Y) > t)
    pub freq_cd: f64,
}

/// Monte Carlo summaries for one σ with their exact twins.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CalibrationRow {
    pub sigma: f64,
    pub n_reps: usize,
    pub mean_noncol_bayes: f64,
    pub mean_noncol_cd: f64,
    pub freq_high_bayes: f64,
    pub freq_high_cd: f64,
    pub stderr_mean_bayes: f64,
    pub stderr_mean_cd: f64,
    pub stderr_freq_bayes: f64,
    pub stderr_freq_cd: f64,
    pub exact: ExactSummary,
}

impl CalibrationRow {
    /// Largest |MC − exact| in units of the estimator's standard error.
    ///
    /// Frequencies use the binomial standard error at the exact
    /// probability; means use the sample standard error. A zero standard
    /// error demands exact equality.
    pub fn max_z_score(&self) -> f64 {
        let n = self.n_reps as f64;
        let binom = |p: f64| (p * (1.0 - p) / n).sqrt();
        [
            (self.mean_noncol_bayes, self.exact.mean_bayes, self.stderr_mean_bayes),
            (self.mean_noncol_cd, self.exact.mean_cd, self.stderr_mean_cd),
            (self.freq_high_bayes, self.exact.freq_bayes, binom(self.exact.freq_bayes)),
            (self.freq_high_cd, self.exact.freq_cd, binom(self.exact.freq_cd)),
        ]
        .iter()
        .map(|&(mc, ex, se)| {
            let diff = (mc - ex).abs();
            if se > 0.0 {
                diff / se
            } else if diff == 0.0 {
                0.0
            } else {
                f64::INFINITY
            }
        })
        .fold(0.0, f64::max)
    }
}

/// One observation y ~ N((δ, 0), σ²I₂).
pub fn draw_observation<R: Rng + ?Sized>(scenario: &Scenario, rng: &mut R) -> Observation {
    draw_at(scenario.delta_true.get(), 0.0, scenario.sigma, rng)
}

fn draw_at<R: Rng + ?Sized>(theta1: f64, theta2: f64, sigma: f64, rng: &mut R) -> Observation {
    let z1: f64 = rng.sample(StandardNormal);
    let z2: f64 = rng.sample(StandardNormal);
    Observation::from_pair(theta1 + sigma * z1, theta2 + sigma * z2, sigma)
        .expect("finite draws from a valid scenario")
}

/// Non-collision probabilities (1 − B(R|y), 1 − C(R|y)) for one observation.
fn noncollision_pair(obs: &Observation, radius: CollisionRadius) -> Result<(f64, f64)> {
    let norm_sq = (obs.norm() / obs.sigma()).powi(2);
    let x_r = (radius.get() / obs.sigma()).powi(2);
    Ok((1.0 - gamma2(x_r, norm_sq)?, gamma2(norm_sq, x_r)?))
}

/// Monte Carlo and exact summaries for every σ in the configured grid.
///
/// Replicate `i` at grid index `j` uses stream `(seed, lane = j, i)`; the
/// per-replicate values are reduced sequentially in index order, so the
/// output is bit-identical for any number of worker threads.
pub fn run_sweep(
    delta_true: Distance,
    radius: CollisionRadius,
    config: &SweepConfig,
) -> Result<Vec<CalibrationRow>> {
    config.validate()?;
    let streams = ReplicateStreams::new(config.seed, rng::SWEEP_DOMAIN);
    config
        .sigma_grid
        .iter()
        .enumerate()
        .map(|(lane, &sigma)| {
            let scenario = Scenario::new(delta_true.get(), sigma, radius.get())?;
            let values = (0..config.n_reps as u64)
                .into_par_iter()
                .map(|i| {
                    let obs = draw_observation(&scenario, &mut streams.stream(lane as u64, i));
                    noncollision_pair(&obs, radius)
                })
                .collect::<Result<Vec<_>>>()?;
            summarize(&scenario, &values, config)
        })
        .collect()
}

/// Same as [`run_sweep`] but with truth at angle `angle` instead of on the
/// first axis.
#[cfg(test)]
fn run_rotated(scenario: &Scenario, angle: f64, n: usize, seed: u64) -> Result<CalibrationRow> {
    let streams = ReplicateStreams::new(seed, rng::SWEEP_DOMAIN);
    let (t1, t2) = (scenario.delta_true.get() * angle.cos(), scenario.delta_true.get() * angle.sin());
    let values = (0..n as u64)
        .map(|i| {
            let obs = draw_at(t1, t2, scenario.sigma, &mut streams.stream(99, i));
            noncollision_pair(&obs, scenario.radius)
        })
        .collect::<Result<Vec<_>>>()?;
    let config = SweepConfig {
        n_reps: n,
        ..SweepConfig::default()
    };
    summarize(scenario, &values, &config)
}

fn summarize(scenario: &Scenario, values: &[(f64, f64)], config: &SweepConfig) -> Result<CalibrationRow> {
    let n = values.len() as f64;
    let t = config.threshold;
    let (mut sb, mut sc, mut hb, mut hc) = (0.0, 0.0, 0usize, 0usize);
    for &(b, c) in values {
        sb += b;
        sc += c;
        hb += usize::from(b > t);
        hc += usize::from(c > t);
    }
    let (mean_b, mean_c) = (sb / n, sc / n);
    let (mut vb, mut vc) = (0.0, 0.0);
    for &(b, c) in values {
        vb += (b - mean_b).powi(2);
        vc += (c - mean_c).powi(2);
    }
    let sample_se = |ss: f64| {
        if values.len() > 1 {
            (ss / (n - 1.0) / n).sqrt()
        } else {
            0.0
        }
    };
    let (fb, fc) = (hb as f64 / n, hc as f64 / n);
    Ok(CalibrationRow {
        sigma: scenario.sigma,
        n_reps: values.len(),
        mean_noncol_bayes: mean_b,
        mean_noncol_cd: mean_c,
        freq_high_bayes: fb,
        freq_high_cd: fc,
        stderr_mean_bayes: sample_se(vb),
        stderr_mean_cd: sample_se(vc),
        stderr_freq_bayes: (fb * (1.0 - fb) / n).sqrt(),
        stderr_freq_cd: (fc * (1.0 - fc) / n).sqrt(),
        exact: exact_row(scenario, t)?,
    })
}
