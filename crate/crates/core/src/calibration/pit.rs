//! Probability-integral-transform diagnostics for the non-collision p-value.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::rng::{ReplicateStreams, PIT_DOMAIN};
use super::{draw_observation, Scenario};
use crate::error::{Error, Result};
use crate::inference::noncollision_pvalue;

pub const PIT_BINS: usize = 20;
pub const MIN_PIT_SAMPLES: usize = 100;

/// Asymptotic 1% critical constant of the one-sample KS statistic.
pub const KS_CRITICAL_1PCT: f64 = 1.63;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PitSummary {
    pub n: usize,
    pub ks_stat: f64,
    pub mean: f64,
    /// Counts over [0, 1] in `PIT_BINS` equal-width bins.
    pub histogram: Vec<u64>,
}

impl PitSummary {
    pub fn critical_value(&self) -> f64 {
        KS_CRITICAL_1PCT / (self.n as f64).sqrt()
    }

    /// KS test against uniformity does not reject at the 1% level.
    pub fn passes(&self) -> bool {
        self.ks_stat < self.critical_value()
    }
}

/// Draws `n` observations from `scenario` and summarises U = 1 − C(R | Y).
pub fn pit_sample(scenario: &Scenario, n: usize, seed: u64) -> Result<PitSummary> {
    if n < MIN_PIT_SAMPLES {
        return Err(Error::InvalidInput(format!(
            "PIT needs at least {MIN_PIT_SAMPLES} samples, got {n}"
        )));
    }
    let streams = ReplicateStreams::new(seed, PIT_DOMAIN);
    let radius = scenario.radius();
    let mut u = (0..n as u64)
        .into_par_iter()
        .map(|i| {
            let obs = draw_observation(scenario, &mut streams.stream(0, i));
            noncollision_pvalue(&obs, radius).map(|p| p.get())
        })
        .collect::<Result<Vec<f64>>>()?;

    let mean = u.iter().sum::<f64>() / n as f64;
    let mut histogram = vec![0u64; PIT_BINS];
    for &v in &u {
        histogram[((v * PIT_BINS as f64) as usize).min(PIT_BINS - 1)] += 1;
    }
    let ks_stat = ks_uniform(&mut u);
    Ok(PitSummary {
        n,
        ks_stat,
        mean,
        histogram,
    })
}

/// One-sample Kolmogorov–Smirnov distance to the uniform law on [0, 1].
/// Sorts `values` in place.
pub fn ks_uniform(values: &mut [f64]) -> f64 {
    values.sort_by(f64::total_cmp);
    let n = values.len() as f64;
    values.iter().enumerate().fold(0.0f64, |d, (i, &v)| {
        let above = (i + 1) as f64 / n - v;
        let below = v - i as f64 / n;
        d.max(above).max(below)
    })
}
