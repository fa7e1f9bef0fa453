//! Bayesian posterior and confidence distribution for the distance δ = ‖θ‖
//! between two objects, from one observed displacement y ~ N(θ, σ²I₂).
//!
//! With flat priors the posterior cumulative is
//! `B(δ | y) = Γ₂(δ²/σ², ‖y‖²/σ²)`, while the sampling distribution of the
//! sufficient statistic ‖y‖ gives the confidence distribution
//! `C(δ | y) = 1 − Γ₂(‖y‖²/σ², δ²/σ²)`. Both depend on the data only through
//! ‖y‖/σ, and everything here is computed in units of σ.

use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};
use crate::specfun::{self, expand_upper, invert_monotone, Probability, DEFAULT_TOL};

/// A single observed displacement with known noise scale.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Observation {
    y1: f64,
    y2: f64,
    sigma: f64,
}

impl Observation {
    pub fn from_pair(y1: f64, y2: f64, sigma: f64) -> Result<Self> {
        if !y1.is_finite() || !y2.is_finite() {
            return Err(domain("Observation", format!("y must be finite, got ({y1}, {y2})")));
        }
        check_sigma(sigma)?;
        Ok(Observation { y1, y2, sigma })
    }

    /// Builds an observation from ‖y‖ alone, which is sufficient for δ.
    pub fn from_norm(norm: f64, sigma: f64) -> Result<Self> {
        if !norm.is_finite() || norm < 0.0 {
            return Err(domain("Observation", format!("norm must be finite and >= 0, got {norm}")));
        }
        check_sigma(sigma)?;
        Ok(Observation {
            y1: norm,
            y2: 0.0,
            sigma,
        })
    }

    pub fn y1(&self) -> f64 {
        self.y1
    }

    pub fn y2(&self) -> f64 {
        self.y2
    }

    pub fn sigma(&self) -> f64 {
        self.sigma
    }

    pub fn norm(&self) -> f64 {
        self.y1.hypot(self.y2)
    }

    /// ‖y‖²/σ².
    fn scaled_norm_sq(&self) -> f64 {
        let r = self.norm() / self.sigma;
        r * r
    }
}

fn check_sigma(sigma: f64) -> Result<()> {
    if sigma.is_finite() && sigma > 0.0 {
        Ok(())
    } else {
        Err(domain("Observation", format!("sigma must be finite and > 0, got {sigma}")))
    }
}

/// A nonnegative distance.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Distance(f64);

impl Distance {
    pub const ZERO: Distance = Distance(0.0);

    pub fn new(delta: f64) -> Result<Self> {
        if delta.is_finite() && delta >= 0.0 {
            Ok(Distance(delta))
        } else {
            Err(domain("Distance", format!("must be finite and >= 0, got {delta}")))
        }
    }

    pub fn get(self) -> f64 {
        self.0
    }
}

/// Combined hard-body radius below which the objects collide.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize, Deserialize)]
#[serde(transparent)]
pub struct CollisionRadius(f64);

impl CollisionRadius {
    pub fn new(radius: f64) -> Result<Self> {
        if radius.is_finite() && radius > 0.0 {
            Ok(CollisionRadius(radius))
        } else {
            Err(domain("CollisionRadius", format!("must be finite and > 0, got {radius}")))
        }
    }

    pub fn get(self) -> f64 {
        self.0
    }
}

/// Which distribution over δ to summarise.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Bayes,
    Cd,
}

impl Method {
    pub fn cdf(self, obs: &Observation, delta: Distance) -> Result<Probability> {
        match self {
            Method::Bayes => bayes_cdf(obs, delta),
            Method::Cd => cd_cdf(obs, delta),
        }
    }

    fn scaled_cdf(self, norm_sq: f64, u: f64) -> Result<f64> {
        let d2 = u * u;
        match self {
            Method::Bayes => specfun::gamma2(d2, norm_sq),
            Method::Cd => Ok(1.0 - specfun::gamma2(norm_sq, d2)?),
        }
    }
}

/// A point estimate that may sit on the δ = 0 boundary.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Estimate {
    pub delta: Distance,
    /// The CDF already exceeds the requested level at δ = 0.
    pub at_boundary: bool,
}

/// Equal-tailed interval read off a confidence or credibility curve.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LevelInterval {
    pub lo: Distance,
    pub hi: Distance,
    /// The lower endpoint was clipped to 0.
    pub lo_clipped: bool,
}

/// Posterior cumulative B(δ | y) under flat priors on θ.
pub fn bayes_cdf(obs: &Observation, delta: Distance) -> Result<Probability> {
    let u = delta.get() / obs.sigma;
    specfun::gamma2(u * u, obs.scaled_norm_sq()).map(Probability::from_checked)
}

/// Confidence distribution C(δ | y). Note C(0 | y) = e^{−‖y‖²/2σ²} > 0.
///
/// C − B is a nonnegative Marcum term that can fall below the rounding
/// error of either CDF, so the result is floored at B(δ | y) to keep the
/// dominance C ≥ B exact in floating point.
pub fn cd_cdf(obs: &Observation, delta: Distance) -> Result<Probability> {
    let u = delta.get() / obs.sigma;
    let c = 1.0 - specfun::gamma2(obs.scaled_norm_sq(), u * u)?;
    let b = bayes_cdf(obs, delta)?.get();
    Ok(Probability::from_checked(c.max(b)))
}

/// cc(δ | y) = |1 − 2C(δ | y)|.
pub fn confidence_curve(obs: &Observation, delta: Distance) -> Result<f64> {
    Ok((1.0 - 2.0 * cd_cdf(obs, delta)?.get()).abs())
}

/// |1 − 2B(δ | y)|.
pub fn credibility_curve(obs: &Observation, delta: Distance) -> Result<f64> {
    Ok((1.0 - 2.0 * bayes_cdf(obs, delta)?.get()).abs())
}

/// The δ at which the method's CDF reaches `p`, clipped at 0 when the CDF
/// already exceeds `p` there.
pub fn quantile(obs: &Observation, method: Method, p: f64) -> Result<Estimate> {
    if !(p > 0.0 && p < 1.0) {
        return Err(domain("quantile", format!("level must be in (0, 1), got {p}")));
    }
    let norm_sq = obs.scaled_norm_sq();
    let cdf = |u: f64| method.scaled_cdf(norm_sq, u);
    if cdf(0.0)? >= p {
        return Ok(Estimate {
            delta: Distance::ZERO,
            at_boundary: true,
        });
    }
    // bracket [0, ‖y‖/σ + 10], doubled until the CDF passes p
    let hi = expand_upper(cdf, p, 0.0, norm_sq.sqrt() + 10.0)?;
    let u = invert_monotone(cdf, p, 0.0, hi, DEFAULT_TOL)?;
    Ok(Estimate {
        delta: Distance::new(u * obs.sigma)?,
        at_boundary: false,
    })
}

/// Median of the posterior (`Bayes`) or confidence distribution (`Cd`).
pub fn median(obs: &Observation, method: Method) -> Result<Estimate> {
    quantile(obs, method, 0.5)
}

/// `{δ ≥ 0 : curve(δ) ≤ level}` as an equal-tailed interval.
pub fn level_interval(obs: &Observation, method: Method, level: f64) -> Result<LevelInterval> {
    if !(level > 0.0 && level < 1.0) {
        return Err(domain("level_interval", format!("level must be in (0, 1), got {level}")));
    }
    let lo = quantile(obs, method, 0.5 * (1.0 - level))?;
    let hi = quantile(obs, method, 0.5 * (1.0 + level))?;
    Ok(LevelInterval {
        lo: lo.delta,
        hi: hi.delta,
        lo_clipped: lo.at_boundary,
    })
}

/// Confidence in collision, C(R | y).
pub fn collision_confidence(obs: &Observation, radius: CollisionRadius) -> Result<Probability> {
    cd_cdf(obs, Distance(radius.get()))
}

/// p-value for the null hypothesis of no collision, 1 − C(R | y).
pub fn noncollision_pvalue(obs: &Observation, radius: CollisionRadius) -> Result<Probability> {
    collision_confidence(obs, radius).map(Probability::complement)
}

/// B, C and both curves evaluated along a grid of distances.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CurveTable {
    pub grid: Vec<f64>,
    pub b: Vec<f64>,
    pub c: Vec<f64>,
    pub cc: Vec<f64>,
    pub cred: Vec<f64>,
}

/// One row of a [`CurveTable`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CurvePoint {
    pub delta: f64,
    #[serde(rename = "B")]
    pub b: f64,
    #[serde(rename = "C")]
    pub c: f64,
    pub cc: f64,
    pub cred: f64,
}

impl CurveTable {
    pub fn len(&self) -> usize {
        self.grid.len()
    }

    pub fn is_empty(&self) -> bool {
        self.grid.is_empty()
    }

    pub fn rows(&self) -> impl Iterator<Item = CurvePoint> + '_ {
        (0..self.len()).map(move |i| CurvePoint {
            delta: self.grid[i],
            b: self.b[i],
            c: self.c[i],
            cc: self.cc[i],
            cred: self.cred[i],
        })
    }
}

pub fn tabulate_curves(obs: &Observation, grid: &[f64]) -> Result<CurveTable> {
    validate_grid(grid)?;
    let n = grid.len();
    let mut table = CurveTable {
        grid: grid.to_vec(),
        b: Vec::with_capacity(n),
        c: Vec::with_capacity(n),
        cc: Vec::with_capacity(n),
        cred: Vec::with_capacity(n),
    };
    for &d in grid {
        let delta = Distance(d);
        let b = bayes_cdf(obs, delta)?.get();
        let c = cd_cdf(obs, delta)?.get();
        table.b.push(b);
        table.c.push(c);
        table.cc.push((1.0 - 2.0 * c).abs());
        table.cred.push((1.0 - 2.0 * b).abs());
    }
    Ok(table)
}

/// Evenly spaced grid of `n` points from `lo` to `hi` inclusive.
pub fn linear_grid(lo: f64, hi: f64, n: usize) -> Result<Vec<f64>> {
    if n == 0 || !lo.is_finite() || !hi.is_finite() || lo < 0.0 || hi < lo || (n > 1 && hi == lo) {
        return Err(Error::InvalidInput(format!(
            "grid {lo}:{hi}:{n} must satisfy 0 <= lo < hi and n >= 1"
        )));
    }
    if n == 1 {
        return Ok(vec![lo]);
    }
    let step = (hi - lo) / (n - 1) as f64;
    let mut g: Vec<f64> = (0..n).map(|i| lo + step * i as f64).collect();
    g[n - 1] = hi;
    Ok(g)
}

fn validate_grid(grid: &[f64]) -> Result<()> {
    for (i, &d) in grid.iter().enumerate() {
        if !d.is_finite() || d < 0.0 {
            return Err(Error::InvalidInput(format!("grid[{i}] = {d} is not a finite nonnegative distance")));
        }
        if i > 0 && d <= grid[i - 1] {
            return Err(Error::InvalidInput(format!("grid not strictly increasing at index {i}")));
        }
    }
    Ok(())
}
