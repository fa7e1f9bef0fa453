//! Exact frequentist summaries through the law of Z = ‖Y‖²/σ², a
//! non-central χ²₂ with noncentrality δ²/σ².

use super::{ExactSummary, Scenario};
use crate::error::{domain, Result};
use crate::quadrature::integrate;
use crate::specfun::{expand_upper, gamma2, invert_monotone, noncentral_chisq2_pdf, DEFAULT_TOL};

/// Absolute tolerance of the expectation integrals.
pub const QUAD_TOL: f64 = 1e-9;

/// Upper integration limit is the (1 - UPPER_MASS) quantile of Z.
const UPPER_MASS: f64 = 1e-12;

/// Exact means and exceedance frequencies of the two non-collision
/// probabilities `1 - B(R | Y)` and `1 - C(R | Y)`.
pub fn exact_row(scenario: &Scenario, threshold: f64) -> Result<ExactSummary> {
    if !(threshold > 0.0 && threshold < 1.0) {
        return Err(domain("exact_row", format!("threshold must be in (0, 1), got {threshold}")));
    }
    let sigma = scenario.sigma();
    let nu_true = (scenario.delta_true().get() / sigma).powi(2);
    let x_r = (scenario.radius().get() / sigma).powi(2);

    let z_max = {
        let cdf = |z: f64| gamma2(z, nu_true);
        let target = 1.0 - UPPER_MASS;
        let hi = expand_upper(cdf, target, 0.0, nu_true + 2.0 + 10.0 * (nu_true + 1.0).sqrt())?;
        invert_monotone(cdf, target, 0.0, hi, 1e-6)?
    };

    let mean_bayes = integrate(
        |z| Ok((1.0 - gamma2(x_r, z)?) * noncentral_chisq2_pdf(z, nu_true)),
        0.0,
        z_max,
        QUAD_TOL,
    )?
    .value;
    let mean_cd = integrate(
        |z| Ok(gamma2(z, x_r)? * noncentral_chisq2_pdf(z, nu_true)),
        0.0,
        z_max,
        QUAD_TOL,
    )?
    .value;

    // 1 - B(R|Y) > t  ⇔  Γ₂(x_R, Z) < 1 - t  ⇔  Z > ν*, Γ₂(x_R, ·) decreasing.
    let freq_bayes = {
        let level = 1.0 - threshold;
        if gamma2(x_r, 0.0)? < level {
            1.0
        } else {
            let neg = |nu: f64| gamma2(x_r, nu).map(|g| -g);
            let hi = expand_upper(neg, -level, 0.0, x_r + 10.0)?;
            let nu_star = invert_monotone(neg, -level, 0.0, hi, DEFAULT_TOL)?;
            1.0 - gamma2(nu_star, nu_true)?
        }
    };

    // 1 - C(R|Y) = Γ₂(Z, x_R) > t  ⇔  Z > z*, Γ₂(·, x_R) increasing from 0 to 1.
    let freq_cd = {
        let cdf = |z: f64| gamma2(z, x_r);
        let hi = expand_upper(cdf, threshold, 0.0, x_r + 10.0)?;
        let z_star = invert_monotone(cdf, threshold, 0.0, hi, DEFAULT_TOL)?;
        1.0 - gamma2(z_star, nu_true)?
    };

    Ok(ExactSummary {
        mean_bayes: mean_bayes.clamp(0.0, 1.0),
        mean_cd: mean_cd.clamp(0.0, 1.0),
        freq_bayes,
        freq_cd,
    })
}
