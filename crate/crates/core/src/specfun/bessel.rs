//! Modified Bessel function of the first kind, order zero.

use crate::error::{domain, Result};

/// Above this argument the asymptotic expansion is used for the scaled form.
const ASYMPTOTIC_FROM: f64 = 30.0;

/// `I₀(x)` for finite `x ≥ 0`.
///
/// Overflows to `+∞` for `x` beyond roughly 713; use [`bessel_i0_scaled`]
/// when only ratios or products with `e^{-x}` are needed.
pub fn bessel_i0(x: f64) -> Result<f64> {
    check(x, "bessel_i0")?;
    if x <= ASYMPTOTIC_FROM {
        Ok(power_series(x))
    } else {
        Ok(asymptotic_scaled(x) * x.exp())
    }
}

/// Exponentially scaled `e^{-x} I₀(x)` for finite `x ≥ 0`.
pub fn bessel_i0_scaled(x: f64) -> Result<f64> {
    check(x, "bessel_i0_scaled")?;
    Ok(i0_scaled_unchecked(x))
}

pub(crate) fn i0_scaled_unchecked(x: f64) -> f64 {
    if x <= ASYMPTOTIC_FROM {
        power_series(x) * (-x).exp()
    } else {
        asymptotic_scaled(x)
    }
}

fn check(x: f64, func: &'static str) -> Result<()> {
    if !x.is_finite() {
        return Err(domain(func, format!("argument must be finite, got {x}")));
    }
    if x < 0.0 {
        return Err(domain(func, format!("argument must be nonnegative, got {x}")));
    }
    Ok(())
}

/// Σ (x/2)^{2k} / (k!)², all terms positive.
fn power_series(x: f64) -> f64 {
    let q = 0.25 * x * x;
    let mut term = 1.0;
    let mut sum = 1.0;
    let mut k = 0.0;
    loop {
        k += 1.0;
        term *= q / (k * k);
        sum += term;
        if term <= sum * 1e-17 {
            return sum;
        }
    }
}

/// e^{-x} I₀(x) ≈ (2πx)^{-1/2} Σ_k [(2k-1)!!]² / (k! (8x)^k).
fn asymptotic_scaled(x: f64) -> f64 {
    let mut term = 1.0;
    let mut sum = 1.0;
    for k in 0..60 {
        let kf = k as f64;
        let next = term * (2.0 * kf + 1.0).powi(2) / (8.0 * (kf + 1.0) * x);
        if next >= term {
            break;
        }
        term = next;
        sum += term;
        if term <= sum * 1e-17 {
            break;
        }
    }
    sum / (2.0 * std::f64::consts::PI * x).sqrt()
}
