//! Non-central χ² distribution with two degrees of freedom.
//!
//! Γ₂(x, ν) = Σ_k Pois(k; ν/2) · P(χ²_{2k+2} ≤ x), and for even degrees of
//! freedom the central term is a Poisson upper tail:
//! P(χ²_{2k+2} ≤ x) = P(N ≥ k+1) with N ~ Pois(x/2). The mixture is summed
//! upward from a lower cutoff below the Poisson mode, so both the weights and
//! the central tails are updated by recurrence and nothing underflows for
//! large ν.

use super::{Noncentrality, Probability};
use crate::error::{domain, Error, Result};

/// Truncation threshold for the neglected Poisson-weight mass.
pub const SERIES_TAIL: f64 = 1e-14;

/// Allowed excursion outside [0, 1] before a result is treated as an error.
const RANGE_SLACK: f64 = 1e-12;

const MAX_TERMS: usize = 1_000_000;

/// CDF of the non-central χ² with two degrees of freedom, Γ₂(x, ν).
pub fn noncentral_chisq2_cdf(x: f64, nu: Noncentrality) -> Result<Probability> {
    gamma2(x, nu.get()).map(Probability::from_checked)
}

/// Γ₂ on raw floats with full argument validation.
pub(crate) fn gamma2(x: f64, nu: f64) -> Result<f64> {
    if !x.is_finite() || x < 0.0 {
        return Err(domain(
            "noncentral_chisq2_cdf",
            format!("x must be finite and >= 0, got {x}"),
        ));
    }
    if !nu.is_finite() || nu < 0.0 {
        return Err(domain(
            "noncentral_chisq2_cdf",
            format!("noncentrality must be finite and >= 0, got {nu}"),
        ));
    }
    let v = series(x, nu)?;
    if !(-RANGE_SLACK..=1.0 + RANGE_SLACK).contains(&v) {
        return Err(Error::OutOfRange {
            func: "noncentral_chisq2_cdf",
            value: v,
        });
    }
    Ok(v.clamp(0.0, 1.0))
}

/// Density of the non-central χ² with two degrees of freedom.
pub(crate) fn density(z: f64, nu: f64) -> f64 {
    if z < 0.0 {
        return 0.0;
    }
    // ½ e^{-(z+ν)/2} I₀(√(νz)) = ½ e^{-(√z-√ν)²/2} e^{-√(νz)} I₀(√(νz))
    let d = z.sqrt() - nu.sqrt();
    0.5 * (-0.5 * d * d).exp() * super::bessel::i0_scaled_unchecked((nu * z).sqrt())
}

fn series(x: f64, nu: f64) -> Result<f64> {
    if x == 0.0 {
        return Ok(0.0);
    }
    let mu = 0.5 * x;
    let lam = 0.5 * nu;
    if lam == 0.0 {
        return Ok(-(-mu).exp_m1());
    }

    // Chernoff: P(K ≤ λ - t) ≤ exp(-t²/2λ); choose t so the neglected lower
    // weight mass is below SERIES_TAIL.
    let t = (2.0 * lam * (1.0 / SERIES_TAIL).ln()).sqrt();
    let k_lo = (lam - t).floor().max(0.0) as u64;

    let ln_mu = mu.ln();
    let mut w = poisson_ln_pmf(k_lo, lam).exp();
    let mut tail = poisson_upper_tail(k_lo + 1, mu);
    // ln Pois(k+1; μ), the mass removed from `tail` on the next step
    let mut ln_next = poisson_ln_pmf(k_lo + 1, mu);

    let mut sum = 0.0;
    let mut k = k_lo;
    for _ in 0..MAX_TERMS {
        sum += w * tail;

        tail = (tail - ln_next.exp()).max(0.0);
        k += 1;
        let kf = k as f64;
        ln_next += ln_mu - (kf + 1.0).ln();
        w *= lam / kf;

        // Σ_{j≥k} w_j ≤ w_k / (1 - λ/(k+1)) once k+1 > λ; tails are decreasing.
        let weight_tail = if kf + 1.0 > lam {
            w / (1.0 - lam / (kf + 1.0))
        } else {
            1.0
        };
        if tail * weight_tail < SERIES_TAIL {
            return Ok(sum);
        }
    }
    Err(Error::Convergence {
        func: "noncentral_chisq2_cdf",
        detail: format!("series did not terminate for x={x}, nu={nu}"),
    })
}

/// ln(n!), exact table below 23 and Stirling's series above.
pub(crate) fn ln_factorial(n: u64) -> f64 {
    if n < 23 {
        let mut f = 1.0f64;
        for i in 2..=n {
            f *= i as f64;
        }
        return f.ln();
    }
    let z = n as f64 + 1.0;
    let z2 = z * z;
    let corr = (1.0 / 12.0 - (1.0 / 360.0 - (1.0 / 1260.0 - 1.0 / (1680.0 * z2)) / z2) / z2) / z;
    (z - 0.5) * z.ln() - z + 0.5 * (2.0 * std::f64::consts::PI).ln() + corr
}

/// ln Pois(k; mean), in saddle-point form so that large `k` and `mean`
/// do not cancel catastrophically.
fn poisson_ln_pmf(k: u64, mean: f64) -> f64 {
    if k == 0 {
        return -mean;
    }
    let kf = k as f64;
    -stirling_error(k) - deviance_term(kf, mean) - 0.5 * (2.0 * std::f64::consts::PI * kf).ln()
}

/// ln(n!) − ln(√(2πn) (n/e)^n).
fn stirling_error(n: u64) -> f64 {
    let nf = n as f64;
    if n <= 15 {
        return ln_factorial(n) - (nf + 0.5) * nf.ln() + nf - 0.5 * (2.0 * std::f64::consts::PI).ln();
    }
    let n2 = nf * nf;
    (1.0 / 12.0 - (1.0 / 360.0 - (1.0 / 1260.0 - (1.0 / 1680.0 - 1.0 / (1188.0 * n2)) / n2) / n2) / n2)
        / nf
}

/// x ln(x/m) + m − x, by series when x is close to m.
fn deviance_term(x: f64, m: f64) -> f64 {
    if (x - m).abs() < 0.1 * (x + m) {
        let v = (x - m) / (x + m);
        let mut s = (x - m) * v;
        let mut ej = 2.0 * x * v;
        let v2 = v * v;
        for j in 1..1000 {
            ej *= v2;
            let next = s + ej / (2 * j + 1) as f64;
            if next == s {
                return s;
            }
            s = next;
        }
        s
    } else {
        x * (x / m).ln() + m - x
    }
}

/// P(N ≥ m) for N ~ Pois(μ), μ > 0.
fn poisson_upper_tail(m: u64, mu: f64) -> f64 {
    if m == 0 {
        return 1.0;
    }
    let mf = m as f64;
    if mf > mu {
        // Σ_{j≥m} pmf(j); terms shrink by μ/(j+1) < 1.
        let mut term = poisson_ln_pmf(m, mu).exp();
        let mut sum = term;
        let mut j = mf;
        while term > sum * 1e-17 && term > 0.0 {
            j += 1.0;
            term *= mu / j;
            sum += term;
        }
        sum.min(1.0)
    } else {
        // 1 - Σ_{j<m} pmf(j), summed downward from j = m-1 where terms shrink.
        let mut term = poisson_ln_pmf(m - 1, mu).exp();
        let mut sum = term;
        let mut j = mf - 1.0;
        while j > 0.0 && term > sum * 1e-17 && term > 0.0 {
            term *= j / mu;
            j -= 1.0;
            sum += term;
        }
        (1.0 - sum).max(0.0)
    }
}
