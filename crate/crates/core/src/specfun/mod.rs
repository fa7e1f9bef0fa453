//! Special functions: Bessel I₀, the two-degree-of-freedom non-central χ²
//! CDF, and monotone inversion.

mod bessel;
mod chisq;
mod invert;

pub use bessel::{bessel_i0, bessel_i0_scaled};
pub use chisq::{noncentral_chisq2_cdf, SERIES_TAIL};
pub(crate) use chisq::{density as noncentral_chisq2_pdf, gamma2};
pub use invert::{expand_upper, invert_monotone, DEFAULT_TOL};

use crate::error::{domain, Result};
use serde::{Deserialize, Serialize};

/// A value in `[0, 1]`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Probability(f64);

impl Probability {
    pub const ZERO: Probability = Probability(0.0);
    pub const ONE: Probability = Probability(1.0);

    pub fn new(value: f64) -> Result<Self> {
        if (0.0..=1.0).contains(&value) {
            Ok(Probability(value))
        } else {
            Err(domain("Probability::new", format!("{value} not in [0, 1]")))
        }
    }

    /// Wraps a value already known to lie in `[0, 1]`.
    pub(crate) fn from_checked(value: f64) -> Self {
        debug_assert!((0.0..=1.0).contains(&value), "{value}");
        Probability(value)
    }

    pub fn get(self) -> f64 {
        self.0
    }

    /// `1 - p`.
    pub fn complement(self) -> Self {
        Probability(1.0 - self.0)
    }
}

impl From<Probability> for f64 {
    fn from(p: Probability) -> f64 {
        p.0
    }
}

/// Noncentrality ν ≥ 0 of a non-central χ².
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct Noncentrality(f64);

impl Noncentrality {
    pub fn new(nu: f64) -> Result<Self> {
        if nu.is_finite() && nu >= 0.0 {
            Ok(Noncentrality(nu))
        } else {
            Err(domain(
                "Noncentrality::new",
                format!("must be finite and >= 0, got {nu}"),
            ))
        }
    }

    pub fn get(self) -> f64 {
        self.0
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn newtypes_validate() {
        assert!(Probability::new(1.5).is_err());
        assert!(Probability::new(-0.0).is_ok());
        assert!(Noncentrality::new(-1.0).is_err());
        assert!(Noncentrality::new(f64::NAN).is_err());
        assert_eq!(Probability::new(0.25).unwrap().complement().get(), 0.75);
    }

    proptest! {
        #[test]
        fn gamma2_nondecreasing_in_x(nu in 0.0f64..200.0, x in 0.0f64..300.0, dx in 0.0f64..20.0) {
            let a = gamma2(x, nu).unwrap();
            let b = gamma2(x + dx, nu).unwrap();
            prop_assert!(b >= a - 1e-13, "Γ₂({x},{nu})={a} > Γ₂({},{nu})={b}", x + dx);
        }

        #[test]
        fn gamma2_nonincreasing_in_nu(x in 0.0f64..300.0, nu in 0.0f64..200.0, dnu in 0.0f64..20.0) {
            let a = gamma2(x, nu).unwrap();
            let b = gamma2(x, nu + dnu).unwrap();
            prop_assert!(b <= a + 1e-13);
        }

        #[test]
        fn marcum_complementarity(a in 0.0f64..8.0, b in 0.0f64..8.0) {
            // 1 - Γ₂(b², a²) - Γ₂(a², b²) = e^{-(a²+b²)/2} I₀(ab)
            let lhs = 1.0 - gamma2(b * b, a * a).unwrap() - gamma2(a * a, b * b).unwrap();
            let d = a - b;
            let rhs = (-0.5 * d * d).exp() * bessel_i0_scaled(a * b).unwrap();
            prop_assert!((lhs - rhs).abs() < 1e-10, "a={a} b={b}: {lhs} vs {rhs}");
        }
    }
}
