//! Inversion of monotone functions by bracketed bisection.

use crate::error::{Error, Result};

/// Default tolerance on the argument for root finding.
pub const DEFAULT_TOL: f64 = 1e-10;

const MAX_BISECTIONS: usize = 2_000;
const MAX_DOUBLINGS: usize = 1_100;

/// Finds `x` in `[lo, hi]` with `f(x) = target` for nondecreasing `f`.
///
/// Stops once the bracket is narrower than `tol` (or no representable
/// midpoint remains) and returns its midpoint. A target outside
/// `[f(lo), f(hi)]` is a [`Error::Bracket`].
pub fn invert_monotone<F>(f: F, target: f64, lo: f64, hi: f64, tol: f64) -> Result<f64>
where
    F: Fn(f64) -> Result<f64>,
{
    #[allow(clippy::neg_cmp_op_on_partial_ord)] // also rejects NaN
    if !(tol > 0.0) || !lo.is_finite() || !hi.is_finite() || lo > hi || target.is_nan() {
        return Err(Error::InvalidInput(format!(
            "invert_monotone: need finite lo <= hi and tol > 0 (lo={lo}, hi={hi}, tol={tol})"
        )));
    }
    let f_lo = f(lo)?;
    let f_hi = f(hi)?;
    if target < f_lo || target > f_hi {
        return Err(Error::Bracket {
            target,
            lo,
            hi,
            f_lo,
            f_hi,
        });
    }
    if f_lo == target {
        return Ok(lo);
    }
    if f_hi == target {
        return Ok(hi);
    }

    let (mut a, mut b) = (lo, hi);
    for _ in 0..MAX_BISECTIONS {
        let mid = a + 0.5 * (b - a);
        if b - a <= tol || mid <= a || mid >= b {
            return Ok(mid);
        }
        let fm = f(mid)?;
        if fm == target {
            return Ok(mid);
        }
        if fm < target {
            a = mid;
        } else {
            b = mid;
        }
    }
    Err(Error::Convergence {
        func: "invert_monotone",
        detail: format!("bracket [{a}, {b}] still wider than {tol}"),
    })
}

/// Doubles the width of `[lo, hi]` upward until `f(hi) >= target`.
///
/// Returns the final upper end. Fails if `f` never reaches `target`
/// within the range of finite floats.
pub fn expand_upper<F>(f: F, target: f64, lo: f64, hi: f64) -> Result<f64>
where
    F: Fn(f64) -> Result<f64>,
{
    let mut hi = hi;
    for _ in 0..MAX_DOUBLINGS {
        if f(hi)? >= target {
            return Ok(hi);
        }
        let next = lo + 2.0 * (hi - lo);
        if !next.is_finite() {
            break;
        }
        hi = next;
    }
    Err(Error::Convergence {
        func: "expand_upper",
        detail: format!("no upper bracket reaching {target} above {lo}"),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identity() {
        let x = invert_monotone(Ok, 3.5, 0.0, 10.0, DEFAULT_TOL).unwrap();
        assert!((x - 3.5).abs() <= DEFAULT_TOL);
    }

    #[test]
    fn square_root_of_two() {
        let x = invert_monotone(|x| Ok(x * x), 2.0, 0.0, 4.0, DEFAULT_TOL).unwrap();
        assert!((x - std::f64::consts::SQRT_2).abs() <= DEFAULT_TOL);
    }

    #[test]
    fn flat_function_hits_target_at_endpoint() {
        let x = invert_monotone(|_| Ok(0.25), 0.25, 1.0, 2.0, DEFAULT_TOL).unwrap();
        assert_eq!(x, 1.0);
    }

    #[test]
    fn step_function_returns_jump_location() {
        let x = invert_monotone(|x| Ok(if x < 1.7 { 0.0 } else { 1.0 }), 0.5, 0.0, 4.0, 1e-12)
            .unwrap();
        assert!((x - 1.7).abs() < 1e-11);
    }

    #[test]
    fn out_of_bracket_is_error() {
        let e = invert_monotone(Ok, 11.0, 0.0, 10.0, DEFAULT_TOL).unwrap_err();
        assert!(matches!(e, Error::Bracket { .. }));
        let e = invert_monotone(Ok, -1.0, 0.0, 10.0, DEFAULT_TOL).unwrap_err();
        assert!(matches!(e, Error::Bracket { .. }));
    }

    #[test]
    fn huge_arguments_terminate() {
        // tolerance finer than the float spacing near 1e9
        let x = invert_monotone(Ok, 1.234e9, 0.0, 1e10, 1e-12).unwrap();
        assert!((x - 1.234e9).abs() < 1e-6);
    }

    #[test]
    fn errors_propagate() {
        let failing = |x: f64| {
            if x > 0.7 {
                Err(Error::InvalidInput("boom".into()))
            } else {
                Ok(x)
            }
        };
        let e = invert_monotone(failing, 0.5, 0.0, 1.0, DEFAULT_TOL).unwrap_err();
        assert!(matches!(e, Error::InvalidInput(_)));
    }

    #[test]
    fn expand_upper_doubles() {
        let hi = expand_upper(Ok, 100.0, 0.0, 1.0).unwrap();
        assert_eq!(hi, 128.0);
        assert!(expand_upper(|_| Ok(0.0), 1.0, 0.0, 1.0).is_err());
    }
}
