//! Globally adaptive Gauss–Kronrod (7, 15) quadrature on a finite interval.

use crate::error::{Error, Result};

// Kronrod abscissae on [0, 1); odd indices are the Gauss nodes.
const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_2,
    0.140_653_259_715_525_9,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_728,
];
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

const MAX_INTERVALS: usize = 10_000;

/// Result of an adaptive integration.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Quadrature {
    pub value: f64,
    pub error: f64,
    pub evaluations: usize,
}

#[derive(Debug, Clone, Copy)]
struct Panel {
    a: f64,
    b: f64,
    value: f64,
    error: f64,
}

/// Integrates `f` over `[a, b]` until the summed local error estimate is
/// below `abs_tol`, bisecting the worst panel each step.
pub fn integrate<F>(f: F, a: f64, b: f64, abs_tol: f64) -> Result<Quadrature>
where
    F: Fn(f64) -> Result<f64>,
{
    #[allow(clippy::neg_cmp_op_on_partial_ord)] // also rejects NaN
        if !(a.is_finite() && b.is_finite() && a <= b) || !(abs_tol > 0.0) {
        return Err(Error::InvalidInput(format!(
            "integrate: need finite a <= b and abs_tol > 0 (a={a}, b={b}, tol={abs_tol})"
        )));
    }
    if a == b {
        return Ok(Quadrature {
            value: 0.0,
            error: 0.0,
            evaluations: 0,
        });
    }

    let mut evaluations = 0;
    let mut panels = vec![gk15(&f, a, b, &mut evaluations)?];
    loop {
        let (value, error) = panels
            .iter()
            .fold((0.0, 0.0), |(v, e), p| (v + p.value, e + p.error));
        if error <= abs_tol {
            return Ok(Quadrature {
                value,
                error,
                evaluations,
            });
        }
        if panels.len() >= MAX_INTERVALS {
            return Err(Error::Convergence {
                func: "integrate",
                detail: format!("error estimate {error:e} above {abs_tol:e} after {MAX_INTERVALS} panels"),
            });
        }
        let worst = panels
            .iter()
            .enumerate()
            .max_by(|x, y| x.1.error.total_cmp(&y.1.error))
            .map(|(i, _)| i)
            .unwrap_or(0);
        let p = panels.swap_remove(worst);
        let mid = 0.5 * (p.a + p.b);
        if mid <= p.a || mid >= p.b {
            return Err(Error::Convergence {
                func: "integrate",
                detail: format!("panel [{}, {}] cannot be split further", p.a, p.b),
            });
        }
        panels.push(gk15(&f, p.a, mid, &mut evaluations)?);
        panels.push(gk15(&f, mid, p.b, &mut evaluations)?);
    }
}

fn gk15<F>(f: &F, a: f64, b: f64, evaluations: &mut usize) -> Result<Panel>
where
    F: Fn(f64) -> Result<f64>,
{
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(center)?;
    let mut kronrod = fc * WGK[7];
    let mut gauss = fc * WG[3];
    for j in 0..7 {
        let dx = half * XGK[j];
        let pair = f(center - dx)? + f(center + dx)?;
        kronrod += WGK[j] * pair;
        if j % 2 == 1 {
            gauss += WG[j / 2] * pair;
        }
    }
    *evaluations += 15;
    Ok(Panel {
        a,
        b,
        value: kronrod * half,
        error: ((kronrod - gauss) * half).abs(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn polynomial_is_exact() {
        let q = integrate(|x| Ok(x.powi(5) - 3.0 * x * x), 0.0, 2.0, 1e-12).unwrap();
        assert!((q.value - (64.0 / 6.0 - 8.0)).abs() < 1e-13);
        assert_eq!(q.evaluations, 15);
    }

    #[test]
    fn gaussian_mass() {
        let q = integrate(
            |x| Ok((-0.5 * x * x).exp() / (2.0 * std::f64::consts::PI).sqrt()),
            -12.0,
            12.0,
            1e-12,
        )
        .unwrap();
        assert!((q.value - 1.0).abs() < 1e-12);
    }

    #[test]
    fn peaked_integrand_refines() {
        // ∫₀¹ 1/(1e-4 + (x-0.3)²) dx
        let c: f64 = 1e-2;
        let want = ((0.7 / c).atan() + (0.3 / c).atan()) / c;
        let q = integrate(|x| Ok(1.0 / (c * c + (x - 0.3).powi(2))), 0.0, 1.0, 1e-9).unwrap();
        assert!((q.value - want).abs() < 1e-8, "{} vs {want}", q.value);
        assert!(q.evaluations > 15);
    }

    #[test]
    fn degenerate_and_invalid() {
        assert_eq!(integrate(|_| Ok(1.0), 2.0, 2.0, 1e-9).unwrap().value, 0.0);
        assert!(integrate(|_| Ok(1.0), 2.0, 1.0, 1e-9).is_err());
        assert!(integrate(|_| Ok(1.0), 0.0, 1.0, 0.0).is_err());
    }
}
