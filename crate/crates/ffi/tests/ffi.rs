//! Exercises the C ABI through its Rust declarations.

use std::ffi::CStr;
use std::ptr;

use collision_cd_ffi::*;

fn last_error() -> String {
    let p = ccd_last_error_message();
    assert!(!p.is_null());
    unsafe { CStr::from_ptr(p) }.to_string_lossy().into_owned()
}

struct Obs(*mut CcdObservation);

impl Obs {
    fn norm(norm: f64, sigma: f64) -> Obs {
        let mut h = ptr::null_mut();
        assert_eq!(unsafe { ccd_observation_from_norm(norm, sigma, &mut h) }, CcdStatus::Ok);
        assert!(!h.is_null());
        Obs(h)
    }
}

impl Drop for Obs {
    fn drop(&mut self) {
        unsafe { ccd_observation_free(self.0) };
    }
}

#[test]
fn figure2_values_through_the_abi() {
    let obs = Obs::norm(5.0, 2.5);
    let mut v = 0.0;
    assert_eq!(unsafe { ccd_collision_confidence(obs.0, 2.0, &mut v) }, CcdStatus::Ok);
    assert!((v - 0.221_495_048_634_475_9).abs() < 1e-12);
    assert_eq!(unsafe { ccd_noncollision_pvalue(obs.0, 2.0, &mut v) }, CcdStatus::Ok);
    assert!((v - 0.778_504_951_365_524_1).abs() < 1e-12);

    let mut est = CcdEstimate::default();
    assert_eq!(unsafe { ccd_median(obs.0, CcdMethod::Cd, &mut est) }, CcdStatus::Ok);
    assert!((est.delta - 4.2857).abs() < 1e-3 && !est.at_boundary);
    assert_eq!(unsafe { ccd_median(obs.0, CcdMethod::Bayes, &mut est) }, CcdStatus::Ok);
    assert!((est.delta - 5.6145).abs() < 1e-3);

    let mut iv = CcdInterval::default();
    assert_eq!(unsafe { ccd_level_interval(obs.0, CcdMethod::Cd, 0.9, &mut iv) }, CcdStatus::Ok);
    assert!(iv.lo_clipped && iv.lo == 0.0 && (iv.hi - 8.6291).abs() < 1e-3);
    assert_eq!(unsafe { ccd_level_interval(obs.0, CcdMethod::Bayes, 0.9, &mut iv) }, CcdStatus::Ok);
    assert!(!iv.lo_clipped && (iv.lo - 2.0087).abs() < 1e-3 && (iv.hi - 9.5656).abs() < 1e-3);
}

#[test]
fn pair_and_norm_agree() {
    let a = Obs::norm(5.0, 2.5);
    let mut h = ptr::null_mut();
    assert_eq!(unsafe { ccd_observation_from_pair(-3.0, 4.0, 2.5, &mut h) }, CcdStatus::Ok);
    let b = Obs(h);
    let (mut x, mut y) = (0.0, 0.0);
    for delta in [0.0, 1.0, 2.0, 7.5] {
        unsafe {
            assert_eq!(ccd_cd_cdf(a.0, delta, &mut x), CcdStatus::Ok);
            assert_eq!(ccd_cd_cdf(b.0, delta, &mut y), CcdStatus::Ok);
        }
        assert!((x - y).abs() < 1e-14);
    }
}

#[test]
fn curves_tabulate_consistently() {
    let obs = Obs::norm(5.0, 2.5);
    let grid: Vec<f64> = (0..=48).map(|i| i as f64 * 0.25).collect();
    let n = grid.len();
    let (mut b, mut c, mut cc, mut cred) = (vec![0.0; n], vec![0.0; n], vec![0.0; n], vec![0.0; n]);
    let s = unsafe {
        ccd_tabulate_curves(obs.0, grid.as_ptr(), n, b.as_mut_ptr(), c.as_mut_ptr(), cc.as_mut_ptr(), cred.as_mut_ptr())
    };
    assert_eq!(s, CcdStatus::Ok);
    for i in 0..n {
        let mut v = 0.0;
        unsafe { ccd_bayes_cdf(obs.0, grid[i], &mut v) };
        assert_eq!(v, b[i]);
        unsafe { ccd_confidence_curve(obs.0, grid[i], &mut v) };
        assert_eq!(v, cc[i]);
        unsafe { ccd_credibility_curve(obs.0, grid[i], &mut v) };
        assert_eq!(v, cred[i]);
        assert!(c[i] >= b[i]);
    }
}

#[test]
fn special_functions() {
    let mut v = 0.0;
    assert_eq!(unsafe { ccd_bessel_i0(1.0, &mut v) }, CcdStatus::Ok);
    assert!((v - 1.266_065_877_752_008_3).abs() < 1e-15);
    assert_eq!(unsafe { ccd_bessel_i0_scaled(50.0, &mut v) }, CcdStatus::Ok);
    assert!((v - 0.056_561_626_647_454_19).abs() < 1e-15);
    assert_eq!(unsafe { ccd_noncentral_chisq2_cdf(4.0, 0.0, &mut v) }, CcdStatus::Ok);
    assert!((v - (1.0 - (-2.0f64).exp())).abs() < 1e-15);
}

#[test]
fn errors_map_to_status_codes() {
    let mut v = 0.0;
    assert_eq!(unsafe { ccd_noncentral_chisq2_cdf(-1.0, 0.0, &mut v) }, CcdStatus::DomainError);
    assert!(!last_error().is_empty());

    assert_eq!(unsafe { ccd_noncentral_chisq2_cdf(1.0, 0.0, ptr::null_mut()) }, CcdStatus::NullPointer);
    assert!(last_error().contains("NULL"));

    assert_eq!(unsafe { ccd_cd_cdf(ptr::null(), 1.0, &mut v) }, CcdStatus::NullPointer);

    let mut h = ptr::null_mut();
    assert_ne!(unsafe { ccd_observation_from_norm(5.0, 0.0, &mut h) }, CcdStatus::Ok);
    assert!(h.is_null());

    let obs = Obs::norm(5.0, 2.5);
    let mut iv = CcdInterval::default();
    assert_ne!(unsafe { ccd_level_interval(obs.0, CcdMethod::Cd, 1.5, &mut iv) }, CcdStatus::Ok);

    let mut pit = CcdPitSummary::default();
    assert_ne!(unsafe { ccd_pit_sample(2.0, 2.5, 2.0, 99, 1, &mut pit) }, CcdStatus::Ok);

    for s in [CcdStatus::Ok, CcdStatus::DomainError, CcdStatus::Panic] {
        let msg = unsafe { CStr::from_ptr(ccd_status_string(s)) };
        assert!(!msg.to_bytes().is_empty());
    }
    let ver = unsafe { CStr::from_ptr(ccd_version()) };
    assert_eq!(ver.to_str().unwrap(), env!("CARGO_PKG_VERSION"));

    // freeing NULL is a no-op
    unsafe {
        ccd_observation_free(ptr::null_mut());
        ccd_sweep_free(ptr::null_mut());
    }
}

#[test]
fn exact_row_at_the_boundary() {
    let mut row = CcdExactRow::default();
    assert_eq!(unsafe { ccd_exact_row(2.0, 2.5, 2.0, 0.95, &mut row) }, CcdStatus::Ok);
    assert!((row.freq_cd - 0.05).abs() < 1e-6);
    assert!((row.mean_cd - 0.5).abs() < 1e-6);
}

#[test]
fn sweep_handle_lifecycle() {
    let sigmas = [0.5, 2.0, 8.0];
    let run = |seed| {
        let mut h = ptr::null_mut();
        let s = unsafe { ccd_sweep_run(1.99, 2.0, sigmas.as_ptr(), sigmas.len(), 500, seed, 0.95, &mut h) };
        assert_eq!(s, CcdStatus::Ok);
        assert_eq!(unsafe { ccd_sweep_len(h) }, sigmas.len());
        let rows: Vec<CcdCalibrationRow> = (0..sigmas.len())
            .map(|i| {
                let mut r = CcdCalibrationRow::default();
                assert_eq!(unsafe { ccd_sweep_row(h, i, &mut r) }, CcdStatus::Ok);
                r
            })
            .collect();
        let mut r = CcdCalibrationRow::default();
        assert_ne!(unsafe { ccd_sweep_row(h, sigmas.len(), &mut r) }, CcdStatus::Ok);
        unsafe { ccd_sweep_free(h) };
        rows
    };
    let a = run(11);
    assert_eq!(a, run(11));
    for (r, s) in a.iter().zip(sigmas) {
        assert_eq!(r.sigma, s);
        assert_eq!(r.n_reps, 500);
        assert!((0.0..=1.0).contains(&r.mean_noncol_cd));
    }
}

#[test]
fn pit_summary() {
    let mut pit = CcdPitSummary::default();
    assert_eq!(unsafe { ccd_pit_sample(2.0, 2.5, 2.0, 20_000, 2024, &mut pit) }, CcdStatus::Ok);
    assert_eq!(pit.n, 20_000);
    assert_eq!(pit.histogram.iter().sum::<u64>(), 20_000);
    assert_eq!(pit.histogram.len(), CCD_PIT_BINS);
    assert!((pit.critical_value - 1.63 / (20_000f64).sqrt()).abs() < 1e-15);
    assert_eq!(pit.passes, pit.ks_stat < pit.critical_value);
}

#[test]
fn header_declares_every_export() {
    let header = std::fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/include/collision_cd.h")).unwrap();
    for name in [
        "ccd_status_string",
        "ccd_last_error_message",
        "ccd_version",
        "ccd_bessel_i0",
        "ccd_bessel_i0_scaled",
        "ccd_noncentral_chisq2_cdf",
        "ccd_observation_from_norm",
        "ccd_observation_from_pair",
        "ccd_observation_free",
        "ccd_bayes_cdf",
        "ccd_cd_cdf",
        "ccd_confidence_curve",
        "ccd_credibility_curve",
        "ccd_collision_confidence",
        "ccd_noncollision_pvalue",
        "ccd_quantile",
        "ccd_median",
        "ccd_level_interval",
        "ccd_tabulate_curves",
        "ccd_exact_row",
        "ccd_sweep_run",
        "ccd_sweep_len",
        "ccd_sweep_row",
        "ccd_sweep_free",
        "ccd_pit_sample",
        "typedef struct CcdObservation CcdObservation",
        "#define CCD_PIT_BINS 20",
    ] {
        assert!(header.contains(name), "header lacks {name}");
    }
}
