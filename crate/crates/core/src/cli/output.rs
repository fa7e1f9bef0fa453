//! Machine-readable records. CSV headers and JSON field names match.

use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::calibration::{CalibrationRow, PitSummary, PIT_BINS};
use crate::inference::CurvePoint;

/// Rounds to 10 significant digits, the precision of all machine output.
pub fn sig10(x: f64) -> f64 {
    if !x.is_finite() || x == 0.0 {
        return x;
    }
    format!("{x:.9e}").parse().unwrap_or(x)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CurveRecord {
    pub delta: f64,
    #[serde(rename = "B")]
    pub b: f64,
    #[serde(rename = "C")]
    pub c: f64,
    pub cc: f64,
    pub cred: f64,
}

impl From<CurvePoint> for CurveRecord {
    fn from(p: CurvePoint) -> Self {
        CurveRecord {
            delta: sig10(p.delta),
            b: sig10(p.b),
            c: sig10(p.c),
            cc: sig10(p.cc),
            cred: sig10(p.cred),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SweepRecord {
    pub sigma: f64,
    pub mean_bayes: f64,
    pub mean_cd: f64,
    pub freq_bayes: f64,
    pub freq_cd: f64,
    pub mean_bayes_exact: f64,
    pub mean_cd_exact: f64,
    pub freq_bayes_exact: f64,
    pub freq_cd_exact: f64,
    pub stderr_mean_bayes: f64,
    pub stderr_mean_cd: f64,
}

impl From<&CalibrationRow> for SweepRecord {
    fn from(r: &CalibrationRow) -> Self {
        SweepRecord {
            sigma: sig10(r.sigma),
            mean_bayes: sig10(r.mean_noncol_bayes),
            mean_cd: sig10(r.mean_noncol_cd),
            freq_bayes: sig10(r.freq_high_bayes),
            freq_cd: sig10(r.freq_high_cd),
            mean_bayes_exact: sig10(r.exact.mean_bayes),
            mean_cd_exact: sig10(r.exact.mean_cd),
            freq_bayes_exact: sig10(r.exact.freq_bayes),
            freq_cd_exact: sig10(r.exact.freq_cd),
            stderr_mean_bayes: sig10(r.stderr_mean_bayes),
            stderr_mean_cd: sig10(r.stderr_mean_cd),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AnalyzeRecord {
    pub norm: f64,
    pub sigma: f64,
    pub radius: f64,
    pub level: f64,
    pub bayes_at_radius: f64,
    pub cd_at_radius: f64,
    pub noncollision_pvalue: f64,
    pub median_cd: f64,
    pub median_cd_at_boundary: bool,
    pub median_bayes: f64,
    pub interval_cd_lo: f64,
    pub interval_cd_hi: f64,
    pub interval_cd_lo_clipped: bool,
    pub interval_bayes_lo: f64,
    pub interval_bayes_hi: f64,
    pub interval_bayes_lo_clipped: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HistogramRecord {
    pub bin_lo: f64,
    pub bin_hi: f64,
    pub count: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PitRecord {
    pub delta_true: f64,
    pub sigma: f64,
    pub radius: f64,
    pub seed: u64,
    pub n: usize,
    pub ks_stat: f64,
    pub critical_value: f64,
    pub pass: bool,
    pub mean: f64,
    pub histogram: Vec<HistogramRecord>,
}

impl PitRecord {
    pub fn new(delta_true: f64, sigma: f64, radius: f64, seed: u64, s: &PitSummary) -> Self {
        PitRecord {
            delta_true: sig10(delta_true),
            sigma: sig10(sigma),
            radius: sig10(radius),
            seed,
            n: s.n,
            ks_stat: sig10(s.ks_stat),
            critical_value: sig10(s.critical_value()),
            pass: s.passes(),
            mean: sig10(s.mean),
            histogram: histogram_records(&s.histogram),
        }
    }
}

pub fn histogram_records(counts: &[u64]) -> Vec<HistogramRecord> {
    let width = 1.0 / PIT_BINS as f64;
    counts
        .iter()
        .enumerate()
        .map(|(i, &count)| HistogramRecord {
            bin_lo: sig10(i as f64 * width),
            bin_hi: sig10((i + 1) as f64 * width),
            count,
        })
        .collect()
}

pub fn write_csv<T: Serialize, W: Write>(records: &[T], out: W) -> std::io::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    for r in records {
        w.serialize(r)?;
    }
    w.flush()
}

pub fn read_csv<T: for<'de> Deserialize<'de>>(text: &str) -> csv::Result<Vec<T>> {
    csv::Reader::from_reader(text.as_bytes()).deserialize().collect()
}

pub fn write_json<T: Serialize + ?Sized, W: Write>(value: &T, mut out: W) -> std::io::Result<()> {
    serde_json::to_writer_pretty(&mut out, value)?;
    writeln!(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn sig10_rounds() {
        assert_eq!(sig10(0.221_495_048_634_475_9), 0.221_495_048_6);
        assert_eq!(sig10(0.0), 0.0);
        assert_eq!(sig10(9.999_999_999_9), 10.0);
    }

    #[test]
    fn curve_header_is_exact() {
        let rec = CurveRecord { delta: 0.0, b: 0.0, c: 0.1353352832, cc: 0.7293294335, cred: 1.0 };
        let mut buf = Vec::new();
        write_csv(&[rec], &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert_eq!(text.lines().next().unwrap(), "delta,B,C,cc,cred");
    }

    #[test]
    fn sweep_header_is_exact() {
        let rec = SweepRecord {
            sigma: 1.0,
            mean_bayes: 0.1,
            mean_cd: 0.2,
            freq_bayes: 0.3,
            freq_cd: 0.04,
            mean_bayes_exact: 0.1,
            mean_cd_exact: 0.2,
            freq_bayes_exact: 0.3,
            freq_cd_exact: 0.04,
            stderr_mean_bayes: 1e-3,
            stderr_mean_cd: 1e-3,
        };
        let mut buf = Vec::new();
        write_csv(&[rec], &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert_eq!(
            text.lines().next().unwrap(),
            "sigma,mean_bayes,mean_cd,freq_bayes,freq_cd,mean_bayes_exact,mean_cd_exact,\
             freq_bayes_exact,freq_cd_exact,stderr_mean_bayes,stderr_mean_cd"
        );
        let back: Vec<SweepRecord> = read_csv(&text).unwrap();
        assert_eq!(back, vec![rec]);
    }

    proptest! {
        #[test]
        fn curve_csv_round_trip(vals in proptest::collection::vec((0.0f64..1e3, 0.0f64..1.0, 0.0f64..1.0), 1..20)) {
            let recs: Vec<CurveRecord> = vals
                .iter()
                .map(|&(d, b, c)| CurvePoint { delta: d, b, c, cc: (1.0 - 2.0 * c).abs(), cred: (1.0 - 2.0 * b).abs() }.into())
                .collect();
            let mut buf = Vec::new();
            write_csv(&recs, &mut buf).unwrap();
            let back: Vec<CurveRecord> = read_csv(std::str::from_utf8(&buf).unwrap()).unwrap();
            prop_assert_eq!(&back, &recs);
            let json = serde_json::to_string(&recs).unwrap();
            let back: Vec<CurveRecord> = serde_json::from_str(&json).unwrap();
            prop_assert_eq!(back, recs);
        }
    }
}
