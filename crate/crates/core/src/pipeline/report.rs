//! Side-by-side comparison of two samples after mean-one normalization.

use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::stats::fmt_float;
use crate::stats::{ks_distance, mean_normalize, Histogram, Normalization};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ReportBin {
    pub left: f64,
    pub right: f64,
    /// Mean-one density of the first sample, with its standard error.
    pub density_left: f64,
    pub se_left: f64,
    pub density_right: f64,
    pub se_right: f64,
    /// `density_left - density_right`.
    pub residual: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CompareReport {
    /// KS distance between the mean-one normalized samples.
    pub ks: f64,
    /// KS distance between the samples as given.
    pub ks_raw: f64,
    pub n_left: usize,
    pub n_right: usize,
    pub bins: Vec<ReportBin>,
}

/// Histogram range: the smallest multiple of 1/2 covering both samples.
fn upper_edge(a: &[f64], b: &[f64]) -> f64 {
    let max = a.iter().chain(b).copied().fold(0.0f64, f64::max);
    ((max * 2.0).floor() + 1.0) / 2.0
}

fn histogram(samples: &[f64], hi: f64, bins: usize) -> Result<Histogram> {
    let mut h = Histogram::uniform(0.0, hi, bins, Normalization::MeanOneDensity)?;
    for &x in samples {
        h.add(x);
    }
    Ok(h)
}

/// Normalizes both samples to mean one, then reports their KS distance and
/// binned densities on a shared grid.
pub fn compare_report(left: &[f64], right: &[f64], bins: usize) -> Result<CompareReport> {
    if left.is_empty() || right.is_empty() {
        return Err(Error::invalid("both samples must be nonempty"));
    }
    if bins == 0 {
        return Err(Error::invalid("bins must be positive"));
    }
    let ks_raw = ks_distance(left, right)?;
    let a = mean_normalize(left)?;
    let b = mean_normalize(right)?;
    let ks = ks_distance(&a, &b)?;
    let hi = upper_edge(&a, &b);
    let (ha, hb) = (histogram(&a, hi, bins)?, histogram(&b, hi, bins)?);
    let (va, vb) = (ha.values(), hb.values());
    let (sa, sb) = (ha.standard_errors(), hb.standard_errors());
    let edges = ha.edges();
    let rows = (0..bins)
        .map(|i| ReportBin {
            left: edges[i],
            right: edges[i + 1],
            density_left: va[i],
            se_left: sa[i],
            density_right: vb[i],
            se_right: sb[i],
            residual: va[i] - vb[i],
        })
        .collect();
    Ok(CompareReport {
        ks,
        ks_raw,
        n_left: left.len(),
        n_right: right.len(),
        bins: rows,
    })
}

impl CompareReport {
    /// Overlay CSV `bin_left,bin_right,left,right,residual`.
    pub fn write_overlay_csv<W: Write>(&self, mut w: W) -> Result<()> {
        w.write_all(b"bin_left,bin_right,left,right,residual\n")?;
        for b in &self.bins {
            writeln!(
                w,
                "{},{},{},{},{}",
                fmt_float(b.left),
                fmt_float(b.right),
                fmt_float(b.density_left),
                fmt_float(b.density_right),
                fmt_float(b.residual)
            )?;
        }
        Ok(())
    }

    pub fn to_json(&self) -> Result<String> {
        let mut s = serde_json::to_string_pretty(self)?;
        s.push('\n');
        Ok(s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identical_inputs() {
        let a: Vec<f64> = (1..200).map(|i| (i as f64 * 0.37).sin().abs() + 0.1).collect();
        let r = compare_report(&a, &a, 20).unwrap();
        assert_eq!(r.ks, 0.0);
        assert_eq!(r.ks_raw, 0.0);
        assert!(r.bins.iter().all(|b| b.residual == 0.0));
        assert_eq!((r.n_left, r.n_right), (199, 199));
    }

    #[test]
    fn disjoint_supports() {
        let a = [1.0, 1.1, 1.2];
        let b = [5.0, 6.0, 7.0, 8.0];
        let r = compare_report(&a, &b, 10).unwrap();
        assert_eq!(r.ks_raw, 1.0);
        assert!(r.ks < 1.0);
        let r = compare_report(&[1.0, 1.0], &[0.5, 1.5], 4).unwrap();
        assert_eq!(r.ks, 0.5);
    }

    #[test]
    fn symmetric_ks() {
        let a: Vec<f64> = (1..100).map(|i| i as f64).collect();
        let b: Vec<f64> = (1..60).map(|i| (i * i) as f64).collect();
        let (ab, ba) = (compare_report(&a, &b, 10).unwrap(), compare_report(&b, &a, 10).unwrap());
        assert_eq!(ab.ks, ba.ks);
        assert_eq!(ab.ks_raw, ba.ks_raw);
    }

    #[test]
    fn densities_integrate_to_one() {
        let a: Vec<f64> = (1..500).map(|i| (i as f64).sqrt()).collect();
        let r = compare_report(&a, &a, 25).unwrap();
        let total: f64 = r.bins.iter().map(|b| b.density_left * (b.right - b.left)).sum();
        assert!((total - 1.0).abs() < 1e-12);
        let mut csv = Vec::new();
        r.write_overlay_csv(&mut csv).unwrap();
        assert_eq!(String::from_utf8(csv).unwrap().lines().count(), 26);
        let back: CompareReport = serde_json::from_str(&r.to_json().unwrap()).unwrap();
        assert_eq!(back, r);
    }

    #[test]
    fn rejects_empty() {
        assert!(compare_report(&[], &[1.0], 10).is_err());
        assert!(compare_report(&[1.0], &[1.0], 0).is_err());
    }
}
