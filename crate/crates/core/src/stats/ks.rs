use crate::error::{Error, Result};

fn sorted(xs: &[f64]) -> Result<Vec<f64>> {
    if xs.is_empty() {
        return Err(Error::invalid("empty sample"));
    }
    if xs.iter().any(|x| x.is_nan()) {
        return Err(Error::invalid("sample contains NaN"));
    }
    let mut v = xs.to_vec();
    v.sort_by(f64::total_cmp);
    Ok(v)
}

/// Two-sample Kolmogorov–Smirnov statistic `sup |F_a - F_b|`.
pub fn ks_distance(a: &[f64], b: &[f64]) -> Result<f64> {
    let a = sorted(a)?;
    let b = sorted(b)?;
    let (na, nb) = (a.len() as f64, b.len() as f64);
    let (mut i, mut j) = (0usize, 0usize);
    let mut d = 0.0f64;
    while i < a.len() && j < b.len() {
        let x = a[i].min(b[j]);
        while i < a.len() && a[i] <= x {
            i += 1;
        }
        while j < b.len() && b[j] <= x {
            j += 1;
        }
        d = d.max((i as f64 / na - j as f64 / nb).abs());
    }
    Ok(d)
}

/// One-sample statistic against a continuous CDF.
pub fn ks_distance_cdf<F: Fn(f64) -> f64>(a: &[f64], cdf: F) -> Result<f64> {
    let a = sorted(a)?;
    let n = a.len() as f64;
    let mut d = 0.0f64;
    for (i, &x) in a.iter().enumerate() {
        let f = cdf(x);
        d = d.max((f - i as f64 / n).abs()).max(((i + 1) as f64 / n - f).abs());
    }
    Ok(d)
}
