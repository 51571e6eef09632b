use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Normalization {
    /// Bin counts.
    Raw,
    /// Counts over in-range total times width; integrates to 1 over the binned range.
    Density,
    /// As `Density`, for samples already divided by their mean.
    MeanOneDensity,
    /// Counts over `samples · width`, times `per_sample_scale`.
    PerSample,
}

/// Fixed-edge histogram with exact integer counts.
///
/// Values are added in groups, one group per Monte Carlo sample, so that the
/// per-bin spread across samples is available for standard errors. The last
/// bin is closed on the right.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Histogram {
    edges: Vec<f64>,
    counts: Vec<u64>,
    sq_counts: Vec<u64>,
    underflow: u64,
    overflow: u64,
    samples: u64,
    normalization: Normalization,
    per_sample_scale: f64,
    #[serde(skip)]
    scratch: Vec<u32>,
}

impl PartialEq for Histogram {
    fn eq(&self, other: &Self) -> bool {
        self.edges == other.edges
            && self.counts == other.counts
            && self.sq_counts == other.sq_counts
            && self.underflow == other.underflow
            && self.overflow == other.overflow
            && self.samples == other.samples
            && self.normalization == other.normalization
            && self.per_sample_scale == other.per_sample_scale
    }
}

impl Histogram {
    pub fn new(edges: Vec<f64>, normalization: Normalization) -> Result<Self> {
        if edges.len() < 2 {
            return Err(Error::invalid("a histogram needs at least two edges"));
        }
        if edges.iter().any(|e| !e.is_finite()) || edges.windows(2).any(|w| !(w[0] < w[1])) {
            return Err(Error::invalid("histogram edges must be finite and strictly increasing"));
        }
        let bins = edges.len() - 1;
        Ok(Histogram {
            edges,
            counts: vec![0; bins],
            sq_counts: vec![0; bins],
            underflow: 0,
            overflow: 0,
            samples: 0,
            normalization,
            per_sample_scale: 1.0,
            scratch: vec![0; bins],
        })
    }

    pub fn uniform(lo: f64, hi: f64, bins: usize, normalization: Normalization) -> Result<Self> {
        if bins == 0 || !(lo < hi) {
            return Err(Error::invalid(format!("bad uniform range [{lo}, {hi}] with {bins} bins")));
        }
        let width = (hi - lo) / bins as f64;
        let mut edges: Vec<f64> = (0..bins).map(|i| lo + width * i as f64).collect();
        edges.push(hi);
        Histogram::new(edges, normalization)
    }

    pub fn with_per_sample_scale(mut self, scale: f64) -> Self {
        self.per_sample_scale = scale;
        self
    }

    pub fn edges(&self) -> &[f64] {
        &self.edges
    }

    pub fn counts(&self) -> &[u64] {
        &self.counts
    }

    pub fn underflow(&self) -> u64 {
        self.underflow
    }

    pub fn overflow(&self) -> u64 {
        self.overflow
    }

    pub fn samples(&self) -> u64 {
        self.samples
    }

    pub fn bins(&self) -> usize {
        self.counts.len()
    }

    pub fn normalization(&self) -> Normalization {
        self.normalization
    }

    pub fn set_normalization(&mut self, normalization: Normalization) {
        self.normalization = normalization;
    }

    pub fn in_range(&self) -> u64 {
        self.counts.iter().sum()
    }

    pub fn width(&self, bin: usize) -> f64 {
        self.edges[bin + 1] - self.edges[bin]
    }

    pub fn centers(&self) -> Vec<f64> {
        self.edges.windows(2).map(|w| 0.5 * (w[0] + w[1])).collect()
    }

    /// Bin index of `x`, or `Err(true)` for overflow and `Err(false)` for underflow.
    pub fn locate(&self, x: f64) -> std::result::Result<usize, bool> {
        let lo = self.edges[0];
        let hi = *self.edges.last().unwrap();
        if x.is_nan() {
            return Err(true);
        }
        if x < lo {
            return Err(false);
        }
        if x > hi {
            return Err(true);
        }
        if x == hi {
            return Ok(self.bins() - 1);
        }
        // edges[i] <= x < edges[i + 1]
        Ok(self.edges.partition_point(|&e| e <= x) - 1)
    }

    /// Adds one sample consisting of any number of values.
    pub fn add_sample<I: IntoIterator<Item = f64>>(&mut self, values: I) {
        if self.scratch.len() != self.counts.len() {
            self.scratch = vec![0; self.counts.len()];
        }
        let mut touched = false;
        for x in values {
            match self.locate(x) {
                Ok(i) => {
                    self.scratch[i] += 1;
                    touched = true;
                }
                Err(true) => self.overflow += 1,
                Err(false) => self.underflow += 1,
            }
        }
        if touched {
            for (i, s) in self.scratch.iter_mut().enumerate() {
                if *s > 0 {
                    let c = u64::from(*s);
                    self.counts[i] += c;
                    self.sq_counts[i] += c * c;
                    *s = 0;
                }
            }
        }
        self.samples += 1;
    }

    /// Adds a single value as its own sample.
    pub fn add(&mut self, x: f64) {
        self.add_sample(std::iter::once(x));
    }

    pub fn compatible(&self, other: &Histogram) -> bool {
        self.edges == other.edges
    }

    pub fn merge(&mut self, other: &Histogram) -> Result<()> {
        if !self.compatible(other) {
            return Err(Error::invalid("cannot merge histograms with different edges"));
        }
        for i in 0..self.counts.len() {
            self.counts[i] += other.counts[i];
            self.sq_counts[i] += other.sq_counts[i];
        }
        self.underflow += other.underflow;
        self.overflow += other.overflow;
        self.samples += other.samples;
        Ok(())
    }

    fn scale_factor(&self, bin: usize) -> f64 {
        let w = self.width(bin);
        match self.normalization {
            Normalization::Raw => 1.0,
            Normalization::Density | Normalization::MeanOneDensity => {
                let n = self.in_range();
                if n == 0 {
                    0.0
                } else {
                    1.0 / (n as f64 * w)
                }
            }
            Normalization::PerSample => {
                if self.samples == 0 {
                    0.0
                } else {
                    self.per_sample_scale / (self.samples as f64 * w)
                }
            }
        }
    }

    /// Normalized bin values.
    pub fn values(&self) -> Vec<f64> {
        (0..self.bins())
            .map(|i| self.counts[i] as f64 * self.scale_factor(i))
            .collect()
    }

    /// Monte Carlo standard error of each normalized bin value, from the
    /// spread of per-sample bin counts. For `Density` the in-range total is
    /// treated as fixed.
    pub fn standard_errors(&self) -> Vec<f64> {
        let n = self.samples as f64;
        (0..self.bins())
            .map(|i| {
                if self.samples < 2 {
                    return f64::NAN;
                }
                let mean = self.counts[i] as f64 / n;
                let var = (self.sq_counts[i] as f64 / n - mean * mean).max(0.0) * n / (n - 1.0);
                let se_total = (var * n).sqrt();
                se_total * self.scale_factor(i)
            })
            .collect()
    }

    /// Writes `bin_left,bin_right,density` rows with 17 significant digits.
    pub fn write_csv<W: Write>(&self, mut w: W) -> Result<()> {
        w.write_all(b"bin_left,bin_right,density\n")?;
        for (i, v) in self.values().iter().enumerate() {
            writeln!(
                w,
                "{},{},{}",
                fmt_float(self.edges[i]),
                fmt_float(self.edges[i + 1]),
                fmt_float(*v)
            )?;
        }
        Ok(())
    }

    pub fn to_csv_string(&self) -> String {
        let mut buf = Vec::new();
        self.write_csv(&mut buf).expect("writing to memory");
        String::from_utf8(buf).expect("ascii output")
    }
}

/// Round-trippable float formatting with 17 significant digits.
pub fn fmt_float(x: f64) -> String {
    format!("{x:.16e}")
}
