//! Parallel Monte Carlo drivers.
//!
//! The index range `0..count` is cut into fixed chunks of [`CHUNK`] indices.
//! Chunks run on a rayon pool and their results are merged in index order, so
//! every output is independent of the number of worker threads.

use std::f64::consts::{PI, TAU};
use std::ops::Range;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::haar::{sample, Group, GroupSpec, SeedSpec};
use crate::spectral::{
    char_poly_at_one_with, det_i_minus_a, eigenangles, first_eigenangle, ExcisionCounts,
    ExcisionRule,
};
use crate::stats::{mean_normalize, Accumulator, Histogram, Normalization};

pub const CHUNK: u64 = 2048;

/// Environment variable holding the default worker count.
pub const THREADS_ENV: &str = "EXCISED_THREADS";

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct McConfig {
    pub count: u64,
    pub master_seed: u64,
    /// Worker threads; `None` falls back to the environment, then to rayon's default.
    pub threads: Option<usize>,
}

impl McConfig {
    pub fn new(count: u64, master_seed: u64) -> Self {
        McConfig {
            count,
            master_seed,
            threads: None,
        }
    }

    pub fn with_threads(mut self, threads: usize) -> Self {
        self.threads = Some(threads);
        self
    }

    fn seed(&self, index: u64) -> SeedSpec {
        SeedSpec::new(self.master_seed, index)
    }
}

pub fn resolve_threads(requested: Option<usize>) -> Option<usize> {
    requested.or_else(|| {
        std::env::var(THREADS_ENV)
            .ok()
            .and_then(|v| v.trim().parse::<usize>().ok())
            .filter(|&n| n > 0)
    })
}

/// Runs `work` on each chunk of `0..count` and returns the chunk results in order.
pub fn map_chunks<T, F>(count: u64, threads: Option<usize>, work: F) -> Result<Vec<T>>
where
    T: Send,
    F: Fn(Range<u64>) -> Result<T> + Sync,
{
    let starts: Vec<u64> = (0..count).step_by(CHUNK as usize).collect();
    let run = || {
        starts
            .par_iter()
            .map(|&s| work(s..(s + CHUNK).min(count)))
            .collect::<Result<Vec<T>>>()
    };
    match resolve_threads(threads) {
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()
            .map_err(|e| Error::invalid(format!("thread pool: {e}")))?
            .install(run),
        None => run(),
    }
}

fn merge_histograms(parts: Vec<Histogram>) -> Result<Histogram> {
    let mut it = parts.into_iter();
    let mut total = it.next().ok_or_else(|| Error::invalid("no samples"))?;
    for h in it {
        total.merge(&h)?;
    }
    Ok(total)
}

fn require_count(cfg: &McConfig) -> Result<()> {
    if cfg.count == 0 {
        return Err(Error::invalid("sample count must be at least 1"));
    }
    Ok(())
}

/// Angular range of the one-level density: `[0, π]` for SO(2N) and USp(2N),
/// `[0, 2π]` for SO(2N+1) and U(N).
pub fn one_level_range(group: Group) -> (f64, f64) {
    match group {
        Group::SoEven | Group::USp => (0.0, PI),
        Group::SoOdd | Group::Unitary => (0.0, TAU),
    }
}

/// Eigenangles per matrix per radian. SO(2N+1) spectra enter without their
/// structural zero.
pub fn one_level_density_mc(spec: GroupSpec, cfg: &McConfig, bins: usize) -> Result<Histogram> {
    require_count(cfg)?;
    let (lo, hi) = one_level_range(spec.group());
    let template = Histogram::uniform(lo, hi, bins, Normalization::PerSample)?;
    let parts = map_chunks(cfg.count, cfg.threads, |r| {
        let mut h = template.clone();
        for i in r {
            let s = eigenangles(&sample(spec, cfg.seed(i))?)?;
            match spec.group() {
                Group::SoEven | Group::USp => {
                    h.add_sample(s.angles().iter().copied().filter(|&t| t >= 0.0))
                }
                Group::SoOdd => h.add_sample(s.without_forced_zero().into_iter().map(|t| t.rem_euclid(TAU))),
                Group::Unitary => h.add_sample(s.angles().iter().map(|t| t.rem_euclid(TAU))),
            }
        }
        Ok(h)
    })?;
    merge_histograms(parts)
}

/// Density of scaled differences `(θ_i - θ_j)·dim/(2π)` mod `dim` in
/// `(0, window]` over ordered pairs `i ≠ j`, normalized per eigenangle so
/// that it tends to 1 at large separation.
pub fn pair_correlation_mc(spec: GroupSpec, cfg: &McConfig, window: f64, bins: usize) -> Result<Histogram> {
    require_count(cfg)?;
    if !(window > 0.0) {
        return Err(Error::invalid("pair-correlation window must be positive"));
    }
    let dim = spec.dim();
    let template =
        Histogram::uniform(0.0, window, bins, Normalization::PerSample)?.with_per_sample_scale(1.0 / dim as f64);
    let scale = dim as f64 / TAU;
    let parts = map_chunks(cfg.count, cfg.threads, |r| {
        let mut h = template.clone();
        let mut diffs = Vec::with_capacity(dim * dim);
        for i in r {
            let s = eigenangles(&sample(spec, cfg.seed(i))?)?;
            let a = s.angles();
            diffs.clear();
            for (p, &ti) in a.iter().enumerate() {
                for (q, &tj) in a.iter().enumerate() {
                    if p == q {
                        continue;
                    }
                    let x = (ti - tj).rem_euclid(TAU) * scale;
                    if x > 0.0 && x <= window {
                        diffs.push(x);
                    }
                }
            }
            h.add_sample(diffs.iter().copied());
        }
        Ok(h)
    })?;
    merge_histograms(parts)
}

#[derive(Clone, Debug, PartialEq)]
pub struct FirstEigenangles {
    /// First eigenangles of the kept matrices, in sample-index order.
    pub values: Vec<f64>,
    pub counts: ExcisionCounts,
    /// Kept matrices with no strictly positive eigenangle.
    pub missing: u64,
}

/// First eigenangles, optionally after excision on `|Λ_A(1)|`.
pub fn first_eigenangles(
    spec: GroupSpec,
    cfg: &McConfig,
    exclude_forced_zero: bool,
    rule: Option<&ExcisionRule>,
) -> Result<FirstEigenangles> {
    require_count(cfg)?;
    let parts = map_chunks(cfg.count, cfg.threads, |r| {
        let mut out = FirstEigenangles {
            values: Vec::with_capacity((r.end - r.start) as usize),
            counts: ExcisionCounts::default(),
            missing: 0,
        };
        for i in r {
            let m = sample(spec, cfg.seed(i))?;
            let s = eigenangles(&m)?;
            out.counts.total += 1;
            if let Some(rule) = rule {
                let v = char_poly_at_one_with(&m, &s)?;
                if !rule.keeps(&v) {
                    continue;
                }
            }
            out.counts.kept += 1;
            match first_eigenangle(&s, exclude_forced_zero) {
                Some(t) => out.values.push(t),
                None => out.missing += 1,
            }
        }
        Ok(out)
    })?;
    let mut total = FirstEigenangles {
        values: Vec::with_capacity(cfg.count as usize),
        counts: ExcisionCounts::default(),
        missing: 0,
    };
    for p in parts {
        total.values.extend(p.values);
        total.counts.kept += p.counts.kept;
        total.counts.total += p.counts.total;
        total.missing += p.missing;
    }
    Ok(total)
}

/// `|det(I - A)|` by LU alone, in sample-index order.
pub fn charpoly_magnitudes(spec: GroupSpec, cfg: &McConfig) -> Result<Vec<f64>> {
    require_count(cfg)?;
    let parts = map_chunks(cfg.count, cfg.threads, |r| {
        r.map(|i| Ok(det_i_minus_a(sample(spec, cfg.seed(i))?.entries()).norm()))
            .collect::<Result<Vec<f64>>>()
    })?;
    Ok(parts.concat())
}

/// Moments of `|det(I - A)|²`.
pub fn charpoly_second_moment(spec: GroupSpec, cfg: &McConfig) -> Result<Accumulator> {
    require_count(cfg)?;
    let parts = map_chunks(cfg.count, cfg.threads, |r| {
        let mut acc = Accumulator::new();
        for i in r {
            acc.add(det_i_minus_a(sample(spec, cfg.seed(i))?.entries()).norm_sqr());
        }
        Ok(acc)
    })?;
    let mut total = Accumulator::new();
    for p in &parts {
        total.merge(p);
    }
    Ok(total)
}

/// Consecutive gaps between the sorted positive angles of one spectrum.
pub fn positive_gaps(angles: &[f64]) -> Vec<f64> {
    let mut pos: Vec<f64> = angles.iter().copied().filter(|&t| t > 0.0).collect();
    pos.sort_by(f64::total_cmp);
    pos.windows(2).map(|w| w[1] - w[0]).collect()
}

/// Histogram of nearest-neighbour gaps scaled to unit mean over all spectra.
pub fn nearest_neighbor_spacings<I, S>(spectra: I, edges: Vec<f64>) -> Result<Histogram>
where
    I: IntoIterator<Item = S>,
    S: AsRef<[f64]>,
{
    let mut h = Histogram::new(edges, Normalization::MeanOneDensity)?;
    let gaps: Vec<f64> = spectra
        .into_iter()
        .flat_map(|s| positive_gaps(s.as_ref()))
        .collect();
    if gaps.is_empty() {
        return Ok(h);
    }
    for g in mean_normalize(&gaps)? {
        h.add(g);
    }
    Ok(h)
}

/// Nearest-neighbour spacings of sampled spectra, in sample-index order.
pub fn spacings_mc(spec: GroupSpec, cfg: &McConfig) -> Result<Vec<f64>> {
    require_count(cfg)?;
    let parts = map_chunks(cfg.count, cfg.threads, |r| {
        let mut gaps = Vec::new();
        for i in r {
            let s = eigenangles(&sample(spec, cfg.seed(i))?)?;
            gaps.extend(positive_gaps(s.angles()));
        }
        Ok(gaps)
    })?;
    Ok(parts.concat())
}
