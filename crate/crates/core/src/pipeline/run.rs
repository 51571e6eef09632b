//! Experiment runners. Each returns its outputs in memory; writing them is
//! left to the caller.

use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::arithmetic::{cardinality_estimate, enumerate_family, family_log_scale};
use crate::error::{Error, Result};
use crate::haar::{sample, Group, GroupSpec, SeedSpec};
use crate::pipeline::config::{ExperimentKind, RunConfig};
use crate::pipeline::report::compare_report;
use crate::pipeline::zeros::{ingest_zero_list, lowest_zero_statistic, Selector, ZeroRecord, VANISH_TOL};
use crate::spectral::{char_poly_at_one_with, eigenangles, excise, first_eigenangle, CharPolyValue, ExcisionCounts};
use crate::stats::montecarlo::map_chunks;
use crate::stats::{first_eigenangles, fmt_float, one_level_density_mc, pair_correlation_mc, McConfig};
use crate::theory::{coefficient_assembly, n_eff, n_std, CoefficientInputs, GenericScale, PairCorrCoefficients, SymmetryCase};

/// Outputs of one experiment.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Artifacts {
    /// Main output, bound for `out` (or standard output when `out` is unset).
    pub main: Option<Vec<u8>>,
    /// Companion files written next to `out`, keyed by extension.
    pub side: Vec<(&'static str, Vec<u8>)>,
    /// Short human-readable summary.
    pub summary: String,
}

pub const SAMPLE_HEADER: &str = "index,charpoly_abs,first_eigenangle";

/// One row of a sample file. `first_eigenangle` is `None` when the matrix
/// has no eigenangle in `[0, π]` beyond a forced zero.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SampleRow {
    pub index: u64,
    pub charpoly_abs: f64,
    pub first_eigenangle: Option<f64>,
}

fn mc(cfg: &RunConfig) -> McConfig {
    let m = McConfig::new(cfg.count(), cfg.seed());
    match cfg.threads {
        Some(t) => m.with_threads(t),
        None => m,
    }
}

/// `|Λ_A(1)|` and the first eigenangle of each sampled matrix, in index order.
pub fn sample_rows(spec: GroupSpec, cfg: &McConfig) -> Result<Vec<SampleRow>> {
    let exclude_zero = spec.group() == Group::SoOdd;
    let parts = map_chunks(cfg.count, cfg.threads, |r| {
        r.map(|i| {
            let m = sample(spec, SeedSpec::new(cfg.master_seed, i))?;
            let s = eigenangles(&m)?;
            let v = char_poly_at_one_with(&m, &s)?;
            Ok(SampleRow {
                index: i,
                charpoly_abs: v.magnitude(),
                first_eigenangle: first_eigenangle(&s, exclude_zero),
            })
        })
        .collect::<Result<Vec<_>>>()
    })?;
    Ok(parts.concat())
}

pub fn write_sample_rows<W: Write>(rows: &[SampleRow], mut w: W) -> Result<()> {
    writeln!(w, "{SAMPLE_HEADER}")?;
    for r in rows {
        let first = r.first_eigenangle.map(fmt_float).unwrap_or_default();
        writeln!(w, "{},{},{}", r.index, fmt_float(r.charpoly_abs), first)?;
    }
    Ok(())
}

pub fn read_sample_rows<R: std::io::Read>(reader: R) -> Result<Vec<SampleRow>> {
    let mut rdr = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(reader);
    let headers = rdr.headers()?.clone();
    if headers.iter().collect::<Vec<_>>().join(",") != SAMPLE_HEADER {
        return Err(Error::Parse {
            line: 1,
            message: format!("expected header `{SAMPLE_HEADER}`"),
        });
    }
    rdr.deserialize::<SampleRow>()
        .enumerate()
        .map(|(i, row)| {
            row.map_err(|e| Error::Parse {
                line: i + 2,
                message: e.to_string(),
            })
        })
        .collect()
}

fn read_sample_file(cfg: &RunConfig) -> Result<Vec<SampleRow>> {
    let path = cfg.input.as_ref().ok_or(Error::MissingInput("input"))?;
    read_sample_rows(std::fs::File::open(path)?)
}

/// Zero list whose only ordinate per record is a first eigenangle, with
/// `d` running over `1, 2, …`. Used to feed matrix data through the zero-side
/// path.
pub fn synthetic_zero_list(values: &[f64]) -> Result<Vec<ZeroRecord>> {
    values
        .iter()
        .enumerate()
        .map(|(i, &v)| ZeroRecord::new(i as i64 + 1, vec![v]))
        .collect()
}

fn histogram_bytes(h: &crate::stats::Histogram) -> Vec<u8> {
    h.to_csv_string().into_bytes()
}

pub fn run(cfg: &RunConfig) -> Result<Artifacts> {
    cfg.validate()?;
    match cfg.experiment {
        ExperimentKind::Sample => run_sample(cfg),
        ExperimentKind::Onelevel => {
            let spec = cfg.require_group()?;
            let h = one_level_density_mc(spec, &mc(cfg), cfg.bins())?;
            Ok(Artifacts {
                main: Some(histogram_bytes(&h)),
                side: Vec::new(),
                summary: format!("one-level density of {spec}: {} samples, {} bins", h.samples(), h.bins()),
            })
        }
        ExperimentKind::Paircorr => {
            let spec = cfg.require_group()?;
            let h = pair_correlation_mc(spec, &mc(cfg), cfg.window(), cfg.bins())?;
            Ok(Artifacts {
                main: Some(histogram_bytes(&h)),
                side: Vec::new(),
                summary: format!("pair correlation of {spec}: {} samples on [0, {}]", h.samples(), cfg.window()),
            })
        }
        ExperimentKind::Excise => run_excise(cfg),
        ExperimentKind::Discriminants => run_discriminants(cfg),
        ExperimentKind::Neff => run_neff(cfg),
        ExperimentKind::Compare => run_compare(cfg),
    }
}

fn run_sample(cfg: &RunConfig) -> Result<Artifacts> {
    let spec = cfg.require_group()?;
    let rows = sample_rows(spec, &mc(cfg))?;
    let mut buf = Vec::new();
    write_sample_rows(&rows, &mut buf)?;
    Ok(Artifacts {
        main: Some(buf),
        side: Vec::new(),
        summary: format!("{} samples of {spec} (seed {})", rows.len(), cfg.seed()),
    })
}

fn run_excise(cfg: &RunConfig) -> Result<Artifacts> {
    let rule = cfg.excision.ok_or(Error::MissingInput("excision rule (c, k, n_std)"))?;
    let rows = read_sample_file(cfg)?;
    let mut counts = ExcisionCounts::default();
    let pairs = rows
        .into_iter()
        .map(|r| (CharPolyValue::new(r.charpoly_abs.into()), r));
    let kept: Vec<SampleRow> = excise(pairs, &rule, &mut counts).map(|(_, r)| r).collect();
    let mut buf = Vec::new();
    write_sample_rows(&kept, &mut buf)?;
    Ok(Artifacts {
        main: Some(buf),
        side: Vec::new(),
        summary: format!(
            "kept {} of {} (threshold {})",
            counts.kept,
            counts.total,
            fmt_float(rule.threshold())
        ),
    })
}

fn run_discriminants(cfg: &RunConfig) -> Result<Artifacts> {
    let family = cfg.require_family()?;
    let ds = enumerate_family(&family)?;
    let main = cfg.out.as_ref().map(|_| {
        let mut s = String::with_capacity(ds.len() * 8);
        for d in &ds {
            s.push_str(&d.to_string());
            s.push('\n');
        }
        s.into_bytes()
    });
    Ok(Artifacts {
        main,
        side: Vec::new(),
        summary: format!("count {}\nestimate {}", ds.len(), fmt_float(cardinality_estimate(&family))),
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct NeffReport {
    pub case: SymmetryCase,
    #[serde(rename = "M")]
    pub m: u64,
    #[serde(rename = "X")]
    pub x: u64,
    pub n_std: f64,
    pub n_eff: f64,
}

fn run_neff(cfg: &RunConfig) -> Result<Artifacts> {
    let family = cfg.require_family()?;
    let path = cfg.coefficients.as_ref().ok_or(Error::MissingInput("coefficients"))?;
    let text = std::fs::read_to_string(path)?;
    let (m, x) = (family.m as f64, family.x as f64);
    let n_eff_value = if family.case == SymmetryCase::Generic {
        let pc: PairCorrCoefficients = serde_json::from_str(&text)?;
        let (e1, e2) = match pc.recompute() {
            Ok((e1, e2, _)) => (e1, e2),
            Err(Error::MissingInput(_)) => (pc.e1, pc.e2),
            Err(e) => return Err(e),
        };
        let scale = GenericScale {
            r: family_log_scale(family.m, family.x),
            e1,
            e2,
        };
        n_eff(family.case, m, x, &CoefficientInputs::default(), Some(scale))?
    } else {
        let inputs: CoefficientInputs = serde_json::from_str(&text)?;
        let present = match family.case {
            SymmetryCase::PrincipalEven => inputs.a1.is_some(),
            SymmetryCase::PrincipalOdd => inputs.a3.is_some(),
            _ => inputs.b1.is_some(),
        };
        let coeffs = if present { inputs } else { coefficient_assembly(family.case, family.k, &inputs)? };
        n_eff(family.case, m, x, &coeffs, None)?
    };
    let report = NeffReport {
        case: family.case,
        m: family.m,
        x: family.x,
        n_std: n_std(m, x)?,
        n_eff: n_eff_value,
    };
    let mut json = serde_json::to_string_pretty(&report)?;
    json.push('\n');
    Ok(Artifacts {
        main: Some(json.into_bytes()),
        side: Vec::new(),
        summary: format!("n_std {}\nn_eff {}", fmt_float(report.n_std), fmt_float(report.n_eff)),
    })
}

fn run_compare(cfg: &RunConfig) -> Result<Artifacts> {
    let zeros_path = cfg.zeros.as_ref().ok_or(Error::MissingInput("zeros"))?;
    let records = ingest_zero_list(zeros_path)?;
    let selector = cfg.selector.unwrap_or(Selector::LowestNonvanishing);
    let left = lowest_zero_statistic(&records, selector, cfg.vanish_tol.unwrap_or(VANISH_TOL))?;
    let right: Vec<f64> = if cfg.input.is_some() {
        read_sample_file(cfg)?.iter().filter_map(|r| r.first_eigenangle).collect()
    } else {
        let spec = cfg.require_group()?;
        first_eigenangles(spec, &mc(cfg), spec.group() == Group::SoOdd, cfg.excision.as_ref())?.values
    };
    let report = compare_report(&left, &right, cfg.bins())?;
    let mut overlay = Vec::new();
    report.write_overlay_csv(&mut overlay)?;
    Ok(Artifacts {
        main: Some(report.to_json()?.into_bytes()),
        side: vec![("csv", overlay)],
        summary: format!("ks {} (n_left {}, n_right {})", fmt_float(report.ks), report.n_left, report.n_right),
    })
}
