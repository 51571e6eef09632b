//! Command-line front end. Settings come from an optional `--config` JSON
//! file; flags override it.

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

use crate::arithmetic::FamilySpec;
use crate::error::Error;
use crate::haar::{Group, GroupSpec};
use crate::pipeline::config::{ExperimentKind, RunConfig};
use crate::pipeline::run::{run, Artifacts};
use crate::pipeline::zeros::Selector;
use crate::spectral::ExcisionRule;
use crate::theory::SymmetryCase;

pub const EXIT_OK: i32 = 0;
pub const EXIT_DATA: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "excised", version, about = "Excised random-matrix experiments")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Sample matrices and write `index,charpoly_abs,first_eigenangle`.
    Sample(Common),
    /// One-level density histogram.
    Onelevel(Common),
    /// Pair-correlation histogram.
    Paircorr(Common),
    /// Filter a sample file on |Λ_A(1)|.
    Excise(Common),
    /// Enumerate a family of fundamental discriminants.
    Discriminants(Common),
    /// Standard and effective matrix sizes.
    Neff(Common),
    /// Compare lowest zeros with first eigenangles.
    Compare(Common),
}

#[derive(Debug, Default, Args)]
struct Common {
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    group: Option<Group>,
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    count: Option<u64>,
    #[arg(long)]
    bins: Option<usize>,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    threads: Option<usize>,
    #[arg(long)]
    window: Option<f64>,
    #[arg(long)]
    input: Option<PathBuf>,
    #[arg(long)]
    zeros: Option<PathBuf>,
    #[arg(long, value_enum)]
    selector: Option<Selector>,
    #[arg(long)]
    vanish_tol: Option<f64>,
    #[arg(long)]
    coefficients: Option<PathBuf>,
    /// Excision constant.
    #[arg(long)]
    c: Option<f64>,
    /// Excision exponent.
    #[arg(long)]
    k: Option<u32>,
    /// Matrix size entering the excision threshold.
    #[arg(long)]
    nstd: Option<f64>,
    /// Level of the newform.
    #[arg(long = "M")]
    m: Option<u64>,
    #[arg(long)]
    case: Option<SymmetryCase>,
    /// Discriminant bound.
    #[arg(long = "X")]
    x: Option<u64>,
    #[arg(long, allow_hyphen_values = true)]
    epsilon_f: Option<i8>,
    #[arg(long, allow_hyphen_values = true)]
    delta: Option<i8>,
    #[arg(long)]
    weight: Option<u32>,
    /// Use negative discriminants.
    #[arg(long)]
    negative: bool,
}

#[derive(Debug)]
enum Failure {
    Usage(String),
    Data(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::MissingInput(_) | Error::InvalidArgument(_) => Failure::Usage(e.to_string()),
            other => Failure::Data(other),
        }
    }
}

fn build_config(kind: ExperimentKind, a: Common) -> Result<RunConfig, Failure> {
    let mut cfg = match &a.config {
        Some(p) => {
            let text = std::fs::read_to_string(p).map_err(|e| Failure::Usage(format!("{}: {e}", p.display())))?;
            RunConfig::from_json(&text).map_err(|e| Failure::Usage(format!("{}: {e}", p.display())))?
        }
        None => RunConfig::new(kind),
    };
    cfg.experiment = kind;

    if a.group.is_some() || a.n.is_some() {
        let base = cfg.group;
        let group = a.group.or(base.map(|g| g.group())).ok_or(Error::MissingInput("--group"))?;
        let n = a.n.or(base.map(|g| g.half_size())).ok_or(Error::MissingInput("--n"))?;
        cfg.group = Some(GroupSpec::new(group, n)?);
    }

    let family_flags = a.m.is_some()
        || a.case.is_some()
        || a.x.is_some()
        || a.epsilon_f.is_some()
        || a.delta.is_some()
        || a.weight.is_some()
        || a.negative;
    if family_flags {
        let base = cfg.family;
        let m = a.m.or(base.map(|f| f.m)).ok_or(Error::MissingInput("--M"))?;
        let case = a.case.or(base.map(|f| f.case)).ok_or(Error::MissingInput("--case"))?;
        let x = a.x.or(base.map(|f| f.x)).ok_or(Error::MissingInput("--X"))?;
        let k = a.weight.or(base.map(|f| f.k)).unwrap_or(2);
        let eps = a.epsilon_f.or(base.map(|f| f.epsilon_f)).unwrap_or(1);
        let delta = a.delta.or(base.and_then(|f| f.delta));
        let mut f = FamilySpec::new(m, k, case, eps, delta, x)?;
        f.negative = a.negative || base.is_some_and(|b| b.negative);
        cfg.family = Some(f);
    }

    if a.c.is_some() || a.k.is_some() || a.nstd.is_some() {
        let base = cfg.excision;
        let c = a.c.or(base.map(|r| r.c)).ok_or(Error::MissingInput("--c"))?;
        let k = a.k.or(base.map(|r| r.k)).ok_or(Error::MissingInput("--k"))?;
        let n_std = a.nstd.or(base.map(|r| r.n_std)).ok_or(Error::MissingInput("--nstd"))?;
        cfg.excision = Some(ExcisionRule::new(c, k, n_std)?);
    }

    cfg.seed = a.seed.or(cfg.seed);
    cfg.count = a.count.or(cfg.count);
    cfg.bins = a.bins.or(cfg.bins);
    cfg.out = a.out.or(cfg.out);
    cfg.threads = a.threads.or(cfg.threads);
    cfg.window = a.window.or(cfg.window);
    cfg.input = a.input.or(cfg.input);
    cfg.zeros = a.zeros.or(cfg.zeros);
    cfg.selector = a.selector.or(cfg.selector);
    cfg.vanish_tol = a.vanish_tol.or(cfg.vanish_tol);
    cfg.coefficients = a.coefficients.or(cfg.coefficients);
    cfg.validate()?;
    Ok(cfg)
}

fn emit(cfg: &RunConfig, art: Artifacts, stdout: &mut dyn Write, stderr: &mut dyn Write) -> std::io::Result<()> {
    match (&cfg.out, art.main) {
        (Some(path), main) => {
            if let Some(parent) = path.parent().filter(|p| !p.as_os_str().is_empty()) {
                std::fs::create_dir_all(parent)?;
            }
            if let Some(bytes) = main {
                std::fs::write(path, bytes)?;
            }
            for (ext, bytes) in &art.side {
                std::fs::write(path.with_extension(ext), bytes)?;
            }
            writeln!(stdout, "{}", art.summary)
        }
        (None, Some(bytes)) => {
            stdout.write_all(&bytes)?;
            writeln!(stderr, "{}", art.summary)
        }
        (None, None) => writeln!(stdout, "{}", art.summary),
    }
}

/// Parses `args` (including the program name), runs the experiment and
/// returns the process exit code.
pub fn main_with<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if e.use_stderr() {
                write!(stderr, "{text}")
            } else {
                write!(stdout, "{text}")
            };
            return code;
        }
    };
    let (kind, common) = match cli.command {
        Command::Sample(a) => (ExperimentKind::Sample, a),
        Command::Onelevel(a) => (ExperimentKind::Onelevel, a),
        Command::Paircorr(a) => (ExperimentKind::Paircorr, a),
        Command::Excise(a) => (ExperimentKind::Excise, a),
        Command::Discriminants(a) => (ExperimentKind::Discriminants, a),
        Command::Neff(a) => (ExperimentKind::Neff, a),
        Command::Compare(a) => (ExperimentKind::Compare, a),
    };
    let outcome = build_config(kind, common).and_then(|cfg| {
        let art = run(&cfg).map_err(|e| match e {
            Error::MissingInput(_) => Failure::Usage(e.to_string()),
            other => Failure::Data(other),
        })?;
        emit(&cfg, art, stdout, stderr).map_err(|e| Failure::Data(e.into()))
    });
    match outcome {
        Ok(()) => EXIT_OK,
        Err(Failure::Usage(msg)) => {
            let _ = writeln!(stderr, "error: {msg}");
            EXIT_USAGE
        }
        Err(Failure::Data(e)) => {
            let _ = writeln!(stderr, "error: {e}");
            EXIT_DATA
        }
    }
}

pub fn main_from_env() -> i32 {
    main_with(std::env::args_os(), &mut std::io::stdout().lock(), &mut std::io::stderr().lock())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn call(args: &[&str]) -> (i32, String, String) {
        let (mut out, mut err) = (Vec::new(), Vec::new());
        let mut full = vec!["excised"];
        full.extend_from_slice(args);
        let code = main_with(full, &mut out, &mut err);
        (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
    }

    #[test]
    fn usage_errors_exit_two() {
        assert_eq!(call(&[]).0, EXIT_USAGE);
        assert_eq!(call(&["plot"]).0, EXIT_USAGE);
        assert_eq!(call(&["sample", "--group", "so5"]).0, EXIT_USAGE);
        assert_eq!(call(&["sample", "--count", "10"]).0, EXIT_USAGE);
        assert_eq!(call(&["sample", "--group", "usp", "--n", "0"]).0, EXIT_USAGE);
        assert_eq!(call(&["--help"]).0, EXIT_OK);
    }

    #[test]
    fn data_errors_exit_one() {
        let dir = tempfile::tempdir().unwrap();
        let bad = dir.path().join("zeros.csv");
        std::fs::write(&bad, "5,0.5,0.1\n").unwrap();
        let (code, _, err) = call(&["compare", "--zeros", bad.to_str().unwrap(), "--group", "usp", "--n", "2"]);
        assert_eq!(code, EXIT_DATA, "{err}");
        assert!(err.contains("line 1"));
    }

    #[test]
    fn discriminants_summary_on_stdout() {
        let (code, out, _) = call(&["discriminants", "--M", "11", "--case", "generic", "--X", "1000"]);
        assert_eq!(code, EXIT_OK);
        assert!(out.starts_with("count "));
    }

    #[test]
    fn flags_override_config() {
        let dir = tempfile::tempdir().unwrap();
        let cfg = dir.path().join("run.json");
        std::fs::write(&cfg, r#"{"experiment": "sample", "group": {"group": "usp", "n": 3}, "count": 7, "seed": 1}"#).unwrap();
        let (code, out, err) = call(&["sample", "--config", cfg.to_str().unwrap(), "--count", "5"]);
        assert_eq!(code, EXIT_OK);
        assert_eq!(out.lines().count(), 6);
        assert!(err.contains("5 samples of"));
        let out_path = dir.path().join("sub/s.csv");
        let (code, out, _) = call(&["sample", "--config", cfg.to_str().unwrap(), "--out", out_path.to_str().unwrap()]);
        assert_eq!(code, EXIT_OK);
        assert!(out.contains("7 samples"));
        assert_eq!(std::fs::read_to_string(out_path).unwrap().lines().count(), 8);
    }
}
