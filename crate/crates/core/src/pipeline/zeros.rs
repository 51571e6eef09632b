//! Zero lists `d,γ₁,γ₂,…` and the lowest-zero statistics drawn from them.

use std::io::{BufRead, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::stats::fmt_float;

/// Default threshold below which an ordinate counts as a vanishing zero.
pub const VANISH_TOL: f64 = 1e-8;

/// Ordinates of the zeros of one twist, ascending.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ZeroRecord {
    pub d: i64,
    pub ordinates: Vec<f64>,
}

impl ZeroRecord {
    /// Ordinates must be finite, nonnegative and strictly increasing. A zero
    /// ordinate marks a zero at the central point.
    pub fn new(d: i64, ordinates: Vec<f64>) -> Result<Self> {
        for (i, &g) in ordinates.iter().enumerate() {
            if !g.is_finite() || g < 0.0 {
                return Err(Error::invalid(format!("d = {d}: ordinate {g} must be finite and nonnegative")));
            }
            if i > 0 && g <= ordinates[i - 1] {
                return Err(Error::invalid(format!(
                    "d = {d}: ordinates must increase strictly ({} then {g})",
                    ordinates[i - 1]
                )));
            }
        }
        Ok(ZeroRecord { d, ordinates })
    }
}

pub fn ingest_zero_list(path: impl AsRef<Path>) -> Result<Vec<ZeroRecord>> {
    let file = std::fs::File::open(path)?;
    read_zero_list(std::io::BufReader::new(file))
}

/// Parses variable-width rows. Blank lines, `#` comments and a leading
/// header whose first field is `d` are skipped.
pub fn read_zero_list<R: BufRead>(reader: R) -> Result<Vec<ZeroRecord>> {
    let mut out = Vec::new();
    for (i, line) in reader.lines().enumerate() {
        let line_no = i + 1;
        let line = line?;
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let mut fields = line.split(',').map(str::trim);
        let first = fields.next().unwrap_or_default();
        if out.is_empty() && first.eq_ignore_ascii_case("d") {
            continue;
        }
        let parse_err = |message: String| Error::Parse { line: line_no, message };
        let d: i64 = first
            .parse()
            .map_err(|_| parse_err(format!("discriminant `{first}` is not an integer")))?;
        let ordinates = fields
            .map(|f| f.parse::<f64>().map_err(|_| parse_err(format!("ordinate `{f}` is not a number"))))
            .collect::<Result<Vec<f64>>>()?;
        let record = ZeroRecord::new(d, ordinates).map_err(|e| parse_err(e.to_string()))?;
        out.push(record);
    }
    Ok(out)
}

/// Writes one `d,γ₁,…` row per record with 17 significant digits.
pub fn write_zero_list<W: Write>(records: &[ZeroRecord], mut w: W) -> Result<()> {
    for r in records {
        write!(w, "{}", r.d)?;
        for &g in &r.ordinates {
            write!(w, ",{}", fmt_float(g))?;
        }
        w.write_all(b"\n")?;
    }
    Ok(())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Selector {
    Lowest,
    /// Lowest ordinate at or above the vanishing tolerance.
    LowestNonvanishing,
    SecondLowest,
}

/// One ordinate per record, chosen by `which`.
pub fn lowest_zero_statistic(records: &[ZeroRecord], which: Selector, vanish_tol: f64) -> Result<Vec<f64>> {
    if records.is_empty() {
        return Err(Error::invalid("no zero records"));
    }
    if !(vanish_tol >= 0.0) {
        return Err(Error::invalid("vanish_tol must be nonnegative"));
    }
    records
        .iter()
        .map(|r| {
            let picked = match which {
                Selector::Lowest => r.ordinates.first().copied(),
                Selector::LowestNonvanishing => r.ordinates.iter().copied().find(|&g| g >= vanish_tol),
                Selector::SecondLowest => r.ordinates.get(1).copied(),
            };
            picked.ok_or_else(|| Error::invalid(format!("record d = {} is too short for {which:?}", r.d)))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::stats::mean_normalize;

    #[test]
    fn parses_rows() {
        let recs = read_zero_list("5,0.5\n".as_bytes()).unwrap();
        assert_eq!(recs, vec![ZeroRecord { d: 5, ordinates: vec![0.5] }]);
        let recs = read_zero_list("d,gamma1,gamma2\n# comment\n8, 0.1, 0.4\n\n12,0.3\n".as_bytes()).unwrap();
        assert_eq!(recs.len(), 2);
        assert_eq!(recs[0].ordinates, vec![0.1, 0.4]);
    }

    #[test]
    fn rejects_bad_rows() {
        let err = read_zero_list("5,0.5\n5,0.5,0.3\n".as_bytes()).unwrap_err();
        assert!(matches!(err, Error::Parse { line: 2, .. }), "{err}");
        assert!(matches!(read_zero_list("x,1\n".as_bytes()), Err(Error::Parse { line: 1, .. })));
        assert!(matches!(read_zero_list("5,abc\n".as_bytes()), Err(Error::Parse { line: 1, .. })));
        assert!(read_zero_list("5,-0.1\n".as_bytes()).is_err());
        assert!(read_zero_list("5,0.2,0.2\n".as_bytes()).is_err());
    }

    #[test]
    fn round_trip() {
        let recs = vec![
            ZeroRecord::new(5, vec![0.1234567890123456789, 1.0 / 3.0, 2.5]).unwrap(),
            ZeroRecord::new(8, vec![0.0, 0.7]).unwrap(),
            ZeroRecord::new(13, vec![]).unwrap(),
        ];
        let mut buf = Vec::new();
        write_zero_list(&recs, &mut buf).unwrap();
        assert_eq!(read_zero_list(buf.as_slice()).unwrap(), recs);
    }

    #[test]
    fn selectors() {
        let recs = vec![ZeroRecord::new(5, vec![0.0, 0.7]).unwrap()];
        assert_eq!(lowest_zero_statistic(&recs, Selector::LowestNonvanishing, 1e-6).unwrap(), vec![0.7]);
        assert_eq!(lowest_zero_statistic(&recs, Selector::Lowest, 1e-6).unwrap(), vec![0.0]);
        let recs = vec![ZeroRecord::new(5, vec![0.2, 0.9]).unwrap()];
        assert_eq!(lowest_zero_statistic(&recs, Selector::SecondLowest, VANISH_TOL).unwrap(), vec![0.9]);
        let short = vec![ZeroRecord::new(5, vec![0.2]).unwrap()];
        assert!(lowest_zero_statistic(&short, Selector::SecondLowest, VANISH_TOL).is_err());
        assert!(lowest_zero_statistic(&[], Selector::Lowest, VANISH_TOL).is_err());
    }

    #[test]
    fn lowest_then_normalize_has_mean_one() {
        let recs: Vec<ZeroRecord> = (0..50)
            .map(|i| ZeroRecord::new(i, vec![0.1 + 0.013 * i as f64, 5.0]).unwrap())
            .collect();
        let v = mean_normalize(&lowest_zero_statistic(&recs, Selector::Lowest, VANISH_TOL).unwrap()).unwrap();
        assert!((v.iter().sum::<f64>() / v.len() as f64 - 1.0).abs() < 1e-14);
    }
}
