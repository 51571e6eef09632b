//! Run configuration, zero-list ingestion, comparison reports and the
//! command-line front end.

pub mod cli;
pub mod config;
pub mod report;
pub mod run;
pub mod zeros;

pub use config::{ExperimentKind, RunConfig};
pub use report::{compare_report, CompareReport, ReportBin};
pub use run::{read_sample_rows, run, sample_rows, synthetic_zero_list, write_sample_rows, Artifacts, NeffReport, SampleRow};
pub use zeros::{ingest_zero_list, lowest_zero_statistic, read_zero_list, write_zero_list, Selector, ZeroRecord, VANISH_TOL};
