//! Excised random-matrix model for families of quadratic twists of
//! holomorphic cuspidal newforms.
//!
//! The crate is organized by subsystem:
//!
//! * [`haar`]: reproducible Haar sampling from SO(2N), SO(2N+1), USp(2N) and U(N).
//! * [`spectral`]: eigenangles, the characteristic polynomial at 1, first
//!   eigenangles and excision.
//! * [`stats`]: streaming histograms, accumulators and the Monte Carlo drivers
//!   for one-level density, pair correlation and spacing statistics.
//! * [`theory`]: closed-form kernels, lower-order terms, matrix-size formulas
//!   and small-value asymptotics.
//! * [`arithmetic`]: Kronecker symbols, fundamental-discriminant families,
//!   root numbers and truncated Euler products.
//! * [`pipeline`]: configuration, zero-list ingestion, comparison reports and
//!   the command-line front end.

pub mod arithmetic;
pub mod error;
pub mod haar;
pub mod pipeline;
pub mod spectral;
pub mod stats;
pub mod theory;

pub use error::{Error, Result};
pub use haar::{Group, GroupMatrix, GroupSpec, SeedSpec};
pub use spectral::{CharPolyValue, EigenangleSpectrum, ExcisionRule};
pub use stats::{Accumulator, Histogram, Normalization};
