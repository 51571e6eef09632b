//! Haar-measure sampling from the four classical compact groups.
//!
//! Every sample is a pure function of `(master_seed, sample_index, GroupSpec)`.
//! Gaussian entries come from a ChaCha stream keyed by the master seed, with
//! the sample index selecting the stream, so samples can be produced in any
//! order and on any number of workers.

use std::fmt;

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand_chacha::rand_core::{RngCore, SeedableRng};
use rand_chacha::ChaCha12Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest supported half-size.
pub const MAX_HALF_SIZE: usize = 64;

/// Unitarity tolerance, max-norm of `A A^† - I`.
pub const UNITARITY_TOL: f64 = 1e-10;
/// Tolerance on `det A = +1` for the special orthogonal groups.
pub const DETERMINANT_TOL: f64 = 1e-8;
/// Tolerance on `A^T J A - J` for the symplectic group.
pub const SYMPLECTIC_TOL: f64 = 1e-10;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Group {
    /// SO(2N)
    SoEven,
    /// SO(2N+1)
    SoOdd,
    /// USp(2N)
    #[serde(rename = "usp")]
    USp,
    /// U(N)
    Unitary,
}

impl Group {
    pub const ALL: [Group; 4] = [Group::SoEven, Group::SoOdd, Group::USp, Group::Unitary];

    pub fn name(self) -> &'static str {
        match self {
            Group::SoEven => "so-even",
            Group::SoOdd => "so-odd",
            Group::USp => "usp",
            Group::Unitary => "unitary",
        }
    }

    /// Whether the spectrum is symmetric under `θ ↦ -θ`.
    pub fn is_self_dual(self) -> bool {
        !matches!(self, Group::Unitary)
    }
}

impl fmt::Display for Group {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl std::str::FromStr for Group {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "so-even" | "soeven" | "so_even" => Ok(Group::SoEven),
            "so-odd" | "soodd" | "so_odd" => Ok(Group::SoOdd),
            "usp" => Ok(Group::USp),
            "unitary" | "u" => Ok(Group::Unitary),
            other => Err(Error::invalid(format!("unknown group `{other}`"))),
        }
    }
}

/// A group together with its half-size `N`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "RawGroupSpec", into = "RawGroupSpec")]
pub struct GroupSpec {
    group: Group,
    n: usize,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawGroupSpec {
    group: Group,
    n: usize,
}

impl TryFrom<RawGroupSpec> for GroupSpec {
    type Error = Error;

    fn try_from(raw: RawGroupSpec) -> Result<Self> {
        GroupSpec::new(raw.group, raw.n)
    }
}

impl From<GroupSpec> for RawGroupSpec {
    fn from(spec: GroupSpec) -> Self {
        RawGroupSpec {
            group: spec.group,
            n: spec.n,
        }
    }
}

impl GroupSpec {
    pub fn new(group: Group, n: usize) -> Result<Self> {
        if n == 0 || n > MAX_HALF_SIZE {
            return Err(Error::invalid(format!(
                "half-size N must lie in 1..={MAX_HALF_SIZE}, got {n}"
            )));
        }
        Ok(GroupSpec { group, n })
    }

    pub fn group(&self) -> Group {
        self.group
    }

    pub fn half_size(&self) -> usize {
        self.n
    }

    /// Matrix dimension: 2N, 2N+1, 2N or N.
    pub fn dim(&self) -> usize {
        match self.group {
            Group::SoEven | Group::USp => 2 * self.n,
            Group::SoOdd => 2 * self.n + 1,
            Group::Unitary => self.n,
        }
    }
}

impl fmt::Display for GroupSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}(N={})", self.group, self.n)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SeedSpec {
    pub master_seed: u64,
    pub sample_index: u64,
}

impl SeedSpec {
    pub fn new(master_seed: u64, sample_index: u64) -> Self {
        SeedSpec {
            master_seed,
            sample_index,
        }
    }
}

/// A sampled group element, stored as a dense complex matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct GroupMatrix {
    spec: GroupSpec,
    entries: DMatrix<Complex64>,
    seed: Option<SeedSpec>,
}

impl GroupMatrix {
    /// Wraps an explicit matrix after checking the group invariants.
    pub fn from_entries(spec: GroupSpec, entries: DMatrix<Complex64>) -> Result<Self> {
        if entries.nrows() != spec.dim() || entries.ncols() != spec.dim() {
            return Err(Error::invalid(format!(
                "{spec} needs a {d}x{d} matrix, got {}x{}",
                entries.nrows(),
                entries.ncols(),
                d = spec.dim()
            )));
        }
        let m = GroupMatrix {
            spec,
            entries,
            seed: None,
        };
        m.check_invariants()?;
        Ok(m)
    }

    pub fn spec(&self) -> GroupSpec {
        self.spec
    }

    pub fn entries(&self) -> &DMatrix<Complex64> {
        &self.entries
    }

    pub fn seed(&self) -> Option<SeedSpec> {
        self.seed
    }

    pub fn dim(&self) -> usize {
        self.entries.nrows()
    }

    pub fn unitarity_defect(&self) -> f64 {
        let prod = &self.entries * self.entries.adjoint();
        max_abs_diff_identity(&prod)
    }

    /// `|det A - 1|`, computed by LU.
    pub fn determinant_defect(&self) -> f64 {
        (self.entries.clone().lu().determinant() - Complex64::new(1.0, 0.0)).norm()
    }

    /// Max-norm of `A^T J A - J`.
    pub fn symplectic_defect(&self) -> f64 {
        let n = self.dim() / 2;
        let j = standard_skew_form(n);
        let lhs = self.entries.transpose() * &j * &self.entries;
        (lhs - j).iter().fold(0.0, |acc, z| acc.max(z.norm()))
    }

    fn check_invariants(&self) -> Result<()> {
        let fail = |what, deviation| Error::Invariant {
            what,
            seed: self.seed,
            deviation,
        };
        let u = self.unitarity_defect();
        if !(u <= UNITARITY_TOL) {
            return Err(fail("unitarity", u));
        }
        match self.spec.group {
            Group::SoEven | Group::SoOdd => {
                let imag = self.entries.iter().fold(0.0f64, |acc, z| acc.max(z.im.abs()));
                if imag != 0.0 {
                    return Err(fail("real entries", imag));
                }
                let d = self.determinant_defect();
                if !(d <= DETERMINANT_TOL) {
                    return Err(fail("determinant", d));
                }
            }
            Group::USp => {
                let s = self.symplectic_defect();
                if !(s <= SYMPLECTIC_TOL) {
                    return Err(fail("symplectic form", s));
                }
            }
            Group::Unitary => {}
        }
        Ok(())
    }
}

/// `J = [[0, I_N], [-I_N, 0]]`.
pub fn standard_skew_form(n: usize) -> DMatrix<Complex64> {
    let mut j = DMatrix::<Complex64>::zeros(2 * n, 2 * n);
    for i in 0..n {
        j[(i, n + i)] = Complex64::new(1.0, 0.0);
        j[(n + i, i)] = Complex64::new(-1.0, 0.0);
    }
    j
}

fn max_abs_diff_identity(m: &DMatrix<Complex64>) -> f64 {
    let mut worst = 0.0f64;
    for j in 0..m.ncols() {
        for i in 0..m.nrows() {
            let target = if i == j { 1.0 } else { 0.0 };
            worst = worst.max((m[(i, j)] - Complex64::new(target, 0.0)).norm());
        }
    }
    worst
}

/// Standard normal deviates by Box–Muller over a ChaCha stream.
///
/// Deviate `e` of sample `(seed, index)` is always the `e`-th value drawn,
/// so entry order fully determines the matrix.
pub struct GaussianStream {
    rng: ChaCha12Rng,
    spare: Option<f64>,
}

impl GaussianStream {
    pub fn new(seed: SeedSpec) -> Self {
        let mut rng = ChaCha12Rng::seed_from_u64(seed.master_seed);
        rng.set_stream(seed.sample_index);
        GaussianStream { rng, spare: None }
    }

    fn uniform_open(&mut self) -> f64 {
        // (k + 0.5) / 2^53 lies strictly inside (0, 1)
        ((self.rng.next_u64() >> 11) as f64 + 0.5) * (1.0 / (1u64 << 53) as f64)
    }

    pub fn next_normal(&mut self) -> f64 {
        if let Some(z) = self.spare.take() {
            return z;
        }
        let u1 = self.uniform_open();
        let u2 = self.uniform_open();
        let radius = (-2.0 * u1.ln()).sqrt();
        let (s, c) = (std::f64::consts::TAU * u2).sin_cos();
        self.spare = Some(radius * s);
        radius * c
    }

    /// Standard complex normal: independent real and imaginary parts of variance 1/2.
    pub fn next_complex(&mut self) -> Complex64 {
        let re = self.next_normal();
        let im = self.next_normal();
        Complex64::new(re, im) * std::f64::consts::FRAC_1_SQRT_2
    }
}

/// Draws one Haar-distributed element of the group.
pub fn sample(spec: GroupSpec, seed: SeedSpec) -> Result<GroupMatrix> {
    let mut gauss = GaussianStream::new(seed);
    let entries = match spec.group {
        Group::Unitary => haar_unitary(spec.dim(), &mut gauss),
        Group::SoEven | Group::SoOdd => haar_special_orthogonal(spec.dim(), &mut gauss),
        Group::USp => haar_symplectic(spec.n, &mut gauss),
    };
    let m = GroupMatrix {
        spec,
        entries,
        seed: Some(seed),
    };
    m.check_invariants()?;
    Ok(m)
}

/// Samples `0..count` for one master seed, lazily and in index order.
pub fn sample_stream(
    spec: GroupSpec,
    master_seed: u64,
    count: u64,
) -> impl Iterator<Item = Result<GroupMatrix>> {
    (0..count).map(move |i| sample(spec, SeedSpec::new(master_seed, i)))
}

fn haar_unitary(n: usize, gauss: &mut GaussianStream) -> DMatrix<Complex64> {
    // filled column-major
    let g = DMatrix::from_fn(n, n, |_, _| gauss.next_complex());
    let qr = g.qr();
    let r = qr.r();
    let mut q = qr.q();
    for j in 0..n {
        let d = r[(j, j)];
        let phase = if d.norm() > 0.0 { d / d.norm() } else { Complex64::new(1.0, 0.0) };
        for i in 0..n {
            q[(i, j)] *= phase;
        }
    }
    q
}

fn haar_special_orthogonal(n: usize, gauss: &mut GaussianStream) -> DMatrix<Complex64> {
    let g = DMatrix::<f64>::from_fn(n, n, |_, _| gauss.next_normal());
    let qr = g.qr();
    let r = qr.r();
    let mut q = qr.q();
    for j in 0..n {
        if r[(j, j)] < 0.0 {
            q.column_mut(j).neg_mut();
        }
    }
    // Haar on O(n); move the det = -1 component onto SO(n)
    if q.clone().lu().determinant() < 0.0 {
        q.column_mut(n - 1).neg_mut();
    }
    q.map(|x| Complex64::new(x, 0.0))
}

/// Quaternionic Gram–Schmidt. Column `j` and column `N + j` form one
/// quaternionic column `(x; y)` and its partner `(-ȳ; x̄)`, which yields
/// matrices of the block form `[[A, B], [-B̄, Ā]]`.
fn haar_symplectic(n: usize, gauss: &mut GaussianStream) -> DMatrix<Complex64> {
    let dim = 2 * n;
    let mut cols: Vec<Vec<Complex64>> = Vec::with_capacity(dim);
    let mut out = DMatrix::<Complex64>::zeros(dim, dim);
    for j in 0..n {
        let mut v: Vec<Complex64> = (0..dim).map(|_| gauss.next_complex()).collect();
        // two passes of classical Gram–Schmidt keep the basis orthonormal to rounding
        for _ in 0..2 {
            for c in &cols {
                let proj: Complex64 = c.iter().zip(&v).map(|(a, b)| a.conj() * b).sum();
                for (vi, ci) in v.iter_mut().zip(c) {
                    *vi -= proj * ci;
                }
            }
        }
        let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        for z in &mut v {
            *z /= norm;
        }
        let partner: Vec<Complex64> = (0..dim)
            .map(|i| if i < n { -v[n + i].conj() } else { v[i - n].conj() })
            .collect();
        for i in 0..dim {
            out[(i, j)] = v[i];
            out[(i, n + j)] = partner[i];
        }
        cols.push(v);
        cols.push(partner);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dimension_mapping() {
        let cases = [
            (Group::SoEven, 3, 6),
            (Group::SoOdd, 3, 7),
            (Group::USp, 3, 6),
            (Group::Unitary, 3, 3),
        ];
        for (g, n, d) in cases {
            assert_eq!(GroupSpec::new(g, n).unwrap().dim(), d);
        }
        assert!(GroupSpec::new(Group::USp, 0).is_err());
        assert!(GroupSpec::new(Group::USp, MAX_HALF_SIZE + 1).is_err());
    }

    #[test]
    fn unitary_one_by_one_has_unit_modulus() {
        let spec = GroupSpec::new(Group::Unitary, 1).unwrap();
        for i in 0..20 {
            let m = sample(spec, SeedSpec::new(3, i)).unwrap();
            assert!((m.entries()[(0, 0)].norm() - 1.0).abs() < 1e-14);
        }
    }

    #[test]
    fn so_three_fixes_a_vector() {
        let spec = GroupSpec::new(Group::SoOdd, 1).unwrap();
        for i in 0..20 {
            let m = sample(spec, SeedSpec::new(11, i)).unwrap();
            assert!((m.entries().clone().lu().determinant().re - 1.0).abs() < 1e-12);
            let eye = DMatrix::<Complex64>::identity(3, 3);
            let det = (eye - m.entries()).lu().determinant();
            assert!(det.norm() < 1e-12, "det(I - A) = {det}");
        }
    }

    #[test]
    fn every_group_passes_invariants() {
        for g in Group::ALL {
            for n in [1, 2, 5, 10] {
                let spec = GroupSpec::new(g, n).unwrap();
                for i in 0..10 {
                    let m = sample(spec, SeedSpec::new(99, i)).unwrap();
                    assert_eq!(m.dim(), spec.dim());
                    assert!(m.unitarity_defect() <= UNITARITY_TOL);
                }
            }
        }
    }

    #[test]
    fn symplectic_block_structure() {
        let spec = GroupSpec::new(Group::USp, 4).unwrap();
        let m = sample(spec, SeedSpec::new(5, 0)).unwrap();
        let a = m.entries();
        for i in 0..4 {
            for j in 0..4 {
                assert!((a[(i + 4, j + 4)] - a[(i, j)].conj()).norm() < 1e-12);
                assert!((a[(i + 4, j)] + a[(i, j + 4)].conj()).norm() < 1e-12);
            }
        }
        assert!(m.symplectic_defect() < 1e-12);
    }

    #[test]
    fn sampling_is_a_pure_function_of_the_seed() {
        let spec = GroupSpec::new(Group::USp, 3).unwrap();
        let a = sample(spec, SeedSpec::new(42, 17)).unwrap();
        let b = sample(spec, SeedSpec::new(42, 17)).unwrap();
        let c = sample(spec, SeedSpec::new(42, 18)).unwrap();
        assert_eq!(a, b);
        assert_ne!(a.entries(), c.entries());
        let streamed: Vec<_> = sample_stream(spec, 42, 19).map(|m| m.unwrap()).collect();
        assert_eq!(streamed[17], a);
    }

    #[test]
    fn from_entries_rejects_non_members() {
        let spec = GroupSpec::new(Group::SoEven, 1).unwrap();
        let mut m = DMatrix::<Complex64>::identity(2, 2);
        m[(1, 1)] = Complex64::new(-1.0, 0.0);
        assert!(matches!(
            GroupMatrix::from_entries(spec, m),
            Err(Error::Invariant { what: "determinant", .. })
        ));
        let spec = GroupSpec::new(Group::Unitary, 2).unwrap();
        let m = DMatrix::<Complex64>::from_element(2, 2, Complex64::new(1.0, 0.0));
        assert!(GroupMatrix::from_entries(spec, m).is_err());
    }

    #[test]
    fn box_muller_moments() {
        let mut g = GaussianStream::new(SeedSpec::new(1, 0));
        let n = 200_000;
        let (mut s, mut s2) = (0.0, 0.0);
        for _ in 0..n {
            let z = g.next_normal();
            s += z;
            s2 += z * z;
        }
        let mean = s / n as f64;
        let var = s2 / n as f64 - mean * mean;
        assert!(mean.abs() < 0.01);
        assert!((var - 1.0).abs() < 0.01);
    }
}
