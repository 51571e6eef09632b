//! Eigenangles, the characteristic polynomial at 1, first eigenangles and
//! excision on `|Λ_A(1)|`.

pub mod eigen;

use std::f64::consts::PI;

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::haar::{Group, GroupMatrix, GroupSpec};

/// Hard limit on `||λ| - 1|` before projection to the unit circle.
pub const UNIT_CIRCLE_TOL: f64 = 1e-6;
/// Relative agreement required between the LU and eigenvalue-product values of `det(I - A)`.
pub const CHARPOLY_REL_TOL: f64 = 1e-6;
/// Absolute floor for the same comparison, for values at rounding level.
pub const CHARPOLY_ABS_TOL: f64 = 1e-9;

/// Sorted eigenangles in `(-π, π]`.
#[derive(Clone, Debug, PartialEq)]
pub struct EigenangleSpectrum {
    spec: GroupSpec,
    angles: Vec<f64>,
    /// Index of the structural zero of SO(2N+1).
    forced_zero: Option<usize>,
}

impl EigenangleSpectrum {
    /// Builds a spectrum from explicit angles, folding each into `(-π, π]`.
    pub fn from_angles(spec: GroupSpec, angles: Vec<f64>) -> Result<Self> {
        if angles.len() != spec.dim() {
            return Err(Error::invalid(format!(
                "{spec} has {} eigenangles, got {}",
                spec.dim(),
                angles.len()
            )));
        }
        if angles.iter().any(|a| !a.is_finite()) {
            return Err(Error::invalid("eigenangles must be finite"));
        }
        let mut angles: Vec<f64> = angles.into_iter().map(canonical_angle).collect();
        angles.sort_by(f64::total_cmp);
        let forced_zero = match spec.group() {
            Group::SoOdd => smallest_magnitude_index(&angles),
            _ => None,
        };
        Ok(EigenangleSpectrum {
            spec,
            angles,
            forced_zero,
        })
    }

    pub fn spec(&self) -> GroupSpec {
        self.spec
    }

    pub fn angles(&self) -> &[f64] {
        &self.angles
    }

    pub fn len(&self) -> usize {
        self.angles.len()
    }

    pub fn is_empty(&self) -> bool {
        self.angles.is_empty()
    }

    pub fn forced_zero_index(&self) -> Option<usize> {
        self.forced_zero
    }

    /// Angles with the SO(2N+1) structural zero removed by index.
    pub fn without_forced_zero(&self) -> Vec<f64> {
        let mut out = self.angles.clone();
        if let Some(i) = self.forced_zero {
            out.remove(i);
        }
        out
    }

    /// `∏ (1 - e^{iθ_j})`.
    pub fn char_poly_product(&self) -> Complex64 {
        self.angles
            .iter()
            .map(|&t| Complex64::new(1.0, 0.0) - Complex64::from_polar(1.0, t))
            .product()
    }
}

fn smallest_magnitude_index(angles: &[f64]) -> Option<usize> {
    angles
        .iter()
        .enumerate()
        .min_by(|a, b| a.1.abs().total_cmp(&b.1.abs()))
        .map(|(i, _)| i)
}

/// Folds an angle into `(-π, π]`.
pub fn canonical_angle(theta: f64) -> f64 {
    if theta > -PI && theta <= PI {
        return theta;
    }
    let mut t = theta.rem_euclid(2.0 * PI);
    if t > PI {
        t -= 2.0 * PI;
    }
    if t <= -PI {
        t = PI;
    }
    t
}

fn angle_of(z: Complex64) -> f64 {
    let t = z.im.atan2(z.re);
    if t == -PI {
        PI
    } else {
        t
    }
}

/// Eigenangles of a group element.
///
/// Self-dual spectra are symmetrized: magnitudes `|θ|` are sorted, consecutive
/// pairs are averaged and each average `φ` contributes `±φ`. For SO(2N+1) the
/// smallest magnitude is the structural eigenvalue 1 and is set to exactly 0.
pub fn eigenangles(a: &GroupMatrix) -> Result<EigenangleSpectrum> {
    let spec = a.spec();
    let seed = a.seed();
    let values = eigen::eigenvalues(a.entries()).map_err(|s| Error::NoConvergence {
        dim: spec.dim(),
        iterations: s.iterations,
        seed,
    })?;
    let mut raw = Vec::with_capacity(values.len());
    for z in values {
        let modulus = z.norm();
        if !((modulus - 1.0).abs() <= UNIT_CIRCLE_TOL) {
            return Err(Error::OffUnitCircle { modulus, seed });
        }
        raw.push(angle_of(z / modulus));
    }
    let angles = match spec.group() {
        Group::Unitary => raw,
        Group::SoEven | Group::USp => symmetrize(raw, false),
        Group::SoOdd => symmetrize(raw, true),
    };
    EigenangleSpectrum::from_angles(spec, angles)
}

fn symmetrize(raw: Vec<f64>, odd: bool) -> Vec<f64> {
    let mut mags: Vec<f64> = raw.iter().map(|t| t.abs()).collect();
    mags.sort_by(f64::total_cmp);
    let mut out = Vec::with_capacity(raw.len());
    let paired = if odd {
        out.push(0.0);
        &mags[1..]
    } else {
        &mags[..]
    };
    for pair in paired.chunks_exact(2) {
        let phi = 0.5 * (pair[0] + pair[1]);
        out.push(phi);
        out.push(-phi);
    }
    out
}

/// `det(I - A)` together with its modulus.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CharPolyValue {
    value: Complex64,
    magnitude: f64,
}

impl CharPolyValue {
    pub fn new(value: Complex64) -> Self {
        CharPolyValue {
            value,
            magnitude: value.norm(),
        }
    }

    pub fn value(&self) -> Complex64 {
        self.value
    }

    pub fn magnitude(&self) -> f64 {
        self.magnitude
    }
}

/// `det(I - A)` by LU with partial pivoting, without the spectral cross-check.
pub fn det_i_minus_a(a: &DMatrix<Complex64>) -> Complex64 {
    let n = a.nrows();
    (DMatrix::<Complex64>::identity(n, n) - a).lu().determinant()
}

/// `det(I - A)` by LU, checked against `∏ (1 - e^{iθ_j})` over the spectrum.
pub fn char_poly_at_one(a: &GroupMatrix) -> Result<CharPolyValue> {
    let spectrum = eigenangles(a)?;
    char_poly_at_one_with(a, &spectrum)
}

/// As [`char_poly_at_one`], reusing an already computed spectrum.
pub fn char_poly_at_one_with(a: &GroupMatrix, spectrum: &EigenangleSpectrum) -> Result<CharPolyValue> {
    let lu = det_i_minus_a(a.entries());
    let product = spectrum.char_poly_product();
    let gap = (lu - product).norm();
    if !(gap <= CHARPOLY_REL_TOL * lu.norm() + CHARPOLY_ABS_TOL) {
        return Err(Error::CharPolyMismatch {
            lu: lu.norm(),
            product: product.norm(),
            seed: a.seed(),
        });
    }
    Ok(CharPolyValue::new(lu))
}

/// Smallest strictly positive eigenangle.
///
/// With `exclude_forced_zero` on an SO(2N+1) spectrum the structural zero is
/// removed first; other spectra are unaffected by the flag.
pub fn first_eigenangle(s: &EigenangleSpectrum, exclude_forced_zero: bool) -> Option<f64> {
    let pick = |it: &mut dyn Iterator<Item = f64>| it.filter(|&t| t > 0.0).reduce(f64::min);
    if exclude_forced_zero {
        pick(&mut s.without_forced_zero().into_iter())
    } else {
        pick(&mut s.angles().iter().copied())
    }
}

/// Keeps matrices with `|Λ_A(1)| ≥ c·exp((1 - k)·n_std/2)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExcisionRule {
    pub c: f64,
    pub k: u32,
    pub n_std: f64,
}

impl ExcisionRule {
    /// `k = 1` is accepted: it is the degenerate rule with threshold `c`.
    pub fn new(c: f64, k: u32, n_std: f64) -> Result<Self> {
        let rule = ExcisionRule { c, k, n_std };
        rule.validate()?;
        Ok(rule)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.c >= 0.0) || !self.c.is_finite() {
            return Err(Error::invalid(format!("cutoff c must be finite and nonnegative, got {}", self.c)));
        }
        if self.k < 1 {
            return Err(Error::invalid("weight k must be at least 1"));
        }
        if !self.n_std.is_finite() {
            return Err(Error::invalid("n_std must be finite"));
        }
        Ok(())
    }

    pub fn threshold(&self) -> f64 {
        self.c * ((1.0 - self.k as f64) * self.n_std / 2.0).exp()
    }

    pub fn keeps(&self, v: &CharPolyValue) -> bool {
        v.magnitude() >= self.threshold()
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExcisionCounts {
    pub kept: u64,
    pub total: u64,
}

/// Filters `(value, payload)` pairs, tallying kept and total counts.
pub struct Excise<'a, I> {
    inner: I,
    threshold: f64,
    counts: &'a mut ExcisionCounts,
}

impl<I, P> Iterator for Excise<'_, I>
where
    I: Iterator<Item = (CharPolyValue, P)>,
{
    type Item = (CharPolyValue, P);

    fn next(&mut self) -> Option<Self::Item> {
        for (v, p) in self.inner.by_ref() {
            self.counts.total += 1;
            if v.magnitude() >= self.threshold {
                self.counts.kept += 1;
                return Some((v, p));
            }
        }
        None
    }
}

pub fn excise<'a, I, P>(
    values: I,
    rule: &ExcisionRule,
    counts: &'a mut ExcisionCounts,
) -> Excise<'a, I::IntoIter>
where
    I: IntoIterator<Item = (CharPolyValue, P)>,
{
    Excise {
        inner: values.into_iter(),
        threshold: rule.threshold(),
        counts,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::haar::{sample, SeedSpec};

    fn spec(g: Group, n: usize) -> GroupSpec {
        GroupSpec::new(g, n).unwrap()
    }

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    #[test]
    fn identity_has_zero_angles() {
        let s = spec(Group::Unitary, 3);
        let m = GroupMatrix::from_entries(s, DMatrix::identity(3, 3)).unwrap();
        assert_eq!(eigenangles(&m).unwrap().angles(), &[0.0, 0.0, 0.0]);
    }

    #[test]
    fn minus_identity_maps_to_plus_pi() {
        let s = spec(Group::Unitary, 2);
        let m = GroupMatrix::from_entries(s, DMatrix::from_diagonal_element(2, 2, c(-1.0))).unwrap();
        let spectrum = eigenangles(&m).unwrap();
        assert_eq!(spectrum.angles(), &[PI, PI]);
        let v = char_poly_at_one(&m).unwrap();
        assert!((v.value() - c(4.0)).norm() < 1e-14);
        assert_eq!(v.magnitude(), v.value().norm());
    }

    #[test]
    fn minus_identity_in_so_even() {
        let s = spec(Group::SoEven, 2);
        let m = GroupMatrix::from_entries(s, DMatrix::from_diagonal_element(4, 4, c(-1.0))).unwrap();
        assert_eq!(eigenangles(&m).unwrap().angles(), &[PI; 4]);
    }

    #[test]
    fn so_odd_contains_zero_and_is_symmetric() {
        let s = spec(Group::SoOdd, 5);
        for i in 0..20 {
            let m = sample(s, SeedSpec::new(8, i)).unwrap();
            let sp = eigenangles(&m).unwrap();
            assert_eq!(sp.len(), 11);
            let z = sp.forced_zero_index().unwrap();
            assert_eq!(sp.angles()[z], 0.0);
            let a = sp.angles();
            for j in 0..a.len() {
                assert_eq!(a[j], -a[a.len() - 1 - j]);
            }
            let v = char_poly_at_one(&m).unwrap();
            assert!(v.magnitude() < 1e-10);
        }
    }

    #[test]
    fn first_eigenangle_examples() {
        let s = spec(Group::Unitary, 3);
        let sp = EigenangleSpectrum::from_angles(s, vec![-0.3, 0.1, 0.3]).unwrap();
        assert_eq!(first_eigenangle(&sp, false), Some(0.1));

        let s = spec(Group::SoOdd, 1);
        let sp = EigenangleSpectrum::from_angles(s, vec![-0.4, 0.0, 0.4]).unwrap();
        assert_eq!(first_eigenangle(&sp, true), Some(0.4));
        assert_eq!(first_eigenangle(&sp, false), Some(0.4));

        let s = spec(Group::Unitary, 2);
        let sp = EigenangleSpectrum::from_angles(s, vec![-0.5, 0.0]).unwrap();
        assert_eq!(first_eigenangle(&sp, false), None);
    }

    #[test]
    fn forced_zero_removed_by_index_not_threshold() {
        let s = spec(Group::SoOdd, 2);
        let sp = EigenangleSpectrum::from_angles(s, vec![-1e-9, 0.0, 1e-9, 1.0, -1.0]).unwrap();
        assert_eq!(sp.without_forced_zero().len(), 4);
        assert_eq!(first_eigenangle(&sp, true), Some(1e-9));
    }

    #[test]
    fn excision_threshold_and_counts() {
        let rule = ExcisionRule::new(0.0, 2, 8.0).unwrap();
        let vals: Vec<_> = (0..5).map(|i| (CharPolyValue::new(c(i as f64)), i)).collect();
        let mut counts = ExcisionCounts::default();
        assert_eq!(excise(vals.clone(), &rule, &mut counts).count(), 5);
        assert_eq!(counts, ExcisionCounts { kept: 5, total: 5 });

        let rule = ExcisionRule::new(2.5, 1, 123.0).unwrap();
        assert_eq!(rule.threshold(), 2.5);
        let mut counts = ExcisionCounts::default();
        let kept: Vec<_> = excise(vals, &rule, &mut counts).map(|(_, p)| p).collect();
        assert_eq!(kept, vec![3, 4]);
        assert_eq!(counts, ExcisionCounts { kept: 2, total: 5 });

        assert!(ExcisionRule::new(-1.0, 2, 1.0).is_err());
        assert!(ExcisionRule::new(1.0, 0, 1.0).is_err());
    }

    #[test]
    fn canonical_angle_range() {
        assert_eq!(canonical_angle(-PI), PI);
        assert_eq!(canonical_angle(PI), PI);
        assert!((canonical_angle(3.0 * PI / 2.0) + PI / 2.0).abs() < 1e-15);
    }
}
