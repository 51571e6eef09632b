//! Families of fundamental discriminants, their cardinalities, root numbers
//! and the summation identities used to average over them.

use std::f64::consts::{PI, TAU};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::arithmetic::kronecker::kronecker;
use crate::arithmetic::sieve::{is_prime, par_segments, small_primes, squarefree_flags};
use crate::error::{Error, Result};
use crate::theory::SymmetryCase;

/// Twist family of a newform of odd prime level `M` and weight `k`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FamilySpec {
    #[serde(rename = "M")]
    pub m: u64,
    pub k: u32,
    pub case: SymmetryCase,
    pub epsilon_f: i8,
    /// Required for the self-CM case, where the family is `ψ_d(-M) = Δ`.
    #[serde(rename = "Delta", default)]
    pub delta: Option<i8>,
    #[serde(rename = "X")]
    pub x: u64,
    /// Twist by negative discriminants `-X ≤ d < 0` instead.
    #[serde(default)]
    pub negative: bool,
}

impl FamilySpec {
    pub fn new(m: u64, k: u32, case: SymmetryCase, epsilon_f: i8, delta: Option<i8>, x: u64) -> Result<Self> {
        let spec = FamilySpec {
            m,
            k,
            case,
            epsilon_f,
            delta,
            x,
            negative: false,
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        if self.m % 2 == 0 || !is_prime(self.m) {
            return Err(Error::invalid(format!("level M = {} must be an odd prime", self.m)));
        }
        if self.k < 2 {
            return Err(Error::invalid(format!("weight k = {} must be at least 2", self.k)));
        }
        if self.epsilon_f.abs() != 1 {
            return Err(Error::invalid("epsilon_f must be +1 or -1"));
        }
        match (self.case, self.delta) {
            (SymmetryCase::SelfCm, None) => return Err(Error::invalid("the self-CM case needs Delta")),
            (_, Some(d)) if d.abs() != 1 => return Err(Error::invalid("Delta must be +1 or -1")),
            _ => {}
        }
        if self.x < 3 {
            return Err(Error::invalid(format!("X = {} must be at least 3", self.x)));
        }
        if self.x > i64::MAX as u64 / 4 {
            return Err(Error::invalid("X is too large"));
        }
        Ok(())
    }

    fn sign(&self) -> i64 {
        if self.negative {
            -1
        } else {
            1
        }
    }

    /// Whether a fundamental discriminant `d` of the right sign belongs to the family.
    pub fn admits(&self, d: i64) -> bool {
        if d == 1 {
            return false;
        }
        let psi = psi_d_minus_m(d, self.m);
        match self.case {
            SymmetryCase::PrincipalEven => psi * self.epsilon_f == 1,
            SymmetryCase::PrincipalOdd => psi * self.epsilon_f == -1,
            SymmetryCase::SelfCm => Some(psi) == self.delta,
            SymmetryCase::Generic => true,
        }
    }
}

/// `ψ_d(-M) = ψ_d(-1) ψ_d(M)`, with `ψ_d(-1) = sign(d)` for fundamental `d`.
pub fn psi_d_minus_m(d: i64, m: u64) -> i8 {
    kronecker(d, -1) * kronecker(d, m as i64)
}

/// `ψ_d(M)`, which is constant on self-dual families; `None` for the generic
/// case, where it depends on `d`.
pub fn level_character(spec: &FamilySpec) -> Option<i8> {
    let s = spec.sign() as i8;
    match spec.case {
        SymmetryCase::PrincipalEven => Some(s * spec.epsilon_f),
        SymmetryCase::PrincipalOdd => Some(-s * spec.epsilon_f),
        SymmetryCase::SelfCm => spec.delta.map(|d| s * d),
        SymmetryCase::Generic => None,
    }
}

/// Sorted members of the family. `d = 1` is never included.
pub fn enumerate_family(spec: &FamilySpec) -> Result<Vec<i64>> {
    spec.validate()?;
    let x = spec.x;
    let sign = spec.sign();
    let base = small_primes(x.isqrt());
    let mut out = par_segments(1, x, |a, b| {
        let flags = squarefree_flags(a, b, &base);
        let (qa, qb) = (a.div_ceil(4).max(1), (b / 4).max(1));
        let quarter = if qa <= qb { squarefree_flags(qa, qb, &base) } else { Vec::new() };
        let mut seg = Vec::new();
        for n in a..=b {
            let d = sign * n as i64;
            let fundamental = match d.rem_euclid(4) {
                1 => flags[(n - a) as usize],
                0 => {
                    let q = n / 4;
                    matches!((d / 4).rem_euclid(4), 2 | 3) && quarter[(q - qa) as usize]
                }
                _ => false,
            };
            if fundamental && spec.admits(d) {
                seg.push(d);
            }
        }
        seg
    });
    if spec.negative {
        out.reverse();
    }
    Ok(out)
}

/// Leading term of the family size: `3MX/(2π²(M+1))` for self-dual cases,
/// `3MX/(π²(M²-1))` for the generic case.
pub fn cardinality_estimate(spec: &FamilySpec) -> f64 {
    let m = spec.m as f64;
    let x = spec.x as f64;
    if spec.case.is_self_dual() {
        3.0 * m * x / (2.0 * PI * PI * (m + 1.0))
    } else {
        3.0 * m * x / (PI * PI * (m * m - 1.0))
    }
}

/// Nebentypus `ψ_D(d) = (-M/d)` of a self-CM form of level `M ≡ 3 (mod 4)`.
pub fn self_cm_nebentypus(m: u64, d: i64) -> i8 {
    kronecker(-(m as i64), d)
}

/// Root number of the twist, `χ_f(d) ψ_d(-M) ε_f`.
pub fn twisted_root_number(spec: &FamilySpec, d: i64, chi_f_of_d: Complex64) -> Result<Complex64> {
    if d.unsigned_abs() % spec.m == 0 {
        return Err(Error::invalid(format!("d = {d} is not coprime to M = {}", spec.m)));
    }
    let psi = f64::from(psi_d_minus_m(d, spec.m));
    Ok(chi_f_of_d * psi * f64::from(spec.epsilon_f))
}

/// A family sum evaluated directly and by its closed form.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct FamilySum<T> {
    pub direct: T,
    pub closed: T,
    /// `|direct - closed|`.
    pub gap: f64,
    pub count: usize,
}

fn log_analytic_conductor(m: u64, d: i64) -> f64 {
    ((m as f64).sqrt() * d.unsigned_abs() as f64 / TAU).ln()
}

/// `R = log(√M X/(2πe))`, the scale at which the oscillatory identity holds.
pub fn family_log_scale(m: u64, x: u64) -> f64 {
    ((m as f64).sqrt() * x as f64 / TAU).ln() - 1.0
}

/// `Σ log(√M|d|/2π)` over the family against `|D|(log(√M X/2π) - 1)`.
pub fn sum_log_family(spec: &FamilySpec) -> Result<FamilySum<f64>> {
    let ds = enumerate_family(spec)?;
    Ok(sum_log_over(spec, &ds))
}

pub fn sum_log_over(spec: &FamilySpec, ds: &[i64]) -> FamilySum<f64> {
    let direct: f64 = ds.iter().map(|&d| log_analytic_conductor(spec.m, d)).sum();
    let closed = ds.len() as f64 * (((spec.m as f64).sqrt() * spec.x as f64 / TAU).ln() - 1.0);
    FamilySum {
        direct,
        closed,
        gap: (direct - closed).abs(),
        count: ds.len(),
    }
}

/// `Σ (√M|d|/2π)^{-2πiτ/R}` against `|D| e^{-2πiτ - 2πiτ/R}(1 - 2πiτ/R)^{-1}`.
///
/// The closed form is accurate when `R` is [`family_log_scale`].
pub fn oscillatory_family_sum(spec: &FamilySpec, tau: f64, r: f64) -> Result<FamilySum<Complex64>> {
    let ds = enumerate_family(spec)?;
    oscillatory_sum_over(spec, &ds, tau, r)
}

pub fn oscillatory_sum_over(spec: &FamilySpec, ds: &[i64], tau: f64, r: f64) -> Result<FamilySum<Complex64>> {
    if !(r > 0.0) {
        return Err(Error::invalid("R must be positive"));
    }
    if !tau.is_finite() {
        return Err(Error::invalid("tau must be finite"));
    }
    let w = TAU * tau / r;
    let direct: Complex64 = ds
        .iter()
        .map(|&d| Complex64::from_polar(1.0, -w * log_analytic_conductor(spec.m, d)))
        .sum();
    let closed = ds.len() as f64 * Complex64::from_polar(1.0, -TAU * tau - w) / Complex64::new(1.0, -w);
    Ok(FamilySum {
        direct,
        closed,
        gap: (direct - closed).norm(),
        count: ds.len(),
    })
}
