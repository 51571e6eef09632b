//! Small values of `|Λ_A(1)|` on SO(2N) and the resulting vanishing counts.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::theory::special::{barnes_g_half, ln_gamma};

/// Large-N asymptotic `h(N) ~ 2^{-7/8} G(1/2) π^{-1/4} N^{3/8}` for SO(2N).
pub fn h_asymp(n: f64) -> f64 {
    2f64.powf(-7.0 / 8.0) * barnes_g_half() * PI.powf(-0.25) * n.powf(3.0 / 8.0)
}

/// Exact residue at `s = -1/2` of the SO(2N) moment generating function
/// `E|Λ_A(1)|^s = 2^{2Ns} ∏_j Γ(N+j-1)Γ(s+j-1/2)/(Γ(j-1/2)Γ(s+j+N-1))`.
pub fn h_exact_so_even(n: u32) -> f64 {
    let nf = f64::from(n);
    let mut log_h = -nf * 2f64.ln();
    for j in 1..=n {
        let jf = f64::from(j);
        log_h += ln_gamma(nf + jf - 1.0) - ln_gamma(jf - 0.5) - ln_gamma(jf + nf - 1.5);
        if j >= 2 {
            log_h += ln_gamma(jf - 1.0);
        }
    }
    log_h.exp()
}

/// `P(|Λ_A(1)| ≤ ρ) ~ 2 h(N) √ρ`.
pub fn small_value_prob(rho: f64, n: f64) -> Result<f64> {
    if !(rho >= 0.0) {
        return Err(Error::invalid("rho must be nonnegative"));
    }
    Ok(2.0 * h_asymp(n) * rho.sqrt())
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VanishingModel {
    pub k: u32,
    pub delta_f: f64,
    pub kappa_f: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct VanishingCount {
    pub divergent: bool,
    /// Leading term of the count up to `X`; zero when the sum converges.
    pub leading_term: f64,
    /// Power of `X` in the leading term.
    pub exponent: f64,
}

/// Heuristic number of vanishing twists with prime discriminant up to `X`.
///
/// Divergent for `k < 3`, with leading term
/// `(1/(4 log X))·2a·√(δκ)·h(log X)·(4/(5-2k))·X^{(5-2k)/4}`.
pub fn vanishing_count(x: f64, model: &VanishingModel, a_f_half: f64) -> Result<VanishingCount> {
    if model.k < 2 {
        return Err(Error::invalid(format!("weight k must be at least 2, got {}", model.k)));
    }
    if !(x > 2.0) {
        return Err(Error::invalid("X must exceed 2"));
    }
    if !(model.delta_f >= 0.0) || !(model.kappa_f >= 0.0) {
        return Err(Error::invalid("delta_f and kappa_f must be nonnegative"));
    }
    let k = f64::from(model.k);
    let exponent = (5.0 - 2.0 * k) / 4.0;
    if model.k >= 3 {
        return Ok(VanishingCount {
            divergent: false,
            leading_term: 0.0,
            exponent,
        });
    }
    let log_x = x.ln();
    let leading_term = 1.0 / (4.0 * log_x)
        * 2.0
        * a_f_half
        * (model.delta_f * model.kappa_f).sqrt()
        * h_asymp(log_x)
        * (4.0 / (5.0 - 2.0 * k))
        * x.powf(exponent);
    Ok(VanishingCount {
        divergent: true,
        leading_term,
        exponent,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn h_values() {
        assert!((h_asymp(16.0 * 3.0) / h_asymp(3.0) - 16f64.powf(0.375)).abs() < 1e-12);
        assert!((16f64.powf(0.375) - 2.828_427_124_746_19).abs() < 1e-12);
        assert!((h_asymp(20.0) - 0.759_785_056_301_298).abs() < 1e-13);
        assert!((h_asymp(12.0) - 0.627_332_036_155_776).abs() < 1e-13);
        assert!((h_exact_so_even(12) - 0.612_378_830_604_158).abs() < 1e-11);
        assert!((h_exact_so_even(10) - 0.569_058_791_967_845).abs() < 1e-11);
    }

    #[test]
    fn small_value_law() {
        assert_eq!(small_value_prob(0.0, 12.0).unwrap(), 0.0);
        let p = small_value_prob(1e-4, 12.0).unwrap();
        let q = small_value_prob(4e-4, 12.0).unwrap();
        assert!((q / p - 2.0).abs() < 1e-14);
    }

    #[test]
    fn vanishing_examples() {
        let m = VanishingModel { k: 2, delta_f: 1.0, kappa_f: 1.0 };
        let v = vanishing_count(1e6, &m, 1.0).unwrap();
        assert!(v.divergent);
        assert_eq!(v.exponent, 0.25);
        assert!(v.leading_term > 0.0);
        let v4 = vanishing_count(1e6, &VanishingModel { k: 4, ..m }, 1.0).unwrap();
        assert!(!v4.divergent);
        let v0 = vanishing_count(1e6, &VanishingModel { delta_f: 0.0, ..m }, 1.0).unwrap();
        assert_eq!(v0.leading_term, 0.0);
        assert!(vanishing_count(1e6, &VanishingModel { k: 1, ..m }, 1.0).is_err());
    }
}
