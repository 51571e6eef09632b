//! Pair correlation: the sine-kernel limit, the U(N) finite-size correction,
//! the arithmetic expansion and the L²-optimal matrix size.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::theory::lower_order::n_eff_generic;
use crate::theory::quadrature::{adaptive_simpson_split, golden_section};
use crate::theory::special::{sinc, EULER_GAMMA, STIELTJES_1};

/// `1 - (sin πy/πy)²`.
pub fn montgomery_r2(y: f64) -> f64 {
    let x = PI * y;
    if x.abs() < 0.1 {
        let x2 = x * x;
        return x2 * (1.0 / 3.0 - x2 * (2.0 / 45.0 - x2 * (1.0 / 315.0 - x2 * 2.0 / 14175.0)));
    }
    let s = sinc(x);
    1.0 - s * s
}

/// `Q_{U(N)}(x) = 1 - (sin πx/πx)² - sin²(πx)/(3N²)`.
pub fn u_pair_corr(x: f64, n: u32) -> f64 {
    let s = (PI * x).sin();
    let nf = f64::from(n);
    montgomery_r2(x) - s * s / (3.0 * nf * nf)
}

/// Exact scaled pair correlation of U(N): `1 - (sin πx / (N sin(πx/N)))²`.
pub fn u_pair_corr_exact(x: f64, n: u32) -> f64 {
    let nf = f64::from(n);
    let t = PI * x / nf;
    // sin(Nt)/(N sin t) via the scaled sin ratio
    let ratio = crate::theory::special::sin_ratio(n, t) / nf;
    1.0 - ratio * ratio
}

/// Pair-correlation coefficients with the optional raw inputs they come from.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct PairCorrCoefficients {
    pub e1: f64,
    pub e2: f64,
    pub e3: f64,
    /// `𝒜″(0)`
    pub app0: Option<f64>,
    /// `𝒜‴(0)`
    pub appp0: Option<f64>,
    /// `(L′/L)′(1, ad²f_d)`
    pub lp_ad_prime: Option<f64>,
    /// `|λ_{f_d}(M)|²`
    pub lambda_m_sq: Option<f64>,
    /// Level `M`.
    pub m: Option<f64>,
}

impl PairCorrCoefficients {
    pub fn new(e1: f64, e2: f64, e3: f64) -> Self {
        PairCorrCoefficients {
            e1,
            e2,
            e3,
            ..Default::default()
        }
    }

    /// Builds `e₁, e₂, e₃` from the raw inputs.
    pub fn from_raw(m: f64, lambda_m_sq: f64, app0: f64, appp0: f64, lp_ad_prime: f64) -> Result<Self> {
        let (e1, e2, e3) = e_coefficients(m, lambda_m_sq, app0, appp0, lp_ad_prime)?;
        Ok(PairCorrCoefficients {
            e1,
            e2,
            e3,
            app0: Some(app0),
            appp0: Some(appp0),
            lp_ad_prime: Some(lp_ad_prime),
            lambda_m_sq: Some(lambda_m_sq),
            m: Some(m),
        })
    }

    /// Recomputes `e₁, e₂, e₃` from the raw fields, which must all be present.
    pub fn recompute(&self) -> Result<(f64, f64, f64)> {
        e_coefficients(
            self.m.ok_or(Error::MissingInput("m"))?,
            self.lambda_m_sq.ok_or(Error::MissingInput("lambda_m_sq"))?,
            self.app0.ok_or(Error::MissingInput("app0"))?,
            self.appp0.ok_or(Error::MissingInput("appp0"))?,
            self.lp_ad_prime.ok_or(Error::MissingInput("lp_ad_prime"))?,
        )
    }
}

/// `e₁ = ½ log(M)²/(|λ(M)|⁻² M - 1)`,
/// `e₂ = -2 + γ² + 2γ₁ - 𝒜″(0)/2 - (L′/L)′(1, ad²)`,
/// `e₃ = (16 + 𝒜‴(0))/12`.
pub fn e_coefficients(m: f64, lambda_m_sq: f64, app0: f64, appp0: f64, lp_ad_prime: f64) -> Result<(f64, f64, f64)> {
    if !(lambda_m_sq > 0.0) {
        return Err(Error::ZeroCoefficient("lambda_m_sq"));
    }
    if !(m > 1.0) {
        return Err(Error::invalid("level M must exceed 1"));
    }
    let denom = m / lambda_m_sq - 1.0;
    if denom == 0.0 {
        return Err(Error::ZeroCoefficient("|λ(M)|⁻²M - 1"));
    }
    let lm = m.ln();
    let e1 = 0.5 * lm * lm / denom;
    let e2 = -2.0 + EULER_GAMMA * EULER_GAMMA + 2.0 * STIELTJES_1 - app0 / 2.0 - lp_ad_prime;
    let e3 = (16.0 + appp0) / 12.0;
    Ok((e1, e2, e3))
}

/// `1 - (sin πy/πy)² + (e₁ - e₂ sin²πy)/R² - e₃ πy sin 2πy/R³`.
pub fn pair_corr_expansion(y: f64, r: f64, e: &PairCorrCoefficients) -> Result<f64> {
    if !(r > 0.0) {
        return Err(Error::invalid("R must be positive"));
    }
    let s = (PI * y).sin();
    Ok(montgomery_r2(y) + (e.e1 - e.e2 * s * s) / (r * r) - e.e3 * PI * y * (2.0 * PI * y).sin() / (r * r * r))
}

/// `∫_{-t}^{t} |(e₁ - e₂ sin²πy)/R² + sin²πy/(3N²)|² dy`.
pub fn l2_objective(e1: f64, e2: f64, r: f64, n: f64, periods: u32) -> f64 {
    let t = f64::from(periods);
    // scaled by R⁴ so the integrand is O(1)
    let v = r * r / (3.0 * n * n);
    let f = |y: f64| {
        let s = (PI * y).sin().powi(2);
        let w = e1 + (v - e2) * s;
        w * w
    };
    let scale = e1 * e1 + (v - e2) * (v - e2);
    let tol = 1e-13 * t * scale.max(1.0);
    adaptive_simpson_split(f, -t, t, tol, 8 * periods as usize) / (r * r * r * r)
}

/// Numerical minimizer in `N` of [`l2_objective`], by golden-section search
/// over `log N`. Requires `3e₂ - 4e₁ > 0`.
pub fn n_eff_l2_optimize(e1: f64, e2: f64, r: f64, periods: u32) -> Result<f64> {
    let disc = 3.0 * e2 - 4.0 * e1;
    if !(disc > 0.0) {
        return Err(Error::NonpositiveDiscriminant(disc));
    }
    if !(r > 0.0) {
        return Err(Error::invalid("R must be positive"));
    }
    if periods == 0 {
        return Err(Error::invalid("at least one period is needed"));
    }
    let centre = r.ln();
    let log_n = golden_section(|ln| l2_objective(e1, e2, r, ln.exp(), periods), centre - 12.0, centre + 12.0, 1e-10);
    Ok(log_n.exp())
}

/// Closed-form counterpart of [`n_eff_l2_optimize`].
pub fn n_eff_l2_closed_form(e1: f64, e2: f64, r: f64) -> Result<f64> {
    n_eff_generic(e1, e2, r)
}
