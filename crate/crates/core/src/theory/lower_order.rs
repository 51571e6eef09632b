//! Lower-order terms of the scaled one-level density and the matrix sizes
//! derived from them.

use std::f64::consts::{PI, TAU};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::haar::Group;
use crate::theory::special::{digamma, sinc, EULER_GAMMA, STIELTJES_1};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SymmetryCase {
    /// Principal nebentypus, even twists.
    PrincipalEven,
    /// Principal nebentypus, odd twists.
    PrincipalOdd,
    /// Non-principal nebentypus, self-dual (self-CM).
    SelfCm,
    /// Non-principal nebentypus, not self-dual.
    Generic,
}

impl SymmetryCase {
    pub const ALL: [SymmetryCase; 4] = [
        SymmetryCase::PrincipalEven,
        SymmetryCase::PrincipalOdd,
        SymmetryCase::SelfCm,
        SymmetryCase::Generic,
    ];

    pub fn group(self) -> Group {
        match self {
            SymmetryCase::PrincipalEven => Group::SoEven,
            SymmetryCase::PrincipalOdd => Group::SoOdd,
            SymmetryCase::SelfCm => Group::USp,
            SymmetryCase::Generic => Group::Unitary,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            SymmetryCase::PrincipalEven => "principal-even",
            SymmetryCase::PrincipalOdd => "principal-odd",
            SymmetryCase::SelfCm => "self-cm",
            SymmetryCase::Generic => "generic",
        }
    }

    pub fn is_self_dual(self) -> bool {
        !matches!(self, SymmetryCase::Generic)
    }
}

impl fmt::Display for SymmetryCase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl std::str::FromStr for SymmetryCase {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        SymmetryCase::ALL
            .into_iter()
            .find(|c| c.name() == s.to_ascii_lowercase())
            .ok_or_else(|| Error::invalid(format!("unknown case `{s}`")))
    }
}

/// One-level coefficients and the L-function constants they are built from.
///
/// `*_bar` fields belong to the conjugate form `f̄` (generic case only).
/// `euler_gamma` and `stieltjes1` default to the standard constants and
/// `digamma_k2` to `ψ(k/2)`.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct CoefficientInputs {
    pub a1: Option<f64>,
    pub a2: Option<f64>,
    pub a3: Option<f64>,
    pub a4: Option<f64>,
    pub b1: Option<f64>,
    pub b2: Option<f64>,
    pub c1: Option<f64>,
    pub c2: Option<f64>,
    pub d1: Option<f64>,

    /// `A_f¹(0,0)`
    pub a1_00: Option<f64>,
    /// `B′(0)`; when absent, `-2·A_f¹(0,0)`.
    pub bp0: Option<f64>,
    /// `B″(0)`
    pub bpp0: Option<f64>,
    /// `L′/L(1, sym²f)`
    pub lp_sym: Option<f64>,
    /// `L″/L(1, sym²f)`
    pub lpp_sym: Option<f64>,
    /// `L′/L(1, χ′_f)`
    pub lp_chi: Option<f64>,
    /// `L″/L(1, χ′_f)`
    pub lpp_chi: Option<f64>,
    /// Laurent coefficients of `L(1 + s, sym²f)`.
    pub xi0: Option<f64>,
    pub xi1: Option<f64>,
    /// `L(1, χ′_f)`
    pub l1_chi: Option<f64>,
    /// `L(1, ad²f)`
    pub l1_ad: Option<f64>,
    pub euler_gamma: Option<f64>,
    pub stieltjes1: Option<f64>,
    /// `ψ(k/2)`
    pub digamma_k2: Option<f64>,

    /// Generic case: `η_f`, the mean root number over the family.
    pub eta: Option<f64>,
    pub eta_bar: Option<f64>,
    pub a1_00_bar: Option<f64>,
    pub lp_chi_bar: Option<f64>,
    pub lp_sym_bar: Option<f64>,
    /// `Ã_f(0,0)`
    pub atilde_00: Option<f64>,
    pub atilde_00_bar: Option<f64>,
    /// `B̃′_f(0)`
    pub btilde_p0: Option<f64>,
    pub btilde_p0_bar: Option<f64>,
    pub l1_chi_bar: Option<f64>,
    /// `L(1, sym²f)`
    pub l1_sym: Option<f64>,
    pub l1_sym_bar: Option<f64>,
    pub l1_ad_bar: Option<f64>,
    /// `L′(1, sym²f)`
    pub lprime1_sym: Option<f64>,
    pub lprime1_sym_bar: Option<f64>,
}

fn need(v: Option<f64>, name: &'static str) -> Result<f64> {
    match v {
        Some(x) if x.is_finite() => Ok(x),
        Some(_) => Err(Error::invalid(format!("input `{name}` is not finite"))),
        None => Err(Error::MissingInput(name)),
    }
}

impl CoefficientInputs {
    fn gamma(&self) -> f64 {
        self.euler_gamma.unwrap_or(EULER_GAMMA)
    }

    fn gamma1(&self) -> f64 {
        self.stieltjes1.unwrap_or(STIELTJES_1)
    }

    fn psi(&self, k: u32) -> f64 {
        self.digamma_k2.unwrap_or_else(|| digamma(f64::from(k) / 2.0))
    }

    fn bp(&self) -> Result<f64> {
        match self.bp0 {
            Some(b) => Ok(b),
            None => Ok(-2.0 * need(self.a1_00, "a1_00")?),
        }
    }
}

/// Fills in the case's coefficients from the raw constants.
///
/// Coefficients already present are recomputed; raw inputs are left untouched.
pub fn coefficient_assembly(case: SymmetryCase, k: u32, inputs: &CoefficientInputs) -> Result<CoefficientInputs> {
    if k < 1 {
        return Err(Error::invalid("weight k must be positive"));
    }
    let mut out = inputs.clone();
    let psi = inputs.psi(k);
    let g = inputs.gamma();
    let g1 = inputs.gamma1();
    match case {
        SymmetryCase::PrincipalEven | SymmetryCase::PrincipalOdd => {
            let a100 = need(inputs.a1_00, "a1_00")?;
            let lp = need(inputs.lp_sym, "lp_sym")?;
            if case == SymmetryCase::PrincipalEven {
                out.a1 = Some(1.0 - psi - a100 + g - lp);
                if let (Some(lpp), Some(bpp)) = (inputs.lpp_sym, inputs.bpp0) {
                    let bp = inputs.bp()?;
                    out.a2 = Some(
                        -2.0 * psi - 2.0 * psi * g + 2.0 * g - 2.0 * g1
                            + (2.0 * psi - 2.0 - 2.0 * g - bp) * lp
                            + (g + 1.0 - psi) * bp
                            + bpp / 4.0
                            + 2.0 * lpp,
                    );
                }
            } else {
                out.a3 = Some(2.0 - 2.0 * psi + 2.0 * g1 - 2.0 * lp - 2.0 * a100);
                if let (Some(lpp), Some(bpp)) = (inputs.lpp_sym, inputs.bpp0) {
                    let bp = inputs.bp()?;
                    out.a4 = Some(
                        4.0 * psi + 4.0 * psi * g + 4.0 * g1 + (2.0 * psi - 2.0 - 2.0 * g) * bp
                            + (4.0 + 4.0 * g + 2.0 * bp - 4.0 * psi) * lp
                            - bpp / 2.0
                            - lpp,
                    );
                }
            }
        }
        SymmetryCase::SelfCm => {
            let a100 = need(inputs.a1_00, "a1_00")?;
            let lp_chi = need(inputs.lp_chi, "lp_chi")?;
            let xi0 = need(inputs.xi0, "xi0")?;
            let l1_chi = need(inputs.l1_chi, "l1_chi")?;
            // the ratio only matters when its numerator is nonzero
            let ratio = if l1_chi == 0.0 {
                0.0
            } else {
                let l1_ad = need(inputs.l1_ad, "l1_ad")?;
                if !(l1_ad > 0.0) {
                    return Err(Error::invalid("L(1, ad²f) must be positive"));
                }
                l1_chi / l1_ad
            };
            out.b1 = Some(1.0 - psi - xi0 * ratio - a100 + lp_chi);
            if let (Some(lpp_chi), Some(bpp), Some(xi1)) = (inputs.lpp_chi, inputs.bpp0, inputs.xi1) {
                let bp = inputs.bp()?;
                out.b2 = Some(
                    -2.0 * psi + bp - psi * bp + bpp / 4.0 + 2.0 * lpp_chi
                        + lp_chi * (-2.0 * xi0 + bp + 2.0 - 2.0 * psi)
                        + ratio * (2.0 * psi * xi0 - 2.0 * xi0 + 2.0 * xi1 - xi0 * bp),
                );
            }
        }
        SymmetryCase::Generic => {
            out.c1 = Some(
                psi + 0.5
                    * (need(inputs.a1_00, "a1_00")? + need(inputs.a1_00_bar, "a1_00_bar")?
                        - need(inputs.lp_chi, "lp_chi")?
                        - need(inputs.lp_chi_bar, "lp_chi_bar")?
                        + need(inputs.lp_sym, "lp_sym")?
                        + need(inputs.lp_sym_bar, "lp_sym_bar")?),
            );
            let eta = need(inputs.eta, "eta")?;
            let eta_bar = need(inputs.eta_bar, "eta_bar")?;
            let at = need(inputs.atilde_00, "atilde_00")?;
            let at_bar = need(inputs.atilde_00_bar, "atilde_00_bar")?;
            let lc = need(inputs.l1_chi, "l1_chi")?;
            let lc_bar = need(inputs.l1_chi_bar, "l1_chi_bar")?;
            let ls = need(inputs.l1_sym, "l1_sym")?;
            let ls_bar = need(inputs.l1_sym_bar, "l1_sym_bar")?;
            let la = need(inputs.l1_ad, "l1_ad")?;
            let la_bar = need(inputs.l1_ad_bar, "l1_ad_bar")?;
            if la == 0.0 || la_bar == 0.0 {
                return Err(Error::ZeroCoefficient("l1_ad"));
            }
            out.c2 = Some(-0.5 * (eta * at * lc * ls_bar / la + eta_bar * at_bar * lc_bar * ls / la_bar));
            if let (Some(bt), Some(bt_bar), Some(lps), Some(lps_bar)) = (
                inputs.btilde_p0,
                inputs.btilde_p0_bar,
                inputs.lprime1_sym,
                inputs.lprime1_sym_bar,
            ) {
                // η_f, not its conjugate, multiplies both L'(1, sym²) terms
                out.d1 = Some(
                    eta * ls_bar / la * (-0.5 * bt * lc + psi * at * lc - at * lc)
                        + eta_bar * ls / la_bar * (-0.5 * bt_bar * lc_bar + psi * at_bar * lc_bar - at_bar * lc_bar)
                        + eta * lps_bar / la * at * lc
                        + eta * lps / la_bar * at_bar * lc_bar,
                );
            }
        }
    }
    Ok(out)
}

/// The lower-order term `Q(τ)` of the scaled one-level density `1 + Q(τ)`.
pub fn q_lower_order(case: SymmetryCase, tau: f64, r: f64, c: &CoefficientInputs) -> Result<f64> {
    if !(r > 0.0) {
        return Err(Error::invalid(format!("R must be positive, got {r}")));
    }
    let x = TAU * tau;
    let (sin, cos) = x.sin_cos();
    let sc = sinc(x);
    Ok(match case {
        SymmetryCase::PrincipalEven => {
            sc - need(c.a1, "a1")? * (1.0 + cos) / r - need(c.a2, "a2")? * PI * tau * sin / (r * r)
        }
        SymmetryCase::PrincipalOdd => {
            let m = 2.0 * r + 1.0;
            -sc - need(c.a3, "a3")? * (1.0 - cos) / m + need(c.a4, "a4")? * TAU * tau * sin / (m * m)
        }
        SymmetryCase::SelfCm => {
            -sc + need(c.b1, "b1")? * (1.0 - cos) / r + need(c.b2, "b2")? * PI * tau * sin / (r * r)
        }
        SymmetryCase::Generic => {
            (need(c.c1, "c1")? + need(c.c2, "c2")? * cos) / r + need(c.d1, "d1")? * PI * tau * sin / (r * r)
        }
    })
}

/// `log(√M·d/(2π))`.
pub fn n_std(m: f64, d: f64) -> Result<f64> {
    if !(m > 0.0) || !(d > 0.0) {
        return Err(Error::invalid("M and d must be positive"));
    }
    Ok((m.sqrt() * d / TAU).ln())
}

/// Effective matrix size. For the generic case `r` is the scaling `R`
/// supplied by the caller and `e1`, `e2` are the family averages `⟨e₁⟩`,
/// `⟨e₂⟩`; the other cases read their coefficient from `coeffs`.
pub fn n_eff(
    case: SymmetryCase,
    m: f64,
    x: f64,
    coeffs: &CoefficientInputs,
    generic: Option<GenericScale>,
) -> Result<f64> {
    if case == SymmetryCase::Generic {
        let g = generic.ok_or(Error::MissingInput("generic scale (R, ⟨e₁⟩, ⟨e₂⟩)"))?;
        return n_eff_generic(g.e1, g.e2, g.r);
    }
    let l = n_std(m, x)?;
    match case {
        SymmetryCase::PrincipalEven => {
            let a1 = need(coeffs.a1, "a1")?;
            if a1 == 0.0 {
                return Err(Error::ZeroCoefficient("a1"));
            }
            Ok(l / (2.0 * a1))
        }
        SymmetryCase::PrincipalOdd => {
            let a3 = need(coeffs.a3, "a3")?;
            if a3 == 0.0 {
                return Err(Error::ZeroCoefficient("a3"));
            }
            Ok((l - 0.5) / a3 - 0.5)
        }
        SymmetryCase::SelfCm => {
            let b1 = need(coeffs.b1, "b1")?;
            if b1 == 0.0 {
                return Err(Error::ZeroCoefficient("b1"));
            }
            Ok(l / b1)
        }
        SymmetryCase::Generic => unreachable!(),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct GenericScale {
    pub r: f64,
    pub e1: f64,
    pub e2: f64,
}

/// `R/√(3⟨e₂⟩ - 4⟨e₁⟩)`, defined only when the radicand is positive.
pub fn n_eff_generic(e1: f64, e2: f64, r: f64) -> Result<f64> {
    let disc = 3.0 * e2 - 4.0 * e1;
    if !(disc > 0.0) {
        return Err(Error::NonpositiveDiscriminant(disc));
    }
    if !(r > 0.0) {
        return Err(Error::invalid("R must be positive"));
    }
    Ok(r / disc.sqrt())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::theory::density::scaled_density_limit;

    fn zero_inputs() -> CoefficientInputs {
        CoefficientInputs {
            a1_00: Some(0.0),
            lp_sym: Some(0.0),
            lp_chi: Some(0.0),
            xi0: Some(0.0),
            l1_chi: Some(0.0),
            ..Default::default()
        }
    }

    #[test]
    fn assembled_coefficients_with_zero_inputs() {
        let c = coefficient_assembly(SymmetryCase::PrincipalEven, 2, &zero_inputs()).unwrap();
        assert!((c.a1.unwrap() - 2.154_431_329_803_066).abs() < 1e-14);
        let c = coefficient_assembly(SymmetryCase::PrincipalOdd, 2, &zero_inputs()).unwrap();
        assert!((c.a3.unwrap() - 3.008_799_638_835_712).abs() < 1e-14);
        for k in [2u32, 4, 6] {
            let c = coefficient_assembly(SymmetryCase::SelfCm, k, &zero_inputs()).unwrap();
            assert!((c.b1.unwrap() - (1.0 - digamma(f64::from(k) / 2.0))).abs() < 1e-15);
        }
    }

    #[test]
    fn missing_inputs_are_reported() {
        let err = coefficient_assembly(SymmetryCase::PrincipalEven, 2, &CoefficientInputs::default());
        assert!(matches!(err, Err(Error::MissingInput("a1_00"))));
        let err = q_lower_order(SymmetryCase::SelfCm, 0.1, 5.0, &CoefficientInputs::default());
        assert!(matches!(err, Err(Error::MissingInput("b1"))));
    }

    #[test]
    fn q_examples() {
        let c = CoefficientInputs {
            c1: Some(0.0),
            c2: Some(0.0),
            d1: Some(0.0),
            ..Default::default()
        };
        assert_eq!(q_lower_order(SymmetryCase::Generic, 0.37, 4.0, &c).unwrap(), 0.0);
        let c = CoefficientInputs {
            a1: Some(0.8),
            a2: Some(-1.3),
            ..Default::default()
        };
        let q0 = q_lower_order(SymmetryCase::PrincipalEven, 0.0, 6.0, &c).unwrap();
        assert!((q0 - (1.0 - 2.0 * 0.8 / 6.0)).abs() < 1e-15);
        let c = CoefficientInputs {
            b1: Some(1.7),
            b2: Some(0.4),
            ..Default::default()
        };
        let tau = 0.3;
        let q = q_lower_order(SymmetryCase::SelfCm, tau, 1e12, &c).unwrap();
        assert!((q + sinc(TAU * tau)).abs() < 1e-11);
    }

    #[test]
    fn principal_even_limit_matches_so_even_density() {
        let c = CoefficientInputs {
            a1: Some(2.0),
            a2: Some(3.0),
            ..Default::default()
        };
        for i in 0..20 {
            let tau = 0.1 * f64::from(i);
            let q = q_lower_order(SymmetryCase::PrincipalEven, tau, 1e13, &c).unwrap();
            assert!((q - (scaled_density_limit(Group::SoEven, tau) - 1.0)).abs() < 1e-12);
        }
    }

    #[test]
    fn n_std_examples() {
        let four_pi_sq = 4.0 * PI * PI;
        assert!(n_std(four_pi_sq, 1.0).unwrap().abs() < 1e-15);
        assert!((n_std(11.0, 9960.0).unwrap() - 8.567_402_920_568_484).abs() < 1e-13);
        assert!(n_std(0.0, 1.0).is_err());
    }

    #[test]
    fn n_eff_examples() {
        let m = 11.0;
        let x = 1e5;
        let c = CoefficientInputs {
            a1: Some(1.0),
            ..Default::default()
        };
        let half = n_std(m, x).unwrap() / 2.0;
        assert!((n_eff(SymmetryCase::PrincipalEven, m, x, &c, None).unwrap() - half).abs() < 1e-14);
        let g = GenericScale { r: 5.0, e1: 0.0, e2: 1.0 / 3.0 };
        assert!((n_eff(SymmetryCase::Generic, m, x, &c, Some(g)).unwrap() - 5.0).abs() < 1e-14);
        assert!(matches!(n_eff_generic(1.0, 1.0, 5.0), Err(Error::NonpositiveDiscriminant(d)) if d == -1.0));
        let zero = CoefficientInputs {
            a3: Some(0.0),
            ..Default::default()
        };
        assert!(matches!(
            n_eff(SymmetryCase::PrincipalOdd, m, x, &zero, None),
            Err(Error::ZeroCoefficient("a3"))
        ));
    }

    #[test]
    fn inputs_reject_unknown_keys() {
        assert!(serde_json::from_str::<CoefficientInputs>(r#"{"a1": 1.0}"#).is_ok());
        assert!(serde_json::from_str::<CoefficientInputs>(r#"{"a9": 1.0}"#).is_err());
    }
}
