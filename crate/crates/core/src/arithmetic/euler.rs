//! Local data of a newform and the truncated Euler products `A_f` and `Ã_f`.

use std::path::Path;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::arithmetic::sieve::{is_prime, primes_up_to};
use crate::error::{Error, Result};
use crate::theory::SymmetryCase;

/// Slack on the Ramanujan bound `|λ_f(p)| ≤ 2` for rounded input data.
pub const RAMANUJAN_SLACK: f64 = 1e-9;

/// Step of the central differences behind [`a_f_alpha_derivative`].
pub const DERIVATIVE_STEP: f64 = 1e-3;

const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// Roots `(α, β)` of `x² - λx + χ`.
pub fn satake(lambda_p: Complex64, chi_p: Complex64) -> (Complex64, Complex64) {
    let disc = (lambda_p * lambda_p - 4.0 * chi_p).sqrt();
    let alpha = (lambda_p + disc) / 2.0;
    // the smaller-magnitude root from Vieta, avoiding cancellation
    let beta = if alpha.norm() > 0.0 { chi_p / alpha } else { (lambda_p - disc) / 2.0 };
    (alpha, beta)
}

/// `λ(p^m)` from `λ(p^{m+1}) = λ(p)λ(p^m) - χ(p)λ(p^{m-1})`, `λ(1) = 1`.
pub fn lambda_power_from(lambda_p: Complex64, chi_p: Complex64, m: u32) -> Complex64 {
    let (mut prev, mut cur) = (Complex64::new(0.0, 0.0), ONE);
    for _ in 0..m {
        let next = lambda_p * cur - chi_p * prev;
        prev = cur;
        cur = next;
    }
    cur
}

/// `Σ_{ℓ=0}^{m} α^ℓ β^{m-ℓ}`.
pub fn lambda_power_satake(alpha: Complex64, beta: Complex64, m: u32) -> Complex64 {
    (0..=m).map(|l| alpha.powu(l) * beta.powu(m - l)).sum()
}

/// Hecke eigenvalues and nebentypus values at consecutive primes.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct NewformLocalData {
    pub level: u64,
    pub weight: u32,
    pub primes: Vec<u64>,
    pub lambda: Vec<Complex64>,
    pub chi: Vec<Complex64>,
}

#[derive(Debug, Deserialize)]
struct LocalRow {
    p: u64,
    re_lambda: f64,
    im_lambda: f64,
    re_chi: f64,
    im_chi: f64,
}

impl NewformLocalData {
    pub fn new(level: u64, weight: u32, primes: Vec<u64>, lambda: Vec<Complex64>, chi: Vec<Complex64>) -> Result<Self> {
        let data = NewformLocalData {
            level,
            weight,
            primes,
            lambda,
            chi,
        };
        data.validate()?;
        Ok(data)
    }

    pub fn validate(&self) -> Result<()> {
        if !is_prime(self.level) || self.level == 2 {
            return Err(Error::invalid(format!("level {} must be an odd prime", self.level)));
        }
        if self.lambda.len() != self.primes.len() || self.chi.len() != self.primes.len() {
            return Err(Error::invalid("primes, lambda and chi must have equal lengths"));
        }
        for (i, &p) in self.primes.iter().enumerate() {
            if !is_prime(p) {
                return Err(Error::invalid(format!("{p} is not prime")));
            }
            if i > 0 && p <= self.primes[i - 1] {
                return Err(Error::invalid(format!("primes must ascend strictly ({} then {p})", self.primes[i - 1])));
            }
            let (l, c) = (self.lambda[i], self.chi[i]);
            if !l.re.is_finite() || !l.im.is_finite() || !c.re.is_finite() || !c.im.is_finite() {
                return Err(Error::invalid(format!("non-finite data at p = {p}")));
            }
            if p == self.level {
                if c.norm() > RAMANUJAN_SLACK {
                    return Err(Error::invalid(format!("chi must vanish at the level p = {p}")));
                }
            } else {
                if l.norm() > 2.0 + RAMANUJAN_SLACK {
                    return Err(Error::invalid(format!("|lambda({p})| = {} exceeds 2", l.norm())));
                }
                if (c.norm() - 1.0).abs() > RAMANUJAN_SLACK {
                    return Err(Error::invalid(format!("chi({p}) must have unit modulus")));
                }
            }
        }
        Ok(())
    }

    /// Reads the CSV `p,re_lambda,im_lambda,re_chi,im_chi` with a header row.
    pub fn read_csv(path: impl AsRef<Path>, level: u64, weight: u32) -> Result<Self> {
        let file = std::fs::File::open(path)?;
        Self::from_reader(file, level, weight)
    }

    pub fn from_reader<R: std::io::Read>(reader: R, level: u64, weight: u32) -> Result<Self> {
        let mut rdr = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(reader);
        let (mut primes, mut lambda, mut chi) = (Vec::new(), Vec::new(), Vec::new());
        for (i, row) in rdr.deserialize::<LocalRow>().enumerate() {
            let row = row.map_err(|e| Error::Parse {
                line: i + 2,
                message: e.to_string(),
            })?;
            primes.push(row.p);
            lambda.push(Complex64::new(row.re_lambda, row.im_lambda));
            chi.push(Complex64::new(row.re_chi, row.im_chi));
        }
        Self::new(level, weight, primes, lambda, chi)
    }

    pub fn write_csv<W: std::io::Write>(&self, writer: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(writer);
        w.write_record(["p", "re_lambda", "im_lambda", "re_chi", "im_chi"])?;
        for i in 0..self.primes.len() {
            let (l, c) = (self.lambda[i], self.chi[i]);
            w.write_record([
                self.primes[i].to_string(),
                format!("{:.17e}", l.re),
                format!("{:.17e}", l.im),
                format!("{:.17e}", c.re),
                format!("{:.17e}", c.im),
            ])?;
        }
        w.flush()?;
        Ok(())
    }

    pub fn max_prime(&self) -> u64 {
        self.primes.last().copied().unwrap_or(0)
    }

    pub fn local(&self, p: u64) -> Option<(Complex64, Complex64)> {
        self.primes.binary_search(&p).ok().map(|i| (self.lambda[i], self.chi[i]))
    }

    pub fn lambda_power(&self, p: u64, m: u32) -> Option<Complex64> {
        self.local(p).map(|(l, c)| lambda_power_from(l, c, m))
    }

    fn require(&self, cutoff: u64) -> Result<Vec<u64>> {
        let needed = primes_up_to(cutoff)?;
        if needed.iter().any(|p| self.local(*p).is_none()) {
            return Err(Error::InsufficientPrimes {
                available: self.max_prime(),
                required: cutoff,
            });
        }
        Ok(needed)
    }
}

/// A truncated Euler product with its tail estimate.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct EulerProduct {
    pub value: Complex64,
    /// `|value(P) - value(P/10)|`: the movement over the last decade of primes.
    pub tail_estimate: f64,
    pub converged: bool,
    pub cutoff: u64,
}

fn p_pow(p: u64, s: Complex64) -> Complex64 {
    // p^{-s}
    (-s * (p as f64).ln()).exp()
}

/// `1/(1 - λt + χt²) = Σ λ(p^m) t^m`.
fn series(lambda: Complex64, chi: Complex64, t: Complex64) -> Complex64 {
    ONE / (ONE - lambda * t + chi * t * t)
}

/// Even and odd parts `Σ λ(p^{2m}) t^{2m}` and `Σ λ(p^{2m+1}) t^{2m}` of [`series`].
fn even_odd(lambda: Complex64, chi: Complex64, t: Complex64) -> (Complex64, Complex64) {
    let (fp, fm) = (series(lambda, chi, t), series(lambda, chi, -t));
    ((fp + fm) / 2.0, (fp - fm) / (2.0 * t))
}

/// Inverse local factor `1 - (λ²-χ)x + χ(λ²-χ)x² - χ³x³` of `L(s, sym²f)` at `x = p^{-s}`.
fn sym2_inverse(lambda: Complex64, chi: Complex64, x: Complex64) -> Complex64 {
    let e1 = lambda * lambda - chi;
    ONE - e1 * x + chi * e1 * x * x - chi * chi * chi * x * x * x
}

/// `χ'_f(p)`: the primitive character behind the nebentypus. It is trivial
/// in the principal cases, so it takes the value 1 at the level there.
fn chi_prime(case: SymmetryCase, p: u64, level: u64, chi: Complex64) -> Complex64 {
    if p == level {
        match case {
            SymmetryCase::PrincipalEven | SymmetryCase::PrincipalOdd => ONE,
            _ => Complex64::new(0.0, 0.0),
        }
    } else {
        chi
    }
}

/// Shifts `(α, γ)` at which `A_f(α, γ)` or `Ã_f(-α, γ)` is evaluated.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Shifts {
    pub alpha: Complex64,
    pub gamma: Complex64,
}

impl Shifts {
    pub fn new(alpha: Complex64, gamma: Complex64) -> Self {
        Shifts { alpha, gamma }
    }

    pub fn diagonal(r: Complex64) -> Self {
        Shifts { alpha: r, gamma: r }
    }

    fn check(&self) -> Result<()> {
        if self.alpha.re.abs() >= 0.25 || self.gamma.re.abs() >= 0.25 {
            return Err(Error::invalid("shifts need |Re| < 1/4"));
        }
        Ok(())
    }
}

/// Local factor of `A_f(α, γ) = Y_f⁻¹ V_| V_∤` at `p`. `e_level` is `ψ_d(M)`.
pub fn a_f_local(case: SymmetryCase, level: u64, p: u64, lambda: Complex64, chi: Complex64, e_level: f64, s: Shifts) -> Complex64 {
    let a = p_pow(p, s.alpha + 0.5);
    let g = p_pow(p, s.gamma + 0.5);
    let cp = chi_prime(case, p, level, chi);
    let x_mixed = a * g;
    // Y_f⁻¹ local: L_p(1+α+γ, χ')L_p(1+α+γ, sym²) / (L_p(1+2γ, χ')L_p(1+2α, sym²))
    let y_inv = if p == level {
        // ramified: L_M(s, sym²) = (1 - χ'(M)M^{-s}) / (1 - λ(M)²M^{-s})
        let sym = |x: Complex64| (ONE - cp * x) / (ONE - lambda * lambda * x);
        (ONE - cp * g * g) * sym(x_mixed) / ((ONE - cp * x_mixed) * sym(a * a))
    } else {
        (ONE - cp * g * g) * sym2_inverse(lambda, chi, a * a) / ((ONE - cp * x_mixed) * sym2_inverse(lambda, chi, x_mixed))
    };
    let v = if p == level {
        let e = Complex64::new(e_level, 0.0);
        (ONE - lambda * e * g) * series(lambda, chi, e * a)
    } else {
        let (even, odd) = even_odd(lambda, chi, a);
        let pf = p as f64;
        ONE + pf / (pf + 1.0) * (even - ONE - lambda * g * a * odd + chi * g * g * even)
    };
    y_inv * v
}

/// Local factor of `Ã_f(-α, γ) = Ỹ_f⁻¹ Ṽ_| Ṽ_∤` at `p`. The ramified factor
/// `Ṽ_|` is taken at `p = M` only.
pub fn a_tilde_local(
    case: SymmetryCase,
    level: u64,
    p: u64,
    lambda: Complex64,
    chi: Complex64,
    e_level: f64,
    s: Shifts,
) -> Complex64 {
    let b = p_pow(p, 0.5 - s.alpha);
    let g = p_pow(p, s.gamma + 0.5);
    let cp = chi_prime(case, p, level, chi);
    let (lb, cb) = (lambda.conj(), chi.conj());
    let x_mixed = b * g;
    // Ỹ⁻¹ local: ζ_p(1-α+γ)L_p(1-α+γ, ad²) / (L_p(1+2γ, χ')L_p(1-2α, sym²f̄))
    let y_inv = if p == level {
        let sym_bar = (ONE - cp.conj() * b * b) / (ONE - lb * lb * b * b);
        let rankin = ONE / (ONE - lambda * lb * x_mixed);
        (ONE - cp * g * g) * rankin / sym_bar
    } else {
        let (al, be) = satake(lambda, chi);
        let rankin_inv = [al, be]
            .iter()
            .flat_map(|u| [al.conj(), be.conj()].map(|w| ONE - u * w * x_mixed))
            .product::<Complex64>();
        (ONE - cp * g * g) * sym2_inverse(lb, cb, b * b) / rankin_inv
    };
    let v = if p == level {
        let e = Complex64::new(e_level, 0.0);
        (ONE - lambda * e * g) * series(lb, cb, e * b)
    } else {
        let (even, odd) = even_odd(lb, cb, b);
        let pf = p as f64;
        ONE + pf / (pf + 1.0) * (even - ONE - lambda * g * b * odd + chi * g * g * even)
    };
    y_inv * v
}

type LocalFn = fn(SymmetryCase, u64, u64, Complex64, Complex64, f64, Shifts) -> Complex64;

fn truncated(
    local: LocalFn,
    data: &NewformLocalData,
    case: SymmetryCase,
    e_level: f64,
    s: Shifts,
    cutoff: u64,
    tol: f64,
) -> Result<EulerProduct> {
    s.check()?;
    if cutoff < 20 {
        return Err(Error::invalid("the prime cutoff must be at least 20"));
    }
    let primes = data.require(cutoff)?;
    let decade = cutoff / 10;
    let mut value = ONE;
    let mut at_decade = ONE;
    for &p in &primes {
        let (l, c) = data.local(p).expect("coverage checked");
        value *= local(case, data.level, p, l, c, e_level, s);
        if p <= decade {
            at_decade = value;
        }
    }
    let tail_estimate = (value - at_decade).norm();
    Ok(EulerProduct {
        value,
        tail_estimate,
        converged: tail_estimate <= tol,
        cutoff,
    })
}

/// `A_f(α, γ)` over primes `≤ cutoff`, flagged unconverged when the last
/// decade of primes moves it by more than `tol`.
pub fn truncated_a_f(
    data: &NewformLocalData,
    case: SymmetryCase,
    e_level: f64,
    s: Shifts,
    cutoff: u64,
    tol: f64,
) -> Result<EulerProduct> {
    truncated(a_f_local, data, case, e_level, s, cutoff, tol)
}

/// `Ã_f(-α, γ)` over primes `≤ cutoff`.
pub fn truncated_a_tilde(
    data: &NewformLocalData,
    case: SymmetryCase,
    e_level: f64,
    s: Shifts,
    cutoff: u64,
    tol: f64,
) -> Result<EulerProduct> {
    truncated(a_tilde_local, data, case, e_level, s, cutoff, tol)
}

/// `A¹_f(r, r) = ∂_α A_f(α, γ)` at `α = γ = r`, by central differences with
/// one Richardson step.
pub fn a_f_alpha_derivative(
    data: &NewformLocalData,
    case: SymmetryCase,
    e_level: f64,
    r: Complex64,
    cutoff: u64,
) -> Result<Complex64> {
    let eval = |h: f64| -> Result<Complex64> {
        let plus = truncated_a_f(data, case, e_level, Shifts::new(r + h, r), cutoff, f64::INFINITY)?.value;
        let minus = truncated_a_f(data, case, e_level, Shifts::new(r - h, r), cutoff, f64::INFINITY)?.value;
        Ok((plus - minus) / (2.0 * h))
    };
    let coarse = eval(DERIVATIVE_STEP)?;
    let fine = eval(DERIVATIVE_STEP / 2.0)?;
    Ok((4.0 * fine - coarse) / 3.0)
}
