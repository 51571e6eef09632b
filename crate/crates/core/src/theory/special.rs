//! Special functions and constants.

use std::f64::consts::PI;

/// Euler–Mascheroni constant γ.
pub const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;

/// First Stieltjes constant γ₁.
pub const STIELTJES_1: f64 = -0.072_815_845_483_676_724_9;

/// Glaisher–Kinkelin constant A, from `log A = 1/12 - ζ'(-1)`.
pub const GLAISHER: f64 = 1.282_427_129_100_622_636_875_342_568_87;

/// Digamma ψ(x) for real `x` off the nonpositive integers.
///
/// Upward recurrence to `x ≥ 10`, then the asymptotic series through `x^-14`.
pub fn digamma(x: f64) -> f64 {
    if x <= 0.0 && x == x.floor() {
        return f64::NAN;
    }
    if x < 0.0 {
        // reflection: ψ(1 - x) - ψ(x) = π cot(πx)
        return digamma(1.0 - x) - PI / (PI * x).tan();
    }
    let mut acc = 0.0;
    let mut x = x;
    while x < 10.0 {
        acc -= 1.0 / x;
        x += 1.0;
    }
    let inv2 = 1.0 / (x * x);
    let series = inv2
        * (1.0 / 12.0
            - inv2
                * (1.0 / 120.0
                    - inv2
                        * (1.0 / 252.0
                            - inv2
                                * (1.0 / 240.0
                                    - inv2 * (1.0 / 132.0 - inv2 * (691.0 / 32760.0 - inv2 / 12.0))))));
    acc + x.ln() - 0.5 / x - series
}

const LANCZOS_G: f64 = 7.0;
const LANCZOS: [f64; 9] = [
    0.999_999_999_999_809_93,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_13,
    -176.615_029_162_140_59,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_571_6e-6,
    1.505_632_735_149_311_6e-7,
];

/// `log Γ(x)` for `x > 0` (Lanczos, g = 7).
pub fn ln_gamma(x: f64) -> f64 {
    if x < 0.5 {
        // Γ(x)Γ(1 - x) = π / sin(πx)
        return (PI / (PI * x).sin()).ln() - ln_gamma(1.0 - x);
    }
    let x = x - 1.0;
    let mut a = LANCZOS[0];
    let t = x + LANCZOS_G + 0.5;
    for (i, c) in LANCZOS.iter().enumerate().skip(1) {
        a += c / (x + i as f64);
    }
    0.5 * (2.0 * PI).ln() + (x + 0.5) * t.ln() - t + a.ln()
}

/// Barnes G(1/2) = 2^{1/24} e^{1/8} π^{-1/4} A^{-3/2}.
pub fn barnes_g_half() -> f64 {
    2f64.powf(1.0 / 24.0) * (0.125f64).exp() * PI.powf(-0.25) * GLAISHER.powf(-1.5)
}

/// `sin(x)/x` with the removable singularity filled in.
pub fn sinc(x: f64) -> f64 {
    if x.abs() < 1e-4 {
        let x2 = x * x;
        1.0 - x2 / 6.0 + x2 * x2 / 120.0
    } else {
        x.sin() / x
    }
}

/// `sin(mθ)/sin(θ)` for integer `m ≥ 1`, continuous through multiples of π.
pub fn sin_ratio(m: u32, theta: f64) -> f64 {
    let k = (theta / PI).round();
    let u = theta - k * PI;
    let m_f = f64::from(m);
    // sin(m(u + kπ)) / sin(u + kπ) = (-1)^{(m-1)k} sin(mu) / sin(u)
    let sign = if ((m as i64 - 1) * k as i64).rem_euclid(2) == 0 { 1.0 } else { -1.0 };
    if u.abs() < 1e-4 {
        let m2 = m_f * m_f;
        let u2 = u * u;
        sign * m_f * (1.0 - (m2 - 1.0) * u2 / 6.0 + (3.0 * m2 * m2 - 10.0 * m2 + 7.0) * u2 * u2 / 360.0)
    } else {
        sign * (m_f * u).sin() / u.sin()
    }
}
