//! Finite-N one-level density kernels and their scaled expansions.

use std::f64::consts::{PI, TAU};

use crate::error::{Error, Result};
use crate::haar::Group;
use crate::theory::special::{sin_ratio, sinc};

/// Angular range on which [`finite_n_density`] integrates to the eigenangle count.
pub fn density_range(group: Group) -> (f64, f64) {
    match group {
        Group::SoEven | Group::USp => (0.0, PI),
        Group::SoOdd | Group::Unitary => (0.0, TAU),
    }
}

/// Expected number of eigenangles per radian at `θ`.
///
/// SO(2N+1) excludes the structural zero; on `[0, 2π]` it integrates to 2N.
pub fn finite_n_density(group: Group, n: u32, theta: f64) -> f64 {
    let nf = f64::from(n);
    match group {
        Group::SoEven => (2.0 * nf - 1.0) / TAU + sin_ratio(2 * n - 1, theta) / TAU,
        Group::SoOdd => nf / PI - sin_ratio(2 * n, theta) / TAU,
        Group::USp => (2.0 * nf + 1.0) / TAU - sin_ratio(2 * n + 1, theta) / TAU,
        Group::Unitary => nf / TAU,
    }
}

/// Average of the kernel over `[lo, hi]`, for comparison with histogram bins.
pub fn bin_average_density(group: Group, n: u32, lo: f64, hi: f64) -> f64 {
    let tol = 1e-12 * (hi - lo);
    crate::theory::quadrature::adaptive_simpson(|t| finite_n_density(group, n, t), lo, hi, tol) / (hi - lo)
}

/// `dθ/dτ` for the scaling that gives unit mean spacing.
pub fn scaling(group: Group, n: u32) -> f64 {
    let nf = f64::from(n);
    match group {
        Group::SoEven | Group::USp => PI / nf,
        Group::SoOdd => TAU / (2.0 * nf + 1.0),
        Group::Unitary => TAU / nf,
    }
}

/// The kernel in the scaled variable `τ`, evaluated exactly.
pub fn scaled_density_exact(group: Group, n: u32, tau: f64) -> f64 {
    let s = scaling(group, n);
    finite_n_density(group, n, s * tau) * s
}

/// Partial sum of the large-N expansion of the scaled density through `order`.
pub fn scaled_density_expansion(group: Group, n: u32, tau: f64, order: u32) -> Result<f64> {
    if order > 2 {
        return Err(Error::invalid(format!("expansion order must be 0, 1 or 2, got {order}")));
    }
    let x = TAU * tau;
    let (sin, cos) = x.sin_cos();
    let sc = sinc(x);
    let nf = f64::from(n);
    let terms = match group {
        Group::SoEven => [
            1.0 + sc,
            -(1.0 + cos) / (2.0 * nf),
            -PI * tau * sin / (6.0 * nf * nf),
        ],
        Group::SoOdd => {
            let m = 2.0 * nf + 1.0;
            [1.0 - sc, -(1.0 - cos) / m, 2.0 * PI * tau * sin / (3.0 * m * m)]
        }
        Group::USp => [
            1.0 - sc,
            (1.0 - cos) / (2.0 * nf),
            PI * tau * sin / (6.0 * nf * nf),
        ],
        Group::Unitary => [1.0, 0.0, 0.0],
    };
    Ok(terms[..=order as usize].iter().sum())
}

/// The `N → ∞` limit of the scaled density.
pub fn scaled_density_limit(group: Group, tau: f64) -> f64 {
    let sc = sinc(TAU * tau);
    match group {
        Group::SoEven => 1.0 + sc,
        Group::SoOdd | Group::USp => 1.0 - sc,
        Group::Unitary => 1.0,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::theory::quadrature::adaptive_simpson_split;

    #[test]
    fn kernel_values_at_zero() {
        for n in [1u32, 5, 10] {
            let nf = f64::from(n);
            assert!((finite_n_density(Group::SoEven, n, 0.0) - (2.0 * nf - 1.0) / PI).abs() < 1e-14);
            assert!(finite_n_density(Group::USp, n, 0.0).abs() < 1e-14);
            assert_eq!(finite_n_density(Group::Unitary, n, 1.234), nf / TAU);
        }
    }

    #[test]
    fn kernels_count_eigenangles() {
        for g in Group::ALL {
            for n in [5u32, 10, 20] {
                let (lo, hi) = density_range(g);
                let total = adaptive_simpson_split(|t| finite_n_density(g, n, t), lo, hi, 1e-11, 64);
                let expected = match g {
                    Group::SoOdd => 2.0 * f64::from(n),
                    _ => f64::from(n),
                };
                assert!((total - expected).abs() < 1e-8, "{g} N={n}: {total}");
                if g.is_self_dual() {
                    let half = adaptive_simpson_split(|t| finite_n_density(g, n, t), 0.0, PI, 1e-11, 64);
                    assert!((half - f64::from(n)).abs() < 1e-8);
                }
            }
        }
    }

    #[test]
    fn expansion_order_zero_at_origin() {
        assert!((scaled_density_expansion(Group::SoEven, 10, 0.0, 0).unwrap() - 2.0).abs() < 1e-15);
        assert_eq!(scaled_density_expansion(Group::Unitary, 10, 0.3, 2).unwrap(), 1.0);
        assert!(scaled_density_expansion(Group::SoEven, 10, 0.3, 3).is_err());
    }

    #[test]
    fn expansion_tracks_exact_kernel() {
        for g in [Group::SoEven, Group::SoOdd, Group::USp] {
            let exact = scaled_density_exact(g, 10, 0.25);
            let approx = scaled_density_expansion(g, 10, 0.25, 2).unwrap();
            assert!((exact - approx).abs() <= 5e-3, "{g}: {exact} vs {approx}");
        }
    }

    #[test]
    fn higher_order_is_closer() {
        for g in [Group::SoEven, Group::SoOdd, Group::USp] {
            for n in [8u32, 12, 20] {
                for i in 0..=18 {
                    let tau = 0.1 + 0.05 * f64::from(i);
                    let exact = scaled_density_exact(g, n, tau);
                    let r1 = (scaled_density_expansion(g, n, tau, 1).unwrap() - exact).abs();
                    let r2 = (scaled_density_expansion(g, n, tau, 2).unwrap() - exact).abs();
                    assert!(r2 <= r1 + 1e-15, "{g} N={n} τ={tau}: {r2} > {r1}");
                }
            }
        }
    }
}
