//! Adaptive Simpson quadrature and golden-section minimization.

const MAX_DEPTH: u32 = 40;

/// `∫_a^b f` by adaptive Simpson to absolute tolerance `tol`, floored at
/// the rounding level of the local estimate.
pub fn adaptive_simpson<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, tol: f64) -> f64 {
    let fa = f(a);
    let fb = f(b);
    let m = 0.5 * (a + b);
    let fm = f(m);
    let whole = simpson(a, b, fa, fm, fb);
    recurse(&f, a, b, fa, fm, fb, whole, tol, MAX_DEPTH)
}

/// As [`adaptive_simpson`], over `pieces` equal subintervals. Use this for
/// oscillatory integrands whose initial Simpson estimate may vanish by accident.
pub fn adaptive_simpson_split<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, tol: f64, pieces: usize) -> f64 {
    let h = (b - a) / pieces as f64;
    (0..pieces)
        .map(|i| {
            let lo = a + h * i as f64;
            let hi = if i + 1 == pieces { b } else { lo + h };
            adaptive_simpson(&f, lo, hi, tol / pieces as f64)
        })
        .sum()
}

fn simpson(a: f64, b: f64, fa: f64, fm: f64, fb: f64) -> f64 {
    (b - a) / 6.0 * (fa + 4.0 * fm + fb)
}

#[allow(clippy::too_many_arguments)]
fn recurse<F: Fn(f64) -> f64>(
    f: &F,
    a: f64,
    b: f64,
    fa: f64,
    fm: f64,
    fb: f64,
    whole: f64,
    tol: f64,
    depth: u32,
) -> f64 {
    let m = 0.5 * (a + b);
    let lm = 0.5 * (a + m);
    let rm = 0.5 * (m + b);
    let flm = f(lm);
    let frm = f(rm);
    let left = simpson(a, m, fa, flm, fm);
    let right = simpson(m, b, fm, frm, fb);
    let delta = left + right - whole;
    // below this, differences are rounding noise
    let floor = 8.0 * f64::EPSILON * (left.abs() + right.abs());
    if depth == 0 || delta.abs() <= 15.0 * tol.max(floor) {
        return left + right + delta / 15.0;
    }
    recurse(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1)
        + recurse(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1)
}

/// Minimizer of a unimodal `f` on `[a, b]` by golden-section search.
pub fn golden_section<F: Fn(f64) -> f64>(f: F, mut a: f64, mut b: f64, tol: f64) -> f64 {
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let mut c = b - inv_phi * (b - a);
    let mut d = a + inv_phi * (b - a);
    let mut fc = f(c);
    let mut fd = f(d);
    while (b - a).abs() > tol {
        if fc < fd {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = f(d);
        }
    }
    0.5 * (a + b)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn integrates_smooth_functions() {
        assert!((adaptive_simpson(f64::sin, 0.0, PI, 1e-12) - 2.0).abs() < 1e-11);
        assert!((adaptive_simpson(|x| x.exp(), 0.0, 1.0, 1e-12) - (1f64.exp() - 1.0)).abs() < 1e-11);
        let osc = adaptive_simpson_split(|x| (40.0 * x).cos().powi(2), 0.0, PI, 1e-12, 16);
        assert!((osc - PI / 2.0).abs() < 1e-10);
    }

    #[test]
    fn golden_section_finds_quadratic_minimum() {
        let x = golden_section(|x| (x - 1.234).powi(2) + 3.0, -5.0, 5.0, 1e-10);
        assert!((x - 1.234).abs() < 1e-6);
    }
}
