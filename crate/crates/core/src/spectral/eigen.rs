//! Eigenvalues of a dense complex matrix: Householder reduction to upper
//! Hessenberg form, then single-shift QR with Wilkinson shifts and deflation.

use nalgebra::DMatrix;
use num_complex::Complex64;

/// Relative deflation tolerance on subdiagonal entries.
pub const DEFLATION_TOL: f64 = 1e-12;

/// Iteration budget per unit of dimension.
const ITERATIONS_PER_DIM: usize = 60;

/// Exceptional shift period for a stalled eigenvalue.
const EXCEPTIONAL_PERIOD: usize = 10;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Stalled {
    pub iterations: usize,
}

/// Row-major square work matrix.
struct Work {
    n: usize,
    a: Vec<Complex64>,
}

impl Work {
    #[inline]
    fn at(&self, i: usize, j: usize) -> Complex64 {
        self.a[i * self.n + j]
    }

    #[inline]
    fn at_mut(&mut self, i: usize, j: usize) -> &mut Complex64 {
        &mut self.a[i * self.n + j]
    }
}

/// Returns the eigenvalues of `m` in no particular order.
pub fn eigenvalues(m: &DMatrix<Complex64>) -> Result<Vec<Complex64>, Stalled> {
    let n = m.nrows();
    assert_eq!(n, m.ncols(), "square matrix required");
    let mut w = Work {
        n,
        a: (0..n * n).map(|idx| m[(idx / n, idx % n)]).collect(),
    };
    hessenberg(&mut w);
    hessenberg_qr(&mut w)
}

fn hessenberg(w: &mut Work) {
    let n = w.n;
    if n < 3 {
        return;
    }
    let mut v = vec![Complex64::new(0.0, 0.0); n];
    for k in 0..n - 2 {
        let norm = (k + 1..n).map(|i| w.at(i, k).norm_sqr()).sum::<f64>().sqrt();
        if norm == 0.0 {
            continue;
        }
        let x0 = w.at(k + 1, k);
        let phase = if x0.norm() > 0.0 { x0 / x0.norm() } else { Complex64::new(1.0, 0.0) };
        let alpha = -phase * norm;
        for i in k + 1..n {
            v[i] = w.at(i, k);
        }
        v[k + 1] -= alpha;
        let vnorm = (k + 1..n).map(|i| v[i].norm_sqr()).sum::<f64>().sqrt();
        if vnorm == 0.0 {
            continue;
        }
        for vi in &mut v[k + 1..n] {
            *vi /= vnorm;
        }
        // left: A <- (I - 2 v v^H) A
        for j in k..n {
            let dot: Complex64 = (k + 1..n).map(|i| v[i].conj() * w.at(i, j)).sum();
            let f = dot * 2.0;
            for i in k + 1..n {
                *w.at_mut(i, j) -= v[i] * f;
            }
        }
        // right: A <- A (I - 2 v v^H)
        for i in 0..n {
            let dot: Complex64 = (k + 1..n).map(|j| w.at(i, j) * v[j]).sum();
            let f = dot * 2.0;
            for j in k + 1..n {
                *w.at_mut(i, j) -= f * v[j].conj();
            }
        }
        *w.at_mut(k + 1, k) = alpha;
        for i in k + 2..n {
            *w.at_mut(i, k) = Complex64::new(0.0, 0.0);
        }
    }
}

fn wilkinson_shift(a: Complex64, b: Complex64, c: Complex64, d: Complex64) -> Complex64 {
    let half = (a - d) * 0.5;
    let disc = (half * half + b * c).sqrt();
    let mean = (a + d) * 0.5;
    let l1 = mean + disc;
    let l2 = mean - disc;
    if (l1 - d).norm() <= (l2 - d).norm() {
        l1
    } else {
        l2
    }
}

/// Rotation `[[c, s], [-s̄, c]]` zeroing `y` against `x`.
#[inline]
fn givens(x: Complex64, y: Complex64) -> (f64, Complex64) {
    let ax = x.norm();
    let ay = y.norm();
    if ay == 0.0 {
        return (1.0, Complex64::new(0.0, 0.0));
    }
    if ax == 0.0 {
        return (0.0, y.conj() / ay);
    }
    let r = ax.hypot(ay);
    (ax / r, (x / ax) * y.conj() / r)
}

fn hessenberg_qr(w: &mut Work) -> Result<Vec<Complex64>, Stalled> {
    let n = w.n;
    let mut eig = vec![Complex64::new(0.0, 0.0); n];
    if n == 0 {
        return Ok(eig);
    }
    let budget = ITERATIONS_PER_DIM * n.max(2);
    let mut total = 0usize;
    let mut since_deflation = 0usize;
    let mut rotations: Vec<(f64, Complex64)> = Vec::with_capacity(n);
    let mut hi = n - 1;
    loop {
        if hi == 0 {
            eig[0] = w.at(0, 0);
            break;
        }
        let mut lo = hi;
        while lo > 0 {
            let sub = w.at(lo, lo - 1).norm();
            let scale = w.at(lo - 1, lo - 1).norm() + w.at(lo, lo).norm();
            let scale = if scale == 0.0 { 1.0 } else { scale };
            if sub <= DEFLATION_TOL * scale {
                *w.at_mut(lo, lo - 1) = Complex64::new(0.0, 0.0);
                break;
            }
            lo -= 1;
        }
        if lo == hi {
            eig[hi] = w.at(hi, hi);
            hi -= 1;
            since_deflation = 0;
            continue;
        }
        total += 1;
        since_deflation += 1;
        if total > budget {
            return Err(Stalled { iterations: total });
        }
        let mu = if since_deflation % EXCEPTIONAL_PERIOD == 0 {
            let h = w.at(hi, hi);
            h + Complex64::new(0.75 * w.at(hi, hi - 1).norm(), 0.0)
        } else {
            wilkinson_shift(
                w.at(hi - 1, hi - 1),
                w.at(hi - 1, hi),
                w.at(hi, hi - 1),
                w.at(hi, hi),
            )
        };
        for i in lo..=hi {
            *w.at_mut(i, i) -= mu;
        }
        rotations.clear();
        for k in lo..hi {
            let (c, s) = givens(w.at(k, k), w.at(k + 1, k));
            rotations.push((c, s));
            for j in k..=hi {
                let x = w.at(k, j);
                let y = w.at(k + 1, j);
                *w.at_mut(k, j) = x * c + s * y;
                *w.at_mut(k + 1, j) = -s.conj() * x + y * c;
            }
        }
        for (offset, &(c, s)) in rotations.iter().enumerate() {
            let k = lo + offset;
            for i in lo..=(k + 1).min(hi) {
                let x = w.at(i, k);
                let y = w.at(i, k + 1);
                *w.at_mut(i, k) = x * c + y * s.conj();
                *w.at_mut(i, k + 1) = -x * s + y * c;
            }
        }
        for i in lo..=hi {
            *w.at_mut(i, i) += mu;
        }
    }
    Ok(eig)
}
