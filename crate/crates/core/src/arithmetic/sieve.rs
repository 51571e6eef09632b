//! Segmented sieves for primes and square-free integers.

use rayon::prelude::*;

use crate::error::{Error, Result};

/// Segment length of the segmented sieves.
pub const SEGMENT: u64 = 1 << 16;

/// Largest bound accepted by [`primes_up_to`].
pub const MAX_SIEVE: u64 = 100_000_000;

/// Primes `≤ n` by the plain sieve of Eratosthenes.
pub fn small_primes(n: u64) -> Vec<u64> {
    if n < 2 {
        return Vec::new();
    }
    let n = n as usize;
    let mut composite = vec![false; n + 1];
    let mut out = Vec::new();
    for i in 2..=n {
        if composite[i] {
            continue;
        }
        out.push(i as u64);
        let mut j = i.saturating_mul(i);
        while j <= n {
            composite[j] = true;
            j += i;
        }
    }
    out
}

pub fn is_prime(n: u64) -> bool {
    if n < 4 {
        return n >= 2;
    }
    if n % 2 == 0 || n % 3 == 0 {
        return false;
    }
    let mut p = 5u64;
    while p * p <= n {
        if n % p == 0 || n % (p + 2) == 0 {
            return false;
        }
        p += 6;
    }
    true
}

fn segments(lo: u64, hi: u64) -> Vec<(u64, u64)> {
    let mut out = Vec::new();
    let mut a = lo;
    while a <= hi {
        let b = hi.min(a.saturating_add(SEGMENT - 1));
        out.push((a, b));
        if b == u64::MAX {
            break;
        }
        a = b + 1;
    }
    out
}

/// Primes `≤ n`, segment by segment in parallel, ascending.
pub fn primes_up_to(n: u64) -> Result<Vec<u64>> {
    if n > MAX_SIEVE {
        return Err(Error::invalid(format!("prime bound {n} exceeds {MAX_SIEVE}")));
    }
    if n < 2 {
        return Ok(Vec::new());
    }
    let base = small_primes(n.isqrt());
    let chunks: Vec<Vec<u64>> = segments(2, n)
        .into_par_iter()
        .map(|(a, b)| {
            let mut composite = vec![false; (b - a + 1) as usize];
            for &p in &base {
                let start = (p * p).max(a.div_ceil(p) * p);
                let mut j = start;
                while j <= b {
                    composite[(j - a) as usize] = true;
                    j += p;
                }
            }
            composite
                .iter()
                .enumerate()
                .filter(|(_, &c)| !c)
                .map(|(i, _)| a + i as u64)
                .collect()
        })
        .collect();
    Ok(chunks.concat())
}

/// Square-free flags for `lo..=hi` (`lo ≥ 1`), given every prime `≤ √hi`.
pub(crate) fn squarefree_flags(lo: u64, hi: u64, base: &[u64]) -> Vec<bool> {
    let mut flags = vec![true; (hi - lo + 1) as usize];
    for &p in base {
        let q = p * p;
        if q > hi {
            break;
        }
        let mut j = lo.div_ceil(q) * q;
        while j <= hi {
            flags[(j - lo) as usize] = false;
            j += q;
        }
    }
    flags
}

/// Runs `f` over the segments of `lo..=hi` in parallel and concatenates the
/// results in ascending order.
pub(crate) fn par_segments<T, F>(lo: u64, hi: u64, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(u64, u64) -> Vec<T> + Sync + Send,
{
    if hi < lo {
        return Vec::new();
    }
    let parts: Vec<Vec<T>> = segments(lo, hi).into_par_iter().map(|(a, b)| f(a, b)).collect();
    parts.into_iter().flatten().collect()
}
