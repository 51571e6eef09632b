//! Kronecker symbols and fundamental discriminants.

const TAB2: [i8; 8] = [0, 1, 0, -1, 0, -1, 0, 1];

/// Kronecker symbol `(a/b)`, extending the Legendre and Jacobi symbols to
/// all integers (Cohen, Algorithm 1.4.10).
pub fn kronecker(a: i64, b: i64) -> i8 {
    let mut a = i128::from(a);
    let mut b = i128::from(b);
    if b == 0 {
        return if a.abs() == 1 { 1 } else { 0 };
    }
    if a % 2 == 0 && b % 2 == 0 {
        return 0;
    }
    let mut v = 0;
    while b % 2 == 0 {
        v += 1;
        b /= 2;
    }
    let mut k: i8 = if v % 2 == 0 { 1 } else { TAB2[(a & 7) as usize] };
    if b < 0 {
        b = -b;
        if a < 0 {
            k = -k;
        }
    }
    // b is odd and positive from here on
    loop {
        if a == 0 {
            return if b == 1 { k } else { 0 };
        }
        let mut v = 0;
        while a % 2 == 0 {
            v += 1;
            a /= 2;
        }
        if v % 2 == 1 {
            k *= TAB2[(b & 7) as usize];
        }
        if a & b & 2 != 0 {
            k = -k;
        }
        let r = a.abs();
        a = b % r;
        b = r;
    }
}

pub fn is_squarefree(n: u64) -> bool {
    if n == 0 {
        return false;
    }
    let mut n = n;
    for p in [2u64, 3] {
        if n % p == 0 {
            n /= p;
            if n % p == 0 {
                return false;
            }
        }
    }
    let mut p = 5u64;
    while p.saturating_mul(p) <= n {
        for q in [p, p + 2] {
            if n % q == 0 {
                n /= q;
                if n % q == 0 {
                    return false;
                }
            }
        }
        p += 6;
    }
    true
}

/// `d ≡ 1 (mod 4)` square-free, or `d = 4m` with `m ≡ 2, 3 (mod 4)` square-free.
/// Negative `d` is allowed; `1` counts as fundamental.
pub fn is_fundamental_discriminant(d: i64) -> bool {
    match d.rem_euclid(4) {
        1 => is_squarefree(d.unsigned_abs()),
        0 if d != 0 => {
            let m = d / 4;
            matches!(m.rem_euclid(4), 2 | 3) && is_squarefree(m.unsigned_abs())
        }
        _ => false,
    }
}

/// Odd part of `n`, keeping its sign.
pub fn odd_part(n: i64) -> i64 {
    if n == 0 {
        return 0;
    }
    n >> n.trailing_zeros()
}

/// `(-1)^{(D'-1)(d'-1)/4}` for the odd parts `D'`, `d'`.
pub fn reciprocity_sign(big_d: i64, d: i64) -> i8 {
    let a = odd_part(big_d).rem_euclid(4);
    let b = odd_part(d).rem_euclid(4);
    if a == 3 && b == 3 {
        -1
    } else {
        1
    }
}
