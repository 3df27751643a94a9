//! Small integer helpers shared by the finite-field and module code.

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

pub fn is_odd_prime(n: u64) -> bool {
    n != 2 && is_prime(n)
}

/// Distinct prime divisors in increasing order.
pub fn prime_divisors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            out.push(d);
            while n.is_multiple_of(d) {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// Returns `(ell, n)` when `q = ell^n` for a prime `ell`.
pub fn prime_power(q: u64) -> Option<(u64, u32)> {
    let divs = prime_divisors(q);
    if divs.len() != 1 {
        return None;
    }
    let ell = divs[0];
    let mut n = 0;
    let mut r = q;
    while r > 1 {
        r /= ell;
        n += 1;
    }
    Some((ell, n))
}

pub fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = (acc as u128 * base as u128 % m as u128) as u64;
        }
        base = (base as u128 * base as u128 % m as u128) as u64;
        exp >>= 1;
    }
    acc
}

/// Inverse of `a` modulo the prime `p`; `a` must be nonzero mod `p`.
pub fn inv_mod(a: u64, p: u64) -> u64 {
    debug_assert!(!a.is_multiple_of(p));
    pow_mod(a, p - 2, p)
}

/// Multiplicative order of `a` modulo `m` (gcd(a, m) = 1 assumed).
pub fn mult_order(a: u64, m: u64) -> u64 {
    let mut k = 1;
    let mut x = a % m;
    while x != 1 {
        x = x * (a % m) % m;
        k += 1;
    }
    k
}

/// Reduces a signed integer into `0..m`.
pub fn reduce(x: i64, m: u64) -> u64 {
    x.rem_euclid(m as i64) as u64
}
