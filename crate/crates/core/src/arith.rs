//! Integer helpers: exact square roots, gcd/lcm, trial-division factoring,
//! and prime / prime-power enumeration.

use num_integer::{Integer, Roots};

/// Floor of the square root of `n`, exact for every `u64`.
pub fn isqrt(n: u64) -> u64 {
    n.sqrt()
}

/// Ceiling of the square root of `n`.
pub fn isqrt_ceil(n: u64) -> u64 {
    let r = isqrt(n);
    if r * r == n {
        r
    } else {
        r + 1
    }
}

pub fn gcd(a: u64, b: u64) -> u64 {
    a.gcd(&b)
}

/// Least common multiple, `None` on overflow. `lcm(0, x) = 0`.
pub fn lcm(a: u64, b: u64) -> Option<u64> {
    if a == 0 || b == 0 {
        return Some(0);
    }
    (a / gcd(a, b)).checked_mul(b)
}

/// Largest `n` accepted by [`factorize`].
pub const FACTOR_LIMIT: u64 = 1 << 63;

/// Prime factors of `n` with multiplicity, ascending. `factorize(1)` is empty.
///
/// Trial division; every value this crate factors is below `2^34`, so the
/// loop runs at most ~2^17 iterations.
pub fn factorize(mut n: u64) -> Vec<u64> {
    assert!((1..FACTOR_LIMIT).contains(&n), "factorize: {n} out of range");
    let mut out = Vec::new();
    while n.is_multiple_of(2) {
        out.push(2);
        n /= 2;
    }
    let mut d = 3u64;
    while d * d <= n {
        while n.is_multiple_of(d) {
            out.push(d);
            n /= d;
        }
        d += 2;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// Distinct prime divisors of `n`, ascending.
pub fn prime_divisors(n: u64) -> Vec<u64> {
    let mut f = factorize(n);
    f.dedup();
    f
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n.is_multiple_of(2) {
        return n == 2;
    }
    let mut d = 3u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 2;
    }
    true
}

/// Writes `q = p^k` with `p` prime, or returns `None` if `q` is not a prime power.
pub fn prime_power(q: u64) -> Option<(u64, u32)> {
    if q < 2 {
        return None;
    }
    let f = factorize(q);
    let p = f[0];
    if f.iter().all(|&x| x == p) {
        Some((p, f.len() as u32))
    } else {
        None
    }
}

/// Primes `<= n` by the sieve of Eratosthenes.
pub fn primes_up_to(n: u64) -> Vec<u64> {
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
        let mut j = i * i;
        while j <= n {
            composite[j] = true;
            j += i;
        }
    }
    out
}

/// All prime powers `p^k <= n` (k >= 1), ascending and without duplicates.
pub fn prime_powers_up_to(n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    for p in primes_up_to(n) {
        let mut q = p;
        loop {
            out.push(q);
            match q.checked_mul(p) {
                Some(next) if next <= n => q = next,
                _ => break,
            }
        }
    }
    out.sort_unstable();
    out.dedup();
    out
}

/// `a mod m` lifted into `[0, m)` for signed `a`.
pub(crate) fn rem_euclid(a: i128, m: u64) -> u64 {
    a.rem_euclid(m as i128) as u64
}
