//! Word-size modular arithmetic and Chinese remaindering.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

#[inline]
pub fn mul_mod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

pub fn pow_mod(mut a: u64, mut e: u64, p: u64) -> u64 {
    let mut r = 1 % p;
    a %= p;
    while e > 0 {
        if e & 1 == 1 {
            r = mul_mod(r, a, p);
        }
        a = mul_mod(a, a, p);
        e >>= 1;
    }
    r
}

pub fn inv_mod(a: u64, p: u64) -> u64 {
    pow_mod(a, p - 2, p)
}

/// Deterministic Miller-Rabin for 64-bit integers.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n % p == 0 {
            return n == p;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d % 2 == 0 {
        d /= 2;
        s += 1;
    }
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// The `count` largest primes below `2^62`.
pub fn large_primes(count: usize) -> Vec<u64> {
    let mut out = Vec::with_capacity(count);
    let mut n = (1u64 << 62) - 1;
    while out.len() < count {
        if is_prime(n) {
            out.push(n);
        }
        n -= 2;
    }
    out
}

/// Reduction of a big integer modulo `p`.
pub fn big_mod(x: &BigInt, p: u64) -> u64 {
    let r = x.mod_floor(&BigInt::from(p));
    u64::try_from(r).unwrap()
}

/// Symmetric CRT reconstruction from residues modulo distinct primes.
pub fn crt(residues: &[u64], primes: &[u64]) -> BigInt {
    let mut x = BigInt::zero();
    let mut m = BigInt::one();
    for (&r, &p) in residues.iter().zip(primes) {
        let xm = big_mod(&x, p);
        let mm = big_mod(&m, p);
        let t = mul_mod((r + p - xm) % p, inv_mod(mm, p), p);
        x += &m * t;
        m *= p;
    }
    let half = &m >> 1;
    if x > half {
        x -= m;
    }
    x
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn primes_and_crt() {
        assert!(is_prime(1_000_000_007));
        assert!(!is_prime(1_000_000_007 * 3));
        let ps = large_primes(3);
        assert!(ps.iter().all(|&p| p < 1 << 62));
        let x = BigInt::parse_bytes(b"-123456789012345678901234567890123", 10).unwrap();
        let rs: Vec<u64> = ps.iter().map(|&p| big_mod(&x, p)).collect();
        assert_eq!(crt(&rs, &ps), x);
    }
}
