//! Integer helpers: primality, modular inverses, centered residues and
//! square roots modulo a prime.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

pub fn pow_mod_u64(mut base: u64, mut exp: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

/// Deterministic Miller-Rabin for the full `u64` range, restricted to odd primes.
pub fn is_odd_prime(n: u64) -> bool {
    if n < 3 || n.is_multiple_of(2) {
        return false;
    }
    const BASES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    for &b in &BASES {
        if n == b {
            return true;
        }
        if n.is_multiple_of(b) {
            return false;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d.is_multiple_of(2) {
        d /= 2;
        s += 1;
    }
    'witness: for &b in &BASES {
        let mut x = pow_mod_u64(b, d, n);
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

pub fn check_prime(p: u64) -> Result<()> {
    if is_odd_prime(p) {
        Ok(())
    } else {
        Err(Error::InvalidPrime(p))
    }
}

/// Least nonnegative residue of `x` modulo `m > 0`.
pub fn modulo(x: &BigInt, m: &BigInt) -> BigInt {
    x.mod_floor(m)
}

/// Residue of `x` modulo the odd modulus `m`, taken in `[-(m-1)/2, (m-1)/2]`.
pub fn centered(x: &BigInt, m: &BigInt) -> BigInt {
    let r = x.mod_floor(m);
    let twice: BigInt = &r * 2;
    if &twice > m {
        r - m
    } else {
        r
    }
}

pub fn mod_inverse(a: &BigInt, m: &BigInt) -> Option<BigInt> {
    let e = a.mod_floor(m).extended_gcd(m);
    if e.gcd.is_one() {
        Some(e.x.mod_floor(m))
    } else {
        None
    }
}

pub fn residue_u64(x: &BigInt, p: u64) -> u64 {
    x.mod_floor(&BigInt::from(p))
        .to_u64()
        .expect("residue fits in u64")
}

/// Legendre-style test: is `a` (coprime to `p`) a square modulo `p`.
pub fn is_square_mod_p(a: &BigInt, p: u64) -> bool {
    let r = residue_u64(a, p);
    r != 0 && pow_mod_u64(r, (p - 1) / 2, p) == 1
}

/// Tonelli-Shanks. Returns some root of `a` modulo the odd prime `p`, or
/// `None` when `a` is a nonresidue.
pub fn sqrt_mod_p(a: u64, p: u64) -> Option<u64> {
    let a = a % p;
    if a == 0 {
        return Some(0);
    }
    if pow_mod_u64(a, (p - 1) / 2, p) != 1 {
        return None;
    }
    if p % 4 == 3 {
        return Some(pow_mod_u64(a, (p + 1) / 4, p));
    }
    let mut q = p - 1;
    let mut s = 0u32;
    while q.is_multiple_of(2) {
        q /= 2;
        s += 1;
    }
    let mut z = 2;
    while pow_mod_u64(z, (p - 1) / 2, p) != p - 1 {
        z += 1;
    }
    let mut m = s;
    let mut c = pow_mod_u64(z, q, p);
    let mut t = pow_mod_u64(a, q, p);
    let mut r = pow_mod_u64(a, q.div_ceil(2), p);
    while t != 1 {
        let mut i = 0;
        let mut tt = t;
        while tt != 1 {
            tt = mul_mod(tt, tt, p);
            i += 1;
        }
        let b = pow_mod_u64(c, 1 << (m - i - 1), p);
        m = i;
        c = mul_mod(b, b, p);
        t = mul_mod(t, c, p);
        r = mul_mod(r, b, p);
    }
    Some(r)
}

/// Integer square root test: returns `Some(r)` with `r*r == n` when `n` is a
/// perfect square (negative numbers never are).
pub fn exact_sqrt(n: &BigInt) -> Option<BigInt> {
    if n.is_negative() {
        return None;
    }
    if n.is_zero() {
        return Some(BigInt::zero());
    }
    let r = n.sqrt();
    if &(&r * &r) == n {
        Some(r)
    } else {
        None
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn primes_small() {
        let found: Vec<u64> = (0..40).filter(|&n| is_odd_prime(n)).collect();
        assert_eq!(found, vec![3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37]);
        assert!(is_odd_prime(1_000_000_007));
        assert!(!is_odd_prime(1_000_000_007 * 3));
        assert!(!is_odd_prime(2));
    }

    #[test]
    fn tonelli_exhaustive_small_primes() {
        for p in [3u64, 5, 7, 11, 13, 17, 41, 97] {
            for a in 1..p {
                let brute = (1..p).any(|x| x * x % p == a);
                match sqrt_mod_p(a, p) {
                    Some(r) => {
                        assert!(brute);
                        assert_eq!(r * r % p, a);
                    }
                    None => assert!(!brute),
                }
            }
        }
    }

    #[test]
    fn centered_range() {
        let m = BigInt::from(25);
        for x in -60..60 {
            let c = centered(&BigInt::from(x), &m);
            assert!(c.abs() <= BigInt::from(12));
            assert_eq!((BigInt::from(x) - &c).mod_floor(&m), BigInt::zero());
        }
    }
}
