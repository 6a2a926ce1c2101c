//! Exact modular arithmetic: gcd, inverses, powers, primality, prime
//! enumeration and a canonical residue ring.
//!
//! Moduli are capped at `2^31` so that every product fits comfortably in
//! `u128` intermediates and every residue in `i64`.

use crate::error::{Error, Result};

/// Largest modulus accepted by [`ResidueRing`] and the character machinery.
pub const MAX_MODULUS: u64 = 1 << 31;

pub fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

/// Extended Euclid: returns `(g, x, y)` with `a*x + b*y = g = gcd(a, b)`.
pub fn ext_gcd(a: i128, b: i128) -> (i128, i128, i128) {
    if b == 0 {
        (a, 1, 0)
    } else {
        let (g, x, y) = ext_gcd(b, a % b);
        (g, y, x - (a / b) * y)
    }
}

/// Multiplicative inverse of `a` modulo `m`, as a residue in `[0, m)`.
///
/// `a` may be any integer; it is reduced first. Errors with
/// [`Error::NonInvertible`] when `gcd(a, m) > 1`, which callers treat as a
/// degenerate parameter tuple.
pub fn inv_mod(a: i64, m: u64) -> Result<u64> {
    if m == 0 {
        return Err(Error::InvalidParameter("zero modulus".into()));
    }
    if m == 1 {
        return Ok(0);
    }
    let a_red = reduce_i64(a, m);
    let (g, x, _) = ext_gcd(a_red as i128, m as i128);
    if g != 1 {
        return Err(Error::NonInvertible(a_red, m));
    }
    let mut x = x % m as i128;
    if x < 0 {
        x += m as i128;
    }
    Ok(x as u64)
}

/// Reduce an `i64` into the canonical residue range `[0, m)`.
pub fn reduce_i64(a: i64, m: u64) -> u64 {
    debug_assert!(m > 0);
    let m_i = m as i128;
    let mut r = (a as i128) % m_i;
    if r < 0 {
        r += m_i;
    }
    r as u64
}

pub fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

pub fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    if m == 1 {
        return 0;
    }
    let mut acc = 1u64;
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

/// Deterministic Miller-Rabin, exact for all `u64`.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n == p {
            return true;
        }
        if n % p == 0 {
            return false;
        }
    }
    let mut d = n - 1;
    let mut s = 0u32;
    while d & 1 == 0 {
        d >>= 1;
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

/// All primes in `[lo, hi]` by a plain sieve. Intended for desk-scale ranges.
pub fn primes_in(lo: u64, hi: u64) -> Vec<u64> {
    if hi < 2 || hi < lo {
        return Vec::new();
    }
    let hi_us = hi as usize;
    let mut composite = vec![false; hi_us + 1];
    let mut out = Vec::new();
    for n in 2..=hi_us {
        if !composite[n] {
            if n as u64 >= lo {
                out.push(n as u64);
            }
            let mut k = n * n;
            while k <= hi_us {
                composite[k] = true;
                k += n;
            }
        }
    }
    out
}

/// Distinct prime factors by trial division.
pub fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut p = 2u64;
    while p * p <= n {
        if n % p == 0 {
            out.push(p);
            while n % p == 0 {
                n /= p;
            }
        }
        p += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// Arithmetic in `Z/m` with all results kept in the canonical range `[0, m)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ResidueRing {
    modulus: u64,
}

impl ResidueRing {
    pub fn new(modulus: u64) -> Self {
        assert!(modulus >= 1, "modulus must be positive");
        assert!(modulus <= MAX_MODULUS, "modulus above 2^31 not supported");
        Self { modulus }
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn reduce(&self, a: i64) -> u64 {
        reduce_i64(a, self.modulus)
    }

    pub fn add(&self, a: u64, b: u64) -> u64 {
        let s = a % self.modulus + b % self.modulus;
        if s >= self.modulus {
            s - self.modulus
        } else {
            s
        }
    }

    pub fn sub(&self, a: u64, b: u64) -> u64 {
        let a = a % self.modulus;
        let b = b % self.modulus;
        if a >= b {
            a - b
        } else {
            self.modulus - b + a
        }
    }

    pub fn neg(&self, a: u64) -> u64 {
        let a = a % self.modulus;
        if a == 0 {
            0
        } else {
            self.modulus - a
        }
    }

    pub fn mul(&self, a: u64, b: u64) -> u64 {
        mul_mod(a % self.modulus, b % self.modulus, self.modulus)
    }

    pub fn pow(&self, base: u64, exp: u64) -> u64 {
        pow_mod(base, exp, self.modulus)
    }

    /// Inverse of `a`, defined exactly when `gcd(a, m) = 1`.
    pub fn inv(&self, a: u64) -> Result<u64> {
        inv_mod((a % self.modulus) as i64, self.modulus)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn inv_mod_examples() {
        assert_eq!(inv_mod(3, 7).unwrap(), 5);
        for n in [2u64, 5, 97, 1_000_003] {
            assert_eq!(inv_mod(1, n).unwrap(), 1 % n);
        }
        assert!(matches!(inv_mod(2, 4), Err(Error::NonInvertible(2, 4))));
    }

    #[test]
    fn inv_mod_negative_and_random() {
        assert_eq!(inv_mod(-3, 7).unwrap(), inv_mod(4, 7).unwrap());
        let ring = ResidueRing::new(10_007);
        for a in 1..200u64 {
            let inv = ring.inv(a).unwrap();
            assert_eq!(ring.mul(a, inv), 1);
        }
    }

    #[test]
    fn ring_keeps_canonical_range() {
        let ring = ResidueRing::new(13);
        for a in 0..13 {
            for b in 0..13 {
                assert!(ring.add(a, b) < 13);
                assert!(ring.sub(a, b) < 13);
                assert!(ring.mul(a, b) < 13);
            }
        }
        assert_eq!(ring.reduce(-1), 12);
        assert_eq!(ring.neg(0), 0);
    }

    #[test]
    fn primality_spot_checks() {
        assert!(is_prime(2));
        assert!(is_prime(10_007));
        assert!(is_prime(2_147_483_647));
        assert!(!is_prime(1));
        assert!(!is_prime(10_009 * 3));
        assert_eq!(primes_in(10, 20), vec![11, 13, 17, 19]);
        assert_eq!(primes_in(2, 2), vec![2]);
    }

    #[test]
    fn factor_spot_checks() {
        assert_eq!(prime_factors(360), vec![2, 3, 5]);
        assert_eq!(prime_factors(97), vec![97]);
    }
}
