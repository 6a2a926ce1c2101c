//! Dirichlet characters to prime moduli, realized through a discrete-log
//! table over a fixed primitive root, plus their Gauss sums.
//!
//! A character value is carried as an exact angle numerator `t` with
//! `chi(a) = e(t / (q-1))`, so products of characters reduce to index
//! arithmetic mod `q-1` and only the final accumulation touches floats.

use std::sync::Arc;

use num_complex::Complex64;
use serde::Serialize;

use crate::arith::{self, gcd, is_prime, pow_mod, MAX_MODULUS};
use crate::cx::{e_frac, ComplexSum};
use crate::error::{Error, Result};

/// Discrete logarithms of `F_q^x` with respect to the smallest primitive root.
#[derive(Debug)]
pub struct MultiplicativeGroupTable {
    modulus: u64,
    root: u64,
    dlog: Vec<u32>,
}

/// Smallest primitive root mod a prime `q`, chosen deterministically.
pub fn smallest_primitive_root(q: u64) -> u64 {
    if q == 2 {
        return 1;
    }
    let phi = q - 1;
    let factors = arith::prime_factors(phi);
    'candidate: for g in 2..q {
        for &f in &factors {
            if pow_mod(g, phi / f, q) == 1 {
                continue 'candidate;
            }
        }
        return g;
    }
    unreachable!("every prime has a primitive root")
}

impl MultiplicativeGroupTable {
    pub fn new(modulus: u64) -> Result<Self> {
        if !is_prime(modulus) {
            return Err(Error::NotPrime(modulus));
        }
        assert!(modulus <= MAX_MODULUS, "modulus above 2^31 not supported");
        let root = smallest_primitive_root(modulus);
        let mut dlog = vec![0u32; modulus as usize];
        let mut acc = 1u64;
        for j in 0..modulus - 1 {
            dlog[acc as usize] = j as u32;
            acc = arith::mul_mod(acc, root, modulus);
        }
        Ok(Self { modulus, root, dlog })
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn root(&self) -> u64 {
        self.root
    }

    /// `dlog(a)` for `a` coprime to the modulus; `None` on the zero class.
    pub fn dlog(&self, a: u64) -> Option<u32> {
        let r = a % self.modulus;
        if r == 0 {
            None
        } else {
            Some(self.dlog[r as usize])
        }
    }
}

/// A Dirichlet character mod a prime `q`, determined by its index `k`:
/// the value on the fixed primitive root `g` is `e(k / (q-1))`.
#[derive(Clone, Debug)]
pub struct DirichletCharacter {
    group: Arc<MultiplicativeGroupTable>,
    index: u64,
}

/// Character mod prime `q` with index `k`, `0 <= k <= q-2`.
pub fn build_character(q: u64, k: u64) -> Result<DirichletCharacter> {
    let group = Arc::new(MultiplicativeGroupTable::new(q)?);
    DirichletCharacter::with_group(group, k)
}

/// The quadratic (Legendre) character mod an odd prime.
pub fn quadratic_character(q: u64) -> Result<DirichletCharacter> {
    if q == 2 {
        return Err(Error::InvalidParameter(
            "no quadratic character mod 2".into(),
        ));
    }
    build_character(q, (q - 1) / 2)
}

impl DirichletCharacter {
    /// Attach a character index to an existing group table. Cheap, so loops
    /// over all characters of one modulus should share the table.
    pub fn with_group(group: Arc<MultiplicativeGroupTable>, index: u64) -> Result<Self> {
        let q = group.modulus();
        if q >= 3 && index > q - 2 {
            return Err(Error::InvalidParameter(format!(
                "character index {index} out of range for modulus {q}"
            )));
        }
        if q == 2 && index != 0 {
            return Err(Error::InvalidParameter(
                "only the principal character exists mod 2".into(),
            ));
        }
        Ok(Self { group, index })
    }

    pub fn group(&self) -> &Arc<MultiplicativeGroupTable> {
        &self.group
    }

    pub fn modulus(&self) -> u64 {
        self.group.modulus()
    }

    pub fn index(&self) -> u64 {
        self.index
    }

    pub fn is_principal(&self) -> bool {
        self.index == 0
    }

    /// For prime modulus, primitive is the same as nonprincipal.
    pub fn is_primitive(&self) -> bool {
        self.index != 0
    }

    /// `chi(-1)` as `+1` or `-1`.
    pub fn parity(&self) -> i32 {
        if self.index % 2 == 0 {
            1
        } else {
            -1
        }
    }

    pub fn is_odd(&self) -> bool {
        self.parity() == -1
    }

    /// Multiplicative order of the character.
    pub fn order(&self) -> u64 {
        let phi = self.modulus() - 1;
        if self.index == 0 {
            1
        } else {
            phi / gcd(self.index, phi)
        }
    }

    pub fn conjugate(&self) -> Self {
        let phi = self.modulus() - 1;
        Self {
            group: Arc::clone(&self.group),
            index: (phi - self.index) % phi,
        }
    }

    /// Exact angle numerator `t` with `chi(a) = e(t / (q-1))`, or `None` when
    /// `q | a` (where the character vanishes).
    pub fn angle_numerator(&self, a: u64) -> Option<u64> {
        let d = self.group.dlog(a)?;
        Some(arith::mul_mod(self.index, d as u64, self.modulus() - 1))
    }

    pub fn eval(&self, a: u64) -> Complex64 {
        match self.angle_numerator(a) {
            None => Complex64::new(0.0, 0.0),
            Some(t) => e_frac(t as i128, self.modulus() - 1),
        }
    }

    pub fn eval_i64(&self, a: i64) -> Complex64 {
        self.eval(arith::reduce_i64(a, self.modulus()))
    }

    /// Dense value table indexed by residue, for hot loops.
    pub fn value_table(&self) -> Vec<Complex64> {
        (0..self.modulus()).map(|a| self.eval(a)).collect()
    }
}

/// The Gauss sum `g_chi = sum_a chi(a) e(a/q)` together with its modulus data.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct GaussSumValue {
    pub modulus: u64,
    pub index: u64,
    pub re: f64,
    pub im: f64,
}

impl GaussSumValue {
    pub fn value(&self) -> Complex64 {
        Complex64::new(self.re, self.im)
    }

    pub fn abs(&self) -> f64 {
        self.value().norm()
    }

    /// Unit sign `g_chi / |g_chi|`.
    pub fn sign(&self) -> Complex64 {
        self.value() / self.abs()
    }
}

/// Exact q-term accumulation of the Gauss sum of `chi`.
///
/// ```
/// use burgess_core::character::{gauss_sum, quadratic_character};
///
/// let g = gauss_sum(&quadratic_character(13).unwrap());
/// assert!((g.abs() - 13f64.sqrt()).abs() < 1e-12);
/// ```
pub fn gauss_sum(chi: &DirichletCharacter) -> GaussSumValue {
    let q = chi.modulus();
    let mut acc = ComplexSum::new();
    for a in 1..q {
        if let Some(t) = chi.angle_numerator(a) {
            // chi(a) e(a/q) = e(t/(q-1) + a/q); combine exactly over q(q-1).
            let num = t as i128 * q as i128 + a as i128 * (q - 1) as i128;
            acc.add(e_frac(num, q * (q - 1)));
        }
    }
    let v = acc.value();
    GaussSumValue {
        modulus: q,
        index: chi.index(),
        re: v.re,
        im: v.im,
    }
}
