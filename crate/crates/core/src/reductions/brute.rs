//! Literal enumerations of the character sums under verification.
//!
//! Everything here expands the defining multiple sums term by term, using
//! only the character and residue primitives. The closed forms these are
//! checked against live in `closed.rs` and go through the higher-level sum
//! evaluators instead; the two paths share nothing beyond that base layer.

use num_complex::Complex64;
use std::sync::Arc;

use crate::arith::{gcd, inv_mod, mul_mod, reduce_i64};
use crate::character::{gauss_sum, DirichletCharacter, MultiplicativeGroupTable};
use crate::cx::{e_frac, ComplexSum};
use crate::error::Result;

use super::IdentityCase;

/// Table of `e(t/q)` for `t` in `[0, q)`.
pub(super) struct PhaseTable {
    q: u64,
    roots: Vec<Complex64>,
}

impl PhaseTable {
    pub(super) fn new(q: u64) -> Self {
        let roots = (0..q).map(|t| e_frac(t as i128, q)).collect();
        Self { q, roots }
    }

    #[inline]
    pub(super) fn at(&self, t: u64) -> Complex64 {
        self.roots[(t % self.q) as usize]
    }
}

/// All characters mod a prime `p`, sharing one group table.
pub(super) fn characters_mod(p: u64) -> Result<Vec<DirichletCharacter>> {
    let group = Arc::new(MultiplicativeGroupTable::new(p)?);
    (0..p - 1)
        .map(|k| DirichletCharacter::with_group(Arc::clone(&group), k))
        .collect()
}

/// The twisted character sum over the full modulus `Q = c p M`:
///
/// `sum_psi (1 - psi(-1)) g_psi conj(psi)(m)
///    sum_{a mod Q} conj(chi)(a) S_psi(n p l, a; Q) e(a r / Q)`
///
/// with the Kloosterman sums expanded inline. The weight `(1 - psi(-1))` is
/// kept literal: the loop visits every character mod `p`, including the
/// principal one. Returns the value and the number of accumulated terms.
pub(super) fn frak_c(case: &IdentityCase) -> Result<(Complex64, u64)> {
    let p = case.p;
    let big_m = case.big_m;
    let q = case.c * p * big_m;
    let phases = PhaseTable::new(q);
    let chi = case.chi()?;
    let chi_bar: Vec<Complex64> = chi.conjugate().value_table();

    // inner_vec[s] = sum_{a mod Q} conj(chi)(a) e(a s / Q); reused by every
    // alpha through s = alpha^{-1} + r.
    let mut terms: u64 = 0;
    let mut inner_vec = vec![Complex64::new(0.0, 0.0); q as usize];
    for (s, slot) in inner_vec.iter_mut().enumerate() {
        let mut acc = ComplexSum::new();
        for a in 0..q {
            let cv = chi_bar[(a % big_m) as usize];
            if cv.re == 0.0 && cv.im == 0.0 {
                continue;
            }
            acc.add(cv * phases.at(mul_mod(a, s as u64, q)));
        }
        terms += q;
        *slot = acc.value();
    }

    let npl = (case.n as u128 * p as u128 * case.ell as u128 % q as u128) as u64;
    let mut total = ComplexSum::new();
    for psi in characters_mod(p)? {
        let weight = 1.0 - psi.parity() as f64;
        let g_psi = gauss_sum(&psi).value();
        let psi_bar_m = psi.eval(case.m % p).conj();
        let mut sum_alpha = ComplexSum::new();
        for alpha in 1..q {
            if gcd(alpha, q) != 1 {
                continue;
            }
            let alpha_inv = inv_mod(alpha as i64, q).expect("unit");
            let w = psi.eval(alpha % p) * phases.at(mul_mod(alpha, npl, q));
            sum_alpha.add(w * inner_vec[((alpha_inv + case.r) % q) as usize]);
            terms += 1;
        }
        total.add(g_psi * psi_bar_m * sum_alpha.value() * weight);
    }
    Ok((total.value(), terms))
}

/// The opened double sum of the part modulo `cp`, for one sign choice:
///
/// `sum_psi g_psi conj(psi)(sign * m)
///    sum*_{b mod cp} psi(b) e(b Mbar n p l / cp)
///      sum_{a mod cp} e((bbar Mbar + r Mbar) a / cp)`
pub(super) fn cp_part_opened(case: &IdentityCase, sign: i64) -> Result<(Complex64, u64)> {
    let cp = case.c * case.p;
    let phases = PhaseTable::new(cp);
    let m_bar = inv_mod(case.big_m as i64, cp)?;
    let npl_scaled = mul_mod(
        (case.n as u128 * case.p as u128 * case.ell as u128 % cp as u128) as u64,
        m_bar,
        cp,
    );
    let r_scaled = mul_mod(case.r % cp, m_bar, cp);
    let signed_m = reduce_i64(sign * case.m as i64, case.p);
    let mut total = ComplexSum::new();
    let mut terms = 0u64;
    for psi in characters_mod(case.p)? {
        let g_psi = gauss_sum(&psi).value();
        let psi_bar = psi.eval(signed_m).conj();
        let mut sum_b = ComplexSum::new();
        for b in 1..cp {
            if gcd(b, cp) != 1 {
                continue;
            }
            let b_bar = inv_mod(b as i64, cp).expect("unit");
            let outer = psi.eval(b % case.p) * phases.at(mul_mod(b, npl_scaled, cp));
            let s = (mul_mod(b_bar, m_bar, cp) + r_scaled) % cp;
            let mut sum_a = ComplexSum::new();
            for a in 0..cp {
                sum_a.add(phases.at(mul_mod(a, s, cp)));
                terms += 1;
            }
            sum_b.add(outer * sum_a.value());
        }
        total.add(g_psi * psi_bar * sum_b.value());
    }
    Ok((total.value(), terms))
}

/// The mod-M sum of the Gauss twist identity, Kloosterman expanded:
/// `sum_{a mod M} conj(chi)(a) S(cbar n l, cbar a; M) e(a r cbar / M)`.
pub(super) fn c_twist_left(case: &IdentityCase) -> Result<(Complex64, u64)> {
    let big_m = case.big_m;
    let phases = PhaseTable::new(big_m);
    let chi_bar = case.chi()?.conjugate().value_table();
    let c_bar = inv_mod(case.c as i64, big_m)?;
    let a_arg = mul_mod(
        (case.n as u128 * case.ell as u128 % big_m as u128) as u64,
        c_bar,
        big_m,
    );
    let r_scaled = mul_mod(case.r % big_m, c_bar, big_m);
    let mut outer = ComplexSum::new();
    let mut terms = 0u64;
    for a in 0..big_m {
        let cv = chi_bar[a as usize];
        if cv.re == 0.0 && cv.im == 0.0 {
            continue;
        }
        let b_arg = mul_mod(a, c_bar, big_m);
        let mut kloo = ComplexSum::new();
        for beta in 1..big_m {
            let beta_inv = inv_mod(beta as i64, big_m).expect("unit mod prime");
            let t = (mul_mod(beta, a_arg, big_m) + mul_mod(beta_inv, b_arg, big_m)) % big_m;
            kloo.add(phases.at(t));
            terms += 1;
        }
        outer.add(cv * kloo.value() * phases.at(mul_mod(a, r_scaled, big_m)));
    }
    Ok((outer.value(), terms))
}

/// The triple sum over `(b, a1, a2) mod M` that collapses to the rational
/// character sum:
///
/// `sum_b sum*_{a1} sum*_{a2} chi(a1bar + r1) conj(chi)(a2bar + r2)
///    e(b [c1bar l1 (a1 + r1bar) - c2bar l2 (a2 + r2bar) + r1bar r2bar n] / M)`
pub(super) fn c_dagger(case: &IdentityCase) -> Result<(Complex64, u64)> {
    let big_m = case.big_m;
    let phases = PhaseTable::new(big_m);
    let chi = case.chi()?;
    let chi_vals = chi.value_table();
    let chi_bar_vals = chi.conjugate().value_table();

    let inv = |x: u64| inv_mod(x as i64, big_m).expect("unit mod prime");
    let c1_bar_l1 = mul_mod(inv(case.c1 % big_m), case.ell1 % big_m, big_m);
    let c2_bar_l2 = mul_mod(inv(case.c2 % big_m), case.ell2 % big_m, big_m);
    let r1_bar = inv(case.r1 % big_m);
    let r2_bar = inv(case.r2 % big_m);
    let n_term = mul_mod(mul_mod(r1_bar, r2_bar, big_m), case.n % big_m, big_m);

    let mut total = ComplexSum::new();
    let mut terms = 0u64;
    for a1 in 1..big_m {
        let f1 = chi_vals[((inv(a1) + case.r1) % big_m) as usize];
        let part1 = mul_mod(c1_bar_l1, (a1 + r1_bar) % big_m, big_m);
        for a2 in 1..big_m {
            let f2 = chi_bar_vals[((inv(a2) + case.r2) % big_m) as usize];
            let coeff = f1 * f2;
            if coeff.re == 0.0 && coeff.im == 0.0 {
                terms += big_m;
                continue;
            }
            let part2 = mul_mod(c2_bar_l2, (a2 + r2_bar) % big_m, big_m);
            let bracket = ((part1 + big_m - part2) % big_m + n_term) % big_m;
            let mut sum_b = ComplexSum::new();
            for b in 0..big_m {
                sum_b.add(phases.at(mul_mod(b, bracket, big_m)));
                terms += 1;
            }
            total.add(coeff * sum_b.value());
        }
    }
    Ok((total.value(), terms))
}
