//! Closed-form sides of the verified identities, built from the high-level
//! sum evaluators (`expsums`, `character`) rather than raw loops.

use num_complex::Complex64;

use crate::arith::{inv_mod, mul_mod, reduce_i64};
use crate::character::gauss_sum;
use crate::cx::{e_frac, ComplexSum};
use crate::error::Result;
use crate::expsums::{kloosterman, rational_char_sum, KloostermanQuery, QuadPoly, RationalCharSumSpec};

use super::brute::characters_mod;
use super::IdentityCase;

/// Split of the full-modulus character sum into the product of the mod-M
/// piece and the twisted mod-cp piece, each evaluated through the
/// Kloosterman evaluator.
pub(super) fn factorization_product(case: &IdentityCase) -> Result<(Complex64, u64)> {
    let big_m = case.big_m;
    let cp = case.c * case.p;
    let mut terms = 0u64;

    // sum_{a mod M} conj(chi)(a) S(n p l W, a W; M) e(a r W / M), W = cp^{-1}.
    let w = inv_mod(cp as i64, big_m)?;
    let chi_bar = case.chi()?.conjugate();
    let npl_w = mul_mod(
        (case.n as u128 * case.p as u128 * case.ell as u128 % big_m as u128) as u64,
        w,
        big_m,
    );
    let mut m_factor = ComplexSum::new();
    for a in 0..big_m {
        let cv = chi_bar.eval(a);
        if cv.re == 0.0 && cv.im == 0.0 {
            continue;
        }
        let s = kloosterman(&KloostermanQuery::untwisted(
            npl_w as i64,
            mul_mod(a, w, big_m) as i64,
            big_m,
        ))?;
        terms += big_m;
        let phase = e_frac(a as i128 * mul_mod(case.r % big_m, w, big_m) as i128, big_m);
        m_factor.add(cv * s * phase);
    }

    // sum_psi (1 - psi(-1)) g_psi conj(psi)(m) *
    //   sum_{a mod cp} S_psi(n p l Mbar, a Mbar; cp) e(a r Mbar / cp)
    let m_bar = inv_mod(big_m as i64, cp)?;
    let npl_mbar = mul_mod(
        (case.n as u128 * case.p as u128 * case.ell as u128 % cp as u128) as u64,
        m_bar,
        cp,
    );
    let r_mbar = mul_mod(case.r % cp, m_bar, cp);
    let mut psi_block = ComplexSum::new();
    for psi in characters_mod(case.p)? {
        let weight = 1.0 - psi.parity() as f64;
        let g_psi = gauss_sum(&psi).value();
        let psi_bar_m = psi.eval(case.m % case.p).conj();
        let mut cp_factor = ComplexSum::new();
        for a in 0..cp {
            let s = kloosterman(&KloostermanQuery::twisted(
                npl_mbar as i64,
                mul_mod(a, m_bar, cp) as i64,
                cp,
                psi.clone(),
            ))?;
            terms += cp;
            cp_factor.add(s * e_frac(a as i128 * r_mbar as i128, cp));
        }
        psi_block.add(g_psi * psi_bar_m * cp_factor.value() * weight);
    }

    Ok((m_factor.value() * psi_block.value(), terms))
}

/// Collapsed value of the opened mod-cp double sum:
/// `cp sum_psi g_psi conj(psi)(-sign * m r) e(-(r M)^{-1} n p l / cp)`.
pub(super) fn cp_eval_closed(case: &IdentityCase, sign: i64) -> Result<(Complex64, u64)> {
    let cp = case.c * case.p;
    let rm_inv = inv_mod((case.r as i128 * case.big_m as i128 % cp as i128) as i64, cp)?;
    let npl = case.n as i128 * case.p as i128 * case.ell as i128;
    let phase = e_frac(-(rm_inv as i128) * npl, cp);
    let target = reduce_i64(-sign * (case.m as i128 * case.r as i128 % case.p as i128) as i64, case.p);
    let mut psi_sum = ComplexSum::new();
    let mut terms = 0u64;
    for psi in characters_mod(case.p)? {
        psi_sum.add(gauss_sum(&psi).value() * psi.eval(target).conj());
        terms += case.p;
    }
    Ok((cp as f64 * phase * psi_sum.value(), terms))
}

/// The two evaluated pieces `C_minus - C_plus` with
/// `C_pm = cp (p-1) e(pm m r / p - (r M)^{-1} n l / c) * Mpart` and
/// `Mpart = sum_{a mod M} conj(chi)(a) S(cbar n l, (cp)bar a; M) e(a r (cp)bar / M)`.
pub(super) fn psi_eval_closed(case: &IdentityCase) -> Result<(Complex64, u64)> {
    let big_m = case.big_m;
    let cp = case.c * case.p;
    let c = case.c;
    let mut terms = 0u64;

    let cp_bar = inv_mod(cp as i64, big_m)?;
    let c_bar = inv_mod(c as i64, big_m)?;
    let chi_bar = case.chi()?.conjugate();
    let nl_cbar = mul_mod(
        (case.n as u128 * case.ell as u128 % big_m as u128) as u64,
        c_bar,
        big_m,
    );
    let r_cp_bar = mul_mod(case.r % big_m, cp_bar, big_m);
    let mut m_part = ComplexSum::new();
    for a in 0..big_m {
        let cv = chi_bar.eval(a);
        if cv.re == 0.0 && cv.im == 0.0 {
            continue;
        }
        let s = kloosterman(&KloostermanQuery::untwisted(
            nl_cbar as i64,
            mul_mod(a, cp_bar, big_m) as i64,
            big_m,
        ))?;
        terms += big_m;
        m_part.add(cv * s * e_frac(a as i128 * r_cp_bar as i128, big_m));
    }
    let m_part = m_part.value();

    // e(pm m r / p - (r M)^{-1}_c n l / c), combined over denominator p c.
    let rm_inv_c = inv_mod((case.r as i128 * case.big_m as i128 % c.max(1) as i128) as i64, c)?;
    let nl = case.n as i128 * case.ell as i128;
    let mr = case.m as i128 * case.r as i128;
    let scale = (cp * (case.p - 1)) as f64;
    let mut value = Complex64::new(0.0, 0.0);
    for sign in [-1i128, 1] {
        // numerator over denominator p*c: sign*m*r*c - rm_inv*n*l*p
        let num = sign * mr * c as i128 - rm_inv_c as i128 * nl * case.p as i128;
        let piece = scale * e_frac(num, case.p * c) * m_part;
        if sign < 0 {
            value += piece;
        } else {
            value -= piece;
        }
    }
    Ok((value, terms))
}

/// Exact rational exponents of the reciprocity identity
/// `e(-(r M)^{-1} n l / c) e(n l / (c M r)) = e(c^{-1} n l / (r M))`,
/// as reduced numerators over the common denominator `c r M`.
pub(super) fn reciprocity_exponents(
    c: u64,
    r: u64,
    big_m: u64,
    n: u64,
    ell: u64,
) -> Result<(u64, u64)> {
    let crm = c as i128 * r as i128 * big_m as i128;
    let nl = n as i128 * ell as i128;
    let x = inv_mod((r as i128 * big_m as i128 % c as i128) as i64, c)? as i128;
    let y = inv_mod(c as i64, r * big_m)? as i128;
    // -x n l / c + n l / (c M r) over c r M: (-x n l (r M) + n l) mod crM
    let lhs = (-x * nl * (r as i128 * big_m as i128) + nl).rem_euclid(crm);
    // y n l / (r M) over c r M: (y n l c) mod crM
    let rhs = (y * nl * c as i128).rem_euclid(crm);
    Ok((lhs as u64, rhs as u64))
}

/// Right side of the Gauss twist identity:
/// `g_{conj(chi)} conj(chi)(c) sum*_alpha chi(alpha^{-1} + r) e(alpha cbar n l / M)`.
pub(super) fn c_twist_closed(case: &IdentityCase) -> Result<(Complex64, u64)> {
    let big_m = case.big_m;
    let chi = case.chi()?;
    let chi_bar = chi.conjugate();
    let g = gauss_sum(&chi_bar).value();
    let c_bar = inv_mod(case.c as i64, big_m)?;
    let arg = mul_mod(
        (case.n as u128 * case.ell as u128 % big_m as u128) as u64,
        c_bar,
        big_m,
    );
    let mut sum = ComplexSum::new();
    let mut terms = big_m; // the Gauss sum
    for alpha in 1..big_m {
        let alpha_inv = inv_mod(alpha as i64, big_m)?;
        sum.add(chi.eval((alpha_inv + case.r) % big_m) * e_frac(alpha as i128 * arg as i128, big_m));
        terms += 1;
    }
    Ok((g * chi_bar.eval(case.c % big_m) * sum.value(), terms))
}

/// Data of the collapsed rational character sum for the triple-sum case.
pub(super) struct CdaggerClosed {
    pub value: Complex64,
    pub spec: RationalCharSumSpec,
    pub f_residue: u64,
    pub terms: u64,
}

/// `M * sum_x chi(c1bar l1 (x c2bar l2 - phi)^{-1} + r1) conj(chi)(x^{-1} + r2)`
/// with `phi = (c1 c2 r1 r2)^{-1} F` and `F = l1 c2 r2 - l2 c1 r1 + c1 c2 n`,
/// realized as a quadratic rational character sum with the points `0` and
/// `phi c2 l2^{-1}` removed.
pub(super) fn c_dagger_closed(case: &IdentityCase) -> Result<CdaggerClosed> {
    let big_m = case.big_m;
    let inv = |x: u64| inv_mod(x as i64, big_m);
    let c1 = case.c1 % big_m;
    let c2 = case.c2 % big_m;
    let r1 = case.r1 % big_m;
    let r2 = case.r2 % big_m;
    let l1 = case.ell1 % big_m;
    let l2 = case.ell2 % big_m;

    let f = case.ell1 as i128 * case.c2 as i128 * case.r2 as i128
        - case.ell2 as i128 * case.c1 as i128 * case.r1 as i128
        + case.c1 as i128 * case.c2 as i128 * case.n as i128;
    let f_residue = reduce_i64(f.rem_euclid(big_m as i128) as i64, big_m);

    let prod = mul_mod(mul_mod(c1, c2, big_m), mul_mod(r1, r2, big_m), big_m);
    let phi = mul_mod(inv(prod)? , f_residue, big_m);
    let c1_bar_l1 = mul_mod(inv(c1)?, l1, big_m);
    let c2_bar_l2 = mul_mod(inv(c2)?, l2, big_m);

    // Q1 = r1 c2bar l2 x^2 + (c1bar l1 - r1 phi) x
    // Q2 = (c2bar l2 x - phi)(1 + r2 x)
    let ring = crate::arith::ResidueRing::new(big_m);
    let q1 = QuadPoly::new(
        0,
        ring.sub(c1_bar_l1, mul_mod(r1, phi, big_m)) as i64,
        mul_mod(r1, c2_bar_l2, big_m) as i64,
        big_m,
    );
    let q2 = QuadPoly::new(
        ring.neg(phi) as i64,
        ring.sub(c2_bar_l2, mul_mod(phi, r2, big_m)) as i64,
        mul_mod(c2_bar_l2, r2, big_m) as i64,
        big_m,
    );
    let x1 = mul_mod(mul_mod(c2, inv(l2)?, big_m), phi, big_m);
    let spec = RationalCharSumSpec::new(case.chi()?, q1, q2, &[0, x1])?;
    let value = Complex64::new(big_m as f64, 0.0) * rational_char_sum(&spec);
    Ok(CdaggerClosed {
        value,
        spec,
        f_residue,
        terms: big_m,
    })
}

/// The further-collapsed form valid when `M | F`:
/// `M sum*_x chi(c1bar l1 c2 l2bar x^{-1} + r1) conj(chi)(x^{-1} + r2)`.
pub(super) fn c_dagger_reduced(case: &IdentityCase) -> Result<Complex64> {
    let big_m = case.big_m;
    let chi = case.chi()?;
    let chi_bar = chi.conjugate();
    let inv = |x: u64| inv_mod(x as i64, big_m);
    let coeff = mul_mod(
        mul_mod(inv(case.c1 % big_m)?, case.ell1 % big_m, big_m),
        mul_mod(case.c2 % big_m, inv(case.ell2 % big_m)?, big_m),
        big_m,
    );
    let mut sum = ComplexSum::new();
    for x in 1..big_m {
        let x_bar = inv(x)?;
        sum.add(
            chi.eval((mul_mod(coeff, x_bar, big_m) + case.r1) % big_m)
                * chi_bar.eval((x_bar + case.r2) % big_m),
        );
    }
    Ok(Complex64::new(big_m as f64, 0.0) * sum.value())
}
