//! Numerical verification of the character-sum reduction chain: each step
//! is checked by evaluating its two sides through independent code paths
//! and comparing at `1e-8` relative accuracy (the reciprocity step is
//! checked in exact integers). The off-diagonal Bessel-tail estimator for
//! the negligibility criterion lives here too.

mod brute;
mod closed;

use num_complex::Complex64;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rand::SeedableRng;
use rayon::prelude::*;
use serde::Serialize;
use std::collections::BTreeMap;

use crate::analysis::bessel_j_series_bound;
use crate::arith::{gcd, is_prime, primes_in, reduce_i64};
use crate::character::{build_character, DirichletCharacter};
use crate::cx::e_frac;
use crate::error::{Error, Result};

/// Which identity a case exercises.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum IdentityTag {
    Factorization,
    CpEval,
    PsiEval,
    Reciprocity,
    CGaussTwist,
    CdaggerBsum,
    DiagonalDegen,
}

impl IdentityTag {
    pub fn as_str(&self) -> &'static str {
        match self {
            IdentityTag::Factorization => "FACTORIZATION",
            IdentityTag::CpEval => "CP-EVAL",
            IdentityTag::PsiEval => "PSI-EVAL",
            IdentityTag::Reciprocity => "RECIPROCITY",
            IdentityTag::CGaussTwist => "C-GAUSS-TWIST",
            IdentityTag::CdaggerBsum => "CDAGGER-BSUM",
            IdentityTag::DiagonalDegen => "DIAGONAL-DEGEN",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s.to_ascii_uppercase().as_str() {
            "FACTORIZATION" => Some(IdentityTag::Factorization),
            "CP-EVAL" | "CPEVAL" => Some(IdentityTag::CpEval),
            "PSI-EVAL" | "PSIEVAL" => Some(IdentityTag::PsiEval),
            "RECIPROCITY" => Some(IdentityTag::Reciprocity),
            "C-GAUSS-TWIST" | "CGAUSSTWIST" => Some(IdentityTag::CGaussTwist),
            "CDAGGER-BSUM" | "CDAGGERBSUM" => Some(IdentityTag::CdaggerBsum),
            "DIAGONAL-DEGEN" | "DIAGONALDEGEN" => Some(IdentityTag::DiagonalDegen),
            _ => None,
        }
    }
}

/// Parameter tuple of one identity instance. Fields a given tag does not
/// use stay at their neutral defaults; the per-tag constructors validate
/// the coprimality constraints of that identity.
#[derive(Clone, Debug)]
pub struct IdentityCase {
    pub tag: IdentityTag,
    pub p: u64,
    pub big_m: u64,
    pub c: u64,
    pub c1: u64,
    pub c2: u64,
    pub m: u64,
    pub n: u64,
    pub ell: u64,
    pub ell1: u64,
    pub ell2: u64,
    pub r: u64,
    pub r1: u64,
    pub r2: u64,
    pub chi_index: u64,
    /// Sign choice for the opened mod-cp evaluation: `+1` or `-1`.
    pub sign: i64,
}

impl IdentityCase {
    fn blank(tag: IdentityTag) -> Self {
        Self {
            tag,
            p: 3,
            big_m: 5,
            c: 1,
            c1: 1,
            c2: 1,
            m: 1,
            n: 1,
            ell: 1,
            ell1: 1,
            ell2: 1,
            r: 1,
            r1: 1,
            r2: 1,
            chi_index: 1,
            sign: 1,
        }
    }

    fn require_prime(v: u64, label: &str) -> Result<()> {
        if !is_prime(v) {
            return Err(Error::InvalidParameter(format!("{label} = {v} not prime")));
        }
        Ok(())
    }

    /// Case for the full-modulus split, needing `gcd(M, cp) = 1`.
    #[allow(clippy::too_many_arguments)]
    pub fn factorization(
        p: u64,
        big_m: u64,
        c: u64,
        m: u64,
        n: u64,
        ell: u64,
        r: u64,
        chi_index: u64,
    ) -> Result<Self> {
        Self::require_prime(p, "p")?;
        Self::require_prime(big_m, "M")?;
        if p == big_m {
            return Err(Error::ParameterDegeneracy("p = M".into()));
        }
        if c == 0 || gcd(big_m, c * p) != 1 {
            return Err(Error::ParameterDegeneracy(format!(
                "gcd(M, cp) must be 1: M={big_m}, cp={}",
                c * p
            )));
        }
        Ok(Self {
            tag: IdentityTag::Factorization,
            p,
            big_m,
            c,
            m,
            n,
            ell,
            r,
            chi_index,
            ..Self::blank(IdentityTag::Factorization)
        })
    }

    /// Case for the collapsed mod-cp sum, needing `(r, cp) = 1`.
    #[allow(clippy::too_many_arguments)]
    pub fn cp_eval(
        p: u64,
        big_m: u64,
        c: u64,
        m: u64,
        n: u64,
        ell: u64,
        r: u64,
        sign: i64,
    ) -> Result<Self> {
        Self::require_prime(p, "p")?;
        Self::require_prime(big_m, "M")?;
        if c == 0 || gcd(big_m, c * p) != 1 {
            return Err(Error::ParameterDegeneracy("gcd(M, cp) must be 1".into()));
        }
        if gcd(r, c * p) != 1 {
            return Err(Error::ParameterDegeneracy("(r, cp) must be 1".into()));
        }
        if sign != 1 && sign != -1 {
            return Err(Error::InvalidParameter("sign must be +1 or -1".into()));
        }
        Ok(Self {
            tag: IdentityTag::CpEval,
            p,
            big_m,
            c,
            m,
            n,
            ell,
            r,
            sign,
            ..Self::blank(IdentityTag::CpEval)
        })
    }

    /// Case for the evaluated twist-average, needing `(r, cp) = 1`.
    #[allow(clippy::too_many_arguments)]
    pub fn psi_eval(
        p: u64,
        big_m: u64,
        c: u64,
        m: u64,
        n: u64,
        ell: u64,
        r: u64,
        chi_index: u64,
    ) -> Result<Self> {
        let mut case = Self::factorization(p, big_m, c, m, n, ell, r, chi_index)?;
        if gcd(r, c * p) != 1 {
            return Err(Error::ParameterDegeneracy("(r, cp) must be 1".into()));
        }
        case.tag = IdentityTag::PsiEval;
        Ok(case)
    }

    pub fn c_gauss_twist(
        big_m: u64,
        c: u64,
        n: u64,
        ell: u64,
        r: u64,
        chi_index: u64,
    ) -> Result<Self> {
        Self::require_prime(big_m, "M")?;
        if c == 0 || gcd(c, big_m) != 1 {
            return Err(Error::ParameterDegeneracy("gcd(c, M) must be 1".into()));
        }
        if chi_index == 0 {
            return Err(Error::NotPrimitive(big_m, chi_index));
        }
        Ok(Self {
            tag: IdentityTag::CGaussTwist,
            big_m,
            c,
            n,
            ell,
            r,
            chi_index,
            ..Self::blank(IdentityTag::CGaussTwist)
        })
    }

    /// Case for the triple-sum collapse, needing all of `c1 c2 r1 r2 l1 l2`
    /// coprime to `M`.
    #[allow(clippy::too_many_arguments)]
    pub fn cdagger(
        big_m: u64,
        ell1: u64,
        ell2: u64,
        c1: u64,
        c2: u64,
        r1: u64,
        r2: u64,
        n: u64,
        chi_index: u64,
    ) -> Result<Self> {
        Self::require_prime(big_m, "M")?;
        for (label, v) in [
            ("l1", ell1),
            ("l2", ell2),
            ("c1", c1),
            ("c2", c2),
            ("r1", r1),
            ("r2", r2),
        ] {
            if v == 0 || gcd(v, big_m) != 1 {
                return Err(Error::ParameterDegeneracy(format!(
                    "gcd({label}, M) must be 1"
                )));
            }
        }
        if chi_index == 0 {
            return Err(Error::NotPrimitive(big_m, chi_index));
        }
        Ok(Self {
            tag: IdentityTag::CdaggerBsum,
            big_m,
            ell1,
            ell2,
            c1,
            c2,
            r1,
            r2,
            n,
            chi_index,
            ..Self::blank(IdentityTag::CdaggerBsum)
        })
    }

    pub fn reciprocity(c: u64, r: u64, big_m: u64, n: u64, ell: u64) -> Result<Self> {
        if gcd(c, r) != 1 || gcd(c, big_m) != 1 || gcd(r, big_m) != 1 {
            return Err(Error::NotCoprime(c, r * big_m));
        }
        Ok(Self {
            tag: IdentityTag::Reciprocity,
            c,
            r,
            big_m,
            n,
            ell,
            ..Self::blank(IdentityTag::Reciprocity)
        })
    }

    pub(crate) fn chi(&self) -> Result<DirichletCharacter> {
        build_character(self.big_m, self.chi_index)
    }

    /// Whether the tuple sits on the degenerate diagonal of the triple-sum
    /// identity: `r1 = r2`, `c1 l2 = c2 l1` and `M | F`, all mod `M`.
    pub fn is_degenerate_diagonal(&self) -> bool {
        let m = self.big_m;
        let f = self.ell1 as i128 * self.c2 as i128 * self.r2 as i128
            - self.ell2 as i128 * self.c1 as i128 * self.r1 as i128
            + self.c1 as i128 * self.c2 as i128 * self.n as i128;
        self.r1 % m == self.r2 % m
            && (self.c1 as u128 * self.ell2 as u128 % m as u128)
                == (self.c2 as u128 * self.ell1 as u128 % m as u128)
            && f.rem_euclid(m as i128) == 0
    }

    fn params(&self) -> BTreeMap<String, i64> {
        let mut map = BTreeMap::new();
        let mut put = |k: &str, v: u64| {
            map.insert(k.to_string(), v as i64);
        };
        match self.tag {
            IdentityTag::Factorization | IdentityTag::PsiEval => {
                put("p", self.p);
                put("M", self.big_m);
                put("c", self.c);
                put("m", self.m);
                put("n", self.n);
                put("ell", self.ell);
                put("r", self.r);
                put("chi", self.chi_index);
            }
            IdentityTag::CpEval => {
                put("p", self.p);
                put("M", self.big_m);
                put("c", self.c);
                put("m", self.m);
                put("n", self.n);
                put("ell", self.ell);
                put("r", self.r);
                map.insert("sign".to_string(), self.sign);
            }
            IdentityTag::Reciprocity => {
                put("c", self.c);
                put("r", self.r);
                put("M", self.big_m);
                put("n", self.n);
                put("ell", self.ell);
            }
            IdentityTag::CGaussTwist => {
                put("M", self.big_m);
                put("c", self.c);
                put("n", self.n);
                put("ell", self.ell);
                put("r", self.r);
                put("chi", self.chi_index);
            }
            IdentityTag::CdaggerBsum | IdentityTag::DiagonalDegen => {
                put("M", self.big_m);
                put("ell1", self.ell1);
                put("ell2", self.ell2);
                put("c1", self.c1);
                put("c2", self.c2);
                put("r1", self.r1);
                put("r2", self.r2);
                put("n", self.n);
                put("chi", self.chi_index);
            }
        }
        map
    }
}

/// Outcome of a single identity check.
#[derive(Clone, Debug, Serialize)]
pub struct VerificationReport {
    pub tag: String,
    pub params: BTreeMap<String, i64>,
    pub lhs: [f64; 2],
    pub rhs: [f64; 2],
    pub abs_err: f64,
    pub rel_err: f64,
    pub pass: bool,
    pub lhs_terms: u64,
    pub rhs_terms: u64,
}

pub const VERIFY_REL_TOL: f64 = 1e-8;

impl VerificationReport {
    fn from_sides(
        case: &IdentityCase,
        tag: IdentityTag,
        lhs: Complex64,
        rhs: Complex64,
        lhs_terms: u64,
        rhs_terms: u64,
    ) -> Self {
        let abs_err = (lhs - rhs).norm();
        let rhs_norm = rhs.norm();
        let rel_err = if rhs_norm > 0.0 {
            abs_err / rhs_norm
        } else {
            abs_err
        };
        let pass = rel_err <= VERIFY_REL_TOL || (rhs_norm < 1.0 && abs_err <= VERIFY_REL_TOL);
        Self {
            tag: tag.as_str().to_string(),
            params: case.params(),
            lhs: [lhs.re, lhs.im],
            rhs: [rhs.re, rhs.im],
            abs_err,
            rel_err,
            pass,
            lhs_terms,
            rhs_terms,
        }
    }

    pub fn lhs_value(&self) -> Complex64 {
        Complex64::new(self.lhs[0], self.lhs[1])
    }

    pub fn rhs_value(&self) -> Complex64 {
        Complex64::new(self.rhs[0], self.rhs[1])
    }

    pub fn json_line(&self) -> String {
        serde_json::to_string(self).expect("report serializes")
    }

    pub fn csv_header() -> &'static str {
        "tag,pass,abs_err,rel_err,lhs_re,lhs_im,rhs_re,rhs_im,lhs_terms,rhs_terms"
    }

    pub fn csv_row(&self) -> String {
        format!(
            "{},{},{},{},{},{},{},{},{},{}",
            self.tag,
            self.pass,
            self.abs_err,
            self.rel_err,
            self.lhs[0],
            self.lhs[1],
            self.rhs[0],
            self.rhs[1],
            self.lhs_terms,
            self.rhs_terms
        )
    }
}

/// Full-modulus sum against the CRT product of its mod-M and mod-cp parts.
pub fn verify_factorization(case: &IdentityCase) -> Result<VerificationReport> {
    let (lhs, lhs_terms) = brute::frak_c(case)?;
    let (rhs, rhs_terms) = closed::factorization_product(case)?;
    Ok(VerificationReport::from_sides(
        case,
        IdentityTag::Factorization,
        lhs,
        rhs,
        lhs_terms,
        rhs_terms,
    ))
}

/// Opened `(psi, b, a)` triple sum mod cp against its collapsed value.
pub fn verify_cp_eval(case: &IdentityCase) -> Result<VerificationReport> {
    let (lhs, lhs_terms) = brute::cp_part_opened(case, case.sign)?;
    let (rhs, rhs_terms) = closed::cp_eval_closed(case, case.sign)?;
    Ok(VerificationReport::from_sides(
        case,
        IdentityTag::CpEval,
        lhs,
        rhs,
        lhs_terms,
        rhs_terms,
    ))
}

/// Full twist-average against the evaluated difference of the two signed
/// pieces.
pub fn verify_psi_eval(case: &IdentityCase) -> Result<VerificationReport> {
    let (lhs, lhs_terms) = brute::frak_c(case)?;
    let (rhs, rhs_terms) = closed::psi_eval_closed(case)?;
    Ok(VerificationReport::from_sides(
        case,
        IdentityTag::PsiEval,
        lhs,
        rhs,
        lhs_terms,
        rhs_terms,
    ))
}

/// Exact rational-arithmetic check of the reciprocity relation. The report
/// passes only on exact equality of the reduced exponents.
pub fn verify_reciprocity(c: u64, r: u64, big_m: u64, n: u64, ell: u64) -> Result<VerificationReport> {
    let case = IdentityCase::reciprocity(c, r, big_m, n, ell)?;
    let (lhs_num, rhs_num) = closed::reciprocity_exponents(c, r, big_m, n, ell)?;
    let den = c * r * big_m;
    let lhs = e_frac(lhs_num as i128, den);
    let rhs = e_frac(rhs_num as i128, den);
    let exact = lhs_num == rhs_num;
    let mut report =
        VerificationReport::from_sides(&case, IdentityTag::Reciprocity, lhs, rhs, 1, 1);
    report.pass = exact;
    if exact {
        report.abs_err = 0.0;
        report.rel_err = 0.0;
    }
    Ok(report)
}

/// Gauss-sum twist of the mod-M character sum.
pub fn verify_c_gauss_twist(case: &IdentityCase) -> Result<VerificationReport> {
    let (lhs, lhs_terms) = brute::c_twist_left(case)?;
    let (rhs, rhs_terms) = closed::c_twist_closed(case)?;
    Ok(VerificationReport::from_sides(
        case,
        IdentityTag::CGaussTwist,
        lhs,
        rhs,
        lhs_terms,
        rhs_terms,
    ))
}

/// Triple-sum collapse to the rational character sum. On the degenerate
/// diagonal the report carries the `DIAGONAL-DEGEN` tag and additionally
/// requires the constant-summand count `M (M - excluded)`. When `M | F`
/// the further-reduced single sum must agree as well.
pub fn verify_cdagger_bsum(case: &IdentityCase) -> Result<VerificationReport> {
    let (lhs, lhs_terms) = brute::c_dagger(case)?;
    let closed = closed::c_dagger_closed(case)?;
    let mut pass_extra = true;
    if closed.f_residue == 0 {
        let reduced = closed::c_dagger_reduced(case)?;
        pass_extra &= (reduced - closed.value).norm()
            <= VERIFY_REL_TOL * (1.0 + closed.value.norm());
    }
    let degenerate = case.is_degenerate_diagonal();
    if degenerate {
        // Constant summand: every unit x off the excluded set with
        // x^{-1} + r1 nonzero contributes absolute value 1.
        let m = case.big_m;
        let r1_bar_neg = crate::arith::ResidueRing::new(m)
            .neg(crate::arith::inv_mod(case.r1 as i64, m)? % m);
        let mut count = 0u64;
        for x in 1..m {
            if closed.spec.excluded.contains(&x) || x == r1_bar_neg {
                continue;
            }
            count += 1;
        }
        let expect = m as f64 * count as f64;
        pass_extra &= (closed.value.norm() - expect).abs() <= 1e-6 * expect.max(1.0);
    }
    let tag = if degenerate {
        IdentityTag::DiagonalDegen
    } else {
        IdentityTag::CdaggerBsum
    };
    let mut report = VerificationReport::from_sides(
        case,
        tag,
        lhs,
        closed.value,
        lhs_terms,
        closed.terms,
    );
    report.pass &= pass_extra;
    Ok(report)
}

/// Upper bound on the off-diagonal Bessel tail
/// `sum_{c <= c_max} |J_{k-1}(4 pi sqrt(n l r) / (c p M))|` with the trivial
/// Kloosterman-sum bound already applied, evaluated at the worst admissible
/// frequencies: `n = 4 N L` and `l = 2L` from the amplified ranges, and the
/// dual frequency size `r = ceil(L N / M)`. The Bessel factor uses the
/// rigorous series bound, valid for every argument.
pub fn offdiag_tail(p: f64, big_m: u64, l: u64, n: u64, c_max: u64, k: u32) -> f64 {
    assert!(p > 0.0 && big_m > 0 && l > 0 && n > 0 && c_max > 0 && k >= 2);
    let nu = k - 1;
    let n_star = 4.0 * n as f64 * l as f64;
    let l_star = 2.0 * l as f64;
    let r_star = (l as f64 * n as f64 / big_m as f64).ceil().max(1.0);
    let x1 = 4.0 * std::f64::consts::PI * (n_star * l_star * r_star).sqrt()
        / (p * big_m as f64);
    let mut bound = 0.0;
    for c in 1..=c_max {
        bound += bessel_j_series_bound(nu, x1 / c as f64);
    }
    bound
}

fn unit_seed(master: u64, index: u64) -> u64 {
    let mut z = master ^ index.wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

fn pick<T: Copy>(rng: &mut ChaCha8Rng, xs: &[T]) -> T {
    xs[rng.gen_range(0..xs.len())]
}

/// Seeded admissible tuple for one identity family, sized so a single check
/// stays within about a million accumulated terms per side.
pub fn random_case(tag: IdentityTag, rng: &mut ChaCha8Rng) -> IdentityCase {
    match tag {
        IdentityTag::Factorization | IdentityTag::PsiEval => loop {
            let p = pick(rng, &[3u64, 5]);
            let big_m = pick(rng, &[5u64, 7, 11, 13, 17, 19, 23]);
            if big_m == p {
                continue;
            }
            let cap = 3000 / (p * big_m);
            if cap == 0 {
                continue;
            }
            let c = rng.gen_range(1..=cap.min(12));
            let m = rng.gen_range(1..=2 * p);
            let n = rng.gen_range(1..=30);
            let ell = rng.gen_range(1..=30);
            let r = rng.gen_range(1..=50);
            let chi_index = rng.gen_range(1..big_m - 1);
            let case = if tag == IdentityTag::Factorization {
                IdentityCase::factorization(p, big_m, c, m, n, ell, r, chi_index)
            } else {
                IdentityCase::psi_eval(p, big_m, c, m, n, ell, r, chi_index)
            };
            if let Ok(case) = case {
                return case;
            }
        },
        IdentityTag::CpEval => loop {
            let p = pick(rng, &[3u64, 5, 7]);
            let c = rng.gen_range(1..=(400 / p).min(40));
            let big_m = pick(rng, &[5u64, 7, 11, 13, 17, 19, 23, 29, 31]);
            let m = rng.gen_range(1..=2 * p);
            let n = rng.gen_range(1..=40);
            let ell = rng.gen_range(1..=40);
            let r = rng.gen_range(1..=60);
            let sign = if rng.gen_bool(0.5) { 1 } else { -1 };
            if let Ok(case) = IdentityCase::cp_eval(p, big_m, c, m, n, ell, r, sign) {
                return case;
            }
        },
        IdentityTag::Reciprocity => loop {
            let c = rng.gen_range(1..=60);
            let r = rng.gen_range(1..=60);
            let big_m = pick(rng, &[5u64, 7, 11, 13, 101, 199, 499]);
            let n = rng.gen_range(1..=1000);
            let ell = rng.gen_range(1..=1000);
            if let Ok(case) = IdentityCase::reciprocity(c, r, big_m, n, ell) {
                return case;
            }
        },
        IdentityTag::CGaussTwist => loop {
            let big_m = pick(rng, &[5u64, 7, 11, 13, 17, 31, 61, 101]);
            let c = rng.gen_range(1..=100);
            let n = rng.gen_range(0..big_m);
            let ell = rng.gen_range(1..=50);
            let r = rng.gen_range(0..big_m);
            let chi_index = rng.gen_range(1..big_m - 1);
            if let Ok(case) = IdentityCase::c_gauss_twist(big_m, c, n, ell, r, chi_index) {
                return case;
            }
        },
        IdentityTag::CdaggerBsum => loop {
            let big_m = pick(rng, &[7u64, 11, 13, 17, 19, 23, 29, 31]);
            let draw = |rng: &mut ChaCha8Rng| -> u64 {
                loop {
                    let v = rng.gen_range(1..=40);
                    if v % big_m != 0 {
                        return v;
                    }
                }
            };
            let ell1 = draw(rng);
            let ell2 = draw(rng);
            let c1 = draw(rng);
            let c2 = draw(rng);
            let r1 = draw(rng);
            let r2 = draw(rng);
            let n = rng.gen_range(0..big_m);
            let chi_index = rng.gen_range(1..big_m - 1);
            if let Ok(case) =
                IdentityCase::cdagger(big_m, ell1, ell2, c1, c2, r1, r2, n, chi_index)
            {
                return case;
            }
        },
        // Degenerate diagonal family: equal shifts, proportional pairs,
        // and a frequency divisible by the modulus.
        IdentityTag::DiagonalDegen => loop {
            let big_m = pick(rng, &[7u64, 11, 13, 17, 19, 23]);
            let draw = |rng: &mut ChaCha8Rng| -> u64 {
                loop {
                    let v = rng.gen_range(1..=20);
                    if v % big_m != 0 {
                        return v;
                    }
                }
            };
            let ell = draw(rng);
            let c = draw(rng);
            let t = draw(rng);
            let r = draw(rng);
            let n = if rng.gen_bool(0.5) { 0 } else { big_m };
            let chi_index = rng.gen_range(1..big_m - 1);
            if let Ok(case) =
                IdentityCase::cdagger(big_m, t * ell, ell, t * c, c, r, r, n, chi_index)
            {
                debug_assert!(case.is_degenerate_diagonal());
                return case;
            }
        },
    }
}

/// Run one verifier on its case.
pub fn verify_case(case: &IdentityCase) -> Result<VerificationReport> {
    match case.tag {
        IdentityTag::Factorization => verify_factorization(case),
        IdentityTag::CpEval => verify_cp_eval(case),
        IdentityTag::PsiEval => verify_psi_eval(case),
        IdentityTag::Reciprocity => {
            verify_reciprocity(case.c, case.r, case.big_m, case.n, case.ell)
        }
        IdentityTag::CGaussTwist => verify_c_gauss_twist(case),
        IdentityTag::CdaggerBsum | IdentityTag::DiagonalDegen => verify_cdagger_bsum(case),
    }
}

/// Seeded randomized suite for one identity, parallel over tuples with a
/// deterministic per-tuple stream, reported in tuple order.
pub fn run_suite(tag: IdentityTag, count: usize, seed: u64) -> Result<Vec<VerificationReport>> {
    (0..count)
        .into_par_iter()
        .map(|i| {
            let mut rng = ChaCha8Rng::seed_from_u64(unit_seed(seed, i as u64));
            let case = random_case(tag, &mut rng);
            verify_case(&case)
        })
        .collect()
}

/// The tags covered by the full verification sweep.
pub const SUITE_TAGS: [IdentityTag; 6] = [
    IdentityTag::Factorization,
    IdentityTag::CpEval,
    IdentityTag::PsiEval,
    IdentityTag::Reciprocity,
    IdentityTag::CGaussTwist,
    IdentityTag::CdaggerBsum,
];

/// Run every identity suite with `count` tuples each.
pub fn run_all_suites(count: usize, seed: u64) -> Result<Vec<VerificationReport>> {
    let mut out = Vec::with_capacity(count * SUITE_TAGS.len());
    for (i, tag) in SUITE_TAGS.iter().enumerate() {
        out.extend(run_suite(*tag, count, unit_seed(seed, 0xABCD + i as u64))?);
    }
    Ok(out)
}

/// Reference spot-check moduli for tests.
pub fn small_scan_primes(lo: u64, hi: u64) -> Vec<u64> {
    primes_in(lo.max(5), hi)
}

/// Conjugated companion of a case, used by the symmetry tests: the character
/// is conjugated and the additive parameters flip sign in their natural
/// moduli.
pub fn conjugated_case(case: &IdentityCase) -> IdentityCase {
    let mut out = case.clone();
    let phi = case.big_m - 1;
    match case.tag {
        IdentityTag::Factorization | IdentityTag::PsiEval => {
            out.chi_index = (phi - case.chi_index) % phi;
            let q = case.c * case.p * case.big_m;
            out.n = reduce_i64(-(case.n as i64), q);
        }
        IdentityTag::CpEval => {
            let cp = case.c * case.p;
            out.r = reduce_i64(-(case.r as i64), cp);
        }
        IdentityTag::CGaussTwist => {
            out.chi_index = (phi - case.chi_index) % phi;
            out.r = reduce_i64(-(case.r as i64), case.big_m);
        }
        IdentityTag::CdaggerBsum | IdentityTag::DiagonalDegen => {
            std::mem::swap(&mut out.ell1, &mut out.ell2);
            std::mem::swap(&mut out.c1, &mut out.c2);
            std::mem::swap(&mut out.r1, &mut out.r2);
            out.n = reduce_i64(-(case.n as i64), case.big_m);
        }
        IdentityTag::Reciprocity => {
            out.n = reduce_i64(-(case.n as i64), case.c * case.r * case.big_m);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn check_all_pass(reports: &[VerificationReport]) {
        for rep in reports {
            assert!(
                rep.pass,
                "{} failed: abs {} rel {} params {:?}",
                rep.tag, rep.abs_err, rep.rel_err, rep.params
            );
        }
    }

    #[test]
    fn factorization_reference_tuple() {
        let case = IdentityCase::factorization(3, 5, 1, 1, 1, 1, 1, 1).unwrap();
        let rep = verify_factorization(&case).unwrap();
        assert!(rep.pass, "abs {} rel {}", rep.abs_err, rep.rel_err);
        assert!(rep.abs_err <= 1e-10 * (1.0 + rep.rhs_value().norm()));
    }

    #[test]
    fn factorization_vanishes_when_r_shares_cp() {
        // r = 3 shares a factor with cp = 3: both sides collapse to zero.
        let case = IdentityCase::factorization(3, 5, 1, 1, 1, 1, 3, 1).unwrap();
        let rep = verify_factorization(&case).unwrap();
        assert!(rep.pass);
        assert!(rep.lhs_value().norm() < 1e-9);
        assert!(rep.rhs_value().norm() < 1e-9);
    }

    #[test]
    fn factorization_small_random_suite() {
        check_all_pass(&run_suite(IdentityTag::Factorization, 12, 2024).unwrap());
    }

    #[test]
    fn cp_eval_reference_and_periodicity() {
        let case = IdentityCase::cp_eval(3, 5, 2, 2, 3, 4, 5, 1).unwrap();
        let rep = verify_cp_eval(&case).unwrap();
        assert!(rep.pass, "abs {} rel {}", rep.abs_err, rep.rel_err);
        // r -> r + cp leaves both sides unchanged.
        let shifted = IdentityCase::cp_eval(3, 5, 2, 2, 3, 4, 5 + 6, 1).unwrap();
        let rep2 = verify_cp_eval(&shifted).unwrap();
        assert!((rep.lhs_value() - rep2.lhs_value()).norm() < 1e-9);
        assert!((rep.rhs_value() - rep2.rhs_value()).norm() < 1e-9);
        // Both sign orientations hold.
        let minus = IdentityCase::cp_eval(3, 5, 2, 2, 3, 4, 5, -1).unwrap();
        assert!(verify_cp_eval(&minus).unwrap().pass);
    }

    #[test]
    fn cp_eval_small_random_suite() {
        check_all_pass(&run_suite(IdentityTag::CpEval, 15, 7).unwrap());
    }

    #[test]
    fn psi_eval_reference_tuple() {
        let case = IdentityCase::psi_eval(3, 5, 2, 1, 2, 3, 1, 1).unwrap();
        let rep = verify_psi_eval(&case).unwrap();
        assert!(rep.pass, "abs {} rel {}", rep.abs_err, rep.rel_err);
        // The evaluated pieces are genuinely nonzero here, so a swapped sign
        // pairing would negate the closed side and fail.
        assert!(rep.rhs_value().norm() > 1e-3);
    }

    #[test]
    fn psi_eval_kills_multiples_of_p() {
        let case = IdentityCase::psi_eval(3, 5, 2, 3, 2, 3, 1, 1).unwrap();
        let rep = verify_psi_eval(&case).unwrap();
        assert!(rep.pass);
        assert!(rep.lhs_value().norm() < 1e-9);
        assert!(rep.rhs_value().norm() < 1e-9);
    }

    #[test]
    fn psi_eval_small_random_suite() {
        check_all_pass(&run_suite(IdentityTag::PsiEval, 12, 99).unwrap());
    }

    #[test]
    fn reciprocity_reference_values() {
        let rep = verify_reciprocity(3, 4, 5, 1, 1).unwrap();
        assert!(rep.pass);
        // Both sides reduce to e(7/20).
        let expect = e_frac(7, 20);
        assert!((rep.lhs_value() - expect).norm() < 1e-15);
        assert!((rep.rhs_value() - expect).norm() < 1e-15);
        assert_eq!(rep.abs_err, 0.0);

        // n l divisible by c r M makes both sides 1.
        let rep2 = verify_reciprocity(3, 4, 5, 60, 7).unwrap();
        assert!(rep2.pass);
        assert!((rep2.lhs_value() - Complex64::new(1.0, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn reciprocity_rejects_common_factors() {
        assert!(verify_reciprocity(6, 4, 5, 1, 1).is_err());
    }

    #[test]
    fn reciprocity_random_exactness() {
        let mut rng = ChaCha8Rng::seed_from_u64(5150);
        let mut done = 0;
        while done < 1000 {
            let case = random_case(IdentityTag::Reciprocity, &mut rng);
            let rep =
                verify_reciprocity(case.c, case.r, case.big_m, case.n, case.ell).unwrap();
            assert!(rep.pass, "params {:?}", rep.params);
            assert_eq!(rep.abs_err, 0.0);
            done += 1;
        }
    }

    #[test]
    fn c_gauss_twist_reference_tuple() {
        let case = IdentityCase::c_gauss_twist(5, 2, 1, 1, 1, 2).unwrap();
        let rep = verify_c_gauss_twist(&case).unwrap();
        assert!(rep.pass, "abs {} rel {}", rep.abs_err, rep.rel_err);
    }

    #[test]
    fn c_gauss_twist_orthogonality_corner() {
        // r = 0 and n l = 0 mod M: the right side carries sum chi(alpha^{-1})
        // over units, which vanishes.
        let case = IdentityCase::c_gauss_twist(7, 3, 0, 7, 0, 2).unwrap();
        let rep = verify_c_gauss_twist(&case).unwrap();
        assert!(rep.pass);
        assert!(rep.rhs_value().norm() < 1e-9);
        assert!(rep.lhs_value().norm() < 1e-9);
    }

    #[test]
    fn c_gauss_twist_small_random_suite() {
        check_all_pass(&run_suite(IdentityTag::CGaussTwist, 25, 31337).unwrap());
    }

    #[test]
    fn cdagger_degenerate_reference_tuple() {
        // All parameters 1 and n = 0: F = 0 and the diagonal is degenerate.
        let case = IdentityCase::cdagger(5, 1, 1, 1, 1, 1, 1, 0, 1).unwrap();
        assert!(case.is_degenerate_diagonal());
        let rep = verify_cdagger_bsum(&case).unwrap();
        assert_eq!(rep.tag, "DIAGONAL-DEGEN");
        assert!(rep.pass, "abs {} rel {}", rep.abs_err, rep.rel_err);
        // Constant-summand magnitude of order M^2.
        assert!(rep.rhs_value().norm() >= 5.0);
    }

    #[test]
    fn cdagger_nondegenerate_weil_regime() {
        let mut rng = ChaCha8Rng::seed_from_u64(808);
        let mut checked = 0;
        while checked < 25 {
            let case = random_case(IdentityTag::CdaggerBsum, &mut rng);
            let rep = verify_cdagger_bsum(&case).unwrap();
            assert!(rep.pass, "params {:?} abs {}", rep.params, rep.abs_err);
            if rep.tag == "CDAGGER-BSUM" {
                let cap = 4.0 * (case.big_m as f64).powf(1.5);
                assert!(
                    rep.rhs_value().norm() <= cap,
                    "Weil regime violated: {} > {cap}",
                    rep.rhs_value().norm()
                );
            }
            checked += 1;
        }
    }

    #[test]
    fn conjugation_symmetry_relations() {
        // Twist-average: value of the conjugated case equals
        // -chi(-1) * conj(value).
        let case = IdentityCase::psi_eval(3, 7, 2, 1, 2, 3, 5, 2).unwrap();
        let rep = verify_psi_eval(&case).unwrap();
        let conj_rep = verify_psi_eval(&conjugated_case(&case)).unwrap();
        let chi = case.chi().unwrap();
        let factor = -(chi.parity() as f64);
        let expect = factor * rep.lhs_value().conj();
        assert!(
            (conj_rep.lhs_value() - expect).norm() <= 1e-8 * (1.0 + expect.norm()),
            "{:?} vs {:?}",
            conj_rep.lhs_value(),
            expect
        );

        // Gauss twist: conjugating chi and negating r conjugates the value.
        let case = IdentityCase::c_gauss_twist(11, 3, 4, 2, 5, 3).unwrap();
        let rep = verify_c_gauss_twist(&case).unwrap();
        let conj_rep = verify_c_gauss_twist(&conjugated_case(&case)).unwrap();
        assert!(
            (conj_rep.lhs_value() - rep.lhs_value().conj()).norm()
                <= 1e-8 * (1.0 + rep.lhs_value().norm())
        );

        // Triple sum: swapping the indexed pairs and negating n conjugates.
        let case = IdentityCase::cdagger(11, 2, 3, 4, 5, 6, 7, 3, 2).unwrap();
        let rep = verify_cdagger_bsum(&case).unwrap();
        let conj_rep = verify_cdagger_bsum(&conjugated_case(&case)).unwrap();
        assert!(
            (conj_rep.lhs_value() - rep.lhs_value().conj()).norm()
                <= 1e-8 * (1.0 + rep.lhs_value().norm())
        );

        // Opened cp sum: negating r conjugates.
        let case = IdentityCase::cp_eval(5, 7, 3, 2, 4, 3, 2, 1).unwrap();
        let rep = verify_cp_eval(&case).unwrap();
        let conj_rep = verify_cp_eval(&conjugated_case(&case)).unwrap();
        assert!(
            (conj_rep.lhs_value() - rep.lhs_value().conj()).norm()
                <= 1e-8 * (1.0 + rep.lhs_value().norm())
        );

        // Reciprocity: negating n conjugates both exact phases.
        let case = IdentityCase::reciprocity(3, 4, 5, 7, 2).unwrap();
        let rep = verify_reciprocity(case.c, case.r, case.big_m, case.n, case.ell).unwrap();
        let cc = conjugated_case(&case);
        let conj_rep = verify_reciprocity(cc.c, cc.r, cc.big_m, cc.n, cc.ell).unwrap();
        assert!((conj_rep.lhs_value() - rep.lhs_value().conj()).norm() < 1e-12);
        assert!((conj_rep.rhs_value() - rep.rhs_value().conj()).norm() < 1e-12);

        // The full-modulus sum obeys the same relation as its evaluation.
        let case = IdentityCase::factorization(3, 7, 2, 1, 2, 3, 5, 2).unwrap();
        let rep = verify_factorization(&case).unwrap();
        let conj_rep = verify_factorization(&conjugated_case(&case)).unwrap();
        let chi = case.chi().unwrap();
        let factor = -(chi.parity() as f64);
        let expect = factor * rep.lhs_value().conj();
        assert!(
            (conj_rep.lhs_value() - expect).norm() <= 1e-8 * (1.0 + expect.norm()),
            "{:?} vs {:?}",
            conj_rep.lhs_value(),
            expect
        );
    }

    #[test]
    fn offdiag_tail_criterion_directions() {
        let m = 10_007u64;
        let l = 4u64;
        let p = 2.0 * (l as f64 * m as f64 / m as f64).ceil();
        let healthy = offdiag_tail(p, m, l, m, 100, 11);
        assert!(healthy < 1e-12, "bound {healthy}");
        let starved = offdiag_tail(p / 100.0, m, l, m, 100, 11);
        assert!(starved > 1e-3, "bound {starved}");
        let higher_order = offdiag_tail(p, m, l, m, 100, 15);
        assert!(higher_order < healthy);
    }

    #[test]
    fn suite_is_deterministic() {
        let a = run_suite(IdentityTag::CGaussTwist, 8, 1234).unwrap();
        let b = run_suite(IdentityTag::CGaussTwist, 8, 1234).unwrap();
        let ja: Vec<String> = a.iter().map(|r| r.json_line()).collect();
        let jb: Vec<String> = b.iter().map(|r| r.json_line()).collect();
        assert_eq!(ja, jb);
    }

    #[test]
    fn cdagger_small_random_suite() {
        check_all_pass(&run_suite(IdentityTag::CdaggerBsum, 20, 4242).unwrap());
    }

    #[test]
    fn diagonal_degenerate_random_suite() {
        let reports = run_suite(IdentityTag::DiagonalDegen, 15, 616).unwrap();
        for rep in &reports {
            assert!(rep.pass, "{:?}", rep.params);
            assert_eq!(rep.tag, "DIAGONAL-DEGEN");
            // Constant-summand magnitude of order M^2, not the Weil scale.
            let m = rep.params["M"] as f64;
            assert!(rep.rhs_value().norm() >= m * (m - 4.0));
        }
    }
}
