//! Complete exponential sums over residue rings: classical and twisted
//! Kloosterman sums by direct enumeration, rational character sums over a
//! prime field, and a randomized square-root-cancellation scanner.

use num_complex::Complex64;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rand::SeedableRng;
use rayon::prelude::*;
use serde::Serialize;
use std::collections::BTreeSet;

use crate::arith::{gcd, inv_mod, is_prime, reduce_i64, ResidueRing};
use crate::character::DirichletCharacter;
use crate::cx::{e_frac, ComplexSum};
use crate::error::{Error, Result};

/// One twisted Kloosterman sum `S_psi(a, b; c)`: the sum over units
/// `alpha mod c` of `psi(alpha) e((alpha a + alpha^{-1} b)/c)`.
///
/// `twist: None` is the classical untwisted sum. A twist by the principal
/// character of a prime dividing `c` evaluates identically to the untwisted
/// sum, since the summation already runs over units.
#[derive(Clone, Debug)]
pub struct KloostermanQuery {
    pub a: i64,
    pub b: i64,
    pub modulus: u64,
    pub twist: Option<DirichletCharacter>,
}

impl KloostermanQuery {
    pub fn untwisted(a: i64, b: i64, modulus: u64) -> Self {
        Self {
            a,
            b,
            modulus,
            twist: None,
        }
    }

    pub fn twisted(a: i64, b: i64, modulus: u64, psi: DirichletCharacter) -> Self {
        Self {
            a,
            b,
            modulus,
            twist: Some(psi),
        }
    }
}

/// Direct enumeration of the (possibly twisted) Kloosterman sum.
///
/// ```
/// use burgess_core::expsums::{kloosterman, KloostermanQuery};
///
/// // Units mod 5 pair into alpha + 1/alpha in {2, 0, 0, 3}.
/// let v = kloosterman(&KloostermanQuery::untwisted(1, 1, 5)).unwrap();
/// let expect = 2.0 + 2.0 * (4.0 * std::f64::consts::PI / 5.0).cos();
/// assert!((v.re - expect).abs() < 1e-12);
/// ```
pub fn kloosterman(query: &KloostermanQuery) -> Result<Complex64> {
    let c = query.modulus;
    if c == 0 {
        return Err(Error::InvalidParameter("zero Kloosterman modulus".into()));
    }
    if let Some(psi) = &query.twist {
        if c % psi.modulus() != 0 {
            return Err(Error::TwistModulusMismatch(psi.modulus(), c));
        }
    }
    if c == 1 {
        return Ok(Complex64::new(1.0, 0.0));
    }
    let a = reduce_i64(query.a, c);
    let b = reduce_i64(query.b, c);
    let mut acc = ComplexSum::new();
    for alpha in 1..c {
        if gcd(alpha, c) != 1 {
            continue;
        }
        let alpha_inv = inv_mod(alpha as i64, c).expect("unit has an inverse");
        let num = alpha as i128 * a as i128 + alpha_inv as i128 * b as i128;
        let phase = e_frac(num, c);
        let term = match &query.twist {
            None => phase,
            Some(psi) => psi.eval(alpha % psi.modulus()) * phase,
        };
        acc.add(term);
    }
    Ok(acc.value())
}

/// A polynomial of degree at most two over `F_m`, stored as
/// `c0 + c1 x + c2 x^2` with reduced coefficients.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct QuadPoly {
    pub coeffs: [u64; 3],
}

impl QuadPoly {
    pub fn new(c0: i64, c1: i64, c2: i64, modulus: u64) -> Self {
        Self {
            coeffs: [
                reduce_i64(c0, modulus),
                reduce_i64(c1, modulus),
                reduce_i64(c2, modulus),
            ],
        }
    }

    pub fn constant(c: i64, modulus: u64) -> Self {
        Self::new(c, 0, 0, modulus)
    }

    pub fn eval(&self, x: u64, ring: &ResidueRing) -> u64 {
        let [c0, c1, c2] = self.coeffs;
        ring.add(c0, ring.mul(x, ring.add(c1, ring.mul(c2, x))))
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs == [0, 0, 0]
    }

    pub fn degree(&self) -> Option<usize> {
        if self.coeffs[2] != 0 {
            Some(2)
        } else if self.coeffs[1] != 0 {
            Some(1)
        } else if self.coeffs[0] != 0 {
            Some(0)
        } else {
            None
        }
    }
}

/// Factorization shape of a degree <= 2 polynomial over `F_m`: roots with
/// multiplicity, plus a marker for an irreducible quadratic part.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
enum Factor {
    Linear(u64),
    IrreducibleQuad { b: u64, c: u64 },
}

fn factor_quad(poly: &QuadPoly, ring: &ResidueRing) -> Vec<(Factor, i64)> {
    let m = ring.modulus();
    match poly.degree() {
        None | Some(0) => Vec::new(),
        Some(1) => {
            // c0 + c1 x = 0 at x = -c0/c1.
            let root = ring.mul(ring.neg(poly.coeffs[0]), ring.inv(poly.coeffs[1]).unwrap());
            vec![(Factor::Linear(root), 1)]
        }
        Some(2) => {
            let mut roots = Vec::new();
            for x in 0..m {
                if poly.eval(x, ring) == 0 {
                    roots.push(x);
                }
            }
            match roots.len() {
                0 => {
                    // Normalize to the monic x^2 + b x + c.
                    let inv_lead = ring.inv(poly.coeffs[2]).unwrap();
                    vec![(
                        Factor::IrreducibleQuad {
                            b: ring.mul(poly.coeffs[1], inv_lead),
                            c: ring.mul(poly.coeffs[0], inv_lead),
                        },
                        1,
                    )]
                }
                1 => vec![(Factor::Linear(roots[0]), 2)],
                _ => vec![(Factor::Linear(roots[0]), 1), (Factor::Linear(roots[1]), 1)],
            }
        }
        Some(_) => unreachable!(),
    }
}

/// The data of a complete sum `sum_x chi(Q1(x) / Q2(x))` over `F_m` minus an
/// excluded point set.
///
/// Zeros of `Q2` are always excluded; callers may remove up to two more
/// points. The `degenerate` flag records whether `Q1/Q2` is a constant times
/// a perfect `ord(chi)`-th power, which is exactly the case where the
/// summand is constant off finitely many points and square-root cancellation
/// fails.
#[derive(Clone, Debug)]
pub struct RationalCharSumSpec {
    pub chi: DirichletCharacter,
    pub q1: QuadPoly,
    pub q2: QuadPoly,
    pub excluded: BTreeSet<u64>,
    pub degenerate: bool,
}

impl RationalCharSumSpec {
    pub fn new(
        chi: DirichletCharacter,
        q1: QuadPoly,
        q2: QuadPoly,
        extra_excluded: &[u64],
    ) -> Result<Self> {
        let m = chi.modulus();
        if !is_prime(m) {
            return Err(Error::NotPrime(m));
        }
        let ring = ResidueRing::new(m);
        if q2.is_zero() {
            return Err(Error::DenominatorZeroEverywhere(m));
        }
        let mut excluded: BTreeSet<u64> = BTreeSet::new();
        for (factor, _) in factor_quad(&q2, &ring) {
            if let Factor::Linear(root) = factor {
                excluded.insert(root);
            }
        }
        for &x in extra_excluded {
            excluded.insert(x % m);
        }
        if excluded.len() > 4 {
            return Err(Error::InvalidParameter(format!(
                "excluded set has {} points, at most 4 allowed",
                excluded.len()
            )));
        }
        let degenerate = Self::is_degenerate(&chi, &q1, &q2, &ring);
        Ok(Self {
            chi,
            q1,
            q2,
            excluded,
            degenerate,
        })
    }

    /// `Q1/Q2 = const * h(x)^d` with `d = ord(chi)` holds exactly when every
    /// exponent in the reduced factorization of `Q1/Q2` is divisible by `d`.
    /// Quadratics factor over the algebraic closure into conjugate pairs, so
    /// an irreducible quadratic factor behaves as a single exponent too.
    fn is_degenerate(
        chi: &DirichletCharacter,
        q1: &QuadPoly,
        q2: &QuadPoly,
        ring: &ResidueRing,
    ) -> bool {
        if q1.is_zero() {
            return true;
        }
        let d = chi.order() as i64;
        if d <= 1 {
            return true;
        }
        let mut exponents: std::collections::BTreeMap<Factor, i64> = Default::default();
        for (factor, mult) in factor_quad(q1, ring) {
            *exponents.entry(factor).or_insert(0) += mult;
        }
        for (factor, mult) in factor_quad(q2, ring) {
            *exponents.entry(factor).or_insert(0) -= mult;
        }
        exponents.values().all(|&e| e.rem_euclid(d) == 0)
    }
}

/// Evaluate the complete rational character sum. A zero numerator value at
/// some point contributes zero, exactly as `chi(0) = 0`.
pub fn rational_char_sum(spec: &RationalCharSumSpec) -> Complex64 {
    let m = spec.chi.modulus();
    let ring = ResidueRing::new(m);
    let mut acc = ComplexSum::new();
    for x in 0..m {
        if spec.excluded.contains(&x) {
            continue;
        }
        let num = spec.q1.eval(x, &ring);
        let den = spec.q2.eval(x, &ring);
        debug_assert!(den != 0, "denominator zeros are excluded");
        let value = ring.mul(num, ring.inv(den).expect("nonzero denominator"));
        acc.add(spec.chi.eval(value));
    }
    acc.value()
}

/// Outcome of one random trial of the scanner.
#[derive(Clone, Debug, Serialize)]
pub struct WeilScanRecord {
    pub modulus: u64,
    pub chi_index: u64,
    pub q1: QuadPoly,
    pub q2: QuadPoly,
    pub abs_sum: f64,
    pub ratio: f64,
    pub degenerate: bool,
}

/// Per-modulus aggregate over the non-degenerate trials.
#[derive(Clone, Debug, Serialize)]
pub struct WeilScanSummary {
    pub modulus: u64,
    pub trials: usize,
    pub ratio_max: f64,
    pub ratio_median: f64,
    pub degenerate_count: usize,
    pub records: Vec<WeilScanRecord>,
}

impl WeilScanSummary {
    pub fn csv_header() -> &'static str {
        "M,ratio_max,ratio_median,degenerate_count"
    }

    pub fn csv_row(&self) -> String {
        format!(
            "{},{},{},{}",
            self.modulus, self.ratio_max, self.ratio_median, self.degenerate_count
        )
    }

    pub fn json_line(&self) -> String {
        serde_json::json!({
            "M": self.modulus,
            "ratio_max": self.ratio_max,
            "ratio_median": self.ratio_median,
            "degenerate_count": self.degenerate_count,
        })
        .to_string()
    }
}

fn median(sorted: &[f64]) -> f64 {
    let n = sorted.len();
    if n == 0 {
        return 0.0;
    }
    if n % 2 == 1 {
        sorted[n / 2]
    } else {
        0.5 * (sorted[n / 2 - 1] + sorted[n / 2])
    }
}

fn scan_one_modulus(m: u64, trials: usize, seed: u64) -> Result<WeilScanSummary> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let group = std::sync::Arc::new(crate::character::MultiplicativeGroupTable::new(m)?);
    let mut records = Vec::with_capacity(trials);
    let mut degenerate_count = 0usize;
    while records.len() < trials {
        let chi_index = rng.gen_range(1..m - 1);
        let chi =
            DirichletCharacter::with_group(std::sync::Arc::clone(&group), chi_index)?;
        let q1 = QuadPoly::new(
            rng.gen_range(0..m) as i64,
            rng.gen_range(0..m) as i64,
            rng.gen_range(1..m) as i64,
            m,
        );
        let q2 = QuadPoly::new(
            rng.gen_range(0..m) as i64,
            rng.gen_range(0..m) as i64,
            rng.gen_range(1..m) as i64,
            m,
        );
        let spec = RationalCharSumSpec::new(chi, q1, q2, &[])?;
        if spec.degenerate {
            degenerate_count += 1;
            continue;
        }
        let value = rational_char_sum(&spec);
        let abs_sum = value.norm();
        records.push(WeilScanRecord {
            modulus: m,
            chi_index,
            q1,
            q2,
            abs_sum,
            ratio: abs_sum / (m as f64).sqrt(),
            degenerate: false,
        });
    }
    let mut ratios: Vec<f64> = records.iter().map(|r| r.ratio).collect();
    ratios.sort_by(|a, b| a.partial_cmp(b).unwrap());
    Ok(WeilScanSummary {
        modulus: m,
        trials,
        ratio_max: *ratios.last().unwrap_or(&0.0),
        ratio_median: median(&ratios),
        degenerate_count,
        records,
    })
}

fn unit_seed(master: u64, index: u64) -> u64 {
    // splitmix64 step keyed by the unit index.
    let mut z = master ^ index.wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Random non-degenerate quadratic pairs for each prime in `ms`, evaluated
/// exhaustively. Degenerate draws are redrawn and counted. Deterministic in
/// the seed, independent of worker count: each modulus gets its own stream
/// and results merge in input order.
pub fn weil_scan(ms: &[u64], trials_per_m: usize, seed: u64) -> Result<Vec<WeilScanSummary>> {
    if trials_per_m == 0 {
        return Err(Error::InvalidParameter("trials_per_m must be >= 1".into()));
    }
    for &m in ms {
        if !is_prime(m) || m < 5 {
            return Err(Error::InvalidParameter(format!(
                "scan modulus {m} must be a prime >= 5"
            )));
        }
    }
    ms.par_iter()
        .enumerate()
        .map(|(i, &m)| scan_one_modulus(m, trials_per_m, unit_seed(seed, i as u64)))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::character::{build_character, quadratic_character};
    use proptest::prelude::*;

    #[test]
    fn kloosterman_trivial_modulus() {
        let q = KloostermanQuery::untwisted(1, 1, 1);
        assert_eq!(kloosterman(&q).unwrap(), Complex64::new(1.0, 0.0));
    }

    #[test]
    fn kloosterman_mod_5_closed_form() {
        // Units mod 5 pair as alpha + alpha^{-1} in {2, 0, 0, 3} mod 5,
        // giving 2 + 2 cos(4 pi / 5).
        let q = KloostermanQuery::untwisted(1, 1, 5);
        let v = kloosterman(&q).unwrap();
        let expect = 2.0 + 2.0 * (4.0 * std::f64::consts::PI / 5.0).cos();
        assert!((expect - 0.3819660112501051).abs() < 1e-15);
        assert!((v.re - expect).abs() < 1e-12);
        assert!(v.im.abs() < 1e-12);
    }

    #[test]
    fn ramanujan_type_sum_mod_7() {
        // a = 0 leaves sum of e(alpha^{-1}/7) over units, which is -1.
        let q = KloostermanQuery::untwisted(0, 1, 7);
        let v = kloosterman(&q).unwrap();
        assert!((v - Complex64::new(-1.0, 0.0)).norm() < 1e-12);
    }

    #[test]
    fn principal_twist_equals_untwisted() {
        let psi = build_character(3, 0).unwrap();
        let twisted = kloosterman(&KloostermanQuery::twisted(2, 5, 21, psi)).unwrap();
        let plain = kloosterman(&KloostermanQuery::untwisted(2, 5, 21)).unwrap();
        assert!((twisted - plain).norm() < 1e-12);
    }

    #[test]
    fn twist_modulus_must_divide() {
        let psi = build_character(5, 1).unwrap();
        let q = KloostermanQuery::twisted(1, 1, 21, psi);
        assert!(matches!(
            kloosterman(&q),
            Err(Error::TwistModulusMismatch(5, 21))
        ));
    }

    #[test]
    fn twisted_sum_factors_across_coprime_moduli() {
        // S_psi(a, b; uv) = S_psi(a v', b v'; u) S(a u', b u'; v) for
        // gcd(u, v) = 1, v' = v^{-1} mod u, u' = u^{-1} mod v, psi mod p | u.
        let cases = [
            (3u64, 12u64, 35u64, 7i64, 4i64),
            (5, 45, 16, 2, 9),
            (3, 99, 101, 13, 5),
        ];
        for &(p, u, v, a, b) in &cases {
            for k in 0..p - 1 {
                let psi = build_character(p, k).unwrap();
                let whole =
                    kloosterman(&KloostermanQuery::twisted(a, b, u * v, psi.clone())).unwrap();
                let v_inv = inv_mod(v as i64, u).unwrap() as i64;
                let u_inv = inv_mod(u as i64, v).unwrap() as i64;
                let left =
                    kloosterman(&KloostermanQuery::twisted(a * v_inv, b * v_inv, u, psi)).unwrap();
                let right =
                    kloosterman(&KloostermanQuery::untwisted(a * u_inv, b * u_inv, v)).unwrap();
                assert!(
                    (whole - left * right).norm() < 1e-9,
                    "p={p} u={u} v={v} k={k}"
                );
            }
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(500))]
        #[test]
        fn kloosterman_symmetry(a in -1000i64..1000, b in -1000i64..1000, c in 1u64..10_000) {
            let lhs = kloosterman(&KloostermanQuery::untwisted(a, b, c)).unwrap();
            let rhs = kloosterman(&KloostermanQuery::untwisted(b, a, c)).unwrap();
            prop_assert!((lhs - rhs).norm() < 1e-9);
            // Untwisted sums are real.
            prop_assert!(lhs.im.abs() < 1e-9);
        }
    }

    #[test]
    fn symmetry_is_exact_on_phase_multisets() {
        // alpha <-> alpha^{-1} matches the integer phase numerators of
        // S(a,b;c) and S(b,a;c) term for term; check the multisets.
        let numerators = |a: u64, b: u64, c: u64| -> Vec<u64> {
            let mut out = Vec::new();
            for alpha in 1..c {
                if gcd(alpha, c) != 1 {
                    continue;
                }
                let inv = inv_mod(alpha as i64, c).unwrap();
                out.push(((alpha as u128 * a as u128 + inv as u128 * b as u128) % c as u128) as u64);
            }
            out.sort_unstable();
            out
        };
        for (a, b, c) in [(3u64, 7u64, 100u64), (1, 1, 97), (5, 12, 9973), (2, 9, 60)] {
            assert_eq!(numerators(a, b, c), numerators(b, a, c));
        }
    }

    #[test]
    fn rational_sum_orthogonality_case() {
        // chi(x) summed over the line is zero for nonprincipal chi.
        let chi = quadratic_character(7).unwrap();
        let spec = RationalCharSumSpec::new(
            chi,
            QuadPoly::new(0, 1, 0, 7),
            QuadPoly::constant(1, 7),
            &[],
        )
        .unwrap();
        assert!(rational_char_sum(&spec).norm() < 1e-12);
    }

    #[test]
    fn rational_sum_equal_polynomials() {
        let chi = quadratic_character(11).unwrap();
        let q = QuadPoly::new(3, 1, 2, 11);
        let spec = RationalCharSumSpec::new(chi, q, q, &[]).unwrap();
        let v = rational_char_sum(&spec);
        let expect = (11 - spec.excluded.len() as i64) as f64;
        assert!(spec.degenerate);
        assert!((v.re - expect).abs() < 1e-12);
        assert!(v.im.abs() < 1e-12);
    }

    #[test]
    fn rational_sum_mod_7_brute_force_value() {
        // Independent oracle: Legendre symbols by Euler's criterion.
        let m = 7u64;
        let legendre = |t: u64| -> f64 {
            if t % m == 0 {
                0.0
            } else if crate::arith::pow_mod(t, (m - 1) / 2, m) == 1 {
                1.0
            } else {
                -1.0
            }
        };
        let ring = ResidueRing::new(m);
        let mut expect = 0.0;
        for x in 0..m {
            let num = (x * x + 1) % m;
            let den = (x * x + 2) % m;
            if den == 0 {
                continue;
            }
            expect += legendre(ring.mul(num, ring.inv(den).unwrap()));
        }
        let chi = quadratic_character(7).unwrap();
        let spec = RationalCharSumSpec::new(
            chi,
            QuadPoly::new(1, 0, 1, 7),
            QuadPoly::new(2, 0, 1, 7),
            &[],
        )
        .unwrap();
        assert!(!spec.degenerate);
        let v = rational_char_sum(&spec);
        assert!((v.re - expect).abs() < 1e-12);
        assert!(v.im.abs() < 1e-12);
    }

    #[test]
    fn degenerate_constant_multiple_detected() {
        let chi = quadratic_character(13).unwrap();
        let q2 = QuadPoly::new(1, 5, 3, 13);
        let q1 = QuadPoly::new(2, 10, 6, 13); // 2 * q2
        let spec = RationalCharSumSpec::new(chi, q1, q2, &[]).unwrap();
        assert!(spec.degenerate);
        let ratio = rational_char_sum(&spec).norm() / (13f64).sqrt();
        assert!(ratio > 2.0, "constant summand should defeat cancellation");
    }

    #[test]
    fn degenerate_square_detected_for_quadratic_character() {
        let chi = quadratic_character(11).unwrap();
        // (x - 3)^2 over a nonzero constant: a perfect square ratio.
        let q1 = QuadPoly::new(9, -6, 1, 11);
        let q2 = QuadPoly::constant(5, 11);
        let spec = RationalCharSumSpec::new(chi, q1, q2, &[]).unwrap();
        assert!(spec.degenerate);
        // Cubic character order does not divide the exponents, so the same
        // data is non-degenerate for a character of order 5 mod 11.
        let chi5 = build_character(11, 2).unwrap();
        assert_eq!(chi5.order(), 5);
        let spec5 = RationalCharSumSpec::new(chi5, q1, q2, &[]).unwrap();
        assert!(!spec5.degenerate);
    }

    #[test]
    fn scan_is_deterministic_and_bounded() {
        let a = weil_scan(&[11, 13], 50, 42).unwrap();
        let b = weil_scan(&[11, 13], 50, 42).unwrap();
        assert_eq!(serde_json::to_string(&a).unwrap(), serde_json::to_string(&b).unwrap());
        for summary in &a {
            assert_eq!(summary.records.len(), 50);
            for rec in &summary.records {
                assert!(rec.ratio <= 4.0, "M={} ratio={}", summary.modulus, rec.ratio);
            }
        }
    }
}
