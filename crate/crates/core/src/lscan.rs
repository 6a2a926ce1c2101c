//! Twisted smooth coefficient sums, central L-values through two
//! independent routes, and the log-log exponent scan over primes.

use num_complex::Complex64;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rand::SeedableRng;
use rayon::prelude::*;
use serde::Serialize;
use std::sync::Arc;

use crate::analysis::{hurwitz_zeta, upper_cutoff, SmoothWindow};
use crate::arith::is_prime;
use crate::character::{DirichletCharacter, MultiplicativeGroupTable};
use crate::coeffs::{CoefficientKind, CoefficientStream};
use crate::cx::{ComplexSum, KahanSum};
use crate::error::{Error, Result};

/// One twisted smooth sum `sum_n lambda(n) chi(n) W(n / N)`. The twist must
/// be primitive and the center capped at `4 M^{1.1}`, comfortably above the
/// scan grid's top end `4 M^{1.05}`.
#[derive(Clone)]
pub struct TwistedSumSpec<'a> {
    pub chi: DirichletCharacter,
    pub n_center: f64,
    pub stream: &'a CoefficientStream,
}

/// Direct accumulation over the bump support `(N, 2N)`.
pub fn twisted_sum(spec: &TwistedSumSpec<'_>) -> Result<Complex64> {
    let window = SmoothWindow::bump();
    let n_center = spec.n_center;
    if n_center <= 0.0 {
        return Err(Error::InvalidParameter("center must be positive".into()));
    }
    if !spec.chi.is_primitive() {
        return Err(Error::NotPrimitive(spec.chi.modulus(), spec.chi.index()));
    }
    let cap = 4.0 * (spec.chi.modulus() as f64).powf(1.1);
    if n_center > cap {
        return Err(Error::InvalidParameter(format!(
            "center {n_center} above the range cap {cap}"
        )));
    }
    let lo = n_center.floor().max(1.0) as usize;
    let hi = (2.0 * n_center).ceil() as usize;
    if hi > spec.stream.n_max() {
        return Err(Error::TableTooSmall {
            have: spec.stream.n_max(),
            need: hi,
        });
    }
    let chi_vals = spec.chi.value_table();
    let q = spec.chi.modulus() as usize;
    let mut acc = ComplexSum::new();
    for n in lo..=hi {
        let w = window.eval(n as f64 / n_center);
        if w == 0.0 {
            continue;
        }
        let cv = chi_vals[n % q];
        if cv.re == 0.0 && cv.im == 0.0 {
            continue;
        }
        acc.add(spec.stream.lambda(n) * w * cv);
    }
    Ok(acc.value())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum LValueMethod {
    HurwitzOracle,
    SmoothedSum,
}

/// Central value record for one character.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct CentralValueRecord {
    pub modulus: u64,
    pub chi_index: u64,
    pub re: f64,
    pub im: f64,
    pub method: LValueMethod,
}

impl CentralValueRecord {
    pub fn value(&self) -> Complex64 {
        Complex64::new(self.re, self.im)
    }

    pub fn json_line(&self) -> String {
        serde_json::to_string(self).expect("record serializes")
    }

    pub fn csv_header() -> &'static str {
        "M,chi,re,im,abs,method"
    }

    pub fn csv_row(&self) -> String {
        format!(
            "{},{},{},{},{},{:?}",
            self.modulus,
            self.chi_index,
            self.re,
            self.im,
            self.value().norm(),
            self.method
        )
    }
}

/// Shared per-modulus data for the Hurwitz route:
/// `L(1/2, chi) = M^{-1/2} sum_a chi(a) zeta(1/2, a/M)`.
pub struct LValueOracle {
    group: Arc<MultiplicativeGroupTable>,
    zeta_half: Vec<f64>, // zeta(1/2, a/M) for a in 1..M
}

impl LValueOracle {
    pub fn new(modulus: u64) -> Result<Self> {
        if !is_prime(modulus) {
            return Err(Error::NotPrime(modulus));
        }
        let group = Arc::new(MultiplicativeGroupTable::new(modulus)?);
        let s = Complex64::new(0.5, 0.0);
        let zeta_half = (1..modulus)
            .map(|a| Ok(hurwitz_zeta(s, a as f64 / modulus as f64)?.re))
            .collect::<Result<Vec<f64>>>()?;
        Ok(Self { group, zeta_half })
    }

    pub fn modulus(&self) -> u64 {
        self.group.modulus()
    }

    pub fn group(&self) -> &Arc<MultiplicativeGroupTable> {
        &self.group
    }

    pub fn value(&self, chi_index: u64) -> Result<CentralValueRecord> {
        let m = self.modulus();
        let chi = DirichletCharacter::with_group(Arc::clone(&self.group), chi_index)?;
        if !chi.is_primitive() {
            return Err(Error::NotPrimitive(m, chi_index));
        }
        let mut acc = ComplexSum::new();
        for a in 1..m {
            acc.add(chi.eval(a) * self.zeta_half[(a - 1) as usize]);
        }
        let v = acc.value() / (m as f64).sqrt();
        Ok(CentralValueRecord {
            modulus: m,
            chi_index,
            re: v.re,
            im: v.im,
            method: LValueMethod::HurwitzOracle,
        })
    }
}

/// Shared per-modulus data for the smoothed-sum route: residue-class bins
/// `T(a) = sum_{n = a mod M} n^{-1/2} G(n / X)` with the smooth cutoff `G`
/// (one on `[0, 2]`, ramp to zero across `[2, 3]`) and truncation length
/// `X = max(10^6, M^{3.5})`. Shifting the defining contour past the cutoff
/// pole leaves an error of order `X^{-3/2} M^{3/2}`, far below the `1e-6`
/// agreement target.
pub struct SmoothedLContext {
    group: Arc<MultiplicativeGroupTable>,
    bins: Vec<f64>,
}

impl SmoothedLContext {
    pub fn new(modulus: u64) -> Result<Self> {
        if !is_prime(modulus) {
            return Err(Error::NotPrime(modulus));
        }
        let group = Arc::new(MultiplicativeGroupTable::new(modulus)?);
        // Truncation length M^{3.5}, floored for tiny moduli and capped so
        // large moduli stay affordable (the shift error is ~ X^{-3/2} M^{3/2},
        // still far under 1e-6 at the cap for every modulus we accept).
        let x_len = 1.0e6f64.max((modulus as f64).powf(3.5)).min(5.0e7);
        let top = (3.0 * x_len).ceil() as u64;
        let mut bins = vec![KahanSum::new(); modulus as usize];
        for n in 1..=top {
            let g = upper_cutoff(n as f64 / x_len);
            if g == 0.0 {
                break;
            }
            bins[(n % modulus) as usize].add(g / (n as f64).sqrt());
        }
        Ok(Self {
            group,
            bins: bins.into_iter().map(|k| k.value()).collect(),
        })
    }

    pub fn modulus(&self) -> u64 {
        self.group.modulus()
    }

    pub fn value(&self, chi_index: u64) -> Result<CentralValueRecord> {
        let m = self.modulus();
        let chi = DirichletCharacter::with_group(Arc::clone(&self.group), chi_index)?;
        if !chi.is_primitive() {
            return Err(Error::NotPrimitive(m, chi_index));
        }
        let mut acc = ComplexSum::new();
        for a in 1..m {
            acc.add(chi.eval(a) * self.bins[a as usize]);
        }
        let v = acc.value();
        Ok(CentralValueRecord {
            modulus: m,
            chi_index,
            re: v.re,
            im: v.im,
            method: LValueMethod::SmoothedSum,
        })
    }
}

/// Hurwitz-route central value for one character.
pub fn central_value_oracle(modulus: u64, chi_index: u64) -> Result<CentralValueRecord> {
    LValueOracle::new(modulus)?.value(chi_index)
}

/// Smoothed-sum central value for one character.
pub fn central_value_smoothed(modulus: u64, chi_index: u64) -> Result<CentralValueRecord> {
    SmoothedLContext::new(modulus)?.value(chi_index)
}

/// Dyadic centers from `sqrt(M)` to `4 M^{1.05}`, with ratio `2^{1/(2 d)}`
/// between successive centers; `density = 1` is the standard grid and
/// doubling `density` refines it to a superset.
pub fn dyadic_grid(modulus: u64, density: u32) -> Vec<f64> {
    assert!(density >= 1);
    let lo = (modulus as f64).sqrt();
    let hi = 4.0 * (modulus as f64).powf(1.05);
    let ratio = 2f64.powf(1.0 / (2.0 * density as f64));
    let mut out = vec![lo];
    let mut x = lo;
    while x * ratio <= hi {
        x *= ratio;
        out.push(x);
    }
    out.push(hi);
    out
}

/// Scan statistics for one character of one prime.
#[derive(Clone, Debug, Serialize)]
pub struct CharScanStat {
    pub chi_index: u64,
    /// `sup_N |S(N)| / sqrt(N)` over the dyadic grid.
    pub b_stat: f64,
    /// `|L(1/2, chi)|` from the Hurwitz oracle.
    pub l_abs: f64,
    /// Per-center ratios `(N, |S(N)|/sqrt(N))`.
    pub per_center: Vec<(f64, f64)>,
}

#[derive(Clone, Debug, Serialize)]
pub struct PrimeScanStat {
    pub modulus: u64,
    pub chars: Vec<CharScanStat>,
    pub b_max: f64,
    pub lambda_max: f64,
}

/// Least-squares fit of `log stat` against `log M`.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct SlopeFit {
    pub slope: f64,
    pub intercept: f64,
    pub residual: f64,
    pub defined: bool,
}

pub fn fit_loglog(points: &[(f64, f64)]) -> SlopeFit {
    let usable: Vec<(f64, f64)> = points
        .iter()
        .filter(|(x, y)| *x > 0.0 && *y > 0.0)
        .map(|(x, y)| (x.ln(), y.ln()))
        .collect();
    if usable.len() < 2 {
        return SlopeFit {
            slope: 0.0,
            intercept: 0.0,
            residual: 0.0,
            defined: false,
        };
    }
    let n = usable.len() as f64;
    let sx: f64 = usable.iter().map(|p| p.0).sum();
    let sy: f64 = usable.iter().map(|p| p.1).sum();
    let sxx: f64 = usable.iter().map(|p| p.0 * p.0).sum();
    let sxy: f64 = usable.iter().map(|p| p.0 * p.1).sum();
    let denom = n * sxx - sx * sx;
    let slope = (n * sxy - sx * sy) / denom;
    let intercept = (sy - slope * sx) / n;
    let residual = usable
        .iter()
        .map(|(x, y)| {
            let d = y - (slope * x + intercept);
            d * d
        })
        .sum::<f64>()
        .sqrt();
    SlopeFit {
        slope,
        intercept,
        residual,
        defined: true,
    }
}

/// Reference exponents the report prints distances to.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct ReferenceExponents {
    pub burgess_s_slope: f64,
    pub burgess_l_slope: f64,
    pub convexity_l_slope: f64,
    pub trivial_s_slope: f64,
}

pub const REFERENCE_EXPONENTS: ReferenceExponents = ReferenceExponents {
    burgess_s_slope: 0.375,
    burgess_l_slope: 0.1875,
    convexity_l_slope: 0.25,
    trivial_s_slope: 0.5,
};

#[derive(Clone, Debug, Serialize)]
pub struct BurgessScanReport {
    pub primes: Vec<u64>,
    pub coefficient_kind: CoefficientKind,
    pub chars_per_modulus: usize,
    pub seed: u64,
    pub grid_density: u32,
    pub stats: Vec<PrimeScanStat>,
    pub b_fit: SlopeFit,
    pub lambda_fit: SlopeFit,
    pub reference: ReferenceExponents,
    pub b_distance_to_burgess: f64,
    pub lambda_distance_to_burgess: f64,
    pub b_gate_ok: bool,
    pub lambda_gate_ok: bool,
}

impl BurgessScanReport {
    pub fn json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn csv_header() -> &'static str {
        "M,chi,N,ratio"
    }

    pub fn csv_rows(&self) -> Vec<String> {
        let mut rows = Vec::new();
        for stat in &self.stats {
            for cs in &stat.chars {
                for (n, ratio) in &cs.per_center {
                    rows.push(format!("{},{},{},{}", stat.modulus, cs.chi_index, n, ratio));
                }
            }
        }
        rows
    }

    /// Two-column plot data `(log M, log stat)`, one block per statistic.
    pub fn tsv_rows(&self) -> Vec<String> {
        let mut rows = vec!["# twisted-sum statistic: log_M\tlog_B".to_string()];
        for stat in &self.stats {
            rows.push(format!(
                "{}\t{}",
                (stat.modulus as f64).ln(),
                stat.b_max.max(f64::MIN_POSITIVE).ln()
            ));
        }
        rows.push(String::new());
        rows.push("# central-value statistic: log_M\tlog_Lambda".to_string());
        for stat in &self.stats {
            rows.push(format!(
                "{}\t{}",
                (stat.modulus as f64).ln(),
                stat.lambda_max.max(f64::MIN_POSITIVE).ln()
            ));
        }
        rows
    }
}

#[derive(Clone, Debug)]
pub struct BurgessScanConfig {
    pub primes: Vec<u64>,
    pub chars_per_modulus: usize,
    pub seed: u64,
    pub grid_density: u32,
}

fn unit_seed(master: u64, index: u64) -> u64 {
    let mut z = master ^ index.wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Character indices sampled for one modulus: always the quadratic index,
/// then distinct seeded random primitive indices.
pub fn sample_char_indices(modulus: u64, count: usize, seed: u64) -> Vec<u64> {
    let quadratic = (modulus - 1) / 2;
    let mut out = vec![quadratic];
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    while out.len() < count.min((modulus - 2) as usize) {
        let k = rng.gen_range(1..modulus - 1);
        if !out.contains(&k) {
            out.push(k);
        }
    }
    out
}

fn scan_one_prime(
    modulus: u64,
    cfg: &BurgessScanConfig,
    stream: &CoefficientStream,
    seed: u64,
) -> Result<PrimeScanStat> {
    let oracle = LValueOracle::new(modulus)?;
    let indices = sample_char_indices(modulus, cfg.chars_per_modulus, seed);
    let grid = dyadic_grid(modulus, cfg.grid_density);
    let mut chars = Vec::with_capacity(indices.len());
    for &chi_index in &indices {
        let chi = DirichletCharacter::with_group(Arc::clone(oracle.group()), chi_index)?;
        let mut b_stat: f64 = 0.0;
        let mut per_center = Vec::with_capacity(grid.len());
        for &n_center in &grid {
            let spec = TwistedSumSpec {
                chi: chi.clone(),
                n_center,
                stream,
            };
            let ratio = twisted_sum(&spec)?.norm() / n_center.sqrt();
            per_center.push((n_center, ratio));
            b_stat = b_stat.max(ratio);
        }
        let l_abs = oracle.value(chi_index)?.value().norm();
        chars.push(CharScanStat {
            chi_index,
            b_stat,
            l_abs,
            per_center,
        });
    }
    let b_max = chars.iter().map(|c| c.b_stat).fold(0.0, f64::max);
    let lambda_max = chars.iter().map(|c| c.l_abs).fold(0.0, f64::max);
    Ok(PrimeScanStat {
        modulus,
        chars,
        b_max,
        lambda_max,
    })
}

/// Exponent scan over the configured primes. Deterministic in the seed and
/// independent of the worker count; per-prime work runs in parallel and the
/// report assembles in input order.
pub fn burgess_scan(cfg: &BurgessScanConfig, stream: &CoefficientStream) -> Result<BurgessScanReport> {
    if cfg.primes.is_empty() {
        return Err(Error::InvalidParameter("no primes to scan".into()));
    }
    if cfg.chars_per_modulus == 0 {
        return Err(Error::InvalidParameter(
            "need at least one character per modulus".into(),
        ));
    }
    let mut sorted = cfg.primes.clone();
    sorted.sort_unstable();
    sorted.dedup();
    for &m in &sorted {
        if !is_prime(m) || m < 5 {
            return Err(Error::InvalidParameter(format!("{m} is not a prime >= 5")));
        }
        let need = (8.0 * (m as f64).powf(1.05)).ceil() as usize + 2;
        if stream.n_max() < need {
            return Err(Error::TableTooSmall {
                have: stream.n_max(),
                need,
            });
        }
    }
    let stats: Vec<PrimeScanStat> = sorted
        .par_iter()
        .enumerate()
        .map(|(i, &m)| scan_one_prime(m, cfg, stream, unit_seed(cfg.seed, i as u64)))
        .collect::<Result<Vec<_>>>()?;
    let b_points: Vec<(f64, f64)> = stats
        .iter()
        .map(|s| (s.modulus as f64, s.b_max))
        .collect();
    let l_points: Vec<(f64, f64)> = stats
        .iter()
        .map(|s| (s.modulus as f64, s.lambda_max))
        .collect();
    let b_fit = fit_loglog(&b_points);
    let lambda_fit = fit_loglog(&l_points);
    let reference = REFERENCE_EXPONENTS;
    Ok(BurgessScanReport {
        primes: sorted,
        coefficient_kind: stream.kind(),
        chars_per_modulus: cfg.chars_per_modulus,
        seed: cfg.seed,
        grid_density: cfg.grid_density,
        stats,
        b_fit,
        lambda_fit,
        reference,
        b_distance_to_burgess: (b_fit.slope - reference.burgess_s_slope).abs(),
        lambda_distance_to_burgess: (lambda_fit.slope - reference.burgess_l_slope).abs(),
        b_gate_ok: !b_fit.defined || b_fit.slope <= reference.trivial_s_slope,
        lambda_gate_ok: !lambda_fit.defined || lambda_fit.slope <= reference.convexity_l_slope,
    })
}

/// Roughly log-spaced primes for scan defaults.
pub fn log_spaced_primes(lo: u64, hi: u64, count: usize) -> Vec<u64> {
    assert!(lo >= 5 && hi > lo && count >= 1);
    let all = crate::arith::primes_in(lo, hi);
    if all.len() <= count {
        return all;
    }
    let mut out: Vec<u64> = Vec::with_capacity(count);
    let ratio = (hi as f64 / lo as f64).powf(1.0 / (count as f64 - 1.0));
    let mut target = lo as f64;
    for _ in 0..count {
        let pick = match all.binary_search(&(target.round() as u64)) {
            Ok(i) => all[i],
            Err(i) => all[i.min(all.len() - 1)],
        };
        if out.last() != Some(&pick) {
            out.push(pick);
        }
        target *= ratio;
    }
    out
}
