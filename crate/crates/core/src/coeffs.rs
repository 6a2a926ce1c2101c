//! Arithmetic coefficient streams: the divisor function, the discriminant
//! cusp form coefficients tau(n) in exact integers, their Hecke
//! normalization, and the amplifier prime set.

use serde::Serialize;
use std::io::Read;
use std::path::Path;

use crate::arith::primes_in;
use crate::error::{Error, Result};

/// Which arithmetic weight the stream carries.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum CoefficientKind {
    /// `d(n)`, the number of divisors.
    Divisor,
    /// `tau(n) / n^{11/2}`, Hecke-normalized.
    TauNormalized,
}

/// Cached values `lambda(1..=n_max)` of a multiplicative weight.
#[derive(Clone, Debug)]
pub struct CoefficientStream {
    kind: CoefficientKind,
    values: Vec<f64>, // values[n] = lambda(n), values[0] unused
}

impl CoefficientStream {
    pub fn kind(&self) -> CoefficientKind {
        self.kind
    }

    pub fn n_max(&self) -> usize {
        self.values.len().saturating_sub(1)
    }

    pub fn lambda(&self, n: usize) -> f64 {
        self.values[n]
    }

    pub fn get(&self, n: usize) -> Option<f64> {
        if n == 0 {
            None
        } else {
            self.values.get(n).copied()
        }
    }
}

/// Divisor counts `d(n)` for `n <= n_max`, by sieving multiples.
pub fn divisor_table(n_max: usize) -> CoefficientStream {
    assert!(n_max >= 1);
    let mut counts = vec![0u32; n_max + 1];
    for d in 1..=n_max {
        let mut k = d;
        while k <= n_max {
            counts[k] += 1;
            k += d;
        }
    }
    let mut values: Vec<f64> = counts.into_iter().map(f64::from).collect();
    values[0] = 0.0;
    CoefficientStream {
        kind: CoefficientKind::Divisor,
        values,
    }
}

/// Exact integer values `tau(1..=n_max)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TauTable {
    values: Vec<i128>, // values[n] = tau(n), values[0] unused
}

/// Generalized pentagonal exponents `k(3k-1)/2` with signs `(-1)^k`,
/// for k = 1, -1, 2, -2, ... while the exponent stays `<= limit`.
fn pentagonal_terms(limit: usize) -> Vec<(usize, i128)> {
    let mut out = Vec::new();
    let mut k: i64 = 1;
    loop {
        let mut pushed = false;
        for kk in [k, -k] {
            let g = kk * (3 * kk - 1) / 2;
            if g as usize <= limit {
                let sign = if k % 2 == 0 { 1 } else { -1 };
                out.push((g as usize, sign as i128));
                pushed = true;
            }
        }
        if !pushed {
            break;
        }
        k += 1;
    }
    out.sort();
    out
}

/// Signed 256-bit accumulator, two's complement over two `u128` limbs.
/// Wide enough for the recurrence partial sums, whose terms reach about
/// 2^150 even though every stored coefficient fits `i128`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
struct I256 {
    hi: u128,
    lo: u128,
}

impl I256 {
    const ZERO: I256 = I256 { hi: 0, lo: 0 };

    fn neg(self) -> I256 {
        let lo = (!self.lo).wrapping_add(1);
        let hi = (!self.hi).wrapping_add(u128::from(lo == 0));
        I256 { hi, lo }
    }

    fn add(self, o: I256) -> I256 {
        let (lo, carry) = self.lo.overflowing_add(o.lo);
        let hi = self.hi.wrapping_add(o.hi).wrapping_add(u128::from(carry));
        I256 { hi, lo }
    }

    fn is_negative(self) -> bool {
        self.hi >> 127 == 1
    }

    /// Exact product of an `i128` coefficient and a small factor.
    fn product(a: i128, b: i64) -> I256 {
        let negative = (a < 0) != (b < 0);
        let am = a.unsigned_abs();
        let bm = b.unsigned_abs() as u128;
        let al = am & ((1u128 << 64) - 1);
        let ah = am >> 64;
        let low = al * bm; // < 2^127
        let mid = ah * bm; // < 2^127, weighted by 2^64
        let (lo, carry) = low.overflowing_add(mid << 64);
        let hi = (mid >> 64) + u128::from(carry);
        let v = I256 { hi, lo };
        if negative {
            v.neg()
        } else {
            v
        }
    }

    /// Exact division by a small positive integer. `None` when the
    /// remainder is nonzero or the quotient does not fit `i128`.
    fn exact_div(self, n: u64) -> Option<i128> {
        let negative = self.is_negative();
        let mag = if negative { self.neg() } else { self };
        let limbs = [
            (mag.hi >> 64) as u64,
            mag.hi as u64,
            (mag.lo >> 64) as u64,
            mag.lo as u64,
        ];
        let mut q = [0u64; 4];
        let mut rem: u128 = 0;
        for (i, &limb) in limbs.iter().enumerate() {
            let cur = (rem << 64) | limb as u128;
            q[i] = (cur / n as u128) as u64;
            rem = cur % n as u128;
        }
        if rem != 0 || q[0] != 0 || q[1] != 0 || q[2] >> 63 != 0 {
            return None;
        }
        let mag128 = ((q[2] as u128) << 64) | q[3] as u128;
        Some(if negative {
            -(mag128 as i128)
        } else {
            mag128 as i128
        })
    }
}

/// Compute `tau(n)` for `n <= n_max` in exact integer arithmetic.
///
/// Writing `F = prod (1 - q^n)^{24} = sum a_n q^n` (so `tau(n) = a_{n-1}`),
/// the logarithmic derivative against the pentagonal expansion of the
/// product gives the sparse recurrence
/// `n a_n = -sum_{j>=1} eps_j (n - 25 g_j) a_{n-g_j}`
/// over generalized pentagonal numbers `g_j`, which costs `O(sqrt n)` per
/// coefficient. Partial sums run in 256 bits; a coefficient that no longer
/// fits `i128` reports its index.
pub fn tau_exact(n_max: usize) -> Result<TauTable> {
    assert!(n_max >= 1);
    let top = n_max - 1; // indices of F
    let pent = pentagonal_terms(top.max(1));
    let mut a = vec![0i128; top + 1];
    a[0] = 1;
    for n in 1..=top {
        let mut sum = I256::ZERO;
        for &(g, sign) in &pent {
            if g == 0 || g > n {
                continue;
            }
            let coeff = sign as i64 * (n as i64 - 25 * g as i64);
            sum = sum.add(I256::product(a[n - g], coeff));
        }
        a[n] = sum.neg().exact_div(n as u64).ok_or(Error::Overflow(n + 1))?;
    }
    let mut values = vec![0i128; n_max + 1];
    for n in 1..=n_max {
        values[n] = a[n - 1];
    }
    Ok(TauTable { values })
}

const TAU_CACHE_MAGIC: &[u8; 8] = b"TAUCACHE";

impl TauTable {
    pub fn n_max(&self) -> usize {
        self.values.len() - 1
    }

    pub fn tau(&self, n: usize) -> i128 {
        self.values[n]
    }

    /// Hecke normalization `tau(n) / n^{11/2}`, validated against the
    /// Deligne bound at primes. A violation would mean the table is corrupt,
    /// so it aborts.
    pub fn normalized(&self) -> CoefficientStream {
        let mut values = vec![0.0f64; self.values.len()];
        for n in 1..self.values.len() {
            values[n] = self.values[n] as f64 / (n as f64).powf(5.5);
        }
        for p in primes_in(2, self.n_max() as u64) {
            let lam = values[p as usize].abs();
            assert!(
                lam <= 2.0 + 1e-9,
                "Deligne bound violated at p = {p}: |lambda| = {lam}"
            );
        }
        CoefficientStream {
            kind: CoefficientKind::TauNormalized,
            values,
        }
    }

    /// Write the longest prefix whose values fit in `i64` to a flat
    /// little-endian array under the `TAUCACHE` magic header.
    pub fn write_cache(&self, path: &Path) -> Result<usize> {
        let mut fit = 0usize;
        for n in 1..=self.n_max() {
            if self.values[n] > i64::MAX as i128 || self.values[n] < i64::MIN as i128 {
                break;
            }
            fit = n;
        }
        let mut buf = Vec::with_capacity(16 + 8 * fit);
        buf.extend_from_slice(TAU_CACHE_MAGIC);
        buf.extend_from_slice(&(fit as u64).to_le_bytes());
        for n in 1..=fit {
            buf.extend_from_slice(&(self.values[n] as i64).to_le_bytes());
        }
        std::fs::write(path, buf)?;
        Ok(fit)
    }

    /// Read a cache file back. Returns the stored prefix.
    pub fn read_cache(path: &Path) -> Result<TauTable> {
        let mut file = std::fs::File::open(path)?;
        let mut header = [0u8; 16];
        file.read_exact(&mut header)
            .map_err(|_| Error::CorruptCache("truncated header".into()))?;
        if &header[..8] != TAU_CACHE_MAGIC {
            return Err(Error::CorruptCache("bad magic".into()));
        }
        let count = u64::from_le_bytes(header[8..16].try_into().unwrap()) as usize;
        let mut data = Vec::new();
        file.read_to_end(&mut data)?;
        if data.len() != 8 * count {
            return Err(Error::CorruptCache(format!(
                "expected {} value bytes, found {}",
                8 * count,
                data.len()
            )));
        }
        let mut values = vec![0i128; count + 1];
        for n in 1..=count {
            let bytes: [u8; 8] = data[8 * (n - 1)..8 * n].try_into().unwrap();
            values[n] = i64::from_le_bytes(bytes) as i128;
        }
        Ok(TauTable { values })
    }

    /// Use the cache when it already covers `n_max`, otherwise recompute and
    /// refresh it. Values past the `i64` range are never cached.
    pub fn load_or_build(n_max: usize, cache: Option<&Path>) -> Result<TauTable> {
        if let Some(path) = cache {
            if path.exists() {
                if let Ok(table) = Self::read_cache(path) {
                    if table.n_max() >= n_max {
                        let values = table.values[..=n_max].to_vec();
                        return Ok(TauTable { values });
                    }
                }
            }
        }
        let table = tau_exact(n_max)?;
        if let Some(path) = cache {
            let _ = table.write_cache(path);
        }
        Ok(table)
    }
}

/// Normalized coefficient stream `tau(n)/n^{11/2}` for `n <= n_max`.
pub fn tau_table(n_max: usize) -> Result<CoefficientStream> {
    Ok(tau_exact(n_max)?.normalized())
}

/// Amplifier primes in `[L, 2L]` together with the weight total
/// `L* = sum |lambda(l)|^2` and the reachability of the `L^{0.9}` threshold.
#[derive(Clone, Debug, Serialize)]
pub struct AmplifierSet {
    pub target: u64,
    pub primes: Vec<u64>,
    pub weight_total: f64,
    pub threshold: f64,
    pub threshold_met: bool,
}

/// Collect every prime in `[L, 2L]`, accumulating in decreasing weight
/// order, and record whether the weight total reaches `L^{0.9}`.
///
/// Errors only when no prime in the range carries nonzero weight.
pub fn select_amplifier_primes(l: u64, stream: &CoefficientStream) -> Result<AmplifierSet> {
    assert!(l >= 2, "amplifier size must be at least 2");
    let threshold = (l as f64).powf(0.9);
    let need = (2 * l) as usize;
    if stream.n_max() < need {
        return Err(Error::TableTooSmall {
            have: stream.n_max(),
            need,
        });
    }
    let mut primes: Vec<u64> = primes_in(l, 2 * l);
    primes.sort_by(|&a, &b| {
        let wa = stream.lambda(a as usize).abs();
        let wb = stream.lambda(b as usize).abs();
        wb.partial_cmp(&wa).unwrap().then(a.cmp(&b))
    });
    let mut weight_total = 0.0;
    let mut kept = Vec::new();
    for &p in &primes {
        let w = stream.lambda(p as usize);
        if w == 0.0 {
            continue;
        }
        weight_total += w * w;
        kept.push(p);
    }
    if kept.is_empty() || weight_total == 0.0 {
        return Err(Error::ThresholdUnreachable {
            got: weight_total,
            needed: threshold,
        });
    }
    kept.sort();
    Ok(AmplifierSet {
        target: l,
        primes: kept,
        weight_total,
        threshold,
        threshold_met: weight_total >= threshold,
    })
}
