//! Small complex-arithmetic helpers shared by every summation kernel.

use num_complex::Complex64;

/// The unit-circle exponential `e(x) = exp(2 pi i x)`.
pub fn e(x: f64) -> Complex64 {
    let (s, c) = (2.0 * std::f64::consts::PI * x).sin_cos();
    Complex64::new(c, s)
}

/// `e(num/den)` where the reduction `num mod den` is done in exact integers
/// first, so the float angle is always in `[0, 2 pi)`.
pub fn e_frac(num: i128, den: u64) -> Complex64 {
    debug_assert!(den > 0);
    let d = den as i128;
    let mut n = num % d;
    if n < 0 {
        n += d;
    }
    e(n as f64 / den as f64)
}

/// Kahan compensated accumulator for `f64`.
#[derive(Clone, Copy, Debug, Default)]
pub struct KahanSum {
    sum: f64,
    carry: f64,
}

impl KahanSum {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add(&mut self, value: f64) {
        let y = value - self.carry;
        let t = self.sum + y;
        self.carry = (t - self.sum) - y;
        self.sum = t;
    }

    pub fn value(&self) -> f64 {
        self.sum
    }
}

/// Compensated accumulator for complex sums of many unit-modulus terms.
#[derive(Clone, Copy, Debug, Default)]
pub struct ComplexSum {
    re: KahanSum,
    im: KahanSum,
}

impl ComplexSum {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add(&mut self, z: Complex64) {
        self.re.add(z.re);
        self.im.add(z.im);
    }

    pub fn value(&self) -> Complex64 {
        Complex64::new(self.re.value(), self.im.value())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unit_phase_quarter_turn() {
        let z = e(0.25);
        assert!((z.re).abs() < 1e-15);
        assert!((z.im - 1.0).abs() < 1e-15);
    }

    #[test]
    fn exact_fraction_reduces_before_float() {
        // 10^15 + 1/3 of a turn: naive float angle would lose the fraction.
        let z = e_frac(3 * 1_000_000_000_000_001 + 1, 3);
        let w = e(1.0 / 3.0);
        assert!((z - w).norm() < 1e-12);
    }

    #[test]
    fn kahan_recovers_small_terms() {
        let mut acc = KahanSum::new();
        acc.add(1.0);
        for _ in 0..1_000_000 {
            acc.add(1e-16);
        }
        assert!((acc.value() - (1.0 + 1e-10)).abs() < 1e-13);
    }
}
