//! Oscillatory integrals of the plateau window against the square-root
//! phase that comes out of extracting the Bessel oscillation, plus the
//! leading stationary-phase evaluation.
//!
//! The phase is `2 pi (sign * a sqrt(y) - b y)` with
//! `a = 2 sqrt(n R l) / (c M sqrt(p))` and `b = R r / (c p M)`. The plus
//! branch has the single stationary point `y0 = n l p / (R r^2)`; the minus
//! branch is monotone and its integral is small.

use num_complex::Complex64;

use super::quad::adaptive_complex_seeded;
use super::windows::SmoothWindow;
use crate::cx::e;
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PhaseSign {
    Plus,
    Minus,
}

impl PhaseSign {
    fn factor(self) -> f64 {
        match self {
            PhaseSign::Plus => 1.0,
            PhaseSign::Minus => -1.0,
        }
    }
}

/// Parameters of one oscillatory integral. All entries are positive reals
/// except `n` and `r`, which may vanish (killing the corresponding phase
/// term).
#[derive(Clone, Copy, Debug)]
pub struct OscillatoryIntegralSpec {
    pub n: f64,
    pub r_tilde: f64,
    pub ell: f64,
    pub c: f64,
    pub m: f64,
    pub p: f64,
    pub r: f64,
}

impl OscillatoryIntegralSpec {
    pub fn validate(&self) -> Result<()> {
        let positive = [self.r_tilde, self.ell, self.c, self.m, self.p];
        if positive.iter().any(|v| !(*v > 0.0) || !v.is_finite()) {
            return Err(Error::InvalidParameter(
                "window and modulus parameters must be positive".into(),
            ));
        }
        if self.n < 0.0 || self.r < 0.0 || !self.n.is_finite() || !self.r.is_finite() {
            return Err(Error::InvalidParameter(
                "frequency parameters must be nonnegative".into(),
            ));
        }
        Ok(())
    }

    /// Coefficient of `sqrt(y)` in the phase.
    pub fn sqrt_coefficient(&self) -> f64 {
        2.0 * (self.n * self.r_tilde * self.ell).sqrt() / (self.c * self.m * self.p.sqrt())
    }

    /// Coefficient of `y` in the phase.
    pub fn linear_coefficient(&self) -> f64 {
        self.r_tilde * self.r / (self.c * self.p * self.m)
    }

    /// Stationary point `y0 = n l p / (R r^2)` of the plus branch; infinite
    /// when `r = 0`.
    pub fn stationary_point(&self) -> f64 {
        self.n * self.ell * self.p / (self.r_tilde * self.r * self.r)
    }

    /// Phase value (in turns, the argument of `e`).
    pub fn phase(&self, y: f64, sign: PhaseSign) -> f64 {
        sign.factor() * self.sqrt_coefficient() * y.sqrt() - self.linear_coefficient() * y
    }

    /// Second derivative of the full angular phase `2 pi phi` at `y`.
    pub fn phase_second_derivative(&self, y: f64, sign: PhaseSign) -> f64 {
        -2.0 * std::f64::consts::PI * sign.factor() * self.sqrt_coefficient()
            / (4.0 * y.powf(1.5))
    }
}

/// Quadrature of `int V(y) e(phase(y)) dy` over the plateau support, to
/// absolute accuracy `1e-9`.
pub fn oscillatory_integral(
    spec: &OscillatoryIntegralSpec,
    sign: PhaseSign,
) -> Result<Complex64> {
    spec.validate()?;
    let window = SmoothWindow::plateau();
    let (lo, hi) = window.support();
    let f = |y: f64| {
        let w = window.eval(y);
        if w == 0.0 {
            Complex64::new(0.0, 0.0)
        } else {
            w * e(spec.phase(y, sign))
        }
    };
    let mut seeds = window.seeds();
    if sign == PhaseSign::Plus && spec.r > 0.0 {
        let y0 = spec.stationary_point();
        if y0 > lo && y0 < hi {
            seeds.push(y0);
        }
    }
    adaptive_complex_seeded(&f, lo, hi, &seeds, 1e-10, 48)
}

/// Leading stationary-phase value, factored as amplitude, oscillation and a
/// non-oscillatory weight.
///
/// The amplitude is `c M sqrt(p) / sqrt(n R l)` and the oscillation is
/// `e(n l / (c M r))`. The weight absorbs everything else in the leading
/// term: `sqrt(2 / amplitude) y0^{3/4} V(y0) e^{-i pi/4}`, so that
/// `value = amplitude * phase * weight` matches the quadrature to first
/// order at large frequency.
#[derive(Clone, Copy, Debug)]
pub struct StationaryPhaseValue {
    pub amplitude: f64,
    pub phase: Complex64,
    pub phase_turns: f64,
    pub weight: Complex64,
    pub stationary_point: f64,
}

impl StationaryPhaseValue {
    pub fn value(&self) -> Complex64 {
        self.amplitude * self.phase * self.weight
    }
}

pub fn stationary_phase_estimate(
    spec: &OscillatoryIntegralSpec,
) -> Result<StationaryPhaseValue> {
    spec.validate()?;
    if spec.n == 0.0 || spec.r == 0.0 {
        return Err(Error::InvalidParameter(
            "stationary phase needs nonzero frequency parameters".into(),
        ));
    }
    let window = SmoothWindow::plateau();
    let (lo, hi) = window.support();
    let y0 = spec.stationary_point();
    if !(y0 > lo && y0 < hi) {
        return Err(Error::StationaryPointOutsideSupport(y0));
    }
    let amplitude = spec.c * spec.m * spec.p.sqrt() / (spec.n * spec.r_tilde * spec.ell).sqrt();
    let phase_turns = spec.n * spec.ell / (spec.c * spec.m * spec.r);
    let phase = e(phase_turns);
    // Exact leading term: V(y0) e(phi(y0)) e^{-i pi/4} / sqrt(|phi''(y0)|)
    // with 1/sqrt(|phi''|) = sqrt(2 A) y0^{3/4}; A is the amplitude above.
    let weight = (2.0 / amplitude).sqrt() * y0.powf(0.75) * window.eval(y0) * e(-0.125);
    Ok(StationaryPhaseValue {
        amplitude,
        phase,
        phase_turns,
        weight,
        stationary_point: y0,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analysis::windows::mellin;

    fn ladder_spec(t: f64) -> OscillatoryIntegralSpec {
        // y0 = n / R = 1.5 fixed; sqrt coefficient grows like 2 sqrt(1.5) t.
        OscillatoryIntegralSpec {
            n: 1.5 * t,
            r_tilde: t,
            ell: 1.0,
            c: 1.0,
            m: 1.0,
            p: 1.0,
            r: 1.0,
        }
    }

    #[test]
    fn zero_frequency_reduces_to_window_mass() {
        let spec = OscillatoryIntegralSpec {
            n: 0.0,
            r_tilde: 10.0,
            ell: 3.0,
            c: 1.0,
            m: 5.0,
            p: 3.0,
            r: 0.0,
        };
        let v = oscillatory_integral(&spec, PhaseSign::Plus).unwrap();
        let mass = mellin(&SmoothWindow::plateau(), Complex64::new(1.0, 0.0)).unwrap();
        assert!((v - mass).norm() < 1e-9);
    }

    #[test]
    fn paper_phase_and_amplitude_values() {
        let spec = OscillatoryIntegralSpec {
            n: 2.0,
            r_tilde: 10.0,
            ell: 3.0,
            c: 1.0,
            m: 5.0,
            p: 3.0,
            r: 1.0,
        };
        // y0 = 2*3*3/10 = 1.8 inside the plateau.
        let est = stationary_phase_estimate(&spec).unwrap();
        assert!((est.stationary_point - 1.8).abs() < 1e-14);
        // amplitude = c M sqrt(p) / sqrt(n R l) = 5 sqrt(3) / sqrt(60)
        let expect_amp = 5.0 * 3f64.sqrt() / 60f64.sqrt();
        assert!((est.amplitude - expect_amp).abs() < 1e-14);

        // phase e(n l / (c M r)) for (2, 3, 1, 5, 1): angle 2 pi * 6/5.
        let spec2 = OscillatoryIntegralSpec {
            n: 2.0,
            r_tilde: 4.0, // y0 = 2*3*1/(4*1) = 1.5 stays inside
            ell: 3.0,
            c: 1.0,
            m: 5.0,
            p: 1.0,
            r: 1.0,
        };
        let est2 = stationary_phase_estimate(&spec2).unwrap();
        assert!((est2.phase_turns - 6.0 / 5.0).abs() < 1e-14);
        assert!((est2.phase - crate::cx::e(1.2)).norm() < 1e-14);
    }

    #[test]
    fn stationary_point_outside_support_is_rejected() {
        let spec = OscillatoryIntegralSpec {
            n: 100.0,
            r_tilde: 1.0,
            ell: 1.0,
            c: 1.0,
            m: 1.0,
            p: 1.0,
            r: 1.0,
        };
        assert!(matches!(
            stationary_phase_estimate(&spec),
            Err(Error::StationaryPointOutsideSupport(_))
        ));
    }

    #[test]
    fn quadrature_matches_leading_order_at_high_frequency() {
        let spec = ladder_spec(64.0);
        assert!(
            spec.phase_second_derivative(spec.stationary_point(), PhaseSign::Plus)
                .abs()
                >= 100.0
        );
        let exact = oscillatory_integral(&spec, PhaseSign::Plus).unwrap();
        let est = stationary_phase_estimate(&spec).unwrap().value();
        let rel = (exact - est).norm() / est.norm();
        assert!(rel <= 0.2, "relative deviation {rel}");
    }

    #[test]
    fn error_decreases_along_frequency_doubling_ladder() {
        let mut last = f64::INFINITY;
        for t in [64.0, 128.0, 256.0, 512.0] {
            let spec = ladder_spec(t);
            let exact = oscillatory_integral(&spec, PhaseSign::Plus).unwrap();
            let est = stationary_phase_estimate(&spec).unwrap().value();
            let rel = (exact - est).norm() / est.norm();
            assert!(rel < last, "t={t}: {rel} !< {last}");
            last = rel;
        }
    }

    #[test]
    fn far_stationary_point_means_tiny_integral() {
        // y0 = 100 far above the support, frequency parameter ~ 2000.
        let t = 1000.0;
        let spec = OscillatoryIntegralSpec {
            n: 100.0 * t,
            r_tilde: t,
            ell: 1.0,
            c: 1.0,
            m: 1.0,
            p: 1.0,
            r: 1.0,
        };
        let v = oscillatory_integral(&spec, PhaseSign::Plus).unwrap();
        let mass = mellin(&SmoothWindow::plateau(), Complex64::new(1.0, 0.0))
            .unwrap()
            .re;
        assert!(v.norm() <= 1e-3 * mass, "integral {} too large", v.norm());
        // The minus branch has no stationary point at all.
        let w = oscillatory_integral(&spec, PhaseSign::Minus).unwrap();
        assert!(w.norm() <= 1e-3 * mass);
    }
}
