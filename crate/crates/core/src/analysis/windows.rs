//! Smooth compactly supported cutoff windows with exact derivatives.
//!
//! Two shapes are provided. The bump `W` lives on `[1, 2]` and is the
//! classical `exp(-1/((x-1)(2-x)))`, unnormalized, so its peak value at
//! `x = 3/2` is `exp(-4)`. The plateau `V` lives on `[2/3, 3]`, equals `1`
//! exactly on `[1, 2]`, and ramps up and down through the smooth step
//! `s(t) = sigma(t) / (sigma(t) + sigma(1-t))` with `sigma(t) = exp(-1/t)`.
//!
//! Derivatives up to order four come from the order-4 Taylor jets of the
//! same closed forms, not from finite differences.

use num_complex::Complex64;

use super::jets::Jet5;
use super::quad::adaptive_complex_seeded;
use crate::error::Result;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum WindowKind {
    /// Bump supported on `[1, 2]`.
    Bump,
    /// Plateau supported on `[2/3, 3]`, identically one on `[1, 2]`.
    Plateau,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SmoothWindow {
    kind: WindowKind,
}

fn sigma_jet(t: Jet5) -> Jet5 {
    // exp(-1/t) extended by zero for t <= 0; underflow past t ~ 1/700 makes
    // the zero extension seamless in f64.
    if t.value() <= 0.0 {
        return Jet5::zero();
    }
    t.recip().neg().exp()
}

fn smooth_step_jet(t: Jet5) -> Jet5 {
    if t.value() <= 0.0 {
        return Jet5::zero();
    }
    if t.value() >= 1.0 {
        return Jet5::constant(1.0);
    }
    let a = sigma_jet(t);
    let b = sigma_jet(Jet5::constant(1.0).sub(&t));
    a.div(&a.add(&b))
}

/// The scalar smooth step: 0 for `t <= 0`, 1 for `t >= 1`, strictly
/// monotone and infinitely differentiable in between, with
/// `s(t) + s(1-t) = 1`.
pub fn smooth_step(t: f64) -> f64 {
    smooth_step_jet(Jet5::variable(t)).value()
}

/// Smooth one-sided cutoff: 1 on `[0, 2]`, a smooth ramp down on `[2, 3]`,
/// 0 past 3. Used for smoothly truncated Dirichlet series.
pub fn upper_cutoff(t: f64) -> f64 {
    if t <= 2.0 {
        1.0
    } else if t >= 3.0 {
        0.0
    } else {
        smooth_step(3.0 - t)
    }
}

impl SmoothWindow {
    pub fn bump() -> Self {
        Self {
            kind: WindowKind::Bump,
        }
    }

    pub fn plateau() -> Self {
        Self {
            kind: WindowKind::Plateau,
        }
    }

    pub fn kind(&self) -> WindowKind {
        self.kind
    }

    pub fn support(&self) -> (f64, f64) {
        match self.kind {
            WindowKind::Bump => (1.0, 2.0),
            WindowKind::Plateau => (2.0 / 3.0, 3.0),
        }
    }

    /// Piecewise-analytic junction points, used to seed quadrature panels.
    pub fn seeds(&self) -> Vec<f64> {
        match self.kind {
            WindowKind::Bump => vec![1.25, 1.5, 1.75],
            WindowKind::Plateau => vec![5.0 / 6.0, 1.0, 1.5, 2.0, 2.5],
        }
    }

    /// Full jet of the window at `x`.
    pub fn jet(&self, x: f64) -> Jet5 {
        match self.kind {
            WindowKind::Bump => {
                if x <= 1.0 || x >= 2.0 {
                    return Jet5::zero();
                }
                let xj = Jet5::variable(x);
                let u = xj
                    .sub(&Jet5::constant(1.0))
                    .mul(&Jet5::constant(2.0).sub(&xj));
                u.recip().neg().exp()
            }
            WindowKind::Plateau => {
                if x <= 2.0 / 3.0 || x >= 3.0 {
                    return Jet5::zero();
                }
                if (1.0..=2.0).contains(&x) {
                    return Jet5::constant(1.0);
                }
                let xj = Jet5::variable(x);
                if x < 1.0 {
                    // ramp up over [2/3, 1]
                    smooth_step_jet(xj.scale(3.0).sub(&Jet5::constant(2.0)))
                } else {
                    // ramp down over [2, 3]
                    smooth_step_jet(Jet5::constant(3.0).sub(&xj))
                }
            }
        }
    }

    pub fn eval(&self, x: f64) -> f64 {
        self.jet(x).value()
    }

    /// The `j`-th derivative at `x`, `j <= 4`.
    pub fn eval_derivative(&self, x: f64, j: usize) -> f64 {
        assert!(j <= 4, "derivatives supported up to order 4");
        self.jet(x).derivative(j)
    }
}

/// Value of the `j`-th derivative of the window at `x`.
pub fn window_eval(window: &SmoothWindow, x: f64, j: usize) -> f64 {
    window.eval_derivative(x, j)
}

/// Mellin transform `\int w(x) x^{s-1} dx`, entire in `s` thanks to the
/// compact support, by adaptive quadrature to absolute accuracy `1e-10`.
pub fn mellin(window: &SmoothWindow, s: Complex64) -> Result<Complex64> {
    let (lo, hi) = window.support();
    let f = |x: f64| {
        let w = window.eval(x);
        if w == 0.0 {
            return Complex64::new(0.0, 0.0);
        }
        // x^{s-1} = exp((s-1) ln x)
        let log_x = x.ln();
        let z = (s - Complex64::new(1.0, 0.0)) * log_x;
        w * z.exp()
    };
    adaptive_complex_seeded(&f, lo, hi, &window.seeds(), 1e-11, 48)
}
