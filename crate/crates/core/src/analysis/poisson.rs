//! Poisson summation over a residue class, checked numerically.
//!
//! For a dilated window `f(x) = w(x / scale)` the identity is
//! `sum_{r = a mod q} f(r) = (1/q) sum_m fhat(m/q) e(a m / q)` with
//! `fhat(xi) = int f(x) e(-xi x) dx`. Both sides are computed independently:
//! the left by direct enumeration over the support, the right by adaptive
//! quadrature of each Fourier coefficient, truncated once the transform
//! tail estimate drops below `1e-12`.

use num_complex::Complex64;
use serde::Serialize;

use super::quad::adaptive_complex_seeded;
use super::windows::SmoothWindow;
use crate::cx::{e, ComplexSum};
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, Serialize)]
pub struct PoissonCheckReport {
    pub scale: f64,
    pub modulus: u64,
    pub residue: u64,
    pub lhs_re: f64,
    pub lhs_im: f64,
    pub rhs_re: f64,
    pub rhs_im: f64,
    pub discrepancy: f64,
    pub modes_used: u64,
    pub truncation_bound: f64,
}

fn window_transform(window: &SmoothWindow, scale: f64, xi: f64) -> Result<Complex64> {
    let (lo, hi) = window.support();
    let f = |x: f64| window.eval(x / scale) * e(-xi * x);
    let seeds: Vec<f64> = window.seeds().iter().map(|s| s * scale).collect();
    adaptive_complex_seeded(&f, lo * scale, hi * scale, &seeds, 1e-13, 52)
}

/// Compare both sides of Poisson summation for `w(x/scale)` on the class
/// `r = residue mod modulus`.
pub fn poisson_check(
    window: &SmoothWindow,
    scale: f64,
    residue: u64,
    modulus: u64,
) -> Result<PoissonCheckReport> {
    if modulus == 0 {
        return Err(Error::InvalidParameter("zero modulus".into()));
    }
    if scale <= 0.0 {
        return Err(Error::InvalidParameter("scale must be positive".into()));
    }
    let residue = residue % modulus;
    let (lo, hi) = window.support();

    // Left side: enumerate integers in the support of the dilation.
    let mut lhs = ComplexSum::new();
    let start = (lo * scale).floor() as i64 - 1;
    let stop = (hi * scale).ceil() as i64 + 1;
    let mut r = start;
    while r <= stop {
        if (r.rem_euclid(modulus as i64)) as u64 == residue {
            lhs.add(Complex64::new(window.eval(r as f64 / scale), 0.0));
        }
        r += 1;
    }

    // Right side: (1/q) sum_m fhat(m/q) e(a m/q), symmetric truncation.
    let q = modulus as f64;
    let mut rhs = ComplexSum::new();
    rhs.add(window_transform(window, scale, 0.0)? / q);
    let mut m = 1u64;
    let mut consecutive_small = 0u32;
    let mut last_mag;
    loop {
        let xi = m as f64 / q;
        let plus = window_transform(window, scale, xi)?;
        let minus = window_transform(window, scale, -xi)?;
        let twist = e(residue as f64 * m as f64 / q);
        rhs.add(plus * twist / q);
        rhs.add(minus * twist.conj() / q);
        last_mag = (plus.norm() + minus.norm()) / q;
        if last_mag < 1e-13 {
            consecutive_small += 1;
            if consecutive_small >= 3 {
                break;
            }
        } else {
            consecutive_small = 0;
        }
        m += 1;
        if m > 5000 {
            return Err(Error::QuadratureNonConvergence {
                tol: 1e-12,
                depth: 0,
            });
        }
    }
    // Smooth transforms decay faster than m^{-4} here; bound the dropped
    // tail by a geometric-style extrapolation of the last kept mode.
    let truncation_bound = last_mag * (m as f64 / 3.0 + 1.0) * 2.0;

    let l = lhs.value();
    let rr = rhs.value();
    Ok(PoissonCheckReport {
        scale,
        modulus,
        residue,
        lhs_re: l.re,
        lhs_im: l.im,
        rhs_re: rr.re,
        rhs_im: rr.im,
        discrepancy: (l - rr).norm(),
        modes_used: m,
        truncation_bound,
    })
}
