//! Adaptive quadrature: bisection with a fixed 15-point Gauss-Legendre rule
//! per panel. Nodes are generated once by Newton iteration on the Legendre
//! polynomial, which avoids hand-copied tables.

use num_complex::Complex64;
use std::sync::OnceLock;

use crate::error::{Error, Result};

const GL_ORDER: usize = 15;

fn legendre_and_derivative(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, dp)
}

fn gauss_legendre() -> &'static (Vec<f64>, Vec<f64>) {
    static RULE: OnceLock<(Vec<f64>, Vec<f64>)> = OnceLock::new();
    RULE.get_or_init(|| {
        let n = GL_ORDER;
        let mut nodes = vec![0.0; n];
        let mut weights = vec![0.0; n];
        for i in 0..n {
            // Chebyshev-style initial guess, then Newton.
            let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
            for _ in 0..100 {
                let (p, dp) = legendre_and_derivative(n, x);
                let dx = p / dp;
                x -= dx;
                if dx.abs() < 1e-16 {
                    break;
                }
            }
            let (_, dp) = legendre_and_derivative(n, x);
            nodes[i] = x;
            weights[i] = 2.0 / ((1.0 - x * x) * dp * dp);
        }
        (nodes, weights)
    })
}

fn gl_panel<F: Fn(f64) -> Complex64>(f: &F, a: f64, b: f64) -> Complex64 {
    let (nodes, weights) = gauss_legendre();
    let mid = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let mut acc = Complex64::new(0.0, 0.0);
    for (x, w) in nodes.iter().zip(weights) {
        acc += f(mid + half * x) * *w;
    }
    acc * half
}

struct Panel {
    a: f64,
    b: f64,
    whole: Complex64,
    depth: u32,
}

/// Integrate a complex-valued function over `[a, b]` to the requested
/// absolute accuracy. Interior `seeds` force initial panel boundaries, which
/// keeps piecewise-smooth integrands and stationary points honest.
pub fn adaptive_complex_seeded<F: Fn(f64) -> Complex64>(
    f: &F,
    a: f64,
    b: f64,
    seeds: &[f64],
    tol: f64,
    max_depth: u32,
) -> Result<Complex64> {
    if a == b {
        return Ok(Complex64::new(0.0, 0.0));
    }
    let mut cuts: Vec<f64> = vec![a, b];
    cuts.extend(seeds.iter().copied().filter(|x| *x > a && *x < b));
    cuts.sort_by(|p, q| p.partial_cmp(q).unwrap());
    cuts.dedup();

    let mut stack: Vec<Panel> = cuts
        .windows(2)
        .map(|w| Panel {
            a: w[0],
            b: w[1],
            whole: gl_panel(f, w[0], w[1]),
            depth: 0,
        })
        .collect();
    let mut total = Complex64::new(0.0, 0.0);
    while let Some(p) = stack.pop() {
        let mid = 0.5 * (p.a + p.b);
        let left = gl_panel(f, p.a, mid);
        let right = gl_panel(f, mid, p.b);
        let refined = left + right;
        let err = (refined - p.whole).norm();
        // Per-panel budget proportional to its share of the interval, with a
        // machine-precision floor so boundary slivers can terminate.
        let share = (p.b - p.a) / (b - a);
        let budget = tol * share;
        if err <= budget || err <= 1e-16 * (1.0 + refined.norm()) {
            total += refined;
        } else {
            if p.depth + 1 > max_depth {
                return Err(Error::QuadratureNonConvergence {
                    tol,
                    depth: max_depth,
                });
            }
            stack.push(Panel {
                a: p.a,
                b: mid,
                whole: left,
                depth: p.depth + 1,
            });
            stack.push(Panel {
                a: mid,
                b: p.b,
                whole: right,
                depth: p.depth + 1,
            });
        }
    }
    Ok(total)
}

pub fn adaptive_complex<F: Fn(f64) -> Complex64>(
    f: &F,
    a: f64,
    b: f64,
    tol: f64,
    max_depth: u32,
) -> Result<Complex64> {
    adaptive_complex_seeded(f, a, b, &[], tol, max_depth)
}

pub fn adaptive_real<F: Fn(f64) -> f64>(
    f: &F,
    a: f64,
    b: f64,
    tol: f64,
    max_depth: u32,
) -> Result<f64> {
    let g = |x: f64| Complex64::new(f(x), 0.0);
    Ok(adaptive_complex(&g, a, b, tol, max_depth)?.re)
}
