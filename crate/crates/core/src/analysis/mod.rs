//! Analytic kernels: smooth compactly supported windows with exact
//! derivatives, adaptive quadrature, Mellin transforms, integer-order Bessel
//! functions, oscillatory integrals with a stationary-phase comparison,
//! Hurwitz zeta, and a Poisson-summation checker.

mod bessel;
mod hurwitz;
mod jets;
mod oscillatory;
mod poisson;
mod quad;
mod windows;

pub use bessel::{bessel_j, bessel_j_series_bound, bessel_j_weight, BesselOrder};
pub use hurwitz::hurwitz_zeta;
pub use jets::Jet5;
pub use oscillatory::{
    oscillatory_integral, stationary_phase_estimate, OscillatoryIntegralSpec, PhaseSign,
    StationaryPhaseValue,
};
pub use poisson::{poisson_check, PoissonCheckReport};
pub use quad::{adaptive_complex, adaptive_real};
pub use windows::{mellin, smooth_step, upper_cutoff, window_eval, SmoothWindow, WindowKind};
