//! Emitter at distance `d` in front of one partially transparent planar
//! mirror, dipole parallel to the mirror.
//!
//! `Γ_mir/Γ_free = 1 + (3 Re r / 2) f(2 k0 d)`, with `f` from [`crate::kernel`],
//! and independently the sphere integral of the interference factor
//! `e^{-2i k0 d cos θ}` weighted by the dipole pattern.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::geometry::{dipole_weight, solid_angle_integrate, Direction, DipoleOrientation, QuadratureOptions};
use crate::kernel::f_kernel;
use crate::rate::{Method, RateResult};

/// Lossless interface: complex reflection rate `r`, real transmission
/// `t = sqrt(1 − |r|²)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MirrorSpec {
    r: Complex64,
    t: f64,
}

impl MirrorSpec {
    pub fn new(r: Complex64) -> Result<Self> {
        let r2 = r.norm_sqr();
        if !r2.is_finite() || r2 > 1.0 + 1e-12 {
            return Err(Error::invalid(format!("|r| must be <= 1, got {}", r.norm())));
        }
        Ok(Self {
            r,
            t: (1.0 - r2).max(0.0).sqrt(),
        })
    }

    pub fn real(r: f64) -> Result<Self> {
        Self::new(Complex64::new(r, 0.0))
    }

    pub fn r(&self) -> Complex64 {
        self.r
    }

    pub fn t(&self) -> f64 {
        self.t
    }

    /// Only `Re r` enters the rate; the imaginary part is kept for reporting.
    pub fn gamma_closed(&self, k0d: f64) -> Result<RateResult> {
        gamma_mirror_closed(self.r.re, k0d)
    }

    pub fn gamma_quadrature(&self, k0d: f64, tol: f64) -> Result<RateResult> {
        gamma_mirror_quadrature(self.r.re, k0d, tol)
    }
}

fn check(re_r: f64, k0d: f64) -> Result<()> {
    if !(re_r.abs() <= 1.0) {
        return Err(Error::invalid(format!("Re r must lie in [-1, 1], got {re_r}")));
    }
    if !(k0d >= 0.0 && k0d.is_finite()) {
        return Err(Error::invalid(format!("k0 d must be finite and >= 0, got {k0d}")));
    }
    Ok(())
}

pub fn gamma_mirror_closed(re_r: f64, k0d: f64) -> Result<RateResult> {
    check(re_r, k0d)?;
    Ok(RateResult::exact(closed_ratio_with_kernel(re_r, k0d, f_kernel), Method::ClosedForm))
}

/// The closed form with a caller-supplied kernel in place of `f`. Used by
/// the self-check to confirm that a perturbed kernel is caught.
pub fn closed_ratio_with_kernel(re_r: f64, k0d: f64, kernel: impl Fn(f64) -> f64) -> f64 {
    1.0 + 1.5 * re_r * kernel(2.0 * k0d)
}

pub fn gamma_mirror_quadrature(re_r: f64, k0d: f64, tol: f64) -> Result<RateResult> {
    check(re_r, k0d)?;
    let dhat = DipoleOrientation::default();
    let phase = 2.0 * k0d;
    let integrand = |theta: f64, phi: f64| {
        let (h, v) = dipole_weight(&dhat, Direction::new(theta, phi));
        Complex64::from_polar(h + v, -phase * theta.cos())
    };
    let opts = QuadratureOptions::new(tol).with_phase_rate(phase);
    let q = solid_angle_integrate(integrand, &opts)?;
    let scale = 3.0 * re_r / (8.0 * PI);
    Ok(RateResult::new(
        1.0 + scale * q.value.re,
        Method::Quadrature,
        scale.abs() * q.err_estimate,
    ))
}
