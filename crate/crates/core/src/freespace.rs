//! Free-space spontaneous decay rate, the normalisation for every ratio in
//! this crate.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::constants::{ELEMENTARY_CHARGE, EPSILON_0, HBAR, SPEED_OF_LIGHT};
use crate::error::{Error, Result};
use crate::geometry::{dipole_weight, solid_angle_integrate, Direction, DipoleOrientation, QuadratureOptions};

/// A two-level emitter: transition frequency, dipole length `‖D₀₁‖` (the
/// electron charge is factored out) and dipole orientation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EmitterSpec {
    omega0: f64,
    dipole_magnitude: f64,
    dhat: DipoleOrientation,
}

impl EmitterSpec {
    pub fn new(omega0: f64, dipole_magnitude: f64, dhat: DipoleOrientation) -> Result<Self> {
        if !(omega0 > 0.0 && omega0.is_finite()) {
            return Err(Error::invalid(format!("omega0 must be positive, got {omega0}")));
        }
        if !(dipole_magnitude > 0.0 && dipole_magnitude.is_finite()) {
            return Err(Error::invalid(format!("dipole magnitude must be positive, got {dipole_magnitude}")));
        }
        Ok(Self {
            omega0,
            dipole_magnitude,
            dhat,
        })
    }

    /// Emitter with the given vacuum wavelength (m).
    pub fn from_wavelength(lambda0: f64, dipole_magnitude: f64, dhat: DipoleOrientation) -> Result<Self> {
        if !(lambda0 > 0.0) {
            return Err(Error::invalid(format!("wavelength must be positive, got {lambda0}")));
        }
        Self::new(2.0 * PI * SPEED_OF_LIGHT / lambda0, dipole_magnitude, dhat)
    }

    pub fn omega0(&self) -> f64 {
        self.omega0
    }

    pub fn dipole_magnitude(&self) -> f64 {
        self.dipole_magnitude
    }

    pub fn dhat(&self) -> DipoleOrientation {
        self.dhat
    }

    pub fn k0(&self) -> f64 {
        self.omega0 / SPEED_OF_LIGHT
    }

    pub fn lambda0(&self) -> f64 {
        2.0 * PI * SPEED_OF_LIGHT / self.omega0
    }

    fn coupling(&self) -> f64 {
        ELEMENTARY_CHARGE.powi(2) * self.dipole_magnitude.powi(2) * self.omega0.powi(3)
            / (SPEED_OF_LIGHT.powi(3) * EPSILON_0 * HBAR)
    }
}

/// `e²‖D₀₁‖²ω₀³ / (3π c³ ε₀ ħ)` in 1/s.
pub fn gamma_free_si(em: &EmitterSpec) -> f64 {
    em.coupling() / (3.0 * PI)
}

/// Same rate from the angular form: prefactor `e²‖D₀₁‖²ω₀³ / (8π² c³ ε₀ ħ)`
/// times the sphere integral of `Σ_λ |D̂·e_λ|²`.
pub fn gamma_free_quadrature(em: &EmitterSpec, tol: f64) -> Result<f64> {
    let angular = angular_weight_integral(&em.dhat, tol)?;
    Ok(em.coupling() / (8.0 * PI * PI) * angular)
}

/// `∫ dΩ Σ_λ |D̂·e_λ|²`, equal to `8π/3` for any orientation.
pub fn angular_weight_integral(dhat: &DipoleOrientation, tol: f64) -> Result<f64> {
    let integrand = |theta: f64, phi: f64| {
        let (h, v) = dipole_weight(dhat, Direction::new(theta, phi));
        Complex64::new(h + v, 0.0)
    };
    let r = solid_angle_integrate(integrand, &QuadratureOptions::new(tol))?;
    Ok(r.value.re)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn reference() -> EmitterSpec {
        // Rb D2-like: 780 nm, 2.5 Å dipole length
        EmitterSpec::from_wavelength(780e-9, 2.5e-10, DipoleOrientation::default()).unwrap()
    }

    #[test]
    fn cubic_in_frequency() {
        let a = reference();
        let b = EmitterSpec::new(2.0 * a.omega0(), a.dipole_magnitude(), a.dhat()).unwrap();
        assert!((gamma_free_si(&b) / gamma_free_si(&a) - 8.0).abs() < 1e-14);
    }

    #[test]
    fn quadratic_in_dipole() {
        let a = reference();
        let b = EmitterSpec::new(a.omega0(), 2.0 * a.dipole_magnitude(), a.dhat()).unwrap();
        assert!((gamma_free_si(&b) / gamma_free_si(&a) - 4.0).abs() < 1e-14);
    }

    #[test]
    fn reference_rate_is_tens_of_megahertz() {
        let g = gamma_free_si(&reference());
        assert!(g > 1e7 && g < 1e8, "{g}");
    }

    #[test]
    fn quadrature_matches_closed_form() {
        let em = reference();
        let ratio = gamma_free_quadrature(&em, 1e-12).unwrap() / gamma_free_si(&em);
        assert!((ratio - 1.0).abs() < 1e-9);
    }

    #[test]
    fn rotated_dipole_is_isotropic() {
        let x = DipoleOrientation::new([1.0, 0.0, 0.0]).unwrap();
        let em = EmitterSpec::new(reference().omega0(), 2.5e-10, x).unwrap();
        let ratio = gamma_free_quadrature(&em, 1e-12).unwrap() / gamma_free_si(&em);
        assert!((ratio - 1.0).abs() < 1e-9);
    }

    #[test]
    fn angular_integral_is_eight_pi_thirds() {
        let a = angular_weight_integral(&DipoleOrientation::default(), 1e-12).unwrap();
        assert!((a - 8.0 * PI / 3.0).abs() < 1e-10);
    }

    #[test]
    fn rejects_invalid_spec() {
        let d = DipoleOrientation::default();
        assert!(EmitterSpec::new(0.0, 1e-10, d).is_err());
        assert!(EmitterSpec::new(1e15, -1.0, d).is_err());
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]
        #[test]
        fn routes_agree_for_random_specs(
            omega in 1e13..1e16f64, dlen in 1e-12..1e-9f64,
            dx in -1.0..1.0f64, dy in -1.0..1.0f64, dz in -1.0..1.0f64,
        ) {
            prop_assume!(dx * dx + dy * dy + dz * dz > 1e-4);
            let em = EmitterSpec::new(omega, dlen, DipoleOrientation::new([dx, dy, dz]).unwrap()).unwrap();
            let si = gamma_free_si(&em);
            prop_assert!(si > 0.0);
            let q = gamma_free_quadrature(&em, 1e-12).unwrap();
            prop_assert!((q / si - 1.0).abs() < 1e-9);
        }
    }
}
