use std::f64::consts::{PI, TAU};

use crate::error::{Error, Result};

pub type Vec3 = [f64; 3];

fn dot(a: &Vec3, b: &Vec3) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

/// Propagation direction in polar coordinates about the x axis.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Direction {
    theta: f64,
    phi: f64,
}

impl Direction {
    /// Builds a direction, folding any angles back into `theta ∈ [0, π]`,
    /// `phi ∈ [0, 2π)`.
    pub fn new(theta: f64, phi: f64) -> Self {
        let mut theta = theta.rem_euclid(TAU);
        let mut phi = phi;
        if theta > PI {
            theta = TAU - theta;
            phi += PI;
        }
        let mut phi = phi.rem_euclid(TAU);
        if phi >= TAU {
            phi = 0.0;
        }
        Self { theta, phi }
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    pub fn phi(&self) -> f64 {
        self.phi
    }

    /// Unit propagation vector `s`.
    pub fn unit(&self) -> Vec3 {
        let (st, ct) = self.theta.sin_cos();
        let (sp, cp) = self.phi.sin_cos();
        [ct, cp * st, sp * st]
    }
}

/// The orthonormal triple `{s, e_H, e_V}` for one direction.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PolarizationBasis {
    pub s: Vec3,
    pub e_h: Vec3,
    pub e_v: Vec3,
}

pub fn basis_vectors(dir: Direction) -> PolarizationBasis {
    let (st, ct) = dir.theta.sin_cos();
    let (sp, cp) = dir.phi.sin_cos();
    PolarizationBasis {
        s: [ct, cp * st, sp * st],
        e_h: [0.0, sp, -cp],
        e_v: [st, -cp * ct, -sp * ct],
    }
}

/// Real unit dipole orientation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DipoleOrientation(Vec3);

impl DipoleOrientation {
    /// Normalises `v`; fails on a zero or non-finite vector.
    pub fn new(v: Vec3) -> Result<Self> {
        let norm = dot(&v, &v).sqrt();
        if !norm.is_finite() || norm == 0.0 {
            return Err(Error::invalid(format!("dipole orientation {v:?} cannot be normalised")));
        }
        Ok(Self([v[0] / norm, v[1] / norm, v[2] / norm]))
    }

    pub fn vector(&self) -> Vec3 {
        self.0
    }
}

impl Default for DipoleOrientation {
    fn default() -> Self {
        Self([0.0, 0.0, 1.0])
    }
}

/// `(|D̂·e_H|², |D̂·e_V|²)` for the given direction.
pub fn dipole_weight(dhat: &DipoleOrientation, dir: Direction) -> (f64, f64) {
    let b = basis_vectors(dir);
    let h = dot(&dhat.0, &b.e_h);
    let v = dot(&dhat.0, &b.e_v);
    (h * h, v * v)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;
    use std::f64::consts::FRAC_PI_2;

    fn assert_vec(a: Vec3, b: Vec3) {
        for i in 0..3 {
            assert_abs_diff_eq!(a[i], b[i], epsilon = 1e-15);
        }
    }

    #[test]
    fn basis_at_pole() {
        let b = basis_vectors(Direction::new(0.0, 0.0));
        assert_vec(b.s, [1.0, 0.0, 0.0]);
        assert_vec(b.e_h, [0.0, 0.0, -1.0]);
        assert_vec(b.e_v, [0.0, -1.0, 0.0]);
    }

    #[test]
    fn basis_at_equator() {
        let b = basis_vectors(Direction::new(FRAC_PI_2, 0.0));
        assert_vec(b.s, [0.0, 1.0, 0.0]);
        assert_vec(b.e_h, [0.0, 0.0, -1.0]);
        assert_vec(b.e_v, [1.0, 0.0, 0.0]);
    }

    #[test]
    fn out_of_range_angles_fold() {
        let d = Direction::new(-0.3, 7.0);
        assert!((0.0..=PI).contains(&d.theta()));
        assert!((0.0..TAU).contains(&d.phi()));
        // same physical direction
        let raw = [(-0.3f64).cos(), 7.0f64.cos() * (-0.3f64).sin(), 7.0f64.sin() * (-0.3f64).sin()];
        assert_vec(d.unit(), raw);
    }

    #[test]
    fn dipole_parallel_to_s_has_no_weight() {
        let (h, v) = dipole_weight(&DipoleOrientation::default(), Direction::new(FRAC_PI_2, FRAC_PI_2));
        assert_abs_diff_eq!(h + v, 0.0, epsilon = 1e-15);
    }

    #[test]
    fn dipole_perpendicular_to_s_has_full_weight() {
        for phi in [0.0, 0.7, 2.0, 5.5] {
            let (h, v) = dipole_weight(&DipoleOrientation::default(), Direction::new(0.0, phi));
            assert_abs_diff_eq!(h + v, 1.0, epsilon = 1e-15);
        }
    }

    #[test]
    fn default_dipole_weight_matches_closed_expression() {
        let (theta, phi) = (1.1, 0.4);
        let (h, v) = dipole_weight(&DipoleOrientation::default(), Direction::new(theta, phi));
        let expect = phi.cos().powi(2) + phi.sin().powi(2) * theta.cos().powi(2);
        assert_abs_diff_eq!(h + v, expect, epsilon = 1e-15);
    }

    #[test]
    fn zero_dipole_rejected() {
        assert!(DipoleOrientation::new([0.0; 3]).is_err());
    }

    proptest! {
        #[test]
        fn basis_is_orthonormal(theta in 0.0..PI, phi in 0.0..TAU) {
            let b = basis_vectors(Direction::new(theta, phi));
            let vs = [b.s, b.e_h, b.e_v];
            for i in 0..3 {
                for j in 0..3 {
                    let want = if i == j { 1.0 } else { 0.0 };
                    prop_assert!((dot(&vs[i], &vs[j]) - want).abs() < 1e-12);
                }
            }
        }

        #[test]
        fn dipole_weights_are_complete(
            theta in 0.0..PI, phi in 0.0..TAU,
            dx in -1.0..1.0f64, dy in -1.0..1.0f64, dz in -1.0..1.0f64,
        ) {
            prop_assume!(dx * dx + dy * dy + dz * dz > 1e-6);
            let d = DipoleOrientation::new([dx, dy, dz]).unwrap();
            let dir = Direction::new(theta, phi);
            let (h, v) = dipole_weight(&d, dir);
            let along = dot(&d.vector(), &dir.unit());
            prop_assert!((h + v + along * along - 1.0).abs() < 1e-12);
        }
    }
}
