//! Propagation directions, polarisation frames, dipole projections and the
//! solid-angle quadrature engine shared by every rate oracle.
//!
//! The mirror normal is the x axis: a direction with polar angle `theta`
//! has `s_x = cos(theta)`, and the default dipole `(0, 0, 1)` lies parallel
//! to the mirror planes.

mod basis;
mod quadrature;

pub use basis::{basis_vectors, dipole_weight, Direction, DipoleOrientation, PolarizationBasis, Vec3};
pub use quadrature::{
    solid_angle_fixed, solid_angle_integrate, QuadratureOptions, SphereIntegral,
};
