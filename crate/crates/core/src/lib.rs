//! Spontaneous decay rates of a two-level dipole emitter in free space, in
//! front of a partially transparent mirror and at the centre of a symmetric
//! planar cavity.
//!
//! Every closed-form rate is paired with an independent solid-angle
//! quadrature so the two can be checked against each other. The
//! [`dynamics`] module integrates the Jaynes-Cummings and single-rate
//! master equations and unravels the latter into quantum jumps.
//!
//! Rates are reported as the dimensionless ratio `Γ / Γ_free` wrapped in a
//! [`RateResult`] carrying the method that produced it and an error estimate.

// `!(x > 0.0)` style comparisons are deliberate: they also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cavity;
pub mod constants;
pub mod dynamics;
pub mod error;
pub mod exec;
pub mod freespace;
pub mod geometry;
pub mod kernel;
pub mod mirror;
pub mod rate;

pub use error::{Error, Result};
pub use rate::{Method, RateResult};
