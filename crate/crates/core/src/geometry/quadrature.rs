//! Product-rule quadrature over the unit sphere.
//!
//! The polar integral is taken in `xi = cos(theta)`, which absorbs the
//! `sin(theta)` Jacobian, using composite 16-point Gauss-Legendre panels
//! between caller-supplied breakpoints. The azimuthal integral is a uniform
//! trapezoid rule, spectrally accurate for the periodic integrands used
//! here, doubled per node until it settles. Panel counts double until two
//! successive levels agree to the requested tolerance.

use std::f64::consts::TAU;
use std::num::NonZeroUsize;
use std::sync::OnceLock;

use gauss_quad::legendre::GaussLegendre;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::exec;

const PANEL_ORDER: usize = 16;
const MAX_PHI_NODES: usize = 4096;

fn panel_rule() -> &'static [(f64, f64)] {
    static RULE: OnceLock<Vec<(f64, f64)>> = OnceLock::new();
    RULE.get_or_init(|| {
        let gl = GaussLegendre::new(NonZeroUsize::new(PANEL_ORDER).unwrap());
        let mut pairs = gl.as_node_weight_pairs().to_vec();
        pairs.sort_by(|a, b| a.0.total_cmp(&b.0));
        pairs
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct QuadratureOptions {
    /// Tolerance relative to `∫|integrand| dΩ`.
    pub tol: f64,
    /// Initial azimuthal node count, at least 8.
    pub resolution: usize,
    /// Phase-rate hint, proportional to `k0 d`; sets the starting node count in `xi`.
    pub phase_rate: f64,
    /// Node budget in `xi`.
    pub max_nodes: usize,
    /// Extra panel edges in `xi ∈ (-1, 1)`, e.g. around sharp resonances.
    pub breakpoints: Vec<f64>,
}

impl QuadratureOptions {
    pub fn new(tol: f64) -> Self {
        Self {
            tol,
            resolution: 8,
            phase_rate: 0.0,
            max_nodes: 1 << 21,
            breakpoints: Vec::new(),
        }
    }

    pub fn with_phase_rate(mut self, rate: f64) -> Self {
        self.phase_rate = rate;
        self
    }

    pub fn with_resolution(mut self, resolution: usize) -> Self {
        self.resolution = resolution;
        self
    }

    pub fn with_max_nodes(mut self, max_nodes: usize) -> Self {
        self.max_nodes = max_nodes;
        self
    }

    pub fn with_breakpoints(mut self, breakpoints: Vec<f64>) -> Self {
        self.breakpoints = breakpoints;
        self
    }

    fn validate(&self) -> Result<()> {
        if !(self.tol > 0.0 && self.tol.is_finite()) {
            return Err(Error::invalid(format!("quadrature tolerance must be positive, got {}", self.tol)));
        }
        if self.resolution < 8 {
            return Err(Error::invalid(format!("resolution must be at least 8, got {}", self.resolution)));
        }
        if !(self.phase_rate >= 0.0 && self.phase_rate.is_finite()) {
            return Err(Error::invalid(format!("phase rate must be finite and >= 0, got {}", self.phase_rate)));
        }
        Ok(())
    }

    /// Starting `xi` node count: `max(64, 8 ceil(rate))`.
    fn base_nodes(&self) -> usize {
        64usize.max(8 * self.phase_rate.ceil() as usize)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SphereIntegral {
    pub value: Complex64,
    /// Absolute error estimate on `value`.
    pub err_estimate: f64,
    /// `∫|integrand| dΩ` at the final level; the tolerance scale.
    pub abs_norm: f64,
    pub xi_nodes: usize,
    /// Number of panel doublings from the starting grid.
    pub refinement: u32,
}

/// Segments of `[-1, 1]` with a panel count each, at refinement level 0.
fn base_segments(opts: &QuadratureOptions) -> Vec<(f64, f64, usize)> {
    let mut edges: Vec<f64> = opts
        .breakpoints
        .iter()
        .copied()
        .filter(|x| x.is_finite() && *x > -1.0 && *x < 1.0)
        .collect();
    edges.push(-1.0);
    edges.push(1.0);
    edges.sort_by(f64::total_cmp);
    edges.dedup_by(|a, b| (*a - *b).abs() < 1e-15);

    let base_panels = opts.base_nodes().div_ceil(PANEL_ORDER) as f64;
    edges
        .windows(2)
        .map(|w| {
            let frac = (w[1] - w[0]) / 2.0;
            (w[0], w[1], ((base_panels * frac).ceil() as usize).max(1))
        })
        .collect()
}

fn nodes_at(segments: &[(f64, f64, usize)], refinement: u32) -> Vec<(f64, f64)> {
    let rule = panel_rule();
    let mut out = Vec::new();
    for &(a, b, p) in segments {
        let panels = p << refinement;
        let h = (b - a) / panels as f64;
        for i in 0..panels {
            let lo = a + i as f64 * h;
            for &(x, w) in rule {
                out.push((lo + 0.5 * h * (x + 1.0), 0.5 * h * w));
            }
        }
    }
    out
}

struct Ring {
    value: Complex64,
    abs: f64,
    err: f64,
}

/// Trapezoid rule in `phi` at fixed `xi`, doubled until stable.
fn ring<F>(integrand: &F, xi: f64, m0: usize, tol: f64) -> Ring
where
    F: Fn(f64, f64) -> Complex64,
{
    let theta = xi.clamp(-1.0, 1.0).acos();
    let mut m = m0;
    let mut sum = Complex64::new(0.0, 0.0);
    let mut abs_sum = 0.0;
    for j in 0..m {
        let v = integrand(theta, TAU * j as f64 / m as f64);
        sum += v;
        abs_sum += v.norm();
    }
    let mut value = sum * (TAU / m as f64);
    let mut abs = abs_sum * (TAU / m as f64);
    loop {
        let m2 = 2 * m;
        for j in (1..m2).step_by(2) {
            let v = integrand(theta, TAU * j as f64 / m2 as f64);
            sum += v;
            abs_sum += v.norm();
        }
        let refined = sum * (TAU / m2 as f64);
        let err = (refined - value).norm();
        value = refined;
        abs = abs.max(abs_sum * (TAU / m2 as f64));
        m = m2;
        if err <= 1e-3 * tol * abs || err <= 4.0 * f64::EPSILON * abs || m >= MAX_PHI_NODES {
            return Ring { value, abs, err };
        }
    }
}

fn level<F>(integrand: &F, opts: &QuadratureOptions, segments: &[(f64, f64, usize)], refinement: u32) -> (Complex64, f64, f64, usize)
where
    F: Fn(f64, f64) -> Complex64 + Sync,
{
    let nodes = nodes_at(segments, refinement);
    let rings = exec::map_slice(&nodes, |&(xi, _)| ring(integrand, xi, opts.resolution, opts.tol));
    let mut value = Complex64::new(0.0, 0.0);
    let mut abs = 0.0;
    let mut phi_err = 0.0;
    for (&(_, w), r) in nodes.iter().zip(&rings) {
        value += r.value * w;
        abs += r.abs * w;
        phi_err += r.err * w;
    }
    (value, abs, phi_err, nodes.len())
}

/// `∫_0^π dθ sin θ ∫_0^{2π} dφ integrand(θ, φ)` to relative tolerance
/// `opts.tol` (measured against `∫|integrand| dΩ`).
pub fn solid_angle_integrate<F>(integrand: F, opts: &QuadratureOptions) -> Result<SphereIntegral>
where
    F: Fn(f64, f64) -> Complex64 + Sync,
{
    opts.validate()?;
    let segments = base_segments(opts);
    let (mut coarse, _, _, mut nodes) = level(&integrand, opts, &segments, 0);
    let mut refinement = 0u32;
    loop {
        refinement += 1;
        let (fine, abs, phi_err, n) = level(&integrand, opts, &segments, refinement);
        let floor = 16.0 * f64::EPSILON * abs;
        let err = ((fine - coarse).norm() + phi_err).max(floor);
        if err <= opts.tol * abs || abs == 0.0 {
            return Ok(SphereIntegral {
                value: fine,
                err_estimate: err,
                abs_norm: abs,
                xi_nodes: n,
                refinement,
            });
        }
        if 2 * n > opts.max_nodes {
            return Err(Error::NonConvergence {
                err_estimate: err / abs,
                tol: opts.tol,
                nodes: n.max(nodes),
            });
        }
        coarse = fine;
        nodes = n;
    }
}

/// Single evaluation at a fixed refinement level; `err_estimate` then only
/// covers the azimuthal rule.
pub fn solid_angle_fixed<F>(integrand: F, opts: &QuadratureOptions, refinement: u32) -> Result<SphereIntegral>
where
    F: Fn(f64, f64) -> Complex64 + Sync,
{
    opts.validate()?;
    let segments = base_segments(opts);
    let (value, abs, phi_err, n) = level(&integrand, opts, &segments, refinement);
    Ok(SphereIntegral {
        value,
        err_estimate: phi_err,
        abs_norm: abs,
        xi_nodes: n,
        refinement,
    })
}
