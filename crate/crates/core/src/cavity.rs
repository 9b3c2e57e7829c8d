//! Emitter at the centre of a symmetric planar cavity with real mirror
//! reflection rate `r` and transmission `t = sqrt(1 − r²)`.
//!
//! Three routes to `Γ_cav/Γ_free`:
//!
//! * the summed interference kernel integrated over the sphere
//!   ([`gamma_cavity_quadrature`]),
//! * the truncated double bounce series in `n` and `m = n − n'`, each term
//!   integrated analytically into [`f_kernel`] ([`gamma_cavity_series`]),
//! * analytic limits for subwavelength (`k0 d ≪ 1`) and optical
//!   (`k0 d ≫ 1`) cavities.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::exec;
use crate::geometry::{dipole_weight, solid_angle_integrate, Direction, DipoleOrientation, QuadratureOptions};
pub use crate::kernel::f_kernel;
use crate::rate::{Method, RateResult};

/// Symmetric cavity: mirror reflection rate and `k0 d`, the phase
/// `ω₀ d / c` across the mirror separation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CavitySpec {
    r_mir: f64,
    k0d: f64,
}

impl CavitySpec {
    /// `|r_mir| <= 1` and `k0d >= 0`. The endpoints `r = ±1` are only
    /// accepted by the analytic limits.
    pub fn new(r_mir: f64, k0d: f64) -> Result<Self> {
        if !(r_mir.abs() <= 1.0) {
            return Err(Error::invalid(format!("mirror reflection rate must lie in [-1, 1], got {r_mir}")));
        }
        if !(k0d >= 0.0 && k0d.is_finite()) {
            return Err(Error::invalid(format!("k0 d must be finite and >= 0, got {k0d}")));
        }
        Ok(Self { r_mir, k0d })
    }

    pub fn r_mir(&self) -> f64 {
        self.r_mir
    }

    pub fn k0d(&self) -> f64 {
        self.k0d
    }

    pub fn t_mir_sq(&self) -> f64 {
        1.0 - self.r_mir * self.r_mir
    }
}

fn require_open(r: f64) -> Result<()> {
    if r.abs() < 1.0 {
        Ok(())
    } else {
        Err(Error::DegenerateMirror { r })
    }
}

/// `t² |(1 + r e^{-ix}) / (1 − r² e^{-2ix})|²`.
///
/// Since `1 − r² e^{-2ix} = (1 − r e^{-ix})(1 + r e^{-ix})` this is the Airy
/// form `(1 − r²) / (1 − 2r cos x + r²)`, which is what gets evaluated.
pub fn interference_kernel(r_mir: f64, x: f64) -> Result<f64> {
    require_open(r_mir)?;
    Ok(airy(r_mir, x))
}

#[inline]
fn airy(r: f64, x: f64) -> f64 {
    // 1 − 2r cos x + r² = (1 − r)² + 4r sin²(x/2), kept in this form so the
    // minimum is not lost to cancellation when r → 1.
    let s = (0.5 * x).sin();
    (1.0 - r * r) / ((1.0 - r) * (1.0 - r) + 4.0 * r * s * s)
}

/// Panel edges around the kernel maxima, geometrically graded, for
/// `|r| > 0.9` where the peaks get narrower than a uniform grid resolves.
fn resonance_breakpoints(r: f64, k0d: f64) -> Vec<f64> {
    if r.abs() <= 0.9 || k0d == 0.0 {
        return Vec::new();
    }
    let half_width = (1.0 - r.abs()) / r.abs().sqrt() / k0d;
    let half_period = PI / k0d;
    let offset = if r > 0.0 { 0.0 } else { PI };
    // peaks at k0d ξ = offset + 2πj
    let j_max = ((k0d + PI) / (2.0 * PI)).ceil() as i64;
    let mut out = Vec::new();
    for j in -j_max..=j_max {
        let p = (offset + 2.0 * PI * j as f64) / k0d;
        if p < -1.0 - half_period || p > 1.0 + half_period {
            continue;
        }
        out.push(p);
        let mut w = half_width;
        while w < half_period {
            out.push(p - w);
            out.push(p + w);
            w *= 4.0;
        }
    }
    out
}

pub fn gamma_cavity_quadrature(spec: &CavitySpec, tol: f64) -> Result<RateResult> {
    let (r, k0d) = (spec.r_mir, spec.k0d);
    require_open(r)?;
    let dhat = DipoleOrientation::default();
    let integrand = |theta: f64, phi: f64| {
        let (h, v) = dipole_weight(&dhat, Direction::new(theta, phi));
        Complex64::new((h + v) * airy(r, k0d * theta.cos()), 0.0)
    };
    let sharpness = 1.0 / (1.0 - r.abs().min(0.9));
    let opts = QuadratureOptions::new(tol)
        .with_phase_rate(k0d * sharpness)
        .with_breakpoints(resonance_breakpoints(r, k0d));
    let q = solid_angle_integrate(integrand, &opts)?;
    let scale = 3.0 / (8.0 * PI);
    Ok(RateResult::new(scale * q.value.re, Method::Quadrature, scale * q.err_estimate))
}

/// Truncation of the bounce series.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeriesControl {
    /// Highest bounce order kept in both `n` and `n'`; `None` picks the
    /// smallest order meeting `tail_tol`.
    pub n_max: Option<usize>,
    /// Absolute bound allowed on the discarded terms.
    pub tail_tol: f64,
}

impl SeriesControl {
    pub fn new(tail_tol: f64) -> Self {
        Self { n_max: None, tail_tol }
    }

    pub fn with_n_max(mut self, n_max: usize) -> Self {
        self.n_max = Some(n_max);
        self
    }
}

impl Default for SeriesControl {
    fn default() -> Self {
        Self::new(1e-12)
    }
}

const N_MAX_FLOOR: usize = 8;
const N_MAX_CEIL: usize = 100_000;

/// Bound on everything dropped by keeping `n, n' <= n_max`:
/// `(1 + |r|)² q^{N+1} [1/(1 − q) + 1/(1 − q²)]`, `q = r²`.
pub fn series_tail_bound(r_mir: f64, n_max: usize) -> f64 {
    let q = r_mir * r_mir;
    if q == 0.0 {
        return 0.0;
    }
    let lead = (1.0 + r_mir.abs()).powi(2) * (1.0 / (1.0 - q) + 1.0 / (1.0 - q * q));
    lead * q.powf(n_max as f64 + 1.0)
}

/// Smallest bounce order whose tail bound is below `tail_tol`, clamped to
/// `[8, 1e5]`.
pub fn default_n_max(r_mir: f64, tail_tol: f64) -> usize {
    let q = r_mir * r_mir;
    if q == 0.0 {
        return N_MAX_FLOOR;
    }
    let lead = (1.0 + r_mir.abs()).powi(2) * (1.0 / (1.0 - q) + 1.0 / (1.0 - q * q));
    let n = ((tail_tol / lead).ln() / q.ln()).ceil() - 1.0;
    let mut n = if n.is_finite() { n.max(0.0) as usize } else { N_MAX_CEIL };
    n = n.clamp(N_MAX_FLOOR, N_MAX_CEIL);
    while n < N_MAX_CEIL && series_tail_bound(r_mir, n) > tail_tol {
        n += 1;
    }
    n
}

/// `(3/2) Σ_{n=0}^{N} Σ_{m=-N}^{n} r^{4n−2m} t² [(1 + r²) f(2m k0d)
/// + r f((2m − 1) k0d) + r f((2m + 1) k0d)]`.
pub fn gamma_cavity_series(spec: &CavitySpec, ctl: &SeriesControl) -> Result<RateResult> {
    let (r, k0d) = (spec.r_mir, spec.k0d);
    require_open(r)?;
    if !(ctl.tail_tol > 0.0) {
        return Err(Error::invalid(format!("tail tolerance must be positive, got {}", ctl.tail_tol)));
    }
    let n_max = ctl.n_max.unwrap_or_else(|| default_n_max(r, ctl.tail_tol));
    let bound = series_tail_bound(r, n_max);
    if bound > ctl.tail_tol {
        return Err(Error::TailTooLarge {
            bound,
            tail_tol: ctl.tail_tol,
            n_max,
        });
    }

    let q = r * r;
    let big_n = n_max as i64;
    // f(j k0d) for j = 0..=2N+1
    let table: Vec<f64> = (0..=(2 * n_max + 1)).map(|j| f_kernel(j as f64 * k0d)).collect();
    let f_at = |j: i64| table[j.unsigned_abs() as usize];
    // bracket B(m) for m = -N..=N, stored at index m + N
    let bracket: Vec<f64> = (-big_n..=big_n)
        .map(|m| (1.0 + q) * f_at(2 * m) + r * (f_at(2 * m - 1) + f_at(2 * m + 1)))
        .collect();

    let rows = exec::map_range(n_max + 1, |n| {
        // m runs from n down to -N with weight r^{4n-2m} = r^{2n} q^{n-m}
        let mut w = q.powi(n as i32);
        let mut acc = 0.0;
        let mut m = n as i64;
        while m >= -big_n && w != 0.0 {
            acc += w * bracket[(m + big_n) as usize];
            w *= q;
            m -= 1;
        }
        acc
    });
    let total: f64 = rows.iter().sum();
    Ok(RateResult::new(1.5 * (1.0 - q) * total, Method::Series, bound))
}

/// `k0 d → 0`: `(1 + r) / (1 − r)`. Accepts `r = −1` (complete suppression).
pub fn gamma_subwavelength_limit(r_mir: f64) -> Result<RateResult> {
    if !(r_mir.abs() <= 1.0) || r_mir == 1.0 {
        return Err(Error::DegenerateMirror { r: r_mir });
    }
    Ok(RateResult::exact((1.0 + r_mir) / (1.0 - r_mir), Method::Limit))
}

/// Second order in `k0 d`:
/// `(1 + r)/(1 − r) · [1 − (2/5) r/(1 − r)² (k0 d)²]`.
///
/// The expansion parameter is `|r| (k0 d)² / (1 − r)²`, not `k0 d` alone;
/// see [`subwavelength_2nd_is_reliable`].
pub fn gamma_subwavelength_2nd(r_mir: f64, k0d: f64) -> Result<RateResult> {
    let zeroth = gamma_subwavelength_limit(r_mir)?.ratio;
    if !(k0d >= 0.0 && k0d.is_finite()) {
        return Err(Error::invalid(format!("k0 d must be finite and >= 0, got {k0d}")));
    }
    let corr = 0.4 * r_mir / ((1.0 - r_mir) * (1.0 - r_mir)) * k0d * k0d;
    Ok(RateResult::exact(zeroth * (1.0 - corr), Method::Limit))
}

/// `|r| (k0 d)² / (1 − r)²`, the size of the second-order correction relative
/// to the zeroth order, up to the factor 2/5.
pub fn subwavelength_expansion_parameter(r_mir: f64, k0d: f64) -> f64 {
    r_mir.abs() * k0d * k0d / ((1.0 - r_mir) * (1.0 - r_mir))
}

/// False above `k0 d = 0.3` or once the expansion parameter reaches 0.1.
pub fn subwavelength_2nd_is_reliable(r_mir: f64, k0d: f64) -> bool {
    k0d <= 0.3 && subwavelength_expansion_parameter(r_mir, k0d) < 0.1
}

/// `k0 d ≫ 1` with only the `m = 0` terms kept:
/// `Σ_n r^{4n} t² (1 + r²) = (1 − r²)(1 + r²)/(1 − r⁴) = 1`.
pub fn gamma_optical_limit(r_mir: f64) -> Result<RateResult> {
    require_open(r_mir)?;
    let q = r_mir * r_mir;
    Ok(RateResult::exact((1.0 - q) * (1.0 + q) / (1.0 - q * q), Method::Limit))
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Bounce-series oracle for the kernel: `t² |Σ_n r^{2n} e^{-2inx}|² |1 + r e^{-ix}|²`.
    fn kernel_by_bounces(r: f64, x: f64, n_terms: usize) -> f64 {
        let mut s = Complex64::new(0.0, 0.0);
        for n in 0..n_terms {
            s += Complex64::from_polar(r.powi(2 * n as i32), -2.0 * n as f64 * x);
        }
        let head = Complex64::new(1.0, 0.0) + Complex64::from_polar(r, -x);
        (1.0 - r * r) * (s * head).norm_sqr()
    }

    /// Composite Simpson in ξ of `(3/8)(1 + ξ²) K(k0d ξ)`, after the φ integral.
    fn ratio_by_simpson(r: f64, k0d: f64, intervals: usize) -> f64 {
        let h = 2.0 / intervals as f64;
        let g = |xi: f64| (1.0 + xi * xi) * kernel_by_bounces(r, k0d * xi, 4000);
        let mut s = g(-1.0) + g(1.0);
        for i in 1..intervals {
            let w = if i % 2 == 1 { 4.0 } else { 2.0 };
            s += w * g(-1.0 + i as f64 * h);
        }
        0.375 * s * h / 3.0
    }

    #[test]
    fn kernel_without_mirrors_is_one() {
        for x in [0.0, 0.4, 3.0, -17.0] {
            assert_eq!(interference_kernel(0.0, x).unwrap(), 1.0);
        }
    }

    #[test]
    fn kernel_against_bounce_series() {
        let a = kernel_by_bounces(0.9, 0.0, 10_000);
        let b = kernel_by_bounces(-0.9, 0.0, 10_000);
        assert!((a - 19.0).abs() < 1e-10);
        assert!((b - 1.0 / 19.0).abs() < 1e-12);
        assert!((interference_kernel(0.9, 0.0).unwrap() - a).abs() < 1e-10);
        assert!((interference_kernel(-0.9, 0.0).unwrap() - b).abs() < 1e-12);
        for &(r, x) in &[(0.5, 0.3), (-0.7, 2.0), (0.95, 6.2), (0.3, -1.1)] {
            let want = kernel_by_bounces(r, x, 10_000);
            assert!((interference_kernel(r, x).unwrap() - want).abs() < 1e-10 * want.max(1.0));
        }
    }

    #[test]
    fn kernel_rejects_closed_mirror() {
        assert_eq!(interference_kernel(1.0, 0.0), Err(Error::DegenerateMirror { r: 1.0 }));
        assert!(interference_kernel(-1.0, 0.3).is_err());
    }

    #[test]
    fn quadrature_free_space() {
        let q = gamma_cavity_quadrature(&CavitySpec::new(0.0, 5.0).unwrap(), 1e-10).unwrap();
        assert!((q.ratio - 1.0).abs() < 1e-10);
    }

    #[test]
    fn quadrature_against_simpson_oracle() {
        // also frozen against scipy.integrate.quad:
        // (0.9, 0.01) 18.93199348491285, (0.8, 0.1) 8.361022944750946,
        // (-0.5, 0.2) 0.3345227650182712
        let cases = [(0.9, 0.01, 18.931_993_484_912_85), (0.8, 0.1, 8.361_022_944_750_946), (-0.5, 0.2, 0.334_522_765_018_271_2)];
        for (r, kd, frozen) in cases {
            let q = gamma_cavity_quadrature(&CavitySpec::new(r, kd).unwrap(), 1e-12).unwrap().ratio;
            let s = ratio_by_simpson(r, kd, 400);
            assert!((q - s).abs() < 1e-9 * s, "r={r} kd={kd}: {q} vs simpson {s}");
            assert!((q - frozen).abs() < 1e-11 * frozen, "r={r} kd={kd}: {q} vs {frozen}");
        }
    }

    #[test]
    fn strong_plasmonic_enhancement_near_second_order_value() {
        let q = gamma_cavity_quadrature(&CavitySpec::new(0.9, 0.01).unwrap(), 1e-10).unwrap().ratio;
        let second = 19.0 * (1.0 - 0.4 * 90.0 * 1e-4);
        assert!((q - second).abs() / second < 5e-3);
    }

    #[test]
    fn optical_cavity_is_close_to_free_space() {
        let q = gamma_cavity_quadrature(&CavitySpec::new(0.8, 100.0).unwrap(), 1e-9).unwrap();
        assert!((q.ratio - 1.0).abs() < 0.05);
    }

    #[test]
    fn series_without_mirrors_is_one() {
        let s = gamma_cavity_series(&CavitySpec::new(0.0, 3.3).unwrap(), &SeriesControl::new(1e-12).with_n_max(0)).unwrap();
        assert!((s.ratio - 1.0).abs() < 1e-15);
        assert_eq!(s.err_estimate, 0.0);
    }

    #[test]
    fn series_matches_quadrature() {
        let spec = CavitySpec::new(0.5, 20.0).unwrap();
        let s = gamma_cavity_series(&spec, &SeriesControl::default()).unwrap();
        let q = gamma_cavity_quadrature(&spec, 1e-11).unwrap();
        assert!((s.ratio - q.ratio).abs() < 1e-9 + s.err_estimate + q.err_estimate);
    }

    #[test]
    fn series_tail_bound_is_honest() {
        // a short series differs from a long one by no more than its bound
        let spec = CavitySpec::new(0.7, 0.4).unwrap();
        let long = gamma_cavity_series(&spec, &SeriesControl::new(1e-14)).unwrap();
        for n in [2, 5, 10, 20] {
            let ctl = SeriesControl::new(1e9).with_n_max(n);
            let short = gamma_cavity_series(&spec, &ctl).unwrap();
            assert!((short.ratio - long.ratio).abs() <= short.err_estimate + 1e-13, "n={n}");
        }
    }

    #[test]
    fn series_reports_large_tail() {
        let spec = CavitySpec::new(0.95, 1.0).unwrap();
        let err = gamma_cavity_series(&spec, &SeriesControl::new(1e-10).with_n_max(10)).unwrap_err();
        assert!(matches!(err, Error::TailTooLarge { n_max: 10, .. }));
    }

    #[test]
    fn default_truncation_meets_tolerance() {
        for r in [0.1, -0.5, 0.8, 0.99] {
            let n = default_n_max(r, 1e-12);
            assert!(series_tail_bound(r, n) <= 1e-12);
            assert!(n == N_MAX_FLOOR || series_tail_bound(r, n - 1) > 1e-12);
        }
    }

    #[test]
    fn degenerate_mirrors_rejected_by_numeric_routes() {
        for r in [1.0, -1.0] {
            let spec = CavitySpec::new(r, 0.5).unwrap();
            assert!(matches!(gamma_cavity_quadrature(&spec, 1e-8), Err(Error::DegenerateMirror { .. })));
            assert!(matches!(gamma_cavity_series(&spec, &SeriesControl::default()), Err(Error::DegenerateMirror { .. })));
        }
        assert!(CavitySpec::new(1.5, 0.1).is_err());
    }

    #[test]
    fn subwavelength_limits() {
        assert_eq!(gamma_subwavelength_limit(0.0).unwrap().ratio, 1.0);
        assert!((gamma_subwavelength_limit(0.9).unwrap().ratio - 19.0).abs() < 1e-12);
        assert!((gamma_subwavelength_limit(-0.99).unwrap().ratio - 1.0 / 199.0).abs() < 1e-15);
        assert_eq!(gamma_subwavelength_limit(-1.0).unwrap().ratio, 0.0);
        assert!(gamma_subwavelength_limit(1.0).is_err());
    }

    #[test]
    fn subwavelength_limit_against_quadrature() {
        for r in [0.9, -0.99] {
            let q = gamma_cavity_quadrature(&CavitySpec::new(r, 1e-3).unwrap(), 1e-11).unwrap().ratio;
            let l = gamma_subwavelength_limit(r).unwrap().ratio;
            assert!((q - l).abs() / l < 1e-3);
        }
    }

    #[test]
    fn second_order_values() {
        assert!((gamma_subwavelength_2nd(0.8, 0.1).unwrap().ratio - 8.28).abs() < 1e-12);
        let want = (0.5 / 1.5) * (1.0 + 0.4 * 0.5 / 2.25 * 0.04);
        assert!((gamma_subwavelength_2nd(-0.5, 0.2).unwrap().ratio - want).abs() < 1e-15);
        assert!((want - 0.334_518_518_5).abs() < 1e-9);
        for r in [-0.7, 0.0, 0.4] {
            assert_eq!(gamma_subwavelength_2nd(r, 0.0).unwrap().ratio, gamma_subwavelength_limit(r).unwrap().ratio);
        }
    }

    #[test]
    fn second_order_reliability_flag() {
        assert!(subwavelength_2nd_is_reliable(-0.5, 0.2));
        assert!(!subwavelength_2nd_is_reliable(0.9, 0.1));
        assert!(!subwavelength_2nd_is_reliable(0.0, 0.5));
    }

    #[test]
    fn optical_limit_is_unity() {
        for r in [-0.9, -0.3, 0.0, 0.6, 0.9] {
            assert!((gamma_optical_limit(r).unwrap().ratio - 1.0).abs() < 1e-15);
        }
        // m = 0 only, summed term by term
        let r: f64 = 0.9;
        let q = r * r;
        let s: f64 = (0..2000).map(|n| q.powi(2 * n) * (1.0 - q) * (1.0 + q) * 1.5 * (2.0 / 3.0)).sum();
        assert!((s - 1.0).abs() < 1e-12);
    }

    #[test]
    fn kernel_is_nonnegative() {
        for i in 0..200 {
            let r = -0.999 + i as f64 * 0.01;
            for j in 0..50 {
                assert!(interference_kernel(r, j as f64 * 0.77).unwrap() >= 0.0);
            }
        }
    }
}
