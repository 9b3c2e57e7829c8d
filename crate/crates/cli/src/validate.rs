//! Self-validation: oracle equivalences, limits, conservation laws and
//! trajectory convergence, each reported with its measured deviation.

use std::f64::consts::PI;
use std::fmt;

use decayrate::cavity::{
    gamma_cavity_quadrature, gamma_cavity_series, gamma_subwavelength_2nd, gamma_subwavelength_limit, CavitySpec,
    SeriesControl,
};
use decayrate::dynamics::{
    evolve_jc, evolve_single_rate, fit_exponential_rate, unravel_jumps, AtomCavityState, AtomState, ModelParams,
};
use decayrate::kernel::{f_direct, f_kernel, f_taylor, TAYLOR_CROSSOVER};
use decayrate::mirror::{closed_ratio_with_kernel, gamma_mirror_quadrature};

use crate::config::{Distance, Grid, SweepConfig, Target};
use crate::sweep;

#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub name: &'static str,
    pub measured: f64,
    pub limit: f64,
    pub passed: bool,
    pub detail: String,
}

impl Check {
    /// Passes when `measured < limit`.
    fn below(name: &'static str, measured: f64, limit: f64, detail: impl Into<String>) -> Self {
        Self { name, measured, limit, passed: measured < limit, detail: detail.into() }
    }
}

impl fmt::Display for Check {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let tag = if self.passed { "PASS" } else { "FAIL" };
        write!(f, "{tag}  {:<28} measured={:<11.3e} limit={:<9.1e} {}", self.name, self.measured, self.limit, self.detail)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ValidateOptions {
    pub quick: bool,
    pub tol: f64,
    pub n_traj: usize,
    pub seed: u64,
    /// Added to `f` wherever the kernel under test is used.
    pub perturb_kernel: f64,
}

fn show<T: fmt::Debug>(o: Option<T>) -> String {
    o.map_or_else(|| "-".into(), |v| format!("{v:?}"))
}

/// Worst entry of `items` by the first tuple field.
fn worst<T: Copy>(items: impl IntoIterator<Item = (f64, T)>) -> (f64, Option<T>) {
    items
        .into_iter()
        .fold((0.0, None), |(m, at), (v, t)| if v > m || v.is_nan() { (v, Some(t)) } else { (m, at) })
}

fn mirror_checks(o: &ValidateOptions, out: &mut Vec<Check>) {
    let f = |x: f64| f_kernel(x) + o.perturb_kernel;
    let k_grid = [0.01, 0.1, 0.5, 1.0, PI, 10.0, 50.0];
    let re_grid: Vec<f64> = (0..=10).map(|i| -1.0 + 0.2 * i as f64).collect();
    let mut devs = Vec::new();
    for &k0d in &k_grid {
        for &re_r in &re_grid {
            let q = gamma_mirror_quadrature(re_r, k0d, o.tol).map(|q| q.ratio).unwrap_or(f64::NAN);
            devs.push(((closed_ratio_with_kernel(re_r, k0d, f) - q).abs(), (re_r, k0d)));
        }
    }
    let (m, at) = worst(devs);
    out.push(Check::below("mirror_oracle_equivalence", m, 1e-6, format!("7x11 grid, worst (re_r, k0d) = {}", show(at))));

    let (m, at) = worst(re_grid.iter().map(|&r| ((closed_ratio_with_kernel(r, 1e-2, f) - (1.0 + r)).abs(), r)));
    out.push(Check::below("mirror_near_field", m, 1e-3, format!("k0d = 0.01, worst re_r = {}", show(at))));
    let (m, at) = worst(re_grid.iter().map(|&r| ((closed_ratio_with_kernel(r, 50.0, f) - 1.0).abs(), r)));
    out.push(Check::below("mirror_far_field", m, 1e-2, format!("k0d = 50, worst re_r = {}", show(at))));
}

fn quad(r: f64, k0d: f64, tol: f64) -> f64 {
    CavitySpec::new(r, k0d)
        .and_then(|s| gamma_cavity_quadrature(&s, tol))
        .map(|q| q.ratio)
        .unwrap_or(f64::NAN)
}

fn cavity_checks(o: &ValidateOptions, out: &mut Vec<Check>) {
    let rs = [-0.9, -0.5, 0.0, 0.5, 0.9];
    let (m, at) = worst(rs.iter().map(|&r| {
        let lim = gamma_subwavelength_limit(r).unwrap().ratio;
        ((quad(r, 1e-3, o.tol) - lim).abs() / lim, r)
    }));
    out.push(Check::below("subwavelength_limit", m, 1e-3, format!("k0d = 1e-3, relative, worst r = {}", show(at))));

    let (m, at) = worst(rs.iter().map(|&r| {
        let q = quad(r, 0.1, o.tol);
        ((gamma_subwavelength_2nd(r, 0.1).unwrap().ratio - q).abs() / q, r)
    }));
    out.push(Check::below("subwavelength_second_order", m, 5e-3, format!("k0d = 0.1, relative, worst r = {}", show(at))));

    let ks: &[f64] = if o.quick { &[20.0 * PI] } else { &[20.0 * PI, 50.0 * PI] };
    let mut devs = Vec::new();
    for &k0d in ks {
        for &r in &[-0.8, -0.6, -0.3, 0.3, 0.6, 0.8] {
            devs.push(((quad(r, k0d, 1e-8) - 1.0).abs(), (r, k0d)));
        }
    }
    let (m, at) = worst(devs);
    out.push(Check::below("optical_asymptote", m, 0.05, format!("worst (r, k0d) = {}", show(at))));

    let ks: &[f64] = if o.quick { &[0.05, 1.0, PI] } else { &[0.05, 1.0, PI, 10.0, 50.0] };
    let mut excess = Vec::new();
    for &k0d in ks {
        for &r in &[-0.8, -0.5, -0.2, 0.2, 0.5, 0.8] {
            let spec = CavitySpec::new(r, k0d).unwrap();
            let pair = gamma_cavity_quadrature(&spec, o.tol).and_then(|q| {
                gamma_cavity_series(&spec, &SeriesControl::default()).map(|s| (q, s))
            });
            let ratio = match pair {
                Ok((q, s)) => (q.ratio - s.ratio).abs() / 1e-5f64.max(q.err_estimate + s.err_estimate),
                Err(_) => f64::NAN,
            };
            excess.push((ratio, (r, k0d)));
        }
    }
    let (m, at) = worst(excess);
    out.push(Check::below(
        "route_equivalence",
        m,
        1.0,
        format!("|quadrature - series| / max(1e-5, combined error), worst (r, k0d) = {}", show(at)),
    ));
}

fn kernel_checks(o: &ValidateOptions, out: &mut Vec<Check>) {
    let f = |x: f64| f_kernel(x) + o.perturb_kernel;
    let origin = (f(0.0) - 2.0 / 3.0).abs();
    out.push(Check {
        name: "kernel_origin",
        measured: origin,
        limit: 0.0,
        passed: origin == 0.0,
        detail: "f(0) = 2/3 exactly".into(),
    });
    let c = TAYLOR_CROSSOVER;
    out.push(Check::below(
        "kernel_branch_continuity",
        (f_taylor(c) - f_direct(c)).abs(),
        1e-12,
        format!("at |x| = {c}"),
    ));
    out.push(Check::below("kernel_at_pi", (f(PI) + 1.0 / (PI * PI)).abs(), 1e-12, "f(pi) = -1/pi^2"));
}

fn dichotomy_checks(o: &ValidateOptions, out: &mut Vec<Check>) {
    let ks: &[f64] = if o.quick { &[0.05] } else { &[0.01, 0.05, 0.09] };
    let mut wrong = 0usize;
    let mut first = None;
    for &k0d in ks {
        for i in 0..21 {
            let r = -0.95 + 0.095 * i as f64;
            let q = quad(r, k0d, o.tol);
            let ok = if r > 1e-12 {
                q > 1.0
            } else if r < -1e-12 {
                q < 1.0
            } else {
                (q - 1.0).abs() < 1e-8
            };
            if !ok {
                wrong += 1;
                first.get_or_insert((r, k0d));
            }
        }
    }
    out.push(Check::below(
        "sign_dichotomy",
        wrong as f64,
        0.5,
        format!("{} points, violations (first at {})", 21 * ks.len(), show(first)),
    ));
    let q = quad(0.9, 0.01, o.tol);
    out.push(Check {
        name: "plasmonic_enhancement",
        measured: q,
        limit: 15.0,
        passed: q > 15.0,
        detail: "ratio at r = 0.9, k0d = 0.01 must exceed the limit".into(),
    });
}

fn dynamics_checks(o: &ValidateOptions, out: &mut Vec<Check>, info: &mut Vec<String>) {
    let adiabatic = ModelParams::new(1.0, 20.0, 1.0).unwrap();
    let run = evolve_jc(&adiabatic, &AtomCavityState::excited_vacuum(5), 10.0, 0.004);
    match &run {
        Ok(run) => {
            let d = run.diagnostics;
            out.push(Check::below("jc_trace_drift", d.max_trace_drift, 1e-9, "t_final = 10/gamma"));
            out.push(Check::below("jc_hermiticity", d.max_hermiticity_error, 1e-10, "t_final = 10/gamma"));
        }
        Err(e) => out.push(Check::below("jc_trace_drift", f64::NAN, 1e-9, e.to_string())),
    }

    let closed = ModelParams::new(1.0, 0.0, 0.0).unwrap();
    let m = match evolve_jc(&closed, &AtomCavityState::excited_vacuum(5), 10.0, 0.01) {
        Ok(run) => run.states.iter().map(|s| (s.excitation_number() - 1.0).abs()).fold(0.0, f64::max),
        Err(_) => f64::NAN,
    };
    out.push(Check::below("excitation_conservation", m, 1e-8, "kappa = gamma = 0"));

    let n_traj = if o.quick { o.n_traj.min(1000) } else { o.n_traj };
    let grid = Grid { start: 0.0, stop: 5.0, count: 51, log: false }.points();
    let exact = evolve_single_rate(1.0, &AtomState::excited(), &grid).unwrap();
    let e = unravel_jumps(1.0, &AtomState::excited(), n_traj, o.seed, &grid).unwrap();
    let (m, at) = worst((0..grid.len()).filter(|&i| e.excited_stderr[i] > 0.0).map(|i| {
        ((e.excited_mean[i] - exact[i].excited_population()).abs() / e.excited_stderr[i], grid[i])
    }));
    out.push(Check::below(
        "jump_ensemble",
        m,
        3.0,
        format!("|mean - exact| / stderr, n_traj = {n_traj}, worst t = {}", show(at)),
    ));

    if let Ok(run) = &run {
        let pops = run.excited_population();
        let (t, p): (Vec<f64>, Vec<f64>) = run
            .times
            .iter()
            .zip(&pops)
            .filter(|(t, _)| (0.5..=6.0).contains(*t))
            .map(|(t, p)| (*t, *p))
            .unzip();
        let fit = fit_exponential_rate(&t, &p).unwrap_or(f64::NAN);
        let c = 0.05;
        let target = 1.0 + 4.0 * c;
        out.push(Check::below(
            "adiabatic_rate",
            (fit - target).abs() / target,
            0.05,
            format!("C = 0.05, fitted {fit:.5} vs gamma(1 + 4C) = {target}"),
        ));
        info.push(format!("fitted rate {fit:.5} vs gamma(1 + 2C) = {}: relative {:.3e}", 1.0 + 2.0 * c, (fit - 1.1).abs() / 1.1));
    }
}

fn determinism_check(o: &ValidateOptions, out: &mut Vec<Check>) {
    let mut cfg = SweepConfig::new(Target::Mirror);
    cfg.r = -0.7;
    cfg.distance = Distance::K0d(1.0);
    cfg.grid = Some(Grid { start: 0.01, stop: 20.0, count: 25, log: false });
    cfg.tol = o.tol;
    let a = sweep::rate_sweep(&cfg).and_then(|t| t.to_bytes());
    let b = sweep::rate_sweep(&cfg).and_then(|t| t.to_bytes());
    let mut lcfg = SweepConfig::new(Target::Lindblad);
    lcfg.n_traj = 500;
    lcfg.seed = o.seed;
    lcfg.grid = Some(Grid { start: 0.0, stop: 2.0, count: 11, log: false });
    let c = sweep::lindblad(&lcfg).and_then(|t| t.to_bytes());
    let d = sweep::lindblad(&lcfg).and_then(|t| t.to_bytes());
    let same = matches!((&a, &b), (Ok(x), Ok(y)) if x == y) && matches!((&c, &d), (Ok(x), Ok(y)) if x == y);
    out.push(Check {
        name: "determinism",
        measured: if same { 0.0 } else { 1.0 },
        limit: 0.5,
        passed: same,
        detail: "CSV bytes of repeated mirror and lindblad runs".into(),
    });
}

pub struct Report {
    pub checks: Vec<Check>,
    pub info: Vec<String>,
}

impl Report {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }
}

pub fn run(o: &ValidateOptions) -> Report {
    let mut checks = Vec::new();
    let mut info = Vec::new();
    mirror_checks(o, &mut checks);
    cavity_checks(o, &mut checks);
    kernel_checks(o, &mut checks);
    dichotomy_checks(o, &mut checks);
    dynamics_checks(o, &mut checks, &mut info);
    determinism_check(o, &mut checks);
    Report { checks, info }
}
