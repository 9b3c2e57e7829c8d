//! Parameter sweeps over the rate routes and the dynamics comparison.

use std::f64::consts::TAU;

use decayrate::cavity::{
    gamma_cavity_quadrature, gamma_cavity_series, gamma_optical_limit, gamma_subwavelength_2nd,
    gamma_subwavelength_limit, subwavelength_expansion_parameter, subwavelength_2nd_is_reliable, CavitySpec,
    SeriesControl,
};
use decayrate::dynamics::{
    evolve_jc_on_grid, evolve_single_rate, unravel_jumps, AtomCavityState, AtomState, ModelParams,
};
use decayrate::exec;
use decayrate::kernel::f_kernel;
use decayrate::mirror::{closed_ratio_with_kernel, gamma_mirror_quadrature};
use decayrate::{Method, RateResult};

use crate::config::{Axis, Grid, MethodSel, SweepConfig, Target};
use crate::error::CliError;
use crate::table::{num, opt, Table};

pub const MIRROR_HEADER: &[&str] = &[
    "d_over_lambda0", "k0d", "re_r", "ratio_closed", "ratio_quadrature", "abs_diff", "err_estimate", "method", "status",
];
pub const CAVITY_HEADER: &[&str] = &[
    "k0d", "r_mir", "ratio_quadrature", "ratio_series", "ratio_limit_2nd", "err_estimate", "status", "method",
    "d_over_lambda0",
];
pub const SUBWAVELENGTH_HEADER: &[&str] = &[
    "d_over_lambda0", "k0d", "r_mir", "ratio_limit", "ratio_limit_2nd", "ratio_quadrature", "err_estimate",
    "expansion_param", "second_order_reliable", "method", "status",
];
pub const OPTICAL_HEADER: &[&str] = &[
    "d_over_lambda0", "k0d", "r_mir", "ratio_limit", "ratio_quadrature", "ratio_series", "err_estimate", "method",
    "status",
];
pub const LINDBLAD_HEADER: &[&str] = &[
    "t", "pop_jc", "pop_single_rate", "pop_jump_mean", "pop_jump_stderr", "seed", "status",
];

/// One sweep cell.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Point {
    pub r: f64,
    pub k0d: f64,
    pub d_over_lambda: f64,
}

impl Point {
    pub fn from_k0d(r: f64, k0d: f64) -> Self {
        Self { r, k0d, d_over_lambda: k0d / TAU }
    }

    pub fn from_d_over_lambda(r: f64, d: f64) -> Self {
        Self { r, k0d: TAU * d, d_over_lambda: d }
    }
}

pub fn points(cfg: &SweepConfig) -> Vec<Point> {
    let fixed = match cfg.distance {
        crate::config::Distance::K0d(x) => Point::from_k0d(cfg.r, x),
        crate::config::Distance::DOverLambda(x) => Point::from_d_over_lambda(cfg.r, x),
    };
    let Some(grid) = cfg.grid else {
        return vec![fixed];
    };
    grid.points()
        .into_iter()
        .map(|p| match cfg.axis {
            Axis::K0d => Point::from_k0d(cfg.r, p),
            Axis::DOverLambda => Point::from_d_over_lambda(cfg.r, p),
            Axis::R => Point { r: p, ..fixed },
        })
        .collect()
}

/// Route outcomes of one cell, in column order.
struct Cell {
    values: Vec<Option<f64>>,
    err_estimate: f64,
    methods: Vec<&'static str>,
    failures: Vec<String>,
}

impl Cell {
    fn new() -> Self {
        Self { values: Vec::new(), err_estimate: 0.0, methods: Vec::new(), failures: Vec::new() }
    }

    fn skip(&mut self) {
        self.values.push(None);
    }

    fn record(&mut self, route: &'static str, r: decayrate::Result<RateResult>) -> Option<f64> {
        self.methods.push(route);
        match r {
            Ok(v) => {
                self.err_estimate = self.err_estimate.max(v.err_estimate);
                self.values.push(Some(v.ratio));
                Some(v.ratio)
            }
            Err(e) => {
                self.failures.push(format!("{route}: {e}"));
                self.values.push(Some(f64::NAN));
                None
            }
        }
    }

    fn method(&self) -> String {
        self.methods.join(";")
    }

    fn status(&self) -> String {
        if self.failures.is_empty() {
            "ok".into()
        } else {
            self.failures.join("; ")
        }
    }
}

fn unsupported(target: Target, m: MethodSel) -> CliError {
    CliError::Config(format!("method {m} is not available for target {target}"))
}

fn require_open(target: Target, pts: &[Point], what: &str) -> Result<(), CliError> {
    match pts.iter().find(|p| p.r.abs() >= 1.0) {
        Some(p) => Err(CliError::Config(format!("{target}: {what} needs |r| < 1, got r = {}", p.r))),
        None => Ok(()),
    }
}

pub fn mirror_row(p: Point, method: MethodSel, tol: f64, perturb: f64) -> (Vec<String>, Vec<String>) {
    let mut cell = Cell::new();
    let closed = if method.includes(MethodSel::Closed) {
        let ratio = closed_ratio_with_kernel(p.r, p.k0d, |x| f_kernel(x) + perturb);
        cell.record(Method::ClosedForm.as_str(), Ok(RateResult::exact(ratio, Method::ClosedForm)))
    } else {
        cell.skip();
        None
    };
    let quad = if method.includes(MethodSel::Quadrature) {
        cell.record(Method::Quadrature.as_str(), gamma_mirror_quadrature(p.r, p.k0d, tol))
    } else {
        cell.skip();
        None
    };
    let diff = closed.zip(quad).map(|(c, q)| (c - q).abs());
    let row = vec![
        num(p.d_over_lambda),
        num(p.k0d),
        num(p.r),
        opt(cell.values[0]),
        opt(cell.values[1]),
        opt(diff),
        num(cell.err_estimate),
        cell.method(),
        cell.status(),
    ];
    (row, cell.failures)
}

pub fn cavity_row(p: Point, method: MethodSel, tol: f64) -> (Vec<String>, Vec<String>) {
    let mut cell = Cell::new();
    if method.includes(MethodSel::Quadrature) {
        cell.record(Method::Quadrature.as_str(), CavitySpec::new(p.r, p.k0d).and_then(|s| gamma_cavity_quadrature(&s, tol)));
    } else {
        cell.skip();
    }
    if method.includes(MethodSel::Series) {
        cell.record(Method::Series.as_str(), CavitySpec::new(p.r, p.k0d).and_then(|s| gamma_cavity_series(&s, &SeriesControl::default())));
    } else {
        cell.skip();
    }
    if method.includes(MethodSel::Limit) {
        cell.record(Method::Limit.as_str(), gamma_subwavelength_2nd(p.r, p.k0d));
    } else {
        cell.skip();
    }
    let row = vec![
        num(p.k0d),
        num(p.r),
        opt(cell.values[0]),
        opt(cell.values[1]),
        opt(cell.values[2]),
        num(cell.err_estimate),
        cell.status(),
        cell.method(),
        num(p.d_over_lambda),
    ];
    (row, cell.failures)
}

pub fn subwavelength_row(p: Point, method: MethodSel, tol: f64) -> (Vec<String>, Vec<String>) {
    let mut cell = Cell::new();
    if method.includes(MethodSel::Limit) {
        cell.record(Method::Limit.as_str(), gamma_subwavelength_limit(p.r));
        cell.record(Method::Limit.as_str(), gamma_subwavelength_2nd(p.r, p.k0d));
        cell.methods.pop();
    } else {
        cell.skip();
        cell.skip();
    }
    if method.includes(MethodSel::Quadrature) {
        cell.record(
            Method::Quadrature.as_str(),
            CavitySpec::new(p.r, p.k0d).and_then(|s| gamma_cavity_quadrature(&s, tol)),
        );
    } else {
        cell.skip();
    }
    let row = vec![
        num(p.d_over_lambda),
        num(p.k0d),
        num(p.r),
        opt(cell.values[0]),
        opt(cell.values[1]),
        opt(cell.values[2]),
        num(cell.err_estimate),
        num(subwavelength_expansion_parameter(p.r, p.k0d)),
        subwavelength_2nd_is_reliable(p.r, p.k0d).to_string(),
        cell.method(),
        cell.status(),
    ];
    (row, cell.failures)
}

pub fn optical_row(p: Point, method: MethodSel, tol: f64) -> (Vec<String>, Vec<String>) {
    let mut cell = Cell::new();
    if method.includes(MethodSel::Limit) {
        cell.record(Method::Limit.as_str(), gamma_optical_limit(p.r));
    } else {
        cell.skip();
    }
    if method.includes(MethodSel::Quadrature) {
        cell.record(Method::Quadrature.as_str(), CavitySpec::new(p.r, p.k0d).and_then(|s| gamma_cavity_quadrature(&s, tol)));
    } else {
        cell.skip();
    }
    if method.includes(MethodSel::Series) {
        cell.record(Method::Series.as_str(), CavitySpec::new(p.r, p.k0d).and_then(|s| gamma_cavity_series(&s, &SeriesControl::default())));
    } else {
        cell.skip();
    }
    let row = vec![
        num(p.d_over_lambda),
        num(p.k0d),
        num(p.r),
        opt(cell.values[0]),
        opt(cell.values[1]),
        opt(cell.values[2]),
        num(cell.err_estimate),
        cell.method(),
        cell.status(),
    ];
    (row, cell.failures)
}

/// Evaluates `row` at every point in parallel and collects rows in grid order.
pub fn tabulate<F>(header: &[&'static str], pts: &[Point], row: F) -> Table
where
    F: Fn(Point) -> (Vec<String>, Vec<String>) + Sync,
{
    let mut table = Table::new(header);
    for (cells, failures) in exec::map_slice(pts, |&p| row(p)) {
        table.push(cells);
        table.failures.extend(failures);
    }
    table
}

pub fn rate_sweep(cfg: &SweepConfig) -> Result<Table, CliError> {
    let pts = points(cfg);
    let (m, tol) = (cfg.method, cfg.tol);
    match cfg.target {
        Target::Mirror => {
            if matches!(m, MethodSel::Series | MethodSel::Limit) {
                return Err(unsupported(cfg.target, m));
            }
            let perturb = cfg.perturb_kernel;
            Ok(tabulate(MIRROR_HEADER, &pts, |p| mirror_row(p, m, tol, perturb)))
        }
        Target::Cavity => {
            if m == MethodSel::Closed {
                return Err(unsupported(cfg.target, m));
            }
            if m != MethodSel::Limit {
                require_open(cfg.target, &pts, "quadrature/series")?;
            }
            if pts.iter().any(|p| p.r == 1.0) {
                return Err(CliError::Config("cavity: r = 1 has no finite rate".into()));
            }
            Ok(tabulate(CAVITY_HEADER, &pts, |p| cavity_row(p, m, tol)))
        }
        Target::Subwavelength => {
            if matches!(m, MethodSel::Closed | MethodSel::Series) {
                return Err(unsupported(cfg.target, m));
            }
            if m != MethodSel::Limit {
                require_open(cfg.target, &pts, "quadrature")?;
            }
            if pts.iter().any(|p| p.r == 1.0) {
                return Err(CliError::Config("subwavelength: r = 1 has no finite rate".into()));
            }
            Ok(tabulate(SUBWAVELENGTH_HEADER, &pts, |p| subwavelength_row(p, m, tol)))
        }
        Target::Optical => {
            if m == MethodSel::Closed {
                return Err(unsupported(cfg.target, m));
            }
            require_open(cfg.target, &pts, "every route")?;
            Ok(tabulate(OPTICAL_HEADER, &pts, |p| optical_row(p, m, tol)))
        }
        other => Err(CliError::Config(format!("{other} is not a rate sweep"))),
    }
}

pub fn default_time_grid() -> Grid {
    Grid { start: 0.0, stop: 10.0, count: 101, log: false }
}

/// JC, single-rate and jump-ensemble excited populations from `|1_A, 0⟩`.
pub fn lindblad(cfg: &SweepConfig) -> Result<Table, CliError> {
    let params = ModelParams::new(cfg.g, cfg.kappa, cfg.gamma)?;
    let gamma_cav = cfg.gamma_cav.unwrap_or(if cfg.kappa > 0.0 {
        cfg.gamma + 4.0 * cfg.g * cfg.g / cfg.kappa
    } else {
        cfg.gamma
    });
    let fastest = cfg.g.abs().max(cfg.kappa).max(cfg.gamma);
    let dt = cfg.dt.unwrap_or(0.05 / fastest.max(1.0));
    let times = cfg.grid.unwrap_or_else(default_time_grid).points();

    let jc = match evolve_jc_on_grid(&params, &AtomCavityState::excited_vacuum(cfg.n_fock), &times, dt) {
        Ok(run) => Ok(run.excited_population()),
        Err(e @ decayrate::Error::StepTooLarge { .. }) => return Err(CliError::Config(e.to_string())),
        Err(e) => Err(e),
    };
    let single = evolve_single_rate(gamma_cav, &AtomState::excited(), &times)?;
    let jumps = unravel_jumps(gamma_cav, &AtomState::excited(), cfg.n_traj, cfg.seed, &times)?;

    let mut table = Table::new(LINDBLAD_HEADER);
    let status = match &jc {
        Ok(_) => "ok".to_string(),
        Err(e) => format!("jc: {e}"),
    };
    if jc.is_err() {
        table.failures.push(status.clone());
    }
    for (i, &t) in times.iter().enumerate() {
        let pop_jc = jc.as_ref().map(|p| p[i]).unwrap_or(f64::NAN);
        table.push(vec![
            num(t),
            num(pop_jc),
            num(single[i].excited_population()),
            num(jumps.excited_mean[i]),
            num(jumps.excited_stderr[i]),
            cfg.seed.to_string(),
            status.clone(),
        ]);
    }
    Ok(table)
}
