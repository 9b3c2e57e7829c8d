//! Jaynes-Cummings master equation
//!
//! `ρ̇ = −i[H, ρ] + Γ(σ⁻ρσ⁺ − ½{σ⁺σ⁻, ρ}) + κ(aρa† − ½{a†a, ρ})`,
//! `H = g(σ⁻a† + σ⁺a)`, integrated with classical fixed-step RK4.

use ndarray::Array2;
use num_complex::Complex64;

use super::params::ModelParams;
use super::state::AtomCavityState;
use crate::error::{Error, Result};

/// Largest population tolerated in the top Fock level.
pub const LEAK_THRESHOLD: f64 = 1e-8;
const MAX_STEP_RATE: f64 = 0.1;

/// Worst-case bookkeeping over every RK4 step of a run.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct JcDiagnostics {
    pub max_trace_drift: f64,
    pub max_hermiticity_error: f64,
    pub min_diagonal: f64,
    pub max_diagonal: f64,
    pub max_top_fock_population: f64,
    pub steps: usize,
}

impl JcDiagnostics {
    fn new() -> Self {
        Self {
            max_trace_drift: 0.0,
            max_hermiticity_error: 0.0,
            min_diagonal: f64::INFINITY,
            max_diagonal: f64::NEG_INFINITY,
            max_top_fock_population: 0.0,
            steps: 0,
        }
    }

    fn observe(&mut self, s: &AtomCavityState) {
        self.max_trace_drift = self.max_trace_drift.max((s.trace() - 1.0).abs());
        self.max_hermiticity_error = self.max_hermiticity_error.max(s.hermiticity_error());
        self.min_diagonal = self.min_diagonal.min(s.min_diagonal());
        self.max_diagonal = self.max_diagonal.max(s.max_diagonal());
        self.max_top_fock_population = self.max_top_fock_population.max(s.fock_population(s.n_fock()));
    }
}

#[derive(Debug, Clone)]
pub struct JcRun {
    pub times: Vec<f64>,
    pub states: Vec<AtomCavityState>,
    pub diagnostics: JcDiagnostics,
}

impl JcRun {
    pub fn excited_population(&self) -> Vec<f64> {
        self.states.iter().map(AtomCavityState::excited_population).collect()
    }

    pub fn final_state(&self) -> &AtomCavityState {
        self.states.last().expect("a run always holds its initial state")
    }
}

struct Generator {
    /// `H − (i/2)(Γ σ⁺σ⁻ + κ a†a)`
    h_eff: Array2<Complex64>,
    h_eff_dag: Array2<Complex64>,
    sigma_minus: Array2<Complex64>,
    a: Array2<Complex64>,
    gamma: f64,
    kappa: f64,
}

impl Generator {
    fn new(p: &ModelParams, n_fock: usize) -> Self {
        let dim = 2 * (n_fock + 1);
        let idx = |atom: usize, n: usize| atom * (n_fock + 1) + n;
        let mut sigma_minus = Array2::<Complex64>::zeros((dim, dim));
        let mut a = Array2::<Complex64>::zeros((dim, dim));
        for n in 0..=n_fock {
            sigma_minus[[idx(0, n), idx(1, n)]] = Complex64::new(1.0, 0.0);
            if n > 0 {
                for atom in 0..2 {
                    a[[idx(atom, n - 1), idx(atom, n)]] = Complex64::new((n as f64).sqrt(), 0.0);
                }
            }
        }
        let sigma_plus = sigma_minus.t().mapv(|z| z.conj());
        let a_dag = a.t().mapv(|z| z.conj());
        let coupling = sigma_minus.dot(&a_dag) + sigma_plus.dot(&a);
        let h = coupling.mapv(|z| z * p.g);
        let loss = sigma_plus.dot(&sigma_minus).mapv(|z| z * p.gamma) + a_dag.dot(&a).mapv(|z| z * p.kappa);
        let h_eff = &h - &loss.mapv(|z| z * Complex64::new(0.0, 0.5));
        let h_eff_dag = h_eff.t().mapv(|z| z.conj());
        Self {
            h_eff,
            h_eff_dag,
            sigma_minus,
            a,
            gamma: p.gamma,
            kappa: p.kappa,
        }
    }

    fn apply(&self, rho: &Array2<Complex64>) -> Array2<Complex64> {
        let i = Complex64::new(0.0, 1.0);
        let mut out = (self.h_eff.dot(rho) - rho.dot(&self.h_eff_dag)).mapv(|z| -i * z);
        if self.gamma != 0.0 {
            let jump = self.sigma_minus.dot(rho).dot(&self.sigma_minus.t());
            out.scaled_add(Complex64::new(self.gamma, 0.0), &jump);
        }
        if self.kappa != 0.0 {
            let jump = self.a.dot(rho).dot(&self.a.t());
            out.scaled_add(Complex64::new(self.kappa, 0.0), &jump);
        }
        out
    }

    fn rk4(&self, rho: &Array2<Complex64>, h: f64) -> Array2<Complex64> {
        let half = Complex64::new(0.5 * h, 0.0);
        let full = Complex64::new(h, 0.0);
        let k1 = self.apply(rho);
        let mut tmp = rho.clone();
        tmp.scaled_add(half, &k1);
        let k2 = self.apply(&tmp);
        tmp.assign(rho);
        tmp.scaled_add(half, &k2);
        let k3 = self.apply(&tmp);
        tmp.assign(rho);
        tmp.scaled_add(full, &k3);
        let k4 = self.apply(&tmp);
        let mut next = rho.clone();
        let sixth = Complex64::new(h / 6.0, 0.0);
        next.scaled_add(sixth, &k1);
        next.scaled_add(sixth * 2.0, &k2);
        next.scaled_add(sixth * 2.0, &k3);
        next.scaled_add(sixth, &k4);
        next
    }
}

fn check_step(params: &ModelParams, dt: f64) -> Result<()> {
    if !(dt > 0.0 && dt.is_finite()) {
        return Err(Error::invalid(format!("time step must be positive, got {dt}")));
    }
    let rate = params.fastest_rate();
    if dt * rate >= MAX_STEP_RATE {
        return Err(Error::StepTooLarge { dt, rate });
    }
    Ok(())
}

struct Stepper {
    gen: Generator,
    n_fock: usize,
    diagnostics: JcDiagnostics,
}

impl Stepper {
    fn advance(&mut self, rho: &Array2<Complex64>, h: f64, t: f64) -> Result<AtomCavityState> {
        let next = AtomCavityState::from_raw(self.gen.rk4(rho, h), self.n_fock);
        self.diagnostics.observe(&next);
        self.diagnostics.steps += 1;
        let top = next.fock_population(self.n_fock);
        if top > LEAK_THRESHOLD {
            return Err(Error::TruncationLeak {
                population: top,
                level: self.n_fock,
                time: t,
            });
        }
        Ok(next)
    }
}

/// Integrates to `t_final` with steps of at most `dt`, recording every step.
pub fn evolve_jc(params: &ModelParams, rho0: &AtomCavityState, t_final: f64, dt: f64) -> Result<JcRun> {
    check_step(params, dt)?;
    if !(t_final >= 0.0 && t_final.is_finite()) {
        return Err(Error::invalid(format!("final time must be finite and >= 0, got {t_final}")));
    }
    let steps = (t_final / dt - 1e-9).ceil().max(0.0) as usize;
    let grid: Vec<f64> = (0..=steps).map(|k| t_final * k as f64 / steps.max(1) as f64).collect();
    evolve_jc_on_grid(params, rho0, &grid, dt)
}

/// Integrates through an increasing time grid starting at `t_grid[0]`,
/// subdividing each interval into equal steps no longer than `max_dt`, and
/// records the state at every grid time.
pub fn evolve_jc_on_grid(params: &ModelParams, rho0: &AtomCavityState, t_grid: &[f64], max_dt: f64) -> Result<JcRun> {
    check_step(params, max_dt)?;
    if t_grid.is_empty() || t_grid.windows(2).any(|w| !(w[1] >= w[0])) {
        return Err(Error::invalid("time grid must be non-empty and non-decreasing"));
    }
    let n_fock = rho0.n_fock();
    let mut stepper = Stepper {
        gen: Generator::new(params, n_fock),
        n_fock,
        diagnostics: JcDiagnostics::new(),
    };
    stepper.diagnostics.observe(rho0);

    let mut states = Vec::with_capacity(t_grid.len());
    states.push(rho0.clone());
    let mut rho = rho0.rho().clone();
    for w in t_grid.windows(2) {
        let span = w[1] - w[0];
        let sub = (span / max_dt - 1e-9).ceil().max(if span > 0.0 { 1.0 } else { 0.0 }) as usize;
        let mut current = states.last().unwrap().clone();
        for k in 0..sub {
            let h = span / sub as f64;
            current = stepper.advance(&rho, h, w[0] + (k + 1) as f64 * h)?;
            rho = current.rho().clone();
        }
        states.push(current);
    }
    Ok(JcRun {
        times: t_grid.to_vec(),
        states,
        diagnostics: stepper.diagnostics,
    })
}
