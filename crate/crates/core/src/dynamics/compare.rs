use super::jc::evolve_jc_on_grid;
use super::params::ModelParams;
use super::single_rate::evolve_single_rate;
use super::state::{AtomCavityState, AtomState};
use crate::error::{Error, Result};

/// Excited-population traces of the JC model and a single-rate model.
#[derive(Debug, Clone, PartialEq)]
pub struct Discrepancy {
    pub times: Vec<f64>,
    pub pop_jc: Vec<f64>,
    pub pop_single_rate: Vec<f64>,
    pub diff: Vec<f64>,
    pub max_abs: f64,
}

/// Runs both models from an excited atom and an empty cavity.
pub fn model_discrepancy(
    params: &ModelParams,
    gamma_cav: f64,
    t_grid: &[f64],
    max_dt: f64,
    n_fock: usize,
) -> Result<Discrepancy> {
    let jc = evolve_jc_on_grid(params, &AtomCavityState::excited_vacuum(n_fock), t_grid, max_dt)?;
    let pop_jc = jc.excited_population();
    let pop_single_rate: Vec<f64> = evolve_single_rate(gamma_cav, &AtomState::excited(), t_grid)?
        .iter()
        .map(AtomState::excited_population)
        .collect();
    let diff: Vec<f64> = pop_jc.iter().zip(&pop_single_rate).map(|(a, b)| a - b).collect();
    let max_abs = diff.iter().fold(0.0f64, |m, d| m.max(d.abs()));
    Ok(Discrepancy {
        times: t_grid.to_vec(),
        pop_jc,
        pop_single_rate,
        diff,
        max_abs,
    })
}

/// Least-squares slope of `−ln p(t)`; non-positive populations are skipped.
pub fn fit_exponential_rate(times: &[f64], pops: &[f64]) -> Result<f64> {
    if times.len() != pops.len() {
        return Err(Error::invalid("times and populations differ in length"));
    }
    let pts: Vec<(f64, f64)> = times
        .iter()
        .zip(pops)
        .filter(|(_, &p)| p > 0.0)
        .map(|(&t, &p)| (t, p.ln()))
        .collect();
    if pts.len() < 2 {
        return Err(Error::invalid("need at least two positive populations to fit"));
    }
    let n = pts.len() as f64;
    let tm = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let ym = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = pts.iter().map(|p| (p.0 - tm).powi(2)).sum();
    if sxx == 0.0 {
        return Err(Error::invalid("fit needs distinct times"));
    }
    let sxy: f64 = pts.iter().map(|p| (p.0 - tm) * (p.1 - ym)).sum();
    Ok(-sxy / sxx)
}
