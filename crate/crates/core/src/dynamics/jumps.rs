//! Quantum-jump unravelling of single-rate decay.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::state::AtomState;
use crate::error::{Error, Result};
use crate::exec;

#[derive(Debug, Clone, PartialEq)]
pub struct TrajectoryEnsemble {
    pub n_traj: usize,
    pub seed: u64,
    pub times: Vec<f64>,
    /// Ensemble mean of the conditional excited population.
    pub excited_mean: Vec<f64>,
    /// Standard error of that mean.
    pub excited_stderr: Vec<f64>,
    /// Jump time of each trajectory, `None` if it never jumps.
    pub jump_times: Vec<Option<f64>>,
}

struct Trajectory {
    alpha_sq: f64,
    beta_sq: f64,
    jump: Option<f64>,
}

impl Trajectory {
    fn excited(&self, gamma: f64, t: f64) -> f64 {
        if matches!(self.jump, Some(tj) if t >= tj) {
            return 0.0;
        }
        let b = self.beta_sq * (-gamma * t).exp();
        let norm = self.alpha_sq + b;
        if norm > 0.0 { b / norm } else { 0.0 }
    }
}

fn uniform_open_closed(rng: &mut ChaCha8Rng) -> f64 {
    1.0 - rng.random::<f64>()
}

fn sample(gamma: f64, spectral: &[(f64, (Complex64, Complex64)); 2], seed: u64, index: usize) -> Trajectory {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index as u64);
    let pick = rng.random::<f64>();
    let (_, (alpha, beta)) = if pick < spectral[0].0 { spectral[0] } else { spectral[1] };
    let (alpha_sq, beta_sq) = (alpha.norm_sqr(), beta.norm_sqr());
    let v = uniform_open_closed(&mut rng);
    let jump = if gamma > 0.0 && beta_sq > 0.0 && v > alpha_sq {
        Some((beta_sq / (v - alpha_sq)).ln().max(0.0) / gamma)
    } else {
        None
    };
    Trajectory { alpha_sq, beta_sq, jump }
}

/// Runs `n_traj` independent trajectories of decay at rate `gamma_cav`.
///
/// Mixed initial states are sampled from their eigen-decomposition; each
/// pure trajectory then jumps at most once, with the waiting time drawn by
/// inverting the no-jump norm `|α|² + |β|² e^{−Γt}`. Trajectory `i` draws
/// from ChaCha8 stream `i` of `seed`, so results do not depend on threading.
pub fn unravel_jumps(
    gamma_cav: f64,
    rho0: &AtomState,
    n_traj: usize,
    seed: u64,
    t_grid: &[f64],
) -> Result<TrajectoryEnsemble> {
    if !(gamma_cav >= 0.0 && gamma_cav.is_finite()) {
        return Err(Error::invalid(format!("decay rate must be finite and >= 0, got {gamma_cav}")));
    }
    if n_traj == 0 {
        return Err(Error::invalid("need at least one trajectory"));
    }
    let spectral = rho0.spectral();
    let trajectories = exec::map_range(n_traj, |i| sample(gamma_cav, &spectral, seed, i));

    let n = n_traj as f64;
    let mut excited_mean = Vec::with_capacity(t_grid.len());
    let mut excited_stderr = Vec::with_capacity(t_grid.len());
    for &t in t_grid {
        let (mut s, mut s2) = (0.0, 0.0);
        for tr in &trajectories {
            let p = tr.excited(gamma_cav, t);
            s += p;
            s2 += p * p;
        }
        let mean = s / n;
        let var = if n_traj > 1 { ((s2 - n * mean * mean) / (n - 1.0)).max(0.0) } else { 0.0 };
        excited_mean.push(mean);
        excited_stderr.push((var / n).sqrt());
    }
    Ok(TrajectoryEnsemble {
        n_traj,
        seed,
        times: t_grid.to_vec(),
        excited_mean,
        excited_stderr,
        jump_times: trajectories.iter().map(|t| t.jump).collect(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exec::{with_mode, Mode};

    fn grid() -> Vec<f64> {
        (0..=20).map(|k| 0.25 * k as f64).collect()
    }

    #[test]
    fn excited_ensemble_tracks_exponential() {
        let e = unravel_jumps(1.0, &AtomState::excited(), 4000, 7, &grid()).unwrap();
        for ((t, m), se) in e.times.iter().zip(&e.excited_mean).zip(&e.excited_stderr) {
            let exact = (-t).exp();
            assert!((m - exact).abs() <= 3.0 * se + 1e-12, "t={t} mean={m} exact={exact} se={se}");
        }
    }

    #[test]
    fn superposition_ensemble_tracks_exponential() {
        let s = AtomState::pure(Complex64::new(0.6, 0.0), Complex64::new(0.0, 0.8)).unwrap();
        let e = unravel_jumps(2.0, &s, 4000, 11, &grid()).unwrap();
        for ((t, m), se) in e.times.iter().zip(&e.excited_mean).zip(&e.excited_stderr) {
            let exact = 0.64 * (-2.0 * t).exp();
            assert!((m - exact).abs() <= 3.0 * se + 1e-12, "t={t}");
        }
    }

    #[test]
    fn stderr_scales_as_inverse_sqrt() {
        let t = [0.7];
        let a = unravel_jumps(1.0, &AtomState::excited(), 2000, 3, &t).unwrap();
        let b = unravel_jumps(1.0, &AtomState::excited(), 8000, 3, &t).unwrap();
        let ratio = a.excited_stderr[0] / b.excited_stderr[0];
        assert!((ratio - 2.0).abs() < 0.4, "ratio={ratio}");
    }

    #[test]
    fn same_seed_same_result_any_mode() {
        let g = grid();
        let a = with_mode(Mode::Sequential, || unravel_jumps(1.0, &AtomState::excited(), 500, 42, &g).unwrap());
        let b = with_mode(Mode::Parallel, || unravel_jumps(1.0, &AtomState::excited(), 500, 42, &g).unwrap());
        assert_eq!(a, b);
        let c = unravel_jumps(1.0, &AtomState::excited(), 500, 43, &g).unwrap();
        assert_ne!(a.jump_times, c.jump_times);
    }

    #[test]
    fn ground_state_never_jumps() {
        let e = unravel_jumps(1.0, &AtomState::ground(), 100, 1, &grid()).unwrap();
        assert!(e.jump_times.iter().all(Option::is_none));
        assert!(e.excited_mean.iter().all(|&m| m == 0.0));
    }

    #[test]
    fn rejects_empty_ensemble() {
        assert!(unravel_jumps(1.0, &AtomState::excited(), 0, 1, &[0.0]).is_err());
    }
}
