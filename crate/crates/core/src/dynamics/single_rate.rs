use num_complex::Complex64;

use super::state::AtomState;
use crate::error::{Error, Result};

/// Closed-form solution of `ρ̇ = Γ(σ⁻ρσ⁺ − ½{σ⁺σ⁻, ρ})`: the excited
/// population decays as `e^{−Γt}`, coherences as `e^{−Γt/2}`.
pub fn evolve_single_rate(gamma_cav: f64, rho0: &AtomState, t_grid: &[f64]) -> Result<Vec<AtomState>> {
    if !(gamma_cav >= 0.0 && gamma_cav.is_finite()) {
        return Err(Error::invalid(format!("decay rate must be finite and >= 0, got {gamma_cav}")));
    }
    let m = rho0.matrix();
    let (pg0, pe0) = (m[0][0].re, m[1][1].re);
    Ok(t_grid
        .iter()
        .map(|&t| {
            let decay = (-gamma_cav * t).exp();
            let half = (-0.5 * gamma_cav * t).exp();
            let pe = pe0 * decay;
            AtomState::new([
                [Complex64::new(pg0 + (pe0 - pe), 0.0), m[0][1] * half],
                [m[1][0] * half, Complex64::new(pe, 0.0)],
            ])
            .expect("decay keeps the state physical")
        })
        .collect())
}
