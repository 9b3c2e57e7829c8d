//! Open-system dynamics of the emitter.
//!
//! * [`evolve_jc`]: resonant Jaynes-Cummings model with independent cavity
//!   (`κ`) and atomic (`Γ`) decay channels, fourth-order Runge-Kutta on the
//!   full atom ⊗ Fock density matrix.
//! * [`evolve_single_rate`]: a lone two-level atom decaying at one rate
//!   `Γ_cav`, solved in closed form.
//! * [`unravel_jumps`]: the same single-rate model as an ensemble of
//!   quantum-jump trajectories.
//!
//! Both master equations use the trace-preserving decaying convention
//! `Γ σ⁻ρσ⁺ − (Γ/2){σ⁺σ⁻, ρ}`. Time is in the units of the rates; `ħ = 1`.

mod compare;
mod jc;
mod jumps;
mod params;
mod single_rate;
mod state;

pub use compare::{fit_exponential_rate, model_discrepancy, Discrepancy};
pub use jc::{evolve_jc, evolve_jc_on_grid, JcDiagnostics, JcRun, LEAK_THRESHOLD};
pub use jumps::{unravel_jumps, TrajectoryEnsemble};
pub use params::{cooperativity, CouplingRegime, ModelParams};
pub use single_rate::evolve_single_rate;
pub use state::{AtomCavityState, AtomState};
