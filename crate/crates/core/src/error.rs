use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error(
        "quadrature did not converge: error estimate {err_estimate:.3e} exceeds tolerance {tol:.3e} at {nodes} nodes"
    )]
    NonConvergence {
        err_estimate: f64,
        tol: f64,
        nodes: usize,
    },

    #[error("mirror reflection rate {r} is degenerate (|r| must be < 1 for this route)")]
    DegenerateMirror { r: f64 },

    #[error("series tail bound {bound:.3e} exceeds tolerance {tail_tol:.3e} at n_max = {n_max}")]
    TailTooLarge {
        bound: f64,
        tail_tol: f64,
        n_max: usize,
    },

    #[error("Fock truncation leak: population {population:.3e} in top level n = {level} at t = {time}")]
    TruncationLeak {
        population: f64,
        level: usize,
        time: f64,
    },

    #[error("step size {dt} too large for fastest rate {rate} (need dt * rate < 0.1)")]
    StepTooLarge { dt: f64, rate: f64 },

    #[error("invalid parameters: {0}")]
    InvalidParams(String),
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidParams(msg.into())
    }
}
