use ndarray::Array2;
use num_complex::Complex64;

use crate::error::{Error, Result};

const HERMITIAN_TOL: f64 = 1e-10;
const TRACE_TOL: f64 = 1e-9;
const POSITIVITY_TOL: f64 = 1e-10;

fn zero() -> Complex64 {
    Complex64::new(0.0, 0.0)
}

/// Two-level atom density matrix, basis order `|0_A⟩` (ground), `|1_A⟩`
/// (excited).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AtomState([[Complex64; 2]; 2]);

impl AtomState {
    pub fn new(m: [[Complex64; 2]; 2]) -> Result<Self> {
        let herm = (m[0][1] - m[1][0].conj()).norm().max(m[0][0].im.abs()).max(m[1][1].im.abs());
        if herm > HERMITIAN_TOL {
            return Err(Error::invalid(format!("atomic state is not Hermitian (error {herm:.2e})")));
        }
        let tr = m[0][0].re + m[1][1].re;
        if (tr - 1.0).abs() > TRACE_TOL {
            return Err(Error::invalid(format!("atomic state has trace {tr}")));
        }
        if m[0][0].re < -POSITIVITY_TOL || m[1][1].re < -POSITIVITY_TOL {
            return Err(Error::invalid("atomic state has negative populations"));
        }
        Ok(Self(m))
    }

    pub fn excited() -> Self {
        let (o, i) = (zero(), Complex64::new(1.0, 0.0));
        Self([[o, o], [o, i]])
    }

    pub fn ground() -> Self {
        let (o, i) = (zero(), Complex64::new(1.0, 0.0));
        Self([[i, o], [o, o]])
    }

    /// Pure state `α|0⟩ + β|1⟩`, normalised.
    pub fn pure(alpha: Complex64, beta: Complex64) -> Result<Self> {
        let n = (alpha.norm_sqr() + beta.norm_sqr()).sqrt();
        if !(n > 0.0 && n.is_finite()) {
            return Err(Error::invalid("pure state amplitudes must not both vanish"));
        }
        let (a, b) = (alpha / n, beta / n);
        Ok(Self([[a * a.conj(), a * b.conj()], [b * a.conj(), b * b.conj()]]))
    }

    pub fn matrix(&self) -> [[Complex64; 2]; 2] {
        self.0
    }

    pub fn excited_population(&self) -> f64 {
        self.0[1][1].re
    }

    /// `⟨1|ρ|0⟩`.
    pub fn coherence(&self) -> Complex64 {
        self.0[1][0]
    }

    /// Eigen-decomposition `[(p, (α, β)); 2]` with unit eigenvectors.
    pub(crate) fn spectral(&self) -> [(f64, (Complex64, Complex64)); 2] {
        let a = self.0[0][0].re;
        let d = self.0[1][1].re;
        let b = self.0[1][0];
        if b.norm() < 1e-300 {
            let one = Complex64::new(1.0, 0.0);
            return [(a, (one, zero())), (d, (zero(), one))];
        }
        let mean = 0.5 * (a + d);
        let rad = (0.25 * (d - a) * (d - a) + b.norm_sqr()).sqrt();
        [mean + rad, mean - rad].map(|lambda| {
            let v0 = b.conj();
            let v1 = Complex64::new(lambda - a, 0.0);
            let n = (v0.norm_sqr() + v1.norm_sqr()).sqrt();
            (lambda.max(0.0), (v0 / n, v1 / n))
        })
    }
}

/// Atom ⊗ cavity density matrix on `|a⟩ ⊗ |n⟩`, `a ∈ {0, 1}`, `n ≤ N`,
/// flattened as `a (N + 1) + n`.
#[derive(Debug, Clone, PartialEq)]
pub struct AtomCavityState {
    rho: Array2<Complex64>,
    n_fock: usize,
}

impl AtomCavityState {
    pub fn new(rho: Array2<Complex64>, n_fock: usize) -> Result<Self> {
        let dim = 2 * (n_fock + 1);
        if rho.dim() != (dim, dim) {
            return Err(Error::invalid(format!("expected a {dim}x{dim} matrix for N = {n_fock}, got {:?}", rho.dim())));
        }
        let s = Self { rho, n_fock };
        let herm = s.hermiticity_error();
        if herm > HERMITIAN_TOL {
            return Err(Error::invalid(format!("state is not Hermitian (error {herm:.2e})")));
        }
        if (s.trace() - 1.0).abs() > TRACE_TOL {
            return Err(Error::invalid(format!("state has trace {}", s.trace())));
        }
        if s.min_diagonal() < -POSITIVITY_TOL {
            return Err(Error::invalid("state has negative populations"));
        }
        Ok(s)
    }

    pub(crate) fn from_raw(rho: Array2<Complex64>, n_fock: usize) -> Self {
        Self { rho, n_fock }
    }

    /// `ρ_atom ⊗ |n⟩⟨n|`.
    pub fn product(atom: &AtomState, n_fock: usize, photons: usize) -> Result<Self> {
        if photons > n_fock {
            return Err(Error::invalid(format!("{photons} photons exceed truncation N = {n_fock}")));
        }
        let dim = 2 * (n_fock + 1);
        let mut rho = Array2::zeros((dim, dim));
        let m = atom.matrix();
        for a in 0..2 {
            for b in 0..2 {
                rho[[a * (n_fock + 1) + photons, b * (n_fock + 1) + photons]] = m[a][b];
            }
        }
        Ok(Self { rho, n_fock })
    }

    /// `|1_A, 0⟩⟨1_A, 0|`.
    pub fn excited_vacuum(n_fock: usize) -> Self {
        Self::product(&AtomState::excited(), n_fock, 0).expect("vacuum always fits")
    }

    pub fn n_fock(&self) -> usize {
        self.n_fock
    }

    pub fn dim(&self) -> usize {
        2 * (self.n_fock + 1)
    }

    pub fn rho(&self) -> &Array2<Complex64> {
        &self.rho
    }

    pub(crate) fn index(&self, atom: usize, n: usize) -> usize {
        atom * (self.n_fock + 1) + n
    }

    pub fn trace(&self) -> f64 {
        self.rho.diag().iter().map(|z| z.re).sum()
    }

    /// `max |ρ − ρ†|`.
    pub fn hermiticity_error(&self) -> f64 {
        let d = self.dim();
        let mut worst: f64 = 0.0;
        for i in 0..d {
            for j in i..d {
                worst = worst.max((self.rho[[i, j]] - self.rho[[j, i]].conj()).norm());
            }
        }
        worst
    }

    pub fn min_diagonal(&self) -> f64 {
        self.rho.diag().iter().map(|z| z.re).fold(f64::INFINITY, f64::min)
    }

    pub fn max_diagonal(&self) -> f64 {
        self.rho.diag().iter().map(|z| z.re).fold(f64::NEG_INFINITY, f64::max)
    }

    /// `⟨σ⁺σ⁻⟩`, the atom traced over the cavity.
    pub fn excited_population(&self) -> f64 {
        (0..=self.n_fock).map(|n| self.rho[[self.index(1, n), self.index(1, n)]].re).sum()
    }

    pub fn fock_population(&self, n: usize) -> f64 {
        (0..2).map(|a| self.rho[[self.index(a, n), self.index(a, n)]].re).sum()
    }

    /// `⟨a†a⟩`.
    pub fn photon_number(&self) -> f64 {
        (0..=self.n_fock).map(|n| n as f64 * self.fock_population(n)).sum()
    }

    /// `⟨σ⁺σ⁻ + a†a⟩`.
    pub fn excitation_number(&self) -> f64 {
        self.excited_population() + self.photon_number()
    }

    pub fn reduced_atom(&self) -> AtomState {
        let mut m = [[zero(); 2]; 2];
        for (a, row) in m.iter_mut().enumerate() {
            for (b, entry) in row.iter_mut().enumerate() {
                *entry = (0..=self.n_fock).map(|n| self.rho[[self.index(a, n), self.index(b, n)]]).sum();
            }
        }
        AtomState(m)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn product_state_bookkeeping() {
        let atom = AtomState::pure(Complex64::new(0.6, 0.0), Complex64::new(0.0, 0.8)).unwrap();
        let s = AtomCavityState::product(&atom, 3, 2).unwrap();
        assert!((s.trace() - 1.0).abs() < 1e-15);
        assert!((s.excited_population() - 0.64).abs() < 1e-15);
        assert!((s.photon_number() - 2.0).abs() < 1e-15);
        assert_eq!(s.reduced_atom(), atom);
        assert!(AtomCavityState::new(s.rho().clone(), 3).is_ok());
    }

    #[test]
    fn rejects_bad_matrices() {
        let mut rho = AtomCavityState::excited_vacuum(1).rho().clone();
        assert!(AtomCavityState::new(rho.clone(), 2).is_err());
        rho[[0, 1]] = Complex64::new(0.1, 0.0);
        assert!(AtomCavityState::new(rho, 1).is_err());
        let o = zero();
        let half = Complex64::new(0.5, 0.0);
        assert!(AtomState::new([[half, o], [o, o]]).is_err());
    }

    #[test]
    #[allow(clippy::needless_range_loop)]
    fn spectral_reconstructs_state() {
        let atom = AtomState::new([
            [Complex64::new(0.3, 0.0), Complex64::new(0.1, -0.2)],
            [Complex64::new(0.1, 0.2), Complex64::new(0.7, 0.0)],
        ])
        .unwrap();
        let mut m = [[zero(); 2]; 2];
        for (p, (a, b)) in atom.spectral() {
            let v = [a, b];
            for i in 0..2 {
                for j in 0..2 {
                    m[i][j] += v[i] * v[j].conj() * p;
                }
            }
        }
        for i in 0..2 {
            for j in 0..2 {
                assert!((m[i][j] - atom.matrix()[i][j]).norm() < 1e-14);
            }
        }
    }
}
