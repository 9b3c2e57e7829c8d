use crate::error::{Error, Result};

/// Resonant JC parameters: coupling `g` (rad/s), cavity decay `κ` and
/// atomic decay `Γ` (1/s).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModelParams {
    pub g: f64,
    pub kappa: f64,
    pub gamma: f64,
}

impl ModelParams {
    pub fn new(g: f64, kappa: f64, gamma: f64) -> Result<Self> {
        if !g.is_finite() {
            return Err(Error::invalid(format!("coupling g must be finite, got {g}")));
        }
        if !(kappa >= 0.0 && kappa.is_finite()) || !(gamma >= 0.0 && gamma.is_finite()) {
            return Err(Error::invalid(format!("decay rates must be finite and >= 0, got kappa={kappa}, gamma={gamma}")));
        }
        Ok(Self { g, kappa, gamma })
    }

    pub(crate) fn fastest_rate(&self) -> f64 {
        self.g.abs().max(self.kappa).max(self.gamma)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CouplingRegime {
    /// `C <= 0.1`: the cavity mode can be adiabatically eliminated.
    Weak,
    Intermediate,
    /// `C >= 1`.
    Strong,
}

impl CouplingRegime {
    pub fn of(c: f64) -> Self {
        if c <= 0.1 {
            CouplingRegime::Weak
        } else if c < 1.0 {
            CouplingRegime::Intermediate
        } else {
            CouplingRegime::Strong
        }
    }
}

/// `C = g² / (κ Γ)`.
pub fn cooperativity(params: &ModelParams) -> Result<f64> {
    if params.kappa <= 0.0 || params.gamma <= 0.0 {
        return Err(Error::invalid("cooperativity needs kappa > 0 and gamma > 0"));
    }
    Ok(params.g * params.g / (params.kappa * params.gamma))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn values() {
        assert_eq!(cooperativity(&ModelParams::new(1.0, 1.0, 1.0).unwrap()).unwrap(), 1.0);
        assert_eq!(cooperativity(&ModelParams::new(2.0, 1.0, 1.0).unwrap()).unwrap(), 4.0);
        let c = cooperativity(&ModelParams::new(1.0, 20.0, 1.0).unwrap()).unwrap();
        assert!((c - 0.05).abs() < 1e-16);
        assert_eq!(CouplingRegime::of(c), CouplingRegime::Weak);
        assert_eq!(CouplingRegime::of(4.0), CouplingRegime::Strong);
    }

    #[test]
    fn zero_rates_are_invalid() {
        let p = ModelParams::new(1.0, 0.0, 1.0).unwrap();
        assert!(matches!(cooperativity(&p), Err(Error::InvalidParams(_))));
        assert!(ModelParams::new(1.0, -1.0, 1.0).is_err());
    }
}
