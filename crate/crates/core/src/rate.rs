use std::fmt;

/// Which route produced a decay ratio.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Method {
    ClosedForm,
    Quadrature,
    Series,
    Limit,
}

impl Method {
    pub fn as_str(self) -> &'static str {
        match self {
            Method::ClosedForm => "closed_form",
            Method::Quadrature => "quadrature",
            Method::Series => "series",
            Method::Limit => "limit",
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Dimensionless decay ratio `Γ / Γ_free`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RateResult {
    pub ratio: f64,
    pub method: Method,
    /// Absolute error estimate on `ratio`; zero for exact closed forms.
    pub err_estimate: f64,
}

impl RateResult {
    pub(crate) fn new(ratio: f64, method: Method, err_estimate: f64) -> Self {
        debug_assert!(ratio.is_finite(), "non-finite ratio from {method}");
        debug_assert!(err_estimate >= 0.0);
        Self {
            ratio,
            method,
            err_estimate,
        }
    }

    pub fn exact(ratio: f64, method: Method) -> Self {
        Self::new(ratio, method, 0.0)
    }
}
