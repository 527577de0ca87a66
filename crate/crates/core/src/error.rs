use thiserror::Error;

/// Failure categories shared by every module of the crate.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An argument lies outside the mathematical domain of a function.
    #[error("domain error: {0}")]
    Domain(String),

    /// Invalid geometry, scenario or sweep configuration.
    #[error("invalid configuration: {0}")]
    Config(String),

    /// Element index outside `1..=N`.
    #[error("element index {index} out of range 1..={len}")]
    Index { index: usize, len: usize },

    /// Operation only defined for the other array kind.
    #[error("operation `{op}` is not defined for a {kind} geometry")]
    Kind { op: &'static str, kind: &'static str },

    /// A position closer than the radiative near-field lower bound (1.2 D).
    #[error("range {range_m} m is inside the reactive limit {limit_m} m")]
    NearFieldValidity { range_m: f64, limit_m: f64 },

    /// Root finder called with a bracket that does not change sign.
    #[error("no sign change on [{lo}, {hi}]")]
    Bracket { lo: f64, hi: f64 },

    /// Numerical procedure failed to produce a result.
    #[error("numerical failure: {0}")]
    Numerical(String),

    /// Zero or otherwise degenerate vector.
    #[error("degenerate input: {0}")]
    Degenerate(String),
}

impl Error {
    /// True for failures of numerical procedures rather than of the inputs.
    pub fn is_numerical(&self) -> bool {
        matches!(self, Error::Bracket { .. } | Error::Numerical(_))
    }
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn ensure_finite(x: f64, what: &str) -> Result<()> {
    if x.is_finite() {
        Ok(())
    } else {
        Err(Error::Domain(format!("{what} must be finite, got {x}")))
    }
}
