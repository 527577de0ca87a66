use std::fmt;
use std::process::ExitCode;

use nearfield_core::Error as CoreError;

/// Failure of a CLI run, grouped by exit status.
#[derive(Debug)]
pub enum CliError {
    /// Bad or inconsistent flags (exit 2).
    Usage(String),
    /// Invalid configuration, geometry or I/O (exit 3).
    Config(String),
    /// A numerical procedure failed (exit 4).
    Numerical(String),
    /// `validate` ran but at least one check failed (exit 1).
    ChecksFailed(usize),
}

impl CliError {
    pub fn category(&self) -> &'static str {
        match self {
            CliError::Usage(_) => "usage",
            CliError::Config(_) => "config",
            CliError::Numerical(_) => "numerical",
            CliError::ChecksFailed(_) => "validation",
        }
    }

    pub fn exit_code(&self) -> ExitCode {
        ExitCode::from(match self {
            CliError::ChecksFailed(_) => 1,
            CliError::Usage(_) => 2,
            CliError::Config(_) => 3,
            CliError::Numerical(_) => 4,
        })
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(m) | CliError::Config(m) | CliError::Numerical(m) => f.write_str(m),
            CliError::ChecksFailed(n) => write!(f, "{n} validation check(s) failed"),
        }
    }
}

impl std::error::Error for CliError {}

impl From<CoreError> for CliError {
    fn from(e: CoreError) -> Self {
        if e.is_numerical() {
            CliError::Numerical(e.to_string())
        } else {
            CliError::Config(e.to_string())
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Config(format!("i/o: {e}"))
    }
}

impl From<serde_json::Error> for CliError {
    fn from(e: serde_json::Error) -> Self {
        CliError::Config(format!("json: {e}"))
    }
}

pub type CliResult<T> = Result<T, CliError>;

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn core_errors_map_to_categories() {
        let numerical = CliError::from(CoreError::Bracket { lo: 0.0, hi: 1.0 });
        assert_eq!(numerical.category(), "numerical");
        assert_eq!(numerical.exit_code(), ExitCode::from(4));
        let validity = CliError::from(CoreError::NearFieldValidity { range_m: 0.1, limit_m: 0.5 });
        assert_eq!(validity.exit_code(), ExitCode::from(3));
        assert_eq!(CliError::Usage(String::new()).exit_code(), ExitCode::from(2));
    }
}
