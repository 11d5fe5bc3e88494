use std::fmt;

/// Exit code for success.
pub const EXIT_OK: i32 = 0;
/// Exit code for configuration or input validation failures.
pub const EXIT_USAGE: i32 = 2;
/// Exit code for I/O failures.
pub const EXIT_IO: i32 = 3;
/// Exit code for numerical failures (non-convergent fits, failed
/// reproduction checks).
pub const EXIT_NUMERICAL: i32 = 4;

/// Command failure with a stable exit-code mapping for scripting.
#[derive(Debug)]
pub enum CliError {
    /// Bad flags, config file contents, or input data (exit 2).
    Usage(String),
    /// Filesystem or stream failure (exit 3).
    Io(String),
    /// The computation itself failed or a checked value missed its
    /// tolerance (exit 4).
    Numerical(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => EXIT_USAGE,
            CliError::Io(_) => EXIT_IO,
            CliError::Numerical(_) => EXIT_NUMERICAL,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(msg) | CliError::Io(msg) | CliError::Numerical(msg) => f.write_str(msg),
        }
    }
}

impl From<squeeze_core::Error> for CliError {
    fn from(e: squeeze_core::Error) -> Self {
        match e {
            squeeze_core::Error::FitDidNotConverge { .. } => CliError::Numerical(e.to_string()),
            _ => CliError::Usage(e.to_string()),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use squeeze_core::calibrate::CalibrationFit;

    #[test]
    fn exit_codes_are_the_documented_contract() {
        assert_eq!(CliError::Usage(String::new()).exit_code(), 2);
        assert_eq!(CliError::Io(String::new()).exit_code(), 3);
        assert_eq!(CliError::Numerical(String::new()).exit_code(), 4);
    }

    #[test]
    fn core_errors_map_to_the_right_exit_codes() {
        let validation: CliError = squeeze_core::Error::InvalidParam {
            field: "points",
            reason: "must be at least 1".to_string(),
        }
        .into();
        assert_eq!(validation.exit_code(), EXIT_USAGE);

        let non_convergent: CliError = squeeze_core::Error::FitDidNotConverge {
            iterations: 300,
            best: Box::new(CalibrationFit {
                gain: 1.0,
                amp_noise: 0.0,
                temperature: 0.0,
                v_ac: None,
                rms_residual: 1.0,
                covariance_diag: vec![],
                evaluations: 10_000,
            }),
        }
        .into();
        assert_eq!(non_convergent.exit_code(), EXIT_NUMERICAL);
    }
}
