//! File-based front end over `fourier-jumps`: spectrum synthesis, recovery,
//! convergence benchmarks, the adversarial pair and bound queries.

pub mod bench;
pub mod commands;
pub mod io;

use fourier_jumps::ErrorClass;
use std::path::PathBuf;
use std::str::FromStr;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Core(#[from] fourier_jumps::Error),
    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("{}: malformed JSON: {source}", path.display())]
    Json {
        path: PathBuf,
        source: serde_json::Error,
    },
    #[error("csv output: {0}")]
    Csv(#[from] csv::Error),
    #[error("{0}")]
    Usage(String),
}

impl CliError {
    /// 2 for model/contract violations, 3 for numerical failures, 4 for I/O.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Core(e) => match e.class() {
                ErrorClass::Contract => 2,
                ErrorClass::Numeric => 3,
            },
            CliError::Usage(_) => 2,
            CliError::Io { .. } | CliError::Json { .. } | CliError::Csv(_) => 4,
        }
    }
}

pub type Result<T> = std::result::Result<T, CliError>;

/// `double` or `extended:<digits>`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Precision {
    #[default]
    Double,
    Extended(u32),
}

impl FromStr for Precision {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        if s == "double" {
            return Ok(Precision::Double);
        }
        let digits = s
            .strip_prefix("extended:")
            .ok_or_else(|| format!("precision '{s}' is not 'double' or 'extended:<digits>'"))?;
        let n: u32 = digits
            .parse()
            .map_err(|_| format!("bad digit count '{digits}'"))?;
        if n < 16 {
            return Err("extended precision needs at least 16 digits".into());
        }
        Ok(Precision::Extended(n))
    }
}

impl std::fmt::Display for Precision {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Precision::Double => write!(f, "double"),
            Precision::Extended(n) => write!(f, "extended:{n}"),
        }
    }
}

impl Precision {
    /// Installs the working precision for extended arithmetic.
    pub fn activate(self) -> Result<()> {
        match self {
            Precision::Double => Ok(()),
            #[cfg(feature = "extended")]
            Precision::Extended(n) => {
                fourier_jumps::real::set_working_digits(n);
                Ok(())
            }
            #[cfg(not(feature = "extended"))]
            Precision::Extended(_) => Err(CliError::Usage(
                "this build has no extended-precision support".into(),
            )),
        }
    }
}
