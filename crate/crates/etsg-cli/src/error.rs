use std::fmt;

/// Failure of a command, carrying the process exit code it maps to.
#[derive(Debug, Clone, PartialEq)]
pub enum CliError {
    /// Invalid flags, config file or physical parameters (exit 2).
    Config(String),
    /// A numerical routine failed on valid input (exit 3).
    Numeric(String),
    /// The verification suite found a failing check (exit 1).
    Verify(usize),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Verify(_) => 1,
            CliError::Config(_) => 2,
            CliError::Numeric(_) => 3,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Config(m) => write!(f, "configuration error: {m}"),
            CliError::Numeric(m) => write!(f, "numerical failure: {m}"),
            CliError::Verify(n) => write!(f, "verification failed: {n} check(s) did not pass"),
        }
    }
}

impl std::error::Error for CliError {}

impl From<etsg::Error> for CliError {
    fn from(e: etsg::Error) -> Self {
        use etsg::Error::*;
        match e {
            KleinRegime(_) | SubBarrierEnergy(_) | BelowRest(_) | InvalidInput(_) | GrazingIncidence(_)
            | OutOfAngularRange(_) | DegenerateDirection | NormalIncidenceUndefined => {
                CliError::Config(e.to_string())
            }
            _ => CliError::Numeric(e.to_string()),
        }
    }
}
