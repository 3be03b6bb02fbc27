use std::fmt;

use wavestring::Error;

/// Failure classes of the command line contract. The process exit code is
/// the class code: 1 config, 2 assumption, 3 numeric.
#[derive(Debug)]
pub enum CliError {
    Config(String),
    Assumption(String),
    Numeric(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => 1,
            CliError::Assumption(_) => 2,
            CliError::Numeric(_) => 3,
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            CliError::Config(_) => "config",
            CliError::Assumption(_) => "assumption",
            CliError::Numeric(_) => "numeric",
        }
    }

    pub fn message(&self) -> &str {
        match self {
            CliError::Config(m) | CliError::Assumption(m) | CliError::Numeric(m) => m,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} error: {}", self.kind(), self.message())
    }
}

impl std::error::Error for CliError {}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        let msg = e.to_string();
        match e {
            Error::ZeroDenominator
            | Error::NumeratorOriginZero
            | Error::InvalidGrid(_)
            | Error::InvalidTopology(_)
            | Error::DisconnectedTopology(_)
            | Error::CyclicTopology
            | Error::InvalidSimConfig(_)
            | Error::AgentIndex { .. }
            | Error::InvalidInverseConfig(_) => CliError::Config(msg),
            Error::AssumptionViolated(_)
            | Error::ImproperTF { .. }
            | Error::HeadwayRequiresStrictlyProper
            | Error::NoIntegrator => CliError::Assumption(msg),
            Error::PoleAtSample(_)
            | Error::DegreeZero
            | Error::RootsDidNotConverge
            | Error::SingularSample(_)
            | Error::BranchAmbiguous(_)
            | Error::ReflectionSingular(_)
            | Error::GridTooCoarse { .. }
            | Error::SingularSolve(_)
            | Error::NonFiniteState { .. }
            | Error::NonDecaying(_) => CliError::Numeric(msg),
        }
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;
