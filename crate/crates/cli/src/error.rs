use stackelberg_core::discretize::DiscretizeError;
use stackelberg_core::game::GameError;
use stackelberg_core::incentive::IncentiveError;
use stackelberg_core::matching::MatchingError;
use thiserror::Error;

/// Every failure the binary can report, grouped by exit code.
#[derive(Debug, Error)]
pub enum CliError {
    #[error("input error: {0}")]
    Input(String),
    #[error("limit exceeded: {0}")]
    Limit(String),
    #[error("internal error: {0}")]
    Internal(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Internal(_) => 1,
            CliError::Input(_) => 2,
            CliError::Limit(_) => 3,
        }
    }

    pub fn input(msg: impl Into<String>) -> Self {
        CliError::Input(msg.into())
    }

    pub fn internal(msg: impl Into<String>) -> Self {
        CliError::Internal(msg.into())
    }
}

impl From<serde_json::Error> for CliError {
    fn from(e: serde_json::Error) -> Self {
        CliError::Input(format!("malformed JSON: {e}"))
    }
}

impl From<GameError> for CliError {
    fn from(e: GameError) -> Self {
        let msg = e.to_string();
        match e {
            GameError::SizeLimit { .. } => CliError::Limit(msg),
            GameError::NoFeasibleColumn | GameError::Lp(_) => CliError::Internal(msg),
            _ => CliError::Input(msg),
        }
    }
}

impl From<IncentiveError> for CliError {
    fn from(e: IncentiveError) -> Self {
        let msg = e.to_string();
        match e {
            IncentiveError::LimitExceeded { .. } => CliError::Limit(msg),
            IncentiveError::LpStatus(_) | IncentiveError::Lp(_) => CliError::Internal(msg),
            IncentiveError::Game(g) => g.into(),
            _ => CliError::Input(msg),
        }
    }
}

impl From<MatchingError> for CliError {
    fn from(e: MatchingError) -> Self {
        let msg = e.to_string();
        match e {
            MatchingError::SizeLimit { .. } | MatchingError::TooManyMatchings { .. } => CliError::Limit(msg),
            MatchingError::Game(g) => g.into(),
            _ => CliError::Input(msg),
        }
    }
}

impl From<DiscretizeError> for CliError {
    fn from(e: DiscretizeError) -> Self {
        let msg = e.to_string();
        match e {
            DiscretizeError::GridTooLarge { .. } => CliError::Limit(msg),
            DiscretizeError::Game(g) => g.into(),
            _ => CliError::Input(msg),
        }
    }
}
