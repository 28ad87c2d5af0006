use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("game has {n} players; this path is limited to {max}")]
    TooManyPlayers { n: usize, max: usize },

    #[error("game must have at least one player")]
    EmptyGame,

    #[error("duplicate player id `{0}`")]
    DuplicateId(String),

    #[error("cannot parse probability `{input}`: {reason}")]
    ParseProbability { input: String, reason: String },

    #[error("probability {0} is outside [0, 1]")]
    ProbabilityOutOfRange(String),

    #[error("player index {index} out of range for a game of {n} players")]
    PlayerIndex { index: usize, n: usize },

    #[error("unknown player `{0}`")]
    UnknownPlayer(String),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("common denominator exceeds the supported limit of {limit}")]
    DenominatorOverflow { limit: u64 },

    #[error("probability of player {player} is not an exact rational; use delta rationalization")]
    InexactProbability { player: usize },

    #[error("rationalization tolerance must be positive, got {0}")]
    InvalidDelta(f64),

    #[error("capacity is not normalized (v(E) != 1)")]
    NotNormalized,

    #[error("capacity table has {got} entries, expected {expected}")]
    TableSize { got: usize, expected: usize },

    #[error("mean-field replacement is invalid for m = {m} > l^2 = {l_squared}")]
    MeanFieldValidity { m: u128, l_squared: u128 },

    #[error("exact rational power requires m <= {limit}, got {m}")]
    ExactPowerTooLarge { m: u128, limit: u128 },

    #[error("game is not homogeneous")]
    NotHomogeneous,

    #[error("monte carlo sample count must be at least 1")]
    ZeroSamples,

    #[error("game file: {0}")]
    GameFile(String),

    #[error("exact computation infeasible: {0}")]
    Infeasible(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    /// Process exit code used by the command-line front end.
    pub fn exit_code(&self) -> u8 {
        match self {
            Error::TooManyPlayers { .. } | Error::Infeasible(_) => 3,
            _ => 2,
        }
    }
}
