use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("polyhedron is unbounded")]
    UnboundedInput,
    #[error("empty input")]
    EmptyInput,
    #[error("candidate point is infeasible")]
    InfeasibleCandidate,
    #[error("point is infeasible")]
    InfeasiblePoint,
    #[error("parameter domain is empty")]
    EmptyDomain,
    #[error("feasible set is empty")]
    EmptyFeasible,
    #[error("intersection of the player constraint sets is empty")]
    EmptyIntersection,
    #[error("{0} feasible set is empty")]
    EmptySet(String),
    #[error("player {0} has a vector-valued payoff; a scalar payoff is required")]
    NotScalar(usize),
    #[error("invalid game: {0}")]
    InvalidGame(String),
    #[error("operation requires shared constraints")]
    NotShared,
    #[error("no player with index {0}")]
    InvalidPlayer(usize),
    #[error("syntax error at offset {offset}: {message}")]
    Syntax { offset: usize, message: String },
    #[error("unknown variable x[{player}][{index}]")]
    UnknownVariable { player: usize, index: usize },
    #[error("invalid grid: {0}")]
    InvalidGrid(String),
    #[error("grid contains no feasible point")]
    EmptyGrid,
    #[error("invalid rational literal `{0}`")]
    InvalidRational(String),
}
