use thiserror::Error;

/// Errors shared across the construction and verification modules.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("topology is missing the empty set")]
    MissingEmptySet,
    #[error("topology is missing the full point set")]
    MissingFullSet,
    #[error("family not closed under intersection of sets #{0} and #{1}")]
    NotClosedUnderIntersection(usize, usize),
    #[error("family not closed under union of sets #{0} and #{1}")]
    NotClosedUnderUnion(usize, usize),
    #[error("size guard exceeded: {what} = {actual} > {bound}")]
    SizeGuardExceeded {
        what: &'static str,
        actual: usize,
        bound: usize,
    },
    #[error("chain level {0} not built")]
    LevelNotBuilt(usize),
    #[error("no topology set at chain level {0}")]
    TopologyNotSet(usize),
    #[error("set is not open in the space")]
    NotOpen,
    #[error("map is not continuous")]
    NotContinuous,
    #[error("codomain must be the Sierpinski space")]
    WrongCodomain,
    #[error("topology at level {0} is not T0")]
    NotT0(usize),
    #[error("induced family failed topology axioms: {0}")]
    InternalAxiomFailure(Box<Error>),
    #[error("parse error at line {line}: {reason}")]
    ParseError { line: usize, reason: String },
    #[error("duplicate name `{0}`")]
    DuplicateName(String),
    #[error("dangling reference `{0}`")]
    DanglingReference(String),
    #[error("unknown name `{0}`")]
    UnknownName(String),
}

pub type Result<T> = std::result::Result<T, Error>;
