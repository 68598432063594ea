use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FieldError {
    #[error("division by zero")]
    DivisionByZero,
    #[error("conductor mismatch: {0} vs {1}")]
    ConductorMismatch(u32, u32),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PolyError {
    #[error("syntax error at byte {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error("unknown variable `{0}`")]
    UnknownVariable(String),
    #[error("conductor mismatch: {0} vs {1}")]
    ConductorMismatch(u32, u32),
    #[error("polynomial ring mismatch: {0}")]
    RingMismatch(String),
    #[error("polynomial is not divisible by the given divisor")]
    NotDivisible,
    #[error("matrix is singular")]
    SingularMatrix,
    #[error(transparent)]
    Field(#[from] FieldError),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GroupError {
    #[error("group closure exceeded cap of {0} elements")]
    CapExceeded(usize),
    #[error("generator {0} is singular")]
    SingularGenerator(usize),
    #[error("generator {0} is not a {1}x{1} matrix")]
    BadShape(usize, usize),
    #[error("matrix is not a member of the group")]
    NotAMember,
    #[error("not a reflection group: reflections generate a subgroup of order {reflection_closure} in a group of order {order}")]
    NotAReflectionGroup { order: usize, reflection_closure: usize },
    #[error("no generators given")]
    NoGenerators,
    #[error(transparent)]
    Field(#[from] FieldError),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum InvariantError {
    #[error("could not match the Molien series with invariant degrees up to {0}")]
    DegreeSearchFailed(usize),
    #[error("no algebraically independent choice of invariants found")]
    IndependenceSearchFailed,
    #[error("unknown group `{0}`")]
    UnknownGroup(String),
    #[error("invalid group specification: {0}")]
    BadSpec(String),
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error(transparent)]
    Poly(#[from] PolyError),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RewriteError {
    #[error("polynomial is not homogeneous")]
    NonHomogeneousInput,
    #[error("polynomial is not invariant: no expression in the fundamental invariants exists")]
    NotInvariant,
    #[error("coefficient system is rank deficient; invariants are not algebraically independent")]
    RankDeficient,
    #[error(transparent)]
    Poly(#[from] PolyError),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ConnectionError {
    #[error("Jacobian determinant vanishes; invariants are dependent")]
    SingularJacobian,
    #[error("entry ({row},{col}) of scaled matrix {ell} is not invariant")]
    NonInvariantEntry { ell: usize, row: usize, col: usize },
    #[error("entry ({row},{col}) of scaled matrix {ell} is not homogeneous")]
    NonHomogeneousEntry { ell: usize, row: usize, col: usize },
    #[error(transparent)]
    Rewrite(#[from] RewriteError),
    #[error(transparent)]
    Poly(#[from] PolyError),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum VerifyError {
    #[error("matrix {ell} entry ({row},{col}) does not share the common denominator")]
    DenominatorMismatch { ell: usize, row: usize, col: usize },
}

/// Top-level error used by the pipeline and the command-line front end.
#[derive(Debug, Error)]
pub enum Error {
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error(transparent)]
    Invariant(#[from] InvariantError),
    #[error(transparent)]
    Rewrite(#[from] RewriteError),
    #[error(transparent)]
    Connection(#[from] ConnectionError),
    #[error(transparent)]
    Verify(#[from] VerifyError),
    #[error("{0}")]
    Input(String),
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
