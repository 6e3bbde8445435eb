use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("duplicate variable name `{0}`")]
    DuplicateVariable(String),

    #[error("unknown variable `{0}`")]
    UnknownVariable(String),

    #[error("variable sets differ: [{left}] vs [{right}]")]
    VarSetMismatch { left: String, right: String },

    #[error("variable `{0}` is not bound at the evaluation point")]
    UnboundVariable(String),

    #[error("linear system is inconsistent (row {row} reduces to 0 = {value})")]
    InconsistentSystem { row: usize, value: String },

    #[error("linear system is not rectangular: {0}")]
    MalformedSystem(String),

    #[error("dimension mismatch: expected {expected}, got {actual}")]
    Dimension { expected: usize, actual: usize },

    #[error("invariant {invariant} is not defined on {domain}")]
    InvariantDomain { invariant: String, domain: String },

    #[error("index out of range: {0}")]
    IndexOutOfRange(String),

    #[error("commutator [{left}, {right}] lies outside the basis span: {witness}")]
    OutsideSpan {
        left: usize,
        right: usize,
        witness: String,
    },

    #[error("not a variational symmetry: {0}")]
    NotVariational(String),

    #[error("not a point symmetry of the Euler-Lagrange system: {0}")]
    NotSymmetry(String),

    #[error("vector field is not projectable: {0}")]
    NotProjectable(String),

    #[error("vector field depends on jet variable `{0}`; point symmetries depend on (t, q) only")]
    NotPointField(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("Newton iteration did not converge after {iterations} iterations (last update {last_update:.3e})")]
    NewtonDivergence { iterations: usize, last_update: f64 },

    #[error("non-finite state at t = {time}")]
    BlowUp { time: f64 },
}
