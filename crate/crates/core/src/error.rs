use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("generator degree {degree} exceeds truncation degree {max_degree}")]
    DegreeExceedsTruncation { degree: u32, max_degree: u32 },
    #[error("series operands differ in alphabet or truncation degree")]
    AlphabetMismatch,
    #[error("exp requires a zero constant term")]
    NonzeroConstantTerm,
    #[error("log requires constant term 1")]
    ConstantTermNotOne,
    #[error("invalid alphabet: {0}")]
    InvalidAlphabet(String),
    #[error("input is not a Lie element (residual {residual:e} at degree {degree})")]
    NotLieElement { degree: u32, residual: f64 },
    #[error("invalid ordering: {0}")]
    InvalidOrdering(String),
    #[error("invalid scheme: {0}")]
    InvalidScheme(String),
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
    #[error("order verification failed: {0}")]
    OrderNotVerified(String),
    #[error("unknown catalog entry `{0}`")]
    UnknownCatalogEntry(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("size guard exceeded: {0}")]
    SizeGuard(String),
    #[error("solver did not converge: {0}")]
    NoConvergence(String),
    #[error("singular Jacobian")]
    SingularJacobian,
    #[error("optimization failed: {0}")]
    OptimizationFailed(String),
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("invalid interaction graph: {0}")]
    InvalidGraph(String),
    #[error("partition failed: {message}")]
    PartitionFailed {
        message: String,
        certificate: Vec<usize>,
    },
    #[error("unsupported generator set: {0}")]
    UnsupportedGenerators(String),
    #[error("no valid fitting window: {0}")]
    NoValidWindow(String),
    #[error("invalid budget: {0}")]
    InvalidBudget(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
