use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("syntax error: {0}")]
    Syntax(String),
    #[error("undeclared vertex `{0}`")]
    UndeclaredVertex(String),
    #[error("unknown arrow `{0}`")]
    UnknownArrow(String),
    #[error("duplicate id `{0}`")]
    DuplicateId(String),
    #[error("invalid Dynkin type {family}_{index}")]
    InvalidDynkinIndex { family: String, index: usize },
    #[error("unsupported format `{0}`")]
    UnsupportedFormat(String),
    #[error("truncation bounds differ ({0} vs {1})")]
    BoundMismatch(usize, usize),
    #[error("elements live over different quivers")]
    QuiverMismatch,
    #[error("word space of size {needed} exceeds the budget of {budget}")]
    OutOfMemoryBudget { needed: usize, budget: usize },
    #[error("truncation bound {got} too small, need at least {needed}")]
    BoundTooSmall { needed: usize, got: usize },
    #[error("input algebra has not stabilized")]
    NotStabilizedInput,
    #[error("quotient did not stabilize up to L = {0}")]
    NotStabilized(usize),
    #[error("idempotent set is empty")]
    EmptyIdempotent,
    #[error("tau inverse undefined at vertex `{0}`")]
    MeshUndefined(String),
    #[error("mesh pairing missing for arrow `{0}`")]
    PairingMissing(String),
    #[error("quiver has projective vertices: {0:?}")]
    NotStable(Vec<String>),
    #[error("validation failed: {0:?}")]
    ValidationFailed(Vec<String>),
    #[error("incompatible endpoints: {0}")]
    IncompatibleEndpoints(String),
    #[error("scalar for vertex `{0}` is not a unit")]
    NonUnitScalar(String),
    #[error("d^{0} composed with d^{prev} is nonzero", prev = .0 - 1)]
    NotAComplex(i32),
    #[error("matrix shape mismatch: {0}")]
    Shape(String),
    #[error("vertex `{0}` is projective")]
    ProjectiveVertex(String),
    #[error("middle terms missing for vertex `{0}`")]
    MissingMiddleTerms(String),
    #[error("element degree violates the presentation: {0}")]
    Degree(String),
    #[error("augmentation invalid: {0}")]
    NotAugmented(String),
    #[error("algebra is not finite-dimensional")]
    InfiniteDimensional,
    #[error("coefficient does not fit the scalar type")]
    Overflow,
    #[error("invalid relation: {0}")]
    InvalidRelation(String),
    #[error("invalid degree window [{0}, {1}]")]
    InvalidWindow(i32, i32),
}
