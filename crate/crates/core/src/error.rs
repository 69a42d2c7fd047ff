use thiserror::Error;

/// Errors shared across the library.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("empty component")]
    EmptyComponent,
    #[error("not multilinear: label {0} repeated")]
    NotMultilinear(u32),
    #[error("label sets overlap at {0}")]
    LabelOverlap(u32),
    #[error("arity mismatch: expected {expected}, got {got}")]
    ArityMismatch { expected: usize, got: usize },
    #[error("elements belong to different operads")]
    OperadMismatch,
    #[error("BV requires odd d, got {0}")]
    EvenBvParameter(i64),
    #[error("no morphism from the associative operad is registered for this operad")]
    NoMultiplication,
    #[error("no operad morphism along the chain Assoc -> Comm -> Poiss_d -> BV_d for this pair")]
    NoSuchMorphism,
    #[error("element is not homogeneous")]
    NotHomogeneous,
    #[error("point {0} is not part of the diagram")]
    NoSuchPoint(u32),
    #[error("not a complex: boundary composition is nonzero")]
    NotAComplex,
    #[error("resource cap exceeded: {0}")]
    ResourceCap(String),
    #[error("internal invariant violated: {0}")]
    Invariant(String),
}

pub type Result<T> = std::result::Result<T, Error>;
