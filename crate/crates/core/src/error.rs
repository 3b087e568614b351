use thiserror::Error;

/// Errors shared by all kernel operations.
#[derive(Debug, Clone, Error, PartialEq)]
pub enum GeomError {
    #[error("zero vector has no sign class")]
    ZeroVector,

    #[error("singular matrix: {context}")]
    SingularMatrix { context: String },

    #[error("operands use different Hermitian forms")]
    FormMismatch,

    #[error("projectively coincident points: {context}")]
    CoincidentPoints { context: String },

    #[error("point is not on the boundary (sign class {sign:?}, residual {residual:.3e})")]
    NotNull {
        sign: crate::hermitian::SignClass,
        residual: f64,
    },

    #[error("matrix is not unitary for the requested form (max defect {defect:.3e})")]
    NotUnitary { defect: f64 },

    #[error("map is not loxodromic: {context}")]
    NotLoxodromic { context: String },

    #[error("curve is irregular at t = {t} (tangent cross product vanishes)")]
    IrregularCurve { t: f64 },

    #[error("curve passes through the point at infinity near t = {t}")]
    AtInfinity { t: f64 },

    #[error("parameter out of domain: {context}")]
    OutOfDomain { context: String },

    #[error("invalid input: {0}")]
    InvalidInput(String),
}

pub type Result<T> = std::result::Result<T, GeomError>;
