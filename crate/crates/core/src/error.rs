use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("polynomial {0} is not monic with integer coefficients")]
    NotMonicInteger(String),
    #[error("polynomial {poly} is reducible: factor {factor}")]
    Reducible { poly: String, factor: String },
    #[error(
        "irreducibility of {0} could not be certified; rerun with --assert-irreducible to proceed"
    )]
    IrreducibilityUnknown(String),
    #[error("operands belong to different number fields")]
    FieldMismatch,
    #[error("division by zero in the number field")]
    DivisionByZero,
    #[error("polynomial {0} has repeated roots")]
    RepeatedRoots(String),
    #[error("{what}: still undecided at the precision cap of {cap} bits")]
    PrecisionCap { what: String, cap: u32 },
    #[error("exponent vector has length {got}, expected {expected}")]
    LengthMismatch { expected: usize, got: usize },
    #[error("embedding index {index} out of range 1..={max}")]
    BadIndex { index: usize, max: usize },
    #[error("{0} is not a unit (|norm| != 1)")]
    NotAUnit(String),
    #[error("{0} is not an algebraic integer")]
    NotIntegral(String),
    #[error("{0} is not totally positive")]
    NotTotallyPositive(String),
    #[error("unit group has {got} generators, but the field has s = {expected} real embeddings")]
    RankMismatch { expected: usize, got: usize },
    #[error("unit group is not admissible: {0}")]
    NotAdmissible(String),
    #[error(
        "field of signature (s, t) = ({s}, {t}) cannot define an OT manifold (need s >= 1, t >= 1)"
    )]
    NotOtSignature { s: usize, t: usize },
    #[error("complex dimension is {got}, expected {expected}")]
    Dimension { expected: usize, got: usize },
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("internal inconsistency: {0}")]
    Inconsistency(String),
    #[error("invalid manifest: {0}")]
    Manifest(String),
    #[error("I/O error: {0}")]
    Io(#[from] std::io::Error),
    #[error("JSON error: {0}")]
    Json(#[from] serde_json::Error),
}

impl Error {
    /// Stable machine-readable tag used in structured error reports.
    pub fn code(&self) -> &'static str {
        match self {
            Error::NotMonicInteger(_) => "not_monic_integer",
            Error::Reducible { .. } => "reducible",
            Error::IrreducibilityUnknown(_) => "irreducibility_unknown",
            Error::FieldMismatch => "field_mismatch",
            Error::DivisionByZero => "division_by_zero",
            Error::RepeatedRoots(_) => "repeated_roots",
            Error::PrecisionCap { .. } => "inconclusive",
            Error::LengthMismatch { .. } => "length_mismatch",
            Error::BadIndex { .. } => "bad_index",
            Error::NotAUnit(_) => "not_a_unit",
            Error::NotIntegral(_) => "not_integral",
            Error::NotTotallyPositive(_) => "not_totally_positive",
            Error::RankMismatch { .. } => "rank_mismatch",
            Error::NotAdmissible(_) => "not_admissible",
            Error::NotOtSignature { .. } => "not_ot_signature",
            Error::Dimension { .. } => "dimension",
            Error::Precondition(_) => "precondition",
            Error::Inconsistency(_) => "inconsistency",
            Error::Manifest(_) => "manifest",
            Error::Io(_) => "io",
            Error::Json(_) => "json",
        }
    }
}
