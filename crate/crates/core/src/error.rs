use alloc::string::String;
use core::fmt;

/// Failure modes shared by every operation in the crate.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Error {
    /// An argument is outside the domain of the operation.
    Domain(String),
    /// Two objects that must agree in length or variable count do not.
    DimensionMismatch { expected: usize, found: usize },
    /// A polynomial has a term whose weight exceeds the degree bound of the basis.
    DegreeOverflow { degree: u32, bound: u32 },
    /// The requested object is larger than the configured cap.
    SizeCap { size: usize, cap: usize },
    /// A matrix that must have full column rank does not.
    RankDeficient { rank: usize, expected: usize },
    /// The zero vector was passed where a nonzero one is required.
    ZeroVector,
    /// The subspace is zero-dimensional.
    ZeroSubspace,
    /// `c_f^t A` vanishes, so the orthogonal hyperplane is undefined.
    Degenerate,
    /// Position outside `0..len`.
    IndexOutOfRange { index: usize, len: usize },
    /// Duplicate multi-index in a polynomial description.
    DuplicateIndex(String),
    /// A rational literal could not be parsed.
    Parse(String),
    /// A point does not lie on the unit sphere.
    OffSphere { point: usize, defect: String },
    /// A point set mixes exact and floating coordinates.
    MixedMode,
    /// Short-vector search volume exceeds the configured cap.
    SearchCap { volume: String, cap: u64 },
    /// A leading principal minor is not positive.
    NotPositiveDefinite { index: usize, minor: String },
    /// Powers of pi failed to cancel in the gamma oracle.
    PiMismatch(String),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::Domain(msg) => write!(f, "domain error: {msg}"),
            Error::DimensionMismatch { expected, found } => {
                write!(f, "dimension mismatch: expected {expected}, found {found}")
            }
            Error::DegreeOverflow { degree, bound } => {
                write!(f, "term of degree {degree} exceeds degree bound {bound}")
            }
            Error::SizeCap { size, cap } => write!(f, "size {size} exceeds cap {cap}"),
            Error::RankDeficient { rank, expected } => {
                write!(f, "rank deficient: rank {rank}, expected {expected}")
            }
            Error::ZeroVector => f.write_str("zero vector"),
            Error::ZeroSubspace => f.write_str("zero subspace"),
            Error::Degenerate => f.write_str("degenerate: c_f^t A is the zero vector"),
            Error::IndexOutOfRange { index, len } => {
                write!(f, "index {index} out of range for length {len}")
            }
            Error::DuplicateIndex(m) => write!(f, "duplicate multi-index {m}"),
            Error::Parse(s) => write!(f, "cannot parse rational {s:?}"),
            Error::OffSphere { point, defect } => {
                write!(
                    f,
                    "point {point} is off the unit sphere (|x|^2 - 1 = {defect})"
                )
            }
            Error::MixedMode => f.write_str("point set mixes exact and float coordinates"),
            Error::SearchCap { volume, cap } => {
                write!(f, "search volume {volume} exceeds cap {cap}")
            }
            Error::NotPositiveDefinite { index, minor } => {
                write!(
                    f,
                    "leading principal minor {index} is not positive ({minor})"
                )
            }
            Error::PiMismatch(s) => write!(f, "powers of pi do not cancel: {s}"),
        }
    }
}

impl core::error::Error for Error {}

pub type Result<T> = core::result::Result<T, Error>;
