use alloc::string::String;
use alloc::vec::Vec;

use crate::Grade;

/// Errors raised by the algorithmic core.
///
/// Variants that mention an invariant are internal consistency failures: they
/// indicate a bug or corrupted input rather than a user mistake.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("field characteristic {0} is not prime")]
    NotPrime(u32),
    #[error("invalid simplex: {0}")]
    InvalidSimplex(String),
    #[error("duplicate simplex {0:?}")]
    DuplicateSimplex(Vec<u32>),
    #[error("complex not closed under faces: face {face:?} of {simplex:?} is missing")]
    MissingFace { simplex: Vec<u32>, face: Vec<u32> },
    #[error("grade not monotone: face {face:?} has grade {face_grade} above coface {simplex:?} at {grade}")]
    NonMonotone {
        simplex: Vec<u32>,
        face: Vec<u32>,
        grade: Grade,
        face_grade: Grade,
    },
    #[error("empty point cloud")]
    EmptyPointCloud,
    #[error("points have inconsistent dimensions")]
    RaggedPoints,
    #[error("step must be positive")]
    NonPositiveStep,
    #[error("cube side must be positive")]
    NonPositiveSide,
    #[error("epsilon must be non-negative")]
    NegativeEpsilon,
    #[error("landmark list is empty")]
    NoLandmarks,
    #[error("landmark list contains duplicates")]
    DuplicateLandmarks,
    #[error("landmark {0} is not a vertex of the complex")]
    UnknownLandmark(u32),
    #[error("vertex {0} is unreachable from every landmark")]
    Unreachable(u32),
    #[error("unknown patch index {0}")]
    UnknownPatch(usize),
    #[error("empty patch index set")]
    EmptyPatchSet,
    #[error("cover leaves {0} simplices uncovered")]
    InvalidCover(usize),
    #[error("non-homogeneous column {column}: row {row} has degree {row_degree} above column degree {degree}")]
    NonHomogeneous {
        column: usize,
        row: usize,
        row_degree: Grade,
        degree: Grade,
    },
    #[error("columns not sorted by degree")]
    UnsortedColumns,
    #[error("element is not in the span of the basis")]
    NotInSpan,
    #[error("morphism is not well defined: {0}")]
    IllDefinedMorphism(String),
    #[error("grading violation in interval reduction: [{c},{d}] against [{a},{b}]")]
    GradingViolation { a: Grade, b: u64, c: Grade, d: u64 },
    #[error("invariant violated in {module}: {detail}")]
    Invariant { module: &'static str, detail: String },
    #[error("spectral sequence has not collapsed at page {0}")]
    NotCollapsed(usize),
    #[error("worker count must be positive")]
    ZeroWorkers,
}

impl Error {
    pub(crate) fn invariant(module: &'static str, detail: impl Into<String>) -> Self {
        Error::Invariant {
            module,
            detail: detail.into(),
        }
    }
}

pub type Result<T, E = Error> = core::result::Result<T, E>;
