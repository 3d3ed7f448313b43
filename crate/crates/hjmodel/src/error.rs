//! Crate-wide error type.
//!
//! Variants map onto the CLI exit codes: validation errors exit 2,
//! degenerate-input errors exit 3, numeric failures exit 4.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    /// Input data violates a precondition (nonpositive price, bad CSV row, ...).
    #[error("validation error: {0}")]
    Validation(String),

    /// A value left the representable/finite range during evaluation.
    #[error("numeric range error in {context}: {detail}")]
    NumericRange { context: String, detail: String },

    /// Three lines of the family pass through one point (within tolerance),
    /// so the arrangement combinatorics is not defined at this `rho`.
    #[error(
        "degenerate arrangement at rho={rho}: lines {t1},{t2},{t3} are concurrent \
         (|det|={det:.3e}); perturb rho and retry"
    )]
    DegenerateArrangement {
        rho: f64,
        t1: usize,
        t2: usize,
        t3: usize,
        det: f64,
    },

    /// Two coefficients that must be strictly ordered are equal within tolerance.
    #[error("tie between lines {0:?}: coefficients equal within tolerance")]
    Tie(Vec<usize>),

    /// The sampled function is identically zero, so its Young transform is +inf.
    #[error("infeasible transform: function is zero on the whole grid")]
    InfeasibleTransform,

    /// A profit evaluator produced values inconsistent with convex duality.
    #[error("malformed profit function: {0}")]
    MalformedProfit(String),

    /// LP did not converge even with the exact-arithmetic fallback.
    #[error("numeric failure in LP solve: {0}")]
    LpFailure(String),

    /// An atom sits on a level set, so its theta-loading is ambiguous.
    #[error("ambiguous theta: atom {atom:?} lies within tolerance of level set t={t}")]
    AmbiguousTheta { atom: Vec<f64>, t: usize },

    /// Operation is outside the supported desk-scale range.
    #[error("capability error: {0}")]
    Capability(String),

    /// Braid move preconditions not met at the requested position.
    #[error("invalid braid move at position {position}: {reason}")]
    InvalidMove { position: usize, reason: String },

    /// Words have different permutation images, so connectivity is undefined.
    #[error("words are not comparable: permutation images differ")]
    NotComparable,

    /// No hexagon with the six required neighbor vertices at this vertex.
    #[error("tiling is not flippable at vertex {0:?}")]
    NotFlippable((i64, i64)),

    /// A snake whose vertex heights are not exactly {0,...,T}.
    #[error("malformed snake: {0}")]
    MalformedSnake(String),

    /// Root scan found more sign changes than the single admissible root.
    #[error("consistency error for triple {t1},{t2},{t3}: multiple determinant roots found")]
    MultipleRoots { t1: usize, t2: usize, t3: usize },

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),

    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    /// CLI exit code for this error class.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Validation(_) | Error::Capability(_) | Error::Json(_) => 2,
            Error::DegenerateArrangement { .. }
            | Error::Tie(_)
            | Error::AmbiguousTheta { .. }
            | Error::NotComparable
            | Error::NotFlippable(_)
            | Error::MalformedSnake(_)
            | Error::InvalidMove { .. } => 3,
            Error::NumericRange { .. }
            | Error::LpFailure(_)
            | Error::InfeasibleTransform
            | Error::MalformedProfit(_)
            | Error::MultipleRoots { .. }
            | Error::Io(_) => 4,
        }
    }
}
