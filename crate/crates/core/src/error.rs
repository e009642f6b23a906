use thiserror::Error;

/// Every failure the library can report.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("index {index} outside the available range 1..={max}")]
    Range { index: i64, max: usize },

    #[error("invalid input: {0}")]
    Validation(String),

    #[error("order {0} exceeds the supported maximum")]
    UnsupportedOrder(usize),

    #[error("evaluation at x = {x} coincides with a jump; pass a side")]
    AmbiguousPoint { x: f64 },

    #[error("smooth-part quadrature did not converge (tail estimate {tail:.3e})")]
    Synthesis { tail: f64 },

    #[error("a-priori bounds violated: {0}")]
    Bounds(String),

    #[error("jump detection failed: numerical rank {rank}, expected {expected}")]
    Detection { rank: usize, expected: usize },

    #[error("bump of half-width {half_width} is not resolved at M = {max_index} (tail {tail:.3e})")]
    Resolution {
        half_width: f64,
        max_index: usize,
        tail: f64,
    },

    #[error("sample plan mismatch: {0}")]
    Plan(String),

    #[error("degenerate polynomial: leading coefficient vanishes")]
    DegeneratePolynomial,

    #[error("root finder did not converge (max residual {residual:.3e})")]
    RootFinder { residual: f64 },

    #[error("root disambiguation is ambiguous: prior {prior} is equidistant from two candidates")]
    Ambiguity { prior: f64 },

    #[error("Vandermonde solve is ill-conditioned (residual {residual:.3e})")]
    IllConditioned { residual: f64 },

    #[error("detected {detected} strong jump(s), expected {expected}")]
    Model { detected: usize, expected: usize },

    #[error("measurement failed: {0}")]
    Measurement(String),

    #[error("degenerate nodes: node gap must be positive")]
    DegenerateNodes,
}

/// Coarse classification used for process exit codes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorClass {
    /// Input violates a model or contract precondition.
    Contract,
    /// A numerical stage failed on admissible input.
    Numeric,
}

impl Error {
    pub fn class(&self) -> ErrorClass {
        match self {
            Error::Range { .. }
            | Error::Validation(_)
            | Error::UnsupportedOrder(_)
            | Error::AmbiguousPoint { .. }
            | Error::Bounds(_)
            | Error::Detection { .. }
            | Error::Resolution { .. }
            | Error::Plan(_)
            | Error::Model { .. } => ErrorClass::Contract,
            Error::Synthesis { .. }
            | Error::DegeneratePolynomial
            | Error::RootFinder { .. }
            | Error::Ambiguity { .. }
            | Error::IllConditioned { .. }
            | Error::Measurement(_)
            | Error::DegenerateNodes => ErrorClass::Numeric,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
