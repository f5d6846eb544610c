use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("non-finite input: {0}")]
    NonFinite(&'static str),

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("index {index} out of range for length {len}")]
    IndexOutOfRange { index: usize, len: usize },

    #[error("spectrum lies outside the negative elliptic {k}-cone (max_k = {max_k})")]
    OutsideCone { k: usize, max_k: usize },

    #[error("tensor violates curvature symmetries (residual {residual:e})")]
    CurvatureSymmetry { residual: f64 },

    #[error("polynomial fit failed: {0}")]
    FitFailure(&'static str),

    #[error("point is not on the unit sphere (|p| = {norm})")]
    OffSphere { norm: f64 },

    #[error("field type does not match the backend")]
    UnsupportedPairing,

    #[error("operation requires a flat backend")]
    CurvedBackend,

    #[error("sigma_{k} is not variational on a curved backend")]
    NonVariational { k: usize },

    #[error("metric scale must be positive, got {0}")]
    InvalidScale(f64),

    #[error("quadrature order {order} below minimum {min}")]
    QuadratureOrder { order: usize, min: usize },

    #[error("quadrature rule does not match the backend")]
    QuadratureMismatch,

    #[error("potential has no positive-definite quadratic part")]
    NotGaussianDominant,

    #[error("weighted volume {0} is not finite and positive")]
    BadVolume(f64),

    #[error("tau must be positive, got {0}")]
    InvalidTau(f64),

    #[error("operation requires shrinking mode")]
    ModeMismatch,

    #[error("base configuration is not a soliton (residual {0:e})")]
    NotSoliton(f64),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
