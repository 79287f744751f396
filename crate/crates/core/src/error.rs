use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("band limit {0} is too coarse (need at least 4)")]
    BandLimitTooSmall(usize),

    #[error("spherical-harmonic index (l={l}, m={m}) outside band limit {band_limit}")]
    OutOfBand { l: usize, m: i64, band_limit: usize },

    #[error(
        "Poisson right-hand side has nonzero mean: |∫rhs| = {integral:e}, allowed {allowed:e}"
    )]
    Incompatible { integral: f64, allowed: f64 },

    #[error("vector field is not conformal Killing: residual {residual:e} > {tolerance:e}")]
    NotConformalKilling { residual: f64, tolerance: f64 },

    #[error("gauge function must be positive (found {min} at some node)")]
    NonPositiveGauge { min: f64 },

    #[error("tensor is not trace-free: max |trace| = {trace:e}")]
    NotTraceFree { trace: f64 },

    #[error("degenerate tangent plane at node {node}: induced metric not positive definite")]
    DegenerateSurface { node: usize },

    #[error("torsion not gauged away: max |ζ| = {norm:e} > {tolerance:e}")]
    TorsionNotZero { norm: f64, tolerance: f64 },

    #[error("trχ is not constant: max deviation {deviation:e} > {tolerance:e}")]
    TrChiNotConstant { deviation: f64, tolerance: f64 },

    #[error("axis index {0} out of range (expected 1, 2 or 3)")]
    AxisOutOfRange(usize),

    #[error("invalid function spec '{spec}': {reason}")]
    FunctionSpec { spec: String, reason: String },

    #[error("unknown suite '{0}'")]
    UnknownSuite(String),

    #[error("unknown tolerance '{0}'")]
    UnknownTolerance(String),

    #[error("invalid band-limit list: {0}")]
    BandLimits(String),
}
