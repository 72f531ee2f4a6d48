use thiserror::Error;

/// Failure modes shared by all modules of the crate.
#[derive(Debug, Error)]
pub enum Error {
    #[error("quaternion has zero modulus")]
    ZeroQuaternion,
    #[error("expected a unit pure quaternion (scalar {scalar:e}, modulus {modulus:e})")]
    NotUnitPure { scalar: f64, modulus: f64 },
    #[error("expected a pure quaternion (scalar part {scalar:e})")]
    NotPure { scalar: f64 },
    #[error("invalid grid: {0}")]
    BadGrid(String),
    #[error("non-finite sample at node ({m}, {n})")]
    NonFinite { m: usize, n: usize },
    #[error("fields live on different grids")]
    GridMismatch,
    #[error("field has zero L2 norm")]
    ZeroField,
    #[error("grid too small: {0}")]
    GridTooSmall(String),
    #[error("grid too large for the naive oracle: {n} nodes per axis (max {max})")]
    GridTooLarge { n: usize, max: usize },
    #[error("degenerate transform order: |sin({alpha})| = {sin_abs:e} is below the floor")]
    DegenerateOrder { alpha: f64, sin_abs: f64 },
    #[error("field is not unit-energy: L2 norm {norm}")]
    NotNormalized { norm: f64 },
    #[error("phase slopes do not commute: |b1 b2 - b2 b1| = {commutator:e}")]
    NonCommutingBetas { commutator: f64 },
    #[error("invalid extremal specification: {0}")]
    InvalidSpec(String),
    #[error("fast transform disagrees with the direct quadrature by {deviation:e}")]
    OracleMismatch { deviation: f64 },
    #[error("QSIG format error: {0}")]
    Format(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
