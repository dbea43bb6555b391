//! Error type shared by all modules.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("degenerate lattice: basis vectors are linearly dependent")]
    DegenerateLattice,
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("symbol is rank deficient on the unit sphere (alpha0 = {alpha0:.3e})")]
    RankDeficientSymbol { alpha0: f64 },
    #[error("sampling grid too coarse: {grid} points per axis for cutoff {cutoff}")]
    GridTooCoarse { grid: usize, cutoff: usize },
    #[error("field is not Hermitian positive definite: {0}")]
    NonPositive(String),
    #[error("singular pointwise value encountered while inverting a field")]
    SingularValue,
    #[error("mode-set/coefficient band mismatch (aliasing): {0}")]
    Aliasing(String),
    #[error("branch tracking ambiguous at t = {t:.3e}; refine the t-grid")]
    BranchTracking { t: f64 },
    #[error("bisection bracket failure: f({a}) and f({b}) have the same sign")]
    BisectionBracket { a: f64, b: f64 },
    #[error("sharpness probe inapplicable: N0(theta0) vanishes")]
    ProbeInapplicable,
    #[error("unknown preset '{0}'")]
    UnknownPreset(String),
    #[error("config error: {0}")]
    Config(String),
    #[error("tolerance failure: {0}")]
    Tolerance(String),
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
