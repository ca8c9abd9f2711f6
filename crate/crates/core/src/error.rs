use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("grid needs at least 3 nodes per side, got {0}")]
    TooFewNodes(usize),
    #[error("grid bounds must satisfy min < max, got [{min}, {max}]")]
    EmptyInterval { min: f64, max: f64 },
    #[error("grid cells are not square: hx = {hx}, hy = {hy}")]
    NonSquareCells { hx: f64, hy: f64 },
    #[error("grid functions live on different grids")]
    IncompatibleGrids,
    #[error("non-finite value {value} at node ({i}, {j})")]
    NonFinite { i: usize, j: usize, value: f64 },
    #[error("unsupported stencil level {0} (expected 1, 2 or 3)")]
    UnsupportedStencil(usize),
    #[error("stencil has no directions")]
    EmptyStencil,
    #[error("node ({i}, {j}) is not an interior node")]
    NotInterior { i: usize, j: usize },
    #[error("p = {0} is outside [2, inf]")]
    ExponentOutOfRange(f64),
    #[error("time step {rho} exceeds the monotonicity bound {bound}")]
    StepTooLarge { rho: f64, bound: f64 },
    #[error("invalid solver configuration: {0}")]
    InvalidConfig(String),
    #[error("grid with {nodes} nodes per side is too large ({bytes} bytes needed)")]
    GridTooLarge { nodes: usize, bytes: usize },
    #[error("poisson solve residual {residual:e} above tolerance {tolerance:e}")]
    PoissonNotConverged { residual: f64, tolerance: f64 },
    #[error("unknown exact solution '{0}'")]
    UnknownSolution(String),
    #[error("gradient norm {0:e} too small for the circle oracle")]
    VanishingGradient(f64),
    #[error("circle oracle needs at least 10^4 samples, got {0}")]
    TooFewSamples(usize),
    #[error("no exponential regime in the error history")]
    NoExponentialRegime,
    #[error("parse error: {0}")]
    Parse(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
