use alloc::string::String;

/// Failure modes shared by every module of the crate.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("region is empty (linear program infeasible)")]
    EmptyRegion,
    #[error("index out of range: {0}")]
    IndexOutOfRange(String),
    #[error("wave functions live on different grids")]
    GridMismatch,
    #[error("singularity at {re}+{im}i lies in the closed strip |Im θ| <= π")]
    SingularityInStrip { re: f64, im: f64 },
    #[error("transform outside the implemented subgroup: {0}")]
    UnsupportedTransform(String),
    #[error("vector is not in the domain of the continuation (tail ratio {tail_ratio:e})")]
    NotInDomain { tail_ratio: f64 },
    #[error("samples do not decay at the grid edges (edge magnitude {edge:e})")]
    BoundaryDecay { edge: f64 },
    #[error("support function is +∞ at the probed direction")]
    InfiniteSupportFunction,
    #[error("density is not supported here: {0}")]
    UnsupportedDensity(String),
    #[error("Fourier–Laplace integral diverges at the requested point")]
    Divergent,
    #[error("function vanishes at every probe")]
    ZeroFunction,
    #[error("quadrature self-estimate {estimate:e} exceeds the tolerance")]
    InsufficientSampling { estimate: f64 },
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
}

pub type Result<T> = core::result::Result<T, Error>;
