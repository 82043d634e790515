use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("non-finite value in {0}")]
    NonFinite(String),

    #[error("matrix is not full column rank: smallest/largest singular value ratio {ratio:e} <= tolerance {tol:e}")]
    RankDeficient { ratio: f64, tol: f64 },

    #[error("power iteration did not converge after {iterations} iterations (best estimate {estimate})")]
    SpectralNormNotConverged { estimate: f64, iterations: usize },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("thresholding did not become stationary within {max_iter} refinement steps")]
    IterationLimit { max_iter: usize },

    #[error("brute-force search over 2^{n} supports refused (limit n <= {limit})")]
    TooManyColumns { n: usize, limit: usize },

    #[error(
        "dictionary has {columns} columns but only {samples} samples; \
         integrate over a longer horizon or lower the dictionary orders"
    )]
    TooFewSamples { samples: usize, columns: usize },

    #[error("state became non-finite at t = {time}")]
    BlowUp { time: f64 },

    #[error("{0} has zero norm")]
    ZeroNorm(&'static str),
}
