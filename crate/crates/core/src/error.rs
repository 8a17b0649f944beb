use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// A time lies outside the lifespan of a flow.
    #[error("time {time} is outside the admissible range (must be < {singular_time})")]
    Domain { time: f64, singular_time: f64 },

    #[error("geometry {0} has no finite singular time")]
    InfiniteSingularTime(String),

    #[error("degenerate line: spanning vectors are proportional")]
    DegenerateLine,

    #[error("spinor point must have a nonzero coordinate")]
    ZeroSpinor,

    #[error("invalid geometry: {0}")]
    InvalidGeometry(String),

    #[error("block traces differ ({plus} vs {minus}), first Bianchi identity cannot hold")]
    TraceMismatch { plus: f64, minus: f64 },

    #[error("matrix is not symmetric at ({row}, {col})")]
    NotSymmetric { row: usize, col: usize },

    #[error("degenerate input: {0}")]
    DegenerateInput(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}
