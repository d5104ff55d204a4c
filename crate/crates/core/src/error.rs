use thiserror::Error;

/// Errors raised by slicekit operations.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("division by a zero quaternion")]
    ZeroDivisor,
    #[error("not an imaginary unit (norm {norm})")]
    NotUnit { norm: f64 },
    #[error("shape mismatch: expected {expected}, found {found}")]
    ShapeMismatch { expected: String, found: String },
    #[error("matrix is singular")]
    Singular,
    #[error("index {index} out of range 1..={max}")]
    IndexOutOfRange { index: usize, max: usize },
    #[error("rows are not left slice-linearly independent")]
    NotIndependent,
    #[error("parameter {value} outside [0, 1]")]
    ParameterOutOfRange { value: f64 },
    #[error("part {index} ends at non-real point {re}{im:+}i")]
    NonRealJunction { index: usize, re: f64, im: f64 },
    #[error("part {index} does not start where the previous part ends")]
    DisconnectedSegments { index: usize },
    #[error("path has no parts")]
    EmptyPath,
    #[error("{x} is a branch point")]
    BranchPoint { x: f64 },
    #[error("path passes within {distance:e} of the branch point")]
    BranchPointCrossing { distance: f64 },
    #[error("unit switch requested away from the real axis")]
    NotAtRealPoint,
    #[error("segment does not start at the current point")]
    PathMismatch,
    #[error("germ keys differ between witnesses {first} and {second}")]
    KeysDiffer { first: usize, second: usize },
    #[error("point outside the stem function's disk")]
    OutOfDomain,
    #[error("stem systems are defined over different paths or disks")]
    IncompatibleSupports,
    #[error("symmetrization vanishes at [{}, {}, {}, {}]", witness[0], witness[1], witness[2], witness[3])]
    SymmetrizationZero { witness: [f64; 4] },
    #[error("point outside the sigma-ball of convergence")]
    OutOfBall,
    #[error("invalid input: {0}")]
    Invalid(String),
}

pub type Result<T> = std::result::Result<T, Error>;
