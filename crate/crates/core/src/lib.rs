//! Slice regular functions over the quaternions beyond slice domains.
//!
//! Functions are continued along paths that may change slice at real points. The crate
//! provides the continuation engine for square root, logarithm and polynomial models,
//! representation vectors that recover values on every slice from a few lifts, stem
//! functions with values in `H^{2^N}` and their tensor-algebra product, and polynomial
//! calculus with star products, reciprocals and Taylor series.

pub mod calculus;
pub mod checks;
pub mod error;
pub mod monodromy;
pub mod oracle;
pub mod paths;
pub mod qmat;
pub mod quat;
pub mod repf;
pub mod sampling;
pub mod sliceunits;
pub mod stemtensor;

pub use error::{Error, Result};
pub use monodromy::SliceFunctionModel;
pub use paths::{NPartPath, PathSegment};
pub use qmat::QuaternionMatrix;
pub use quat::{embed_slice, ImaginaryUnit, Quaternion};
pub use repf::RepresentationVector;
pub use sliceunits::SliceUnitMatrix;
