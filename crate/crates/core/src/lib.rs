//! Block-circulant perfect arrays.
//!
//! Builds N-dimensional arrays with perfect periodic autocorrelation from a
//! base sequence that has the array orthogonality property (AOP) and a block
//! of perfect sequences. Varying the family parameter `k` yields a family
//! whose distinct members have exactly `d²` non-zero periodic
//! cross-correlation values, where `d` is the block size.
//!
//! Arrays are stored row-major with axis 0 indexing the base sequence.

pub mod algebra;
pub mod construction;
pub mod correlation;
pub mod error;
pub mod formats;
pub mod presets;
pub mod sequences;
pub mod tooling;

pub use algebra::{quat_conj, quat_mul, root_value, CorrelationValue, Quaternion, RootExponent};
pub use construction::{
    construct_family, construct_nd, ArrayData, ArrayFamily, ConstructionParams, PerfectArray,
};
pub use correlation::{
    nonzero_census, verify_perfect, xcorr_nd, xcorr_nd_fast, zcz_report, CorrelationResult,
    ShiftVector, Threshold, ZczReport,
};
pub use error::{Error, Result};
pub use sequences::{
    aop_check, decimate, frank, is_perfect, parse_quaternion_sequence, periodic_autocorrelation,
    rotate_right, AopReport, Domain, QuaternionSequence, RootSequence, Sequence, SequenceBlock,
};

/// Chop tolerance used when none is given.
pub const DEFAULT_TOLERANCE: f64 = 1e-5;
