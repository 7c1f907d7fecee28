//! Scalar abstraction for the numeric kernels.
//!
//! All matrix and tape code is generic over [`Scalar`] so the same kernels run
//! in `f32` or `f64`. The crate-root aliases fix `f64` as the working
//! precision; the gradient checks in the test suite rely on it.

use num_traits::{Float, FromPrimitive, NumAssignOps, ToPrimitive};
use std::fmt::{Debug, Display};
use std::iter::Sum;

/// Floating-point scalar usable by every kernel in this crate.
pub trait Scalar:
    Float
    + FromPrimitive
    + ToPrimitive
    + NumAssignOps
    + Sum
    + Debug
    + Display
    + Default
    + Send
    + Sync
    + 'static
{
    /// Lossy conversion from `f64`, for literals and RNG draws.
    fn from_f64_lossy(v: f64) -> Self {
        Self::from_f64(v).expect("finite f64 must convert")
    }

    /// Widening conversion to `f64`, for metrics and reporting.
    fn to_f64_lossy(self) -> f64 {
        self.to_f64().expect("scalar must widen to f64")
    }
}

impl Scalar for f32 {}
impl Scalar for f64 {}
