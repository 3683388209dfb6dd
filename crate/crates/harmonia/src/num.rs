//! Scalar abstraction for the numerical core.
//!
//! Everything downstream of graph construction is generic over [`Real`], so
//! the same code runs in `f32` or `f64`. The shipped CLI and the type aliases
//! at the crate root fix `f64`.

use std::fmt::{Debug, Display};
use std::iter::Sum;
use std::ops::{AddAssign, DivAssign, MulAssign, SubAssign};

use num_traits::{Float, FromPrimitive, ToPrimitive};

/// Floating-point scalar usable by the solvers and sweeps.
pub trait Real:
    Float
    + FromPrimitive
    + ToPrimitive
    + Sum
    + AddAssign
    + SubAssign
    + MulAssign
    + DivAssign
    + Debug
    + Display
    + Send
    + Sync
    + 'static
{
    /// Lossless-enough conversion from `f64` literals (tolerances, weights
    /// read from files). Panics on values a scalar type cannot represent at
    /// all, which cannot happen for finite config inputs.
    fn of(v: f64) -> Self {
        Self::from_f64(v).expect("finite f64 must convert")
    }

    /// Conversion to `f64` for reporting.
    fn to_f64_lossy(self) -> f64 {
        self.to_f64().expect("scalar must convert to f64")
    }
}

impl<T> Real for T where
    T: Float
        + FromPrimitive
        + ToPrimitive
        + Sum
        + AddAssign
        + SubAssign
        + MulAssign
        + DivAssign
        + Debug
        + Display
        + Send
        + Sync
        + 'static
{
}
