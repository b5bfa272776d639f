use std::fmt::{Debug, Display};
use std::iter::Sum;

use num_traits::{Float, FloatConst, NumAssign};
use serde::{de::DeserializeOwned, Serialize};

/// Floating-point scalar everything in this crate is generic over.
///
/// Implemented for `f32` and `f64`. Solver arithmetic stays in `S`;
/// random draws and configuration literals enter through [`Scalar::of`].
pub trait Scalar:
    Float
    + FloatConst
    + NumAssign
    + Sum
    + Debug
    + Display
    + Serialize
    + DeserializeOwned
    + Send
    + Sync
    + 'static
{
    /// Converts an `f64` literal into the scalar type.
    #[inline]
    fn of(v: f64) -> Self {
        Self::from(v).expect("f64 does not fit in scalar type")
    }

    /// Widens to `f64` (exact for `f32`/`f64`).
    #[inline]
    fn as_f64(self) -> f64 {
        self.to_f64().expect("scalar does not fit in f64")
    }

    #[inline]
    fn two() -> Self {
        Self::of(2.0)
    }

    #[inline]
    fn half() -> Self {
        Self::of(0.5)
    }
}

impl<T> Scalar for T where
    T: Float
        + FloatConst
        + NumAssign
        + Sum
        + Debug
        + Display
        + Serialize
        + DeserializeOwned
        + Send
        + Sync
        + 'static
{
}

/// Total order for scalars that treats NaN as equal to everything.
/// Evaluators are required to return finite values; this keeps sorting
/// panic-free if one misbehaves.
#[inline]
pub fn cmp_scalar<S: Scalar>(a: S, b: S) -> std::cmp::Ordering {
    a.partial_cmp(&b).unwrap_or(std::cmp::Ordering::Equal)
}
