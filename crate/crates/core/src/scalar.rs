//! Scalar abstraction so the numeric pipeline can run in f32 or f64.

use std::fmt::{Debug, Display};
use std::iter::Sum;

use num_traits::{Float, FromPrimitive, NumAssign};

/// Floating-point sample type for every series and filter in this crate.
///
/// Blanket-implemented; `f32` and `f64` are the intended instantiations.
/// f64 is the default everywhere precision matters (filter construction
/// solves a regularized normal system whose conditioning eats f32 headroom).
pub trait Scalar:
    Float + NumAssign + FromPrimitive + Sum + Debug + Display + Send + Sync + 'static
{
    /// Lossy conversion from f64 carrying config constants into the scalar domain.
    #[inline]
    fn of(x: f64) -> Self {
        Self::from_f64(x).expect("finite f64 constant must convert")
    }

    #[inline]
    fn as_f64(self) -> f64 {
        self.to_f64().expect("scalar must convert to f64")
    }
}

impl<T> Scalar for T where
    T: Float + NumAssign + FromPrimitive + Sum + Debug + Display + Send + Sync + 'static
{
}
