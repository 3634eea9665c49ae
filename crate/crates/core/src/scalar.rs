use std::fmt::{Debug, Display};
use std::str::FromStr;

use num_traits::{Float, FromPrimitive, ToPrimitive};

/// Floating point type used for log10 probabilities and fitness values.
///
/// Implemented for `f32` and `f64`. Model training accumulates counts in
/// integers and only converts at the end, so `f32` models are usable, but the
/// fitness floor of `10^-99` underflows in `f32` and is clamped to the
/// smallest positive normal value instead.
pub trait LogFloat:
    Float + FromPrimitive + ToPrimitive + Debug + Display + FromStr + Default + Send + Sync + 'static
{
    /// Lowest log10 probability ever returned by a query (ARPA convention).
    fn log_floor() -> Self {
        Self::from_f64(-99.0).unwrap()
    }

    fn from_count(n: u64) -> Self {
        Self::from_u64(n).unwrap()
    }

    fn lit(x: f64) -> Self {
        Self::from_f64(x).unwrap()
    }

    fn ten() -> Self {
        Self::lit(10.0)
    }
}

impl LogFloat for f32 {}
impl LogFloat for f64 {}
