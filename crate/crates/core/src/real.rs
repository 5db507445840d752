//! Scalar abstraction for the real-valued statistics (scores, BLEU, KL).

use std::fmt::{Debug, Display};
use std::iter::Sum;

use num_traits::{Float, FromPrimitive};

/// floating point: f32 or f64
pub trait Real: Float + FromPrimitive + Sum + Debug + Display + Default + Send + Sync + 'static {
    /// Exact conversion for counts; counts in this crate stay far below 2^24.
    fn of(n: usize) -> Self {
        Self::from_usize(n).expect("count representable as a float")
    }

    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("literal representable as a float")
    }
}

impl Real for f32 {}
impl Real for f64 {}

/// Arithmetic mean; `None` for an empty slice.
pub fn mean<F: Real>(values: impl IntoIterator<Item = F>) -> Option<F> {
    let mut n = 0usize;
    let mut total = F::zero();
    for v in values {
        total = total + v;
        n += 1;
    }
    (n > 0).then(|| total / F::of(n))
}
