//! Scalar abstraction for the message-passing model and its training loop.
//!
//! Everything numeric in `model` and `train` is written against [`Scalar`],
//! so the same code runs in `f64` (the default) and `f32`.

use std::fmt::{Debug, Display};
use std::iter::Sum;

use num_traits::{Float, FromPrimitive, ToPrimitive};

pub trait Scalar:
    Float + FromPrimitive + ToPrimitive + Sum + Debug + Display + Default + Send + Sync + 'static
{
    /// Lossy conversion used for constants and random draws.
    #[inline]
    fn of(x: f64) -> Self {
        Self::from_f64(x).expect("finite constant")
    }

    #[inline]
    fn as_f64(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }
}

impl Scalar for f32 {}
impl Scalar for f64 {}

/// Sum of a short slice computed in ascending value order.
///
/// The result depends only on the multiset of values, so it is bit-identical
/// under any permutation of the slice. `scratch` is reused between calls.
pub fn canonical_sum<T: Scalar>(values: &[T], scratch: &mut Vec<T>) -> T {
    scratch.clear();
    scratch.extend_from_slice(values);
    scratch.sort_by(|a, b| a.partial_cmp(b).unwrap_or(std::cmp::Ordering::Equal));
    scratch.iter().fold(T::zero(), |acc, &v| acc + v)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn canonical_sum_ignores_order() {
        let a = [0.1f64, 1e16, -1e16, 0.3, 0.7];
        let mut b = a;
        b.reverse();
        assert_eq!(canonical_sum(&a, &mut Vec::new()).to_bits(),
            canonical_sum(&b, &mut Vec::new()).to_bits());
        let long: Vec<f64> = (0..40).map(|i| (i as f64).sin()).collect();
        let mut rev = long.clone();
        rev.reverse();
        assert_eq!(canonical_sum(&long, &mut Vec::new()).to_bits(),
            canonical_sum(&rev, &mut Vec::new()).to_bits());
    }
}
