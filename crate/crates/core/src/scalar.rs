//! Floating point abstraction shared by every numeric type in the crate.

use std::fmt::{Debug, Display};

use num_traits::{Float, FloatConst};
use rustfft::FftNum;
use serde::Serialize;

/// Real scalar the crate is generic over: `f32` or `f64`.
///
/// Everything downstream of the quaternion type is written against this
/// trait, so the same transform and moment code runs in either precision.
/// Tolerances in this crate are tuned for `f64`.
pub trait Scalar:
    Float + FloatConst + FftNum + Debug + Display + Default + Serialize + Send + Sync + 'static
{
    /// Converts an `f64` literal into the scalar type.
    #[inline]
    fn lit(v: f64) -> Self {
        Self::from_f64(v).expect("f64 literal representable in scalar type")
    }

    /// Converts a node index or count into the scalar type.
    #[inline]
    fn from_index(i: usize) -> Self {
        Self::from_usize(i).expect("index representable in scalar type")
    }

    #[inline]
    fn to_f64_lossy(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }
}

impl Scalar for f32 {}
impl Scalar for f64 {}

/// Sums a slice with a fixed pairwise reduction tree.
///
/// The split points depend only on the slice length, so the result is
/// bit-reproducible for identical inputs.
pub fn pairwise_sum<T>(values: &[T]) -> T
where
    T: Copy + std::ops::Add<Output = T> + num_traits::Zero,
{
    const BLOCK: usize = 8;
    if values.len() <= BLOCK {
        let mut acc = T::zero();
        for &v in values {
            acc = acc + v;
        }
        return acc;
    }
    let mid = values.len() / 2;
    pairwise_sum(&values[..mid]) + pairwise_sum(&values[mid..])
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pairwise_sum_matches_exact_integers() {
        let v: Vec<f64> = (1..=1000).map(f64::from).collect();
        assert_eq!(pairwise_sum(&v), 500_500.0);
        assert_eq!(pairwise_sum::<f64>(&[]), 0.0);
    }

    #[test]
    fn pairwise_sum_is_reproducible() {
        let v: Vec<f64> = (0..4097).map(|i| (i as f64 * 0.37).sin()).collect();
        assert_eq!(pairwise_sum(&v).to_bits(), pairwise_sum(&v).to_bits());
    }
}
