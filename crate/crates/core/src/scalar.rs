//! Scalar abstractions.
//!
//! Enumeration, convolution and marginalization only need a commutative
//! field, so they are written against [`Weight`], which is implemented for
//! `f32`, `f64` and the exact rationals. Anything that takes a logarithm
//! (entropies, divergences, bounds) needs [`Real`].

use std::fmt::{Debug, Display};

use num_bigint::BigInt;
use num_rational::{BigRational, Ratio};
use num_traits::{Float, FromPrimitive, Num, ToPrimitive};

/// A probability weight: anything closed under the field operations that
/// can be built from a small rational and compared.
pub trait Weight: Num + Clone + PartialOrd + Debug + Send + Sync + 'static {
    /// `numer / denom`. `denom` must be non-zero.
    fn from_ratio(numer: i64, denom: i64) -> Self;

    /// Nearest `f64`; used for sampling, reporting and the file format.
    fn to_f64(&self) -> f64;

    /// Admissible absolute deviation of a probability vector's sum from 1.
    fn normalization_tolerance() -> f64;
}

impl Weight for f64 {
    fn from_ratio(numer: i64, denom: i64) -> Self {
        numer as f64 / denom as f64
    }

    fn to_f64(&self) -> f64 {
        *self
    }

    fn normalization_tolerance() -> f64 {
        1e-12
    }
}

impl Weight for f32 {
    fn from_ratio(numer: i64, denom: i64) -> Self {
        (numer as f64 / denom as f64) as f32
    }

    fn to_f64(&self) -> f64 {
        f64::from(*self)
    }

    fn normalization_tolerance() -> f64 {
        1e-6
    }
}

impl Weight for Ratio<i64> {
    fn from_ratio(numer: i64, denom: i64) -> Self {
        Ratio::new(numer, denom)
    }

    fn to_f64(&self) -> f64 {
        ToPrimitive::to_f64(self).unwrap_or(f64::NAN)
    }

    fn normalization_tolerance() -> f64 {
        0.0
    }
}

impl Weight for BigRational {
    fn from_ratio(numer: i64, denom: i64) -> Self {
        BigRational::new(BigInt::from(numer), BigInt::from(denom))
    }

    fn to_f64(&self) -> f64 {
        ToPrimitive::to_f64(self).unwrap_or(f64::NAN)
    }

    fn normalization_tolerance() -> f64 {
        0.0
    }
}

/// Floating point scalar (`f32` or `f64`) for log-domain quantities.
pub trait Real: Weight + Float + FromPrimitive + Display {
    fn of(x: f64) -> Self {
        <Self as FromPrimitive>::from_f64(x).expect("finite conversion")
    }
}

impl Real for f32 {}
impl Real for f64 {}

/// Sum of a slice of weights, left to right.
pub(crate) fn total<W: Weight>(values: &[W]) -> W {
    values.iter().fold(W::zero(), |acc, v| acc + v.clone())
}

/// Checks a probability vector: entries non-negative, sum within the
/// scalar's normalization tolerance of one.
pub(crate) fn check_probability_vector<W: Weight>(values: &[W]) -> Result<(), String> {
    if values.is_empty() {
        return Err("empty probability vector".into());
    }
    if let Some(i) = values.iter().position(|v| !(*v >= W::zero())) {
        return Err(format!("entry {i} is negative or not a number ({:?})", values[i]));
    }
    let sum = total(values);
    let tol = W::normalization_tolerance();
    let deviation = if tol == 0.0 {
        if sum == W::one() {
            0.0
        } else {
            f64::INFINITY
        }
    } else {
        (sum.to_f64() - 1.0).abs()
    };
    if deviation > tol {
        return Err(format!("probabilities sum to {} instead of 1", sum.to_f64()));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rational_normalization_is_exact() {
        let thirds = vec![BigRational::from_ratio(1, 3); 3];
        assert!(check_probability_vector(&thirds).is_ok());
        let off = vec![Ratio::<i64>::from_ratio(1, 3), Ratio::from_ratio(1, 3)];
        assert!(check_probability_vector(&off).is_err());
    }

    #[test]
    fn float_normalization_tolerates_rounding() {
        assert!(check_probability_vector(&[0.1f64; 10]).is_ok());
        assert!(check_probability_vector(&[0.5f64, 0.5 + 1e-9]).is_err());
        assert!(check_probability_vector(&[1.5f64, -0.5]).is_err());
        assert!(check_probability_vector(&[f64::NAN, 1.0]).is_err());
    }
}
