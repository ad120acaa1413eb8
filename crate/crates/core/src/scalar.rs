//! Scalar abstractions for the numeric parts of the engine.
//!
//! Ownership thresholds are decided with multiplication only, so exact
//! types (integers, decimals, rationals) give exact answers at the boundary.

use std::fmt::Debug;

use num_traits::{Float, FromPrimitive, Num};

/// Ordered numeric type usable for holder balances.
pub trait Scalar: Clone + PartialOrd + Num + FromPrimitive + Debug {}

impl<T> Scalar for T where T: Clone + PartialOrd + Num + FromPrimitive + Debug {}

/// `part / whole > numer / denom`, evaluated as `part * denom > whole * numer`.
pub fn exceeds_fraction<T: Scalar>(part: &T, whole: &T, numer: u32, denom: u32) -> bool {
    let n = T::from_u32(numer).expect("numerator fits scalar");
    let d = T::from_u32(denom).expect("denominator fits scalar");
    part.clone() * d > whole.clone() * n
}

/// `log10` of the arithmetic mean of the strictly positive values.
/// `None` when there are none.
pub fn log10_mean<T, I>(values: I) -> Option<T>
where
    T: Float + FromPrimitive,
    I: IntoIterator<Item = T>,
{
    let (sum, n) = values
        .into_iter()
        .filter(|v| *v > T::zero())
        .fold((T::zero(), 0usize), |(s, n), v| (s + v, n + 1));
    if n == 0 {
        return None;
    }
    Some((sum / T::from_usize(n)?).log10())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fraction_boundary_is_strict() {
        assert!(!exceeds_fraction(&60u64, &100u64, 3, 5));
        assert!(exceeds_fraction(&61u64, &100u64, 3, 5));
        assert!(exceeds_fraction(&0.61f64, &1.0f64, 3, 5));
        assert!(!exceeds_fraction(&0.6f32, &1.0f32, 3, 5));
    }

    #[test]
    fn log_of_mean_not_mean_of_logs() {
        let v = log10_mean([1e9f64, 1e11]).unwrap();
        assert!((v - 5.05e10f64.log10()).abs() < 1e-12);
        assert!((v - 10.703).abs() < 1e-3);
        let v32 = log10_mean([1e9f32, 1e11]).unwrap();
        assert!((v32 - 10.703).abs() < 1e-3);
    }

    #[test]
    fn zero_and_missing_caps_are_excluded() {
        assert_eq!(log10_mean::<f64, _>([]), None);
        assert_eq!(log10_mean([0.0f64, 0.0]), None);
        assert_eq!(log10_mean([0.0f64, 100.0]), Some(2.0));
    }
}
