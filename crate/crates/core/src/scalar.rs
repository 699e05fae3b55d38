use std::fmt;
use std::iter::Sum;
use std::ops::AddAssign;

use num_traits::{Float, FromPrimitive, NumCast};
use rand::Rng;
use rand_distr::Distribution;

/// Floating-point scalar the tabular solvers and the learner are generic over.
///
/// Implemented for `f32` and `f64`. The crate-root aliases fix `f64`, which is
/// the precision the benchmark harness runs at; `f32` is available through the
/// same generic types.
pub trait Scalar:
    Float + FromPrimitive + AddAssign + Sum + fmt::Debug + fmt::Display + Send + Sync + 'static
{
    /// Largest deviation from 1 a transition row may have and still count as
    /// a probability distribution.
    fn prob_sum_tolerance() -> Self;

    /// Rows whose sums deviate from 1 by more than this are rejected by the
    /// model constructor instead of being normalized.
    fn normalize_tolerance() -> Self;

    /// One draw from `Beta(alpha, beta)`. Shapes must be positive and finite;
    /// callers validate.
    fn beta_draw<R: Rng + ?Sized>(alpha: Self, beta: Self, rng: &mut R) -> Self;

    /// One uniform draw from `[0, 1)`.
    fn unit_draw<R: Rng + ?Sized>(rng: &mut R) -> Self;

    /// Conversion from an `f64` literal known to be representable.
    fn cast(x: f64) -> Self {
        <Self as NumCast>::from(x).expect("representable literal")
    }

    /// Conversion from a table dimension or count.
    fn from_count(n: usize) -> Self {
        Self::from_usize(n).expect("representable count")
    }
}

impl Scalar for f64 {
    fn prob_sum_tolerance() -> Self {
        1e-12
    }

    fn normalize_tolerance() -> Self {
        1e-9
    }

    fn beta_draw<R: Rng + ?Sized>(alpha: Self, beta: Self, rng: &mut R) -> Self {
        rand_distr::Beta::new(alpha, beta)
            .expect("shapes validated by caller")
            .sample(rng)
    }

    fn unit_draw<R: Rng + ?Sized>(rng: &mut R) -> Self {
        rng.random::<f64>()
    }
}

impl Scalar for f32 {
    fn prob_sum_tolerance() -> Self {
        1e-5
    }

    fn normalize_tolerance() -> Self {
        1e-3
    }

    fn beta_draw<R: Rng + ?Sized>(alpha: Self, beta: Self, rng: &mut R) -> Self {
        rand_distr::Beta::new(alpha, beta)
            .expect("shapes validated by caller")
            .sample(rng)
    }

    fn unit_draw<R: Rng + ?Sized>(rng: &mut R) -> Self {
        rng.random::<f32>()
    }
}
