//! Scalar abstraction shared by every numeric routine in the crate.

use std::fmt::{Debug, Display, LowerExp};
use std::iter::Sum;

use num_traits::{Float, FloatConst, FromPrimitive, ToPrimitive};

/// Floating-point type the model can be evaluated in.
///
/// The associated tolerances are the precision-dependent knobs used by
/// invariant checks; `f64` carries the values the crate is specified against.
pub trait Scalar:
    Float
    + FloatConst
    + FromPrimitive
    + ToPrimitive
    + Sum
    + Debug
    + Display
    + LowerExp
    + Default
    + Send
    + Sync
    + 'static
{
    /// Allowed defect in `Σq + s = 1`.
    const SUM_TOL: Self;
    /// Two log base values closer than this are treated as tied.
    const TIE_TOL: Self;
    /// Allowed defect in the characteristic equation `Σ R0^(-α) = 1`.
    const ROOT_TOL: Self;
    /// Relative slack on non-strict upper bounds that are attained exactly.
    const BOUND_RTOL: Self;

    /// Converts an `f64` literal. Panics only on a non-representable value.
    fn of(x: f64) -> Self {
        Self::from_f64(x).expect("literal representable in scalar type")
    }

    fn of_usize(n: usize) -> Self {
        Self::from_usize(n).expect("count representable in scalar type")
    }

    fn of_u128(n: u128) -> Self {
        Self::from_u128(n).expect("count representable in scalar type")
    }
}

impl Scalar for f64 {
    const SUM_TOL: Self = 1e-12;
    const TIE_TOL: Self = 1e-9;
    const ROOT_TOL: Self = 1e-10;
    const BOUND_RTOL: Self = 1e-9;
}

impl Scalar for f32 {
    const SUM_TOL: Self = 1e-5;
    const TIE_TOL: Self = 1e-4;
    const ROOT_TOL: Self = 1e-4;
    const BOUND_RTOL: Self = 1e-4;
}

/// Compensated (Neumaier) summation.
pub fn compensated_sum<T: Float, I: IntoIterator<Item = T>>(values: I) -> T {
    let mut sum = T::zero();
    let mut carry = T::zero();
    for v in values {
        let t = sum + v;
        if sum.abs() >= v.abs() {
            carry = carry + ((sum - t) + v);
        } else {
            carry = carry + ((v - t) + sum);
        }
        sum = t;
    }
    sum + carry
}
