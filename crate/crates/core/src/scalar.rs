//! Scalar abstraction for utility values.
//!
//! Every solver in this crate is exact, so utilities are restricted to
//! unsigned machine integers. The bound formulas that are genuinely rational
//! use [`num_rational::Ratio`] instead.

use std::fmt::{Debug, Display};
use std::hash::Hash;
use std::iter::Sum;

use num_traits::{PrimInt, Unsigned};

/// An exact, non-negative utility value.
///
/// Implemented for every unsigned primitive integer (`u8` through `u128`).
/// Instances check at construction that every agent's total utility fits in
/// the scalar, so bundle sums never overflow.
pub trait Utility:
    PrimInt + Unsigned + Hash + Debug + Display + Default + Sum + Send + Sync + 'static
{
    /// Widen to `u128` for reporting and cross-type comparisons.
    fn to_u128(self) -> u128 {
        num_traits::ToPrimitive::to_u128(&self).expect("unsigned value fits in u128")
    }

    /// Narrow from `u64`, returning `None` on overflow.
    fn from_u64(v: u64) -> Option<Self> {
        num_traits::NumCast::from(v)
    }
}

impl<T> Utility for T where
    T: PrimInt + Unsigned + Hash + Debug + Display + Default + Sum + Send + Sync + 'static
{
}

/// `lhs >= rhs - slack` without underflow.
#[inline]
pub(crate) fn ge_minus<U: Utility>(lhs: U, rhs: U, slack: U) -> bool {
    rhs <= slack || lhs >= rhs - slack
}
