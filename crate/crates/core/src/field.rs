use std::fmt::{Debug, Display};

use num_traits::Zero;

use crate::arith::Rat;

/// The field operations the curve formulas need. Implemented for [`Rat`]
/// and for elements of a quadratic field, so both share one group law.
pub trait Field: Clone + PartialEq + Debug + Display {
    fn add(&self, rhs: &Self) -> Self;
    fn sub(&self, rhs: &Self) -> Self;
    fn mul(&self, rhs: &Self) -> Self;
    /// Panics on division by zero.
    fn div(&self, rhs: &Self) -> Self;
    fn neg(&self) -> Self;
    fn is_zero_elem(&self) -> bool;

    fn square(&self) -> Self {
        self.mul(self)
    }

    fn double(&self) -> Self {
        self.add(self)
    }
}

impl Field for Rat {
    fn add(&self, rhs: &Self) -> Self {
        self + rhs
    }
    fn sub(&self, rhs: &Self) -> Self {
        self - rhs
    }
    fn mul(&self, rhs: &Self) -> Self {
        self * rhs
    }
    fn div(&self, rhs: &Self) -> Self {
        assert!(!Zero::is_zero(rhs), "division by zero");
        self / rhs
    }
    fn neg(&self) -> Self {
        -self
    }
    fn is_zero_elem(&self) -> bool {
        Zero::is_zero(self)
    }
}
