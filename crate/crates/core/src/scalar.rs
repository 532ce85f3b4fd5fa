use std::fmt::Debug;
use std::ops::Neg;

use num_traits::{FromPrimitive, Num};

/// Field-like scalar used by evaluation code: exact rationals or `f64`.
pub trait Scalar: Clone + Debug + PartialEq + Num + Neg<Output = Self> + FromPrimitive + Send + Sync {}

impl<T> Scalar for T where T: Clone + Debug + PartialEq + Num + Neg<Output = T> + FromPrimitive + Send + Sync {}

pub(crate) fn from_usize<T: Scalar>(n: usize) -> T {
    T::from_usize(n).expect("small integer constant")
}
