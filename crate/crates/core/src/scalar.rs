//! Scalar bounds shared by the generic numeric code.

use std::fmt::Debug;

use num_traits::{Num, Signed};

/// An ordered field element usable as polynomial coefficient.
///
/// Implemented by exact rationals (`Ratio<i64>`, `BigRational`) as well as by
/// `f32`/`f64`; only the rational instances give exact answers.
pub trait Scalar: Clone + Debug + PartialOrd + Num + Signed {}

impl<T> Scalar for T where T: Clone + Debug + PartialOrd + Num + Signed {}

#[cfg(test)]
pub(crate) fn rat(p: i64, q: i64) -> num_rational::BigRational {
    num_rational::BigRational::new(p.into(), q.into())
}

#[cfg(test)]
pub(crate) fn int(p: i64) -> num_rational::BigRational {
    num_rational::BigRational::from_integer(p.into())
}
