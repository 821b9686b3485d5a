use std::fmt::{Debug, Display};
use std::hash::Hash;

use super::{GaussRational, Rational};

/// Exact field operations shared by [`Rational`] and [`GaussRational`].
pub trait Scalar: Clone + PartialEq + Eq + Hash + Debug + Display + Send + Sync + 'static {
    fn zero() -> Self;
    fn one() -> Self;
    fn is_zero(&self) -> bool;
    fn from_rational(r: Rational) -> Self;
    fn add_ref(&self, other: &Self) -> Self;
    fn sub_ref(&self, other: &Self) -> Self;
    fn mul_ref(&self, other: &Self) -> Self;
    fn neg_ref(&self) -> Self;
    fn inv(&self) -> Option<Self>;

    fn from_i64(v: i64) -> Self {
        Self::from_rational(Rational::from_integer(v))
    }

    fn is_one(&self) -> bool {
        *self == Self::one()
    }
}

impl Scalar for Rational {
    fn zero() -> Self {
        Rational::zero()
    }
    fn one() -> Self {
        Rational::one()
    }
    fn is_zero(&self) -> bool {
        Rational::is_zero(self)
    }
    fn from_rational(r: Rational) -> Self {
        r
    }
    fn add_ref(&self, other: &Self) -> Self {
        self + other
    }
    fn sub_ref(&self, other: &Self) -> Self {
        self - other
    }
    fn mul_ref(&self, other: &Self) -> Self {
        self * other
    }
    fn neg_ref(&self) -> Self {
        -self
    }
    fn inv(&self) -> Option<Self> {
        self.recip()
    }
    fn is_one(&self) -> bool {
        Rational::is_one(self)
    }
}

impl Scalar for GaussRational {
    fn zero() -> Self {
        GaussRational::zero()
    }
    fn one() -> Self {
        GaussRational::one()
    }
    fn is_zero(&self) -> bool {
        GaussRational::is_zero(self)
    }
    fn from_rational(r: Rational) -> Self {
        GaussRational::real(r)
    }
    fn add_ref(&self, other: &Self) -> Self {
        self + other
    }
    fn sub_ref(&self, other: &Self) -> Self {
        self - other
    }
    fn mul_ref(&self, other: &Self) -> Self {
        self * other
    }
    fn neg_ref(&self) -> Self {
        -self
    }
    fn inv(&self) -> Option<Self> {
        self.recip()
    }
}
