use std::fmt::Debug;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::poly::{euclid_gcd, rational_gcd, Poly};

/// Commutative ring with identity. Method-based so that generic code over
/// big-number coefficients does not fight reference operator impls.
pub trait Ring: Clone + PartialEq + Debug + Send + Sync {
    fn zero() -> Self;
    fn one() -> Self;
    fn is_zero(&self) -> bool;
    fn add(&self, other: &Self) -> Self;
    fn sub(&self, other: &Self) -> Self;
    fn mul(&self, other: &Self) -> Self;
    fn neg(&self) -> Self;
    fn from_int(k: i64) -> Self;

    fn is_one(&self) -> bool {
        *self == Self::one()
    }
}

/// Division that is only ever called when the quotient is known to exist in
/// the ring (Bareiss elimination, cofactor cancellation).
pub trait ExactDiv: Ring {
    fn exact_div(&self, divisor: &Self) -> Self;
}

/// A ring in which every nonzero element is invertible.
pub trait Field: Ring {
    fn inv(&self) -> Self;

    fn div(&self, other: &Self) -> Self {
        self.mul(&other.inv())
    }

    /// Monic gcd of two polynomials: Euclid unless the field has something
    /// better.
    fn poly_gcd(a: &Poly<Self>, b: &Poly<Self>) -> Poly<Self> {
        euclid_gcd(a, b)
    }
}

impl Ring for BigRational {
    fn zero() -> Self {
        Zero::zero()
    }
    fn one() -> Self {
        One::one()
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn add(&self, other: &Self) -> Self {
        self + other
    }
    fn sub(&self, other: &Self) -> Self {
        self - other
    }
    fn mul(&self, other: &Self) -> Self {
        self * other
    }
    fn neg(&self) -> Self {
        -self
    }
    fn from_int(k: i64) -> Self {
        BigRational::from_integer(k.into())
    }
}

impl Field for BigRational {
    fn inv(&self) -> Self {
        self.recip()
    }

    fn poly_gcd(a: &Poly<Self>, b: &Poly<Self>) -> Poly<Self> {
        rational_gcd(a, b)
    }
}

impl ExactDiv for BigRational {
    fn exact_div(&self, divisor: &Self) -> Self {
        self / divisor
    }
}

impl Ring for BigInt {
    fn zero() -> Self {
        Zero::zero()
    }
    fn one() -> Self {
        One::one()
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn add(&self, other: &Self) -> Self {
        self + other
    }
    fn sub(&self, other: &Self) -> Self {
        self - other
    }
    fn mul(&self, other: &Self) -> Self {
        self * other
    }
    fn neg(&self) -> Self {
        -self
    }
    fn from_int(k: i64) -> Self {
        k.into()
    }
}

impl ExactDiv for BigInt {
    fn exact_div(&self, divisor: &Self) -> Self {
        debug_assert!(Zero::is_zero(&(self % divisor)), "inexact integer division");
        self / divisor
    }
}

impl Ring for Complex64 {
    fn zero() -> Self {
        Complex64::new(0.0, 0.0)
    }
    fn one() -> Self {
        Complex64::new(1.0, 0.0)
    }
    fn is_zero(&self) -> bool {
        self.re == 0.0 && self.im == 0.0
    }
    fn add(&self, other: &Self) -> Self {
        self + other
    }
    fn sub(&self, other: &Self) -> Self {
        self - other
    }
    fn mul(&self, other: &Self) -> Self {
        self * other
    }
    fn neg(&self) -> Self {
        -self
    }
    fn from_int(k: i64) -> Self {
        Complex64::new(k as f64, 0.0)
    }
}

impl Field for Complex64 {
    fn inv(&self) -> Self {
        Complex64::new(1.0, 0.0) / self
    }
}

impl ExactDiv for Complex64 {
    fn exact_div(&self, divisor: &Self) -> Self {
        self / divisor
    }
}
