use num_complex::Complex64;
use num_traits::{Signed, Zero};

use super::gaussian::GaussianRational;
use super::ring::Field;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RealSign {
    Positive,
    NonPositive,
    NonReal,
}

/// Entry type of an evaluated chain: exact Gaussian rationals or complex
/// floats. Tolerances are absolute and ignored on the exact path.
pub trait Scalar: Field {
    fn conj(&self) -> Self;
    fn to_c64(&self) -> Complex64;
    fn real_sign(&self, tol: f64) -> RealSign;
    fn near(&self, other: &Self, tol: f64) -> bool;
    fn is_negligible(&self, tol: f64) -> bool;
    fn is_exact() -> bool;
}

impl Scalar for GaussianRational {
    fn conj(&self) -> Self {
        GaussianRational::conj(self)
    }
    fn to_c64(&self) -> Complex64 {
        GaussianRational::to_c64(self)
    }
    fn real_sign(&self, _tol: f64) -> RealSign {
        if !self.im.is_zero() {
            RealSign::NonReal
        } else if self.re.is_positive() {
            RealSign::Positive
        } else {
            RealSign::NonPositive
        }
    }
    fn near(&self, other: &Self, _tol: f64) -> bool {
        self == other
    }
    fn is_negligible(&self, _tol: f64) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }
    fn is_exact() -> bool {
        true
    }
}

impl Scalar for Complex64 {
    fn conj(&self) -> Self {
        Complex64::conj(self)
    }
    fn to_c64(&self) -> Complex64 {
        *self
    }
    fn real_sign(&self, tol: f64) -> RealSign {
        if self.im.abs() > tol {
            RealSign::NonReal
        } else if self.re > tol {
            RealSign::Positive
        } else {
            RealSign::NonPositive
        }
    }
    fn near(&self, other: &Self, tol: f64) -> bool {
        (self - other).norm() <= tol
    }
    fn is_negligible(&self, tol: f64) -> bool {
        self.norm() <= tol
    }
    fn is_exact() -> bool {
        false
    }
}
