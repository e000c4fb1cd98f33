//! Exact arithmetic foundation: Gaussian rationals, polynomial rings,
//! resultants, real-root isolation, plus the floating-point root finder.

pub mod aberth;
pub mod bivariate;
pub mod gaussian;
pub mod linalg;
pub mod poly;
pub mod resultant;
pub mod ring;
pub mod roots;
pub mod scalar;

pub use aberth::{aberth_roots, aberth_roots_with, cluster_roots, AberthOptions, RootCluster};
pub use bivariate::{poly_discriminant, poly_resultant, BivariatePoly};
pub use gaussian::{format_rational, parse_rational, rational_to_f64, GaussianRational};
pub use poly::{ParamPoly, Poly, RatFn};
pub use ring::{ExactDiv, Field, Ring};
pub use roots::{
    isolate_real_roots, isolate_real_roots_with, isolate_square_free_refined, RealRoot, RootIsolation, RootLocation,
};
pub use scalar::{RealSign, Scalar};

pub use num_complex::Complex64;
pub use num_rational::BigRational;
