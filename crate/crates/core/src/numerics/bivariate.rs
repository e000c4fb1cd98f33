use num_rational::BigRational;

use super::gaussian::GaussianRational;
use super::poly::{ParamPoly, Poly};
use super::resultant;
use super::ring::Ring;
use crate::error::{Error, Result};

/// p(E, γ) = Σ_k c_k(γ) E^k with exact parameter-polynomial coefficients.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct BivariatePoly {
    pub energy: String,
    pub parameter: String,
    pub poly: Poly<ParamPoly>,
}

impl BivariatePoly {
    pub fn new(energy: impl Into<String>, parameter: impl Into<String>, poly: Poly<ParamPoly>) -> Self {
        BivariatePoly {
            energy: energy.into(),
            parameter: parameter.into(),
            poly,
        }
    }

    pub fn degree(&self) -> Option<usize> {
        self.poly.degree()
    }

    pub fn coeff(&self, k: usize) -> ParamPoly {
        self.poly.coeff(k)
    }

    pub fn derivative(&self) -> Self {
        BivariatePoly {
            energy: self.energy.clone(),
            parameter: self.parameter.clone(),
            poly: self.poly.derivative(),
        }
    }

    /// Specialize the parameter to an exact value.
    pub fn at(&self, value: &BigRational) -> Poly<GaussianRational> {
        self.poly.map(|c| c.eval_rational(value))
    }

    /// Polynomial in the parameter obtained by fixing E.
    pub fn at_energy(&self, e: &GaussianRational) -> ParamPoly {
        self.poly.eval_in(&ParamPoly::constant(e.clone()), Clone::clone)
    }

    /// The same polynomial in the shifted energy ε = E − shift.
    pub fn shifted(&self, shift: &GaussianRational) -> Self {
        let e_plus = Poly::new(vec![ParamPoly::constant(shift.clone()), ParamPoly::one()]);
        BivariatePoly {
            energy: self.energy.clone(),
            parameter: self.parameter.clone(),
            poly: self.poly.eval_in(&e_plus, |c| Poly::constant(c.clone())),
        }
    }
}

/// Res_E(p, q) as an exact polynomial in the parameter.
pub fn poly_resultant(p: &BivariatePoly, q: &BivariatePoly) -> Result<ParamPoly> {
    if p.poly.is_zero() || q.poly.is_zero() {
        return Err(Error::Domain("resultant of a zero polynomial".into()));
    }
    if p.parameter != q.parameter {
        return Err(Error::Domain(format!(
            "resultant of polynomials in different parameters ({} vs {})",
            p.parameter, q.parameter
        )));
    }
    Ok(resultant::resultant(&p.poly, &q.poly))
}

/// Disc_E(p) = (−1)^{n(n−1)/2} Res_E(p, ∂p/∂E) / lc(p).
pub fn poly_discriminant(p: &BivariatePoly) -> Result<ParamPoly> {
    match p.degree() {
        Some(d) if d >= 2 => Ok(resultant::discriminant(&p.poly)),
        _ => Err(Error::Domain(format!("discriminant needs degree >= 2 in {}", p.energy))),
    }
}
