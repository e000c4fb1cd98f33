//! Two-level catalogue: the diagonal-gauge quasi-Hermitian pair, the
//! PT-symmetric pair with its parity-breaking threshold, and hermitization
//! through a general (non-diagonal) metric G with H†G = GH.
//!
//! "Quasi-Hermitian" in [`PtClass`] reports refers to the diagonal gauge of
//! the chain modules. A PT-symmetric pair in the unbroken phase has no
//! diagonal gauge yet still admits a non-diagonal metric, which
//! [`metric_from_condition`] constructs.

use nalgebra::Matrix2;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type Mat2 = Matrix2<Complex64>;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// H = [[a, r e^{iθ}], [ρ e^{−iθ}, b]] with r, ρ > 0.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct AsymmetricPair {
    pub a: f64,
    pub b: f64,
    pub r: f64,
    pub rho: f64,
    pub theta: f64,
}

impl AsymmetricPair {
    pub fn matrix(&self) -> Mat2 {
        Mat2::new(
            Complex64::new(self.a, 0.0),
            Complex64::from_polar(self.r, self.theta),
            Complex64::from_polar(self.rho, -self.theta),
            Complex64::new(self.b, 0.0),
        )
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Hermitized {
    /// Diagonal of Q.
    pub q: [f64; 2],
    pub transformed: Mat2,
}

/// Q = diag(1, √(ρ/r)) and H̃ = Q⁻¹HQ with off-diagonals √(rρ)e^{±iθ}.
pub fn hermitize_quasi(m: &AsymmetricPair) -> Result<Hermitized> {
    if !(m.r > 0.0 && m.rho > 0.0) {
        return Err(Error::Usage("r and rho must be positive".into()));
    }
    let off = Complex64::from_polar((m.r * m.rho).sqrt(), m.theta);
    Ok(Hermitized {
        q: [1.0, (m.rho / m.r).sqrt()],
        transformed: Mat2::new(Complex64::new(m.a, 0.0), off, off.conj(), Complex64::new(m.b, 0.0)),
    })
}

/// H = [[ρ e^{iβ}, r e^{iθ}], [r e^{−iθ}, ρ e^{−iβ}]].
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PtPair {
    pub r: f64,
    pub rho: f64,
    pub theta: f64,
    pub beta: f64,
}

impl PtPair {
    pub fn matrix(&self) -> Mat2 {
        Mat2::new(
            Complex64::from_polar(self.rho, self.beta),
            Complex64::from_polar(self.r, self.theta),
            Complex64::from_polar(self.r, -self.theta),
            Complex64::from_polar(self.rho, -self.beta),
        )
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum PtPhase {
    Unbroken,
    Broken,
    /// Radicand zero: the two eigenvalues coalesce.
    Boundary,
}

#[derive(Clone, Debug, PartialEq)]
pub struct PtClass {
    pub phase: PtPhase,
    pub eigenvalues: [Complex64; 2],
    /// ‖P H* P − H‖.
    pub symmetry_residual: f64,
    /// r² − ρ² sin²β.
    pub radicand: f64,
}

fn parity() -> Mat2 {
    Mat2::new(ZERO, ONE, ONE, ZERO)
}

pub fn pt_classify(m: &PtPair, tol: f64) -> Result<PtClass> {
    if !(m.r > 0.0 && m.rho > 0.0) {
        return Err(Error::Usage("r and rho must be positive".into()));
    }
    let h = m.matrix();
    let p = parity();
    let symmetry_residual = (p * h.map(|z| z.conj()) * p - h).norm();
    let sin = m.beta.sin();
    let radicand = m.r * m.r - m.rho * m.rho * sin * sin;
    let scale = (m.r * m.r).max(m.rho * m.rho);
    let center = Complex64::new(m.rho * m.beta.cos(), 0.0);
    let phase = if radicand.abs() <= tol * scale {
        PtPhase::Boundary
    } else if radicand > 0.0 {
        PtPhase::Unbroken
    } else {
        PtPhase::Broken
    };
    let root = match phase {
        PtPhase::Boundary => ZERO,
        _ => Complex64::new(radicand, 0.0).sqrt(),
    };
    Ok(PtClass {
        phase,
        eigenvalues: [center - root, center + root],
        symmetry_residual,
        radicand,
    })
}

/// G = [[1, G₁₂], [G₁₂*, 1]].
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Metric2 {
    pub g12: Complex64,
}

impl Metric2 {
    pub fn eigenvalues(&self) -> [f64; 2] {
        let m = self.g12.norm();
        [1.0 - m, 1.0 + m]
    }

    pub fn is_positive_definite(&self) -> bool {
        self.g12.norm() < 1.0
    }

    pub fn matrix(&self) -> Mat2 {
        Mat2::new(ONE, self.g12, self.g12.conj(), ONE)
    }

    /// G^s by the closed-form eigen-decomposition: with G₁₂ = |G₁₂|e^{iφ},
    /// G^s = ½(g₂^s + g₁^s)·I + ½(g₂^s − g₁^s)·[[0, e^{iφ}], [e^{−iφ}, 0]].
    pub fn power(&self, s: f64) -> Result<Mat2> {
        if !self.is_positive_definite() {
            return Err(Error::Usage(format!(
                "metric is not positive-definite: |G12| = {}",
                self.g12.norm()
            )));
        }
        let [g1, g2] = self.eigenvalues();
        let (p1, p2) = (g1.powf(s), g2.powf(s));
        let m = self.g12.norm();
        let phase = if m > 0.0 { self.g12 / m } else { ONE };
        let diag = Complex64::new(0.5 * (p2 + p1), 0.0);
        let off = 0.5 * (p2 - p1);
        Ok(Mat2::new(diag, phase * off, phase.conj() * off, diag))
    }

    pub fn sqrt(&self) -> Result<Mat2> {
        self.power(0.5)
    }
}

/// H = [[a, b], [b*, a*]].
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PtMatrix {
    pub a: Complex64,
    pub b: Complex64,
}

impl PtMatrix {
    /// [[iγ, 1], [1, −iγ]].
    pub fn imaginary_potential(gamma: f64) -> Self {
        PtMatrix {
            a: Complex64::new(0.0, gamma),
            b: ONE,
        }
    }

    pub fn matrix(&self) -> Mat2 {
        Mat2::new(self.a, self.b, self.b.conj(), self.a.conj())
    }
}

/// Solve a* − a − G₁₂b* + bG₁₂* = 0, i.e. Im(b·G₁₂*) = Im a. Only the
/// component of b·G₁₂* along i is fixed; the free real component is set to
/// zero, which gives the smallest |G₁₂| and so the widest positive-definite
/// margin: G₁₂ = −i·Im(a)/b*.
pub fn metric_from_condition(m: &PtMatrix) -> Result<Metric2> {
    if m.b == ZERO {
        if m.a.im != 0.0 {
            return Err(Error::Domain(
                "b = 0 with non-real a: no metric satisfies the condition".into(),
            ));
        }
        return Ok(Metric2 { g12: ZERO });
    }
    Ok(Metric2 {
        g12: Complex64::new(0.0, -m.a.im) / m.b.conj(),
    })
}

#[derive(Clone, Debug, PartialEq)]
pub struct MetricHermitized {
    pub sqrt_metric: Mat2,
    pub transformed: Mat2,
    /// ‖H†G − GH‖.
    pub condition_residual: f64,
    /// ‖H̃† − H̃‖.
    pub hermiticity_residual: f64,
}

/// H̃ = G^{1/2} H G^{−1/2}, after checking H†G = GH to `tol` (relative).
pub fn hermitize_via_g(h: &Mat2, g: &Metric2, tol: f64) -> Result<MetricHermitized> {
    let gm = g.matrix();
    let condition_residual = (h.adjoint() * gm - gm * h).norm();
    let scale = h.norm().max(1.0) * gm.norm();
    if condition_residual > tol * scale {
        return Err(Error::Usage(format!(
            "metric condition H^dagger G = G H fails, residual {condition_residual:e}"
        )));
    }
    let root = g.sqrt()?;
    let inv_root = g.power(-0.5)?;
    let transformed = root * h * inv_root;
    Ok(MetricHermitized {
        sqrt_metric: root,
        hermiticity_residual: (transformed.adjoint() - transformed).norm(),
        transformed,
        condition_residual,
    })
}
