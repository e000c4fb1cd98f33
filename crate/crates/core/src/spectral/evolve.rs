use nalgebra::{DMatrix, DVector, SymmetricEigen};
use num_complex::Complex64;
use num_rational::BigRational;

use crate::error::{Error, Result};
use crate::gauge::{build_gauge, Verdict};
use crate::hamiltonian::{Band, ChainModel};

/// ψ(t) on a time grid with the two conserved norms.
#[derive(Clone, Debug, PartialEq)]
pub struct EvolutionTrace {
    pub times: Vec<f64>,
    pub states: Vec<DVector<Complex64>>,
    /// ‖Q⁻¹ψ(t)‖.
    pub gauge_norms: Vec<f64>,
    /// ⟨ψ(t)|Q⁻²|ψ(t)⟩.
    pub eta_norms: Vec<f64>,
    pub weights: Vec<f64>,
}

fn max_drift(values: &[f64]) -> f64 {
    match values.first() {
        Some(&v0) => values.iter().map(|v| (v - v0).abs()).fold(0.0, f64::max),
        None => 0.0,
    }
}

impl EvolutionTrace {
    pub fn eta_drift(&self) -> f64 {
        max_drift(&self.eta_norms)
    }

    pub fn gauge_norm_drift(&self) -> f64 {
        max_drift(&self.gauge_norms)
    }
}

/// ψ(t) = Q · exp(−itH̃) · Q⁻¹ψ(0), the propagator built from the
/// eigen-decomposition of the Hermitian H̃.
pub fn evolve_band(
    transformed: &Band<Complex64>,
    weights: &[f64],
    psi0: &[Complex64],
    times: &[f64],
) -> Result<EvolutionTrace> {
    let n = transformed.n();
    if psi0.len() != n {
        return Err(Error::Usage(format!(
            "initial state has {} components, chain has {n} sites",
            psi0.len()
        )));
    }
    if psi0.iter().all(|z| z.norm() == 0.0) {
        return Err(Error::Usage("initial state is zero".into()));
    }
    if times.iter().any(|t| !t.is_finite()) {
        return Err(Error::Usage("non-finite time".into()));
    }
    let h = transformed.to_matrix();
    let herm: DMatrix<Complex64> = (&h + h.adjoint()) * Complex64::new(0.5, 0.0);
    let eig = SymmetricEigen::new(herm);
    let u = &eig.eigenvectors;
    let psi0 = DVector::from_column_slice(psi0);
    let phi0 = DVector::from_fn(n, |j, _| psi0[j] / weights[j]);
    let coeffs = u.adjoint() * &phi0;
    let norms = |psi: &DVector<Complex64>| {
        let g: f64 = (0..n).map(|j| (psi[j] / weights[j]).norm_sqr()).sum();
        let eta: f64 = (0..n).map(|j| psi[j].norm_sqr() / (weights[j] * weights[j])).sum();
        (g.sqrt(), eta)
    };
    let mut trace = EvolutionTrace {
        times: times.to_vec(),
        states: Vec::with_capacity(times.len()),
        gauge_norms: Vec::with_capacity(times.len()),
        eta_norms: Vec::with_capacity(times.len()),
        weights: weights.to_vec(),
    };
    for &t in times {
        let psi = if t == 0.0 {
            psi0.clone()
        } else {
            let rotated = DVector::from_fn(n, |k, _| {
                coeffs[k] * Complex64::from_polar(1.0, -eig.eigenvalues[k] * t)
            });
            let phi = u * rotated;
            DVector::from_fn(n, |j, _| phi[j] * weights[j])
        };
        let (g, eta) = norms(&psi);
        trace.states.push(psi);
        trace.gauge_norms.push(g);
        trace.eta_norms.push(eta);
    }
    Ok(trace)
}

pub fn evolve(
    model: &ChainModel,
    param: Option<&BigRational>,
    psi0: &[Complex64],
    times: &[f64],
) -> Result<EvolutionTrace> {
    let gauge = build_gauge(model, param, crate::gauge::DEFAULT_TOL)?;
    if gauge.verdict() == Verdict::NotQuasiHermitian {
        return Err(Error::Usage(format!(
            "no similarity propagator: {}",
            gauge.witness().map(|w| w.to_string()).unwrap_or_default()
        )));
    }
    let weights = gauge.weights().expect("quasi-Hermitian gauge has weights");
    let transformed = gauge.transformed_c64().expect("quasi-Hermitian gauge has H̃");
    evolve_band(&transformed, &weights, psi0, times)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hamiltonian::BoundaryMode;
    use crate::numerics::{ParamPoly, RatFn};

    fn rp(c: &[i64]) -> RatFn {
        RatFn::poly(ParamPoly::from_ints(c))
    }

    fn biased(n: usize) -> ChainModel {
        ChainModel::exact(
            BoundaryMode::Obc,
            Some("delta".into()),
            Band {
                diag: vec![rp(&[]); n],
                upper: vec![rp(&[1, -1]); n - 1],
                lower: vec![rp(&[1, 1]); n - 1],
                corner: None,
            },
        )
        .unwrap()
    }

    #[test]
    fn two_sites_eta_norm_is_one() {
        let half = BigRational::new(1.into(), 2.into());
        let psi0 = [Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0)];
        let times: Vec<f64> = (0..40).map(|k| k as f64 * 0.37).collect();
        let tr = evolve(&biased(2), Some(&half), &psi0, &times).unwrap();
        assert_eq!(tr.states[0].as_slice(), &psi0);
        for eta in &tr.eta_norms {
            assert!((eta - 1.0).abs() < 1e-13);
        }
        // the plain norm is not conserved
        let plain: Vec<f64> = tr.states.iter().map(|s| s.norm()).collect();
        assert!(plain.iter().any(|p| (p - 1.0).abs() > 1e-3));
    }

    #[test]
    fn hermitian_keeps_plain_norm() {
        let zero = BigRational::from_integer(0.into());
        let psi0 = [
            Complex64::new(0.6, 0.0),
            Complex64::new(0.0, 0.8),
            Complex64::new(0.0, 0.0),
        ];
        let tr = evolve(&biased(3), Some(&zero), &psi0, &[0.0, 1.0, 2.5, 10.0]).unwrap();
        assert_eq!(tr.weights, vec![1.0; 3]);
        for s in &tr.states {
            assert!((s.norm() - 1.0).abs() < 1e-13);
        }
    }

    #[test]
    fn refuses_without_gauge() {
        let two = BigRational::from_integer(2.into());
        let psi0 = [Complex64::new(1.0, 0.0); 2];
        assert!(matches!(
            evolve(&biased(2), Some(&two), &psi0, &[1.0]),
            Err(Error::Usage(_))
        ));
        let zero = BigRational::from_integer(0.into());
        assert!(evolve(&biased(2), Some(&zero), &[Complex64::new(0.0, 0.0); 2], &[1.0]).is_err());
    }
}
