//! Builders for the two chain families the toolkit is calibrated on: the
//! biased chain, whose hopping is J(1−δ) forward and J(1+δ) backward, and
//! the defect chain, where one bond's backward coupling is lowered by γ.

use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exceptional::{find_eps, EpReport};
use crate::gauge::with_reality_corner;
use crate::hamiltonian::{Band, BoundaryMode, ChainModel, Corner, Evaluated};
use crate::numerics::roots::isolate_real_roots;
use crate::numerics::{GaussianRational, ParamPoly, RatFn, RealRoot, Ring};

pub const BIASED_PARAMETER: &str = "delta";
pub const DEFECT_PARAMETER: &str = "gamma";

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum BiasedBoundary {
    Obc,
    /// Ring closed with the bulk couplings, H_{N,1} = J(1−δ), H_{1,N} = J(1+δ).
    PbcNaive,
    /// Ring whose H_{N,1} is replaced by the reality-restoring corner
    /// J(1+δ)^N / (1−δ)^{N−1}.
    PbcCorrected,
}

#[derive(Clone, Debug, PartialEq)]
pub struct BiasedSpec {
    pub n: usize,
    pub hopping: BigRational,
    /// `None` keeps δ symbolic.
    pub delta: Option<BigRational>,
    pub boundary: BiasedBoundary,
}

impl BiasedSpec {
    pub fn new(n: usize, boundary: BiasedBoundary) -> Self {
        BiasedSpec {
            n,
            hopping: <BigRational as One>::one(),
            delta: None,
            boundary,
        }
    }

    pub fn at(mut self, delta: BigRational) -> Self {
        self.delta = Some(delta);
        self
    }
}

fn linear(c0: &BigRational, c1: &BigRational) -> RatFn {
    RatFn::poly(ParamPoly::new(vec![
        GaussianRational::real(c0.clone()),
        GaussianRational::real(c1.clone()),
    ]))
}

fn constant(c: &BigRational) -> RatFn {
    RatFn::constant(GaussianRational::real(c.clone()))
}

/// Replace the parameter by a value, keeping the parameter name so the
/// descriptor still says what was fixed.
fn specialize(model: &ChainModel, value: &BigRational) -> Result<ChainModel> {
    let band = match model.evaluate(Some(value))? {
        Evaluated::Exact(b) => b.map(|z| RatFn::constant(z.clone())),
        Evaluated::Numeric(_) => unreachable!("builders produce exact models"),
    };
    model.with_exact_band(band)
}

pub fn build_biased(spec: &BiasedSpec) -> Result<ChainModel> {
    let n = spec.n;
    if n < 2 {
        return Err(Error::Usage("chain needs at least 2 sites".into()));
    }
    if spec.boundary != BiasedBoundary::Obc && n < 3 {
        return Err(Error::Usage("periodic chain needs at least 3 sites".into()));
    }
    if Zero::is_zero(&spec.hopping) {
        return Err(Error::Usage("hopping J must be nonzero".into()));
    }
    if spec.boundary == BiasedBoundary::PbcCorrected && spec.delta.as_ref().is_some_and(One::is_one) {
        return Err(Error::Usage("corrected corner has a pole at delta = 1".into()));
    }
    let j = &spec.hopping;
    let forward = linear(j, &-j);
    let backward = linear(j, j);
    let band = Band {
        diag: vec![RatFn::poly(ParamPoly::zero()); n],
        upper: vec![forward.clone(); n - 1],
        lower: vec![backward.clone(); n - 1],
        corner: match spec.boundary {
            BiasedBoundary::Obc => None,
            _ => Some(Corner {
                h_1n: backward,
                h_n1: forward,
            }),
        },
    };
    let boundary = match spec.boundary {
        BiasedBoundary::Obc => BoundaryMode::Obc,
        _ => BoundaryMode::Pbc,
    };
    let mut model = ChainModel::exact(boundary, Some(BIASED_PARAMETER.into()), band)?;
    if spec.boundary == BiasedBoundary::PbcCorrected {
        model = with_reality_corner(&model)?;
    }
    match &spec.delta {
        Some(d) => specialize(&model, d),
        None => Ok(model),
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct DefectSpec {
    pub n: usize,
    pub beta: BigRational,
    /// Forward couplings t_1 … t_{N−1}.
    pub t: Vec<BigRational>,
    /// Backward couplings before the perturbation; `None` mirrors `t`.
    pub j: Option<Vec<BigRational>>,
    /// 1-based index of the perturbed bond.
    pub bond: usize,
    /// `None` keeps γ symbolic.
    pub gamma: Option<BigRational>,
}

impl DefectSpec {
    /// Uniform chain t_n = 1, β = 0, perturbed last bond, symbolic γ.
    pub fn uniform(n: usize) -> Self {
        DefectSpec {
            n,
            beta: <BigRational as Zero>::zero(),
            t: vec![<BigRational as One>::one(); n.saturating_sub(1)],
            j: None,
            bond: n.saturating_sub(1),
            gamma: None,
        }
    }

    pub fn with_beta(mut self, beta: BigRational) -> Self {
        self.beta = beta;
        self
    }
}

pub fn build_defect(spec: &DefectSpec) -> Result<ChainModel> {
    let n = spec.n;
    if n < 2 {
        return Err(Error::Usage("chain needs at least 2 sites".into()));
    }
    if spec.t.len() != n - 1 {
        return Err(Error::Usage(format!(
            "expected {} couplings t, got {}",
            n - 1,
            spec.t.len()
        )));
    }
    if let Some(j) = &spec.j {
        if j.len() != n - 1 {
            return Err(Error::Usage(format!("expected {} couplings J, got {}", n - 1, j.len())));
        }
    }
    if spec.bond == 0 || spec.bond > n - 1 {
        return Err(Error::Usage(format!("perturbed bond must lie in 1..={}", n - 1)));
    }
    let back = spec.j.as_ref().unwrap_or(&spec.t);
    let lower = (0..n - 1)
        .map(|i| {
            if i + 1 == spec.bond {
                // J_k = t_k − γ
                linear(&spec.t[i], &-<BigRational as One>::one())
            } else {
                constant(&back[i])
            }
        })
        .collect();
    let band = Band {
        diag: vec![constant(&spec.beta); n],
        upper: spec.t.iter().map(constant).collect(),
        lower,
        corner: None,
    };
    let model = ChainModel::exact(BoundaryMode::Obc, Some(DEFECT_PARAMETER.into()), band)?;
    match &spec.gamma {
        Some(g) => specialize(&model, g),
        None => Ok(model),
    }
}

fn ep_set(report: &EpReport) -> Vec<String> {
    report.eps().map(|c| c.location.to_string()).collect()
}

/// Do two on-site energies give the same EP locations?
pub fn beta_shift_check(spec: &DefectSpec, beta_a: &BigRational, beta_b: &BigRational) -> Result<bool> {
    let a = find_eps(&build_defect(&spec.clone().with_beta(beta_a.clone()))?)?;
    let b = find_eps(&build_defect(&spec.clone().with_beta(beta_b.clone()))?)?;
    Ok(ep_set(&a) == ep_set(&b))
}

#[derive(Clone, Debug, PartialEq)]
pub struct InvertibilityReport {
    /// det H as a polynomial in γ.
    pub determinant: ParamPoly,
    pub identically_zero: bool,
    /// Real γ where det H vanishes (empty when identically zero).
    pub singular_at: Vec<RealRoot>,
    pub grid: Vec<(BigRational, GaussianRational)>,
}

pub fn invertibility_check(spec: &DefectSpec, grid: &[BigRational]) -> Result<InvertibilityReport> {
    let symbolic = DefectSpec {
        gamma: None,
        ..spec.clone()
    };
    let model = build_defect(&symbolic)?;
    let p = model.char_poly()?;
    // det H = (−1)^N det(0·I − H)
    let mut det = p.coeff(0);
    if spec.n % 2 == 1 {
        det = det.neg();
    }
    let identically_zero = det.is_zero();
    let singular_at = if identically_zero || det.is_constant() {
        Vec::new()
    } else {
        isolate_real_roots(&det)?
    };
    let grid = grid.iter().map(|g| (g.clone(), det.eval_rational(g))).collect();
    Ok(InvertibilityReport {
        determinant: det,
        identically_zero,
        singular_at,
        grid,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn corrected_corner_matches_closed_form() {
        let m = build_biased(&BiasedSpec::new(4, BiasedBoundary::PbcCorrected)).unwrap();
        let c = m.exact_band().unwrap().corner.clone().unwrap();
        let one_plus = ParamPoly::from_ints(&[1, 1]);
        let one_minus = ParamPoly::from_ints(&[1, -1]);
        assert_eq!(c.h_n1, RatFn::new(one_plus.pow(4), one_minus.pow(3)));
        assert_eq!(c.h_1n, RatFn::poly(one_plus));
    }

    #[test]
    fn corrected_corner_pole() {
        let spec = BiasedSpec::new(4, BiasedBoundary::PbcCorrected).at(q(1, 1));
        assert!(matches!(build_biased(&spec), Err(Error::Usage(_))));
        assert!(build_biased(&BiasedSpec::new(4, BiasedBoundary::PbcNaive).at(q(1, 1))).is_ok());
    }

    #[test]
    fn defect_two_sites() {
        let m = build_defect(&DefectSpec::uniform(2).with_beta(q(2, 1))).unwrap();
        let p = m.char_poly().unwrap();
        // E² − 4E + (4 − 1 + γ)
        assert_eq!(p.coeff(0), ParamPoly::from_ints(&[3, 1]));
        assert_eq!(p.coeff(1), ParamPoly::from_ints(&[-4]));
    }

    #[test]
    fn determinants() {
        let r = invertibility_check(&DefectSpec::uniform(2), &[q(1, 1), q(0, 1)]).unwrap();
        assert_eq!(r.determinant, ParamPoly::from_ints(&[-1, 1]));
        assert!(r.grid[0].1.is_zero());
        assert_eq!(r.singular_at.len(), 1);
        assert!(
            invertibility_check(&DefectSpec::uniform(5), &[])
                .unwrap()
                .identically_zero
        );
        assert!(
            !invertibility_check(&DefectSpec::uniform(4), &[])
                .unwrap()
                .identically_zero
        );
    }

    #[test]
    fn bad_specs() {
        assert!(build_defect(&DefectSpec {
            bond: 0,
            ..DefectSpec::uniform(3)
        })
        .is_err());
        assert!(build_defect(&DefectSpec {
            t: vec![q(1, 1)],
            ..DefectSpec::uniform(3)
        })
        .is_err());
        assert!(build_biased(&BiasedSpec::new(2, BiasedBoundary::PbcNaive)).is_err());
    }
}
