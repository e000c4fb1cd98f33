//! Exceptional points of one-parameter chains: the exact discriminant of the
//! characteristic polynomial, its real roots, and the Jordan structure of
//! the spectrum at each root.

use std::cmp::Ordering;

use nalgebra::DMatrix;
use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{FromPrimitive, One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hamiltonian::{ChainModel, Evaluated};
use crate::models::{build_defect, DefectSpec};
use crate::numerics::linalg::{mat_mul, rank, shift_diagonal};
use crate::numerics::resultant::discriminant;
use crate::numerics::{
    isolate_real_roots_with, isolate_square_free_refined, BivariatePoly, Field, GaussianRational, ParamPoly, Poly,
    Ring, RootLocation,
};
use crate::spectral::{eigen_band, SpectralOptions};

/// F(x) = Disc_E det(E·I − H(x)), exact.
///
/// Computed by sampling: at every parameter value where the leading
/// coefficient in E survives, the discriminant of the specialized
/// polynomial equals F at that value, so F is recovered by interpolation
/// through enough points to cover its degree bound. Models whose corner
/// carries a denominator are handled on the cleared characteristic
/// polynomial; the denominator's zeros then appear as spurious roots that
/// [`find_eps`] removes.
pub fn discriminant_of_model(model: &ChainModel) -> Result<ParamPoly> {
    if !model.is_exact() {
        return Err(Error::Usage("discriminant needs an exact model".into()));
    }
    discriminant_by_sampling(&model.char_poly()?)
}

pub fn discriminant_by_sampling(p: &BivariatePoly) -> Result<ParamPoly> {
    let n = match p.degree() {
        Some(d) if d >= 2 => d,
        _ => return Err(Error::Domain(format!("discriminant needs degree >= 2 in {}", p.energy))),
    };
    let lc = p.coeff(n);
    let dmax = p.poly.coeffs().iter().filter_map(|c| c.degree()).max().unwrap_or(0);
    let needed = (2 * n - 1) * dmax + 1;
    let mut xs: Vec<GaussianRational> = Vec::with_capacity(needed);
    let mut ys: Vec<GaussianRational> = Vec::with_capacity(needed);
    let mut k: i64 = 0;
    while xs.len() < needed {
        // 0, 1, −1, 2, −2, …
        let x = BigRational::from_integer(BigInt::from(if k % 2 == 1 { (k + 1) / 2 } else { -k / 2 }));
        k += 1;
        if lc.eval_rational(&x).is_zero() {
            continue;
        }
        let sample = p.at(&x);
        ys.push(if sample.is_real() {
            GaussianRational::real(integer_discriminant(&sample.real_part()))
        } else {
            discriminant(&sample)
        });
        xs.push(GaussianRational::real(x));
    }
    Ok(newton_interpolate(&xs, &ys))
}

/// Discriminant of a rational polynomial via its integer multiple: the
/// fraction-free elimination then needs no gcd normalization at all.
/// Disc(c·q) = c^{2n−2}·Disc(q).
fn integer_discriminant(q: &Poly<BigRational>) -> BigRational {
    let n = q.degree().expect("sample keeps its degree");
    let scale = q
        .coeffs()
        .iter()
        .fold(<BigInt as One>::one(), |acc, c| acc.lcm(c.denom()));
    let ints = Poly::new(
        q.coeffs()
            .iter()
            .map(|c| (c * BigRational::from_integer(scale.clone())).to_integer())
            .collect(),
    );
    BigRational::new(discriminant(&ints), num_traits::pow(scale, 2 * n - 2))
}

fn newton_interpolate(xs: &[GaussianRational], ys: &[GaussianRational]) -> ParamPoly {
    let n = xs.len();
    let mut coef = ys.to_vec();
    for level in 1..n {
        for i in (level..n).rev() {
            let num = coef[i].sub(&coef[i - 1]);
            let den = xs[i].sub(&xs[i - level]);
            coef[i] = Field::div(&num, &den);
        }
    }
    let mut out = ParamPoly::zero();
    for i in (0..n).rev() {
        // out = out·(x − x_i) + c_i
        let factor = ParamPoly::new(vec![xs[i].neg(), GaussianRational::one()]);
        out = out.mul(&factor).add(&ParamPoly::constant(coef[i].clone()));
    }
    out
}

/// One multiple eigenvalue at a discriminant root.
#[derive(Clone, Debug, PartialEq)]
pub struct Coalescence {
    pub value: Complex64,
    pub exact: Option<GaussianRational>,
    pub algebraic: usize,
    pub geometric: usize,
    /// Size of the largest Jordan block.
    pub order: usize,
    /// Location, eigenvalue and all multiplicities were computed exactly.
    pub certified: bool,
}

impl Coalescence {
    pub fn is_defective(&self) -> bool {
        self.geometric < self.algebraic
    }
}

/// A real root of the discriminant with the spectrum structure there.
#[derive(Clone, Debug, PartialEq)]
pub struct EpCandidate {
    pub location: RootLocation,
    /// Multiplicity of the root in F. Not the EP order.
    pub root_multiplicity: usize,
    /// Square-free real polynomial having this root as its only root in
    /// the location interval.
    pub defining: Poly<BigRational>,
    pub coalescences: Vec<Coalescence>,
}

impl EpCandidate {
    pub fn is_ep(&self) -> bool {
        self.coalescences.iter().any(Coalescence::is_defective)
    }

    /// Degenerate but diagonalizable.
    pub fn is_diabolic(&self) -> bool {
        !self.coalescences.is_empty() && !self.is_ep()
    }

    pub fn order(&self) -> Option<usize> {
        self.coalescences
            .iter()
            .filter(|c| c.is_defective())
            .map(|c| c.order)
            .max()
    }

    /// Exact comparison of the root with a rational.
    pub fn compare(&self, x: &BigRational) -> Ordering {
        compare_root(&self.location, &self.defining, x)
    }
}

pub(crate) fn compare_root(location: &RootLocation, defining: &Poly<BigRational>, x: &BigRational) -> Ordering {
    match location {
        RootLocation::Exact(r) => r.cmp(x),
        RootLocation::Interval { lo, hi } => {
            if x <= lo {
                Ordering::Greater
            } else if x >= hi {
                Ordering::Less
            } else {
                let at_x = defining.eval(x);
                let at_lo = defining.eval(lo);
                if at_x.is_positive() == at_lo.is_positive() {
                    Ordering::Greater
                } else {
                    Ordering::Less
                }
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct EpReport {
    pub parameter: String,
    pub discriminant: ParamPoly,
    pub degree: usize,
    /// Real parameter values where an entry has a pole; removed from the
    /// candidate list.
    pub excluded: Vec<RootLocation>,
    pub candidates: Vec<EpCandidate>,
}

impl EpReport {
    pub fn eps(&self) -> impl Iterator<Item = &EpCandidate> {
        self.candidates.iter().filter(|c| c.is_ep())
    }

    /// The smallest EP location strictly above zero.
    pub fn smallest_positive_ep(&self) -> Option<&EpCandidate> {
        self.eps()
            .find(|c| c.compare(&<BigRational as Zero>::zero()) == Ordering::Greater)
    }
}

const FINE_WIDTH_BITS: usize = 160;

fn real_factors(f: &ParamPoly) -> Vec<(Poly<BigRational>, usize)> {
    if f.is_real() {
        return f
            .real_part()
            .square_free()
            .into_iter()
            .filter(|(g, _)| g.degree().unwrap_or(0) > 0)
            .collect();
    }
    f.square_free()
        .into_iter()
        .filter_map(|(g, mult)| {
            let re = g.real_part();
            let real = if g.is_real() { re } else { re.gcd(&g.imag_part()) };
            (real.degree().unwrap_or(0) > 0).then_some((real, mult))
        })
        .collect()
}

fn real_roots(f: &Poly<BigRational>, width: &BigRational) -> Result<Vec<RootLocation>> {
    Ok(isolate_real_roots_with(&f.to_param(), width)?
        .roots
        .into_iter()
        .map(|r| r.location)
        .collect())
}

pub fn find_eps(model: &ChainModel) -> Result<EpReport> {
    find_eps_with(model, &SpectralOptions::default())
}

pub fn find_eps_with(model: &ChainModel, opts: &SpectralOptions) -> Result<EpReport> {
    let f = discriminant_of_model(model)?;
    if f.is_zero() {
        return Err(Error::Domain(
            "discriminant vanishes identically: eigenvalues are degenerate for every parameter".into(),
        ));
    }
    let width = crate::numerics::roots::default_width();
    let fine = BigRational::new(<BigInt as One>::one(), <BigInt as One>::one() << FINE_WIDTH_BITS);
    let den = model.cleared_denominator()?;
    let mut excluded = Vec::new();
    for (g, _) in real_factors(&den) {
        excluded.extend(real_roots(&g, &width)?);
    }
    excluded.sort_by(|a, b| a.lower().cmp(b.lower()));

    let den_real = real_factors(&den);
    let mut roots: Vec<(RootLocation, RootLocation, usize, Poly<BigRational>)> = Vec::new();
    for (mut g, mult) in real_factors(&f) {
        for (d, _) in &den_real {
            let common = g.gcd(d);
            if common.degree().unwrap_or(0) > 0 {
                g = g.div_rem(&common).0;
            }
        }
        if g.degree().unwrap_or(0) == 0 {
            continue;
        }
        for (c, s) in isolate_square_free_refined(&g, &width, &fine) {
            roots.push((c, s, mult, g.clone()));
        }
    }
    roots.sort_by(|a, b| a.0.lower().cmp(b.0.lower()));

    let candidates = roots
        .into_iter()
        .map(|(location, sharp, mult, g)| {
            let coalescences = coalescences_at(model, &sharp, opts)?;
            Ok(EpCandidate {
                location,
                root_multiplicity: mult,
                defining: g,
                coalescences,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(EpReport {
        parameter: model.parameter_or_default().to_string(),
        degree: f.degree().unwrap_or(0),
        discriminant: f,
        excluded,
        candidates,
    })
}

fn coalescences_at(model: &ChainModel, at: &RootLocation, opts: &SpectralOptions) -> Result<Vec<Coalescence>> {
    let x = at.midpoint();
    let evaluated = model.evaluate(Some(&x))?;
    let exact_point = at.exact().is_some();
    let exact_matrix = match &evaluated {
        Evaluated::Exact(b) if exact_point => Some(b.to_dense()),
        _ => None,
    };
    let spectrum = if exact_point {
        eigen_band(&evaluated, opts)?
    } else {
        // the rational point is only near the root: cluster numerically
        eigen_band(&Evaluated::Numeric(evaluated.to_c64()), opts)?
    };
    let h = evaluated.to_matrix();
    Ok(spectrum
        .clusters
        .iter()
        .filter(|c| c.algebraic > 1)
        .map(|c| {
            let (order, certified) = match (&c.exact, &exact_matrix) {
                (Some(e), Some(m)) => (jordan_order_exact(m, e, c.algebraic), true),
                _ if c.geometric == 1 => (c.algebraic, false),
                _ => (jordan_order_numeric(&h, c.value, c.algebraic, opts), false),
            };
            Coalescence {
                value: c.value,
                exact: c.exact.clone(),
                algebraic: c.algebraic,
                geometric: c.geometric,
                order,
                certified,
            }
        })
        .collect())
}

/// Smallest k with dim ker (H − e)^k equal to the algebraic multiplicity.
fn jordan_order_exact(m: &[Vec<GaussianRational>], e: &GaussianRational, algebraic: usize) -> usize {
    let n = m.len();
    let a = shift_diagonal(m, e);
    let mut power = a.clone();
    let mut k = 1;
    while n - rank(&power) < algebraic && k < algebraic {
        power = mat_mul(&power, &a);
        k += 1;
    }
    k
}

fn numeric_nullity(m: &DMatrix<Complex64>, scale: f64, opts: &SpectralOptions) -> usize {
    let n = m.nrows();
    let sv = m.singular_values();
    let threshold = opts.rank_tol.sqrt() * scale.max(f64::MIN_POSITIVE) * n as f64;
    sv.iter().filter(|&&s| s <= threshold).count()
}

fn jordan_order_numeric(h: &DMatrix<Complex64>, e: Complex64, algebraic: usize, opts: &SpectralOptions) -> usize {
    let n = h.nrows();
    let a = h - DMatrix::<Complex64>::identity(n, n) * e;
    let scale = a.norm().max(1.0);
    let mut power = a.clone();
    let mut k = 1;
    while numeric_nullity(&power, scale.powi(k as i32), opts) < algebraic && k < algebraic {
        power = &power * &a;
        k += 1;
    }
    k
}

/// How the unperturbed couplings are drawn in a robustness trial.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Disorder {
    /// Random t_n, with the backward couplings equal to them.
    Symmetric,
    /// Random t_n and independent random backward couplings.
    Independent,
}

#[derive(Clone, Debug, PartialEq)]
pub struct RobustnessConfig {
    pub n: usize,
    /// 1-based perturbed bond.
    pub bond: usize,
    /// Value of the perturbed coupling t_k, kept fixed in every trial.
    pub fixed: BigRational,
    pub trials: usize,
    pub seed: u64,
    pub disorder: Disorder,
}

impl RobustnessConfig {
    pub fn new(n: usize, trials: usize, seed: u64) -> Self {
        RobustnessConfig {
            n,
            bond: n.saturating_sub(1),
            fixed: <BigRational as One>::one(),
            trials,
            seed,
            disorder: Disorder::Symmetric,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct TrialOutcome {
    pub trial: usize,
    pub t: Vec<BigRational>,
    pub j: Option<Vec<BigRational>>,
    pub ep_locations: Vec<RootLocation>,
    pub smallest_positive: Option<RootLocation>,
    /// Comparison of the smallest positive EP with the fixed t_k.
    pub versus_fixed: Option<Ordering>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct RobustnessSummary {
    pub config: RobustnessConfig,
    pub trials: Vec<TrialOutcome>,
}

impl RobustnessSummary {
    /// Trials whose smallest positive EP sits exactly at t_k.
    pub fn at_fixed(&self) -> usize {
        self.count(Ordering::Equal)
    }

    pub fn above_fixed(&self) -> usize {
        self.count(Ordering::Greater)
    }

    pub fn below_fixed(&self) -> usize {
        self.count(Ordering::Less)
    }

    pub fn without_ep(&self) -> usize {
        self.trials.iter().filter(|t| t.versus_fixed.is_none()).count()
    }

    fn count(&self, o: Ordering) -> usize {
        self.trials.iter().filter(|t| t.versus_fixed == Some(o)).count()
    }
}

/// Coupling drawn as k/1000 with k uniform in 1..=999, so it lies in
/// (0, 1) and stays exact.
fn draw_coupling(rng: &mut ChaCha8Rng) -> BigRational {
    BigRational::new(BigInt::from(rng.gen_range(1..=999)), BigInt::from(1000))
}

fn run_trial(config: &RobustnessConfig, trial: usize) -> Result<TrialOutcome> {
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    rng.set_stream(trial as u64);
    let n = config.n;
    let mut t: Vec<BigRational> = (0..n - 1).map(|_| draw_coupling(&mut rng)).collect();
    t[config.bond - 1] = config.fixed.clone();
    let j = match config.disorder {
        Disorder::Symmetric => None,
        Disorder::Independent => Some((0..n - 1).map(|_| draw_coupling(&mut rng)).collect()),
    };
    let spec = DefectSpec {
        n,
        beta: <BigRational as Zero>::zero(),
        t: t.clone(),
        j: j.clone(),
        bond: config.bond,
        gamma: None,
    };
    let report = find_eps(&build_defect(&spec)?)?;
    let smallest = report.smallest_positive_ep();
    Ok(TrialOutcome {
        trial,
        t,
        j,
        ep_locations: report.eps().map(|c| c.location.clone()).collect(),
        smallest_positive: smallest.map(|c| c.location.clone()),
        versus_fixed: smallest.map(|c| c.compare(&config.fixed)),
    })
}

/// Repeat the EP search on chains with random couplings. Every trial owns
/// the ChaCha stream `trial` of the seed, so the outcome does not depend on
/// scheduling.
pub fn robustness_sweep(config: &RobustnessConfig) -> Result<RobustnessSummary> {
    if config.n < 2 {
        return Err(Error::Usage("chain needs at least 2 sites".into()));
    }
    if config.bond == 0 || config.bond > config.n - 1 {
        return Err(Error::Usage(format!("perturbed bond must lie in 1..={}", config.n - 1)));
    }
    let trials = (0..config.trials)
        .into_par_iter()
        .map(|k| run_trial(config, k))
        .collect::<Result<Vec<_>>>()?;
    Ok(RobustnessSummary {
        config: config.clone(),
        trials,
    })
}

/// Which side of the expansion point the grid approaches from.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Side {
    Above,
    Below,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SeriesSpec {
    pub point: BigRational,
    pub side: Side,
    /// Distances from the point, positive.
    pub distances: Vec<f64>,
    /// Number of branches to fit, counted from the lowest real part.
    pub branches: usize,
}

impl SeriesSpec {
    /// `steps` distances spaced geometrically from `near` to `far`.
    pub fn geometric(point: BigRational, side: Side, near: f64, far: f64, steps: usize, branches: usize) -> Self {
        let distances = if steps <= 1 {
            vec![near]
        } else {
            let ratio = (far / near).ln() / (steps - 1) as f64;
            (0..steps).map(|k| near * (ratio * k as f64).exp()).collect()
        };
        SeriesSpec {
            point,
            side,
            distances,
            branches,
        }
    }
}

/// E_branch ≈ coefficient · distance^exponent.
#[derive(Clone, Debug, PartialEq)]
pub struct BranchFit {
    pub branch: usize,
    pub exponent: f64,
    pub coefficient: Complex64,
    /// RMS residual of the log-log fit.
    pub residual: f64,
    pub reliable: bool,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SeriesCheck {
    pub point: BigRational,
    pub side: Side,
    pub distances: Vec<f64>,
    pub fits: Vec<BranchFit>,
}

impl SeriesCheck {
    /// |c − reference| / |reference| for one branch.
    pub fn deviation(&self, branch: usize, reference: f64) -> Option<f64> {
        self.fits
            .iter()
            .find(|f| f.branch == branch)
            .map(|f| (f.coefficient - reference).norm() / reference.abs())
    }
}

pub const FIT_RESIDUAL_LIMIT: f64 = 1e-2;

pub fn fit_power_law(xs: &[f64], values: &[Complex64]) -> (f64, Complex64, f64) {
    let pts: Vec<(f64, f64)> = xs
        .iter()
        .zip(values)
        .filter(|(x, v)| **x > 0.0 && v.norm() > 0.0)
        .map(|(x, v)| (x.ln(), v.norm().ln()))
        .collect();
    let m = pts.len() as f64;
    if pts.len() < 2 {
        return (f64::NAN, Complex64::new(f64::NAN, f64::NAN), f64::INFINITY);
    }
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / m;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / m;
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let slope = if sxx > 0.0 { sxy / sxx } else { 0.0 };
    let intercept = my - slope * mx;
    let residual = (pts.iter().map(|p| (p.1 - intercept - slope * p.0).powi(2)).sum::<f64>() / m).sqrt();
    // phase taken from the point nearest the expansion point
    let nearest = xs
        .iter()
        .zip(values)
        .filter(|(x, v)| **x > 0.0 && v.norm() > 0.0)
        .min_by(|a, b| a.0.total_cmp(b.0))
        .map(|(_, v)| v / v.norm())
        .unwrap_or(Complex64::new(1.0, 0.0));
    (slope, nearest * intercept.exp(), residual)
}

/// Fit the leading power law of the lowest eigenvalue branches as the
/// parameter approaches `spec.point`.
pub fn series_check(model: &ChainModel, spec: &SeriesSpec, opts: &SpectralOptions) -> Result<SeriesCheck> {
    if spec.distances.iter().any(|d| !(d.is_finite() && *d > 0.0)) {
        return Err(Error::Usage("series distances must be positive".into()));
    }
    if spec.branches == 0 || spec.branches > model.n() {
        return Err(Error::Usage(format!("branch count must lie in 1..={}", model.n())));
    }
    let spectra = spec
        .distances
        .par_iter()
        .map(|&d| {
            let step = BigRational::from_f64(d).expect("finite distance");
            let x = match spec.side {
                Side::Above => &spec.point + step,
                Side::Below => &spec.point - step,
            };
            let evaluated = model.evaluate(Some(&x))?;
            Ok(eigen_band(&evaluated, opts)?.eigenvalues)
        })
        .collect::<Result<Vec<_>>>()?;
    let fits = (0..spec.branches)
        .map(|b| {
            let values: Vec<Complex64> = spectra.iter().map(|s| s[b]).collect();
            let (exponent, coefficient, residual) = fit_power_law(&spec.distances, &values);
            BranchFit {
                branch: b + 1,
                exponent,
                coefficient,
                residual,
                reliable: residual <= FIT_RESIDUAL_LIMIT,
            }
        })
        .collect();
    Ok(SeriesCheck {
        point: spec.point.clone(),
        side: spec.side,
        distances: spec.distances.clone(),
        fits,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::models::{build_biased, BiasedBoundary, BiasedSpec};
    use crate::numerics::poly_discriminant;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn sampling_agrees_with_direct_elimination() {
        for n in 2..=6 {
            let p = build_defect(&DefectSpec::uniform(n).with_beta(q(1, 3)))
                .unwrap()
                .char_poly()
                .unwrap();
            assert_eq!(
                discriminant_by_sampling(&p).unwrap(),
                poly_discriminant(&p).unwrap(),
                "n = {n}"
            );
        }
        let m = build_biased(&BiasedSpec::new(4, BiasedBoundary::PbcCorrected)).unwrap();
        let p = m.char_poly().unwrap();
        assert_eq!(discriminant_by_sampling(&p).unwrap(), poly_discriminant(&p).unwrap());
    }

    #[test]
    fn small_discriminants() {
        let f2 = discriminant_of_model(&build_defect(&DefectSpec::uniform(2)).unwrap()).unwrap();
        assert_eq!(f2, ParamPoly::from_ints(&[4, -4]));
        let f3 = discriminant_of_model(&build_defect(&DefectSpec::uniform(3)).unwrap()).unwrap();
        assert_eq!(
            f3,
            ParamPoly::from_ints(&[2, -1])
                .pow(3)
                .scale(&GaussianRational::from_ints(4, 0))
        );
    }

    #[test]
    fn odd_chain_third_order_point() {
        let r = find_eps(&build_defect(&DefectSpec::uniform(5)).unwrap()).unwrap();
        let eps: Vec<_> = r.eps().collect();
        assert_eq!(eps.len(), 1);
        assert_eq!(eps[0].location, RootLocation::Exact(q(3, 2)));
        assert_eq!(eps[0].root_multiplicity, 3);
        let c = &eps[0].coalescences[0];
        assert_eq!((c.algebraic, c.geometric, c.order), (3, 1, 3));
        assert!(c.certified);
        assert_eq!(c.exact, Some(GaussianRational::from_ints(0, 0)));
    }

    #[test]
    fn ring_fourth_order_point_and_pole() {
        let m = build_biased(&BiasedSpec::new(4, BiasedBoundary::PbcCorrected)).unwrap();
        let r = find_eps(&m).unwrap();
        assert_eq!(r.excluded, vec![RootLocation::Exact(q(1, 1))]);
        assert!(r.candidates.iter().all(|c| c.location != RootLocation::Exact(q(1, 1))));
        let ep = r.eps().find(|c| c.location == RootLocation::Exact(q(-1, 1))).unwrap();
        assert_eq!(ep.order(), Some(4));
        // the crossing at δ = 0 is diabolic
        let zero = r
            .candidates
            .iter()
            .find(|c| c.location == RootLocation::Exact(q(0, 1)))
            .unwrap();
        assert!(zero.is_diabolic());
    }

    #[test]
    fn compare_irrational_root() {
        // x² − 2 on (1, 2)
        let g = Poly::new(vec![q(-2, 1), q(0, 1), q(1, 1)]);
        let loc = RootLocation::Interval {
            lo: q(1, 1),
            hi: q(2, 1),
        };
        assert_eq!(compare_root(&loc, &g, &q(7, 5)), Ordering::Greater);
        assert_eq!(compare_root(&loc, &g, &q(3, 2)), Ordering::Less);
        assert_eq!(compare_root(&loc, &g, &q(2, 1)), Ordering::Less);
    }

    #[test]
    fn sweep_is_reproducible_and_scheduling_free() {
        let cfg = RobustnessConfig::new(4, 6, 42);
        let a = robustness_sweep(&cfg).unwrap();
        let b = robustness_sweep(&cfg).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.at_fixed(), 6);
        assert!(robustness_sweep(&RobustnessConfig::new(4, 0, 1))
            .unwrap()
            .trials
            .is_empty());
    }

    #[test]
    fn linear_fit_is_exact() {
        let xs = [1e-3, 1e-2, 1e-1];
        let vs: Vec<Complex64> = xs.iter().map(|x| Complex64::new(-3.0 * x, 0.0)).collect();
        let (p, c, r) = fit_power_law(&xs, &vs);
        assert!((p - 1.0).abs() < 1e-12);
        assert!((c.re + 3.0).abs() < 1e-12);
        assert!(r < 1e-12);
    }
}
