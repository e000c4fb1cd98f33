//! Diagonal similarity gauge H̃ = Q⁻¹HQ, the metric η = Q⁻², and the
//! quasi-Hermiticity certificate Q²H† = HQ².
//!
//! Bond j (1-based) joins sites j and j+1; under PBC bond N is the corner
//! joining N back to 1. Along bond a→b the ratio is
//! R = conj(H_{b,a}) / H_{a,b} = Q_b² / Q_a².

use std::fmt;

use num_complex::Complex64;
use num_rational::BigRational;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::hamiltonian::{Band, BoundaryMode, ChainModel, Corner, Entries, Evaluated};
use crate::numerics::{GaussianRational, RatFn, RealSign, Ring, Scalar};

pub const DEFAULT_TOL: f64 = 1e-10;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Hermitian,
    QuasiHermitian,
    NotQuasiHermitian,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Hermitian => "hermitian",
            Verdict::QuasiHermitian => "quasi_hermitian",
            Verdict::NotQuasiHermitian => "not_quasi_hermitian",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum RatioKind {
    Positive,
    NonPositive,
    Complex,
    /// Forward coupling zero, backward coupling nonzero.
    Undefined,
    /// Both couplings zero: the chain splits here.
    Decoupled,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Ratio<S> {
    pub bond: usize,
    pub value: Option<S>,
    pub kind: RatioKind,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Witness {
    UndefinedRatio {
        bond: usize,
    },
    NonPositiveRatio {
        bond: usize,
    },
    ComplexRatio {
        bond: usize,
    },
    /// Going once around the ring the weights do not close up:
    /// R_N · R_{N−1} ··· R_1 ≠ 1.
    RingProduct {
        product: [f64; 2],
    },
}

impl fmt::Display for Witness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Witness::UndefinedRatio { bond } => write!(f, "ratio undefined at bond {bond}"),
            Witness::NonPositiveRatio { bond } => write!(f, "ratio not positive at bond {bond}"),
            Witness::ComplexRatio { bond } => write!(f, "ratio not real at bond {bond}"),
            Witness::RingProduct { product } => {
                write!(
                    f,
                    "product of ratios around the ring is {}{:+}i",
                    product[0], product[1]
                )
            }
        }
    }
}

/// √radicand · factor, with radicand a positive real.
#[derive(Clone, Debug, PartialEq)]
pub struct Scaled<S> {
    pub radicand: S,
    pub factor: S,
}

impl<S: Scalar> Scaled<S> {
    pub fn to_c64(&self) -> Complex64 {
        self.factor.to_c64() * self.radicand.to_c64().re.sqrt()
    }

    /// Exact (or tolerance) equality of √p·x and √q·y: p x² = q y² with
    /// x·conj(y) a nonnegative real.
    pub fn same_as(&self, other: &Self, tol: f64) -> bool {
        let lhs = self.radicand.mul(&self.factor.mul(&self.factor));
        let rhs = other.radicand.mul(&other.factor.mul(&other.factor));
        if !lhs.near(&rhs, tol) {
            return false;
        }
        let cross = self.factor.mul(&other.factor.conj());
        cross.is_negligible(tol) || cross.real_sign(tol) == RealSign::Positive
    }

    pub fn conj(&self) -> Self {
        Scaled {
            radicand: self.radicand.clone(),
            factor: self.factor.conj(),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct GaugeReport<S> {
    pub ratios: Vec<Ratio<S>>,
    /// Q_j², Q_1 = 1, present when every open bond has a positive ratio.
    pub weights_squared: Option<Vec<S>>,
    /// Entries of H̃ = Q⁻¹HQ.
    pub transformed: Option<Band<Scaled<S>>>,
    pub verdict: Verdict,
    pub witness: Option<Witness>,
}

impl<S: Scalar> GaugeReport<S> {
    /// Q_j as floats.
    pub fn weights(&self) -> Option<Vec<f64>> {
        self.weights_squared
            .as_ref()
            .map(|w| w.iter().map(|q| q.to_c64().re.sqrt()).collect())
    }

    /// Metric η = Q⁻² (diagonal).
    pub fn metric(&self) -> Option<Vec<f64>> {
        self.weights_squared
            .as_ref()
            .map(|w| w.iter().map(|q| 1.0 / q.to_c64().re).collect())
    }

    pub fn transformed_c64(&self) -> Option<Band<Complex64>> {
        self.transformed.as_ref().map(|b| b.map(Scaled::to_c64))
    }
}

/// Gauge report on either arithmetic path.
#[derive(Clone, Debug, PartialEq)]
pub enum Gauge {
    Exact(GaugeReport<GaussianRational>),
    Numeric(GaugeReport<Complex64>),
}

impl Gauge {
    pub fn verdict(&self) -> Verdict {
        match self {
            Gauge::Exact(g) => g.verdict,
            Gauge::Numeric(g) => g.verdict,
        }
    }

    pub fn witness(&self) -> Option<&Witness> {
        match self {
            Gauge::Exact(g) => g.witness.as_ref(),
            Gauge::Numeric(g) => g.witness.as_ref(),
        }
    }

    pub fn weights(&self) -> Option<Vec<f64>> {
        match self {
            Gauge::Exact(g) => g.weights(),
            Gauge::Numeric(g) => g.weights(),
        }
    }

    pub fn metric(&self) -> Option<Vec<f64>> {
        match self {
            Gauge::Exact(g) => g.metric(),
            Gauge::Numeric(g) => g.metric(),
        }
    }

    pub fn transformed_c64(&self) -> Option<Band<Complex64>> {
        match self {
            Gauge::Exact(g) => g.transformed_c64(),
            Gauge::Numeric(g) => g.transformed_c64(),
        }
    }

    /// (bond, value, kind) with values as floats.
    pub fn ratios_c64(&self) -> Vec<(usize, Option<Complex64>, RatioKind)> {
        fn conv<S: Scalar>(r: &[Ratio<S>]) -> Vec<(usize, Option<Complex64>, RatioKind)> {
            r.iter()
                .map(|x| (x.bond, x.value.as_ref().map(S::to_c64), x.kind))
                .collect()
        }
        match self {
            Gauge::Exact(g) => conv(&g.ratios),
            Gauge::Numeric(g) => conv(&g.ratios),
        }
    }

    pub fn is_quasi_hermitian(&self) -> bool {
        self.verdict() != Verdict::NotQuasiHermitian
    }
}

/// Largest entry magnitude; numeric tolerances are relative to it.
fn band_scale<S: Scalar>(band: &Band<S>) -> f64 {
    let norms = band.map(|x| x.to_c64().norm());
    norms
        .diag
        .iter()
        .chain(&norms.upper)
        .chain(&norms.lower)
        .chain(norms.corner.iter().flat_map(|c| [&c.h_1n, &c.h_n1]))
        .fold(1.0, |a, &b| a.max(b))
}

/// Classify one bond a→b with couplings `forward` = H_{a,b}, `backward` = H_{b,a}.
fn bond_ratio<S: Scalar>(bond: usize, forward: &S, backward: &S, tol: f64) -> Ratio<S> {
    let fz = forward.is_negligible(tol);
    let bz = backward.is_negligible(tol);
    if fz && bz {
        return Ratio {
            bond,
            value: None,
            kind: RatioKind::Decoupled,
        };
    }
    if fz {
        return Ratio {
            bond,
            value: None,
            kind: RatioKind::Undefined,
        };
    }
    let r = backward.conj().div(forward);
    let kind = classify(&r, tol);
    Ratio {
        bond,
        value: Some(r),
        kind,
    }
}

fn classify<S: Scalar>(r: &S, tol: f64) -> RatioKind {
    let sign = if S::is_exact() {
        r.real_sign(0.0)
    } else {
        let z = r.to_c64();
        let m = z.norm();
        if m == 0.0 {
            RealSign::NonPositive
        } else {
            (z / m).real_sign(tol)
        }
    };
    match sign {
        RealSign::Positive => RatioKind::Positive,
        RealSign::NonPositive => RatioKind::NonPositive,
        RealSign::NonReal => RatioKind::Complex,
    }
}

fn witness_for<S>(r: &Ratio<S>) -> Option<Witness> {
    let bond = r.bond;
    match r.kind {
        RatioKind::Positive | RatioKind::Decoupled => None,
        RatioKind::NonPositive => Some(Witness::NonPositiveRatio { bond }),
        RatioKind::Complex => Some(Witness::ComplexRatio { bond }),
        RatioKind::Undefined => Some(Witness::UndefinedRatio { bond }),
    }
}

fn ratios_of<S: Scalar>(band: &Band<S>, tol: f64) -> Vec<Ratio<S>> {
    let n = band.n();
    let mut out: Vec<Ratio<S>> = (0..n.saturating_sub(1))
        .map(|j| bond_ratio(j + 1, &band.upper[j], &band.lower[j], tol))
        .collect();
    if let Some(c) = &band.corner {
        // bond N runs from site N to site 1: forward H_{N,1}, backward H_{1,N}
        out.push(bond_ratio(n, &c.h_n1, &c.h_1n, tol));
    }
    out
}

/// H̃_{ij} = (Q_j / Q_i) H_{ij} for the given squared weights.
pub fn transform<S: Scalar>(band: &Band<S>, weights_squared: &[S]) -> Band<Scaled<S>> {
    let n = band.n();
    let entry = |i: usize, j: usize, h: &S| Scaled {
        radicand: weights_squared[j].div(&weights_squared[i]),
        factor: h.clone(),
    };
    Band {
        diag: (0..n).map(|j| entry(j, j, &band.diag[j])).collect(),
        upper: (0..n.saturating_sub(1))
            .map(|j| entry(j, j + 1, &band.upper[j]))
            .collect(),
        lower: (0..n.saturating_sub(1))
            .map(|j| entry(j + 1, j, &band.lower[j]))
            .collect(),
        corner: band.corner.as_ref().map(|c| Corner {
            h_1n: entry(0, n - 1, &c.h_1n),
            h_n1: entry(n - 1, 0, &c.h_n1),
        }),
    }
}

fn is_hermitian<S: Scalar>(band: &Band<S>, tol: f64) -> bool {
    let diag_real = band.diag.iter().all(|d| d.sub(&d.conj()).is_negligible(tol));
    let bonds = band.upper.iter().zip(&band.lower).all(|(u, l)| u.conj().near(l, tol));
    let corner = band.corner.as_ref().map_or(true, |c| c.h_1n.conj().near(&c.h_n1, tol));
    diag_real && bonds && corner
}

/// The gauge of an evaluated band. `tol` is relative to the largest entry
/// and ignored on the exact path.
pub fn build_gauge_band<S: Scalar>(band: &Band<S>, tol: f64) -> GaugeReport<S> {
    let n = band.n();
    let abs_tol = tol * band_scale(band);
    let ratios = ratios_of(band, abs_tol);
    let hermitian = is_hermitian(band, abs_tol);
    let open = &ratios[..n.saturating_sub(1)];
    if let Some(w) = open.iter().find_map(witness_for) {
        return GaugeReport {
            ratios,
            weights_squared: None,
            transformed: None,
            verdict: Verdict::NotQuasiHermitian,
            witness: Some(w),
        };
    }
    // walk the open bonds; a decoupled bond starts a fresh block at weight 1
    let mut weights = vec![S::one()];
    let mut last_block_start = 0;
    for (j, r) in open.iter().enumerate() {
        match &r.value {
            Some(v) => weights.push(weights[j].mul(v)),
            None => {
                weights.push(S::one());
                last_block_start = j + 1;
            }
        }
    }
    let mut witness = None;
    if let Some(ring) = ratios.get(n.saturating_sub(1)).filter(|_| band.corner.is_some()) {
        match (&ring.value, ring.kind) {
            (_, RatioKind::Decoupled) => {}
            (Some(rn), RatioKind::Positive) => {
                // Q_1² / Q_N² must equal R_N
                let closing = rn.mul(&weights[n - 1]);
                if last_block_start == 0 {
                    let tol_ring = if S::is_exact() { 0.0 } else { tol * n as f64 };
                    if !closing.near(&S::one(), tol_ring) {
                        let p = closing.to_c64();
                        witness = Some(Witness::RingProduct { product: [p.re, p.im] });
                    }
                } else {
                    // the corner links the last block to the first: rescale it
                    let f = closing.inv();
                    for w in &mut weights[last_block_start..] {
                        *w = w.mul(&f);
                    }
                }
            }
            _ => witness = witness_for(ring),
        }
    }
    let transformed = transform(band, &weights);
    let verdict = if witness.is_some() {
        Verdict::NotQuasiHermitian
    } else if hermitian {
        Verdict::Hermitian
    } else {
        Verdict::QuasiHermitian
    };
    GaugeReport {
        ratios,
        weights_squared: Some(weights),
        transformed: Some(transformed),
        verdict,
        witness,
    }
}

/// R_j for every bond of the model at the given parameter value. Errors when
/// some forward coupling H_{j,j+1} (or H_{N,1} under PBC) vanishes.
pub fn compute_ratios(model: &ChainModel, param: Option<&BigRational>, tol: f64) -> Result<Vec<Ratio<Complex64>>> {
    fn strict<S: Scalar>(band: &Band<S>, tol: f64) -> Result<Vec<Ratio<Complex64>>> {
        let ratios = ratios_of(band, tol * band_scale(band));
        if let Some(r) = ratios
            .iter()
            .find(|r| matches!(r.kind, RatioKind::Undefined | RatioKind::Decoupled))
        {
            return Err(Error::Domain(format!(
                "ratio undefined at bond {}: zero forward coupling",
                r.bond
            )));
        }
        Ok(ratios
            .into_iter()
            .map(|r| Ratio {
                bond: r.bond,
                value: r.value.map(|v| v.to_c64()),
                kind: r.kind,
            })
            .collect())
    }
    match model.evaluate(param)? {
        Evaluated::Exact(b) => strict(&b, tol),
        Evaluated::Numeric(b) => strict(&b, tol),
    }
}

/// Exact ratios (exact models only).
pub fn compute_ratios_exact(model: &ChainModel, param: Option<&BigRational>) -> Result<Vec<Ratio<GaussianRational>>> {
    match model.evaluate(param)? {
        Evaluated::Exact(b) => {
            let ratios = ratios_of(&b, 0.0);
            if let Some(r) = ratios
                .iter()
                .find(|r| matches!(r.kind, RatioKind::Undefined | RatioKind::Decoupled))
            {
                return Err(Error::Domain(format!(
                    "ratio undefined at bond {}: zero forward coupling",
                    r.bond
                )));
            }
            Ok(ratios)
        }
        Evaluated::Numeric(_) => Err(Error::Usage("exact ratios need an exact model".into())),
    }
}

pub fn build_gauge(model: &ChainModel, param: Option<&BigRational>, tol: f64) -> Result<Gauge> {
    Ok(match model.evaluate(param)? {
        Evaluated::Exact(b) => Gauge::Exact(build_gauge_band(&b, tol)),
        Evaluated::Numeric(b) => Gauge::Numeric(build_gauge_band(&b, tol)),
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Certificate {
    pub holds: bool,
    /// Max-norm of Q²H† − HQ² (exactly 0 when it holds on the exact path).
    pub residual: f64,
    pub exact: bool,
}

/// Entrywise check of Q²H† = HQ² over the whole dense matrix.
pub fn certify<S: Scalar>(band: &Band<S>, weights_squared: &[S], tol: f64) -> Certificate {
    let h = band.to_dense();
    let n = h.len();
    let mut residual = 0.0f64;
    let mut holds = true;
    let abs_tol = tol * band_scale(band) * weights_squared.iter().map(|w| w.to_c64().norm()).fold(1.0, f64::max);
    for i in 0..n {
        for j in 0..n {
            let lhs = weights_squared[i].mul(&h[j][i].conj());
            let rhs = h[i][j].mul(&weights_squared[j]);
            let diff = lhs.sub(&rhs);
            residual = residual.max(diff.to_c64().norm());
            let ok = if S::is_exact() {
                diff.is_zero()
            } else {
                diff.is_negligible(abs_tol)
            };
            holds &= ok;
        }
    }
    Certificate {
        holds,
        residual: if holds && S::is_exact() { 0.0 } else { residual },
        exact: S::is_exact(),
    }
}

pub fn check_quasi_hermitian(model: &ChainModel, param: Option<&BigRational>, tol: f64) -> Result<Certificate> {
    fn run<S: Scalar>(band: &Band<S>, tol: f64) -> Result<Certificate> {
        let g = build_gauge_band(band, tol);
        let w = g.weights_squared.ok_or_else(|| {
            Error::Usage(format!(
                "no positive diagonal gauge: {}",
                g.witness.map(|w| w.to_string()).unwrap_or_default()
            ))
        })?;
        Ok(certify(band, &w, tol))
    }
    match model.evaluate(param)? {
        Evaluated::Exact(b) => run(&b, tol),
        Evaluated::Numeric(b) => run(&b, tol),
    }
}

/// The corner H_{N,1} that makes the transformed ring Hermitian:
/// H_{N,1} = R_{N−1} ··· R_1 · conj(H_{1,N}).
#[derive(Clone, Debug, PartialEq)]
pub enum CornerValue {
    Exact(RatFn),
    Numeric(Complex64),
}

pub fn pbc_reality_corner(model: &ChainModel) -> Result<CornerValue> {
    if model.boundary() != BoundaryMode::Pbc {
        return Err(Error::Usage("reality corner needs a pbc model".into()));
    }
    match model.entries() {
        Entries::Exact(b) => {
            let c = b.corner.as_ref().expect("validated pbc corner");
            let mut product = RatFn::constant(GaussianRational::one());
            for (j, (u, l)) in b.upper.iter().zip(&b.lower).enumerate() {
                if u.is_zero() {
                    return Err(Error::Domain(format!("ratio undefined at bond {}", j + 1)));
                }
                let r = l.conj().div(u);
                if !(r.num.is_real() && r.den.is_real()) {
                    return Err(Error::Domain(format!("ratio at bond {} is not real", j + 1)));
                }
                if r.is_constant() {
                    let v = r.eval_rational(&BigRational::from_integer(0.into())).expect("constant");
                    if classify(&v, 0.0) != RatioKind::Positive {
                        return Err(Error::Domain(format!("ratio at bond {} is not positive", j + 1)));
                    }
                }
                product = product.mul(&r);
            }
            Ok(CornerValue::Exact(product.mul(&c.h_1n.conj())))
        }
        Entries::Numeric(b) => {
            let c = b.corner.as_ref().expect("validated pbc corner");
            let tol = DEFAULT_TOL * band_scale(b);
            let mut product = Complex64::new(1.0, 0.0);
            for (j, (u, l)) in b.upper.iter().zip(&b.lower).enumerate() {
                let r = bond_ratio(j + 1, u, l, tol);
                if let Some(w) = witness_for(&r) {
                    return Err(Error::Domain(w.to_string()));
                }
                let v = r
                    .value
                    .ok_or_else(|| Error::Domain(format!("ratio undefined at bond {}", j + 1)))?;
                product *= v;
            }
            Ok(CornerValue::Numeric(product * c.h_1n.conj()))
        }
    }
}

/// Copy of a pbc model with H_{N,1} replaced by the reality corner.
pub fn with_reality_corner(model: &ChainModel) -> Result<ChainModel> {
    match (pbc_reality_corner(model)?, model.entries()) {
        (CornerValue::Exact(h), Entries::Exact(b)) => {
            let mut b = b.clone();
            b.corner.as_mut().expect("pbc").h_n1 = h;
            ChainModel::exact(model.boundary(), model.parameter().map(str::to_string), b)
        }
        (CornerValue::Numeric(h), Entries::Numeric(b)) => {
            let mut b = b.clone();
            b.corner.as_mut().expect("pbc").h_n1 = h;
            ChainModel::numeric(model.boundary(), b)
        }
        _ => unreachable!("corner kind follows the model kind"),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::{Field, ParamPoly};

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    fn g(n: i64, d: i64) -> GaussianRational {
        GaussianRational::from_frac(n, d)
    }

    fn rp(c: &[i64]) -> RatFn {
        RatFn::poly(ParamPoly::from_ints(c))
    }

    fn biased(n: usize, pbc: bool) -> ChainModel {
        ChainModel::exact(
            if pbc { BoundaryMode::Pbc } else { BoundaryMode::Obc },
            Some("delta".into()),
            Band {
                diag: vec![rp(&[]); n],
                upper: vec![rp(&[1, -1]); n - 1],
                lower: vec![rp(&[1, 1]); n - 1],
                corner: pbc.then(|| Corner {
                    h_1n: rp(&[1, 1]),
                    h_n1: rp(&[1, -1]),
                }),
            },
        )
        .unwrap()
    }

    fn exact(g: Gauge) -> GaugeReport<GaussianRational> {
        match g {
            Gauge::Exact(r) => r,
            Gauge::Numeric(_) => panic!("expected exact gauge"),
        }
    }

    #[test]
    fn biased_ratios_are_three_at_one_half() {
        let r = compute_ratios_exact(&biased(4, false), Some(&q(1, 2))).unwrap();
        assert!(r
            .iter()
            .all(|x| x.value == Some(g(3, 1)) && x.kind == RatioKind::Positive));
    }

    #[test]
    fn biased_open_chain_transformed_entries() {
        let rep = exact(build_gauge(&biased(5, false), Some(&q(1, 2)), DEFAULT_TOL).unwrap());
        assert_eq!(rep.verdict, Verdict::QuasiHermitian);
        let w = rep.weights_squared.clone().unwrap();
        assert_eq!(w, vec![g(1, 1), g(3, 1), g(9, 1), g(27, 1), g(81, 1)]);
        // √(1 − δ²) = √(3/4)
        let target = Scaled {
            radicand: g(3, 4),
            factor: g(1, 1),
        };
        let t = rep.transformed.unwrap();
        for (u, l) in t.upper.iter().zip(&t.lower) {
            assert!(u.same_as(&target, 0.0));
            assert!(l.same_as(&target, 0.0));
        }
    }

    #[test]
    fn undefined_and_negative_ratios() {
        let band = |u: i64, l: i64| Band {
            diag: vec![g(0, 1); 2],
            upper: vec![g(u, 1)],
            lower: vec![g(l, 1)],
            corner: None,
        };
        let rep = build_gauge_band(&band(0, 1), 0.0);
        assert_eq!(rep.witness, Some(Witness::UndefinedRatio { bond: 1 }));
        let rep = build_gauge_band(&band(1, -2), 0.0);
        assert_eq!(rep.witness, Some(Witness::NonPositiveRatio { bond: 1 }));
        let rep = build_gauge_band(&band(0, 0), 0.0);
        assert_eq!(rep.verdict, Verdict::Hermitian);
    }

    #[test]
    fn decoupled_blocks_get_their_own_gauge() {
        let band = Band {
            diag: vec![g(0, 1); 4],
            upper: vec![g(1, 1), g(0, 1), g(1, 1)],
            lower: vec![g(4, 1), g(0, 1), g(9, 1)],
            corner: None,
        };
        let rep = build_gauge_band(&band, 0.0);
        assert_eq!(rep.verdict, Verdict::QuasiHermitian);
        assert_eq!(rep.weights_squared.unwrap(), vec![g(4, 4), g(4, 1), g(1, 1), g(9, 1)]);
    }

    #[test]
    fn complex_phase_ratio() {
        // upper 2e^{iθ}, lower 1e^{−iθ} with e^{iθ} = (3 + 4i)/5
        let phase = GaussianRational::new(q(3, 5), q(4, 5));
        let band = Band {
            diag: vec![g(0, 1); 2],
            upper: vec![phase.mul(&g(2, 1))],
            lower: vec![phase.conj()],
            corner: None,
        };
        let rep = build_gauge_band(&band, 0.0);
        assert_eq!(rep.ratios[0].value, Some(g(1, 2)));
        assert_eq!(rep.verdict, Verdict::QuasiHermitian);
        assert!(certify(&band, rep.weights_squared.as_ref().unwrap(), 0.0).holds);
    }

    #[test]
    fn naive_ring_fails_corrected_ring_passes() {
        let naive = biased(4, true);
        let rep = exact(build_gauge(&naive, Some(&q(1, 2)), DEFAULT_TOL).unwrap());
        assert_eq!(rep.verdict, Verdict::NotQuasiHermitian);
        assert!(matches!(rep.witness, Some(Witness::RingProduct { .. })));

        let fixed = with_reality_corner(&naive).unwrap();
        let h = fixed.exact_band().unwrap().corner.clone().unwrap().h_n1;
        // (1 + d)^4 / (1 - d)^3
        assert_eq!(h.num, ParamPoly::from_ints(&[1, 1]).pow(4).neg());
        assert_eq!(h.den, ParamPoly::from_ints(&[-1, 1]).pow(3));
        let rep = exact(build_gauge(&fixed, Some(&q(1, 2)), DEFAULT_TOL).unwrap());
        assert_eq!(rep.verdict, Verdict::QuasiHermitian);
        // H̃_{N,1} = H̃_{1,N} = (1 + d)^{5/2} / (1 - d)^{3/2}: squares to 3^5/… at d = 1/2
        let c = rep.transformed.unwrap().corner.unwrap();
        assert!(c.h_n1.same_as(&c.h_1n, 0.0));
        let sq = c.h_1n.radicand.mul(&c.h_1n.factor.mul(&c.h_1n.factor));
        assert_eq!(
            sq,
            g(3, 2)
                .mul(&g(3, 2))
                .mul(&g(3, 2))
                .mul(&g(3, 2))
                .mul(&g(3, 2))
                .div(&g(1, 8))
        );
    }

    #[test]
    fn reality_corner_edge_cases() {
        let zero_corner = ChainModel::exact(
            BoundaryMode::Pbc,
            Some("delta".into()),
            Band {
                diag: vec![rp(&[]); 3],
                upper: vec![rp(&[1, -1]); 2],
                lower: vec![rp(&[1, 1]); 2],
                corner: Some(Corner {
                    h_1n: rp(&[]),
                    h_n1: rp(&[5]),
                }),
            },
        )
        .unwrap();
        assert_eq!(pbc_reality_corner(&zero_corner).unwrap(), CornerValue::Exact(rp(&[])));
        let hermitian = ChainModel::exact(
            BoundaryMode::Pbc,
            None,
            Band {
                diag: vec![rp(&[]); 3],
                upper: vec![rp(&[1]); 2],
                lower: vec![rp(&[1]); 2],
                corner: Some(Corner {
                    h_1n: RatFn::constant(GaussianRational::from_ints(2, 3)),
                    h_n1: rp(&[]),
                }),
            },
        )
        .unwrap();
        assert_eq!(
            pbc_reality_corner(&hermitian).unwrap(),
            CornerValue::Exact(RatFn::constant(GaussianRational::from_ints(2, -3)))
        );
        assert!(pbc_reality_corner(&biased(3, false)).is_err());
    }

    #[test]
    fn certificate_exact_and_numeric() {
        let m = biased(3, false);
        let c = check_quasi_hermitian(&m, Some(&q(1, 2)), DEFAULT_TOL).unwrap();
        assert!(c.holds && c.exact && c.residual == 0.0);
        let band = Band {
            diag: vec![Complex64::new(0.0, 0.0); 3],
            upper: vec![Complex64::new(0.5, 0.0); 2],
            lower: vec![Complex64::new(1.5, 0.0); 2],
            corner: None,
        };
        let num = ChainModel::numeric(BoundaryMode::Obc, band).unwrap();
        let c = check_quasi_hermitian(&num, None, DEFAULT_TOL).unwrap();
        assert!(c.holds && !c.exact && c.residual < 1e-12);
    }

    #[test]
    fn defect_negative_bond_fails() {
        // t (t - g) < 0 at t = 1, g = 2
        let m = ChainModel::exact(
            BoundaryMode::Obc,
            Some("gamma".into()),
            Band {
                diag: vec![rp(&[]); 3],
                upper: vec![rp(&[1]); 2],
                lower: vec![rp(&[1]), rp(&[1, -1])],
                corner: None,
            },
        )
        .unwrap();
        let rep = build_gauge(&m, Some(&q(2, 1)), DEFAULT_TOL).unwrap();
        assert_eq!(rep.witness(), Some(&Witness::NonPositiveRatio { bond: 2 }));
        assert!(check_quasi_hermitian(&m, Some(&q(2, 1)), DEFAULT_TOL).is_err());
    }

    #[test]
    fn global_rescaling_leaves_transformed_unchanged() {
        let band = biased(4, false).evaluate(Some(&q(1, 3))).unwrap();
        let Evaluated::Exact(b) = band else { panic!() };
        let rep = build_gauge_band(&b, 0.0);
        let w = rep.weights_squared.clone().unwrap();
        let scaled: Vec<_> = w.iter().map(|x| x.mul(&g(49, 1))).collect();
        let t1 = transform(&b, &w);
        let t7 = transform(&b, &scaled);
        for (a, c) in t1.upper.iter().zip(&t7.upper) {
            assert!(a.same_as(c, 0.0));
        }
        for (a, c) in t1.lower.iter().zip(&t7.lower) {
            assert!(a.same_as(c, 0.0));
        }
    }
}
