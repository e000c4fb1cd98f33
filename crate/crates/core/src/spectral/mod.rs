//! Eigenvalues, eigenvectors, geometric multiplicities and the
//! metric-preserving time evolution.

mod evolve;
mod hqr;
mod tridiag;

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::gauge::{build_gauge, Verdict};
use crate::hamiltonian::{Band, BoundaryMode, ChainModel, Evaluated};
use crate::numerics::linalg::{rank, shift_diagonal};
use crate::numerics::{aberth_roots, cluster_roots, rational_to_f64, Field, GaussianRational, Poly, Ring};

pub use evolve::{evolve, evolve_band, EvolutionTrace};
pub use tridiag::symmetric_tridiagonal_eigen;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SpectralOptions {
    /// Aberth backward-error target.
    pub tol: f64,
    /// Singular values below `rank_tol · σ_max · N` count as zero.
    pub rank_tol: f64,
    /// |Im E| ≤ `real_tol · max(1, |E|)` is reported as real.
    pub real_tol: f64,
    /// Largest N for the characteristic-polynomial path.
    pub max_charpoly_n: usize,
    /// Numeric roots closer than this (relative) are merged into one cluster.
    pub cluster_floor: f64,
}

impl Default for SpectralOptions {
    fn default() -> Self {
        SpectralOptions {
            tol: 1e-12,
            rank_tol: 1e-9,
            real_tol: 1e-9,
            max_charpoly_n: 64,
            cluster_floor: 1e-7,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Method {
    /// Exact characteristic polynomial, square-free split, simple roots.
    ExactCharPoly,
    /// Floating-point characteristic polynomial with root clustering.
    NumericCharPoly,
    /// Dense Schur decomposition.
    Dense,
    /// Symmetric solver on the Hermitian transformed matrix.
    Hermitian,
}

/// One distinct eigenvalue.
#[derive(Clone, Debug, PartialEq)]
pub struct EigenCluster {
    pub value: Complex64,
    pub exact: Option<GaussianRational>,
    pub algebraic: usize,
    pub geometric: usize,
    pub real: bool,
    /// max ‖Hv − Ev‖ / (‖H‖‖v‖) over the returned vectors.
    pub residual: f64,
    /// The algebraic multiplicity is a clustering estimate rather than exact.
    pub uncertain: bool,
    /// Basis of the (numerical) null space of H − E·I.
    pub vectors: Vec<DVector<Complex64>>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SpectrumReport {
    /// All N eigenvalues with repetition, sorted by real then imaginary part.
    pub eigenvalues: Vec<Complex64>,
    pub clusters: Vec<EigenCluster>,
    pub method: Method,
}

impl SpectrumReport {
    pub fn is_real(&self) -> bool {
        self.clusters.iter().all(|c| c.real)
    }

    pub fn max_imag(&self) -> f64 {
        self.eigenvalues.iter().map(|z| z.im.abs()).fold(0.0, f64::max)
    }

    pub fn max_residual(&self) -> f64 {
        self.clusters.iter().map(|c| c.residual).fold(0.0, f64::max)
    }

    fn from_clusters(mut clusters: Vec<EigenCluster>, method: Method) -> Self {
        clusters.sort_by(|a, b| {
            a.value
                .re
                .total_cmp(&b.value.re)
                .then(a.value.im.total_cmp(&b.value.im))
        });
        let eigenvalues = clusters
            .iter()
            .flat_map(|c| std::iter::repeat(c.value).take(c.algebraic))
            .collect();
        SpectrumReport {
            eigenvalues,
            clusters,
            method,
        }
    }
}

struct RootGroup {
    value: Complex64,
    exact: Option<GaussianRational>,
    multiplicity: usize,
    uncertain: bool,
}

/// Roots of an exact polynomial: square-free split gives exact
/// multiplicities, each factor's roots are simple, and rational roots of
/// real factors come back exactly.
fn exact_roots(p: &Poly<GaussianRational>, tol: f64) -> Result<Vec<RootGroup>> {
    let mut out = Vec::new();
    for (f, mult) in p.square_free() {
        let degree = f.degree().unwrap_or(0);
        if degree == 1 {
            let r = Field::div(&f.coeff(0).neg(), &f.coeff(1));
            out.push(RootGroup {
                value: r.to_c64(),
                exact: Some(r),
                multiplicity: mult,
                uncertain: false,
            });
            continue;
        }
        let coeffs: Vec<Complex64> = f.coeffs().iter().map(GaussianRational::to_c64).collect();
        let approx = aberth_roots(&coeffs, tol)?;
        let mut groups: Vec<RootGroup> = approx
            .into_iter()
            .map(|z| RootGroup {
                value: z,
                exact: None,
                multiplicity: mult,
                uncertain: false,
            })
            .collect();
        if f.is_real() {
            for q in rational_roots(&f.real_part(), &groups) {
                let target = rational_to_f64(&q);
                if let Some(g) = groups
                    .iter_mut()
                    .filter(|g| g.exact.is_none())
                    .min_by(|a, b| (a.value - target).norm().total_cmp(&(b.value - target).norm()))
                {
                    g.value = Complex64::new(target, 0.0);
                    g.exact = Some(GaussianRational::real(q));
                }
            }
        }
        out.extend(groups);
    }
    Ok(out)
}

/// Rational roots of a square-free real polynomial, recovered from the
/// float approximations: once the coefficients are cleared to integers,
/// every rational root r has lc·r integral, so rounding lc·x and checking
/// exactly is enough.
fn rational_roots(f: &Poly<BigRational>, approx: &[RootGroup]) -> Vec<BigRational> {
    let denominators = f
        .coeffs()
        .iter()
        .fold(<BigInt as One>::one(), |acc, c| acc.lcm(c.denom()));
    let lc = (f.leading() * BigRational::from_integer(denominators)).to_integer();
    let Some(lc_f) = lc.to_f64() else { return Vec::new() };
    let mut found: Vec<BigRational> = Vec::new();
    for g in approx {
        let scaled = g.value.re * lc_f;
        if g.value.im.abs() > 1e-6 * g.value.norm().max(1.0) || !(scaled.abs() < 2f64.powi(52)) {
            continue;
        }
        let q = BigRational::new(BigInt::from(scaled.round() as i64), lc.clone());
        if !found.contains(&q) && Zero::is_zero(&f.eval(&q)) {
            found.push(q);
        }
    }
    found
}

fn numeric_roots(p: &Poly<Complex64>, opts: &SpectralOptions) -> Result<Vec<RootGroup>> {
    let roots = aberth_roots(p.coeffs(), opts.tol)?;
    Ok(cluster_roots(p.coeffs(), &roots, opts.cluster_floor)
        .into_iter()
        .map(|c| RootGroup {
            value: c.center,
            exact: None,
            multiplicity: c.multiplicity(),
            uncertain: c.multiplicity() > 1,
        })
        .collect())
}

/// Diagonal similarity equalizing row and column norms (powers of two, so
/// exact in floating point). Non-normal chains converge much more reliably
/// in the QR iteration after this.
fn balance(h: &DMatrix<Complex64>) -> DMatrix<Complex64> {
    let n = h.nrows();
    let mut a = h.clone();
    loop {
        let mut done = true;
        for i in 0..n {
            let c: f64 = (0..n).filter(|&k| k != i).map(|k| a[(k, i)].norm()).sum();
            let r: f64 = (0..n).filter(|&k| k != i).map(|k| a[(i, k)].norm()).sum();
            if c == 0.0 || r == 0.0 {
                continue;
            }
            let mut f = 1.0;
            let (mut c2, r2) = (c, r);
            while c2 < r2 / 2.0 {
                c2 *= 2.0;
                f *= 2.0;
            }
            while c2 > r2 * 2.0 {
                c2 /= 2.0;
                f /= 2.0;
            }
            if (c * f + r / f) < 0.95 * (c + r) {
                done = false;
                for k in 0..n {
                    a[(i, k)] /= f;
                    a[(k, i)] *= f;
                }
            }
        }
        if done {
            return a;
        }
    }
}

fn dense_roots(h: &DMatrix<Complex64>, opts: &SpectralOptions) -> Result<Vec<RootGroup>> {
    let values = hqr::dense_eigenvalues(&balance(h))?;
    let mut groups: Vec<RootGroup> = Vec::new();
    for v in values {
        match groups
            .iter_mut()
            .find(|g| (g.value - v).norm() <= opts.cluster_floor * v.norm().max(1.0))
        {
            Some(g) => {
                let m = g.multiplicity as f64;
                g.value = (g.value * m + v) / (m + 1.0);
                g.multiplicity += 1;
                g.uncertain = true;
            }
            None => groups.push(RootGroup {
                value: v,
                exact: None,
                multiplicity: 1,
                uncertain: false,
            }),
        }
    }
    Ok(groups)
}

/// Null space of H − E·I by SVD: (geometric multiplicity, basis, residual).
fn null_space(
    h: &DMatrix<Complex64>,
    e: Complex64,
    opts: &SpectralOptions,
    known: Option<usize>,
) -> (usize, Vec<DVector<Complex64>>, f64) {
    let n = h.nrows();
    let shifted = h - DMatrix::<Complex64>::identity(n, n) * e;
    let svd = shifted.svd(false, true);
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| svd.singular_values[b].total_cmp(&svd.singular_values[a]));
    let smax = svd.singular_values[order[0]];
    let threshold = opts.rank_tol * smax.max(h.norm()).max(f64::MIN_POSITIVE) * n as f64;
    let numeric = order.iter().filter(|&&k| svd.singular_values[k] <= threshold).count();
    let g = known.unwrap_or(numeric.max(1));
    let v_t = svd.v_t.expect("requested right singular vectors");
    let vectors: Vec<DVector<Complex64>> = order[n - g..]
        .iter()
        .map(|&k| v_t.row(k).adjoint().into_owned())
        .collect();
    let hn = h.norm();
    let residual = vectors
        .iter()
        .map(|v| {
            let r = (h * v - v * e).norm();
            if hn > 0.0 {
                r / (hn * v.norm())
            } else {
                r
            }
        })
        .fold(0.0, f64::max);
    (g, vectors, residual)
}

fn finish(
    groups: Vec<RootGroup>,
    h: &DMatrix<Complex64>,
    exact_matrix: Option<&Vec<Vec<GaussianRational>>>,
    opts: &SpectralOptions,
    method: Method,
) -> SpectrumReport {
    let clusters = groups
        .into_iter()
        .map(|g| {
            let known = match (&g.exact, exact_matrix) {
                (Some(e), Some(m)) => Some(m.len() - rank(&shift_diagonal(m, e))),
                _ => None,
            };
            let (geometric, vectors, residual) = null_space(h, g.value, opts, known);
            let real = match &g.exact {
                Some(e) => e.is_real(),
                None => g.value.im.abs() <= opts.real_tol * g.value.norm().max(1.0),
            };
            EigenCluster {
                value: g.value,
                exact: g.exact,
                algebraic: g.multiplicity,
                geometric,
                real,
                residual,
                uncertain: g.uncertain,
                vectors,
            }
        })
        .collect();
    SpectrumReport::from_clusters(clusters, method)
}

/// Spectrum of an evaluated band.
pub fn eigen_band(band: &Evaluated, opts: &SpectralOptions) -> Result<SpectrumReport> {
    let n = band.n();
    let h = band.to_matrix();
    match band {
        Evaluated::Exact(b) if n <= opts.max_charpoly_n => {
            let groups = exact_roots(&b.char_poly(), opts.tol)?;
            let dense = b.to_dense();
            Ok(finish(groups, &h, Some(&dense), opts, Method::ExactCharPoly))
        }
        Evaluated::Numeric(b) if n <= opts.max_charpoly_n => {
            let groups = numeric_roots(&b.char_poly(), opts)?;
            Ok(finish(groups, &h, None, opts, Method::NumericCharPoly))
        }
        _ => {
            let groups = dense_roots(&h, opts)?;
            Ok(finish(groups, &h, None, opts, Method::Dense))
        }
    }
}

/// All N eigenvalues of the model at the given parameter value.
pub fn eigen_general(
    model: &ChainModel,
    param: Option<&BigRational>,
    opts: &SpectralOptions,
) -> Result<SpectrumReport> {
    eigen_band(&model.evaluate(param)?, opts)
}

/// Real spectrum of the Hermitian transformed matrix H̃ = Q⁻¹HQ. Open
/// chains go through the tridiagonal QL solver on the real symmetric
/// matrix with off-diagonals |H̃_{j+1,j}|; rings through a dense Hermitian
/// solver. Returned vectors are eigenvectors of H̃.
pub fn eigen_hermitian_tridiagonal(
    model: &ChainModel,
    param: Option<&BigRational>,
    opts: &SpectralOptions,
) -> Result<SpectrumReport> {
    let gauge = build_gauge(model, param, crate::gauge::DEFAULT_TOL)?;
    if gauge.verdict() == Verdict::NotQuasiHermitian {
        return Err(Error::Usage(format!(
            "model is not quasi-Hermitian: {}",
            gauge.witness().map(|w| w.to_string()).unwrap_or_default()
        )));
    }
    let t = gauge.transformed_c64().expect("quasi-Hermitian gauge has H̃");
    hermitian_band_eigen(&t, model.boundary(), opts)
}

/// Eigen-decomposition of a Hermitian band (tridiagonal or ring).
pub fn hermitian_band_eigen(
    t: &Band<Complex64>,
    boundary: BoundaryMode,
    opts: &SpectralOptions,
) -> Result<SpectrumReport> {
    let n = t.n();
    let (values, vectors): (Vec<f64>, Vec<DVector<Complex64>>) = match boundary {
        BoundaryMode::Obc => {
            let d: Vec<f64> = t.diag.iter().map(|z| z.re).collect();
            let e: Vec<f64> = t.lower.iter().map(|z| z.norm()).collect();
            // unitary diagonal phase making the off-diagonals real and positive
            let mut phase = vec![Complex64::new(1.0, 0.0); n];
            for j in 0..n.saturating_sub(1) {
                let b = t.lower[j];
                phase[j + 1] = if b.norm() > 0.0 {
                    phase[j] * b / b.norm()
                } else {
                    phase[j]
                };
            }
            let (w, z) = symmetric_tridiagonal_eigen(&d, &e)?;
            let vecs = (0..n).map(|k| DVector::from_fn(n, |i, _| phase[i] * z[i][k])).collect();
            (w, vecs)
        }
        BoundaryMode::Pbc => {
            let h = t.to_matrix();
            let herm = (&h + h.adjoint()) * Complex64::new(0.5, 0.0);
            let eig = SymmetricEigen::new(herm);
            let mut order: Vec<usize> = (0..n).collect();
            order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
            (
                order.iter().map(|&k| eig.eigenvalues[k]).collect(),
                order.iter().map(|&k| eig.eigenvectors.column(k).into_owned()).collect(),
            )
        }
    };
    let h = t.to_matrix();
    let hn = h.norm();
    let mut clusters: Vec<EigenCluster> = Vec::new();
    for (w, v) in values.into_iter().zip(vectors) {
        let value = Complex64::new(w, 0.0);
        let r = (&h * &v - &v * value).norm();
        let residual = if hn > 0.0 { r / (hn * v.norm()) } else { r };
        match clusters.last_mut() {
            Some(c) if (c.value.re - w).abs() <= opts.cluster_floor * w.abs().max(1.0) => {
                c.algebraic += 1;
                c.geometric += 1;
                c.residual = c.residual.max(residual);
                c.vectors.push(v);
            }
            _ => clusters.push(EigenCluster {
                value,
                exact: None,
                algebraic: 1,
                geometric: 1,
                real: true,
                residual,
                uncertain: false,
                vectors: vec![v],
            }),
        }
    }
    Ok(SpectrumReport::from_clusters(clusters, Method::Hermitian))
}

/// dim ker(H − E·I), exactly.
pub fn geometric_multiplicity_exact(
    model: &ChainModel,
    param: Option<&BigRational>,
    e: &GaussianRational,
) -> Result<usize> {
    match model.evaluate(param)? {
        Evaluated::Exact(b) => {
            let m = b.to_dense();
            Ok(m.len() - rank(&shift_diagonal(&m, e)))
        }
        Evaluated::Numeric(_) => Err(Error::Usage("exact geometric multiplicity needs an exact model".into())),
    }
}
