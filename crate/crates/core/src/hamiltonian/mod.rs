//! Chain Hamiltonians: open chains (tridiagonal) and periodic rings
//! (tridiagonal plus the two corner couplings), with exact
//! parameter-dependent or complex-float entries.

mod charpoly;
pub mod descriptor;
mod det;

use std::fmt;

use nalgebra::DMatrix;
use num_complex::Complex64;
use num_rational::BigRational;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numerics::{BivariatePoly, GaussianRational, ParamPoly, Poly, RatFn, Ring};

pub use charpoly::char_poly_band;
pub use det::{brute_det, BRUTE_DET_MAX};

/// Name used for the energy variable of characteristic polynomials.
pub const ENERGY: &str = "E";
/// Parameter name used when a model declares none.
pub const DEFAULT_PARAMETER: &str = "x";

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BoundaryMode {
    Obc,
    Pbc,
}

impl fmt::Display for BoundaryMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            BoundaryMode::Obc => "obc",
            BoundaryMode::Pbc => "pbc",
        })
    }
}

/// The two couplings that close a ring: `h_1n` = H_{1,N}, `h_n1` = H_{N,1}.
#[derive(Clone, Debug, PartialEq)]
pub struct Corner<T> {
    pub h_1n: T,
    pub h_n1: T,
}

/// Band storage: `upper[j]` = H_{j,j+1}, `lower[j]` = H_{j+1,j} (0-based).
#[derive(Clone, Debug, PartialEq)]
pub struct Band<T> {
    pub diag: Vec<T>,
    pub upper: Vec<T>,
    pub lower: Vec<T>,
    pub corner: Option<Corner<T>>,
}

impl<T> Band<T> {
    pub fn n(&self) -> usize {
        self.diag.len()
    }

    pub fn try_map<U>(&self, mut f: impl FnMut(&T) -> Result<U>) -> Result<Band<U>> {
        Ok(Band {
            diag: self.diag.iter().map(&mut f).collect::<Result<_>>()?,
            upper: self.upper.iter().map(&mut f).collect::<Result<_>>()?,
            lower: self.lower.iter().map(&mut f).collect::<Result<_>>()?,
            corner: match &self.corner {
                Some(c) => Some(Corner {
                    h_1n: f(&c.h_1n)?,
                    h_n1: f(&c.h_n1)?,
                }),
                None => None,
            },
        })
    }

    pub fn map<U>(&self, mut f: impl FnMut(&T) -> U) -> Band<U> {
        self.try_map(|x| Ok(f(x))).expect("infallible map")
    }

    fn all(&self) -> impl Iterator<Item = &T> {
        self.diag
            .iter()
            .chain(&self.upper)
            .chain(&self.lower)
            .chain(self.corner.iter().flat_map(|c| [&c.h_1n, &c.h_n1]))
    }
}

impl<T: Ring> Band<T> {
    /// Dense N×N matrix, corners at (1,N) and (N,1).
    pub fn to_dense(&self) -> Vec<Vec<T>> {
        let n = self.n();
        let mut m = vec![vec![T::zero(); n]; n];
        for j in 0..n {
            m[j][j] = self.diag[j].clone();
        }
        for j in 0..n.saturating_sub(1) {
            m[j][j + 1] = self.upper[j].clone();
            m[j + 1][j] = self.lower[j].clone();
        }
        if let Some(c) = &self.corner {
            m[0][n - 1] = m[0][n - 1].add(&c.h_1n);
            m[n - 1][0] = m[n - 1][0].add(&c.h_n1);
        }
        m
    }

    /// Monic det(E·I − H) in the entry ring.
    pub fn char_poly(&self) -> Poly<T> {
        char_poly_band(self, None)
    }
}

impl Band<GaussianRational> {
    pub fn to_c64(&self) -> Band<Complex64> {
        self.map(GaussianRational::to_c64)
    }
}

impl Band<Complex64> {
    pub fn to_matrix(&self) -> DMatrix<Complex64> {
        let n = self.n();
        let dense = self.to_dense();
        DMatrix::from_fn(n, n, |i, j| dense[i][j])
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Entries {
    Exact(Band<RatFn>),
    Numeric(Band<Complex64>),
}

/// A validated chain Hamiltonian.
#[derive(Clone, Debug, PartialEq)]
pub struct ChainModel {
    boundary: BoundaryMode,
    parameter: Option<String>,
    entries: Entries,
}

/// A model with its parameter substituted.
#[derive(Clone, Debug, PartialEq)]
pub enum Evaluated {
    Exact(Band<GaussianRational>),
    Numeric(Band<Complex64>),
}

impl Evaluated {
    pub fn n(&self) -> usize {
        match self {
            Evaluated::Exact(b) => b.n(),
            Evaluated::Numeric(b) => b.n(),
        }
    }

    pub fn to_c64(&self) -> Band<Complex64> {
        match self {
            Evaluated::Exact(b) => b.to_c64(),
            Evaluated::Numeric(b) => b.clone(),
        }
    }

    pub fn to_matrix(&self) -> DMatrix<Complex64> {
        self.to_c64().to_matrix()
    }
}

/// Dense matrix representation returned by [`ChainModel::to_dense`].
#[derive(Clone, Debug, PartialEq)]
pub enum DenseMatrix {
    Exact(Vec<Vec<GaussianRational>>),
    Numeric(DMatrix<Complex64>),
}

impl ChainModel {
    pub fn exact(boundary: BoundaryMode, parameter: Option<String>, band: Band<RatFn>) -> Result<Self> {
        let model = ChainModel {
            boundary,
            parameter,
            entries: Entries::Exact(band),
        };
        model.validate()?;
        Ok(model)
    }

    /// Convenience constructor for polynomial entries.
    pub fn exact_poly(boundary: BoundaryMode, parameter: Option<String>, band: Band<ParamPoly>) -> Result<Self> {
        ChainModel::exact(boundary, parameter, band.map(|p| RatFn::poly(p.clone())))
    }

    pub fn numeric(boundary: BoundaryMode, band: Band<Complex64>) -> Result<Self> {
        let model = ChainModel {
            boundary,
            parameter: None,
            entries: Entries::Numeric(band),
        };
        model.validate()?;
        Ok(model)
    }

    fn validate(&self) -> Result<()> {
        let (n, nu, nl, has_corner) = match &self.entries {
            Entries::Exact(b) => (b.n(), b.upper.len(), b.lower.len(), b.corner.is_some()),
            Entries::Numeric(b) => (b.n(), b.upper.len(), b.lower.len(), b.corner.is_some()),
        };
        if n == 0 {
            return Err(Error::parse("$.n", "chain needs at least one site"));
        }
        if nu != n - 1 {
            return Err(Error::parse("$.upper", format!("expected {} entries, got {nu}", n - 1)));
        }
        if nl != n - 1 {
            return Err(Error::parse("$.lower", format!("expected {} entries, got {nl}", n - 1)));
        }
        match (self.boundary, has_corner) {
            (BoundaryMode::Obc, true) => {
                return Err(Error::parse("$.corner", "corner entries are only allowed with pbc"))
            }
            (BoundaryMode::Pbc, false) => return Err(Error::parse("$.corner", "pbc requires both corner entries")),
            (BoundaryMode::Pbc, true) if n < 3 => return Err(Error::parse("$.n", "pbc requires at least 3 sites")),
            _ => {}
        }
        match &self.entries {
            Entries::Exact(b) => {
                for (j, d) in b.diag.iter().enumerate() {
                    if !(d.num.is_real() && d.den.is_real()) {
                        return Err(Error::parse(format!("$.diag[{j}]"), "diagonal entry is not real"));
                    }
                }
                for (name, list) in [("diag", &b.diag), ("upper", &b.upper), ("lower", &b.lower)] {
                    for (j, e) in list.iter().enumerate() {
                        if !e.is_poly() {
                            return Err(Error::parse(
                                format!("$.{name}[{j}]"),
                                "only corner entries may carry a denominator",
                            ));
                        }
                    }
                }
                if self.parameter.is_none() && b.all().any(|e| !e.is_constant()) {
                    return Err(Error::parse("$.parameter", "symbolic entries need a parameter name"));
                }
            }
            Entries::Numeric(b) => {
                for (j, d) in b.diag.iter().enumerate() {
                    if d.im != 0.0 {
                        return Err(Error::parse(format!("$.diag[{j}]"), "diagonal entry is not real"));
                    }
                }
                if b.all().any(|z| !(z.re.is_finite() && z.im.is_finite())) {
                    return Err(Error::parse("$", "non-finite entry"));
                }
            }
        }
        Ok(())
    }

    pub fn n(&self) -> usize {
        match &self.entries {
            Entries::Exact(b) => b.n(),
            Entries::Numeric(b) => b.n(),
        }
    }

    pub fn boundary(&self) -> BoundaryMode {
        self.boundary
    }

    pub fn parameter(&self) -> Option<&str> {
        self.parameter.as_deref()
    }

    pub fn parameter_or_default(&self) -> &str {
        self.parameter.as_deref().unwrap_or(DEFAULT_PARAMETER)
    }

    pub fn entries(&self) -> &Entries {
        &self.entries
    }

    pub fn is_exact(&self) -> bool {
        matches!(self.entries, Entries::Exact(_))
    }

    pub fn exact_band(&self) -> Result<&Band<RatFn>> {
        match &self.entries {
            Entries::Exact(b) => Ok(b),
            Entries::Numeric(_) => Err(Error::Usage("operation needs an exact model".into())),
        }
    }

    /// Does any entry depend on the parameter?
    pub fn is_symbolic(&self) -> bool {
        match &self.entries {
            Entries::Exact(b) => b.all().any(|e| !e.is_constant()),
            Entries::Numeric(_) => false,
        }
    }

    /// Locations where some entry has a pole (roots of denominators are
    /// reported through [`ChainModel::has_pole_at`]).
    pub fn has_pole_at(&self, x: &BigRational) -> bool {
        match &self.entries {
            Entries::Exact(b) => b.all().any(|e| e.has_pole_at(x)),
            Entries::Numeric(_) => false,
        }
    }

    /// Substitute the parameter. Exact models need a value exactly when they
    /// are symbolic; numeric models refuse one.
    pub fn evaluate(&self, param: Option<&BigRational>) -> Result<Evaluated> {
        match (&self.entries, param) {
            (Entries::Numeric(b), None) => Ok(Evaluated::Numeric(b.clone())),
            (Entries::Numeric(_), Some(_)) => Err(Error::Usage(
                "parameter substitution requested on a numeric model".into(),
            )),
            (Entries::Exact(b), value) => {
                let zero = BigRational::from_integer(0.into());
                let x = match value {
                    Some(v) => v,
                    None if self.is_symbolic() => {
                        return Err(Error::Usage(format!(
                            "model depends on {}; a parameter value is required",
                            self.parameter_or_default()
                        )))
                    }
                    None => &zero,
                };
                let name = self.parameter_or_default().to_string();
                let band = b.try_map(|e| {
                    e.eval_rational(x)
                        .ok_or_else(|| Error::Domain(format!("entry has a pole at {name} = {x}")))
                })?;
                Ok(Evaluated::Exact(band))
            }
        }
    }

    pub fn to_dense(&self, param: Option<&BigRational>) -> Result<DenseMatrix> {
        Ok(match self.evaluate(param)? {
            Evaluated::Exact(b) => DenseMatrix::Exact(b.to_dense()),
            Evaluated::Numeric(b) => DenseMatrix::Numeric(b.to_matrix()),
        })
    }

    /// det(E·I − H) as an exact polynomial in E with parameter-polynomial
    /// coefficients. Monic unless a corner entry carries a denominator, in
    /// which case the polynomial is multiplied through by that denominator
    /// (its roots in the parameter are then excluded loci, not EPs).
    pub fn char_poly(&self) -> Result<BivariatePoly> {
        let b = self.exact_band()?;
        let polys = Band {
            diag: b.diag.iter().map(|e| e.num.clone()).collect(),
            upper: b.upper.iter().map(|e| e.num.clone()).collect(),
            lower: b.lower.iter().map(|e| e.num.clone()).collect(),
            corner: None,
        };
        let corner = b.corner.as_ref().map(|c| charpoly::CornerTerms {
            h_1n: (c.h_1n.num.clone(), c.h_1n.den.clone()),
            h_n1: (c.h_n1.num.clone(), c.h_n1.den.clone()),
        });
        Ok(BivariatePoly::new(
            ENERGY,
            self.parameter_or_default(),
            char_poly_band(&polys, corner),
        ))
    }

    /// The common denominator cleared by [`ChainModel::char_poly`]
    /// (the constant 1 when every entry is polynomial).
    pub fn cleared_denominator(&self) -> Result<ParamPoly> {
        let b = self.exact_band()?;
        Ok(match &b.corner {
            Some(c) => c.h_1n.den.mul(&c.h_n1.den),
            None => ParamPoly::one(),
        })
    }

    /// E·I − H with polynomial entries, for the determinant oracle.
    pub fn char_matrix(&self) -> Result<Vec<Vec<Poly<ParamPoly>>>> {
        let b = self.exact_band()?;
        let polys = b.try_map(|e| {
            e.as_poly()
                .cloned()
                .ok_or_else(|| Error::Usage("char_matrix needs polynomial entries".into()))
        })?;
        let h = polys.to_dense();
        let n = h.len();
        Ok((0..n)
            .map(|i| {
                (0..n)
                    .map(|j| {
                        let minus_h = Poly::constant(h[i][j].neg());
                        if i == j {
                            minus_h.add(&Poly::x())
                        } else {
                            minus_h
                        }
                    })
                    .collect()
            })
            .collect())
    }

    /// Copy with new entries of the same kind; used by builders that patch
    /// a corner.
    pub(crate) fn with_exact_band(&self, band: Band<RatFn>) -> Result<Self> {
        ChainModel::exact(self.boundary, self.parameter.clone(), band)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn rp(c: &[i64]) -> RatFn {
        RatFn::poly(ParamPoly::from_ints(c))
    }

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    /// Biased open chain, J = 1: upper 1 - d, lower 1 + d.
    fn biased_obc(n: usize) -> ChainModel {
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

    fn defect(n: usize, beta: i64) -> ChainModel {
        let mut lower = vec![rp(&[1]); n - 1];
        lower[n - 2] = rp(&[1, -1]);
        ChainModel::exact(
            BoundaryMode::Obc,
            Some("gamma".into()),
            Band {
                diag: vec![rp(&[beta]); n],
                upper: vec![rp(&[1]); n - 1],
                lower,
                corner: None,
            },
        )
        .unwrap()
    }

    fn g(n: i64, d: i64) -> GaussianRational {
        GaussianRational::from_frac(n, d)
    }

    #[test]
    fn dense_biased_two_sites() {
        let m = biased_obc(2).to_dense(Some(&q(1, 2))).unwrap();
        assert_eq!(
            m,
            DenseMatrix::Exact(vec![vec![g(0, 1), g(1, 2)], vec![g(3, 2), g(0, 1)]])
        );
    }

    #[test]
    fn dense_pbc_corners() {
        let model = ChainModel::exact(
            BoundaryMode::Pbc,
            None,
            Band {
                diag: vec![rp(&[]); 3],
                upper: vec![rp(&[1]); 2],
                lower: vec![rp(&[1]); 2],
                corner: Some(Corner {
                    h_1n: rp(&[1]),
                    h_n1: rp(&[1]),
                }),
            },
        )
        .unwrap();
        let DenseMatrix::Exact(m) = model.to_dense(None).unwrap() else {
            panic!()
        };
        let one = GaussianRational::one();
        assert_eq!(m[0][2], one);
        assert_eq!(m[2][0], one);
        assert!(m.iter().enumerate().all(|(i, row)| row[i].is_zero()));
    }

    #[test]
    fn dense_yr_two_sites() {
        let m = defect(2, 2).to_dense(Some(&q(0, 1))).unwrap();
        assert_eq!(
            m,
            DenseMatrix::Exact(vec![vec![g(2, 1), g(1, 1)], vec![g(1, 1), g(2, 1)]])
        );
    }

    #[test]
    fn numeric_model_refuses_substitution() {
        let c = |x: f64| Complex64::new(x, 0.0);
        let m = ChainModel::numeric(
            BoundaryMode::Obc,
            Band {
                diag: vec![c(0.0); 2],
                upper: vec![c(1.0)],
                lower: vec![c(2.0)],
                corner: None,
            },
        )
        .unwrap();
        assert!(matches!(m.to_dense(Some(&q(1, 1))), Err(Error::Usage(_))));
        assert!(m.to_dense(None).is_ok());
        assert!(m.char_poly().is_err());
    }

    #[test]
    fn validation() {
        let bad_diag = ChainModel::exact(
            BoundaryMode::Obc,
            None,
            Band {
                diag: vec![RatFn::constant(GaussianRational::i())],
                upper: vec![],
                lower: vec![],
                corner: None,
            },
        );
        assert!(matches!(bad_diag, Err(Error::Parse { .. })));
        let corner_obc = ChainModel::exact(
            BoundaryMode::Obc,
            None,
            Band {
                diag: vec![rp(&[]); 3],
                upper: vec![rp(&[1]); 2],
                lower: vec![rp(&[1]); 2],
                corner: Some(Corner {
                    h_1n: rp(&[1]),
                    h_n1: rp(&[1]),
                }),
            },
        );
        assert!(corner_obc.is_err());
        let unnamed = ChainModel::exact(
            BoundaryMode::Obc,
            None,
            Band {
                diag: vec![rp(&[]); 2],
                upper: vec![rp(&[0, 1])],
                lower: vec![rp(&[1])],
                corner: None,
            },
        );
        assert!(unnamed.is_err());
    }

    #[test]
    fn defect_char_polys() {
        // N = 2, beta = 0: E^2 - (1 - g)
        let p = defect(2, 0).char_poly().unwrap();
        assert_eq!(p.coeff(2), ParamPoly::one());
        assert_eq!(p.coeff(1), ParamPoly::zero());
        assert_eq!(p.coeff(0), ParamPoly::from_ints(&[-1, 1]));
        // N = 3: E^3 - (2 - g) E
        let p = defect(3, 0).char_poly().unwrap();
        assert_eq!(p.coeff(1), ParamPoly::from_ints(&[-2, 1]));
        assert_eq!(p.coeff(0), ParamPoly::zero());
        assert_eq!(p.coeff(2), ParamPoly::zero());
    }

    #[test]
    fn defect_five_sites_at_three_halves() {
        // det(E - H) = E^5 - (5/2) E^3; the opposite sign convention det(H - E) gives E^3 (5 - 2E^2)/2
        let p = defect(5, 0).char_poly().unwrap().at(&q(3, 2));
        let expected: Poly<GaussianRational> = Poly::new(vec![g(0, 1), g(0, 1), g(0, 1), g(-5, 2), g(0, 1), g(1, 1)]);
        assert_eq!(p, expected);
        let flipped = Poly::new(vec![g(0, 1), g(0, 1), g(0, 1), g(5, 2), g(0, 1), g(-1, 1)]);
        assert_eq!(p.neg(), flipped);
    }

    #[test]
    fn pbc_with_zero_corners_is_open_chain() {
        let obc = biased_obc(5);
        let b = obc.exact_band().unwrap().clone();
        let pbc = ChainModel::exact(
            BoundaryMode::Pbc,
            Some("delta".into()),
            Band {
                corner: Some(Corner {
                    h_1n: rp(&[]),
                    h_n1: rp(&[]),
                }),
                ..b
            },
        )
        .unwrap();
        assert_eq!(pbc.char_poly().unwrap(), obc.char_poly().unwrap());
    }

    fn arb_entry() -> impl Strategy<Value = RatFn> {
        prop::collection::vec((-3i64..4, -2i64..3), 0..3).prop_map(|c| {
            RatFn::poly(ParamPoly::new(
                c.into_iter()
                    .map(|(re, im)| GaussianRational::from_ints(re, im))
                    .collect(),
            ))
        })
    }

    fn arb_real_entry() -> impl Strategy<Value = RatFn> {
        prop::collection::vec(-3i64..4, 0..3).prop_map(|c| rp(&c))
    }

    fn arb_model() -> impl Strategy<Value = ChainModel> {
        (2usize..7, any::<bool>()).prop_flat_map(|(n, periodic)| {
            let periodic = periodic && n >= 3;
            (
                prop::collection::vec(arb_real_entry(), n),
                prop::collection::vec(arb_entry(), n - 1),
                prop::collection::vec(arb_entry(), n - 1),
                arb_entry(),
                arb_entry(),
            )
                .prop_map(move |(diag, upper, lower, a, b)| {
                    let (boundary, corner) = if periodic {
                        (BoundaryMode::Pbc, Some(Corner { h_1n: a, h_n1: b }))
                    } else {
                        (BoundaryMode::Obc, None)
                    };
                    ChainModel::exact(
                        boundary,
                        Some("t".into()),
                        Band {
                            diag,
                            upper,
                            lower,
                            corner,
                        },
                    )
                    .unwrap()
                })
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(48))]

        #[test]
        fn char_poly_matches_determinant_oracle(model in arb_model()) {
            let fast = model.char_poly().unwrap().poly;
            let oracle = brute_det(&model.char_matrix().unwrap()).unwrap();
            prop_assert_eq!(fast, oracle);
        }

        #[test]
        fn open_chain_depends_only_on_bond_products(
            model in arb_model(),
            c in prop::sample::select(vec![(2i64, 1i64), (-3, 1), (1, 5), (7, -2)]),
        ) {
            prop_assume!(model.boundary() == BoundaryMode::Obc);
            let mut b = model.exact_band().unwrap().clone();
            let scale = RatFn::constant(GaussianRational::from_ints(c.0, c.1));
            b.upper[0] = b.upper[0].mul(&scale);
            b.lower[0] = b.lower[0].div(&scale);
            let rescaled = model.with_exact_band(b).unwrap();
            prop_assert_eq!(rescaled.char_poly().unwrap(), model.char_poly().unwrap());
        }
    }
}
