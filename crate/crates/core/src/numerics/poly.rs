use std::fmt;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::gaussian::{rational_to_f64, GaussianRational};
use super::ring::{ExactDiv, Field, Ring};

/// Dense univariate polynomial, `coeffs[k]` multiplies `x^k`.
///
/// The coefficient vector never has trailing zeros, so the zero polynomial
/// is the empty vector and `degree()` is `None` for it.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Poly<R> {
    coeffs: Vec<R>,
}

/// Polynomial in the model parameter (γ, δ, ...) over Q(i).
pub type ParamPoly = Poly<GaussianRational>;

impl<R: Ring> Poly<R> {
    pub fn new(mut coeffs: Vec<R>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Poly { coeffs }
    }

    pub fn constant(c: R) -> Self {
        Poly::new(vec![c])
    }

    /// `c · x^k`
    pub fn monomial(c: R, k: usize) -> Self {
        let mut coeffs = vec![R::zero(); k + 1];
        coeffs[k] = c;
        Poly::new(coeffs)
    }

    /// The variable itself.
    pub fn x() -> Self {
        Poly::monomial(R::one(), 1)
    }

    pub fn coeffs(&self) -> &[R] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<R> {
        self.coeffs
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    /// Coefficient of `x^k`, zero beyond the degree.
    pub fn coeff(&self, k: usize) -> R {
        self.coeffs.get(k).cloned().unwrap_or_else(R::zero)
    }

    pub fn leading(&self) -> R {
        self.coeffs.last().cloned().unwrap_or_else(R::zero)
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }

    pub fn scale(&self, c: &R) -> Self {
        Poly::new(self.coeffs.iter().map(|a| a.mul(c)).collect())
    }

    /// Multiply by `x^k`.
    pub fn shift(&self, k: usize) -> Self {
        if Ring::is_zero(self) {
            return self.clone();
        }
        let mut coeffs = vec![R::zero(); k];
        coeffs.extend(self.coeffs.iter().cloned());
        Poly { coeffs }
    }

    pub fn derivative(&self) -> Self {
        Poly::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, c)| c.mul(&R::from_int(k as i64)))
                .collect(),
        )
    }

    /// Horner evaluation.
    pub fn eval(&self, x: &R) -> R {
        self.coeffs.iter().rev().fold(R::zero(), |acc, c| acc.mul(x).add(c))
    }

    /// Evaluate in another ring through a coefficient map.
    pub fn eval_in<S: Ring>(&self, x: &S, lift: impl Fn(&R) -> S) -> S {
        self.coeffs
            .iter()
            .rev()
            .fold(S::zero(), |acc, c| acc.mul(x).add(&lift(c)))
    }

    pub fn map<S: Ring>(&self, f: impl Fn(&R) -> S) -> Poly<S> {
        Poly::new(self.coeffs.iter().map(f).collect())
    }

    /// Integer power by repeated squaring.
    pub fn pow(&self, mut e: u32) -> Self {
        let mut base = self.clone();
        let mut acc = Poly::one();
        while e > 0 {
            if e & 1 == 1 {
                acc = Ring::mul(&acc, &base);
            }
            base = Ring::mul(&base, &base);
            e >>= 1;
        }
        acc
    }
}

impl<R: Ring> Ring for Poly<R> {
    fn zero() -> Self {
        Poly { coeffs: Vec::new() }
    }
    fn one() -> Self {
        Poly::constant(R::one())
    }
    fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }
    fn add(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        Poly::new(
            (0..n)
                .map(|k| match (self.coeffs.get(k), other.coeffs.get(k)) {
                    (Some(a), Some(b)) => a.add(b),
                    (Some(a), None) => a.clone(),
                    (None, Some(b)) => b.clone(),
                    (None, None) => unreachable!(),
                })
                .collect(),
        )
    }
    fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }
    fn mul(&self, other: &Self) -> Self {
        if self.coeffs.is_empty() || other.coeffs.is_empty() {
            return Poly::zero();
        }
        let mut out = vec![R::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                if b.is_zero() {
                    continue;
                }
                out[i + j] = out[i + j].add(&a.mul(b));
            }
        }
        Poly::new(out)
    }
    fn neg(&self) -> Self {
        Poly {
            coeffs: self.coeffs.iter().map(Ring::neg).collect(),
        }
    }
    fn from_int(k: i64) -> Self {
        Poly::constant(R::from_int(k))
    }
}

impl<F: Field> Poly<F> {
    /// Euclidean division: `self = q·d + r` with `deg r < deg d`.
    pub fn div_rem(&self, d: &Self) -> (Self, Self) {
        let dd = d.degree().expect("polynomial division by zero");
        let lead_inv = d.leading().inv();
        let mut rem = self.coeffs.clone();
        let Some(ds) = self.degree() else {
            return (Poly::zero(), Poly::zero());
        };
        if ds < dd {
            return (Poly::zero(), self.clone());
        }
        let mut quot = vec![F::zero(); ds - dd + 1];
        for k in (0..=ds - dd).rev() {
            let c = rem[k + dd].mul(&lead_inv);
            if c.is_zero() {
                continue;
            }
            for (j, dj) in d.coeffs.iter().enumerate() {
                rem[k + j] = rem[k + j].sub(&c.mul(dj));
            }
            quot[k] = c;
        }
        rem.truncate(dd);
        (Poly::new(quot), Poly::new(rem))
    }

    pub fn monic(&self) -> Self {
        if self.coeffs.is_empty() {
            return self.clone();
        }
        let inv = self.leading().inv();
        self.scale(&inv)
    }

    /// Monic greatest common divisor (zero if both inputs are zero).
    pub fn gcd(&self, other: &Self) -> Self {
        F::poly_gcd(self, other)
    }

    /// Yun's square-free decomposition: `self = lc · ∏ f_i^i` with each
    /// `f_i` monic, square-free and pairwise coprime. Only factors of
    /// positive degree are returned, paired with their multiplicity.
    pub fn square_free(&self) -> Vec<(Self, usize)> {
        let mut out = Vec::new();
        if self.degree().unwrap_or(0) == 0 {
            return out;
        }
        let f = self.monic();
        let df = f.derivative();
        let a0 = f.gcd(&df);
        let mut b = f.div_rem(&a0).0;
        let mut c = df.div_rem(&a0).0;
        let mut d = c.sub(&b.derivative());
        let mut i = 1;
        while b.degree().unwrap_or(0) > 0 {
            let a = b.gcd(&d);
            if a.degree().unwrap_or(0) > 0 {
                out.push((a.clone(), i));
            }
            b = b.div_rem(&a).0;
            c = d.div_rem(&a).0;
            d = c.sub(&b.derivative());
            i += 1;
        }
        out
    }
}

pub(crate) fn euclid_gcd<F: Field>(a: &Poly<F>, b: &Poly<F>) -> Poly<F> {
    let mut a = a.clone();
    let mut b = b.clone();
    while !b.coeffs.is_empty() {
        let (_, r) = a.div_rem(&b);
        a = b;
        b = r;
    }
    a.monic()
}

/// Integer multiple with coprime coefficients (content removed, sign kept).
fn primitive_part(coeffs: &[BigRational]) -> Vec<BigInt> {
    let scale = coeffs.iter().fold(<BigInt as One>::one(), |acc, c| acc.lcm(c.denom()));
    let ints: Vec<BigInt> = coeffs
        .iter()
        .map(|c| (c * BigRational::from_integer(scale.clone())).to_integer())
        .collect();
    primitive_ints(ints)
}

fn primitive_ints(mut ints: Vec<BigInt>) -> Vec<BigInt> {
    while ints.last().is_some_and(Zero::is_zero) {
        ints.pop();
    }
    let content = ints.iter().fold(<BigInt as Zero>::zero(), |acc, c| acc.gcd(c));
    if !Zero::is_zero(&content) && !One::is_one(&content) {
        for c in &mut ints {
            *c /= &content;
        }
    }
    ints
}

/// lc(b)^k · a mod b, with every step kept in the integers.
fn pseudo_rem(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    let db = b.len() - 1;
    let lb = &b[db];
    let mut r = a.to_vec();
    while r.len() > db {
        let lr = r.last().expect("nonempty").clone();
        let shift = r.len() - 1 - db;
        for c in r.iter_mut() {
            *c *= lb;
        }
        for (j, bj) in b.iter().enumerate() {
            r[shift + j] -= &lr * bj;
        }
        r.pop();
        while r.last().is_some_and(Zero::is_zero) {
            r.pop();
        }
    }
    r
}

/// Gcd over ℚ through the primitive pseudo-remainder sequence over ℤ; the
/// rational Euclidean sequence has the same result but its coefficients
/// swell badly.
pub(crate) fn rational_gcd(a: &Poly<BigRational>, b: &Poly<BigRational>) -> Poly<BigRational> {
    let mut p = primitive_part(&a.coeffs);
    let mut q = primitive_part(&b.coeffs);
    if p.len() < q.len() {
        std::mem::swap(&mut p, &mut q);
    }
    while !q.is_empty() {
        let r = primitive_ints(pseudo_rem(&p, &q));
        p = q;
        q = r;
    }
    Poly::new(p.into_iter().map(BigRational::from_integer).collect()).monic()
}

impl<F: Field> ExactDiv for Poly<F> {
    fn exact_div(&self, divisor: &Self) -> Self {
        let (q, r) = self.div_rem(divisor);
        debug_assert!(Ring::is_zero(&r), "inexact polynomial division");
        q
    }
}

impl ParamPoly {
    pub fn from_ints(coeffs: &[i64]) -> Self {
        Poly::new(coeffs.iter().map(|&c| GaussianRational::from_int(c)).collect())
    }

    pub fn from_rationals(coeffs: &[BigRational]) -> Self {
        Poly::new(coeffs.iter().cloned().map(GaussianRational::real).collect())
    }

    /// True when every coefficient is real.
    pub fn is_real(&self) -> bool {
        self.coeffs.iter().all(GaussianRational::is_real)
    }

    pub fn real_part(&self) -> Poly<BigRational> {
        Poly::new(self.coeffs.iter().map(|c| c.re.clone()).collect())
    }

    pub fn imag_part(&self) -> Poly<BigRational> {
        Poly::new(self.coeffs.iter().map(|c| c.im.clone()).collect())
    }

    /// Coefficient-wise conjugate: the conjugate of the entry for a real
    /// parameter value.
    pub fn conj(&self) -> Self {
        Poly::new(self.coeffs.iter().map(GaussianRational::conj).collect())
    }

    pub fn eval_rational(&self, x: &BigRational) -> GaussianRational {
        self.eval(&GaussianRational::real(x.clone()))
    }

    pub fn eval_f64(&self, x: f64) -> Complex64 {
        self.eval_in(&Complex64::new(x, 0.0), GaussianRational::to_c64)
    }

    /// Render with a variable name, highest degree first:
    /// `2*g^2 - g + 3/2`.
    pub fn display_with<'a>(&'a self, var: &'a str) -> PolyDisplay<'a> {
        PolyDisplay { poly: self, var }
    }
}

impl Poly<BigRational> {
    pub fn to_param(&self) -> ParamPoly {
        ParamPoly::from_rationals(&self.coeffs)
    }

    pub fn eval_f64(&self, x: f64) -> f64 {
        self.coeffs
            .iter()
            .rev()
            .fold(0.0, |acc, c| acc * x + rational_to_f64(c))
    }
}

impl Poly<Complex64> {
    pub fn eval_c64(&self, z: Complex64) -> Complex64 {
        self.coeffs
            .iter()
            .rev()
            .fold(Complex64::new(0.0, 0.0), |acc, c| acc * z + c)
    }
}

pub struct PolyDisplay<'a> {
    poly: &'a ParamPoly,
    var: &'a str,
}

impl fmt::Display for PolyDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.poly.coeffs.is_empty() {
            return f.write_str("0");
        }
        let mut first = true;
        for (k, c) in self.poly.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let mut text = if c.is_real() || Zero::is_zero(&c.re) {
                c.to_string()
            } else {
                format!("({c})")
            };
            let negative = text.starts_with('-');
            if negative {
                text.remove(0);
            }
            if !first {
                f.write_str(if negative { " - " } else { " + " })?;
            } else if negative {
                f.write_str("-")?;
            }
            let unit = text == "1";
            match k {
                0 => f.write_str(&text)?,
                _ => {
                    if !unit {
                        write!(f, "{text}*")?;
                    }
                    f.write_str(self.var)?;
                    if k > 1 {
                        write!(f, "^{k}")?;
                    }
                }
            }
            first = false;
        }
        Ok(())
    }
}

/// Rational function `num / den` in the model parameter. Chain entries are
/// usually plain polynomials (`den == 1`); a non-constant denominator only
/// appears in corner entries such as the reality-restoring corner of a
/// periodic chain.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct RatFn {
    pub num: ParamPoly,
    pub den: ParamPoly,
}

impl RatFn {
    pub fn poly(p: ParamPoly) -> Self {
        RatFn {
            num: p,
            den: ParamPoly::one(),
        }
    }

    pub fn constant(c: GaussianRational) -> Self {
        RatFn::poly(ParamPoly::constant(c))
    }

    /// Cancel common factors and make the denominator monic. A constant
    /// denominator is folded into the numerator.
    pub fn new(num: ParamPoly, den: ParamPoly) -> Self {
        assert!(!Ring::is_zero(&den), "rational function with zero denominator");
        if Ring::is_zero(&num) {
            return RatFn::poly(num);
        }
        let g = num.gcd(&den);
        let num = num.div_rem(&g).0;
        let den = den.div_rem(&g).0;
        let lc_inv = den.leading().inv();
        RatFn {
            num: num.scale(&lc_inv),
            den: den.scale(&lc_inv),
        }
    }

    pub fn is_poly(&self) -> bool {
        self.den.is_constant()
    }

    pub fn as_poly(&self) -> Option<&ParamPoly> {
        self.is_poly().then_some(&self.num)
    }

    pub fn is_zero(&self) -> bool {
        Ring::is_zero(&self.num)
    }

    pub fn is_constant(&self) -> bool {
        self.num.is_constant() && self.den.is_constant()
    }

    pub fn mul(&self, other: &Self) -> Self {
        RatFn::new(Ring::mul(&self.num, &other.num), Ring::mul(&self.den, &other.den))
    }

    pub fn add(&self, other: &Self) -> Self {
        RatFn::new(
            Ring::add(&Ring::mul(&self.num, &other.den), &Ring::mul(&other.num, &self.den)),
            Ring::mul(&self.den, &other.den),
        )
    }

    pub fn div(&self, other: &Self) -> Self {
        RatFn::new(Ring::mul(&self.num, &other.den), Ring::mul(&self.den, &other.num))
    }

    pub fn conj(&self) -> Self {
        RatFn {
            num: self.num.conj(),
            den: self.den.conj(),
        }
    }

    /// Value at a rational parameter, `None` at a pole.
    pub fn eval_rational(&self, x: &BigRational) -> Option<GaussianRational> {
        let d = self.den.eval_rational(x);
        if d.is_zero() {
            return None;
        }
        Some(self.num.eval_rational(x).div(&d))
    }

    /// Coefficient-free check: does the denominator vanish at `x`?
    pub fn has_pole_at(&self, x: &BigRational) -> bool {
        self.den.eval_rational(x).is_zero()
    }

    pub fn max_degree(&self) -> usize {
        self.num.degree().unwrap_or(0).max(self.den.degree().unwrap_or(0))
    }
}

impl From<ParamPoly> for RatFn {
    fn from(p: ParamPoly) -> Self {
        RatFn::poly(p)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn p(c: &[i64]) -> ParamPoly {
        ParamPoly::from_ints(c)
    }

    #[test]
    fn trims_and_degrees() {
        assert_eq!(p(&[1, 2, 0, 0]).degree(), Some(1));
        assert_eq!(p(&[0, 0]).degree(), None);
        assert!(Ring::is_zero(&p(&[])));
    }

    #[test]
    fn division_and_gcd() {
        // (x-1)(x+2) / (x-1)
        let f = p(&[-2, 1, 1]);
        let (q, r) = f.div_rem(&p(&[-1, 1]));
        assert_eq!(q, p(&[2, 1]));
        assert!(Ring::is_zero(&r));
        let g = p(&[-1, 0, 1]).gcd(&f);
        assert_eq!(g, p(&[-1, 1]));
    }

    #[test]
    fn square_free_decomposition() {
        // (x-1)^3 (x^2+4)^2 (x+5)
        let a = p(&[-1, 1]).pow(3);
        let b = p(&[4, 0, 1]).pow(2);
        let f = Ring::mul(&Ring::mul(&a, &b), &p(&[5, 1])).scale(&GaussianRational::from_int(7));
        let sf = f.square_free();
        assert_eq!(sf, vec![(p(&[5, 1]), 1), (p(&[4, 0, 1]), 2), (p(&[-1, 1]), 3)]);
    }

    #[test]
    fn integer_gcd_matches_euclid() {
        let q = |c: &[(i64, i64)]| {
            Poly::new(
                c.iter()
                    .map(|&(n, d)| BigRational::new(n.into(), d.into()))
                    .collect::<Vec<_>>(),
            )
        };
        // (x − 1/3)(2x + 5/7) and (x − 1/3)(x² − 3/2)
        let common = q(&[(-1, 3), (1, 1)]);
        let a = Ring::mul(&common, &q(&[(5, 7), (2, 1)]));
        let b = Ring::mul(&common, &q(&[(-3, 2), (0, 1), (1, 1)]));
        assert_eq!(rational_gcd(&a, &b), euclid_gcd(&a, &b));
        assert_eq!(rational_gcd(&a, &b), common);
        assert_eq!(rational_gcd(&a, &Poly::zero()), a.monic());
        assert!(rational_gcd(&Poly::zero(), &Poly::zero()).is_zero());
        let coprime = q(&[(1, 1), (1, 1)]);
        assert_eq!(
            rational_gcd(&a, &coprime),
            Poly::constant(BigRational::from_integer(1.into()))
        );
    }

    #[test]
    fn display_polynomial() {
        let f = p(&[3, -1, 2]);
        assert_eq!(f.display_with("g").to_string(), "2*g^2 - g + 3");
        assert_eq!(p(&[0, -1]).display_with("d").to_string(), "-d");
    }

    #[test]
    fn ratfn_reduces() {
        let r = RatFn::new(Ring::mul(&p(&[1, 1]), &p(&[-1, 1])), p(&[2, -2]));
        // (x+1)(x-1) / (2(1-x)) = -(x+1)/2
        assert!(r.is_poly());
        assert_eq!(r.num, p(&[1, 1]).scale(&GaussianRational::from_frac(-1, 2)));
        let pole = RatFn::new(p(&[1]), p(&[-1, 1]));
        assert!(pole.has_pole_at(&BigRational::from_integer(1.into())));
        assert_eq!(pole.eval_rational(&BigRational::from_integer(1.into())), None);
    }

    fn arb_poly() -> impl Strategy<Value = ParamPoly> {
        prop::collection::vec(-20i64..20, 0..6).prop_map(|c| ParamPoly::from_ints(&c))
    }

    proptest! {
        #[test]
        fn ring_laws(f in arb_poly(), g in arb_poly(), h in arb_poly()) {
            let fg = Ring::mul(&f, &g);
            if !Ring::is_zero(&f) && !Ring::is_zero(&g) {
                prop_assert_eq!(fg.degree(), Some(f.degree().unwrap() + g.degree().unwrap()));
            }
            prop_assert_eq!(Ring::sub(&Ring::add(&f, &g), &g), f.clone());
            prop_assert_eq!(
                Ring::mul(&f, &Ring::add(&g, &h)),
                Ring::add(&fg, &Ring::mul(&f, &h))
            );
        }

        #[test]
        fn division_identity(f in arb_poly(), d in arb_poly()) {
            prop_assume!(!Ring::is_zero(&d));
            let (q, r) = f.div_rem(&d);
            prop_assert_eq!(Ring::add(&Ring::mul(&q, &d), &r), f);
            prop_assert!(r.degree().map_or(true, |rd| rd < d.degree().unwrap()));
        }
    }
}
