//! Exact real-root isolation: square-free decomposition, then Sturm
//! sequences and bisection on each square-free factor.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::gaussian::{format_rational, rational_to_f64};
use super::poly::{ParamPoly, Poly};
use super::ring::Ring;
use crate::error::{Error, Result};

type QPoly = Poly<BigRational>;

/// Where a real root sits: exactly at a rational point, or strictly inside an
/// open rational interval that contains no other root.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum RootLocation {
    Exact(BigRational),
    Interval { lo: BigRational, hi: BigRational },
}

impl RootLocation {
    pub fn lower(&self) -> &BigRational {
        match self {
            RootLocation::Exact(x) => x,
            RootLocation::Interval { lo, .. } => lo,
        }
    }

    pub fn upper(&self) -> &BigRational {
        match self {
            RootLocation::Exact(x) => x,
            RootLocation::Interval { hi, .. } => hi,
        }
    }

    pub fn exact(&self) -> Option<&BigRational> {
        match self {
            RootLocation::Exact(x) => Some(x),
            RootLocation::Interval { .. } => None,
        }
    }

    /// Midpoint as a rational; the root itself when exact.
    pub fn midpoint(&self) -> BigRational {
        match self {
            RootLocation::Exact(x) => x.clone(),
            RootLocation::Interval { lo, hi } => (lo + hi) / BigRational::from_integer(2.into()),
        }
    }

    pub fn approx(&self) -> f64 {
        rational_to_f64(&self.midpoint())
    }
}

impl fmt::Display for RootLocation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RootLocation::Exact(x) => f.write_str(&format_rational(x)),
            RootLocation::Interval { lo, hi } => {
                write!(f, "({}, {})", format_rational(lo), format_rational(hi))
            }
        }
    }
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct RealRoot {
    pub location: RootLocation,
    pub multiplicity: usize,
}

/// Full result: the real roots plus the number of non-real conjugate pairs,
/// counted with multiplicity.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct RootIsolation {
    pub roots: Vec<RealRoot>,
    pub complex_pairs: usize,
    pub degree: usize,
}

/// Default isolating-interval width, 2⁻⁴⁰.
pub fn default_width() -> BigRational {
    BigRational::new(<BigInt as One>::one(), <BigInt as One>::one() << 40)
}

/// Real roots of a polynomial with real rational coefficients, refined to
/// the default width.
pub fn isolate_real_roots(f: &ParamPoly) -> Result<Vec<RealRoot>> {
    Ok(isolate_real_roots_with(f, &default_width())?.roots)
}

pub fn isolate_real_roots_with(f: &ParamPoly, width: &BigRational) -> Result<RootIsolation> {
    if f.is_zero() {
        return Err(Error::Domain("root isolation of the zero polynomial".into()));
    }
    if !f.is_real() {
        return Err(Error::Domain("root isolation needs real coefficients".into()));
    }
    if !width.is_positive() {
        return Err(Error::Domain("isolation width must be positive".into()));
    }
    Ok(isolate_rational(&f.real_part(), width))
}

pub(crate) fn isolate_rational(f: &QPoly, width: &BigRational) -> RootIsolation {
    let degree = f.degree().unwrap_or(0);
    let mut found: Vec<Isolated> = Vec::new();
    let mut complex_pairs = 0;
    for (factor, mult) in f.square_free() {
        let sturm = SturmChain::new(&factor);
        let isolated = sturm.isolate(width);
        let deg = factor.degree().unwrap_or(0);
        complex_pairs += mult * (deg - isolated.len()) / 2;
        found.extend(isolated.into_iter().map(|mut r| {
            r.multiplicity = mult;
            r
        }));
    }
    separate(&mut found);
    RootIsolation {
        roots: found
            .into_iter()
            .map(|r| RealRoot {
                location: r.location,
                multiplicity: r.multiplicity,
            })
            .collect(),
        complex_pairs,
        degree,
    }
}

/// Roots from different square-free factors are distinct, so overlapping
/// intervals can always be split by further bisection.
fn separate(roots: &mut [Isolated]) {
    loop {
        roots.sort_by(|a, b| a.location.lower().cmp(b.location.lower()));
        let mut clash = None;
        for i in 1..roots.len() {
            if roots[i].location.lower() <= roots[i - 1].location.upper() {
                clash = Some(i);
                break;
            }
        }
        let Some(i) = clash else { return };
        for k in [i - 1, i] {
            let r = &mut roots[k];
            if let RootLocation::Interval { lo, hi } = &r.location {
                let w = (hi - lo) / BigRational::from_integer(4.into());
                r.refine(&w);
            }
        }
    }
}

/// Roots of a square-free polynomial isolated to `width`, each paired with
/// the same root narrowed further to `fine`. Sorted by position.
pub fn isolate_square_free_refined(
    f: &QPoly,
    width: &BigRational,
    fine: &BigRational,
) -> Vec<(RootLocation, RootLocation)> {
    if f.degree().unwrap_or(0) == 0 {
        return Vec::new();
    }
    let sturm = SturmChain::new(f);
    let mut out: Vec<(RootLocation, RootLocation)> = sturm
        .isolate(width)
        .into_iter()
        .map(|mut r| {
            let coarse = r.location.clone();
            r.refine(fine);
            (coarse, r.location)
        })
        .collect();
    out.sort_by(|a, b| a.0.lower().cmp(b.0.lower()));
    out
}

struct Isolated {
    location: RootLocation,
    multiplicity: usize,
    sturm: SturmChain,
}

impl Isolated {
    fn refine(&mut self, width: &BigRational) {
        if let RootLocation::Interval { lo, hi } = &self.location {
            self.location = self.sturm.refine(lo.clone(), hi.clone(), width);
        }
    }
}

#[derive(Clone)]
struct SturmChain {
    chain: Vec<QPoly>,
    /// Leading coefficient of the primitive integer multiple of the factor;
    /// every rational root has the form k / lead.
    lead: BigInt,
}

impl SturmChain {
    fn new(f: &QPoly) -> Self {
        let mut chain = vec![f.clone(), f.derivative()];
        loop {
            let n = chain.len();
            let (_, r) = chain[n - 2].div_rem(&chain[n - 1]);
            if r.is_zero() {
                break;
            }
            chain.push(r.neg());
        }
        let denom_lcm = f
            .coeffs()
            .iter()
            .fold(<BigInt as One>::one(), |acc, c| acc.lcm(c.denom()));
        let ints: Vec<BigInt> = f
            .coeffs()
            .iter()
            .map(|c| (c * BigRational::from_integer(denom_lcm.clone())).to_integer())
            .collect();
        let content = ints.iter().fold(<BigInt as Zero>::zero(), |acc, c| acc.gcd(c));
        let lead = (ints.last().cloned().unwrap_or_else(<BigInt as One>::one) / content).abs();
        SturmChain { chain, lead }
    }

    fn poly(&self) -> &QPoly {
        &self.chain[0]
    }

    fn variations(&self, x: &BigRational) -> usize {
        let mut count = 0;
        let mut last: Option<bool> = None;
        for p in &self.chain {
            let v = p.eval(x);
            if Zero::is_zero(&v) {
                continue;
            }
            let pos = v.is_positive();
            if last.is_some_and(|l| l != pos) {
                count += 1;
            }
            last = Some(pos);
        }
        count
    }

    fn cauchy_bound(&self) -> BigRational {
        let f = self.poly();
        let lc = f.leading();
        let max = f.coeffs()[..f.coeffs().len() - 1]
            .iter()
            .map(|c| (c / &lc).abs())
            .max()
            .unwrap_or_else(<BigRational as Zero>::zero);
        max + <BigRational as One>::one()
    }

    fn isolate(&self, width: &BigRational) -> Vec<Isolated> {
        let bound = self.cauchy_bound();
        let lo = -bound.clone();
        let hi = bound;
        let mut out = Vec::new();
        let mut stack = vec![(lo.clone(), hi.clone(), self.variations(&lo), self.variations(&hi))];
        let two = BigRational::from_integer(2.into());
        while let Some((a, b, va, vb)) = stack.pop() {
            let count = va - vb;
            if count == 0 {
                continue;
            }
            if count == 1 {
                let location = self.refine(a, b, width);
                out.push(Isolated {
                    location,
                    multiplicity: 1,
                    sturm: self.clone(),
                });
                continue;
            }
            let m = (&a + &b) / &two;
            if Zero::is_zero(&self.poly().eval(&m)) {
                out.push(Isolated {
                    location: RootLocation::Exact(m.clone()),
                    multiplicity: 1,
                    sturm: self.clone(),
                });
                // step off the exact root until the neighbours are clean
                let mut eps = (&b - &a) / BigRational::from_integer(4.into());
                loop {
                    let l = &m - &eps;
                    let r = &m + &eps;
                    let (vl, vr) = (self.variations(&l), self.variations(&r));
                    if !Zero::is_zero(&self.poly().eval(&l)) && !Zero::is_zero(&self.poly().eval(&r)) && vl - vr == 1 {
                        stack.push((a.clone(), l, va, vl));
                        stack.push((r, b.clone(), vr, vb));
                        break;
                    }
                    eps /= &two;
                }
                continue;
            }
            let vm = self.variations(&m);
            stack.push((a, m.clone(), va, vm));
            stack.push((m, b, vm, vb));
        }
        out
    }

    /// Narrow a single-root interval (a, b], neither endpoint a root, until
    /// it is narrower than `width` and than 1/lead; then test the one
    /// candidate of the form k/lead inside it exactly.
    fn refine(&self, mut a: BigRational, mut b: BigRational, width: &BigRational) -> RootLocation {
        let f = self.poly();
        let two = BigRational::from_integer(2.into());
        let lead_q = BigRational::from_integer(self.lead.clone());
        let grid = lead_q.recip();
        let target = if &grid < width { grid.clone() } else { width.clone() };
        let mut fa_pos = f.eval(&a).is_positive();
        while &b - &a >= target {
            let m = (&a + &b) / &two;
            let fm = f.eval(&m);
            if Zero::is_zero(&fm) {
                return RootLocation::Exact(m);
            }
            if fm.is_positive() == fa_pos {
                a = m;
                fa_pos = fm.is_positive();
            } else {
                b = m;
            }
        }
        let k = (&a * &lead_q).floor() + <BigRational as One>::one();
        let candidate = k / &lead_q;
        if candidate.cmp(&a) == Ordering::Greater
            && candidate.cmp(&b) != Ordering::Greater
            && Zero::is_zero(&f.eval(&candidate))
        {
            return RootLocation::Exact(candidate);
        }
        if Zero::is_zero(&f.eval(&b)) {
            return RootLocation::Exact(b);
        }
        RootLocation::Interval { lo: a, hi: b }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::gaussian::GaussianRational;
    use proptest::prelude::*;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    fn p(c: &[i64]) -> ParamPoly {
        ParamPoly::from_ints(c)
    }

    #[test]
    fn linear_root_exact() {
        let roots = isolate_real_roots(&p(&[4, -4])).unwrap();
        assert_eq!(
            roots,
            vec![RealRoot {
                location: RootLocation::Exact(q(1, 1)),
                multiplicity: 1
            }]
        );
    }

    #[test]
    fn cubed_factor() {
        // 4 (2 - g)^3
        let f = p(&[2, -1]).pow(3).scale(&GaussianRational::from_int(4));
        let roots = isolate_real_roots(&f).unwrap();
        assert_eq!(roots.len(), 1);
        assert_eq!(roots[0].location, RootLocation::Exact(q(2, 1)));
        assert_eq!(roots[0].multiplicity, 3);
    }

    #[test]
    fn complex_pair_factor_has_no_real_roots() {
        // 16 (3 - 2g)^3 (g^2 + 4)^2
        let f = Ring::mul(&p(&[3, -2]).pow(3), &p(&[4, 0, 1]).pow(2)).scale(&GaussianRational::from_int(16));
        let iso = isolate_real_roots_with(&f, &default_width()).unwrap();
        assert_eq!(iso.roots.len(), 1);
        assert_eq!(iso.roots[0].location, RootLocation::Exact(q(3, 2)));
        assert_eq!(iso.roots[0].multiplicity, 3);
        assert_eq!(iso.complex_pairs, 2);
        assert_eq!(iso.degree, 7);
    }

    #[test]
    fn non_dyadic_rational_root() {
        // (3g - 4)(g^2 - 2)
        let f = Ring::mul(&p(&[-4, 3]), &p(&[-2, 0, 1]));
        let iso = isolate_real_roots_with(&f, &default_width()).unwrap();
        assert_eq!(iso.roots.len(), 3);
        assert_eq!(iso.roots[1].location, RootLocation::Exact(q(4, 3)));
        let sqrt2 = &iso.roots[2].location;
        assert!(sqrt2.exact().is_none());
        assert!((sqrt2.approx() - 2f64.sqrt()).abs() < 1e-11);
        assert!(sqrt2.upper() - sqrt2.lower() < default_width());
        assert!((iso.roots[0].location.approx() + 2f64.sqrt()).abs() < 1e-11);
    }

    #[test]
    fn root_at_bisection_midpoint() {
        // roots at 0 (midpoint of the symmetric Cauchy interval), ±1
        let f = p(&[0, -1, 0, 1]);
        let roots = isolate_real_roots(&f).unwrap();
        let locs: Vec<_> = roots.iter().map(|r| r.location.clone()).collect();
        assert_eq!(
            locs,
            vec![
                RootLocation::Exact(q(-1, 1)),
                RootLocation::Exact(q(0, 1)),
                RootLocation::Exact(q(1, 1))
            ]
        );
    }

    #[test]
    fn rejects_bad_input() {
        assert!(isolate_real_roots(&p(&[])).is_err());
        let complex = ParamPoly::new(vec![GaussianRational::i(), GaussianRational::one()]);
        assert!(isolate_real_roots(&complex).is_err());
        assert!(isolate_real_roots(&p(&[5])).unwrap().is_empty());
    }

    proptest! {
        #[test]
        fn multiplicities_account_for_degree(
            roots in prop::collection::vec((-6i64..6, 1i64..4, 1usize..3), 1..4),
            pairs in prop::collection::vec((1i64..5, 1usize..3), 0..2),
        ) {
            let mut f = p(&[1]);
            for (n, d, m) in &roots {
                f = Ring::mul(&f, &p(&[-n, *d]).pow(*m as u32));
            }
            for (c, m) in &pairs {
                f = Ring::mul(&f, &p(&[*c, 0, 1]).pow(*m as u32));
            }
            let iso = isolate_real_roots_with(&f, &default_width()).unwrap();
            let real: usize = iso.roots.iter().map(|r| r.multiplicity).sum();
            prop_assert_eq!(real + 2 * iso.complex_pairs, f.degree().unwrap());
            // every planted rational root is reported exactly
            for (n, d, _) in &roots {
                let x = q(*n, *d);
                prop_assert!(iso.roots.iter().any(|r| r.location.exact() == Some(&x)));
            }
            // disjoint and sorted
            for w in iso.roots.windows(2) {
                prop_assert!(w[0].location.upper() < w[1].location.lower());
            }
        }
    }
}
