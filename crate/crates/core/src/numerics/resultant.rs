//! Resultants and discriminants by fraction-free elimination of the
//! Sylvester matrix.

use super::poly::Poly;
use super::ring::{ExactDiv, Ring};

/// Sylvester matrix of `p` (degree m) and `q` (degree n): n shifted rows of
/// `p`'s coefficients followed by m shifted rows of `q`'s, highest degree
/// first.
pub fn sylvester_matrix<R: Ring>(p: &Poly<R>, q: &Poly<R>) -> Vec<Vec<R>> {
    let m = p.degree().unwrap_or(0);
    let n = q.degree().unwrap_or(0);
    let size = m + n;
    let mut rows = Vec::with_capacity(size);
    for shift in 0..n {
        let mut row = vec![R::zero(); size];
        for (k, c) in p.coeffs().iter().enumerate() {
            row[shift + m - k] = c.clone();
        }
        rows.push(row);
    }
    for shift in 0..m {
        let mut row = vec![R::zero(); size];
        for (k, c) in q.coeffs().iter().enumerate() {
            row[shift + n - k] = c.clone();
        }
        rows.push(row);
    }
    rows
}

/// Determinant by Bareiss' fraction-free elimination with row pivoting.
/// Every intermediate entry is a minor of the input, so the division is
/// exact in any integral domain.
pub fn bareiss_det<R: ExactDiv>(mut a: Vec<Vec<R>>) -> R {
    let n = a.len();
    if n == 0 {
        return R::one();
    }
    let mut negate = false;
    let mut prev = R::one();
    for k in 0..n {
        if a[k][k].is_zero() {
            match (k + 1..n).find(|&i| !a[i][k].is_zero()) {
                Some(i) => {
                    a.swap(k, i);
                    negate = !negate;
                }
                None => return R::zero(),
            }
        }
        let pivot = a[k][k].clone();
        for i in k + 1..n {
            let factor = a[i][k].clone();
            for j in k + 1..n {
                let lhs = a[i][j].mul(&pivot);
                let updated = if factor.is_zero() {
                    lhs
                } else {
                    lhs.sub(&factor.mul(&a[k][j]))
                };
                a[i][j] = if prev.is_one() {
                    updated
                } else {
                    updated.exact_div(&prev)
                };
            }
            a[i][k] = R::zero();
        }
        prev = pivot;
    }
    let det = a[n - 1][n - 1].clone();
    if negate {
        det.neg()
    } else {
        det
    }
}

/// Res(p, q) = lc(p)^deg q · ∏ q(α) over the roots α of p. Both inputs
/// must be nonzero.
pub fn resultant<R: ExactDiv>(p: &Poly<R>, q: &Poly<R>) -> R {
    let m = p.degree().expect("resultant of zero polynomial");
    let n = q.degree().expect("resultant of zero polynomial");
    match (m, n) {
        (0, 0) => R::one(),
        (0, _) => ring_pow(&p.leading(), n),
        (_, 0) => ring_pow(&q.leading(), m),
        _ => bareiss_det(sylvester_matrix(p, q)),
    }
}

/// Disc(p) = (−1)^{n(n−1)/2} · Res(p, p′) / lc(p), for deg p = n ≥ 1.
/// Monic quadratics give the familiar b² − 4c.
pub fn discriminant<R: ExactDiv>(p: &Poly<R>) -> R {
    let n = p.degree().expect("discriminant of zero polynomial");
    let res = resultant(p, &p.derivative());
    let lc = p.leading();
    let d = if lc.is_one() { res } else { res.exact_div(&lc) };
    if (n * (n.saturating_sub(1)) / 2) % 2 == 1 {
        d.neg()
    } else {
        d
    }
}

pub(crate) fn ring_pow<R: Ring>(x: &R, e: usize) -> R {
    let mut acc = R::one();
    for _ in 0..e {
        acc = acc.mul(x);
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::poly::ParamPoly;
    use num_rational::BigRational;

    fn q(n: i64) -> BigRational {
        BigRational::from_integer(n.into())
    }

    fn rp(c: &[i64]) -> Poly<BigRational> {
        Poly::new(c.iter().map(|&v| q(v)).collect())
    }

    #[test]
    fn determinant_with_pivoting() {
        let m = vec![vec![q(0), q(2), q(1)], vec![q(1), q(1), q(1)], vec![q(2), q(0), q(3)]];
        // direct cofactor expansion: 0*(3-0) - 2*(3-2) + 1*(0-2) = -4
        assert_eq!(bareiss_det(m), q(-4));
        let singular = vec![vec![q(1), q(2)], vec![q(2), q(4)]];
        assert_eq!(bareiss_det(singular), q(0));
    }

    #[test]
    fn resultant_of_linear_factors() {
        // Res(x - a, x - b) = a - b
        let r = resultant(&rp(&[-3, 1]), &rp(&[-7, 1]));
        assert_eq!(r, q(3 - 7));
    }

    #[test]
    fn product_formula() {
        // p = (x-1)(x-2), q = x+1 : Res = q(1) q(2) = 2*3
        let p = rp(&[2, -3, 1]);
        assert_eq!(resultant(&p, &rp(&[1, 1])), q(6));
        // Res(q, p) = (-1)^{mn} Res(p, q)
        assert_eq!(resultant(&rp(&[1, 1]), &p), q(6));
        assert_eq!(resultant(&rp(&[0, 1]), &rp(&[-2, 0, 1])), q(-2));
    }

    #[test]
    fn discriminant_of_cubic() {
        // x^3 + a x + b has discriminant -4a^3 - 27b^2
        let p = rp(&[5, -2, 0, 1]);
        assert_eq!(discriminant(&p), q(-4 * -8 - 27 * 25));
        // non-monic quadratic a x^2 + b x + c: b^2 - 4ac
        assert_eq!(discriminant(&rp(&[3, 5, 2])), q(25 - 24));
    }

    #[test]
    fn parametric_resultant() {
        // Res_E(E^2 - c, 2E) with c the parameter: lc(p)^1 * q(√c) q(-√c) = -4c
        let c = ParamPoly::from_ints(&[0, 1]);
        let p: Poly<ParamPoly> = Poly::new(vec![c.neg(), ParamPoly::zero(), ParamPoly::one()]);
        let r = resultant(&p, &p.derivative());
        assert_eq!(r, ParamPoly::from_ints(&[0, -4]));
        assert_eq!(discriminant(&p), ParamPoly::from_ints(&[0, 4]));
    }
}
