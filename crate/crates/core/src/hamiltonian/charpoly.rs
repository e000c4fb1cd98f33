use super::Band;
use crate::numerics::{Poly, Ring};

/// Corner couplings as (numerator, denominator) pairs.
pub struct CornerTerms<R> {
    pub h_1n: (R, R),
    pub h_n1: (R, R),
}

/// det(E·I − H) · d_{1N} · d_{N1} for a band with polynomial entries and
/// optional rational corners.
///
/// Open part: D_k = (E − H_kk) D_{k−1} − H_{k−1,k} H_{k,k−1} D_{k−2}.
/// Ring closure, by cofactor expansion along the first row:
/// det = D_{1..N} − H_{1N} H_{N1} D_{2..N−1} − (H_{N1} ∏ upper + H_{1N} ∏ lower).
///
/// A band that already carries its corners (numeric or evaluated exact) is
/// handled by passing `corner = None`; the band's own corner is then used
/// with unit denominators.
pub fn char_poly_band<R: Ring>(band: &Band<R>, corner: Option<CornerTerms<R>>) -> Poly<R> {
    let n = band.n();
    let corner = corner.or_else(|| {
        band.corner.as_ref().map(|c| CornerTerms {
            h_1n: (c.h_1n.clone(), R::one()),
            h_n1: (c.h_n1.clone(), R::one()),
        })
    });
    let full = continuant(band, 0, n);
    let Some(c) = corner else {
        return full;
    };
    let (b_num, b_den) = c.h_1n;
    let (a_num, a_den) = c.h_n1;
    let inner = continuant(band, 1, n - 1);
    let prod_upper = band.upper.iter().fold(R::one(), |acc, u| acc.mul(u));
    let prod_lower = band.lower.iter().fold(R::one(), |acc, l| acc.mul(l));
    let lift = |r: &R| Poly::constant(r.clone());
    let dens = a_den.mul(&b_den);
    let wrap = a_num
        .mul(&b_den)
        .mul(&prod_upper)
        .add(&b_num.mul(&a_den).mul(&prod_lower));
    full.scale(&dens)
        .sub(&inner.scale(&a_num.mul(&b_num)))
        .sub(&lift(&wrap))
}

/// Characteristic polynomial of the open sub-chain on sites `lo..hi`.
fn continuant<R: Ring>(band: &Band<R>, lo: usize, hi: usize) -> Poly<R> {
    let mut prev = Poly::<R>::one();
    if hi <= lo {
        return prev;
    }
    let linear = |k: usize| Poly::new(vec![band.diag[k].neg(), R::one()]);
    let mut cur = linear(lo);
    for k in lo + 1..hi {
        let bond = band.upper[k - 1].mul(&band.lower[k - 1]);
        let next = linear(k).mul(&cur).sub(&prev.scale(&bond));
        prev = cur;
        cur = next;
    }
    cur
}
