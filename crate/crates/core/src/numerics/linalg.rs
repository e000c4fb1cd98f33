//! Small dense exact linear algebra over a field.

use super::ring::{Field, Ring};

/// Rank by Gaussian elimination with exact pivots.
pub fn rank<F: Field>(m: &[Vec<F>]) -> usize {
    let mut a: Vec<Vec<F>> = m.to_vec();
    let rows = a.len();
    let cols = a.first().map_or(0, Vec::len);
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..rows).find(|&i| !a[i][c].is_zero()) else {
            continue;
        };
        a.swap(r, p);
        let inv = a[r][c].inv();
        for i in r + 1..rows {
            if a[i][c].is_zero() {
                continue;
            }
            let f = a[i][c].mul(&inv);
            for j in c..cols {
                let t = f.mul(&a[r][j]);
                a[i][j] = a[i][j].sub(&t);
            }
        }
        r += 1;
        if r == rows {
            break;
        }
    }
    r
}

pub fn mat_mul<R: Ring>(a: &[Vec<R>], b: &[Vec<R>]) -> Vec<Vec<R>> {
    let n = a.len();
    let k = b.len();
    let m = b.first().map_or(0, Vec::len);
    (0..n)
        .map(|i| {
            (0..m)
                .map(|j| {
                    (0..k).fold(R::zero(), |acc, l| {
                        if a[i][l].is_zero() || b[l][j].is_zero() {
                            acc
                        } else {
                            acc.add(&a[i][l].mul(&b[l][j]))
                        }
                    })
                })
                .collect()
        })
        .collect()
}

/// A − s·I.
pub fn shift_diagonal<R: Ring>(a: &[Vec<R>], s: &R) -> Vec<Vec<R>> {
    let mut out = a.to_vec();
    for (i, row) in out.iter_mut().enumerate() {
        row[i] = row[i].sub(s);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::GaussianRational;

    fn g(n: i64) -> GaussianRational {
        GaussianRational::from_ints(n, 0)
    }

    #[test]
    fn ranks() {
        let id = vec![vec![g(1), g(0)], vec![g(0), g(1)]];
        assert_eq!(rank(&id), 2);
        let dup = vec![vec![g(1), g(2), g(3)], vec![g(2), g(4), g(6)], vec![g(0), g(0), g(1)]];
        assert_eq!(rank(&dup), 2);
        let jordan = vec![vec![g(0), g(1), g(0)], vec![g(0), g(0), g(1)], vec![g(0), g(0), g(0)]];
        assert_eq!(rank(&jordan), 2);
        assert_eq!(rank(&mat_mul(&jordan, &jordan)), 1);
        assert_eq!(rank(&mat_mul(&jordan, &mat_mul(&jordan, &jordan))), 0);
        let complex = vec![
            vec![GaussianRational::i(), g(1)],
            vec![g(1), GaussianRational::from_ints(0, -1)],
        ];
        assert_eq!(rank(&complex), 1);
    }

    #[test]
    fn shift() {
        let a = vec![vec![g(2), g(1)], vec![g(1), g(2)]];
        assert_eq!(rank(&shift_diagonal(&a, &g(1))), 1);
        assert_eq!(rank(&shift_diagonal(&a, &g(3))), 1);
        assert_eq!(rank(&shift_diagonal(&a, &g(0))), 2);
    }
}
