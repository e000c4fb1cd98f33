use nalgebra::linalg::Hessenberg;
use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};

const SWEEPS_PER_EIGENVALUE: usize = 60;

/// Eigenvalues of a general complex matrix: Householder reduction to
/// Hessenberg form, then single-shift QR with Wilkinson shifts, Givens
/// rotations and an exceptional shift every eleventh sweep.
pub fn dense_eigenvalues(m: &DMatrix<Complex64>) -> Result<Vec<Complex64>> {
    let n = m.nrows();
    if n == 0 {
        return Ok(Vec::new());
    }
    let mut a = Hessenberg::new(m.clone()).h();
    let zero = Complex64::new(0.0, 0.0);
    let mut hi = n - 1;
    let mut sweeps = 0;
    let mut total = 0;
    while hi > 0 {
        let mut lo = hi;
        while lo > 0 {
            let s = a[(lo - 1, lo - 1)].norm() + a[(lo, lo)].norm();
            let sub = a[(lo, lo - 1)].norm();
            if sub <= f64::EPSILON * s || sub < f64::MIN_POSITIVE {
                a[(lo, lo - 1)] = zero;
                break;
            }
            lo -= 1;
        }
        if lo == hi {
            hi -= 1;
            sweeps = 0;
            continue;
        }
        sweeps += 1;
        total += 1;
        if total > SWEEPS_PER_EIGENVALUE * n {
            let sub: Vec<f64> = (1..n).map(|k| a[(k, k - 1)].norm()).collect();
            return Err(Error::NonConvergence {
                iterations: total,
                max_residual: sub.iter().cloned().fold(0.0, f64::max),
                residuals: sub,
            });
        }
        let mu = if sweeps % 11 == 10 {
            a[(hi, hi)] + Complex64::new(0.75, 0.75) * a[(hi, hi - 1)].norm()
        } else {
            let (p, q) = (a[(hi - 1, hi - 1)], a[(hi - 1, hi)]);
            let (r, t) = (a[(hi, hi - 1)], a[(hi, hi)]);
            let half = (p - t) * 0.5;
            let root = (half * half + q * r).sqrt();
            let mid = (p + t) * 0.5;
            let (m1, m2) = (mid + root, mid - root);
            if (m1 - t).norm() <= (m2 - t).norm() {
                m1
            } else {
                m2
            }
        };
        for k in lo..=hi {
            a[(k, k)] -= mu;
        }
        let mut rotations = Vec::with_capacity(hi - lo);
        for k in lo..hi {
            let x = a[(k, k)];
            let y = a[(k + 1, k)];
            let r = (x.norm_sqr() + y.norm_sqr()).sqrt();
            let (c, s) = if r == 0.0 {
                (Complex64::new(1.0, 0.0), zero)
            } else {
                (x / r, y / r)
            };
            for j in k..=hi {
                let (u, v) = (a[(k, j)], a[(k + 1, j)]);
                a[(k, j)] = c.conj() * u + s.conj() * v;
                a[(k + 1, j)] = -s * u + c * v;
            }
            rotations.push((c, s));
        }
        for (idx, k) in (lo..hi).enumerate() {
            let (c, s) = rotations[idx];
            for i in lo..=(k + 2).min(hi) {
                let (u, v) = (a[(i, k)], a[(i, k + 1)]);
                a[(i, k)] = u * c + v * s;
                a[(i, k + 1)] = -u * s.conj() + v * c.conj();
            }
        }
        for k in lo..=hi {
            a[(k, k)] += mu;
        }
    }
    Ok((0..n).map(|k| a[(k, k)]).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sorted(mut v: Vec<Complex64>) -> Vec<Complex64> {
        v.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));
        v
    }

    #[test]
    fn non_normal_chain_with_symmetric_spectrum() {
        let n = 6;
        let d = 1.0 / 3.0;
        let h = DMatrix::from_fn(n, n, |i, j| {
            if j == i + 1 {
                Complex64::new(1.0 - d, 0.0)
            } else if i == j + 1 {
                Complex64::new(1.0 + d, 0.0)
            } else {
                Complex64::new(0.0, 0.0)
            }
        });
        let w = sorted(dense_eigenvalues(&h).unwrap());
        let scale = (1.0 - d * d).sqrt();
        let mut expect: Vec<f64> = (1..=n)
            .map(|k| 2.0 * scale * (k as f64 * std::f64::consts::PI / 7.0).cos())
            .collect();
        expect.sort_by(f64::total_cmp);
        for (a, b) in w.iter().zip(expect) {
            assert!((a - Complex64::new(b, 0.0)).norm() < 1e-12, "{a} vs {b}");
        }
    }

    #[test]
    fn rotation_matrix_has_complex_pair() {
        let h = DMatrix::from_row_slice(
            2,
            2,
            &[
                Complex64::new(0.0, 0.0),
                Complex64::new(-1.0, 0.0),
                Complex64::new(1.0, 0.0),
                Complex64::new(0.0, 0.0),
            ],
        );
        let w = sorted(dense_eigenvalues(&h).unwrap());
        assert!((w[0] - Complex64::new(0.0, -1.0)).norm() < 1e-14);
        assert!((w[1] - Complex64::new(0.0, 1.0)).norm() < 1e-14);
    }

    #[test]
    fn trace_of_random_matrix() {
        let n = 12;
        let h = DMatrix::from_fn(n, n, |i, j| {
            Complex64::new(((i * 7 + j * 3) % 5) as f64 - 2.0, ((i + 2 * j) % 3) as f64 - 1.0)
        });
        let w = dense_eigenvalues(&h).unwrap();
        let sum: Complex64 = w.iter().sum();
        assert!((sum - h.trace()).norm() < 1e-10);
    }
}
