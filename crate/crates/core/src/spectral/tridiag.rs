use crate::error::{Error, Result};

const MAX_SWEEPS: usize = 60;

/// Eigen-decomposition of the real symmetric tridiagonal matrix with
/// diagonal `d` and off-diagonal `e` (`e[i]` couples rows i and i+1) by
/// implicit-shift QL. Returns eigenvalues in nondecreasing order and the
/// matching orthonormal eigenvectors as columns of a row-major `n×n` array.
pub fn symmetric_tridiagonal_eigen(d: &[f64], e: &[f64]) -> Result<(Vec<f64>, Vec<Vec<f64>>)> {
    let n = d.len();
    if e.len() + 1 != n.max(1) {
        return Err(Error::Usage(format!(
            "tridiagonal solver: {} diagonal vs {} off-diagonal entries",
            n,
            e.len()
        )));
    }
    let mut d = d.to_vec();
    let mut e: Vec<f64> = e.iter().copied().chain(std::iter::once(0.0)).collect();
    let mut z: Vec<Vec<f64>> = (0..n)
        .map(|i| (0..n).map(|j| if i == j { 1.0 } else { 0.0 }).collect())
        .collect();

    for l in 0..n {
        let mut sweeps = 0;
        loop {
            let mut m = l;
            while m + 1 < n {
                let dd = d[m].abs() + d[m + 1].abs();
                if e[m].abs() <= f64::EPSILON * dd {
                    break;
                }
                m += 1;
            }
            if m == l {
                break;
            }
            sweeps += 1;
            if sweeps > MAX_SWEEPS {
                return Err(Error::NonConvergence {
                    iterations: MAX_SWEEPS,
                    max_residual: e[l].abs(),
                    residuals: e.clone(),
                });
            }
            let mut g = (d[l + 1] - d[l]) / (2.0 * e[l]);
            let mut r = g.hypot(1.0);
            g = d[m] - d[l] + e[l] / (g + r.copysign(g));
            let (mut s, mut c, mut p) = (1.0, 1.0, 0.0);
            let mut i = m;
            let mut deflated = false;
            while i > l {
                i -= 1;
                let f = s * e[i];
                let b = c * e[i];
                r = f.hypot(g);
                e[i + 1] = r;
                if r == 0.0 {
                    d[i + 1] -= p;
                    e[m] = 0.0;
                    deflated = true;
                    break;
                }
                s = f / r;
                c = g / r;
                g = d[i + 1] - p;
                r = (d[i] - g) * s + 2.0 * c * b;
                p = s * r;
                d[i + 1] = g + p;
                g = c * r - b;
                for row in z.iter_mut() {
                    let f = row[i + 1];
                    row[i + 1] = s * row[i] + c * f;
                    row[i] = c * row[i] - s * f;
                }
            }
            if deflated {
                continue;
            }
            d[l] -= p;
            e[l] = g;
            e[m] = 0.0;
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| d[a].total_cmp(&d[b]));
    let values = order.iter().map(|&k| d[k]).collect();
    let vectors = (0..n).map(|i| order.iter().map(|&k| z[i][k]).collect()).collect();
    Ok((values, vectors))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn check(d: &[f64], e: &[f64]) -> Vec<f64> {
        let (w, z) = symmetric_tridiagonal_eigen(d, e).unwrap();
        let n = d.len();
        for k in 0..n {
            for i in 0..n {
                let mut tv = d[i] * z[i][k];
                if i > 0 {
                    tv += e[i - 1] * z[i - 1][k];
                }
                if i + 1 < n {
                    tv += e[i] * z[i + 1][k];
                }
                assert!((tv - w[k] * z[i][k]).abs() < 1e-12, "residual row {i} vec {k}");
            }
            for l in 0..n {
                let dot: f64 = (0..n).map(|i| z[i][k] * z[i][l]).sum();
                assert!((dot - if k == l { 1.0 } else { 0.0 }).abs() < 1e-12);
            }
        }
        w
    }

    #[test]
    fn open_chain() {
        // 2 cos(kπ/(N+1)), N = 3
        let w = check(&[0.0; 3], &[1.0; 2]);
        let s = 2f64.sqrt();
        for (a, b) in w.iter().zip([-s, 0.0, s]) {
            assert!((a - b).abs() < 1e-14);
        }
    }

    #[test]
    fn single_and_decoupled() {
        assert_eq!(check(&[4.5], &[]), vec![4.5]);
        let w = check(&[3.0, 1.0, 2.0], &[0.0, 0.0]);
        assert_eq!(w, vec![1.0, 2.0, 3.0]);
    }

    #[test]
    fn larger_chain_against_closed_form() {
        let n = 40;
        let w = check(&vec![0.5; n], &vec![-1.0; n - 1]);
        let mut expect: Vec<f64> = (1..=n)
            .map(|k| 0.5 - 2.0 * (k as f64 * std::f64::consts::PI / (n as f64 + 1.0)).cos())
            .collect();
        expect.sort_by(f64::total_cmp);
        for (a, b) in w.iter().zip(expect) {
            assert!((a - b).abs() < 1e-12);
        }
    }
}
