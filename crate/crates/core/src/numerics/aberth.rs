//! Simultaneous polynomial root finding (Aberth–Ehrlich) and root
//! clustering by Weierstrass inclusion discs.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug)]
pub struct AberthOptions {
    /// Relative backward-error target: |p(z)| ≤ tol · Σ|a_k||z|^k.
    pub tol: f64,
    pub max_iter: usize,
}

impl Default for AberthOptions {
    fn default() -> Self {
        AberthOptions {
            tol: 1e-12,
            max_iter: 200,
        }
    }
}

/// All complex roots of `Σ coeffs[k] z^k`, sorted by real then imaginary
/// part. Exact zero roots are deflated first; repeated roots come back as
/// tight clusters (see [`cluster_roots`]).
pub fn aberth_roots(coeffs: &[Complex64], tol: f64) -> Result<Vec<Complex64>> {
    aberth_roots_with(
        coeffs,
        AberthOptions {
            tol,
            ..AberthOptions::default()
        },
    )
}

pub fn aberth_roots_with(coeffs: &[Complex64], opts: AberthOptions) -> Result<Vec<Complex64>> {
    let coeffs = trim(coeffs);
    let n = coeffs.len().saturating_sub(1);
    if n == 0 {
        return Err(Error::Domain("root finding needs degree >= 1".into()));
    }
    let lc = coeffs[n];
    if lc.norm() <= opts.tol {
        return Err(Error::Domain(format!(
            "leading coefficient {lc} below tolerance {}",
            opts.tol
        )));
    }
    let zeros = coeffs.iter().take_while(|c| c.norm() == 0.0).count();
    let reduced = &coeffs[zeros..];
    let mut roots = vec![Complex64::new(0.0, 0.0); zeros];
    roots.extend(iterate(reduced, opts)?);
    sort_roots(&mut roots);
    Ok(roots)
}

fn trim(coeffs: &[Complex64]) -> &[Complex64] {
    let mut end = coeffs.len();
    while end > 0 && coeffs[end - 1].norm() == 0.0 {
        end -= 1;
    }
    &coeffs[..end]
}

pub(crate) fn sort_roots(roots: &mut [Complex64]) {
    roots.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));
}

fn horner(coeffs: &[Complex64], z: Complex64) -> (Complex64, Complex64) {
    let mut p = Complex64::new(0.0, 0.0);
    let mut dp = Complex64::new(0.0, 0.0);
    for c in coeffs.iter().rev() {
        dp = dp * z + p;
        p = p * z + c;
    }
    (p, dp)
}

fn scale_at(coeffs: &[Complex64], z: Complex64) -> f64 {
    let r = z.norm();
    coeffs.iter().rev().fold(0.0, |acc, c| acc * r + c.norm())
}

/// Positive root of |a_n| x^n − Σ_{k<n} |a_k| x^k: every root of the
/// polynomial lies in the disc of this radius.
fn cauchy_radius(coeffs: &[Complex64]) -> f64 {
    let n = coeffs.len() - 1;
    let lc = coeffs[n].norm();
    let f = |x: f64| {
        let mut v = lc;
        let mut dv = 0.0;
        for k in (0..n).rev() {
            dv = dv * x + v;
            v = v * x - coeffs[k].norm();
        }
        (v, dv)
    };
    // start above the root: 1 + max |a_k / a_n|
    let mut x = 1.0 + coeffs[..n].iter().map(|c| c.norm() / lc).fold(0.0, f64::max);
    for _ in 0..100 {
        let (v, dv) = f(x);
        if dv <= 0.0 {
            break;
        }
        let next = x - v / dv;
        if !(next < x) || next <= 0.0 {
            break;
        }
        x = next;
    }
    x.max(f64::MIN_POSITIVE)
}

fn iterate(coeffs: &[Complex64], opts: AberthOptions) -> Result<Vec<Complex64>> {
    let n = coeffs.len() - 1;
    if n == 0 {
        return Ok(Vec::new());
    }
    if n == 1 {
        return Ok(vec![-coeffs[0] / coeffs[1]]);
    }
    let radius = cauchy_radius(coeffs);
    let mut z: Vec<Complex64> = (0..n)
        .map(|k| Complex64::from_polar(radius, 2.0 * PI * k as f64 / n as f64 + 0.4))
        .collect();
    let mut done = vec![false; n];
    let noise = 4.0 * n as f64 * f64::EPSILON;
    for _ in 0..opts.max_iter {
        for i in 0..n {
            if done[i] {
                continue;
            }
            let (p, dp) = horner(coeffs, z[i]);
            if p.norm() <= noise * scale_at(coeffs, z[i]) {
                done[i] = true;
                continue;
            }
            let ratio = if dp.norm() == 0.0 {
                // flat spot: nudge
                Complex64::new(radius * 1e-3, radius * 1e-3)
            } else {
                p / dp
            };
            let s: Complex64 = (0..n)
                .filter(|&j| j != i)
                .map(|j| {
                    let d = z[i] - z[j];
                    if d.norm() == 0.0 {
                        Complex64::new(0.0, 0.0)
                    } else {
                        d.inv()
                    }
                })
                .sum();
            let w = ratio / (Complex64::new(1.0, 0.0) - ratio * s);
            z[i] -= w;
            if w.norm() <= f64::EPSILON * z[i].norm() {
                done[i] = true;
            }
        }
        if done.iter().all(|&d| d) {
            return Ok(z);
        }
    }
    let residuals: Vec<f64> = z
        .iter()
        .map(|&zi| horner(coeffs, zi).0.norm() / scale_at(coeffs, zi).max(f64::MIN_POSITIVE))
        .collect();
    let max_residual = residuals.iter().cloned().fold(0.0, f64::max);
    if max_residual <= opts.tol {
        return Ok(z);
    }
    Err(Error::NonConvergence {
        iterations: opts.max_iter,
        max_residual,
        residuals,
    })
}

/// A group of computed roots that approximate one multiple root (or a set
/// of roots too close to tell apart).
#[derive(Clone, Debug, PartialEq)]
pub struct RootCluster {
    pub center: Complex64,
    pub members: Vec<Complex64>,
}

impl RootCluster {
    pub fn multiplicity(&self) -> usize {
        self.members.len()
    }
}

/// A root of multiplicity m is a simple root of p^(m−1); Newton on that
/// derivative recovers the center far more accurately than the mean of the
/// scattered cluster members.
fn polish_center(coeffs: &[Complex64], mean: Complex64, members: &[Complex64]) -> Complex64 {
    let m = members.len();
    if m < 2 || m >= coeffs.len() {
        return mean;
    }
    let mut d: Vec<Complex64> = coeffs.to_vec();
    for _ in 0..m - 1 {
        d = d.iter().enumerate().skip(1).map(|(k, c)| c * k as f64).collect();
    }
    let spread = members.iter().map(|z| (z - mean).norm()).fold(0.0, f64::max);
    let mut z = mean;
    for _ in 0..50 {
        let (p, dp) = horner(&d, z);
        if dp.norm() == 0.0 {
            return mean;
        }
        let step = p / dp;
        z -= step;
        if step.norm() <= 2.0 * f64::EPSILON * z.norm().max(1.0) {
            break;
        }
    }
    if (z - mean).norm() <= 2.0 * spread + f64::EPSILON {
        z
    } else {
        mean
    }
}

/// Group roots into clusters. Two roots share a cluster when their
/// Weierstrass inclusion discs D(z_i, n|W_i|) overlap (each connected
/// component of those discs holds exactly as many true roots as discs) or
/// when they lie within `floor · max(1, |z|)` of each other.
pub fn cluster_roots(coeffs: &[Complex64], roots: &[Complex64], floor: f64) -> Vec<RootCluster> {
    let coeffs = trim(coeffs);
    let n = roots.len();
    if n == 0 {
        return Vec::new();
    }
    let lc = coeffs[coeffs.len() - 1];
    let radii: Vec<f64> = (0..n)
        .map(|i| {
            let zi = roots[i];
            let p = horner(coeffs, zi).0.norm() + 4.0 * n as f64 * f64::EPSILON * scale_at(coeffs, zi);
            let mut denom = lc.norm();
            for (j, zj) in roots.iter().enumerate() {
                let d = (zi - zj).norm();
                if j != i && d > 0.0 {
                    denom *= d;
                }
            }
            if denom == 0.0 {
                f64::INFINITY
            } else {
                n as f64 * p / denom
            }
        })
        .collect();
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(parent: &mut [usize], i: usize) -> usize {
        let mut r = i;
        while parent[r] != r {
            r = parent[r];
        }
        parent[i] = r;
        r
    }
    for i in 0..n {
        for j in i + 1..n {
            let d = (roots[i] - roots[j]).norm();
            let near = d <= floor * roots[i].norm().max(1.0) || d <= radii[i] + radii[j];
            if near {
                let (a, b) = (find(&mut parent, i), find(&mut parent, j));
                parent[a] = b;
            }
        }
    }
    let mut groups: Vec<(usize, Vec<Complex64>)> = Vec::new();
    for i in 0..n {
        let r = find(&mut parent, i);
        match groups.iter_mut().find(|(k, _)| *k == r) {
            Some((_, g)) => g.push(roots[i]),
            None => groups.push((r, vec![roots[i]])),
        }
    }
    let mut clusters: Vec<RootCluster> = groups
        .into_iter()
        .map(|(_, members)| {
            let mean = members.iter().sum::<Complex64>() / members.len() as f64;
            let center = polish_center(coeffs, mean, &members);
            RootCluster { center, members }
        })
        .collect();
    clusters.sort_by(|a, b| {
        a.center
            .re
            .total_cmp(&b.center.re)
            .then(a.center.im.total_cmp(&b.center.im))
    });
    clusters
}
