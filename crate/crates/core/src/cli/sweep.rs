use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::FromPrimitive;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::hamiltonian::ChainModel;
use crate::hamiltonian::Evaluated;
use crate::spectral::{eigen_band, SpectralOptions};

/// Eigenvalue branches over a parameter grid.
#[derive(Clone, Debug, PartialEq)]
pub struct SweepTable {
    pub parameter: String,
    pub grid: Vec<f64>,
    /// `rows[i][b]` is branch b at `grid[i]`.
    pub rows: Vec<Vec<Complex64>>,
    /// Grid points dropped because an entry has a pole there.
    pub clipped: Vec<f64>,
}

impl SweepTable {
    pub fn max_imag(&self) -> f64 {
        self.rows.iter().flatten().map(|z| z.im.abs()).fold(0.0, f64::max)
    }
}

/// Parse "lo:hi:steps".
pub fn parse_range(text: &str) -> Result<(f64, f64, usize)> {
    let parts: Vec<&str> = text.split(':').collect();
    let bad = || Error::Usage(format!("range must look like lo:hi:steps, got {text:?}"));
    if parts.len() != 3 {
        return Err(bad());
    }
    let lo: f64 = parts[0].trim().parse().map_err(|_| bad())?;
    let hi: f64 = parts[1].trim().parse().map_err(|_| bad())?;
    let steps: usize = parts[2].trim().parse().map_err(|_| bad())?;
    if !(lo.is_finite() && hi.is_finite()) || steps == 0 {
        return Err(bad());
    }
    Ok((lo, hi, steps))
}

pub fn linspace(lo: f64, hi: f64, steps: usize) -> Vec<f64> {
    if steps == 1 {
        return vec![lo];
    }
    (0..steps)
        .map(|k| lo + (hi - lo) * k as f64 / (steps - 1) as f64)
        .collect()
}

/// Spectrum at every grid point (in parallel), then branches paired by
/// continuation. Entries are evaluated exactly but the roots are found in
/// floating point: grid values carry 2⁵²-sized denominators, which makes the
/// exact root path needlessly slow for plotting.
pub fn sweep(model: &ChainModel, grid: &[f64], opts: &SpectralOptions) -> Result<SweepTable> {
    if !model.is_symbolic() {
        return Err(Error::Usage("sweep needs a model that depends on its parameter".into()));
    }
    let mut points = Vec::new();
    let mut clipped = Vec::new();
    for &x in grid {
        let q = BigRational::from_f64(x).ok_or_else(|| Error::Usage(format!("bad grid value {x}")))?;
        if model.has_pole_at(&q) {
            clipped.push(x);
        } else {
            points.push((x, q));
        }
    }
    let spectra = points
        .par_iter()
        .map(|(_, q)| {
            let numeric = Evaluated::Numeric(model.evaluate(Some(q))?.to_c64());
            Ok(eigen_band(&numeric, opts)?.eigenvalues)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(SweepTable {
        parameter: model.parameter_or_default().to_string(),
        grid: points.iter().map(|p| p.0).collect(),
        rows: pair_branches(spectra),
        clipped,
    })
}

/// Order each row so that column b continues branch b of the previous
/// row: greedy nearest-neighbour matching, with near-ties (as at a
/// degeneracy) decided by distance to the linear extrapolation of the
/// last two steps.
pub fn pair_branches(rows: Vec<Vec<Complex64>>) -> Vec<Vec<Complex64>> {
    let mut out: Vec<Vec<Complex64>> = Vec::with_capacity(rows.len());
    for row in rows {
        let ordered = match out.len() {
            0 => {
                let mut r = row;
                r.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));
                r
            }
            k => {
                let prev = &out[k - 1];
                let predicted: Vec<Complex64> = if k >= 2 {
                    prev.iter().zip(&out[k - 2]).map(|(p, pp)| 2.0 * p - pp).collect()
                } else {
                    prev.clone()
                };
                match_to(prev, &predicted, row)
            }
        };
        out.push(ordered);
    }
    out
}

fn match_to(prev: &[Complex64], predicted: &[Complex64], row: Vec<Complex64>) -> Vec<Complex64> {
    let n = prev.len();
    let scale = prev.iter().map(|z| z.norm()).fold(1.0, f64::max);
    let tie = 1e-9 * scale;
    let mut pairs: Vec<(usize, usize, f64, f64)> = Vec::with_capacity(n * row.len());
    for (b, p) in prev.iter().enumerate() {
        for (i, z) in row.iter().enumerate() {
            pairs.push((b, i, (z - p).norm(), (z - predicted[b]).norm()));
        }
    }
    pairs.sort_by(|a, b| a.2.total_cmp(&b.2));
    let mut branch_done = vec![false; n];
    let mut value_done = vec![false; row.len()];
    let mut result = vec![Complex64::new(f64::NAN, f64::NAN); n];
    loop {
        let open: Vec<&(usize, usize, f64, f64)> =
            pairs.iter().filter(|p| !branch_done[p.0] && !value_done[p.1]).collect();
        let Some(first) = open.first() else { break };
        let best = open
            .iter()
            .take_while(|p| p.2 <= first.2 + tie)
            .min_by(|a, b| a.3.total_cmp(&b.3))
            .expect("non-empty");
        branch_done[best.0] = true;
        value_done[best.1] = true;
        result[best.0] = row[best.1];
    }
    result
}
