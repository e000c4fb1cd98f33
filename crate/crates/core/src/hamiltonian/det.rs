use crate::error::{Error, Result};
use crate::numerics::Ring;

/// Size guard for [`brute_det`]: 2^12 · 12 ring multiplications.
pub const BRUTE_DET_MAX: usize = 12;

/// Determinant by Laplace expansion over column subsets (dynamic
/// programming on bitmasks). Independent of the elimination and recurrence
/// code it is used to check.
pub fn brute_det<R: Ring>(m: &[Vec<R>]) -> Result<R> {
    let n = m.len();
    if n > BRUTE_DET_MAX {
        return Err(Error::Usage(format!(
            "brute-force determinant limited to {BRUTE_DET_MAX}x{BRUTE_DET_MAX}, got {n}x{n}"
        )));
    }
    if m.iter().any(|row| row.len() != n) {
        return Err(Error::Usage("determinant of a non-square matrix".into()));
    }
    // partial[mask]: signed sum over assignments of the first popcount(mask)
    // rows to the columns in mask
    let mut partial: Vec<Option<R>> = vec![None; 1 << n];
    partial[0] = Some(R::one());
    for mask in 0usize..(1 << n) {
        let Some(acc) = partial[mask].take() else { continue };
        let row = mask.count_ones() as usize;
        if row == n {
            partial[mask] = Some(acc);
            continue;
        }
        for col in 0..n {
            if mask & (1 << col) != 0 || m[row][col].is_zero() {
                continue;
            }
            let inversions = (mask >> (col + 1)).count_ones();
            let term = acc.mul(&m[row][col]);
            let term = if inversions % 2 == 1 { term.neg() } else { term };
            let slot = &mut partial[mask | (1 << col)];
            *slot = Some(match slot.take() {
                Some(s) => s.add(&term),
                None => term,
            });
        }
        partial[mask] = Some(acc);
    }
    Ok(partial[(1 << n) - 1].clone().unwrap_or_else(R::zero))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::{BigRational, GaussianRational};

    fn q(n: i64) -> BigRational {
        BigRational::from_integer(n.into())
    }

    #[test]
    fn identity_and_singular() {
        let id: Vec<Vec<BigRational>> = (0..3).map(|i| (0..3).map(|j| q((i == j) as i64)).collect()).collect();
        assert_eq!(brute_det(&id).unwrap(), q(1));
        let dup = vec![vec![q(1), q(2), q(3)], vec![q(4), q(5), q(6)], vec![q(1), q(2), q(3)]];
        assert_eq!(brute_det(&dup).unwrap(), q(0));
    }

    #[test]
    fn permutation_sign() {
        let m = vec![vec![q(0), q(1), q(0)], vec![q(0), q(0), q(1)], vec![q(1), q(0), q(0)]];
        assert_eq!(brute_det(&m).unwrap(), q(1));
        let swap = vec![vec![q(0), q(1)], vec![q(1), q(0)]];
        assert_eq!(brute_det(&swap).unwrap(), q(-1));
    }

    #[test]
    fn size_guard() {
        let big = vec![vec![GaussianRational::one(); 13]; 13];
        assert!(matches!(brute_det(&big), Err(Error::Usage(_))));
    }
}
