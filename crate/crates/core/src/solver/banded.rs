//! Cholesky factorization of symmetric positive definite band matrices.

use crate::error::{Error, Result};
use crate::scalar::Real;

/// Lower Cholesky factor `L` of a band matrix, stored row-wise with
/// `bandwidth + 1` entries per row (`L[i][j]` for `i − b ≤ j ≤ i`).
#[derive(Debug, Clone)]
pub struct BandedCholesky<T> {
    n: usize,
    b: usize,
    band: Vec<T>,
}

impl<T: Real> BandedCholesky<T> {
    /// Factors the matrix with entries `entry(i, j)` for `j ≤ i ≤ j + b`.
    pub fn factor<F: Fn(usize, usize) -> T>(n: usize, b: usize, entry: F) -> Result<Self> {
        let w = b + 1;
        let mut band = vec![T::zero(); n * w];
        for i in 0..n {
            let lo = i.saturating_sub(b);
            for j in lo..=i {
                let mut sum = entry(i, j);
                let k0 = lo.max(j.saturating_sub(b));
                let row_i = &band[i * w..];
                let row_j = &band[j * w..];
                for k in k0..j {
                    sum = sum - row_i[k + b - i] * row_j[k + b - j];
                }
                if i == j {
                    if !(sum > T::zero()) {
                        return Err(Error::solver(
                            format!("matrix is not positive definite at row {i}"),
                            Vec::new(),
                        ));
                    }
                    band[i * w + b] = sum.sqrt();
                } else {
                    band[i * w + j + b - i] = sum / band[j * w + b];
                }
            }
        }
        Ok(Self { n, b, band })
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    /// Solves `L Lᵀ x = rhs` in place.
    #[allow(clippy::needless_range_loop)]
    pub fn solve_in_place(&self, x: &mut [T]) {
        let (n, b, w) = (self.n, self.b, self.b + 1);
        for i in 0..n {
            let mut sum = x[i];
            for k in i.saturating_sub(b)..i {
                sum = sum - self.band[i * w + k + b - i] * x[k];
            }
            x[i] = sum / self.band[i * w + b];
        }
        for i in (0..n).rev() {
            let mut sum = x[i];
            for k in i + 1..(i + b + 1).min(n) {
                sum = sum - self.band[k * w + i + b - k] * x[k];
            }
            x[i] = sum / self.band[i * w + b];
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn solves_tridiagonal_system() {
        let n = 50;
        let entry = |i: usize, j: usize| {
            if i == j {
                4.0
            } else if i == j + 1 {
                -1.0
            } else {
                0.0
            }
        };
        let chol = BandedCholesky::factor(n, 1, entry).unwrap();
        let truth: Vec<f64> = (0..n).map(|i| (i as f64 * 0.3).sin()).collect();
        let mut rhs: Vec<f64> = (0..n)
            .map(|i| {
                let mut v = 4.0 * truth[i];
                if i > 0 {
                    v -= truth[i - 1];
                }
                if i + 1 < n {
                    v -= truth[i + 1];
                }
                v
            })
            .collect();
        chol.solve_in_place(&mut rhs);
        for (a, b) in rhs.iter().zip(&truth) {
            assert!((a - b).abs() < 1e-13);
        }
    }

    #[test]
    fn solves_wide_band_system() {
        // 2D five-point Laplacian plus identity on a 7×5 grid.
        let (nx, ny) = (7, 5);
        let n = nx * ny;
        let entry = |i: usize, j: usize| {
            if i == j {
                5.0
            } else if i == j + 1 && !i.is_multiple_of(ny) || i == j + ny {
                -1.0
            } else {
                0.0
            }
        };
        let chol = BandedCholesky::factor(n, ny, entry).unwrap();
        let x: Vec<f64> = (0..n).map(|i| 1.0 + i as f64 * 0.01).collect();
        let full = |i: usize, j: usize| if i >= j { entry(i, j) } else { entry(j, i) };
        let mut rhs: Vec<f64> = (0..n).map(|i| (0..n).map(|j| full(i, j) * x[j]).sum()).collect();
        chol.solve_in_place(&mut rhs);
        for (a, b) in rhs.iter().zip(&x) {
            assert!((a - b).abs() < 1e-13);
        }
    }

    #[test]
    fn detects_indefinite_matrix() {
        let err = BandedCholesky::factor(2, 1, |i, j| if i == j { 1.0 } else { 2.0 });
        assert!(matches!(err, Err(Error::Solver { .. })));
    }
}
