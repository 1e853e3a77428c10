//! Dense symmetric linear algebra for small matrices.
//!
//! Information matrices in this crate are at most 7x7 (two causes, separate
//! shapes, frailty), so a simple row-major `Vec<f64>` store with an unpivoted
//! Cholesky factorization is both fast and transparent. Positive definiteness
//! is enforced through a relative pivot tolerance: a pivot below
//! `PIVOT_TOL` times the largest diagonal entry of the input marks the matrix
//! as numerically singular.

use crate::error::{Error, Result};

/// Relative pivot tolerance for the Cholesky factorization.
pub const PIVOT_TOL: f64 = 1e-12;

/// Dense square matrix, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct Matrix {
    n: usize,
    a: Vec<f64>,
}

impl Matrix {
    /// Zero matrix of order `n`.
    pub fn zeros(n: usize) -> Self {
        Matrix { n, a: vec![0.0; n * n] }
    }

    /// Build from a row-major slice of length `n*n`.
    pub fn from_rows(n: usize, rows: &[f64]) -> Self {
        assert_eq!(rows.len(), n * n, "row-major data must have n*n entries");
        Matrix { n, a: rows.to_vec() }
    }

    /// Matrix order.
    pub fn order(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.a[i * self.n + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: f64) {
        self.a[i * self.n + j] = v;
    }

    /// Rank-one update `A += w * x * x^T` (the accumulation step for
    /// information matrices).
    pub fn add_outer(&mut self, x: &[f64], w: f64) {
        assert_eq!(x.len(), self.n);
        for i in 0..self.n {
            let wxi = w * x[i];
            for j in 0..self.n {
                self.a[i * self.n + j] += wxi * x[j];
            }
        }
    }

    /// Scale every entry by `c`.
    pub fn scale(&mut self, c: f64) {
        for v in &mut self.a {
            *v *= c;
        }
    }

    /// Quadratic form `x^T A x`.
    pub fn quad_form(&self, x: &[f64]) -> f64 {
        assert_eq!(x.len(), self.n);
        let mut acc = 0.0;
        for i in 0..self.n {
            let mut row = 0.0;
            for j in 0..self.n {
                row += self.get(i, j) * x[j];
            }
            acc += x[i] * row;
        }
        acc
    }

    /// Largest absolute asymmetry `|A - A^T|` entry (diagnostic for tests).
    pub fn asymmetry(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for i in 0..self.n {
            for j in (i + 1)..self.n {
                worst = worst.max((self.get(i, j) - self.get(j, i)).abs());
            }
        }
        worst
    }

    /// Lower-triangular Cholesky factor `L` with `A = L L^T`.
    ///
    /// Fails with a singularity error when a pivot falls below
    /// [`PIVOT_TOL`] relative to the largest diagonal entry of `A`.
    pub fn cholesky(&self) -> Result<Matrix> {
        let n = self.n;
        let max_diag = (0..n).map(|i| self.get(i, i)).fold(0.0_f64, f64::max);
        if !(max_diag > 0.0) || !max_diag.is_finite() {
            return Err(Error::Numerical(
                "matrix is singular: no positive diagonal entry".into(),
            ));
        }
        let floor = PIVOT_TOL * max_diag;

        let mut l = Matrix::zeros(n);
        for i in 0..n {
            for j in 0..=i {
                let mut sum = self.get(i, j);
                for k in 0..j {
                    sum -= l.get(i, k) * l.get(j, k);
                }
                if i == j {
                    if sum <= floor || !sum.is_finite() {
                        return Err(Error::Numerical(format!(
                            "matrix is singular: pivot {sum:.3e} at row {i} falls below \
                             tolerance {floor:.3e} (relative tolerance {PIVOT_TOL:.0e})"
                        )));
                    }
                    l.set(i, j, sum.sqrt());
                } else {
                    l.set(i, j, sum / l.get(j, j));
                }
            }
        }
        Ok(l)
    }

    /// Solve `A x = b` through the Cholesky factorization.
    pub fn solve(&self, b: &[f64]) -> Result<Vec<f64>> {
        assert_eq!(b.len(), self.n);
        let l = self.cholesky()?;
        Ok(l.cholesky_solve(b))
    }

    /// Inverse through the Cholesky factorization.
    pub fn inverse(&self) -> Result<Matrix> {
        let n = self.n;
        let l = self.cholesky()?;
        let mut inv = Matrix::zeros(n);
        let mut e = vec![0.0; n];
        for col in 0..n {
            e.iter_mut().for_each(|v| *v = 0.0);
            e[col] = 1.0;
            let x = l.cholesky_solve(&e);
            for row in 0..n {
                inv.set(row, col, x[row]);
            }
        }
        // Symmetrize to wash out the last-bit asymmetry of column solves.
        for i in 0..n {
            for j in (i + 1)..n {
                let s = 0.5 * (inv.get(i, j) + inv.get(j, i));
                inv.set(i, j, s);
                inv.set(j, i, s);
            }
        }
        Ok(inv)
    }

    /// Given `self = L` (lower factor), solve `L L^T x = b`.
    fn cholesky_solve(&self, b: &[f64]) -> Vec<f64> {
        let n = self.n;
        // Forward substitution L y = b.
        let mut y = vec![0.0; n];
        for i in 0..n {
            let mut sum = b[i];
            for k in 0..i {
                sum -= self.get(i, k) * y[k];
            }
            y[i] = sum / self.get(i, i);
        }
        // Back substitution L^T x = y.
        let mut x = vec![0.0; n];
        for i in (0..n).rev() {
            let mut sum = y[i];
            for k in (i + 1)..n {
                sum -= self.get(k, i) * x[k];
            }
            x[i] = sum / self.get(i, i);
        }
        x
    }

    /// Diagonal entries.
    pub fn diagonal(&self) -> Vec<f64> {
        (0..self.n).map(|i| self.get(i, i)).collect()
    }
}
