//! LU factorization with partial pivoting for complex square matrices.

use ndarray::Array2;
use num_complex::Complex64;

use crate::error::{Error, Result};

#[derive(Debug, Clone)]
pub struct Lu {
    n: usize,
    lu: Array2<Complex64>,
    perm: Vec<usize>,
    /// Smallest |pivot| / largest |entry| seen during elimination.
    pub pivot_ratio: f64,
}

impl Lu {
    pub fn new(a: &Array2<Complex64>) -> Result<Self> {
        let n = a.nrows();
        if a.ncols() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: a.ncols(),
            });
        }
        let mut lu = a.clone();
        let mut perm: Vec<usize> = (0..n).collect();
        let scale = a.iter().map(|z| z.norm()).fold(0.0, f64::max);
        let mut min_pivot = f64::INFINITY;
        for k in 0..n {
            let mut p = k;
            let mut best = lu[[k, k]].norm();
            for i in (k + 1)..n {
                let v = lu[[i, k]].norm();
                if v > best {
                    best = v;
                    p = i;
                }
            }
            min_pivot = min_pivot.min(best);
            if best == 0.0 {
                continue;
            }
            if p != k {
                for j in 0..n {
                    lu.swap([k, j], [p, j]);
                }
                perm.swap(k, p);
            }
            let pivot = lu[[k, k]];
            for i in (k + 1)..n {
                let f = lu[[i, k]] / pivot;
                lu[[i, k]] = f;
                if f == Complex64::new(0.0, 0.0) {
                    continue;
                }
                for j in (k + 1)..n {
                    let u = lu[[k, j]];
                    lu[[i, j]] -= f * u;
                }
            }
        }
        let pivot_ratio = if scale > 0.0 { min_pivot / scale } else { 0.0 };
        Ok(Self {
            n,
            lu,
            perm,
            pivot_ratio,
        })
    }

    pub fn is_singular(&self) -> bool {
        !(self.pivot_ratio > 0.0) || !self.pivot_ratio.is_finite()
    }

    /// Solves `a x = b` for every column of `b`.
    pub fn solve(&self, b: &Array2<Complex64>) -> Result<Array2<Complex64>> {
        let n = self.n;
        if b.nrows() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: b.nrows(),
            });
        }
        if self.is_singular() {
            return Err(Error::DefectiveMatrix {
                condition: f64::INFINITY,
            });
        }
        let mut x = Array2::zeros(b.raw_dim());
        for c in 0..b.ncols() {
            let mut y: Vec<Complex64> = (0..n).map(|i| b[[self.perm[i], c]]).collect();
            for i in 0..n {
                let s: Complex64 = (0..i).map(|j| self.lu[[i, j]] * y[j]).sum();
                y[i] -= s;
            }
            for i in (0..n).rev() {
                let s: Complex64 = ((i + 1)..n).map(|j| self.lu[[i, j]] * y[j]).sum();
                y[i] = (y[i] - s) / self.lu[[i, i]];
            }
            for i in 0..n {
                x[[i, c]] = y[i];
            }
        }
        Ok(x)
    }

    pub fn inverse(&self) -> Result<Array2<Complex64>> {
        self.solve(&Array2::from_diag_elem(self.n, Complex64::new(1.0, 0.0)))
    }
}
