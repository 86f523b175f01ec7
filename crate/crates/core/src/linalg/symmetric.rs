//! Dense real-symmetric eigensolver (cyclic Jacobi rotations).
//!
//! Jacobi is slower than tridiagonal QL for large matrices but gives small
//! eigenvalues to full relative accuracy, which matters for the near-zero
//! edge modes. Sweeps visit pivots in a fixed row-major order, so identical
//! input bits produce identical output bits.

use ndarray::{Array1, Array2};

use crate::error::{Error, Result};

const MAX_SWEEPS: usize = 100;

/// Eigen-decomposition `a = V diag(w) V^T` with `w` ascending.
#[derive(Debug, Clone)]
pub struct SymmetricEigen {
    pub values: Array1<f64>,
    /// Column `m` is the eigenvector of `values[m]`.
    pub vectors: Array2<f64>,
    pub sweeps: usize,
}

pub fn symmetric_eigen(a: &Array2<f64>) -> Result<SymmetricEigen> {
    let n = a.nrows();
    if a.ncols() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: a.ncols(),
        });
    }
    let mut m: Vec<f64> = a.iter().copied().collect();
    let mut v = vec![0.0; n * n];
    for i in 0..n {
        v[i * n + i] = 1.0;
    }
    let mut d: Vec<f64> = (0..n).map(|i| m[i * n + i]).collect();
    let mut b = d.clone();
    let mut z = vec![0.0; n];

    let mut sweeps = 0;
    loop {
        let off: f64 = (0..n)
            .flat_map(|p| ((p + 1)..n).map(move |q| (p, q)))
            .map(|(p, q)| m[p * n + q].abs())
            .sum();
        if off == 0.0 {
            break;
        }
        if sweeps == MAX_SWEEPS {
            return Err(Error::ConvergenceFailure { iterations: sweeps });
        }
        sweeps += 1;
        let thresh = if sweeps < 4 {
            0.2 * off / (n * n) as f64
        } else {
            0.0
        };
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = m[p * n + q];
                let g = 100.0 * apq.abs();
                // Drop elements that are below rounding relative to both diagonal entries.
                if sweeps > 4 && d[p].abs() + g == d[p].abs() && d[q].abs() + g == d[q].abs() {
                    m[p * n + q] = 0.0;
                    continue;
                }
                if apq.abs() <= thresh {
                    continue;
                }
                let h = d[q] - d[p];
                let t = if h.abs() + g == h.abs() {
                    apq / h
                } else {
                    let theta = 0.5 * h / apq;
                    let t = 1.0 / (theta.abs() + (1.0 + theta * theta).sqrt());
                    if theta < 0.0 {
                        -t
                    } else {
                        t
                    }
                };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = t * c;
                let tau = s / (1.0 + c);
                let h = t * apq;
                z[p] -= h;
                z[q] += h;
                d[p] -= h;
                d[q] += h;
                m[p * n + q] = 0.0;
                let rotate = |m: &mut [f64], i: usize, j: usize, k: usize, l: usize| {
                    let g = m[i * n + j];
                    let h = m[k * n + l];
                    m[i * n + j] = g - s * (h + g * tau);
                    m[k * n + l] = h + s * (g - h * tau);
                };
                for j in 0..p {
                    rotate(&mut m, j, p, j, q);
                }
                for j in (p + 1)..q {
                    rotate(&mut m, p, j, j, q);
                }
                for j in (q + 1)..n {
                    rotate(&mut m, p, j, q, j);
                }
                for j in 0..n {
                    let g = v[j * n + p];
                    let h = v[j * n + q];
                    v[j * n + p] = g - s * (h + g * tau);
                    v[j * n + q] = h + s * (g - h * tau);
                }
            }
        }
        for p in 0..n {
            b[p] += z[p];
            d[p] = b[p];
            z[p] = 0.0;
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| d[i].total_cmp(&d[j]).then(i.cmp(&j)));
    let values = Array1::from_iter(order.iter().map(|&i| d[i]));
    let mut vectors = Array2::zeros((n, n));
    for (col, &src) in order.iter().enumerate() {
        let sign = sign_convention(&v, n, src);
        for row in 0..n {
            vectors[[row, col]] = sign * v[row * n + src];
        }
    }
    Ok(SymmetricEigen {
        values,
        vectors,
        sweeps,
    })
}

/// Sign making the largest-magnitude entry of column `col` positive; ties
/// (within 1e-12 relative) go to the lowest row index.
fn sign_convention(v: &[f64], n: usize, col: usize) -> f64 {
    let max = (0..n).map(|r| v[r * n + col].abs()).fold(0.0, f64::max);
    let pivot = (0..n)
        .find(|&r| v[r * n + col].abs() >= max * (1.0 - 1e-12))
        .unwrap_or(0);
    if v[pivot * n + col] < 0.0 {
        -1.0
    } else {
        1.0
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use ndarray::array;

    #[test]
    fn two_by_two_hopping() {
        let a = 0.7;
        let eig = symmetric_eigen(&array![[0.0, a], [a, 0.0]]).unwrap();
        assert!((eig.values[0] + a).abs() < 1e-15);
        assert!((eig.values[1] - a).abs() < 1e-15);
        let r = std::f64::consts::FRAC_1_SQRT_2;
        // lower mode (1,-1)/sqrt2, upper (1,1)/sqrt2, with the first entry positive by the tie rule
        assert!((eig.vectors[[0, 0]] - r).abs() < 1e-15);
        assert!((eig.vectors[[1, 0]] + r).abs() < 1e-15);
        assert!((eig.vectors[[0, 1]] - r).abs() < 1e-15);
        assert!((eig.vectors[[1, 1]] - r).abs() < 1e-15);
    }

    #[test]
    fn diagonal_input_is_returned_sorted() {
        let eig =
            symmetric_eigen(&array![[3.0, 0.0, 0.0], [0.0, -1.0, 0.0], [0.0, 0.0, 2.0]]).unwrap();
        assert_eq!(eig.values.to_vec(), vec![-1.0, 2.0, 3.0]);
        assert_eq!(eig.sweeps, 0);
    }

    #[test]
    fn rejects_non_square() {
        assert!(matches!(
            symmetric_eigen(&Array2::zeros((2, 3))),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn bitwise_deterministic() {
        let n = 9;
        let a = Array2::from_shape_fn((n, n), |(i, j)| {
            ((i * j + i + j) as f64 * 0.37).sin() + ((i + j) as f64).cos()
        });
        let a = &a + &a.t();
        let e1 = symmetric_eigen(&a).unwrap();
        let e2 = symmetric_eigen(&a).unwrap();
        assert_eq!(e1.values, e2.values);
        assert_eq!(e1.vectors, e2.vectors);
    }
}
