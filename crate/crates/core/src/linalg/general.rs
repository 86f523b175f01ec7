//! Eigen-decomposition of general complex square matrices.
//!
//! Householder reduction to Hessenberg form, shifted QR iteration to a
//! complex Schur form `A = Z T Z^H`, back-substitution for the eigenvectors
//! of `T`, and left eigenvectors from the inverse of the right eigenvector
//! matrix so that `L^H R = I` holds by construction.

use ndarray::{Array1, Array2, Axis};
use num_complex::Complex64;

use super::lu::Lu;
use crate::error::{Error, Result};

const ITERATIONS_PER_EIGENVALUE: usize = 60;

/// Eigenvalue-condition bound above which the eigenvector matrix is treated as defective.
pub const DEFECTIVE_CONDITION: f64 = 1e13;

#[derive(Debug, Clone)]
pub struct ComplexEigen {
    /// Sorted by real part, then imaginary part.
    pub values: Array1<Complex64>,
    /// Unit-norm right eigenvectors as columns.
    pub right: Array2<Complex64>,
    /// Left eigenvectors as columns, scaled so that `left^H right = I`.
    pub left: Array2<Complex64>,
    /// Largest eigenvalue condition number `|L_j| |R_j|`.
    pub condition: f64,
}

fn zero() -> Complex64 {
    Complex64::new(0.0, 0.0)
}

fn abs1(z: Complex64) -> f64 {
    z.re.abs() + z.im.abs()
}

pub fn complex_eigen(a: &Array2<Complex64>) -> Result<ComplexEigen> {
    let n = a.nrows();
    if a.ncols() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: a.ncols(),
        });
    }
    if n == 0 {
        return Ok(ComplexEigen {
            values: Array1::zeros(0),
            right: Array2::zeros((0, 0)),
            left: Array2::zeros((0, 0)),
            condition: 1.0,
        });
    }
    let (mut t, mut z) = hessenberg(a);
    schur_in_place(&mut t, &mut z)?;
    let values: Vec<Complex64> = (0..n).map(|i| t[[i, i]]).collect();
    let y = triangular_eigenvectors(&t);
    let mut right = z.dot(&y);
    for mut col in right.axis_iter_mut(Axis(1)) {
        let norm = col.iter().map(|v| v.norm_sqr()).sum::<f64>().sqrt();
        col.mapv_inplace(|v| v / norm);
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| {
        values[i]
            .re
            .total_cmp(&values[j].re)
            .then(values[i].im.total_cmp(&values[j].im))
            .then(i.cmp(&j))
    });
    let values = Array1::from_iter(order.iter().map(|&i| values[i]));
    let right = right.select(Axis(1), &order);

    let lu = Lu::new(&right)?;
    if lu.is_singular() {
        return Err(Error::DefectiveMatrix {
            condition: f64::INFINITY,
        });
    }
    let inv = lu.inverse()?;
    let left = inv.t().mapv(|v| v.conj());
    let condition = left
        .axis_iter(Axis(1))
        .map(|c| c.iter().map(|v| v.norm_sqr()).sum::<f64>().sqrt())
        .fold(1.0, f64::max);
    if !(condition < DEFECTIVE_CONDITION) {
        return Err(Error::DefectiveMatrix { condition });
    }
    Ok(ComplexEigen {
        values,
        right,
        left,
        condition,
    })
}

/// Unitary reduction `a = Q H Q^H` with `H` upper Hessenberg.
fn hessenberg(a: &Array2<Complex64>) -> (Array2<Complex64>, Array2<Complex64>) {
    let n = a.nrows();
    let mut h = a.clone();
    let mut q = Array2::from_diag_elem(n, Complex64::new(1.0, 0.0));
    for k in 0..n.saturating_sub(2) {
        let xnorm = ((k + 1)..n)
            .map(|i| h[[i, k]].norm_sqr())
            .sum::<f64>()
            .sqrt();
        if xnorm == 0.0 {
            continue;
        }
        let x0 = h[[k + 1, k]];
        let phase = if x0.norm() == 0.0 {
            Complex64::new(1.0, 0.0)
        } else {
            x0 / x0.norm()
        };
        let alpha = -phase * xnorm;
        let mut v: Vec<Complex64> = ((k + 1)..n).map(|i| h[[i, k]]).collect();
        v[0] -= alpha;
        let vnorm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if vnorm == 0.0 {
            continue;
        }
        for z in v.iter_mut() {
            *z /= vnorm;
        }
        // h <- (I - 2 v v^H) h
        for j in 0..n {
            let dot: Complex64 = v
                .iter()
                .enumerate()
                .map(|(r, vr)| vr.conj() * h[[k + 1 + r, j]])
                .sum();
            for (r, vr) in v.iter().enumerate() {
                h[[k + 1 + r, j]] -= 2.0 * vr * dot;
            }
        }
        // h <- h (I - 2 v v^H), q <- q (I - 2 v v^H)
        for m in [&mut h, &mut q] {
            for i in 0..n {
                let dot: Complex64 = v
                    .iter()
                    .enumerate()
                    .map(|(r, vr)| m[[i, k + 1 + r]] * vr)
                    .sum();
                for (r, vr) in v.iter().enumerate() {
                    m[[i, k + 1 + r]] -= 2.0 * dot * vr.conj();
                }
            }
        }
        for i in (k + 2)..n {
            h[[i, k]] = zero();
        }
    }
    (h, q)
}

/// Givens rotation `[c s; -conj(s) c]` mapping `(a, b)` to `(r, 0)`.
fn givens(a: Complex64, b: Complex64) -> (f64, Complex64) {
    if b == zero() {
        return (1.0, zero());
    }
    if a == zero() {
        return (0.0, b.conj() / b.norm());
    }
    let na = a.norm();
    let norm = na.hypot(b.norm());
    (na / norm, (a / na) * b.conj() / norm)
}

fn wilkinson_shift(a: Complex64, b: Complex64, c: Complex64, d: Complex64) -> Complex64 {
    // eigenvalue of [[a, b], [c, d]] closest to d
    let half_tr = (a + d) * 0.5;
    let det = a * d - b * c;
    let disc = (half_tr * half_tr - det).sqrt();
    let l1 = half_tr + disc;
    let l2 = half_tr - disc;
    if (l1 - d).norm() <= (l2 - d).norm() {
        l1
    } else {
        l2
    }
}

fn schur_in_place(t: &mut Array2<Complex64>, z: &mut Array2<Complex64>) -> Result<()> {
    let n = t.nrows();
    let norm = t.iter().map(|v| abs1(*v)).fold(0.0, f64::max);
    if norm == 0.0 {
        return Ok(());
    }
    let eps = f64::EPSILON;
    let max_iter = ITERATIONS_PER_EIGENVALUE * n;
    let mut total = 0;
    let mut since_deflation = 0;
    let mut hi = n - 1;
    while hi > 0 {
        let mut l = hi;
        while l > 0 {
            let mut s = abs1(t[[l - 1, l - 1]]) + abs1(t[[l, l]]);
            if s == 0.0 {
                s = norm;
            }
            if abs1(t[[l, l - 1]]) <= eps * s {
                t[[l, l - 1]] = zero();
                break;
            }
            l -= 1;
        }
        if l == hi {
            hi -= 1;
            since_deflation = 0;
            continue;
        }
        total += 1;
        since_deflation += 1;
        if total > max_iter {
            return Err(Error::ConvergenceFailure { iterations: total });
        }
        let mu = if since_deflation % 10 == 0 {
            t[[hi, hi]] + Complex64::new(0.75 * abs1(t[[hi, hi - 1]]), 0.0)
        } else {
            wilkinson_shift(
                t[[hi - 1, hi - 1]],
                t[[hi - 1, hi]],
                t[[hi, hi - 1]],
                t[[hi, hi]],
            )
        };
        for i in l..=hi {
            t[[i, i]] -= mu;
        }
        let mut rotations = Vec::with_capacity(hi - l);
        for k in l..hi {
            let (c, s) = givens(t[[k, k]], t[[k + 1, k]]);
            for j in k..n {
                let x = t[[k, j]];
                let y = t[[k + 1, j]];
                t[[k, j]] = c * x + s * y;
                t[[k + 1, j]] = -s.conj() * x + c * y;
            }
            t[[k + 1, k]] = zero();
            rotations.push((k, c, s));
        }
        for &(k, c, s) in &rotations {
            let rows = (k + 2).min(hi + 1);
            for i in 0..rows {
                let x = t[[i, k]];
                let y = t[[i, k + 1]];
                t[[i, k]] = x * c + y * s.conj();
                t[[i, k + 1]] = -x * s + y * c;
            }
            for i in 0..n {
                let x = z[[i, k]];
                let y = z[[i, k + 1]];
                z[[i, k]] = x * c + y * s.conj();
                z[[i, k + 1]] = -x * s + y * c;
            }
        }
        for i in l..=hi {
            t[[i, i]] += mu;
        }
    }
    for j in 0..n {
        for i in (j + 1)..n {
            t[[i, j]] = zero();
        }
    }
    Ok(())
}

/// Eigenvectors of an upper-triangular matrix, column `k` for `t[k][k]`.
fn triangular_eigenvectors(t: &Array2<Complex64>) -> Array2<Complex64> {
    let n = t.nrows();
    let norm = t.iter().map(|v| abs1(*v)).fold(0.0, f64::max);
    let smin = (f64::EPSILON * norm).max(f64::MIN_POSITIVE);
    let mut y = Array2::zeros((n, n));
    for k in 0..n {
        let lambda = t[[k, k]];
        y[[k, k]] = Complex64::new(1.0, 0.0);
        for i in (0..k).rev() {
            let mut s = zero();
            for j in (i + 1)..=k {
                s += t[[i, j]] * y[[j, k]];
            }
            let mut denom = t[[i, i]] - lambda;
            if abs1(denom) < smin {
                denom = Complex64::new(smin, 0.0);
            }
            y[[i, k]] = -s / denom;
        }
    }
    y
}
