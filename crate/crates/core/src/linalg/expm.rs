//! Matrix exponential by scaling and squaring with a [6/6] Padé approximant.

use ndarray::Array2;
use num_complex::Complex64;

use super::lu::Lu;
use crate::error::Result;

// Padé [6/6] numerator coefficients; the denominator uses the same with alternating signs.
const PADE6: [f64; 7] = [
    1.0,
    1.0 / 2.0,
    5.0 / 44.0,
    1.0 / 66.0,
    1.0 / 792.0,
    1.0 / 15840.0,
    1.0 / 665280.0,
];

fn norm1(a: &Array2<Complex64>) -> f64 {
    (0..a.ncols())
        .map(|j| a.column(j).iter().map(|z| z.norm()).sum::<f64>())
        .fold(0.0, f64::max)
}

pub fn expm(a: &Array2<Complex64>) -> Result<Array2<Complex64>> {
    let n = a.nrows();
    let norm = norm1(a);
    let squarings = if norm > 0.5 {
        (norm / 0.5).log2().ceil() as i32
    } else {
        0
    };
    let scaled = a.mapv(|z| z / 2f64.powi(squarings));
    let identity = Array2::from_diag_elem(n, Complex64::new(1.0, 0.0));

    let mut num = identity.mapv(|z| z * PADE6[0]);
    let mut den = num.clone();
    let mut power = identity;
    for (k, &coef) in PADE6.iter().enumerate().skip(1) {
        power = power.dot(&scaled);
        let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
        num.scaled_add(Complex64::new(coef, 0.0), &power);
        den.scaled_add(Complex64::new(sign * coef, 0.0), &power);
    }
    let mut result = Lu::new(&den)?.solve(&num)?;
    for _ in 0..squarings {
        result = result.dot(&result);
    }
    Ok(result)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn diagonal_matrix() {
        let a = Array2::from_diag(&ndarray::array![
            Complex64::new(-1.5, 0.0),
            Complex64::new(0.0, 2.0),
            Complex64::new(3.0, -0.25)
        ]);
        let e = expm(&a).unwrap();
        for i in 0..3 {
            assert!((e[[i, i]] - a[[i, i]].exp()).norm() < 1e-12 * a[[i, i]].exp().norm().max(1.0));
        }
        assert!(e[[0, 1]].norm() < 1e-15);
    }

    #[test]
    fn rotation_generator() {
        // exp(theta [[0,-1],[1,0]]) is a rotation
        let theta = 5.3;
        let a = ndarray::array![
            [Complex64::new(0.0, 0.0), Complex64::new(-theta, 0.0)],
            [Complex64::new(theta, 0.0), Complex64::new(0.0, 0.0)]
        ];
        let e = expm(&a).unwrap();
        assert!((e[[0, 0]].re - theta.cos()).abs() < 1e-13);
        assert!((e[[1, 0]].re - theta.sin()).abs() < 1e-13);
        assert!((e[[0, 1]].re + theta.sin()).abs() < 1e-13);
    }

    #[test]
    fn nilpotent_is_exact_series() {
        let a = ndarray::array![
            [Complex64::new(0.0, 0.0), Complex64::new(4.0, 1.0)],
            [Complex64::new(0.0, 0.0), Complex64::new(0.0, 0.0)]
        ];
        let e = expm(&a).unwrap();
        assert!((e[[0, 1]] - Complex64::new(4.0, 1.0)).norm() < 1e-13);
        assert!((e[[0, 0]] - Complex64::new(1.0, 0.0)).norm() < 1e-14);
    }
}
