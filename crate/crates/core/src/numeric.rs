//! Floating-point scalar abstraction and the small dense-matrix kernel
//! used by the Gaussian statistics layer.
//!
//! Graph and tree algorithms in this crate are index/set manipulations and
//! carry no scalar type; everything that touches data (covariances, partial
//! correlations, linear-SEM sampling) is generic over [`Scalar`] so that it
//! runs in `f32` or `f64`. Concrete `f64` aliases live at the crate root.

use std::fmt::{Debug, Display};
use std::str::FromStr;

use num_traits::{Float, NumAssign};

/// Floating-point scalar for the statistical layer (implemented by `f32`
/// and `f64`). P-values and test statistics are always reported in `f64`
/// regardless of the working scalar.
pub trait Scalar:
    Float + NumAssign + FromStr + Display + Debug + Copy + Send + Sync + 'static
{
}

impl<T> Scalar for T where
    T: Float + NumAssign + FromStr + Display + Debug + Copy + Send + Sync + 'static
{
}

/// Dense square matrix, row major. Only the handful of operations the
/// statistics layer needs: indexing, 1-norm, and Gauss-Jordan inversion.
#[derive(Clone, Debug, PartialEq)]
pub struct Mat<T> {
    n: usize,
    a: Vec<T>,
}

impl<T: Scalar> Mat<T> {
    pub fn zeros(n: usize) -> Self {
        Mat { n, a: vec![T::zero(); n * n] }
    }

    /// Builds from row slices; every row must have length `rows.len()`.
    pub fn from_rows(rows: &[Vec<T>]) -> Option<Self> {
        let n = rows.len();
        if rows.iter().any(|r| r.len() != n) {
            return None;
        }
        let mut m = Mat::zeros(n);
        for (i, row) in rows.iter().enumerate() {
            m.a[i * n..(i + 1) * n].copy_from_slice(row);
        }
        Some(m)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> T {
        self.a[i * self.n + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: T) {
        self.a[i * self.n + j] = v;
    }

    /// 1-norm: maximum absolute column sum.
    pub fn norm_one(&self) -> T {
        let mut best = T::zero();
        for j in 0..self.n {
            let mut s = T::zero();
            for i in 0..self.n {
                s += self.get(i, j).abs();
            }
            if s > best {
                best = s;
            }
        }
        best
    }

    /// Gauss-Jordan inverse with partial pivoting. Returns `None` when a
    /// pivot vanishes (singular to working precision). Near-singular
    /// inputs are caught by callers via [`rcond_est`].
    pub fn inverse(&self) -> Option<Mat<T>> {
        let n = self.n;
        let mut w = self.clone();
        let mut inv = Mat::zeros(n);
        for i in 0..n {
            inv.set(i, i, T::one());
        }
        for col in 0..n {
            let mut piv = col;
            for r in col + 1..n {
                if w.get(r, col).abs() > w.get(piv, col).abs() {
                    piv = r;
                }
            }
            let pval = w.get(piv, col);
            if !(pval.abs() > T::zero()) {
                return None;
            }
            if piv != col {
                for j in 0..n {
                    let (x, y) = (w.get(col, j), w.get(piv, j));
                    w.set(col, j, y);
                    w.set(piv, j, x);
                    let (x, y) = (inv.get(col, j), inv.get(piv, j));
                    inv.set(col, j, y);
                    inv.set(piv, j, x);
                }
            }
            let d = w.get(col, col);
            for j in 0..n {
                w.set(col, j, w.get(col, j) / d);
                inv.set(col, j, inv.get(col, j) / d);
            }
            for r in 0..n {
                if r == col {
                    continue;
                }
                let f = w.get(r, col);
                if f == T::zero() {
                    continue;
                }
                for j in 0..n {
                    let wv = w.get(r, j) - f * w.get(col, j);
                    w.set(r, j, wv);
                    let iv = inv.get(r, j) - f * inv.get(col, j);
                    inv.set(r, j, iv);
                }
            }
        }
        Some(inv)
    }
}

/// Reciprocal condition estimate in the 1-norm: `1 / (‖A‖₁ ‖A⁻¹‖₁)`.
/// Zero norms (empty matrices) estimate as 0.
pub fn rcond_est<T: Scalar>(a: &Mat<T>, a_inv: &Mat<T>) -> f64 {
    let prod = a.norm_one() * a_inv.norm_one();
    let p = prod.to_f64().unwrap_or(f64::INFINITY);
    if p > 0.0 {
        1.0 / p
    } else {
        0.0
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn inverts_identity() {
        let m = Mat::<f64>::from_rows(&[vec![1.0, 0.0], vec![0.0, 1.0]]).unwrap();
        let inv = m.inverse().unwrap();
        assert_eq!(inv, m);
    }

    #[test]
    fn inverts_2x2() {
        let m = Mat::<f64>::from_rows(&[vec![4.0, 7.0], vec![2.0, 6.0]]).unwrap();
        let inv = m.inverse().unwrap();
        assert_relative_eq!(inv.get(0, 0), 0.6, epsilon = 1e-12);
        assert_relative_eq!(inv.get(0, 1), -0.7, epsilon = 1e-12);
        assert_relative_eq!(inv.get(1, 0), -0.2, epsilon = 1e-12);
        assert_relative_eq!(inv.get(1, 1), 0.4, epsilon = 1e-12);
    }

    #[test]
    fn singular_returns_none() {
        let m = Mat::<f64>::from_rows(&[vec![1.0, 1.0], vec![1.0, 1.0]]).unwrap();
        assert!(m.inverse().is_none());
    }

    #[test]
    fn rcond_small_for_near_singular() {
        let eps = 1e-9;
        let m = Mat::<f64>::from_rows(&[vec![1.0, 1.0 - eps], vec![1.0 - eps, 1.0]]).unwrap();
        let inv = m.inverse().unwrap();
        let rc = rcond_est(&m, &inv);
        assert!(rc < 1e-8 && rc > 1e-12, "rc = {rc}");
        // well-conditioned case for contrast
        let id = Mat::<f64>::from_rows(&[vec![1.0, 0.0], vec![0.0, 1.0]]).unwrap();
        assert_relative_eq!(rcond_est(&id, &id.inverse().unwrap()), 1.0);
    }

    #[test]
    fn works_in_f32() {
        let m = Mat::<f32>::from_rows(&[vec![2.0, 0.0], vec![0.0, 4.0]]).unwrap();
        let inv = m.inverse().unwrap();
        assert_relative_eq!(inv.get(0, 0), 0.5f32);
        assert_relative_eq!(inv.get(1, 1), 0.25f32);
    }
}
