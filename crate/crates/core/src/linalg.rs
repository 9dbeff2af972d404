//! Dense row-major linear algebra over [`Real`], small sizes only.

use crate::dual::Real;

/// LU factorisation with partial pivoting (pivots chosen on primal values).
#[derive(Debug, Clone)]
pub struct Lu<T> {
    n: usize,
    lu: Vec<T>,
    perm: Vec<usize>,
    sign: f64,
}

impl<T: Real> Lu<T> {
    /// Returns `None` when a pivot is exactly zero.
    pub fn new(a: &[T], n: usize) -> Option<Self> {
        debug_assert_eq!(a.len(), n * n);
        let mut lu = a.to_vec();
        let mut perm: Vec<usize> = (0..n).collect();
        let mut sign = 1.0;
        for col in 0..n {
            let (piv, best) = (col..n)
                .map(|r| (r, lu[r * n + col].value().abs()))
                .fold((col, -1.0), |acc, x| if x.1 > acc.1 { x } else { acc });
            if best == 0.0 {
                return None;
            }
            if piv != col {
                for k in 0..n {
                    lu.swap(piv * n + k, col * n + k);
                }
                perm.swap(piv, col);
                sign = -sign;
            }
            let d = lu[col * n + col];
            for r in col + 1..n {
                let factor = lu[r * n + col] / d;
                lu[r * n + col] = factor;
                for k in col + 1..n {
                    lu[r * n + k] = lu[r * n + k] - factor * lu[col * n + k];
                }
            }
        }
        Some(Self { n, lu, perm, sign })
    }

    pub fn det(&self) -> T {
        (0..self.n).fold(T::cst(self.sign), |acc, i| acc * self.lu[i * self.n + i])
    }

    pub fn solve(&self, b: &[T]) -> Vec<T> {
        let n = self.n;
        let mut y: Vec<T> = self.perm.iter().map(|&p| b[p]).collect();
        for i in 0..n {
            for k in 0..i {
                y[i] = y[i] - self.lu[i * n + k] * y[k];
            }
        }
        for i in (0..n).rev() {
            for k in i + 1..n {
                y[i] = y[i] - self.lu[i * n + k] * y[k];
            }
            y[i] = y[i] / self.lu[i * n + i];
        }
        y
    }

    pub fn inverse(&self) -> Vec<T> {
        let n = self.n;
        let mut inv = vec![T::zero(); n * n];
        let mut e = vec![T::zero(); n];
        for j in 0..n {
            e.iter_mut().for_each(|v| *v = T::zero());
            e[j] = T::one();
            let col = self.solve(&e);
            for i in 0..n {
                inv[i * n + j] = col[i];
            }
        }
        inv
    }
}

/// `a · bᵀ` for square matrices.
pub fn mul_transpose<T: Real>(a: &[T], b: &[T], n: usize) -> Vec<T> {
    let mut out = vec![T::zero(); n * n];
    for i in 0..n {
        for j in 0..n {
            let mut s = T::zero();
            for k in 0..n {
                s = s + a[i * n + k] * b[j * n + k];
            }
            out[i * n + j] = s;
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn solve_and_det() {
        let a = [0.0, 2.0, 1.0, 1.0, 1.0, 0.0, 3.0, 0.0, 1.0];
        let lu = Lu::new(&a, 3).unwrap();
        assert_relative_eq!(lu.det(), -5.0, epsilon = 1e-14);
        let x = lu.solve(&[3.0, 2.0, 4.0]);
        for (xi, want) in x.iter().zip([1.0, 1.0, 1.0]) {
            assert_relative_eq!(*xi, want, epsilon = 1e-14);
        }
        let inv = lu.inverse();
        let id = mul_transpose(&a, &transpose(&inv, 3), 3);
        for i in 0..3 {
            for j in 0..3 {
                assert_relative_eq!(id[i * 3 + j], if i == j { 1.0 } else { 0.0 }, epsilon = 1e-14);
            }
        }
    }

    #[test]
    fn singular_is_none() {
        assert!(Lu::new(&[1.0, 2.0, 2.0, 4.0], 2).is_none());
    }

    fn transpose(a: &[f64], n: usize) -> Vec<f64> {
        (0..n * n).map(|k| a[(k % n) * n + k / n]).collect()
    }
}
