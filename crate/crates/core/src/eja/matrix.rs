//! Square matrices over a division algebra, and the coordinate map between
//! self-adjoint matrices and coefficient vectors.
//!
//! Coefficient layout for an `m × m` self-adjoint matrix over an algebra of
//! real dimension `d`: the `m` diagonal entries first, then for each pair
//! `i < j` (lexicographic) the `d` components of `X_ij` scaled by `√2`.
//! The generators `(u_k E_ij + ū_k E_ji)/√2` and `E_ii` are orthonormal for
//! the trace form `(X, Y) = Re tr(X ∘ Y)`.

use std::f64::consts::SQRT_2;

use super::division::DivisionAlgebra;

#[derive(Clone, Debug, PartialEq)]
pub struct Matrix<T> {
    pub m: usize,
    data: Vec<T>,
}

impl<T: DivisionAlgebra> Matrix<T> {
    pub fn zeros(m: usize) -> Self {
        Matrix { m, data: vec![T::zero(); m * m] }
    }

    pub fn identity(m: usize) -> Self {
        let mut out = Self::zeros(m);
        for i in 0..m {
            out[(i, i)] = T::from_real(1.0);
        }
        out
    }

    /// Number of coefficients of a self-adjoint `m × m` matrix.
    pub fn coeff_len(m: usize) -> usize {
        m + T::DIM * m * (m - 1) / 2
    }

    pub fn from_coeffs(m: usize, coeffs: &[f64]) -> Self {
        debug_assert_eq!(coeffs.len(), Self::coeff_len(m));
        let mut out = Self::zeros(m);
        for i in 0..m {
            out[(i, i)] = T::from_real(coeffs[i]);
        }
        let mut pos = m;
        let mut buf = [0.0; 8];
        for i in 0..m {
            for j in (i + 1)..m {
                for (k, b) in buf.iter_mut().take(T::DIM).enumerate() {
                    *b = coeffs[pos + k] / SQRT_2;
                }
                let x = T::from_components(&buf[..T::DIM]);
                out[(i, j)] = x;
                out[(j, i)] = x.conj();
                pos += T::DIM;
            }
        }
        out
    }

    /// Coefficients of the self-adjoint part `(X + X†)/2`.
    pub fn to_coeffs(&self) -> Vec<f64> {
        let m = self.m;
        let mut out = Vec::with_capacity(Self::coeff_len(m));
        for i in 0..m {
            out.push(self[(i, i)].re());
        }
        for i in 0..m {
            for j in (i + 1)..m {
                let x = (self[(i, j)] + self[(j, i)].conj()).scale(0.5);
                for k in 0..T::DIM {
                    out.push(x.component(k) * SQRT_2);
                }
            }
        }
        out
    }

    pub fn mul(&self, other: &Self) -> Self {
        let m = self.m;
        let mut out = Self::zeros(m);
        for i in 0..m {
            for j in 0..m {
                let mut acc = T::zero();
                for k in 0..m {
                    acc = acc + self[(i, k)] * other[(k, j)];
                }
                out[(i, j)] = acc;
            }
        }
        out
    }

    /// `(XY + YX)/2`.
    pub fn jordan(&self, other: &Self) -> Self {
        let a = self.mul(other);
        let b = other.mul(self);
        let data = a
            .data
            .iter()
            .zip(&b.data)
            .map(|(&x, &y)| (x + y).scale(0.5))
            .collect();
        Matrix { m: self.m, data }
    }

    pub fn adjoint(&self) -> Self {
        let m = self.m;
        let mut out = Self::zeros(m);
        for i in 0..m {
            for j in 0..m {
                out[(i, j)] = self[(j, i)].conj();
            }
        }
        out
    }

    pub fn trace_re(&self) -> f64 {
        (0..self.m).map(|i| self[(i, i)].re()).sum()
    }

    /// Outer product `v v†` of a column vector.
    pub fn outer(v: &[T]) -> Self {
        let m = v.len();
        let mut out = Self::zeros(m);
        for i in 0..m {
            for j in 0..m {
                out[(i, j)] = v[i] * v[j].conj();
            }
        }
        out
    }

    pub fn column(&self, j: usize) -> Vec<T> {
        (0..self.m).map(|i| self[(i, j)]).collect()
    }

    pub fn from_columns(cols: &[Vec<T>]) -> Self {
        let m = cols.len();
        let mut out = Self::zeros(m);
        for (j, c) in cols.iter().enumerate() {
            for i in 0..m {
                out[(i, j)] = c[i];
            }
        }
        out
    }

    pub fn frobenius_sqr(&self) -> f64 {
        self.data.iter().map(|x| x.norm_sqr()).sum()
    }
}

impl<T> std::ops::Index<(usize, usize)> for Matrix<T> {
    type Output = T;
    fn index(&self, (i, j): (usize, usize)) -> &T {
        &self.data[i * self.m + j]
    }
}

impl<T> std::ops::IndexMut<(usize, usize)> for Matrix<T> {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut T {
        &mut self.data[i * self.m + j]
    }
}
