//! Dense complex matrices.
//!
//! General (possibly rectangular, possibly non-Hermitian) complex matrices.
//! These appear as Kraus operators, unitaries, and intermediate products;
//! the Hermitian carrier type lives in [`crate::herm`].

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Dense row-major complex matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Complex64>,
}

impl ComplexMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![Complex64::ZERO; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, Complex64::ONE);
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<Complex64>>) -> Result<Self> {
        let r = rows.len();
        if r == 0 {
            return Err(Error::InvalidArgument("empty matrix".into()));
        }
        let c = rows[0].len();
        if c == 0 || rows.iter().any(|row| row.len() != c) {
            return Err(Error::DimMismatch("ragged or empty matrix rows".into()));
        }
        Ok(Self {
            rows: r,
            cols: c,
            data: rows.into_iter().flatten().collect(),
        })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        self.data[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: Complex64) {
        self.data[i * self.cols + j] = v;
    }

    pub fn data(&self) -> &[Complex64] {
        &self.data
    }

    pub fn matmul(&self, other: &Self) -> Result<Self> {
        if self.cols != other.rows {
            return Err(Error::DimMismatch(format!(
                "matmul {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a == Complex64::ZERO {
                    continue;
                }
                for j in 0..other.cols {
                    let v = out.get(i, j) + a * other.get(k, j);
                    out.set(i, j, v);
                }
            }
        }
        Ok(out)
    }

    pub fn adjoint(&self) -> Self {
        let mut out = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.set(j, i, self.get(i, j).conj());
            }
        }
        out
    }

    pub fn transpose(&self) -> Self {
        let mut out = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.set(j, i, self.get(i, j));
            }
        }
        out
    }

    pub fn conj(&self) -> Self {
        let mut out = self.clone();
        for v in out.data.iter_mut() {
            *v = v.conj();
        }
        out
    }

    pub fn scale(&self, s: Complex64) -> Self {
        let mut out = self.clone();
        for v in out.data.iter_mut() {
            *v *= s;
        }
        out
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(Error::DimMismatch("matrix addition".into()));
        }
        let mut out = self.clone();
        for (v, w) in out.data.iter_mut().zip(other.data.iter()) {
            *v += w;
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.scale(-Complex64::ONE))
    }

    pub fn kron(&self, other: &Self) -> Self {
        let mut out = Self::zeros(self.rows * other.rows, self.cols * other.cols);
        for i1 in 0..self.rows {
            for j1 in 0..self.cols {
                let a = self.get(i1, j1);
                for i2 in 0..other.rows {
                    for j2 in 0..other.cols {
                        out.set(
                            i1 * other.rows + i2,
                            j1 * other.cols + j2,
                            a * other.get(i2, j2),
                        );
                    }
                }
            }
        }
        out
    }

    pub fn trace(&self) -> Complex64 {
        (0..self.rows.min(self.cols)).map(|i| self.get(i, i)).sum()
    }

    pub fn frob_norm(&self) -> f64 {
        self.data.iter().map(|v| v.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Max entrywise deviation from Hermitian symmetry.
    pub fn asymmetry(&self) -> f64 {
        let mut worst: f64 = 0.0;
        if self.rows != self.cols {
            return f64::INFINITY;
        }
        for i in 0..self.rows {
            for j in i..self.cols {
                let d = (self.get(i, j) - self.get(j, i).conj()).norm();
                worst = worst.max(d);
            }
        }
        worst
    }

    /// `true` if the matrix is unitary within `tol` (Frobenius norm of U†U - I).
    pub fn is_unitary(&self, tol: f64) -> bool {
        if self.rows != self.cols {
            return false;
        }
        let gram = self.adjoint().matmul(self).unwrap();
        let mut dev = 0.0;
        for i in 0..self.rows {
            for j in 0..self.cols {
                let e = if i == j { Complex64::ONE } else { Complex64::ZERO };
                dev += (gram.get(i, j) - e).norm_sqr();
            }
        }
        dev.sqrt() <= tol
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn matmul_and_adjoint() {
        let a = ComplexMatrix::from_rows(vec![
            vec![c(1.0, 0.0), c(0.0, 1.0)],
            vec![c(2.0, 0.0), c(0.0, 0.0)],
        ])
        .unwrap();
        let prod = a.matmul(&ComplexMatrix::identity(2)).unwrap();
        assert_eq!(prod, a);
        let aa = a.adjoint().adjoint();
        assert_eq!(aa, a);
    }

    #[test]
    fn kron_dims() {
        let a = ComplexMatrix::identity(2);
        let b = ComplexMatrix::identity(3);
        let k = a.kron(&b);
        assert_eq!(k.rows(), 6);
        assert_eq!(k, ComplexMatrix::identity(6));
    }
}
