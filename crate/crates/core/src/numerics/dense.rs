//! Dense complex vectors and matrices.

use std::ops::{Index, IndexMut};

use num_complex::Complex;

use super::scalar::{abs2, Real};
use crate::error::{Error, Result};

/// Ordered list of finite complex scalars.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct ComplexVector<T: Real> {
    entries: Vec<Complex<T>>,
}

impl<T: Real> ComplexVector<T> {
    /// Wraps `entries`, rejecting NaN or infinite components.
    pub fn new(entries: Vec<Complex<T>>) -> Result<Self> {
        if let Some(k) = entries.iter().position(|z| !(z.re.is_finite() && z.im.is_finite())) {
            return Err(Error::NonFinite(format!("vector entry {k}")));
        }
        Ok(Self { entries })
    }

    /// Internal constructor for values produced by finite arithmetic.
    pub(crate) fn from_raw(entries: Vec<Complex<T>>) -> Self {
        Self { entries }
    }

    pub fn zeros(len: usize) -> Self {
        Self::from_raw(vec![Complex::new(T::zero(), T::zero()); len])
    }

    pub fn from_real(values: &[T]) -> Result<Self> {
        Self::new(values.iter().map(|&v| Complex::new(v, T::zero())).collect())
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn as_slice(&self) -> &[Complex<T>] {
        &self.entries
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Complex<T>> {
        self.entries.iter()
    }

    pub fn into_inner(self) -> Vec<Complex<T>> {
        self.entries
    }

    pub fn norm_sqr(&self) -> T {
        self.entries.iter().map(|&z| abs2(z)).sum()
    }

    pub fn norm(&self) -> T {
        self.norm_sqr().sqrt()
    }

    /// `sum_k self_k * conj(other_k)`.
    pub fn inner(&self, other: &Self) -> Complex<T> {
        debug_assert_eq!(self.len(), other.len());
        self.entries
            .iter()
            .zip(&other.entries)
            .fold(Complex::new(T::zero(), T::zero()), |acc, (a, b)| acc + a * b.conj())
    }

    pub fn scale(&self, factor: Complex<T>) -> Self {
        Self::from_raw(self.entries.iter().map(|&z| z * factor).collect())
    }

    pub fn magnitudes(&self) -> Vec<T> {
        self.entries.iter().map(|z| z.norm()).collect()
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, |a, b| a - b)
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, |a, b| a + b)
    }

    fn zip_with(&self, other: &Self, f: impl Fn(Complex<T>, Complex<T>) -> Complex<T>) -> Result<Self> {
        if self.len() != other.len() {
            return Err(Error::Dimension(format!(
                "vector lengths {} and {}",
                self.len(),
                other.len()
            )));
        }
        Ok(Self::from_raw(
            self.entries.iter().zip(&other.entries).map(|(&a, &b)| f(a, b)).collect(),
        ))
    }

    /// Concatenates vectors in order.
    pub fn concat(parts: &[&Self]) -> Self {
        Self::from_raw(parts.iter().flat_map(|p| p.entries.iter().copied()).collect())
    }
}

impl<T: Real> Index<usize> for ComplexVector<T> {
    type Output = Complex<T>;
    fn index(&self, k: usize) -> &Complex<T> {
        &self.entries[k]
    }
}

impl<T: Real> IndexMut<usize> for ComplexVector<T> {
    fn index_mut(&mut self, k: usize) -> &mut Complex<T> {
        &mut self.entries[k]
    }
}

impl<'a, T: Real> IntoIterator for &'a ComplexVector<T> {
    type Item = &'a Complex<T>;
    type IntoIter = std::slice::Iter<'a, Complex<T>>;
    fn into_iter(self) -> Self::IntoIter {
        self.entries.iter()
    }
}

/// Row-major dense complex matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexMatrix<T: Real> {
    rows: usize,
    cols: usize,
    data: Vec<Complex<T>>,
}

impl<T: Real> ComplexMatrix<T> {
    pub fn new(rows: usize, cols: usize, data: Vec<Complex<T>>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::Dimension(format!(
                "{rows}x{cols} matrix needs {} entries, got {}",
                rows * cols,
                data.len()
            )));
        }
        if let Some(k) = data.iter().position(|z| !(z.re.is_finite() && z.im.is_finite())) {
            return Err(Error::NonFinite(format!("matrix entry ({}, {})", k / cols.max(1), k % cols.max(1))));
        }
        Ok(Self { rows, cols, data })
    }

    pub(crate) fn from_raw(rows: usize, cols: usize, data: Vec<Complex<T>>) -> Self {
        debug_assert_eq!(data.len(), rows * cols);
        Self { rows, cols, data }
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self::from_raw(rows, cols, vec![Complex::new(T::zero(), T::zero()); rows * cols])
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = Complex::new(T::one(), T::zero());
        }
        m
    }

    /// Square matrix with `diag` on the diagonal.
    pub fn from_diagonal(diag: &[Complex<T>]) -> Self {
        let n = diag.len();
        let mut m = Self::zeros(n, n);
        for (i, &d) in diag.iter().enumerate() {
            m[(i, i)] = d;
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Complex<T>) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Self::from_raw(rows, cols, data)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn as_slice(&self) -> &[Complex<T>] {
        &self.data
    }

    pub fn row(&self, i: usize) -> &[Complex<T>] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<Complex<T>> {
        (0..self.rows).map(|i| self[(i, j)]).collect()
    }

    pub fn frobenius_norm(&self) -> T {
        self.data.iter().map(|&z| abs2(z)).sum::<T>().sqrt()
    }

    /// `self * x`.
    pub fn matvec(&self, x: &ComplexVector<T>) -> Result<ComplexVector<T>> {
        if x.len() != self.cols {
            return Err(Error::Dimension(format!(
                "matvec: {}x{} matrix with vector of length {}",
                self.rows,
                self.cols,
                x.len()
            )));
        }
        Ok(ComplexVector::from_raw(self.mul_slice(x.as_slice())))
    }

    pub(crate) fn mul_slice(&self, x: &[Complex<T>]) -> Vec<Complex<T>> {
        let zero = Complex::new(T::zero(), T::zero());
        (0..self.rows)
            .map(|i| self.row(i).iter().zip(x).fold(zero, |acc, (a, b)| acc + a * b))
            .collect()
    }

    /// `self^H * y`.
    pub fn adjoint_matvec(&self, y: &ComplexVector<T>) -> Result<ComplexVector<T>> {
        if y.len() != self.rows {
            return Err(Error::Dimension(format!(
                "adjoint matvec: {}x{} matrix with vector of length {}",
                self.rows,
                self.cols,
                y.len()
            )));
        }
        Ok(ComplexVector::from_raw(self.adjoint_mul_slice(y.as_slice())))
    }

    pub(crate) fn adjoint_mul_slice(&self, y: &[Complex<T>]) -> Vec<Complex<T>> {
        let mut out = vec![Complex::new(T::zero(), T::zero()); self.cols];
        for (i, &yi) in y.iter().enumerate() {
            for (o, a) in out.iter_mut().zip(self.row(i)) {
                *o += a.conj() * yi;
            }
        }
        out
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)].conj())
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)])
    }

    pub fn matmul(&self, other: &Self) -> Result<Self> {
        if self.cols != other.rows {
            return Err(Error::Dimension(format!(
                "matmul: {}x{} times {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                if a.re == T::zero() && a.im == T::zero() {
                    continue;
                }
                let dst = &mut out.data[i * other.cols..(i + 1) * other.cols];
                for (d, b) in dst.iter_mut().zip(other.row(k)) {
                    *d += a * b;
                }
            }
        }
        Ok(out)
    }

    pub fn scale(&self, factor: Complex<T>) -> Self {
        Self::from_raw(self.rows, self.cols, self.data.iter().map(|&z| z * factor).collect())
    }

    /// Entrywise `self + factor * other`.
    pub fn add_scaled(&self, other: &Self, factor: Complex<T>) -> Result<Self> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(Error::Dimension(format!(
                "add: {}x{} and {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        Ok(Self::from_raw(
            self.rows,
            self.cols,
            self.data.iter().zip(&other.data).map(|(&a, &b)| a + b * factor).collect(),
        ))
    }

    /// Stacks blocks vertically; all blocks need the same column count.
    pub fn vstack(blocks: &[&Self]) -> Result<Self> {
        let cols = blocks.first().map_or(0, |b| b.cols);
        if let Some(b) = blocks.iter().find(|b| b.cols != cols) {
            return Err(Error::Dimension(format!("vstack: {} columns vs {cols}", b.cols)));
        }
        let rows = blocks.iter().map(|b| b.rows).sum();
        let data = blocks.iter().flat_map(|b| b.data.iter().copied()).collect();
        Ok(Self::from_raw(rows, cols, data))
    }

    /// Places blocks side by side; all blocks need the same row count.
    pub fn hstack(blocks: &[&Self]) -> Result<Self> {
        let rows = blocks.first().map_or(0, |b| b.rows);
        if let Some(b) = blocks.iter().find(|b| b.rows != rows) {
            return Err(Error::Dimension(format!("hstack: {} rows vs {rows}", b.rows)));
        }
        let cols = blocks.iter().map(|b| b.cols).sum();
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for b in blocks {
                data.extend_from_slice(b.row(i));
            }
        }
        Ok(Self::from_raw(rows, cols, data))
    }

    /// Keeps the listed rows in the given order.
    pub fn select_rows(&self, rows: &[usize]) -> Self {
        let mut data = Vec::with_capacity(rows.len() * self.cols);
        for &i in rows {
            data.extend_from_slice(self.row(i));
        }
        Self::from_raw(rows.len(), self.cols, data)
    }

    /// Keeps the listed columns in the given order.
    pub fn select_columns(&self, cols: &[usize]) -> Self {
        Self::from_fn(self.rows, cols.len(), |i, j| self[(i, cols[j])])
    }
}

impl<T: Real> Index<(usize, usize)> for ComplexMatrix<T> {
    type Output = Complex<T>;
    fn index(&self, (i, j): (usize, usize)) -> &Complex<T> {
        &self.data[i * self.cols + j]
    }
}

impl<T: Real> IndexMut<(usize, usize)> for ComplexMatrix<T> {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex<T> {
        &mut self.data[i * self.cols + j]
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex<f64> {
        Complex::new(re, im)
    }

    #[test]
    fn identity_matvec() {
        let x = ComplexVector::new(vec![c(1.0, 0.0), c(0.0, 1.0), c(-2.0, 0.0)]).unwrap();
        let y = ComplexMatrix::identity(3).matvec(&x).unwrap();
        assert_eq!(y, x);
    }

    #[test]
    fn zero_matrix_annihilates() {
        let x = ComplexVector::from_real(&[5.0, 5.0]).unwrap();
        let y = ComplexMatrix::<f64>::zeros(2, 2).matvec(&x).unwrap();
        assert_eq!(y, ComplexVector::zeros(2));
    }

    #[test]
    fn matvec_dimension_mismatch() {
        let x = ComplexVector::from_real(&[1.0, 2.0]).unwrap();
        assert!(matches!(
            ComplexMatrix::<f64>::identity(3).matvec(&x),
            Err(Error::Dimension(_))
        ));
    }

    #[test]
    fn rejects_non_finite() {
        assert!(ComplexVector::new(vec![c(f64::NAN, 0.0)]).is_err());
        assert!(ComplexMatrix::new(1, 1, vec![c(0.0, f64::INFINITY)]).is_err());
        assert!(ComplexMatrix::<f64>::new(2, 2, vec![c(0.0, 0.0)]).is_err());
    }

    #[test]
    fn stacking_and_adjoint() {
        let a = ComplexMatrix::new(1, 2, vec![c(1.0, 1.0), c(2.0, 0.0)]).unwrap();
        let b = ComplexMatrix::new(1, 2, vec![c(0.0, 3.0), c(4.0, -1.0)]).unwrap();
        let v = ComplexMatrix::vstack(&[&a, &b]).unwrap();
        assert_eq!((v.rows(), v.cols()), (2, 2));
        assert_eq!(v[(1, 0)], c(0.0, 3.0));
        let h = ComplexMatrix::hstack(&[&a, &b]).unwrap();
        assert_eq!(h.row(0), &[c(1.0, 1.0), c(2.0, 0.0), c(0.0, 3.0), c(4.0, -1.0)]);
        assert_eq!(v.adjoint()[(0, 1)], c(0.0, -3.0));
        let y = ComplexVector::new(vec![c(1.0, 0.0), c(0.0, 1.0)]).unwrap();
        let direct = v.adjoint().matvec(&y).unwrap();
        let fused = v.adjoint_matvec(&y).unwrap();
        assert_eq!(direct, fused);
    }
}
