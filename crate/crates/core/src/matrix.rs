//! Dense complex matrices and the Hilbert–Schmidt inner product.
//!
//! Everything downstream (subspace spans, algebras, the crossed-product
//! embedding) is built on this one representation: row-major `Complex64`
//! entries with explicit shape. ⟨X,Y⟩ = trace(Y*X) is the inner product
//! used for all subspace geometry.

use num_complex::Complex64;

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct ComplexMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Complex64>,
}

impl ComplexMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        ComplexMatrix {
            rows,
            cols,
            data: vec![Complex64::ZERO; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = Complex64::ONE;
        }
        m
    }

    /// Matrix unit E_{ij} in the given square dimension.
    pub fn unit(n: usize, i: usize, j: usize) -> Self {
        let mut m = Self::zeros(n, n);
        m[(i, j)] = Complex64::ONE;
        m
    }

    pub fn from_rows(rows: Vec<Vec<Complex64>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::InvalidArgument("ragged row lengths".into()));
        }
        Ok(ComplexMatrix {
            rows: r,
            cols: c,
            data: rows.into_iter().flatten().collect(),
        })
    }

    pub fn diag(entries: &[Complex64]) -> Self {
        let n = entries.len();
        let mut m = Self::zeros(n, n);
        for (i, &e) in entries.iter().enumerate() {
            m[(i, i)] = e;
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn same_shape(&self, other: &Self) -> bool {
        self.rows == other.rows && self.cols == other.cols
    }

    pub fn data(&self) -> &[Complex64] {
        &self.data
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_shape(other)?;
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| a + b)
            .collect();
        Ok(ComplexMatrix {
            rows: self.rows,
            cols: self.cols,
            data,
        })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.check_shape(other)?;
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| a - b)
            .collect();
        Ok(ComplexMatrix {
            rows: self.rows,
            cols: self.cols,
            data,
        })
    }

    pub fn scale(&self, c: Complex64) -> Self {
        ComplexMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|a| a * c).collect(),
        }
    }

    pub fn scale_re(&self, c: f64) -> Self {
        self.scale(Complex64::new(c, 0.0))
    }

    /// In-place `self += c * other`. Shapes must already match.
    pub fn axpy(&mut self, c: Complex64, other: &Self) {
        debug_assert!(self.same_shape(other));
        for (a, b) in self.data.iter_mut().zip(&other.data) {
            *a += c * b;
        }
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        if self.cols != other.rows {
            return Err(Error::ShapeMismatch(
                self.rows, self.cols, other.rows, other.cols,
            ));
        }
        let mut out = Self::zeros(self.rows, other.cols);
        // i-k-j order keeps the inner loop contiguous in both operands.
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.data[i * self.cols + k];
                if a == Complex64::ZERO {
                    continue;
                }
                let src = &other.data[k * other.cols..(k + 1) * other.cols];
                let dst = &mut out.data[i * other.cols..(i + 1) * other.cols];
                for (d, s) in dst.iter_mut().zip(src) {
                    *d += a * s;
                }
            }
        }
        Ok(out)
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> Self {
        let mut out = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out[(j, i)] = self.data[i * self.cols + j].conj();
            }
        }
        out
    }

    pub fn trace(&self) -> Complex64 {
        debug_assert!(self.is_square());
        (0..self.rows).map(|i| self.data[i * self.cols + i]).sum()
    }

    /// Hilbert–Schmidt norm.
    pub fn norm(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn is_zero(&self, tol: f64) -> bool {
        self.norm() <= tol
    }

    /// Distance in Hilbert–Schmidt norm.
    pub fn distance(&self, other: &Self) -> f64 {
        debug_assert!(self.same_shape(other));
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm_sqr())
            .sum::<f64>()
            .sqrt()
    }

    /// Copies `block` into position (`row`, `col`).
    pub fn set_block(&mut self, row: usize, col: usize, block: &Self) {
        debug_assert!(row + block.rows <= self.rows && col + block.cols <= self.cols);
        for i in 0..block.rows {
            let dst = (row + i) * self.cols + col;
            let src = i * block.cols;
            self.data[dst..dst + block.cols].copy_from_slice(&block.data[src..src + block.cols]);
        }
    }

    /// Extracts the `h` x `w` block at (`row`, `col`).
    pub fn block(&self, row: usize, col: usize, h: usize, w: usize) -> Self {
        debug_assert!(row + h <= self.rows && col + w <= self.cols);
        let mut out = Self::zeros(h, w);
        for i in 0..h {
            let src = (row + i) * self.cols + col;
            out.data[i * w..(i + 1) * w].copy_from_slice(&self.data[src..src + w]);
        }
        out
    }

    /// Embeds a square matrix as the lower-right corner of a larger square
    /// ambient, padding with zeros.
    pub fn embed_lower_right(&self, ambient: usize) -> Self {
        debug_assert!(self.is_square() && self.rows <= ambient);
        let mut out = Self::zeros(ambient, ambient);
        out.set_block(ambient - self.rows, ambient - self.rows, self);
        out
    }

    fn check_shape(&self, other: &Self) -> Result<()> {
        if !self.same_shape(other) {
            return Err(Error::ShapeMismatch(
                self.rows, self.cols, other.rows, other.cols,
            ));
        }
        Ok(())
    }
}

impl std::ops::Index<(usize, usize)> for ComplexMatrix {
    type Output = Complex64;

    fn index(&self, (i, j): (usize, usize)) -> &Complex64 {
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for ComplexMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex64 {
        &mut self.data[i * self.cols + j]
    }
}

/// Hilbert–Schmidt inner product ⟨X,Y⟩ = trace(Y*X), linear in the first
/// argument and conjugate-linear in the second.
pub fn hs_inner(x: &ComplexMatrix, y: &ComplexMatrix) -> Result<Complex64> {
    if !x.same_shape(y) {
        return Err(Error::ShapeMismatch(x.rows, x.cols, y.rows, y.cols));
    }
    Ok(inner_raw(x, y))
}

/// Unchecked inner product for hot paths where shapes are known equal.
pub(crate) fn inner_raw(x: &ComplexMatrix, y: &ComplexMatrix) -> Complex64 {
    debug_assert!(x.same_shape(y));
    let mut acc = Complex64::ZERO;
    for (a, b) in x.data.iter().zip(&y.data) {
        acc += a * b.conj();
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;

    fn re(x: f64) -> Complex64 {
        Complex64::new(x, 0.0)
    }

    #[test]
    fn hs_inner_identity_counts_dimension() {
        let id = ComplexMatrix::identity(2);
        let v = hs_inner(&id, &id).unwrap();
        assert!((v - re(2.0)).norm() < 1e-15);
    }

    #[test]
    fn hs_inner_zero() {
        let x = ComplexMatrix::unit(3, 0, 1);
        let z = ComplexMatrix::zeros(3, 3);
        assert_eq!(hs_inner(&x, &z).unwrap(), Complex64::ZERO);
    }

    #[test]
    fn hs_inner_orthogonal_units() {
        let e01 = ComplexMatrix::unit(2, 0, 1);
        let e10 = ComplexMatrix::unit(2, 1, 0);
        assert_eq!(hs_inner(&e01, &e10).unwrap(), Complex64::ZERO);
    }

    #[test]
    fn hs_inner_shape_mismatch_errors() {
        let a = ComplexMatrix::identity(2);
        let b = ComplexMatrix::identity(3);
        assert!(hs_inner(&a, &b).is_err());
    }

    #[test]
    fn hs_inner_conjugate_symmetric_and_positive() {
        let mut x = ComplexMatrix::zeros(2, 2);
        x[(0, 0)] = Complex64::new(1.0, 2.0);
        x[(1, 0)] = Complex64::new(-0.5, 0.25);
        let mut y = ComplexMatrix::zeros(2, 2);
        y[(0, 1)] = Complex64::new(0.0, 1.0);
        y[(1, 1)] = Complex64::new(3.0, -1.0);
        let xy = hs_inner(&x, &y).unwrap();
        let yx = hs_inner(&y, &x).unwrap();
        assert!((xy - yx.conj()).norm() < 1e-14);
        let xx = hs_inner(&x, &x).unwrap();
        assert!(xx.im.abs() < 1e-14);
        assert!((xx.re - x.norm() * x.norm()).abs() < 1e-12);
    }

    #[test]
    fn adjoint_is_involutive() {
        let mut x = ComplexMatrix::zeros(2, 3);
        x[(0, 2)] = Complex64::new(1.0, -4.0);
        x[(1, 0)] = Complex64::new(2.0, 0.5);
        assert_eq!(x.adjoint().adjoint(), x);
    }

    #[test]
    fn matrix_unit_products() {
        let e01 = ComplexMatrix::unit(2, 0, 1);
        let e10 = ComplexMatrix::unit(2, 1, 0);
        let e00 = ComplexMatrix::unit(2, 0, 0);
        assert!(e01.mul(&e10).unwrap().distance(&e00) < 1e-15);
        assert!(e01.mul(&e01).unwrap().norm() < 1e-15);
    }

    #[test]
    fn block_round_trip() {
        let mut big = ComplexMatrix::zeros(4, 4);
        let mut small = ComplexMatrix::zeros(2, 2);
        small[(0, 1)] = Complex64::new(5.0, 1.0);
        small[(1, 0)] = Complex64::new(0.0, -2.0);
        big.set_block(2, 2, &small);
        assert_eq!(big.block(2, 2, 2, 2), small);
        assert_eq!(small.embed_lower_right(4), big);
    }
}
