//! Dense complex matrices, LU with partial pivoting and a rank-revealing QR.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;
use core::ops::{Add, Index, IndexMut, Mul, Neg, Sub};

use num_complex::Complex64;
use num_traits::Zero;

use crate::error::{Error, Result};

pub type C64 = Complex64;

/// Row-major dense complex matrix.
#[derive(Clone, PartialEq)]
pub struct ComplexMatrix {
    rows: usize,
    cols: usize,
    data: Vec<C64>,
}

impl ComplexMatrix {
    pub fn new(rows: usize, cols: usize, data: Vec<C64>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::Dimension("entry count differs from rows*cols"));
        }
        if data.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::NonFinite);
        }
        Ok(Self { rows, cols, data })
    }

    /// Builds a matrix from real row-major entries.
    pub fn from_real(rows: usize, cols: usize, data: &[f64]) -> Result<Self> {
        Self::new(rows, cols, data.iter().map(|&x| C64::new(x, 0.0)).collect())
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![C64::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = C64::new(1.0, 0.0);
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> C64) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Self { rows, cols, data }
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }

    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn dims(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn entries(&self) -> &[C64] {
        &self.data
    }

    pub fn row(&self, i: usize) -> &[C64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|z| z.is_zero())
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)])
    }

    pub fn conj_transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)].conj())
    }

    pub fn scale(&self, s: C64) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|&z| z * s).collect(),
        }
    }

    pub fn map(&self, f: impl Fn(C64) -> C64) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|&z| f(z)).collect(),
        }
    }

    /// Copy of the `nr × nc` window whose top-left corner is `(r0, c0)`.
    pub fn submatrix(&self, r0: usize, c0: usize, nr: usize, nc: usize) -> Self {
        assert!(
            r0 + nr <= self.rows && c0 + nc <= self.cols,
            "submatrix out of bounds"
        );
        Self::from_fn(nr, nc, |i, j| self[(r0 + i, c0 + j)])
    }

    pub fn set_submatrix(&mut self, r0: usize, c0: usize, m: &Self) {
        assert!(
            r0 + m.rows <= self.rows && c0 + m.cols <= self.cols,
            "submatrix out of bounds"
        );
        for i in 0..m.rows {
            let dst = (r0 + i) * self.cols + c0;
            self.data[dst..dst + m.cols].copy_from_slice(m.row(i));
        }
    }

    /// Block diagonal matrix; blocks may be rectangular.
    pub fn block_diag(blocks: &[&Self]) -> Self {
        let rows = blocks.iter().map(|b| b.rows).sum();
        let cols = blocks.iter().map(|b| b.cols).sum();
        let mut out = Self::zeros(rows, cols);
        let (mut r, mut c) = (0, 0);
        for b in blocks {
            out.set_submatrix(r, c, b);
            r += b.rows;
            c += b.cols;
        }
        out
    }

    /// Rows and columns rearranged as `out[i][j] = self[row_perm[i]][col_perm[j]]`.
    pub fn permuted(&self, row_perm: &[usize], col_perm: &[usize]) -> Self {
        Self::from_fn(row_perm.len(), col_perm.len(), |i, j| {
            self[(row_perm[i], col_perm[j])]
        })
    }

    pub fn matmul(&self, rhs: &Self) -> Self {
        assert_eq!(self.cols, rhs.rows, "matmul dimension mismatch");
        let mut out = Self::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.data[i * self.cols + k];
                if a.is_zero() {
                    continue;
                }
                let rrow = rhs.row(k);
                let orow = &mut out.data[i * rhs.cols..(i + 1) * rhs.cols];
                for (o, &b) in orow.iter_mut().zip(rrow) {
                    *o += a * b;
                }
            }
        }
        out
    }

    pub fn norm_fro(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Maximum absolute column sum.
    pub fn norm_one(&self) -> f64 {
        (0..self.cols)
            .map(|j| (0..self.rows).map(|i| self[(i, j)].norm()).sum::<f64>())
            .fold(0.0, f64::max)
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    pub fn lu(&self) -> Result<Lu> {
        if !self.is_square() {
            return Err(Error::NotSquare {
                rows: self.rows,
                cols: self.cols,
            });
        }
        Ok(Lu::factor(self.clone()))
    }

    /// Determinant through LU with partial pivoting.
    pub fn det(&self) -> Result<C64> {
        Ok(self.lu()?.det())
    }

    /// Magnitudes of the diagonal of `R` in a column-pivoted Householder QR,
    /// in non-increasing order.
    pub fn pivoted_qr_diagonal(&self) -> Vec<f64> {
        let mut a = self.clone();
        let (m, n) = (a.rows, a.cols);
        let mut norms: Vec<f64> = (0..n)
            .map(|j| (0..m).map(|i| a[(i, j)].norm_sqr()).sum::<f64>())
            .collect();
        let steps = m.min(n);
        let mut diag = Vec::with_capacity(steps);
        for k in 0..steps {
            let (piv, _) = norms[k..]
                .iter()
                .enumerate()
                .fold(
                    (k, -1.0),
                    |best, (o, &v)| if v > best.1 { (k + o, v) } else { best },
                );
            if piv != k {
                norms.swap(k, piv);
                for i in 0..m {
                    a.data.swap(i * n + k, i * n + piv);
                }
            }
            let alpha = (k..m).map(|i| a[(i, k)].norm_sqr()).sum::<f64>().sqrt();
            diag.push(alpha);
            if alpha == 0.0 {
                continue;
            }
            let x0 = a[(k, k)];
            let phase = if x0.norm() == 0.0 {
                C64::new(1.0, 0.0)
            } else {
                x0 / x0.norm()
            };
            let mut v: Vec<C64> = (k..m).map(|i| a[(i, k)]).collect();
            v[0] += phase * alpha;
            let vnorm2: f64 = v.iter().map(|z| z.norm_sqr()).sum();
            if vnorm2 > 0.0 {
                for j in k..n {
                    let dot: C64 = v
                        .iter()
                        .enumerate()
                        .map(|(o, vi)| vi.conj() * a[(k + o, j)])
                        .sum();
                    let f = dot * (2.0 / vnorm2);
                    for (o, vi) in v.iter().enumerate() {
                        let cur = a[(k + o, j)];
                        a[(k + o, j)] = cur - vi * f;
                    }
                }
            }
            for j in k + 1..n {
                norms[j] = (k + 1..m).map(|i| a[(i, j)].norm_sqr()).sum();
            }
        }
        diag
    }

    /// Numerical rank: diagonal entries of the pivoted QR factor above
    /// `tol · |r₁₁|` are counted.
    pub fn rank(&self, tol: f64) -> usize {
        let diag = self.pivoted_qr_diagonal();
        let Some(&lead) = diag.first() else { return 0 };
        if lead == 0.0 {
            return 0;
        }
        diag.iter().filter(|&&d| d > tol * lead).count()
    }
}

impl fmt::Debug for ComplexMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "ComplexMatrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            write!(f, "  ")?;
            for z in self.row(i) {
                if z.im == 0.0 {
                    write!(f, "{:>8.3} ", z.re)?;
                } else {
                    write!(f, "{:>8.3}{:+.3}i ", z.re, z.im)?;
                }
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}

impl Index<(usize, usize)> for ComplexMatrix {
    type Output = C64;
    #[inline]
    fn index(&self, (i, j): (usize, usize)) -> &C64 {
        debug_assert!(i < self.rows && j < self.cols);
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for ComplexMatrix {
    #[inline]
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut C64 {
        debug_assert!(i < self.rows && j < self.cols);
        &mut self.data[i * self.cols + j]
    }
}

impl Add for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn add(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!(self.dims(), rhs.dims(), "add dimension mismatch");
        let data = self
            .data
            .iter()
            .zip(&rhs.data)
            .map(|(a, b)| a + b)
            .collect();
        ComplexMatrix {
            rows: self.rows,
            cols: self.cols,
            data,
        }
    }
}

impl Sub for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn sub(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!(self.dims(), rhs.dims(), "sub dimension mismatch");
        let data = self
            .data
            .iter()
            .zip(&rhs.data)
            .map(|(a, b)| a - b)
            .collect();
        ComplexMatrix {
            rows: self.rows,
            cols: self.cols,
            data,
        }
    }
}

impl Neg for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn neg(self) -> ComplexMatrix {
        self.map(|z| -z)
    }
}

impl Mul for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn mul(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        self.matmul(rhs)
    }
}

/// `PA = LU` with unit lower `L`, stored packed.
#[derive(Clone, Debug)]
pub struct Lu {
    lu: ComplexMatrix,
    perm: Vec<usize>,
    swaps: usize,
}

impl Lu {
    fn factor(mut a: ComplexMatrix) -> Self {
        let n = a.rows;
        let mut perm: Vec<usize> = (0..n).collect();
        let mut swaps = 0;
        for k in 0..n {
            let (piv, best) = (k..n)
                .map(|i| (i, a[(i, k)].norm()))
                .fold((k, -1.0), |b, c| if c.1 > b.1 { c } else { b });
            if piv != k {
                for j in 0..n {
                    a.data.swap(k * n + j, piv * n + j);
                }
                perm.swap(k, piv);
                swaps += 1;
            }
            if best == 0.0 {
                continue;
            }
            let pivot = a[(k, k)];
            for i in k + 1..n {
                let f = a[(i, k)] / pivot;
                a[(i, k)] = f;
                if f.is_zero() {
                    continue;
                }
                for j in k + 1..n {
                    let u = a[(k, j)];
                    a[(i, j)] -= f * u;
                }
            }
        }
        Self { lu: a, perm, swaps }
    }

    pub fn det(&self) -> C64 {
        let n = self.lu.rows;
        let mut d = if self.swaps.is_multiple_of(2) {
            C64::new(1.0, 0.0)
        } else {
            C64::new(-1.0, 0.0)
        };
        for k in 0..n {
            d *= self.lu[(k, k)];
        }
        d
    }

    /// Smallest pivot magnitude relative to the largest.
    pub fn pivot_ratio(&self) -> f64 {
        let n = self.lu.rows;
        if n == 0 {
            return 1.0;
        }
        let mags: Vec<f64> = (0..n).map(|k| self.lu[(k, k)].norm()).collect();
        let max = mags.iter().cloned().fold(0.0, f64::max);
        if max == 0.0 {
            return 0.0;
        }
        mags.iter().cloned().fold(f64::INFINITY, f64::min) / max
    }

    /// Smallest pivot magnitude.
    pub fn min_pivot(&self) -> f64 {
        (0..self.lu.rows)
            .map(|k| self.lu[(k, k)].norm())
            .fold(f64::INFINITY, f64::min)
    }

    /// Solves `A X = rhs`; fails when a pivot is exactly zero.
    pub fn solve(&self, rhs: &ComplexMatrix) -> Result<ComplexMatrix> {
        let n = self.lu.rows;
        if rhs.rows != n {
            return Err(Error::Dimension(
                "right-hand side rows differ from matrix order",
            ));
        }
        if (0..n).any(|k| self.lu[(k, k)].is_zero()) {
            return Err(Error::SingularInput);
        }
        let mut x = rhs.permuted(&self.perm, &(0..rhs.cols).collect::<Vec<_>>());
        for c in 0..rhs.cols {
            for i in 0..n {
                let mut s = x[(i, c)];
                for k in 0..i {
                    s -= self.lu[(i, k)] * x[(k, c)];
                }
                x[(i, c)] = s;
            }
            for i in (0..n).rev() {
                let mut s = x[(i, c)];
                for k in i + 1..n {
                    s -= self.lu[(i, k)] * x[(k, c)];
                }
                x[(i, c)] = s / self.lu[(i, i)];
            }
        }
        Ok(x)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64) -> C64 {
        C64::new(re, 0.0)
    }

    #[test]
    fn rejects_bad_shapes_and_nan() {
        assert!(ComplexMatrix::new(2, 2, vec![c(1.0); 3]).is_err());
        assert_eq!(
            ComplexMatrix::new(1, 1, vec![C64::new(f64::NAN, 0.0)]),
            Err(Error::NonFinite)
        );
    }

    #[test]
    fn det_and_solve() {
        let a =
            ComplexMatrix::from_real(3, 3, &[2.0, 1.0, 0.0, 1.0, 3.0, 1.0, 0.0, 1.0, 4.0]).unwrap();
        let d = a.det().unwrap();
        assert!((d - c(18.0)).norm() < 1e-12);
        let b = ComplexMatrix::from_real(3, 1, &[1.0, 2.0, 3.0]).unwrap();
        let x = a.lu().unwrap().solve(&b).unwrap();
        assert!((&a.matmul(&x) - &b).max_abs() < 1e-12);
    }

    #[test]
    fn det_sign_follows_row_swaps() {
        let p = ComplexMatrix::from_real(2, 2, &[0.0, 1.0, 1.0, 0.0]).unwrap();
        assert_eq!(p.det().unwrap(), c(-1.0));
    }

    #[test]
    fn rank_examples() {
        assert_eq!(ComplexMatrix::identity(3).rank(1e-10), 3);
        let u = ComplexMatrix::from_real(3, 1, &[1.0, -2.0, 0.5]).unwrap();
        let v = ComplexMatrix::new(1, 3, vec![C64::new(0.0, 1.0), c(2.0), c(-1.0)]).unwrap();
        assert_eq!(u.matmul(&v).rank(1e-10), 1);
        assert_eq!(ComplexMatrix::zeros(2, 3).rank(1e-10), 0);
    }

    #[test]
    fn permuted_and_block_diag() {
        let a = ComplexMatrix::from_real(1, 2, &[1.0, 2.0]).unwrap();
        let b = ComplexMatrix::from_real(1, 1, &[3.0]).unwrap();
        let d = ComplexMatrix::block_diag(&[&a, &b]);
        assert_eq!(
            d,
            ComplexMatrix::from_real(2, 3, &[1.0, 2.0, 0.0, 0.0, 0.0, 3.0]).unwrap()
        );
        let p = d.permuted(&[1, 0], &[2, 0, 1]);
        assert_eq!(
            p,
            ComplexMatrix::from_real(2, 3, &[3.0, 0.0, 0.0, 0.0, 1.0, 2.0]).unwrap()
        );
    }
}
