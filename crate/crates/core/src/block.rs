//! Matrices with an explicit block partition of rows and columns.

use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::matrix::{ComplexMatrix, C64};
use crate::poly::MatrixPolynomial;

/// Dense storage that can be cut into windows and written back.
pub trait DenseBlock: Clone {
    fn zeros(rows: usize, cols: usize) -> Self;
    fn nrows(&self) -> usize;
    fn ncols(&self) -> usize;
    fn sub(&self, r0: usize, c0: usize, nr: usize, nc: usize) -> Self;
    fn put(&mut self, r0: usize, c0: usize, m: &Self);
}

impl DenseBlock for ComplexMatrix {
    fn zeros(rows: usize, cols: usize) -> Self {
        ComplexMatrix::zeros(rows, cols)
    }
    fn nrows(&self) -> usize {
        self.rows()
    }
    fn ncols(&self) -> usize {
        self.cols()
    }
    fn sub(&self, r0: usize, c0: usize, nr: usize, nc: usize) -> Self {
        self.submatrix(r0, c0, nr, nc)
    }
    fn put(&mut self, r0: usize, c0: usize, m: &Self) {
        self.set_submatrix(r0, c0, m)
    }
}

impl DenseBlock for MatrixPolynomial {
    fn zeros(rows: usize, cols: usize) -> Self {
        MatrixPolynomial::zeros(rows, cols, 0)
    }
    fn nrows(&self) -> usize {
        self.rows()
    }
    fn ncols(&self) -> usize {
        self.cols()
    }
    fn sub(&self, r0: usize, c0: usize, nr: usize, nc: usize) -> Self {
        self.submatrix(r0, c0, nr, nc)
    }
    fn put(&mut self, r0: usize, c0: usize, m: &Self) {
        self.set_submatrix(r0, c0, m)
    }
}

/// A matrix together with block row and column sizes. Block indices are 0-based.
#[derive(Clone, Debug, PartialEq)]
pub struct Partitioned<M> {
    data: M,
    row_sizes: Vec<usize>,
    col_sizes: Vec<usize>,
}

pub type BlockMatrix = Partitioned<ComplexMatrix>;
pub type PolyBlockMatrix = Partitioned<MatrixPolynomial>;

impl<M: DenseBlock> Partitioned<M> {
    pub fn new(data: M, row_sizes: Vec<usize>, col_sizes: Vec<usize>) -> Result<Self> {
        if row_sizes.iter().sum::<usize>() != data.nrows()
            || col_sizes.iter().sum::<usize>() != data.ncols()
        {
            return Err(Error::Dimension(
                "block sizes do not add up to the matrix shape",
            ));
        }
        Ok(Self {
            data,
            row_sizes,
            col_sizes,
        })
    }

    pub fn zeros(row_sizes: Vec<usize>, col_sizes: Vec<usize>) -> Self {
        let data = M::zeros(row_sizes.iter().sum(), col_sizes.iter().sum());
        Self {
            data,
            row_sizes,
            col_sizes,
        }
    }

    pub fn data(&self) -> &M {
        &self.data
    }

    pub fn into_data(self) -> M {
        self.data
    }

    pub fn row_sizes(&self) -> &[usize] {
        &self.row_sizes
    }

    pub fn col_sizes(&self) -> &[usize] {
        &self.col_sizes
    }

    pub fn block_rows(&self) -> usize {
        self.row_sizes.len()
    }

    pub fn block_cols(&self) -> usize {
        self.col_sizes.len()
    }

    pub fn row_offset(&self, i: usize) -> usize {
        self.row_sizes[..i].iter().sum()
    }

    pub fn col_offset(&self, j: usize) -> usize {
        self.col_sizes[..j].iter().sum()
    }

    fn check(&self, i: usize, j: usize) -> Result<()> {
        if i >= self.block_rows() {
            return Err(Error::OutOfRange {
                index: i,
                limit: self.block_rows(),
            });
        }
        if j >= self.block_cols() {
            return Err(Error::OutOfRange {
                index: j,
                limit: self.block_cols(),
            });
        }
        Ok(())
    }

    pub fn block(&self, i: usize, j: usize) -> Result<M> {
        self.check(i, j)?;
        Ok(self.data.sub(
            self.row_offset(i),
            self.col_offset(j),
            self.row_sizes[i],
            self.col_sizes[j],
        ))
    }

    pub fn set_block(&mut self, i: usize, j: usize, m: &M) -> Result<()> {
        self.check(i, j)?;
        if m.nrows() != self.row_sizes[i] || m.ncols() != self.col_sizes[j] {
            return Err(Error::Dimension("block shape mismatch"));
        }
        let (r0, c0) = (self.row_offset(i), self.col_offset(j));
        self.data.put(r0, c0, m);
        Ok(())
    }

    /// Inserts a zero block row of height `size` so that it becomes block row `at`.
    pub fn insert_block_row(&mut self, at: usize, size: usize) -> Result<()> {
        if at > self.block_rows() {
            return Err(Error::OutOfRange {
                index: at,
                limit: self.block_rows() + 1,
            });
        }
        let r0 = self.row_offset(at);
        let (rows, cols) = (self.data.nrows(), self.data.ncols());
        let mut next = M::zeros(rows + size, cols);
        next.put(0, 0, &self.data.sub(0, 0, r0, cols));
        next.put(r0 + size, 0, &self.data.sub(r0, 0, rows - r0, cols));
        self.data = next;
        self.row_sizes.insert(at, size);
        Ok(())
    }

    /// Inserts a zero block column of width `size` so that it becomes block column `at`.
    pub fn insert_block_col(&mut self, at: usize, size: usize) -> Result<()> {
        if at > self.block_cols() {
            return Err(Error::OutOfRange {
                index: at,
                limit: self.block_cols() + 1,
            });
        }
        let c0 = self.col_offset(at);
        let (rows, cols) = (self.data.nrows(), self.data.ncols());
        let mut next = M::zeros(rows, cols + size);
        next.put(0, 0, &self.data.sub(0, 0, rows, c0));
        next.put(0, c0 + size, &self.data.sub(0, c0, rows, cols - c0));
        self.data = next;
        self.col_sizes.insert(at, size);
        Ok(())
    }
}

impl PolyBlockMatrix {
    /// Evaluates every block at `z`, keeping the partition.
    pub fn eval(&self, z: C64) -> BlockMatrix {
        Partitioned {
            data: self.data.eval(z),
            row_sizes: self.row_sizes.clone(),
            col_sizes: self.col_sizes.clone(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn m(rows: usize, cols: usize, data: &[f64]) -> ComplexMatrix {
        ComplexMatrix::from_real(rows, cols, data).unwrap()
    }

    #[test]
    fn block_access_and_insertion() {
        let data = m(3, 3, &[1.0, 2.0, 3.0, 4.0, 5.0, 6.0, 7.0, 8.0, 9.0]);
        let mut b = BlockMatrix::new(data, vec![1, 2], vec![2, 1]).unwrap();
        assert_eq!(b.block(1, 1).unwrap(), m(2, 1, &[6.0, 9.0]));
        b.insert_block_row(1, 1).unwrap();
        b.insert_block_col(0, 1).unwrap();
        assert_eq!(b.row_sizes(), &[1, 1, 2]);
        assert_eq!(b.col_sizes(), &[1, 2, 1]);
        assert!(b.block(1, 1).unwrap().is_zero());
        assert!(b.block(2, 0).unwrap().is_zero());
        assert_eq!(b.block(2, 2).unwrap(), m(2, 1, &[6.0, 9.0]));
        assert_eq!(b.block(0, 1).unwrap(), m(1, 2, &[1.0, 2.0]));
        b.set_block(1, 1, &m(1, 2, &[-1.0, -2.0])).unwrap();
        assert_eq!(
            b.data().row(1),
            &[
                C64::new(0.0, 0.0),
                C64::new(-1.0, 0.0),
                C64::new(-2.0, 0.0),
                C64::new(0.0, 0.0)
            ]
        );
        assert!(b.set_block(1, 1, &m(2, 2, &[0.0; 4])).is_err());
        assert!(b.block(3, 0).is_err());
    }

    #[test]
    fn insertion_at_end_and_empty_blocks() {
        let mut b = BlockMatrix::zeros(vec![2], vec![3]);
        b.insert_block_row(1, 0).unwrap();
        b.insert_block_col(1, 2).unwrap();
        assert_eq!(b.data().dims(), (2, 5));
        assert_eq!(b.block(1, 1).unwrap().dims(), (0, 2));
    }

    #[test]
    fn poly_blocks_raise_degree() {
        let mut b = PolyBlockMatrix::zeros(vec![1, 1], vec![1, 1]);
        b.set_block(1, 0, &MatrixPolynomial::lambda_identity(1))
            .unwrap();
        assert_eq!(b.data().degree(), 1);
        let at_two = b.eval(C64::new(2.0, 0.0));
        assert_eq!(at_two.block(1, 0).unwrap(), m(1, 1, &[2.0]));
    }
}
