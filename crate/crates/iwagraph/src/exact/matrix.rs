use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::error::{Error, Result};

/// Dense big-integer matrix, row major. Carrier for degree matrices,
/// Laplacians and group presentations; no arithmetic surprises, no
/// normalization on construction.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BigInt>,
}

impl IntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMatrix {
            rows,
            cols,
            data: vec![BigInt::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = IntMatrix::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = BigInt::one();
        }
        m
    }

    /// Build from row slices of machine integers; handy in tests and for
    /// small presentations.
    pub fn from_rows(rows: &[&[i64]]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        assert!(
            rows.iter().all(|row| row.len() == c),
            "ragged rows in IntMatrix::from_rows"
        );
        IntMatrix {
            rows: r,
            cols: c,
            data: rows
                .iter()
                .flat_map(|row| row.iter().map(|&x| BigInt::from(x)))
                .collect(),
        }
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

    pub fn require_square(&self) -> Result<()> {
        if self.is_square() {
            Ok(())
        } else {
            Err(Error::NotSquare {
                rows: self.rows,
                cols: self.cols,
            })
        }
    }

    pub fn entries(&self) -> &[BigInt] {
        &self.data
    }

    pub fn transpose(&self) -> Self {
        let mut t = IntMatrix::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)].clone();
            }
        }
        t
    }

    /// Copy with row `r` and column `c` deleted.
    pub fn minor(&self, r: usize, c: usize) -> Self {
        assert!(r < self.rows && c < self.cols);
        let mut m = IntMatrix::zeros(self.rows - 1, self.cols - 1);
        for i in 0..self.rows - 1 {
            let si = if i < r { i } else { i + 1 };
            for j in 0..self.cols - 1 {
                let sj = if j < c { j } else { j + 1 };
                m[(i, j)] = self[(si, sj)].clone();
            }
        }
        m
    }

    /// Horizontal concatenation `[self | other]`.
    pub fn hstack(&self, other: &IntMatrix) -> Self {
        assert_eq!(self.rows, other.rows, "hstack needs equal row counts");
        let mut m = IntMatrix::zeros(self.rows, self.cols + other.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                m[(i, j)] = self[(i, j)].clone();
            }
            for j in 0..other.cols {
                m[(i, self.cols + j)] = other[(i, j)].clone();
            }
        }
        m
    }

    /// Row sums; zero row sums are the basic Laplacian sanity check.
    pub fn row_sums(&self) -> Vec<BigInt> {
        (0..self.rows)
            .map(|i| (0..self.cols).map(|j| self[(i, j)].clone()).sum())
            .collect()
    }
}

impl std::ops::Index<(usize, usize)> for IntMatrix {
    type Output = BigInt;
    fn index(&self, (i, j): (usize, usize)) -> &BigInt {
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for IntMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut BigInt {
        &mut self.data[i * self.cols + j]
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn transpose_and_minor() {
        let m = IntMatrix::from_rows(&[&[1, 2, 3], &[4, 5, 6]]);
        let t = m.transpose();
        assert_eq!(t.rows(), 3);
        assert_eq!(t[(2, 1)], BigInt::from(6));
        let sub = m.minor(0, 1);
        assert_eq!(sub.rows(), 1);
        assert_eq!(sub.cols(), 2);
        assert_eq!(sub[(0, 0)], BigInt::from(4));
        assert_eq!(sub[(0, 1)], BigInt::from(6));
    }

    #[test]
    fn hstack_widens() {
        let a = IntMatrix::identity(2);
        let b = IntMatrix::from_rows(&[&[7], &[8]]);
        let c = a.hstack(&b);
        assert_eq!(c.cols(), 3);
        assert_eq!(c[(1, 2)], BigInt::from(8));
    }
}
