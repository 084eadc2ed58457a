//! Dense matrices over exact rationals.
//!
//! Only what finite mixed-complex presentations need: products, rank,
//! reduced row echelon form and coordinates with respect to a column basis.

use std::fmt;

use num::{One, Zero};

use crate::{Error, Rational, Result};

#[derive(Clone, PartialEq, Eq)]
pub struct QMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Rational>,
}

impl fmt::Debug for QMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "QMatrix {}x{} [", self.rows, self.cols)?;
        for r in 0..self.rows {
            let row: Vec<String> = (0..self.cols).map(|c| self[(r, c)].to_string()).collect();
            write!(f, "[{}]", row.join(", "))?;
        }
        write!(f, "]")
    }
}

impl std::ops::Index<(usize, usize)> for QMatrix {
    type Output = Rational;
    fn index(&self, (r, c): (usize, usize)) -> &Rational {
        &self.data[r * self.cols + c]
    }
}

impl std::ops::IndexMut<(usize, usize)> for QMatrix {
    fn index_mut(&mut self, (r, c): (usize, usize)) -> &mut Rational {
        &mut self.data[r * self.cols + c]
    }
}

impl QMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![Rational::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = Rational::one();
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<Rational>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::DimensionMismatch("ragged matrix rows".into()));
        }
        Ok(Self {
            rows: r,
            cols: c,
            data: rows.into_iter().flatten().collect(),
        })
    }

    /// Builds a matrix from explicit columns of length `rows`.
    pub fn from_columns(rows: usize, columns: &[Vec<Rational>]) -> Self {
        let mut m = Self::zeros(rows, columns.len());
        for (c, col) in columns.iter().enumerate() {
            for (r, v) in col.iter().enumerate() {
                m[(r, c)] = v.clone();
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn to_rows(&self) -> Vec<Vec<Rational>> {
        (0..self.rows)
            .map(|r| self.data[r * self.cols..(r + 1) * self.cols].to_vec())
            .collect()
    }

    pub fn column(&self, c: usize) -> Vec<Rational> {
        (0..self.rows).map(|r| self[(r, c)].clone()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    pub fn mul(&self, other: &QMatrix) -> Result<QMatrix> {
        if self.cols != other.rows {
            return Err(Error::NotComposable(format!(
                "{}x{} times {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = QMatrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = &other[(k, j)];
                    if !b.is_zero() {
                        out[(i, j)] += a * b;
                    }
                }
            }
        }
        Ok(out)
    }

    pub fn add(&self, other: &QMatrix) -> Result<QMatrix> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(Error::NotComposable(format!(
                "{}x{} plus {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| a + b)
            .collect();
        Ok(QMatrix {
            rows: self.rows,
            cols: self.cols,
            data,
        })
    }

    pub fn scale(&self, s: &Rational) -> QMatrix {
        QMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|a| a * s).collect(),
        }
    }

    pub fn apply(&self, v: &[Rational]) -> Result<Vec<Rational>> {
        if v.len() != self.cols {
            return Err(Error::NotComposable(format!(
                "{}x{} applied to vector of length {}",
                self.rows,
                self.cols,
                v.len()
            )));
        }
        Ok((0..self.rows)
            .map(|r| {
                (0..self.cols)
                    .filter(|&c| !v[c].is_zero())
                    .fold(Rational::zero(), |acc, c| acc + &self[(r, c)] * &v[c])
            })
            .collect())
    }

    /// Reduced row echelon form and the pivot columns.
    pub fn rref(&self) -> (QMatrix, Vec<usize>) {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut row = 0;
        for col in 0..m.cols {
            if row == m.rows {
                break;
            }
            let Some(p) = (row..m.rows).find(|&r| !m[(r, col)].is_zero()) else {
                continue;
            };
            if p != row {
                for c in 0..m.cols {
                    m.data.swap(p * m.cols + c, row * m.cols + c);
                }
            }
            let inv = m[(row, col)].recip();
            for c in col..m.cols {
                let v = &m[(row, c)] * &inv;
                m[(row, c)] = v;
            }
            for r in 0..m.rows {
                if r == row || m[(r, col)].is_zero() {
                    continue;
                }
                let factor = m[(r, col)].clone();
                for c in col..m.cols {
                    let v = &m[(row, c)] * &factor;
                    m[(r, c)] -= v;
                }
            }
            pivots.push(col);
            row += 1;
        }
        (m, pivots)
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    pub fn nullity(&self) -> usize {
        self.cols - self.rank()
    }

    /// Columns at `indices`, in order.
    pub fn select_columns(&self, indices: &[usize]) -> QMatrix {
        let cols: Vec<Vec<Rational>> = indices.iter().map(|&c| self.column(c)).collect();
        QMatrix::from_columns(self.rows, &cols)
    }

    /// Coordinates of every column of `targets` in the basis given by the
    /// columns of `self` (which must be linearly independent and span the
    /// targets).
    pub fn coordinates_of(&self, targets: &QMatrix) -> Result<QMatrix> {
        if targets.rows != self.rows {
            return Err(Error::NotComposable("coordinate solve: row mismatch".into()));
        }
        let k = self.cols;
        let mut aug = QMatrix::zeros(self.rows, k + targets.cols);
        for r in 0..self.rows {
            for c in 0..k {
                aug[(r, c)] = self[(r, c)].clone();
            }
            for c in 0..targets.cols {
                aug[(r, k + c)] = targets[(r, c)].clone();
            }
        }
        let (red, pivots) = aug.rref();
        if pivots.len() != k || pivots.iter().enumerate().any(|(i, &p)| p != i) {
            return Err(Error::InvalidInput(
                "coordinate solve: basis not independent or targets outside span".into(),
            ));
        }
        let mut out = QMatrix::zeros(k, targets.cols);
        for i in 0..k {
            for c in 0..targets.cols {
                out[(i, c)] = red[(i, k + c)].clone();
            }
        }
        Ok(out)
    }
}
