//! Dense matrices of intervals.

use std::io::Write;

use crate::error::{Error, Result};
use crate::interval::Interval;

/// Row-major dense interval matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct IMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Interval>,
    symmetric: bool,
}

impl IMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IMatrix {
            rows,
            cols,
            data: vec![Interval::ZERO; rows * cols],
            symmetric: rows == cols,
        }
    }

    pub fn identity(n: usize) -> Self {
        Self::from_fn(n, n, |i, j| if i == j { Interval::ONE } else { Interval::ZERO })
            .with_symmetry_hint()
            .expect("identity is symmetric")
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Interval) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        IMatrix {
            rows,
            cols,
            data,
            symmetric: false,
        }
    }

    /// Fills the upper triangle from `f` and mirrors it, so the result carries
    /// the symmetry hint.
    pub fn from_fn_symmetric(n: usize, mut f: impl FnMut(usize, usize) -> Interval) -> Self {
        let mut m = IMatrix::zeros(n, n);
        for i in 0..n {
            for j in i..n {
                let v = f(i, j);
                m.data[i * n + j] = v;
                m.data[j * n + i] = v;
            }
        }
        m.symmetric = true;
        m
    }

    /// Point matrix from a row-major slice of floats.
    pub fn from_points(rows: usize, cols: usize, values: &[f64]) -> Result<Self> {
        if values.len() != rows * cols {
            return Err(Error::Domain(format!(
                "expected {} entries for a {rows}x{cols} matrix, got {}",
                rows * cols,
                values.len()
            )));
        }
        Ok(Self::from_fn(rows, cols, |i, j| Interval::point(values[i * cols + j])))
    }

    /// Sets the symmetry hint after checking entry(i,j) == entry(j,i).
    pub fn with_symmetry_hint(mut self) -> Result<Self> {
        if self.rows != self.cols {
            return Err(Error::Domain("symmetry hint on a non-square matrix".into()));
        }
        let n = self.rows;
        for i in 0..n {
            for j in (i + 1)..n {
                if self.data[i * n + j] != self.data[j * n + i] {
                    return Err(Error::Domain(format!("entries ({i},{j}) and ({j},{i}) differ")));
                }
            }
        }
        self.symmetric = true;
        Ok(self)
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }

    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn symmetry_hint(&self) -> bool {
        self.symmetric
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> Interval {
        self.data[i * self.cols + j]
    }

    pub fn entries(&self) -> &[Interval] {
        &self.data
    }

    pub fn map(&self, f: impl Fn(Interval) -> Interval) -> IMatrix {
        IMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|&x| f(x)).collect(),
            symmetric: self.symmetric,
        }
    }

    pub fn transpose(&self) -> IMatrix {
        let mut t = IMatrix::from_fn(self.cols, self.rows, |i, j| self.get(j, i));
        t.symmetric = self.symmetric;
        t
    }

    fn zip(&self, other: &IMatrix, f: impl Fn(Interval, Interval) -> Interval) -> Result<IMatrix> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(Error::Domain(format!(
                "shape mismatch {}x{} vs {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        Ok(IMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(&a, &b)| f(a, b)).collect(),
            symmetric: self.symmetric && other.symmetric,
        })
    }

    pub fn add(&self, other: &IMatrix) -> Result<IMatrix> {
        self.zip(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &IMatrix) -> Result<IMatrix> {
        self.zip(other, |a, b| a - b)
    }

    pub fn scale(&self, s: Interval) -> IMatrix {
        self.map(|x| x * s)
    }

    /// Entrywise hull-of-width test: is every entry of `self` inside `other`?
    pub fn is_subset_of(&self, other: &IMatrix) -> bool {
        self.rows == other.rows
            && self.cols == other.cols
            && self.data.iter().zip(&other.data).all(|(a, b)| a.is_subset_of(b))
    }

    pub fn midpoints(&self) -> Vec<f64> {
        self.data.iter().map(Interval::mid).collect()
    }

    /// Writes `row,col,mid,rad` for every entry that is not exactly zero.
    pub fn write_csv<W: Write>(&self, mut out: W) -> Result<()> {
        writeln!(out, "row,col,mid,rad")?;
        for i in 0..self.rows {
            for j in 0..self.cols {
                let v = self.get(i, j);
                if v != Interval::ZERO {
                    writeln!(out, "{i},{j},{:e},{:e}", v.mid(), v.rad())?;
                }
            }
        }
        Ok(())
    }
}
