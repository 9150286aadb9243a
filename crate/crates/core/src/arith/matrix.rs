//! Small dense matrices over a [`Field`], with exact Gaussian elimination.

use std::fmt;

use super::field::Field;
use crate::error::{Error, Result};

#[derive(Clone, Debug)]
pub struct Matrix<F: Field> {
    rows: usize,
    cols: usize,
    data: Vec<F>,
}

impl<F: Field> Matrix<F> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![F::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, F::one());
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> F) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Self { rows, cols, data }
    }

    pub fn try_from_fn(
        rows: usize,
        cols: usize,
        mut f: impl FnMut(usize, usize) -> Result<F>,
    ) -> Result<Self> {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j)?);
            }
        }
        Ok(Self { rows, cols, data })
    }

    pub fn diagonal(d: &[F]) -> Self {
        let mut m = Self::zeros(d.len(), d.len());
        for (i, x) in d.iter().enumerate() {
            m.set(i, i, x.clone());
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &F {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, x: F) {
        self.data[i * self.cols + j] = x;
    }

    pub fn entries(&self) -> &[F] {
        &self.data
    }

    pub fn add(&self, o: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (o.rows, o.cols));
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&o.data).map(|(a, b)| a.add(b)).collect(),
        }
    }

    pub fn sub(&self, o: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (o.rows, o.cols));
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&o.data).map(|(a, b)| a.sub(b)).collect(),
        }
    }

    pub fn scale(&self, c: &F) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|a| a.mul(c)).collect(),
        }
    }

    pub fn mul(&self, o: &Self) -> Self {
        assert_eq!(self.cols, o.rows);
        Self::from_fn(self.rows, o.cols, |i, j| {
            let mut acc = F::zero();
            for k in 0..self.cols {
                let a = self.get(i, k);
                let b = o.get(k, j);
                if !a.is_zero() && !b.is_zero() {
                    acc = acc.add(&a.mul(b));
                }
            }
            acc
        })
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|x| x.is_zero())
    }

    pub fn equals(&self, o: &Self) -> bool {
        self.rows == o.rows && self.cols == o.cols && self.sub(o).is_zero()
    }

    /// Index and value of the first nonzero entry, row-major.
    pub fn first_nonzero(&self) -> Option<(usize, usize, &F)> {
        self.data
            .iter()
            .position(|x| !x.is_zero())
            .map(|p| (p / self.cols, p % self.cols, &self.data[p]))
    }

    /// Determinant by fraction-field Gaussian elimination.
    pub fn determinant(&self) -> F {
        assert_eq!(self.rows, self.cols);
        let n = self.rows;
        let mut a = self.clone();
        let mut det = F::one();
        for col in 0..n {
            let Some(piv) = (col..n).find(|&r| !a.get(r, col).is_zero()) else {
                return F::zero();
            };
            if piv != col {
                a.swap_rows(piv, col);
                det = det.neg();
            }
            let p = a.get(col, col).clone();
            det = det.mul(&p);
            let pinv = p.inv().expect("pivot is nonzero");
            for r in col + 1..n {
                let f = a.get(r, col).mul(&pinv);
                if f.is_zero() {
                    continue;
                }
                for c in col..n {
                    let v = a.get(r, c).sub(&f.mul(a.get(col, c)));
                    a.set(r, c, v);
                }
            }
        }
        det
    }

    /// Inverse by Gauss–Jordan elimination.
    pub fn inverse(&self) -> Result<Self> {
        assert_eq!(self.rows, self.cols);
        let n = self.rows;
        let mut a = self.clone();
        let mut inv = Self::identity(n);
        for col in 0..n {
            let piv = (col..n)
                .find(|&r| !a.get(r, col).is_zero())
                .ok_or(Error::DivisionByZero)?;
            if piv != col {
                a.swap_rows(piv, col);
                inv.swap_rows(piv, col);
            }
            let pinv = a.get(col, col).inv()?;
            for c in 0..n {
                a.set(col, c, a.get(col, c).mul(&pinv));
                inv.set(col, c, inv.get(col, c).mul(&pinv));
            }
            for r in 0..n {
                if r == col {
                    continue;
                }
                let f = a.get(r, col).clone();
                if f.is_zero() {
                    continue;
                }
                for c in 0..n {
                    a.set(r, c, a.get(r, c).sub(&f.mul(a.get(col, c))));
                    inv.set(r, c, inv.get(r, c).sub(&f.mul(inv.get(col, c))));
                }
            }
        }
        Ok(inv)
    }

    /// Solves `self · x = b` for square invertible `self`.
    pub fn solve(&self, b: &[F]) -> Result<Vec<F>> {
        let n = self.rows;
        assert_eq!(b.len(), n);
        let mut aug = Self::from_fn(n, n + 1, |i, j| {
            if j < n {
                self.get(i, j).clone()
            } else {
                b[i].clone()
            }
        });
        for col in 0..n {
            let piv = (col..n)
                .find(|&r| !aug.get(r, col).is_zero())
                .ok_or(Error::DivisionByZero)?;
            aug.swap_rows(piv, col);
            let pinv = aug.get(col, col).inv()?;
            for r in col + 1..n {
                let f = aug.get(r, col).mul(&pinv);
                if f.is_zero() {
                    continue;
                }
                for c in col..=n {
                    aug.set(r, c, aug.get(r, c).sub(&f.mul(aug.get(col, c))));
                }
            }
        }
        let mut x = vec![F::zero(); n];
        for i in (0..n).rev() {
            let mut s = aug.get(i, n).clone();
            for j in i + 1..n {
                s = s.sub(&aug.get(i, j).mul(&x[j]));
            }
            x[i] = s.div(aug.get(i, i))?;
        }
        Ok(x)
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for c in 0..self.cols {
            self.data.swap(a * self.cols + c, b * self.cols + c);
        }
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut acc = Self::identity(self.rows);
        for _ in 0..k {
            acc = acc.mul(self);
        }
        acc
    }
}

impl<F: Field> fmt::Display for Matrix<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            let row: Vec<String> = (0..self.cols).map(|j| self.get(i, j).to_string()).collect();
            writeln!(f, "[{}]", row.join(", "))?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::BigRational;

    fn r(n: i64) -> BigRational {
        BigRational::from_integer(n.into())
    }

    #[test]
    fn inverse_and_determinant() {
        let m = Matrix::from_fn(3, 3, |i, j| r(((i * 3 + j) as i64 * 7 + 1) % 5 + (i == j) as i64));
        let inv = m.inverse().unwrap();
        assert!(m.mul(&inv).equals(&Matrix::identity(3)));
        let det = m.determinant();
        let det_inv = inv.determinant();
        assert_eq!(det * det_inv, r(1));
    }

    #[test]
    fn singular_matrix() {
        let m = Matrix::from_fn(2, 2, |_, _| r(1));
        assert_eq!(m.determinant(), r(0));
        assert!(m.inverse().is_err());
    }

    #[test]
    fn solves_linear_system() {
        let m = Matrix::from_fn(2, 2, |i, j| r([[2, 1], [1, 3]][i][j]));
        let x = m.solve(&[r(3), r(5)]).unwrap();
        assert_eq!(x, vec![BigRational::new(4.into(), 5.into()), BigRational::new(7.into(), 5.into())]);
    }
}
