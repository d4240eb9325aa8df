//! Dense matrices over exact fields.

use std::fmt;

use num_traits::{One, Signed, Zero};

use super::{RationalFn, Rational};
use crate::error::{Error, Result};

/// Minimal exact field interface used by the elimination routines.
pub trait Field: Clone + PartialEq + fmt::Debug {
    fn zero_like(&self) -> Self;
    fn one_like(&self) -> Self;
    fn is_zero_elem(&self) -> bool;
    fn add_ref(&self, o: &Self) -> Self;
    fn sub_ref(&self, o: &Self) -> Self;
    fn mul_ref(&self, o: &Self) -> Self;
    fn div_ref(&self, o: &Self) -> Self;
    fn neg_ref(&self) -> Self;
    /// Pivot preference: lower is simpler.
    fn weight(&self) -> u64;
}

impl Field for Rational {
    fn zero_like(&self) -> Self {
        Rational::zero()
    }
    fn one_like(&self) -> Self {
        Rational::one()
    }
    fn is_zero_elem(&self) -> bool {
        self.is_zero()
    }
    fn add_ref(&self, o: &Self) -> Self {
        self + o
    }
    fn sub_ref(&self, o: &Self) -> Self {
        self - o
    }
    fn mul_ref(&self, o: &Self) -> Self {
        self * o
    }
    fn div_ref(&self, o: &Self) -> Self {
        self / o
    }
    fn neg_ref(&self) -> Self {
        -self
    }
    fn weight(&self) -> u64 {
        self.numer().abs().bits() + self.denom().bits()
    }
}

impl Field for RationalFn {
    fn zero_like(&self) -> Self {
        RationalFn::zero(self.nvars())
    }
    fn one_like(&self) -> Self {
        RationalFn::one(self.nvars())
    }
    fn is_zero_elem(&self) -> bool {
        self.is_zero()
    }
    fn add_ref(&self, o: &Self) -> Self {
        self + o
    }
    fn sub_ref(&self, o: &Self) -> Self {
        self - o
    }
    fn mul_ref(&self, o: &Self) -> Self {
        self * o
    }
    fn div_ref(&self, o: &Self) -> Self {
        self / o
    }
    fn neg_ref(&self) -> Self {
        -self
    }
    fn weight(&self) -> u64 {
        let terms = self.numerator().num_terms() as u64;
        (self.total_degree() as u64) * 64 + terms
    }
}

#[derive(Clone, PartialEq, Eq)]
pub struct Matrix<T> {
    rows: usize,
    cols: usize,
    data: Vec<T>,
}

impl<T: fmt::Debug> fmt::Debug for Matrix<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<&[T]> = self.data.chunks(self.cols.max(1)).collect();
        f.debug_list().entries(rows).finish()
    }
}

impl<T: Field> Matrix<T> {
    pub fn from_fn<F: FnMut(usize, usize) -> T>(rows: usize, cols: usize, mut f: F) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Matrix { rows, cols, data }
    }

    pub fn from_rows(rows: Vec<Vec<T>>) -> Self {
        let r = rows.len();
        let c = rows.first().map(|x| x.len()).unwrap_or(0);
        assert!(rows.iter().all(|x| x.len() == c), "ragged matrix rows");
        Matrix { rows: r, cols: c, data: rows.into_iter().flatten().collect() }
    }

    /// Identity of size `n` with entries shaped like `sample`.
    pub fn identity(n: usize, sample: &T) -> Self {
        let z = sample.zero_like();
        let o = sample.one_like();
        Self::from_fn(n, n, |i, j| if i == j { o.clone() } else { z.clone() })
    }

    pub fn zeros(rows: usize, cols: usize, sample: &T) -> Self {
        let z = sample.zero_like();
        Self::from_fn(rows, cols, |_, _| z.clone())
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &T {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: T) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[T] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn entries(&self) -> &[T] {
        &self.data
    }

    pub fn map<U: Field, F: FnMut(&T) -> U>(&self, f: F) -> Matrix<U> {
        Matrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(f).collect() }
    }

    pub fn try_map<U: Field, E, F: FnMut(&T) -> std::result::Result<U, E>>(
        &self,
        f: F,
    ) -> std::result::Result<Matrix<U>, E> {
        let data = self.data.iter().map(f).collect::<std::result::Result<Vec<U>, E>>()?;
        Ok(Matrix { rows: self.rows, cols: self.cols, data })
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self.get(j, i).clone())
    }

    pub fn add(&self, o: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (o.rows, o.cols));
        Self::from_fn(self.rows, self.cols, |i, j| self.get(i, j).add_ref(o.get(i, j)))
    }

    pub fn sub(&self, o: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (o.rows, o.cols));
        Self::from_fn(self.rows, self.cols, |i, j| self.get(i, j).sub_ref(o.get(i, j)))
    }

    pub fn neg(&self) -> Self {
        self.map(|x| x.neg_ref())
    }

    pub fn scale(&self, c: &T) -> Self {
        self.map(|x| x.mul_ref(c))
    }

    pub fn mul(&self, o: &Self) -> Self {
        assert_eq!(self.cols, o.rows, "matrix product shape mismatch");
        let sample = self.data.first().or(o.data.first()).expect("empty matrix product");
        let z = sample.zero_like();
        Self::from_fn(self.rows, o.cols, |i, j| {
            let mut acc = z.clone();
            for k in 0..self.cols {
                let a = self.get(i, k);
                let b = o.get(k, j);
                if a.is_zero_elem() || b.is_zero_elem() {
                    continue;
                }
                acc = acc.add_ref(&a.mul_ref(b));
            }
            acc
        })
    }

    pub fn mul_vec(&self, v: &[T]) -> Vec<T> {
        assert_eq!(self.cols, v.len());
        (0..self.rows)
            .map(|i| {
                let mut acc = v[0].zero_like();
                for (k, vk) in v.iter().enumerate() {
                    let a = self.get(i, k);
                    if !a.is_zero_elem() && !vk.is_zero_elem() {
                        acc = acc.add_ref(&a.mul_ref(vk));
                    }
                }
                acc
            })
            .collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|x| x.is_zero_elem())
    }

    pub fn is_antisymmetric(&self) -> bool {
        self.rows == self.cols
            && (0..self.rows).all(|i| (i..self.cols).all(|j| *self.get(i, j) == self.get(j, i).neg_ref()))
    }

    /// Reduced row echelon form; returns the pivot columns.
    pub fn rref(&self) -> (Self, Vec<usize>) {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..m.cols {
            if r == m.rows {
                break;
            }
            let best = (r..m.rows)
                .filter(|&i| !m.get(i, c).is_zero_elem())
                .min_by_key(|&i| m.get(i, c).weight());
            let Some(p) = best else { continue };
            m.swap_rows(r, p);
            let inv = m.get(r, c).one_like().div_ref(m.get(r, c));
            for j in c..m.cols {
                let v = m.get(r, j).mul_ref(&inv);
                m.set(r, j, v);
            }
            for i in 0..m.rows {
                if i == r || m.get(i, c).is_zero_elem() {
                    continue;
                }
                let f = m.get(i, c).clone();
                for j in c..m.cols {
                    if m.get(r, j).is_zero_elem() {
                        continue;
                    }
                    let v = m.get(i, j).sub_ref(&f.mul_ref(m.get(r, j)));
                    m.set(i, j, v);
                }
            }
            pivots.push(c);
            r += 1;
        }
        (m, pivots)
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    pub fn inverse(&self) -> Result<Self> {
        if self.rows != self.cols {
            return Err(Error::Dimension(format!("cannot invert a {}x{} matrix", self.rows, self.cols)));
        }
        let n = self.rows;
        if n == 0 {
            return Ok(self.clone());
        }
        let id = Self::identity(n, &self.data[0]);
        let aug = Self::from_fn(n, 2 * n, |i, j| if j < n { self.get(i, j).clone() } else { id.get(i, j - n).clone() });
        let (red, piv) = aug.rref();
        if piv.len() < n || piv[n - 1] >= n {
            return Err(Error::Singular(format!("{n}x{n} matrix is not invertible")));
        }
        Ok(Self::from_fn(n, n, |i, j| red.get(i, j + n).clone()))
    }

    pub fn determinant(&self) -> T {
        assert_eq!(self.rows, self.cols);
        let n = self.rows;
        let mut m = self.clone();
        let one = self.data[0].one_like();
        let mut det = one;
        for c in 0..n {
            let best = (c..n).filter(|&i| !m.get(i, c).is_zero_elem()).min_by_key(|&i| m.get(i, c).weight());
            let Some(p) = best else { return self.data[0].zero_like() };
            if p != c {
                m.swap_rows(p, c);
                det = det.neg_ref();
            }
            let piv = m.get(c, c).clone();
            det = det.mul_ref(&piv);
            for i in c + 1..n {
                if m.get(i, c).is_zero_elem() {
                    continue;
                }
                let f = m.get(i, c).div_ref(&piv);
                for j in c..n {
                    let v = m.get(i, j).sub_ref(&f.mul_ref(m.get(c, j)));
                    m.set(i, j, v);
                }
            }
        }
        det
    }

    /// A solution `x` of `self · x = b`, if one exists.
    pub fn solve(&self, b: &[T]) -> Option<Vec<T>> {
        assert_eq!(b.len(), self.rows);
        let n = self.cols;
        let sample = self.data.first().or(b.first())?;
        let aug = Self::from_fn(self.rows, n + 1, |i, j| if j < n { self.get(i, j).clone() } else { b[i].clone() });
        let (red, piv) = aug.rref();
        if piv.last() == Some(&n) {
            return None;
        }
        let mut x = vec![sample.zero_like(); n];
        for (r, &c) in piv.iter().enumerate() {
            x[c] = red.get(r, n).clone();
        }
        Some(x)
    }

    /// Basis of the right null space.
    pub fn nullspace(&self) -> Vec<Vec<T>> {
        let (red, piv) = self.rref();
        let Some(sample) = self.data.first() else { return Vec::new() };
        let free: Vec<usize> = (0..self.cols).filter(|c| !piv.contains(c)).collect();
        free.iter()
            .map(|&f| {
                let mut v = vec![sample.zero_like(); self.cols];
                v[f] = sample.one_like();
                for (r, &c) in piv.iter().enumerate() {
                    v[c] = red.get(r, f).neg_ref();
                }
                v
            })
            .collect()
    }

    /// Stacks rows of `self` over rows of `o`.
    pub fn vstack(&self, o: &Self) -> Self {
        assert_eq!(self.cols, o.cols);
        let mut data = self.data.clone();
        data.extend(o.data.iter().cloned());
        Matrix { rows: self.rows + o.rows, cols: self.cols, data }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{rat, Poly};

    #[test]
    fn rational_inverse() {
        let m = Matrix::from_rows(vec![vec![rat(2, 1), rat(1, 1)], vec![rat(1, 1), rat(1, 1)]]);
        let inv = m.inverse().unwrap();
        assert_eq!(m.mul(&inv), Matrix::identity(2, &rat(0, 1)));
        assert_eq!(m.determinant(), rat(1, 1));
    }

    #[test]
    fn symbolic_inverse() {
        let x = RationalFn::var(0, 2);
        let y = RationalFn::var(1, 2);
        let one = RationalFn::one(2);
        let m = Matrix::from_rows(vec![vec![one.clone(), x.clone()], vec![y.clone(), one.clone()]]);
        let inv = m.inverse().unwrap();
        assert_eq!(m.mul(&inv), Matrix::identity(2, &one));
        let det = m.determinant();
        assert_eq!(det, RationalFn::from_poly(&Poly::one(2) - &(&Poly::var(0, 2) * &Poly::var(1, 2))));
    }

    #[test]
    fn singular_and_nullspace() {
        let m = Matrix::from_rows(vec![vec![rat(1, 1), rat(2, 1)], vec![rat(2, 1), rat(4, 1)]]);
        assert!(m.inverse().is_err());
        let ns = m.nullspace();
        assert_eq!(ns.len(), 1);
        assert!(m.mul_vec(&ns[0]).iter().all(|v| v.is_zero()));
        assert!(m.solve(&[rat(1, 1), rat(0, 1)]).is_none());
        assert!(m.solve(&[rat(1, 1), rat(2, 1)]).is_some());
    }
}
