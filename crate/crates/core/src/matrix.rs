//! Minimal dense matrices and univariate polynomials, generic over the scalar.

use crate::scalar::Scalar;
use std::fmt;
use std::ops::{Index, IndexMut};

#[derive(Clone, PartialEq)]
pub struct Mat<S> {
    n_rows: usize,
    n_cols: usize,
    data: Vec<S>,
}

impl<S: Scalar> Mat<S> {
    pub fn zeros(n_rows: usize, n_cols: usize) -> Self {
        Mat { n_rows, n_cols, data: vec![S::zero(); n_rows * n_cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = S::one();
        }
        m
    }

    pub fn from_fn(n_rows: usize, n_cols: usize, mut f: impl FnMut(usize, usize) -> S) -> Self {
        let mut data = Vec::with_capacity(n_rows * n_cols);
        for i in 0..n_rows {
            for j in 0..n_cols {
                data.push(f(i, j));
            }
        }
        Mat { n_rows, n_cols, data }
    }

    pub fn n_rows(&self) -> usize {
        self.n_rows
    }

    pub fn n_cols(&self) -> usize {
        self.n_cols
    }

    pub fn is_square(&self) -> bool {
        self.n_rows == self.n_cols
    }

    pub fn row(&self, i: usize) -> &[S] {
        &self.data[i * self.n_cols..(i + 1) * self.n_cols]
    }

    pub fn transpose(&self) -> Self {
        Mat::from_fn(self.n_cols, self.n_rows, |i, j| self[(j, i)].clone())
    }

    pub fn conj_transpose(&self) -> Self {
        Mat::from_fn(self.n_cols, self.n_rows, |i, j| self[(j, i)].conj_s())
    }

    pub fn matmul(&self, o: &Self) -> Self {
        assert_eq!(self.n_cols, o.n_rows, "dimension mismatch in matmul");
        let mut out: Mat<S> = Mat::zeros(self.n_rows, o.n_cols);
        for i in 0..self.n_rows {
            for l in 0..self.n_cols {
                let a = &self[(i, l)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..o.n_cols {
                    let b = &o[(l, j)];
                    if b.is_zero() {
                        continue;
                    }
                    let prod = a.clone() * b.clone();
                    let cur = out[(i, j)].clone();
                    out[(i, j)] = cur + prod;
                }
            }
        }
        out
    }

    pub fn sub_mat(&self, o: &Self) -> Self {
        assert_eq!((self.n_rows, self.n_cols), (o.n_rows, o.n_cols));
        Mat::from_fn(self.n_rows, self.n_cols, |i, j| self[(i, j)].clone() - o[(i, j)].clone())
    }

    pub fn add_mat(&self, o: &Self) -> Self {
        assert_eq!((self.n_rows, self.n_cols), (o.n_rows, o.n_cols));
        Mat::from_fn(self.n_rows, self.n_cols, |i, j| self[(i, j)].clone() + o[(i, j)].clone())
    }

    pub fn scale(&self, s: &S) -> Self {
        Mat::from_fn(self.n_rows, self.n_cols, |i, j| self[(i, j)].clone() * s.clone())
    }

    pub fn trace(&self) -> S {
        let mut t = S::zero();
        for i in 0..self.n_rows.min(self.n_cols) {
            t = t + self[(i, i)].clone();
        }
        t
    }

    pub fn map<T: Scalar>(&self, mut f: impl FnMut(&S) -> T) -> Mat<T> {
        Mat {
            n_rows: self.n_rows,
            n_cols: self.n_cols,
            data: self.data.iter().map(|x| f(x)).collect(),
        }
    }

    pub fn max_abs_c64(&self) -> f64 {
        self.data.iter().map(|x| x.to_c64_s().norm()).fold(0.0, f64::max)
    }

    /// Gauss–Jordan inverse; works over exact fields and complex floats
    /// (pivot chosen by float magnitude, first nonzero as a fallback).
    pub fn inverse(&self) -> Option<Mat<S>> {
        assert!(self.is_square());
        let n = self.n_rows;
        let mut a = self.clone();
        let mut inv = Mat::identity(n);
        for col in 0..n {
            let mut pivot = None;
            let mut best = -1.0f64;
            for r in col..n {
                if a[(r, col)].is_zero() {
                    continue;
                }
                let mag = a[(r, col)].to_c64_s().norm();
                if pivot.is_none() || mag > best {
                    pivot = Some(r);
                    best = mag;
                }
            }
            let pivot = pivot?;
            if pivot != col {
                for j in 0..n {
                    self.swap_entries(&mut a, pivot, col, j);
                    self.swap_entries(&mut inv, pivot, col, j);
                }
            }
            let scale = a[(col, col)].inv_s()?;
            for j in 0..n {
                a[(col, j)] = a[(col, j)].clone() * scale.clone();
                inv[(col, j)] = inv[(col, j)].clone() * scale.clone();
            }
            for r in 0..n {
                if r == col || a[(r, col)].is_zero() {
                    continue;
                }
                let f = a[(r, col)].clone();
                for j in 0..n {
                    let av = a[(col, j)].clone() * f.clone();
                    a[(r, j)] = a[(r, j)].clone() - av;
                    let iv = inv[(col, j)].clone() * f.clone();
                    inv[(r, j)] = inv[(r, j)].clone() - iv;
                }
            }
        }
        Some(inv)
    }

    fn swap_entries(&self, m: &mut Mat<S>, r1: usize, r2: usize, j: usize) {
        let tmp = m[(r1, j)].clone();
        m[(r1, j)] = m[(r2, j)].clone();
        m[(r2, j)] = tmp;
    }

    pub fn is_zero_mat(&self) -> bool {
        self.data.iter().all(|x| x.is_zero())
    }
}

impl<S> Index<(usize, usize)> for Mat<S> {
    type Output = S;
    fn index(&self, (i, j): (usize, usize)) -> &S {
        &self.data[i * self.n_cols + j]
    }
}

impl<S> IndexMut<(usize, usize)> for Mat<S> {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut S {
        &mut self.data[i * self.n_cols + j]
    }
}

impl<S: Scalar> fmt::Debug for Mat<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Mat {}x{} [", self.n_rows, self.n_cols)?;
        for i in 0..self.n_rows {
            write!(f, "  ")?;
            for j in 0..self.n_cols {
                write!(f, "{:?} ", self[(i, j)])?;
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}

/// Dense univariate polynomial, coefficients in ascending order.
#[derive(Clone, PartialEq)]
pub struct Poly<S> {
    coeffs: Vec<S>,
}

impl<S: Scalar> Poly<S> {
    pub fn zero() -> Self {
        Poly { coeffs: Vec::new() }
    }

    pub fn constant(c: S) -> Self {
        let mut p = Poly { coeffs: vec![c] };
        p.trim();
        p
    }

    pub fn from_coeffs(coeffs: Vec<S>) -> Self {
        let mut p = Poly { coeffs };
        p.trim();
        p
    }

    fn trim(&mut self) {
        while matches!(self.coeffs.last(), Some(c) if c.is_zero()) {
            self.coeffs.pop();
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        if self.is_zero() {
            None
        } else {
            Some(self.coeffs.len() - 1)
        }
    }

    pub fn coeff(&self, k: usize) -> S {
        self.coeffs.get(k).cloned().unwrap_or_else(S::zero)
    }

    pub fn coeffs(&self) -> &[S] {
        &self.coeffs
    }

    pub fn add(&self, o: &Self) -> Self {
        let n = self.coeffs.len().max(o.coeffs.len());
        let mut out = Vec::with_capacity(n);
        for k in 0..n {
            out.push(self.coeff(k) + o.coeff(k));
        }
        Poly::from_coeffs(out)
    }

    pub fn sub(&self, o: &Self) -> Self {
        let n = self.coeffs.len().max(o.coeffs.len());
        let mut out = Vec::with_capacity(n);
        for k in 0..n {
            out.push(self.coeff(k) - o.coeff(k));
        }
        Poly::from_coeffs(out)
    }

    pub fn neg(&self) -> Self {
        Poly::from_coeffs(self.coeffs.iter().map(|c| -c.clone()).collect())
    }

    pub fn mul(&self, o: &Self) -> Self {
        if self.is_zero() || o.is_zero() {
            return Poly::zero();
        }
        let mut out = vec![S::zero(); self.coeffs.len() + o.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.coeffs.iter().enumerate() {
                if b.is_zero() {
                    continue;
                }
                let cur = out[i + j].clone();
                out[i + j] = cur + a.clone() * b.clone();
            }
        }
        Poly::from_coeffs(out)
    }

    pub fn scale(&self, s: &S) -> Self {
        Poly::from_coeffs(self.coeffs.iter().map(|c| c.clone() * s.clone()).collect())
    }

    pub fn eval_c64(&self, x: num_complex::Complex64) -> num_complex::Complex64 {
        let mut acc = num_complex::Complex64::new(0.0, 0.0);
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c.to_c64_s();
        }
        acc
    }
}

impl<S: Scalar> fmt::Debug for Poly<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match k {
                0 => write!(f, "({c:?})")?,
                1 => write!(f, "({c:?})·g")?,
                _ => write!(f, "({c:?})·g^{k}")?,
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::ExactScalar;

    #[test]
    fn matmul_and_identity() {
        let a = Mat::from_fn(2, 2, |i, j| ExactScalar::from_int((2 * i + j + 1) as i64));
        let id = Mat::identity(2);
        assert_eq!(a.matmul(&id), a);
        let b = a.matmul(&a);
        // [[1,2],[3,4]]² = [[7,10],[15,22]]
        assert_eq!(b[(0, 0)], ExactScalar::from_int(7));
        assert_eq!(b[(0, 1)], ExactScalar::from_int(10));
        assert_eq!(b[(1, 0)], ExactScalar::from_int(15));
        assert_eq!(b[(1, 1)], ExactScalar::from_int(22));
    }

    #[test]
    fn poly_arithmetic() {
        // (1 + g)(1 − g) = 1 − g²
        let p = Poly::from_coeffs(vec![ExactScalar::from_int(1), ExactScalar::from_int(1)]);
        let q = Poly::from_coeffs(vec![ExactScalar::from_int(1), ExactScalar::from_int(-1)]);
        let r = p.mul(&q);
        assert_eq!(r.coeff(0), ExactScalar::from_int(1));
        assert_eq!(r.coeff(1), ExactScalar::from_int(0));
        assert_eq!(r.coeff(2), ExactScalar::from_int(-1));
        assert_eq!(r.degree(), Some(2));
    }
}
