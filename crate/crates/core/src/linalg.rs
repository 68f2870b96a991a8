//! Dense matrices over a prime field `F_p`, `p < 2³¹`.
//!
//! A matrix of shape `rows × cols` represents a linear map `F_p^cols → F_p^rows`
//! acting on column vectors.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const MAX_PRIME: u64 = 1 << 31;

pub fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= p {
        if p % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

pub fn check_prime(p: u64) -> Result<()> {
    if p >= MAX_PRIME || !is_prime(p) {
        return Err(Error::Invalid(format!("{p} is not a prime below 2^31")));
    }
    Ok(())
}

fn inv_mod(a: u64, p: u64) -> u64 {
    debug_assert!(a % p != 0);
    // a^(p-2)
    let mut base = a % p;
    let mut e = p - 2;
    let mut acc = 1u64;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * base % p;
        }
        base = base * base % p;
        e >>= 1;
    }
    acc
}

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    p: u64,
    data: Vec<u64>,
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Matrix<F{}>{}x{}{:?}", self.p, self.rows, self.cols, self.to_rows())
    }
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize, p: u64) -> Matrix {
        Matrix { rows, cols, p, data: vec![0; rows * cols] }
    }

    pub fn identity(n: usize, p: u64) -> Matrix {
        let mut m = Matrix::zeros(n, n, p);
        for i in 0..n {
            m.set(i, i, 1);
        }
        m
    }

    /// Builds a matrix from rows, reducing entries mod `p`. `cols` fixes the
    /// width when there are no rows.
    pub fn from_rows(rows: &[Vec<i64>], cols: usize, p: u64) -> Result<Matrix> {
        let mut m = Matrix::zeros(rows.len(), cols, p);
        for (i, row) in rows.iter().enumerate() {
            if row.len() != cols {
                return Err(Error::Shape(format!("row {i} has {} entries, expected {cols}", row.len())));
            }
            for (j, &v) in row.iter().enumerate() {
                m.set(i, j, v.rem_euclid(p as i64) as u64);
            }
        }
        Ok(m)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn prime(&self) -> u64 {
        self.p
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> u64 {
        self.data[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: u64) {
        self.data[i * self.cols + j] = v % self.p;
    }

    pub fn to_rows(&self) -> Vec<Vec<i64>> {
        (0..self.rows).map(|i| (0..self.cols).map(|j| self.get(i, j) as i64).collect()).collect()
    }

    pub fn column(&self, j: usize) -> Vec<u64> {
        (0..self.rows).map(|i| self.get(i, j)).collect()
    }

    pub fn from_columns(cols: &[Vec<u64>], rows: usize, p: u64) -> Matrix {
        let mut m = Matrix::zeros(rows, cols.len(), p);
        for (j, c) in cols.iter().enumerate() {
            for (i, &v) in c.iter().enumerate() {
                m.set(i, j, v);
            }
        }
        m
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&v| v == 0)
    }

    pub fn is_identity(&self) -> bool {
        self.rows == self.cols && (0..self.rows).all(|i| (0..self.cols).all(|j| self.get(i, j) == u64::from(i == j)))
    }

    pub fn transpose(&self) -> Matrix {
        let mut t = Matrix::zeros(self.cols, self.rows, self.p);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j));
            }
        }
        t
    }

    /// `self · rhs`.
    pub fn mul(&self, rhs: &Matrix) -> Matrix {
        assert_eq!(self.cols, rhs.rows, "matrix product shape mismatch");
        assert_eq!(self.p, rhs.p);
        let mut out = Matrix::zeros(self.rows, rhs.cols, self.p);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a == 0 {
                    continue;
                }
                for j in 0..rhs.cols {
                    let idx = i * out.cols + j;
                    out.data[idx] = (out.data[idx] + a * rhs.get(k, j)) % self.p;
                }
            }
        }
        out
    }

    pub fn add(&self, rhs: &Matrix) -> Matrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        let data = self.data.iter().zip(&rhs.data).map(|(a, b)| (a + b) % self.p).collect();
        Matrix { rows: self.rows, cols: self.cols, p: self.p, data }
    }

    pub fn neg(&self) -> Matrix {
        let data = self.data.iter().map(|&a| (self.p - a) % self.p).collect();
        Matrix { rows: self.rows, cols: self.cols, p: self.p, data }
    }

    pub fn apply(&self, v: &[u64]) -> Vec<u64> {
        (0..self.rows).map(|i| (0..self.cols).fold(0, |acc, j| (acc + self.get(i, j) * v[j]) % self.p)).collect()
    }

    /// Reduced row echelon form and pivot columns. Pivots are chosen as the
    /// first nonzero entry scanning rows top-down, so the result is canonical.
    pub fn rref(&self) -> (Matrix, Vec<usize>) {
        let mut m = self.clone();
        let p = self.p;
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..m.cols {
            if r == m.rows {
                break;
            }
            let Some(pr) = (r..m.rows).find(|&i| m.get(i, c) != 0) else { continue };
            if pr != r {
                for j in 0..m.cols {
                    m.data.swap(pr * m.cols + j, r * m.cols + j);
                }
            }
            let inv = inv_mod(m.get(r, c), p);
            for j in 0..m.cols {
                let v = m.get(r, j) * inv % p;
                m.set(r, j, v);
            }
            for i in 0..m.rows {
                if i == r {
                    continue;
                }
                let f = m.get(i, c);
                if f == 0 {
                    continue;
                }
                for j in 0..m.cols {
                    let v = (m.get(i, j) + (p - f) * m.get(r, j)) % p;
                    m.set(i, j, v);
                }
            }
            pivots.push(c);
            r += 1;
        }
        (m, pivots)
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    /// Basis of the kernel, one vector per free column in increasing order.
    pub fn nullspace(&self) -> Vec<Vec<u64>> {
        let (r, pivots) = self.rref();
        let p = self.p;
        let mut is_pivot = vec![false; self.cols];
        for &c in &pivots {
            is_pivot[c] = true;
        }
        let mut basis = Vec::new();
        for free in (0..self.cols).filter(|&c| !is_pivot[c]) {
            let mut v = vec![0u64; self.cols];
            v[free] = 1;
            for (row, &pc) in pivots.iter().enumerate() {
                v[pc] = (p - r.get(row, free)) % p;
            }
            basis.push(v);
        }
        basis
    }

    /// Some `x` with `self · x = b`, or `None` when the system is inconsistent.
    /// Free variables are set to zero.
    pub fn solve(&self, b: &[u64]) -> Option<Vec<u64>> {
        assert_eq!(b.len(), self.rows);
        let mut aug = Matrix::zeros(self.rows, self.cols + 1, self.p);
        for i in 0..self.rows {
            for j in 0..self.cols {
                aug.set(i, j, self.get(i, j));
            }
            aug.set(i, self.cols, b[i]);
        }
        let (r, pivots) = aug.rref();
        if pivots.last() == Some(&self.cols) {
            return None;
        }
        let mut x = vec![0u64; self.cols];
        for (row, &pc) in pivots.iter().enumerate() {
            x[pc] = r.get(row, self.cols);
        }
        Some(x)
    }

    pub fn inverse(&self) -> Option<Matrix> {
        if self.rows != self.cols {
            return None;
        }
        let n = self.rows;
        let mut cols = Vec::with_capacity(n);
        for j in 0..n {
            let mut e = vec![0u64; n];
            e[j] = 1;
            cols.push(self.solve(&e)?);
        }
        Some(Matrix::from_columns(&cols, n, self.p))
    }
}

/// JSON form: a list of rows.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct MatrixRows(pub Vec<Vec<i64>>);

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn prime_checks() {
        assert!(is_prime(2) && is_prime(3) && is_prime(2_147_483_647));
        assert!(!is_prime(1) && !is_prime(9));
        assert!(check_prime(4).is_err());
    }

    #[test]
    fn rank_and_nullspace_over_f2() {
        let m = Matrix::from_rows(&[vec![1, 1, 0], vec![0, 1, 1], vec![1, 0, 1]], 3, 2).unwrap();
        assert_eq!(m.rank(), 2);
        let ns = m.nullspace();
        assert_eq!(ns, vec![vec![1, 1, 1]]);
        assert!(m.apply(&ns[0]).iter().all(|&v| v == 0));
    }

    #[test]
    fn solve_and_inverse_over_f5() {
        let m = Matrix::from_rows(&[vec![2, 1], vec![1, 4]], 2, 5).unwrap();
        let inv = m.inverse().unwrap();
        assert!(m.mul(&inv).is_identity());
        let x = m.solve(&[1, 0]).unwrap();
        assert_eq!(m.apply(&x), vec![1, 0]);
        let sing = Matrix::from_rows(&[vec![1, 1], vec![1, 1]], 2, 2).unwrap();
        assert!(sing.solve(&[1, 0]).is_none());
        assert!(sing.inverse().is_none());
    }

    #[test]
    fn empty_shapes() {
        let a = Matrix::zeros(0, 3, 2);
        let b = Matrix::zeros(3, 0, 2);
        assert_eq!(a.mul(&b).rows(), 0);
        assert_eq!(b.mul(&a).rows(), 3);
        assert!(b.mul(&a).is_zero());
        assert_eq!(Matrix::identity(0, 2).inverse().unwrap().rows(), 0);
    }

    #[test]
    fn negative_entries_reduce() {
        let m = Matrix::from_rows(&[vec![-1]], 1, 3).unwrap();
        assert_eq!(m.get(0, 0), 2);
        assert_eq!(m.neg().get(0, 0), 1);
    }
}
