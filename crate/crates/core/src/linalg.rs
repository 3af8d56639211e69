//! Dense matrices over the exact scalar ring, plus the few numeric helpers
//! (f64 conversion, symmetric eigenvalues) the rest of the crate needs.

use crate::error::{Error, Result};
use crate::scalar::Scalar;
use nalgebra::DMatrix;
use num::{BigInt, Signed};
use std::cmp::Ordering;
use std::fmt;

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Mat {
    rows: usize,
    cols: usize,
    data: Vec<Scalar>,
}

impl Mat {
    pub fn zeros(rows: usize, cols: usize) -> Mat {
        Mat { rows, cols, data: vec![Scalar::zero(); rows * cols] }
    }

    pub fn identity(k: usize) -> Mat {
        let mut m = Mat::zeros(k, k);
        for i in 0..k {
            m.set(i, i, Scalar::one());
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<Scalar>>) -> Mat {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        Mat { rows: r, cols: c, data: rows.into_iter().flatten().collect() }
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Scalar) -> Mat {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Mat { rows, cols, data }
    }

    pub fn nrows(&self) -> usize {
        self.rows
    }

    pub fn ncols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> &Scalar {
        &self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: Scalar) {
        self.data[r * self.cols + c] = v;
    }

    pub fn add_assign_at(&mut self, r: usize, c: usize, v: &Scalar) {
        let cur = self.get(r, c).clone();
        self.set(r, c, &cur + v);
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Scalar::is_zero)
    }

    pub fn add(&self, other: &Mat) -> Mat {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols), "shape mismatch");
        let data = self.data.iter().zip(&other.data).map(|(x, y)| x + y).collect();
        Mat { rows: self.rows, cols: self.cols, data }
    }

    pub fn sub(&self, other: &Mat) -> Mat {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols), "shape mismatch");
        let data = self.data.iter().zip(&other.data).map(|(x, y)| x - y).collect();
        Mat { rows: self.rows, cols: self.cols, data }
    }

    pub fn scale(&self, s: &Scalar) -> Mat {
        Mat { rows: self.rows, cols: self.cols, data: self.data.iter().map(|x| x * s).collect() }
    }

    pub fn matmul(&self, other: &Mat) -> Mat {
        assert_eq!(self.cols, other.rows, "shape mismatch");
        let mut out = Mat::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if b.is_zero() {
                        continue;
                    }
                    out.add_assign_at(i, j, &(a * b));
                }
            }
        }
        out
    }

    pub fn transpose(&self) -> Mat {
        Mat::from_fn(self.cols, self.rows, |i, j| self.get(j, i).clone())
    }

    pub fn kron(&self, other: &Mat) -> Mat {
        let mut out = Mat::zeros(self.rows * other.rows, self.cols * other.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                let a = self.get(i, j);
                if a.is_zero() {
                    continue;
                }
                for k in 0..other.rows {
                    for l in 0..other.cols {
                        let b = other.get(k, l);
                        if b.is_zero() {
                            continue;
                        }
                        out.set(i * other.rows + k, j * other.cols + l, a * b);
                    }
                }
            }
        }
        out
    }

    pub fn is_symmetric(&self) -> bool {
        self.rows == self.cols
            && (0..self.rows).all(|i| (0..i).all(|j| self.get(i, j) == self.get(j, i)))
    }

    pub fn to_f64(&self) -> DMatrix<f64> {
        DMatrix::from_fn(self.rows, self.cols, |i, j| self.get(i, j).to_f64())
    }

    /// Exact inverse by Gauss-Jordan elimination.
    pub fn inverse(&self) -> Result<Mat> {
        assert_eq!(self.rows, self.cols, "inverse of non-square matrix");
        let n = self.rows;
        let mut a = self.clone();
        let mut inv = Mat::identity(n);
        for col in 0..n {
            let pivot = (col..n)
                .find(|&r| !a.get(r, col).is_zero())
                .ok_or(Error::Singular)?;
            if pivot != col {
                a.swap_rows(pivot, col);
                inv.swap_rows(pivot, col);
            }
            let pinv = a.get(col, col).inv();
            for j in 0..n {
                a.set(col, j, a.get(col, j) * &pinv);
                inv.set(col, j, inv.get(col, j) * &pinv);
            }
            for r in 0..n {
                if r == col || a.get(r, col).is_zero() {
                    continue;
                }
                let factor = a.get(r, col).clone();
                for j in 0..n {
                    let v = a.get(r, j) - &(&factor * a.get(col, j));
                    a.set(r, j, v);
                    let v = inv.get(r, j) - &(&factor * inv.get(col, j));
                    inv.set(r, j, v);
                }
            }
        }
        Ok(inv)
    }

    fn swap_rows(&mut self, i: usize, j: usize) {
        if i == j {
            return;
        }
        for c in 0..self.cols {
            self.data.swap(i * self.cols + c, j * self.cols + c);
        }
    }

    /// Exact LDL^T factorization of a symmetric positive definite matrix:
    /// self = L * diag(d) * L^T with L unit lower triangular. Errors when a
    /// pivot fails the exact positivity test.
    pub fn ldl(&self) -> Result<(Mat, Vec<Scalar>)> {
        assert!(self.is_symmetric(), "ldl of non-symmetric matrix");
        let n = self.rows;
        let mut l = Mat::identity(n);
        let mut d: Vec<Scalar> = Vec::with_capacity(n);
        for j in 0..n {
            let mut dj = self.get(j, j).clone();
            for k in 0..j {
                let ljk = l.get(j, k);
                dj = &dj - &(&(ljk * ljk) * &d[k]);
            }
            if dj.sign() != Ordering::Greater {
                return Err(Error::NotPositiveDefinite);
            }
            let dinv = dj.inv();
            for i in j + 1..n {
                let mut v = self.get(i, j).clone();
                for k in 0..j {
                    v = &v - &(&(l.get(i, k) * l.get(j, k)) * &d[k]);
                }
                l.set(i, j, &v * &dinv);
            }
            d.push(dj);
        }
        Ok((l, d))
    }

    /// Exact rank over the scalar field.
    pub fn rank(&self) -> usize {
        let mut a = self.clone();
        let mut rank = 0;
        for col in 0..a.cols {
            let pivot = match (rank..a.rows).find(|&r| !a.get(r, col).is_zero()) {
                Some(r) => r,
                None => continue,
            };
            a.swap_rows(pivot, rank);
            let pinv = a.get(rank, col).inv();
            for r in rank + 1..a.rows {
                if a.get(r, col).is_zero() {
                    continue;
                }
                let factor = a.get(r, col) * &pinv;
                for j in col..a.cols {
                    let v = a.get(r, j) - &(&factor * a.get(rank, j));
                    a.set(r, j, v);
                }
            }
            rank += 1;
            if rank == a.rows {
                break;
            }
        }
        rank
    }

    /// Rank of a rational matrix reduced modulo the Mersenne prime 2^61 - 1.
    /// Full rank modulo the prime certifies full rank over the rationals; a
    /// smaller modular rank is only a lower bound.
    pub fn rank_mod_m61(&self) -> Result<usize> {
        let mut a: Vec<Vec<u64>> = Vec::with_capacity(self.rows);
        for i in 0..self.rows {
            let mut row = Vec::with_capacity(self.cols);
            for j in 0..self.cols {
                let s = self.get(i, j);
                let r = s.as_rational().ok_or_else(|| {
                    Error::BadInput("modular rank needs rational entries".into())
                })?;
                row.push(residue_m61(r.numer(), r.denom())?);
            }
            a.push(row);
        }
        let mut rank = 0;
        for col in 0..self.cols {
            let pivot = match (rank..self.rows).find(|&r| a[r][col] != 0) {
                Some(r) => r,
                None => continue,
            };
            a.swap(pivot, rank);
            let pinv = inv_m61(a[rank][col]);
            for r in rank + 1..self.rows {
                if a[r][col] == 0 {
                    continue;
                }
                let factor = mul_m61(a[r][col], pinv);
                for j in col..self.cols {
                    let sub = mul_m61(factor, a[rank][j]);
                    a[r][j] = sub_m61(a[r][j], sub);
                }
            }
            rank += 1;
            if rank == self.rows {
                break;
            }
        }
        Ok(rank)
    }
}

impl fmt::Display for Mat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            let row: Vec<String> = (0..self.cols).map(|j| self.get(i, j).to_string()).collect();
            writeln!(f, "[{}]", row.join(", "))?;
        }
        Ok(())
    }
}

pub const M61: u64 = (1 << 61) - 1;

fn mul_m61(a: u64, b: u64) -> u64 {
    ((a as u128 * b as u128) % M61 as u128) as u64
}

fn sub_m61(a: u64, b: u64) -> u64 {
    (a + M61 - b) % M61
}

fn pow_m61(mut base: u64, mut e: u64) -> u64 {
    let mut acc = 1u64;
    while e > 0 {
        if e & 1 == 1 {
            acc = mul_m61(acc, base);
        }
        base = mul_m61(base, base);
        e >>= 1;
    }
    acc
}

fn inv_m61(a: u64) -> u64 {
    pow_m61(a, M61 - 2)
}

fn residue_m61(numer: &BigInt, denom: &BigInt) -> Result<u64> {
    let m = BigInt::from(M61);
    let to_res = |x: &BigInt| -> u64 {
        let mut r = x % &m;
        if r.is_negative() {
            r += &m;
        }
        u64::try_from(r).expect("residue fits u64")
    };
    let den = to_res(denom);
    if den == 0 {
        return Err(Error::BadInput("denominator divisible by 2^61 - 1".into()));
    }
    Ok(mul_m61(to_res(numer), inv_m61(den)))
}

/// Smallest eigenvalue of a symmetric matrix.
pub fn sym_min_eig(m: &DMatrix<f64>) -> f64 {
    m.clone()
        .symmetric_eigen()
        .eigenvalues
        .iter()
        .cloned()
        .fold(f64::INFINITY, f64::min)
}

pub fn max_abs(m: &DMatrix<f64>) -> f64 {
    m.iter().fold(0.0f64, |acc, v| acc.max(v.abs()))
}
