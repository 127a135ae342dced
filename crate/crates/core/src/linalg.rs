//! Exact dense linear algebra over the rationals.
//!
//! Rank and determinant go through Bareiss fraction-free elimination on an
//! integer matrix obtained by clearing row denominators. A small generic
//! Gauss–Jordan routine covers other exact fields (Gaussian rationals).

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::symbolic::{Gaussian, Rational};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExactMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<Rational>,
}

impl ExactMatrix {
    pub fn new(rows: usize, cols: usize, entries: Vec<Rational>) -> Result<Self> {
        if entries.len() != rows * cols {
            return Err(Error::DimensionMismatch(format!(
                "{} entries for a {rows}x{cols} matrix",
                entries.len()
            )));
        }
        Ok(ExactMatrix { rows, cols, entries })
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        ExactMatrix { rows, cols, entries: vec![<Rational as Zero>::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, <Rational as One>::one());
        }
        m
    }

    /// Builds from row vectors; every row must have length `cols`.
    pub fn from_rows(cols: usize, rows: Vec<Vec<Rational>>) -> Result<Self> {
        let r = rows.len();
        if let Some(bad) = rows.iter().find(|row| row.len() != cols) {
            return Err(Error::DimensionMismatch(format!("row of length {} in {cols}-column matrix", bad.len())));
        }
        Self::new(r, cols, rows.into_iter().flatten().collect())
    }

    pub fn from_i64(rows: &[&[i64]]) -> Self {
        let cols = rows.first().map_or(0, |r| r.len());
        Self::from_rows(
            cols,
            rows.iter().map(|r| r.iter().map(|&x| Rational::from_integer(x.into())).collect()).collect(),
        )
        .expect("rectangular input")
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> &Rational {
        &self.entries[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: Rational) {
        self.entries[r * self.cols + c] = v;
    }

    pub fn row(&self, r: usize) -> &[Rational] {
        &self.entries[r * self.cols..(r + 1) * self.cols]
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(Zero::is_zero)
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t.set(c, r, self.get(r, c).clone());
            }
        }
        t
    }

    pub fn mul(&self, o: &Self) -> Result<Self> {
        if self.cols != o.rows {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} times {}x{}",
                self.rows, self.cols, o.rows, o.cols
            )));
        }
        let mut out = Self::zeros(self.rows, o.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if Zero::is_zero(a) {
                    continue;
                }
                for j in 0..o.cols {
                    let v = out.get(i, j) + a * o.get(k, j);
                    out.set(i, j, v);
                }
            }
        }
        Ok(out)
    }

    /// Rows scaled to integers, plus the product of the scale factors.
    fn integer_rows(&self) -> (Vec<Vec<BigInt>>, BigInt) {
        let mut scale = BigInt::one();
        let rows = (0..self.rows)
            .map(|r| {
                let row = self.row(r);
                let l = row.iter().fold(BigInt::one(), |acc, q| acc.lcm(q.denom()));
                scale *= &l;
                row.iter().map(|q| q.numer() * (&l / q.denom())).collect()
            })
            .collect();
        (rows, scale)
    }

    /// Rank over the rationals.
    pub fn rank(&self) -> usize {
        let (mut a, _) = self.integer_rows();
        bareiss(&mut a, self.cols).0
    }

    /// `cols - rank`.
    pub fn kernel_dim(&self) -> usize {
        self.cols - self.rank()
    }

    pub fn determinant(&self) -> Result<Rational> {
        if self.rows != self.cols {
            return Err(Error::DimensionMismatch(format!("determinant of {}x{} matrix", self.rows, self.cols)));
        }
        if self.rows == 0 {
            return Ok(<Rational as One>::one());
        }
        let (mut a, scale) = self.integer_rows();
        let (rank, swaps) = bareiss(&mut a, self.cols);
        if rank < self.rows {
            return Ok(<Rational as Zero>::zero());
        }
        let n = self.rows;
        let mut det = Rational::new(a[n - 1][n - 1].clone(), scale);
        if swaps % 2 == 1 {
            det = -det;
        }
        Ok(det)
    }
}

/// In-place fraction-free elimination to row echelon form. Returns the rank
/// and the number of row swaps.
fn bareiss(a: &mut [Vec<BigInt>], cols: usize) -> (usize, usize) {
    let rows = a.len();
    let mut prev = BigInt::one();
    let mut k = 0;
    let mut swaps = 0;
    for col in 0..cols {
        if k == rows {
            break;
        }
        let Some(p) = (k..rows).find(|&r| !a[r][col].is_zero()) else {
            continue;
        };
        if p != k {
            a.swap(p, k);
            swaps += 1;
        }
        let (top, rest) = a.split_at_mut(k + 1);
        let pivot_row = &top[k];
        for row in rest.iter_mut() {
            for j in col + 1..cols {
                let v = &pivot_row[col] * &row[j] - &row[col] * &pivot_row[j];
                debug_assert!((&v % &prev).is_zero());
                row[j] = v / &prev;
            }
            row[col] = BigInt::zero();
        }
        prev = a[k][col].clone();
        k += 1;
    }
    (k, swaps)
}

impl fmt::Display for ExactMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for r in 0..self.rows {
            let row: Vec<String> = self.row(r).iter().map(|q| q.to_string()).collect();
            writeln!(f, "[{}]", row.join(", "))?;
        }
        Ok(())
    }
}

/// Minimal exact field interface for [`rank_over`] and [`det_over`].
pub trait ExactField: Clone {
    fn zero() -> Self;
    fn one() -> Self;
    fn is_zero(&self) -> bool;
    fn sub(&self, o: &Self) -> Self;
    fn mul(&self, o: &Self) -> Self;
    fn div(&self, o: &Self) -> Self;
}

impl ExactField for Rational {
    fn zero() -> Self {
        Zero::zero()
    }
    fn one() -> Self {
        One::one()
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn sub(&self, o: &Self) -> Self {
        self - o
    }
    fn mul(&self, o: &Self) -> Self {
        self * o
    }
    fn div(&self, o: &Self) -> Self {
        self / o
    }
}

impl ExactField for Gaussian {
    fn zero() -> Self {
        Zero::zero()
    }
    fn one() -> Self {
        One::one()
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn sub(&self, o: &Self) -> Self {
        self - o
    }
    fn mul(&self, o: &Self) -> Self {
        self * o
    }
    fn div(&self, o: &Self) -> Self {
        self / o
    }
}

/// Gaussian elimination; returns the reduced rows, rank and swap parity.
fn eliminate<F: ExactField>(mut a: Vec<Vec<F>>) -> (Vec<Vec<F>>, usize, bool) {
    let rows = a.len();
    let cols = a.first().map_or(0, Vec::len);
    let mut k = 0;
    let mut odd = false;
    for col in 0..cols {
        if k == rows {
            break;
        }
        let Some(p) = (k..rows).find(|&r| !a[r][col].is_zero()) else {
            continue;
        };
        if p != k {
            a.swap(p, k);
            odd = !odd;
        }
        for r in k + 1..rows {
            if a[r][col].is_zero() {
                continue;
            }
            let f = a[r][col].div(&a[k][col]);
            for j in col..cols {
                let v = a[r][j].sub(&f.mul(&a[k][j]));
                a[r][j] = v;
            }
        }
        k += 1;
    }
    (a, k, odd)
}

pub fn rank_over<F: ExactField>(rows: Vec<Vec<F>>) -> usize {
    eliminate(rows).1
}

/// Determinant of a square matrix given by rows.
pub fn det_over<F: ExactField>(rows: Vec<Vec<F>>) -> F {
    let n = rows.len();
    assert!(rows.iter().all(|r| r.len() == n), "square matrix");
    let (a, rank, odd) = eliminate(rows);
    if rank < n {
        return F::zero();
    }
    let mut d = F::one();
    for (i, row) in a.iter().enumerate() {
        d = d.mul(&row[i]);
    }
    if odd {
        F::zero().sub(&d)
    } else {
        d
    }
}
