//! Dense matrices over `K` with fraction-free elimination.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::error::{Error, Result};
use crate::field::{FieldParams, PadicScalar};

#[derive(Clone)]
pub struct KMatrix {
    params: FieldParams,
    rows: usize,
    cols: usize,
    data: Vec<PadicScalar>,
}

impl KMatrix {
    pub fn zeros(params: FieldParams, rows: usize, cols: usize) -> Self {
        Self { params, rows, cols, data: vec![PadicScalar::zero(params); rows * cols] }
    }

    pub fn identity(params: FieldParams, n: usize) -> Self {
        Self::from_fn(params, n, n, |i, j| {
            if i == j {
                PadicScalar::one(params)
            } else {
                PadicScalar::zero(params)
            }
        })
    }

    pub fn from_fn(
        params: FieldParams,
        rows: usize,
        cols: usize,
        mut f: impl FnMut(usize, usize) -> PadicScalar,
    ) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Self { params, rows, cols, data }
    }

    /// Row-major entries.
    pub fn from_vec(params: FieldParams, rows: usize, cols: usize, data: Vec<PadicScalar>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::DimensionMismatch(format!(
                "{} entries for a {rows}x{cols} matrix",
                data.len()
            )));
        }
        Ok(Self { params, rows, cols, data })
    }

    /// Row-major integer entries.
    pub fn from_i64(params: FieldParams, rows: usize, cols: usize, entries: &[i64]) -> Result<Self> {
        Self::from_vec(params, rows, cols, entries.iter().map(|&x| PadicScalar::from_i64(params, x)).collect())
    }

    pub fn diag(params: FieldParams, d: &[PadicScalar]) -> Self {
        Self::from_fn(params, d.len(), d.len(), |i, j| if i == j { d[i] } else { PadicScalar::zero(params) })
    }

    pub fn params(&self) -> FieldParams {
        self.params
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

    pub fn get(&self, i: usize, j: usize) -> PadicScalar {
        self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, x: PadicScalar) {
        self.data[i * self.cols + j] = x;
    }

    pub fn entries(&self) -> &[PadicScalar] {
        &self.data
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.params, self.cols, self.rows, |i, j| self.get(j, i))
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} times {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        Ok(Self::from_fn(self.params, self.rows, other.cols, |i, j| {
            let mut acc = PadicScalar::zero(self.params);
            for k in 0..self.cols {
                let a = self.get(i, k);
                if !a.is_exact_zero() {
                    acc += a * other.get(k, j);
                }
            }
            acc
        }))
    }

    /// Matrix-vector product.
    pub fn apply(&self, v: &[PadicScalar]) -> Result<Vec<PadicScalar>> {
        if self.cols != v.len() {
            return Err(Error::DimensionMismatch(format!("{} columns, vector of {}", self.cols, v.len())));
        }
        Ok((0..self.rows)
            .map(|i| (0..self.cols).fold(PadicScalar::zero(self.params), |acc, k| acc + self.get(i, k) * v[k]))
            .collect())
    }

    fn check_same_shape(&self, other: &Self) -> Result<()> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} against {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_same_shape(other)?;
        Ok(Self::from_fn(self.params, self.rows, self.cols, |i, j| self.get(i, j) + other.get(i, j)))
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.check_same_shape(other)?;
        Ok(Self::from_fn(self.params, self.rows, self.cols, |i, j| self.get(i, j) - other.get(i, j)))
    }

    pub fn neg(&self) -> Self {
        Self::from_fn(self.params, self.rows, self.cols, |i, j| -self.get(i, j))
    }

    pub fn scale(&self, c: &PadicScalar) -> Self {
        Self::from_fn(self.params, self.rows, self.cols, |i, j| self.get(i, j) * *c)
    }

    pub fn block(&self, r0: usize, c0: usize, rows: usize, cols: usize) -> Self {
        Self::from_fn(self.params, rows, cols, |i, j| self.get(r0 + i, c0 + j))
    }

    /// `[[a, b], [c, d]]` from four blocks of compatible shapes.
    pub fn from_blocks(a: &Self, b: &Self, c: &Self, d: &Self) -> Result<Self> {
        Self::vstack(&Self::hstack(a, b)?, &Self::hstack(c, d)?)
    }

    pub fn hstack(a: &Self, b: &Self) -> Result<Self> {
        if a.rows != b.rows {
            return Err(Error::DimensionMismatch("hstack with different row counts".into()));
        }
        Ok(Self::from_fn(a.params, a.rows, a.cols + b.cols, |i, j| {
            if j < a.cols {
                a.get(i, j)
            } else {
                b.get(i, j - a.cols)
            }
        }))
    }

    pub fn vstack(a: &Self, b: &Self) -> Result<Self> {
        if a.cols != b.cols {
            return Err(Error::DimensionMismatch("vstack with different column counts".into()));
        }
        Ok(Self::from_fn(a.params, a.rows + b.rows, a.cols, |i, j| {
            if i < a.rows {
                a.get(i, j)
            } else {
                b.get(i - a.rows, j)
            }
        }))
    }

    pub fn is_symmetric(&self) -> bool {
        self.is_square()
            && (0..self.rows).all(|i| (0..i).all(|j| self.get(i, j) == self.get(j, i)))
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|x| x.is_zero())
    }

    pub fn is_over_base(&self) -> bool {
        self.data.iter().all(|x| x.is_in_base())
    }

    /// Least valuation among nonzero entries.
    pub fn min_valuation(&self) -> Option<i64> {
        self.data.iter().filter_map(|x| x.valuation()).min()
    }

    /// Fraction-free elimination with full pivoting on the least valuation.
    ///
    /// When the remaining block vanishes at the tracked precision the result is
    /// a zero whose absolute precision follows from Sylvester's identity.
    pub fn det(&self) -> Result<PadicScalar> {
        if !self.is_square() {
            return Err(Error::DimensionMismatch("determinant of a non-square matrix".into()));
        }
        let n = self.rows;
        let params = self.params;
        let mut m = self.data.clone();
        let at = |i: usize, j: usize| i * n + j;
        let mut prev = PadicScalar::one(params);
        let mut negate = false;
        for k in 0..n {
            let mut best: Option<(usize, usize, i64)> = None;
            for i in k..n {
                for j in k..n {
                    if let Some(v) = m[at(i, j)].valuation() {
                        if best.is_none_or(|(_, _, b)| v < b) {
                            best = Some((i, j, v));
                        }
                    }
                }
            }
            let Some((pi, pj, _)) = best else {
                let r = (n - k) as i64;
                let a = (k..n)
                    .flat_map(|i| (k..n).map(move |j| (i, j)))
                    .filter_map(|(i, j)| m[at(i, j)].absolute_precision())
                    .min();
                return Ok(match a {
                    None => PadicScalar::zero(params),
                    Some(a) => PadicScalar::zero_mod(params, r * a - (r - 1) * prev.valuation().unwrap_or(0)),
                });
            };
            if pi != k {
                for j in 0..n {
                    m.swap(at(pi, j), at(k, j));
                }
                negate = !negate;
            }
            if pj != k {
                for i in 0..n {
                    m.swap(at(i, pj), at(i, k));
                }
                negate = !negate;
            }
            let pivot = m[at(k, k)];
            let prev_inv = prev.inv()?;
            for i in k + 1..n {
                for j in k + 1..n {
                    let v = (pivot * m[at(i, j)] - m[at(i, k)] * m[at(k, j)]) * prev_inv;
                    m[at(i, j)] = v;
                }
            }
            prev = pivot;
        }
        Ok(if negate { -prev } else { prev })
    }

    fn minor(&self, skip_row: usize, skip_col: usize) -> Self {
        let rows: Vec<usize> = (0..self.rows).filter(|&i| i != skip_row).collect();
        let cols: Vec<usize> = (0..self.cols).filter(|&j| j != skip_col).collect();
        Self::from_fn(self.params, rows.len(), cols.len(), |i, j| self.get(rows[i], cols[j]))
    }

    pub fn adjugate(&self) -> Result<Self> {
        if !self.is_square() {
            return Err(Error::DimensionMismatch("adjugate of a non-square matrix".into()));
        }
        let n = self.rows;
        if n == 1 {
            return Ok(Self::identity(self.params, 1));
        }
        let mut out = Self::zeros(self.params, n, n);
        for i in 0..n {
            for j in 0..n {
                let c = self.minor(j, i).det()?;
                out.set(i, j, if (i + j) % 2 == 0 { c } else { -c });
            }
        }
        Ok(out)
    }

    /// Inverse by Cramer's rule.
    pub fn inverse(&self) -> Result<Self> {
        let d = self.det()?;
        if d.is_zero() {
            return Err(Error::Singular);
        }
        Ok(self.adjugate()?.scale(&d.inv()?))
    }

    /// Rank of a matrix over `F = Q_p`, pivoting on the least valuation.
    pub fn rank_over_base(&self) -> Result<usize> {
        if !self.is_over_base() {
            return Err(Error::NotOverBase);
        }
        let (rows, cols) = (self.rows, self.cols);
        let mut m = self.data.clone();
        let at = |i: usize, j: usize| i * cols + j;
        let mut rank = 0;
        for k in 0..rows.min(cols) {
            let mut best: Option<(usize, usize, i64)> = None;
            for i in k..rows {
                for j in k..cols {
                    if let Some(v) = m[at(i, j)].valuation() {
                        if best.is_none_or(|(_, _, b)| v < b) {
                            best = Some((i, j, v));
                        }
                    }
                }
            }
            let Some((pi, pj, _)) = best else { break };
            for j in 0..cols {
                m.swap(at(pi, j), at(k, j));
            }
            for i in 0..rows {
                m.swap(at(i, pj), at(i, k));
            }
            let pivot = m[at(k, k)];
            if pivot.relative_precision() < self.params.floor() {
                return Err(Error::PrecisionLoss(format!(
                    "pivot {pivot} has too few significant digits"
                )));
            }
            let inv = pivot.inv()?;
            for i in k + 1..rows {
                let factor = m[at(i, k)] * inv;
                for j in k..cols {
                    let v = m[at(i, j)] - factor * m[at(k, j)];
                    m[at(i, j)] = v;
                }
            }
            rank += 1;
        }
        Ok(rank)
    }
}

impl PartialEq for KMatrix {
    fn eq(&self, other: &Self) -> bool {
        self.rows == other.rows && self.cols == other.cols && self.data == other.data
    }
}

impl fmt::Display for KMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for i in 0..self.rows {
            if i > 0 {
                write!(f, "; ")?;
            }
            for j in 0..self.cols {
                if j > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{}", self.get(i, j))?;
            }
        }
        write!(f, "]")
    }
}

impl fmt::Debug for KMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn k() -> FieldParams {
        FieldParams::new(5, 1, 20).unwrap()
    }

    #[test]
    fn small_determinants() {
        let k = k();
        assert_eq!(KMatrix::identity(k, 3).det().unwrap(), PadicScalar::one(k));
        let j = KMatrix::from_i64(k, 2, 2, &[0, 1, -1, 0]).unwrap();
        assert_eq!(j.det().unwrap(), PadicScalar::one(k));
        let m = KMatrix::from_i64(k, 3, 3, &[2, 7, 1, 5, 0, 3, 10, 25, 4]).unwrap();
        // 2(0 - 75) - 7(20 - 30) + (125 - 0) = 45
        assert_eq!(m.det().unwrap(), PadicScalar::from_i64(k, 45));
    }

    #[test]
    fn singular_determinant_keeps_precision() {
        let k = k();
        let m = KMatrix::from_i64(k, 2, 2, &[1, 2, 2, 4]).unwrap();
        let d = m.det().unwrap();
        assert!(d.is_zero());
        assert!(d.absolute_precision().unwrap() >= 20);
        assert_eq!(m.inverse().unwrap_err(), Error::Singular);
    }

    #[test]
    fn inverse_examples() {
        let k = k();
        assert_eq!(KMatrix::identity(k, 2).inverse().unwrap(), KMatrix::identity(k, 2));
        let five = PadicScalar::from_i64(k, 5);
        let d = KMatrix::diag(k, &[five, PadicScalar::one(k)]);
        let expected = KMatrix::diag(k, &[five.inv().unwrap(), PadicScalar::one(k)]);
        assert_eq!(d.inverse().unwrap(), expected);
    }

    #[test]
    fn ranks() {
        let k = k();
        let i2 = KMatrix::identity(k, 2);
        let z2 = KMatrix::zeros(k, 2, 2);
        assert_eq!(KMatrix::hstack(&i2, &z2).unwrap().rank_over_base().unwrap(), 2);
        assert_eq!(KMatrix::hstack(&z2, &i2).unwrap().rank_over_base().unwrap(), 2);
        let m = KMatrix::from_i64(k, 2, 2, &[1, 2, 2, 4]).unwrap();
        assert_eq!(m.rank_over_base().unwrap(), 1);
        let kk = FieldParams::new(5, 2, 10).unwrap();
        let pi = KMatrix::diag(kk, &[PadicScalar::pi(kk)]);
        assert_eq!(pi.rank_over_base().unwrap_err(), Error::NotOverBase);
    }
}
