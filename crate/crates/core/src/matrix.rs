//! Dense square matrices over arbitrary-precision integers.
//!
//! Supplies the exact linear algebra the degree computations rest on:
//! products and powers, fraction-free determinants, characteristic
//! polynomials, adjugates and block extraction.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use rand::Rng;

use crate::error::{Error, Result};

/// A square matrix with `BigInt` entries, stored row-major.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntMatrix {
    size: usize,
    entries: Vec<BigInt>,
}

impl IntMatrix {
    pub fn from_rows(rows: Vec<Vec<BigInt>>) -> Result<Self> {
        let size = rows.len();
        if size == 0 {
            return Err(Error::InvalidInput("matrix must be nonempty".into()));
        }
        let mut entries = Vec::with_capacity(size * size);
        for row in &rows {
            if row.len() != size {
                return Err(Error::InvalidInput(format!(
                    "matrix is not square: row of length {} in a {}-row matrix",
                    row.len(),
                    size
                )));
            }
            entries.extend(row.iter().cloned());
        }
        Ok(Self { size, entries })
    }

    pub fn from_i64_rows(rows: &[Vec<i64>]) -> Result<Self> {
        Self::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&x| BigInt::from(x)).collect())
                .collect(),
        )
    }

    pub fn identity(size: usize) -> Self {
        let mut m = Self::zero(size);
        for i in 0..size {
            *m.at_mut(i, i) = BigInt::one();
        }
        m
    }

    pub fn zero(size: usize) -> Self {
        Self {
            size,
            entries: vec![BigInt::zero(); size * size],
        }
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn at(&self, i: usize, j: usize) -> &BigInt {
        &self.entries[i * self.size + j]
    }

    pub fn at_mut(&mut self, i: usize, j: usize) -> &mut BigInt {
        &mut self.entries[i * self.size + j]
    }

    pub fn row(&self, i: usize) -> &[BigInt] {
        &self.entries[i * self.size..(i + 1) * self.size]
    }

    pub fn rows(&self) -> impl Iterator<Item = &[BigInt]> {
        self.entries.chunks(self.size)
    }

    pub fn transpose(&self) -> Self {
        let mut out = Self::zero(self.size);
        for i in 0..self.size {
            for j in 0..self.size {
                *out.at_mut(j, i) = self.at(i, j).clone();
            }
        }
        out
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.size, other.size, "size mismatch in matrix product");
        let n = self.size;
        let mut out = Self::zero(n);
        for i in 0..n {
            for k in 0..n {
                let a = self.at(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..n {
                    let b = other.at(k, j);
                    if !b.is_zero() {
                        *out.at_mut(i, j) += a * b;
                    }
                }
            }
        }
        out
    }

    /// Exact `n`-th power by binary exponentiation; `pow(0)` is the identity.
    pub fn pow(&self, n: u64) -> Self {
        let mut result = Self::identity(self.size);
        let mut base = self.clone();
        let mut e = n;
        while e > 0 {
            if e & 1 == 1 {
                result = result.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        result
    }

    /// Determinant by fraction-free (Bareiss) elimination.
    pub fn det(&self) -> BigInt {
        let n = self.size;
        let mut m = self.entries.clone();
        let mut sign = 1i32;
        let mut prev = BigInt::one();
        for k in 0..n {
            // pivot search
            if m[k * n + k].is_zero() {
                let mut found = None;
                for i in k + 1..n {
                    if !m[i * n + k].is_zero() {
                        found = Some(i);
                        break;
                    }
                }
                match found {
                    Some(i) => {
                        for j in 0..n {
                            m.swap(k * n + j, i * n + j);
                        }
                        sign = -sign;
                    }
                    None => return BigInt::zero(),
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let num = &m[i * n + j] * &m[k * n + k] - &m[i * n + k] * &m[k * n + j];
                    m[i * n + j] = &num / &prev;
                }
                m[i * n + k] = BigInt::zero();
            }
            prev = m[k * n + k].clone();
        }
        let d = m[(n - 1) * n + (n - 1)].clone();
        if sign < 0 {
            -d
        } else {
            d
        }
    }

    /// Characteristic polynomial `det(xI - A)` by the Faddeev-LeVerrier
    /// recurrence; all divisions are exact over the integers.
    ///
    /// Coefficients are returned in ascending order, so the leading
    /// coefficient (always 1) is last.
    pub fn char_poly(&self) -> Vec<BigInt> {
        let n = self.size;
        let mut coeffs = vec![BigInt::zero(); n + 1];
        coeffs[n] = BigInt::one();
        let mut m = self.clone();
        for j in 1..=n {
            let tr: BigInt = (0..n).map(|i| m.at(i, i).clone()).sum();
            let c = -tr / BigInt::from(j as u64);
            coeffs[n - j] = c.clone();
            if j < n {
                let mut shifted = m;
                for i in 0..n {
                    *shifted.at_mut(i, i) += &c;
                }
                m = self.mul(&shifted);
            }
        }
        coeffs
    }

    /// Adjugate matrix, so `self * adj = det * I`.
    pub fn adjugate(&self) -> Self {
        let n = self.size;
        if n == 1 {
            return Self::identity(1);
        }
        let mut out = Self::zero(n);
        for i in 0..n {
            for j in 0..n {
                let minor = self.minor(i, j);
                let cof = minor.det();
                *out.at_mut(j, i) = if (i + j) % 2 == 0 { cof } else { -cof };
            }
        }
        out
    }

    fn minor(&self, row: usize, col: usize) -> Self {
        let n = self.size;
        let mut entries = Vec::with_capacity((n - 1) * (n - 1));
        for i in 0..n {
            if i == row {
                continue;
            }
            for j in 0..n {
                if j == col {
                    continue;
                }
                entries.push(self.at(i, j).clone());
            }
        }
        Self {
            size: n - 1,
            entries,
        }
    }

    /// Exact inverse of a unimodular matrix (`det = ±1`).
    pub fn unimodular_inverse(&self) -> Result<Self> {
        let d = self.det();
        if d.abs() != BigInt::one() {
            return Err(Error::InvalidInput(format!(
                "matrix determinant is {d}, not ±1; no integer inverse"
            )));
        }
        let adj = self.adjugate();
        if d == BigInt::one() {
            Ok(adj)
        } else {
            let mut neg = adj;
            for e in neg.entries.iter_mut() {
                *e = -std::mem::take(e);
            }
            Ok(neg)
        }
    }

    /// Submatrix at the given row and column ranges (used for fibration blocks).
    pub fn block(&self, rows: std::ops::Range<usize>, cols: std::ops::Range<usize>) -> Self {
        let size = rows.len();
        assert_eq!(size, cols.len(), "blocks must be square");
        let mut entries = Vec::with_capacity(size * size);
        for i in rows {
            for j in cols.clone() {
                entries.push(self.at(i, j).clone());
            }
        }
        Self { size, entries }
    }

    pub fn is_zero_block(
        &self,
        rows: std::ops::Range<usize>,
        cols: std::ops::Range<usize>,
    ) -> bool {
        for i in rows {
            for j in cols.clone() {
                if !self.at(i, j).is_zero() {
                    return false;
                }
            }
        }
        true
    }

    /// Block-diagonal assembly of two square matrices.
    pub fn block_diag(top: &Self, bottom: &Self) -> Self {
        let n = top.size + bottom.size;
        let mut out = Self::zero(n);
        for i in 0..top.size {
            for j in 0..top.size {
                *out.at_mut(i, j) = top.at(i, j).clone();
            }
        }
        for i in 0..bottom.size {
            for j in 0..bottom.size {
                *out.at_mut(top.size + i, top.size + j) = bottom.at(i, j).clone();
            }
        }
        out
    }
}

/// A random element of `GL(k, Z)` built from bounded elementary row
/// operations and permutations, so entries stay small.
pub fn random_unimodular<R: Rng>(rng: &mut R, size: usize, steps: usize) -> IntMatrix {
    let mut m = IntMatrix::identity(size);
    for _ in 0..steps {
        let i = rng.gen_range(0..size);
        let mut j = rng.gen_range(0..size);
        while j == i && size > 1 {
            j = rng.gen_range(0..size);
        }
        match rng.gen_range(0..3u8) {
            0 if size > 1 => {
                // row_i += c * row_j
                let c = BigInt::from(rng.gen_range(-2i64..=2));
                for col in 0..size {
                    let add = &c * m.at(j, col);
                    *m.at_mut(i, col) += add;
                }
            }
            1 if size > 1 => {
                for col in 0..size {
                    let a = m.at(i, col).clone();
                    let b = m.at(j, col).clone();
                    *m.at_mut(i, col) = b;
                    *m.at_mut(j, col) = a;
                }
            }
            _ => {
                for col in 0..size {
                    let v = -m.at(i, col).clone();
                    *m.at_mut(i, col) = v;
                }
            }
        }
    }
    m
}
