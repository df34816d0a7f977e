//! Small dense square matrices over the integers with checked i128
//! arithmetic. Everything here is exact; overflow surfaces as an error.

use crate::error::{Error, Result};
use std::fmt;

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct IntMat {
    n: usize,
    data: Vec<i128>,
}

impl IntMat {
    pub fn zero(n: usize) -> Self {
        IntMat {
            n,
            data: vec![0; n * n],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = IntMat::zero(n);
        for i in 0..n {
            m[(i, i)] = 1;
        }
        m
    }

    pub fn from_rows(rows: &[Vec<i128>]) -> Result<Self> {
        let n = rows.len();
        for r in rows {
            if r.len() != n {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    got: r.len(),
                });
            }
        }
        Ok(IntMat {
            n,
            data: rows.iter().flatten().copied().collect(),
        })
    }

    /// Build from a row-major flat slice of length n*n.
    pub fn from_flat(n: usize, flat: &[i128]) -> Result<Self> {
        if flat.len() != n * n {
            return Err(Error::DimensionMismatch {
                expected: n * n,
                got: flat.len(),
            });
        }
        Ok(IntMat {
            n,
            data: flat.to_vec(),
        })
    }

    pub fn size(&self) -> usize {
        self.n
    }

    pub fn flat(&self) -> &[i128] {
        &self.data
    }

    pub fn row(&self, i: usize) -> &[i128] {
        &self.data[i * self.n..(i + 1) * self.n]
    }

    pub fn transpose(&self) -> IntMat {
        let mut t = IntMat::zero(self.n);
        for i in 0..self.n {
            for j in 0..self.n {
                t[(j, i)] = self[(i, j)];
            }
        }
        t
    }

    pub fn mul(&self, other: &IntMat) -> Result<IntMat> {
        if self.n != other.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                got: other.n,
            });
        }
        let n = self.n;
        let mut out = IntMat::zero(n);
        for i in 0..n {
            for j in 0..n {
                let mut acc: i128 = 0;
                for k in 0..n {
                    acc = acc
                        .checked_add(checked_mul(self[(i, k)], other[(k, j)])?)
                        .ok_or(Error::ArithmeticOverflow("matrix multiply"))?;
                }
                out[(i, j)] = acc;
            }
        }
        Ok(out)
    }

    /// Exact determinant by fraction-free (Bareiss) elimination.
    pub fn det(&self) -> Result<i128> {
        let n = self.n;
        if n == 0 {
            return Ok(1);
        }
        let mut a = self.data.clone();
        let idx = |i: usize, j: usize| i * n + j;
        let mut sign: i128 = 1;
        let mut prev: i128 = 1;
        for k in 0..n - 1 {
            if a[idx(k, k)] == 0 {
                // Pivot search below row k.
                let Some(p) = (k + 1..n).find(|&p| a[idx(p, k)] != 0) else {
                    return Ok(0);
                };
                for j in 0..n {
                    a.swap(idx(k, j), idx(p, j));
                }
                sign = -sign;
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let num = checked_mul(a[idx(i, j)], a[idx(k, k)])?
                        .checked_sub(checked_mul(a[idx(i, k)], a[idx(k, j)])?)
                        .ok_or(Error::ArithmeticOverflow("determinant"))?;
                    // Bareiss: division by the previous pivot is exact.
                    a[idx(i, j)] = num / prev;
                }
                a[idx(i, k)] = 0;
            }
            prev = a[idx(k, k)];
        }
        checked_mul(sign, a[idx(n - 1, n - 1)])
    }

    /// Inverse of a unimodular matrix (det ±1) via the adjugate; exact.
    pub fn inverse_unimodular(&self) -> Result<IntMat> {
        let d = self.det()?;
        if d != 1 && d != -1 {
            return Err(Error::invalid_argument(format!(
                "matrix is not unimodular (det = {d})"
            )));
        }
        let n = self.n;
        let mut inv = IntMat::zero(n);
        for i in 0..n {
            for j in 0..n {
                let minor = self.minor(j, i)?;
                let sgn = if (i + j) % 2 == 0 { 1 } else { -1 };
                inv[(i, j)] = sgn * minor * d; // divide by det = multiply by ±1
            }
        }
        Ok(inv)
    }

    /// Determinant of the submatrix with row `ri` and column `cj` deleted.
    pub fn minor(&self, ri: usize, cj: usize) -> Result<i128> {
        let n = self.n;
        let mut rows = Vec::with_capacity(n - 1);
        for i in 0..n {
            if i == ri {
                continue;
            }
            let mut row = Vec::with_capacity(n - 1);
            for j in 0..n {
                if j == cj {
                    continue;
                }
                row.push(self[(i, j)]);
            }
            rows.push(row);
        }
        IntMat::from_rows(&rows)?.det()
    }

    /// row_i += c * row_j (elementary shear; det-preserving).
    pub fn row_shear(&mut self, i: usize, j: usize, c: i128) -> Result<()> {
        assert_ne!(i, j);
        for k in 0..self.n {
            let add = checked_mul(c, self[(j, k)])?;
            self[(i, k)] = self[(i, k)]
                .checked_add(add)
                .ok_or(Error::ArithmeticOverflow("row shear"))?;
        }
        Ok(())
    }

    pub fn swap_rows(&mut self, i: usize, j: usize) {
        if i == j {
            return;
        }
        for k in 0..self.n {
            let n = self.n;
            self.data.swap(i * n + k, j * n + k);
        }
    }

    pub fn negate_row(&mut self, i: usize) {
        for k in 0..self.n {
            self[(i, k)] = -self[(i, k)];
        }
    }

    /// col_i += c * col_j.
    pub fn col_shear(&mut self, i: usize, j: usize, c: i128) -> Result<()> {
        assert_ne!(i, j);
        for k in 0..self.n {
            let add = checked_mul(c, self[(k, j)])?;
            self[(k, i)] = self[(k, i)]
                .checked_add(add)
                .ok_or(Error::ArithmeticOverflow("column shear"))?;
        }
        Ok(())
    }

    pub fn swap_cols(&mut self, i: usize, j: usize) {
        if i == j {
            return;
        }
        for k in 0..self.n {
            let n = self.n;
            self.data.swap(k * n + i, k * n + j);
        }
    }
}

impl std::ops::Index<(usize, usize)> for IntMat {
    type Output = i128;
    fn index(&self, (i, j): (usize, usize)) -> &i128 {
        &self.data[i * self.n + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for IntMat {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut i128 {
        &mut self.data[i * self.n + j]
    }
}

impl fmt::Display for IntMat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.n {
            write!(f, "[")?;
            for j in 0..self.n {
                if j > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{}", self[(i, j)])?;
            }
            writeln!(f, "]")?;
        }
        Ok(())
    }
}

#[inline]
pub fn checked_mul(a: i128, b: i128) -> Result<i128> {
    a.checked_mul(b)
        .ok_or(Error::ArithmeticOverflow("integer multiply"))
}

#[inline]
pub fn checked_add(a: i128, b: i128) -> Result<i128> {
    a.checked_add(b)
        .ok_or(Error::ArithmeticOverflow("integer add"))
}

#[inline]
pub fn checked_sub(a: i128, b: i128) -> Result<i128> {
    a.checked_sub(b)
        .ok_or(Error::ArithmeticOverflow("integer subtract"))
}
