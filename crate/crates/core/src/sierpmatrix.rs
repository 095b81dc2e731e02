//! Dense exact lower-triangular matrices and the family `S(x)`.

use std::fmt;

use crate::bitops::{digit_sum, is_free_of};
use crate::error::{Error, Result};
use crate::rational::Rational;
use crate::tmword::SignWord;

/// `n x n` lower-triangular matrix of rationals, `n` a power of two.
///
/// Only the lower triangle is stored, row-major: row `i` holds columns
/// `0..=i`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TriMatrix {
    n: usize,
    entries: Vec<Rational>,
    unit_diagonal: bool,
}

#[inline]
fn row_start(i: usize) -> usize {
    i * (i + 1) / 2
}

fn check_order(n: usize) -> Result<()> {
    if n.is_power_of_two() {
        Ok(())
    } else {
        Err(Error::NotPowerOfTwo(n))
    }
}

impl TriMatrix {
    /// Fills the lower triangle from `f(i, j)`, `j <= i`.
    pub fn from_fn(n: usize, mut f: impl FnMut(usize, usize) -> Rational) -> Result<Self> {
        check_order(n)?;
        let mut entries = Vec::with_capacity(row_start(n));
        for i in 0..n {
            for j in 0..=i {
                entries.push(f(i, j));
            }
        }
        Ok(Self::from_packed(n, entries))
    }

    fn from_packed(n: usize, entries: Vec<Rational>) -> Self {
        debug_assert_eq!(entries.len(), row_start(n));
        let unit_diagonal = (0..n).all(|i| entries[row_start(i) + i].is_one());
        TriMatrix {
            n,
            entries,
            unit_diagonal,
        }
    }

    /// Builds from full square rows; everything above the diagonal must be zero.
    pub fn from_rows(rows: Vec<Vec<Rational>>) -> Result<Self> {
        let n = rows.len();
        check_order(n)?;
        let mut entries = Vec::with_capacity(row_start(n));
        for (i, row) in rows.into_iter().enumerate() {
            if row.len() != n {
                return Err(Error::DimensionMismatch {
                    left: n,
                    right: row.len(),
                });
            }
            if let Some(col) = (i + 1..n).find(|&j| !row[j].is_zero()) {
                return Err(Error::NotLowerTriangular { row: i, col });
            }
            entries.extend(row.into_iter().take(i + 1));
        }
        Ok(Self::from_packed(n, entries))
    }

    pub fn identity(n: usize) -> Result<Self> {
        Self::from_fn(n, |i, j| {
            if i == j {
                Rational::one()
            } else {
                Rational::zero()
            }
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn has_unit_diagonal(&self) -> bool {
        self.unit_diagonal
    }

    /// Columns `0..=i` of row `i`.
    pub fn row(&self, i: usize) -> &[Rational] {
        &self.entries[row_start(i)..row_start(i + 1)]
    }

    /// Entry `(i, j)`; `None` above the diagonal or out of range.
    pub fn get(&self, i: usize, j: usize) -> Option<&Rational> {
        (i < self.n && j <= i).then(|| &self.entries[row_start(i) + j])
    }

    pub fn is_nonzero(&self, i: usize, j: usize) -> bool {
        self.get(i, j).is_some_and(|v| !v.is_zero())
    }

    /// Full square rows, zeros above the diagonal included.
    pub fn to_rows(&self) -> Vec<Vec<Rational>> {
        (0..self.n)
            .map(|i| {
                let mut r = self.row(i).to_vec();
                r.resize(self.n, Rational::zero());
                r
            })
            .collect()
    }

    /// Copy with entry `(i, j)` replaced; `j` must not exceed `i`.
    pub fn with_entry(&self, i: usize, j: usize, value: Rational) -> Result<Self> {
        if i >= self.n {
            return Err(Error::DimensionMismatch {
                left: self.n,
                right: i + 1,
            });
        }
        if j > i {
            return Err(Error::NotLowerTriangular { row: i, col: j });
        }
        let mut entries = self.entries.clone();
        entries[row_start(i) + j] = value;
        Ok(Self::from_packed(self.n, entries))
    }

    /// Upper-left `m x m` block.
    pub fn leading_block(&self, m: usize) -> Result<Self> {
        check_order(m)?;
        if m > self.n {
            return Err(Error::DimensionMismatch {
                left: self.n,
                right: m,
            });
        }
        Ok(Self::from_packed(m, self.entries[..row_start(m)].to_vec()))
    }

    /// First `(i, j)` in row-major order where the two matrices differ.
    pub fn first_mismatch(&self, other: &TriMatrix) -> Option<(usize, usize)> {
        if self.n != other.n {
            return Some((0, 0));
        }
        let pos = self
            .entries
            .iter()
            .zip(&other.entries)
            .position(|(a, b)| a != b)?;
        // invert the packed index
        let mut i = 0;
        while row_start(i + 1) <= pos {
            i += 1;
        }
        Some((i, pos - row_start(i)))
    }

    /// Dense product `self * v`.
    pub fn mat_vec(&self, v: &[Rational]) -> Result<Vec<Rational>> {
        if v.len() != self.n {
            return Err(Error::LengthMismatch {
                expected: self.n,
                actual: v.len(),
            });
        }
        Ok((0..self.n)
            .map(|i| {
                let mut acc = Rational::zero();
                for (a, x) in self.row(i).iter().zip(v) {
                    if !a.is_zero() {
                        acc.add_product(a, x);
                    }
                }
                acc
            })
            .collect())
    }
}

/// One row per line, entries separated by single spaces.
impl fmt::Display for TriMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for row in self.to_rows() {
            let cells: Vec<String> = row.iter().map(ToString::to_string).collect();
            writeln!(f, "{}", cells.join(" "))?;
        }
        Ok(())
    }
}

/// Entry `(i, j)` of `S(x)` straight from the definition.
pub fn s_entry(x: &Rational, i: usize, j: usize) -> Rational {
    if j <= i && is_free_of(i - j, j) {
        x.pow(digit_sum(i - j))
    } else {
        Rational::zero()
    }
}

/// The `n x n` window of `S(x)`.
pub fn build_s(x: &Rational, n: usize) -> Result<TriMatrix> {
    check_order(n)?;
    let powers: Vec<Rational> = (0..=n.trailing_zeros()).map(|e| x.pow(e)).collect();
    TriMatrix::from_fn(n, |i, j| {
        let d = i - j;
        if is_free_of(d, j) {
            powers[digit_sum(d) as usize].clone()
        } else {
            Rational::zero()
        }
    })
}

/// Exact product of two lower-triangular matrices of the same order.
pub fn mat_mul(a: &TriMatrix, b: &TriMatrix) -> Result<TriMatrix> {
    if a.n != b.n {
        return Err(Error::DimensionMismatch {
            left: a.n,
            right: b.n,
        });
    }
    let mut entries = Vec::with_capacity(a.entries.len());
    let mut acc = Vec::with_capacity(a.n);
    for i in 0..a.n {
        acc.clear();
        acc.resize(i + 1, Rational::zero());
        for (m, a_im) in a.row(i).iter().enumerate() {
            if a_im.is_zero() {
                continue;
            }
            for (slot, b_mj) in acc.iter_mut().zip(b.row(m)) {
                if !b_mj.is_zero() {
                    slot.add_product(a_im, b_mj);
                }
            }
        }
        entries.append(&mut acc);
    }
    Ok(TriMatrix::from_packed(a.n, entries))
}

/// `a^q` by repeated multiplication; `a^0` is the identity.
pub fn mat_pow(a: &TriMatrix, q: u32) -> Result<TriMatrix> {
    let mut out = TriMatrix::identity(a.n)?;
    for _ in 0..q {
        out = mat_mul(&out, a)?;
    }
    Ok(out)
}

/// Inverse of a unit lower-triangular matrix by forward substitution.
///
/// Knows nothing about `S(x)`; it is the generic algorithm the closed form
/// `S(x)^-1 = S(-x)` is checked against.
pub fn mat_inverse(a: &TriMatrix) -> Result<TriMatrix> {
    if let Some(index) = (0..a.n).find(|&i| !a.row(i)[i].is_one()) {
        return Err(Error::NonUnitDiagonal {
            index,
            value: a.row(index)[index].clone(),
        });
    }
    let mut inv = TriMatrix {
        n: a.n,
        entries: Vec::with_capacity(a.entries.len()),
        unit_diagonal: true,
    };
    for i in 0..a.n {
        // inv[i][j] = -sum_{j <= m < i} a[i][m] inv[m][j]
        let mut row = vec![Rational::zero(); i + 1];
        for (m, a_im) in a.row(i)[..i].iter().enumerate() {
            if a_im.is_zero() {
                continue;
            }
            let inv_row = &inv.entries[row_start(m)..row_start(m + 1)];
            for (slot, v) in row.iter_mut().zip(inv_row) {
                if !v.is_zero() {
                    slot.add_product(a_im, v);
                }
            }
        }
        for v in &mut row[..i] {
            *v = -std::mem::take(v);
        }
        row[i] = Rational::one();
        inv.entries.extend(row);
    }
    Ok(inv)
}

/// `S^r` for rational `r`, which is `S(r)`.
///
/// For `r = p/q` this is the matrix whose `q`-th power is `S(p) = S^p`; for
/// `r = -1` it is the inverse of `S`.
pub fn s_power(r: &Rational, n: usize) -> Result<TriMatrix> {
    build_s(r, n)
}

/// Nonzero entries of column `j`, read from row `j` downward, as signs.
pub fn column_nonzero_signs(a: &TriMatrix, j: usize) -> Result<SignWord> {
    if j >= a.n {
        return Err(Error::ColumnOutOfRange { col: j, n: a.n });
    }
    let mut signs = Vec::new();
    for i in j..a.n {
        let v = &a.row(i)[j];
        if v.is_zero() {
            continue;
        }
        if v.is_one() {
            signs.push(1);
        } else if (-v).is_one() {
            signs.push(-1);
        } else {
            return Err(Error::NotASign {
                row: i,
                col: j,
                value: v.clone(),
            });
        }
    }
    Ok(SignWord::from_signs(signs).expect("only +1 and -1 pushed"))
}

/// The `k` in `[j, i]` with zeros wherever `i` has zeros and ones wherever
/// `j` has ones. Empty unless `j`'s bits are a subset of `i`'s.
pub fn summand_indices(i: usize, j: usize) -> Vec<usize> {
    if j > i {
        return Vec::new();
    }
    (j..=i).filter(|&k| k & !i == 0 && j & !k == 0).collect()
}

/// Entry `(i, j)` of `S(x) S(y)` summed term by term over [`summand_indices`].
pub fn theorem2_summand_oracle(i: usize, j: usize, x: &Rational, y: &Rational) -> Rational {
    let mut sum = Rational::zero();
    for k in summand_indices(i, j) {
        sum += &(s_entry(x, i, k) * s_entry(y, k, j));
    }
    sum
}
