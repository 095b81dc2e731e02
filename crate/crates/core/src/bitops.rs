//! Bit-level primitives: binary digit sums and the carry-free relation.
//!
//! `i` is *free of* `j` when the binary expansion of `i` has zeros wherever
//! `j` has ones, i.e. adding them in base 2 produces no carries. By Kummer's
//! criterion this holds exactly when `C(i + j, j)` is odd; [`kummer_oracle`]
//! and [`binomial_parity_table`] compute that binomial outright so they can
//! serve as an independent check on [`is_free_of`].

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, Zero};

/// Number of 1-bits in the binary expansion of `n`.
#[inline]
pub fn digit_sum(n: usize) -> u32 {
    n.count_ones()
}

/// True iff adding `i` and `j` in base 2 involves no carries.
#[inline]
pub fn is_free_of(i: usize, j: usize) -> bool {
    i & j == 0
}

/// All `d < limit` that are free of `j`, in increasing order.
///
/// The `n`-th element places the bits of `n` into the zero positions of `j`,
/// lowest first, so its digit sum equals `digit_sum(n)`.
pub fn free_residues(j: usize, limit: usize) -> Vec<usize> {
    FreeResidues::new(j).take_while(|&d| d < limit).collect()
}

/// Ascending iterator over the integers free of a fixed mask.
#[derive(Debug, Clone)]
pub struct FreeResidues {
    mask: usize,
    next: Option<usize>,
}

impl FreeResidues {
    pub fn new(mask: usize) -> Self {
        FreeResidues {
            mask,
            next: Some(0),
        }
    }
}

impl Iterator for FreeResidues {
    type Item = usize;

    fn next(&mut self) -> Option<usize> {
        let cur = self.next?;
        // Filling the mask bits with ones lets the increment carry straight
        // through them into the next free position.
        self.next = (cur | self.mask).checked_add(1).map(|d| d & !self.mask);
        Some(cur)
    }
}

/// Exact `C(n, k)` by the multiplicative formula.
pub fn binomial(n: &BigUint, k: &BigUint) -> BigUint {
    if k > n {
        return BigUint::zero();
    }
    let k = std::cmp::min(k.clone(), n - k);
    let base = n - &k;
    let mut acc = BigUint::one();
    let mut t = BigUint::one();
    while t <= k {
        // acc * (base + t) is divisible by t: it is t * C(base + t, t).
        acc *= &base + &t;
        acc /= &t;
        t += 1u32;
    }
    acc
}

/// Parity of `C(i + j, j)` computed from the binomial itself.
pub fn kummer_oracle(i: impl Into<BigUint>, j: impl Into<BigUint>) -> bool {
    let (i, j) = (i.into(), j.into());
    binomial(&(&i + &j), &j).is_odd()
}

/// `table[i][j]` is whether `C(i + j, j)` is odd, for `0 <= i, j <= limit`.
///
/// Built from exact Pascal rows rather than one binomial at a time, so a full
/// `1025 x 1025` sweep stays cheap.
pub fn binomial_parity_table(limit: usize) -> Vec<Vec<bool>> {
    let mut table = vec![vec![false; limit + 1]; limit + 1];
    // row[j] = C(n, j) for j <= min(n, limit)
    let mut row: Vec<BigUint> = Vec::with_capacity(limit + 1);
    for n in 0..=2 * limit {
        if n <= limit {
            row.push(BigUint::zero());
        }
        for j in (1..row.len()).rev() {
            let prev = row[j - 1].clone();
            row[j] += prev;
        }
        row[0] = BigUint::one();
        let lo = n.saturating_sub(limit);
        for j in lo..=n.min(limit) {
            table[n - j][j] = row[j].is_odd();
        }
    }
    table
}
