//! The theorem-by-theorem verification suite behind `sierp verify`.
//!
//! Every check pulls its `S(x)` matrices from a [`MatrixSource`], so a test
//! can swap in a deliberately corrupted builder and confirm the suite fails
//! loudly instead of passing vacuously.

use std::fmt;

use rand::{Rng, SeedableRng};
use rand_xorshift::XorShiftRng;

use crate::bitops::{binomial_parity_table, free_residues, is_free_of};
use crate::error::Result;
use crate::kronapply::KronOperator;
use crate::rational::Rational;
use crate::sierpmatrix::{
    build_s, column_nonzero_signs, mat_inverse, mat_mul, mat_pow, theorem2_summand_oracle,
    TriMatrix,
};
use crate::tmword::{tm_by_digit_sum, tm_by_doubling};

pub const MAX_VERIFY_K: u32 = 8;

/// Where the suite gets its `S(x)` windows from.
pub trait MatrixSource {
    fn build(&self, x: &Rational, n: usize) -> Result<TriMatrix>;
}

/// The real construction, [`build_s`].
#[derive(Debug, Clone, Copy, Default)]
pub struct Exact;

impl MatrixSource for Exact {
    fn build(&self, x: &Rational, n: usize) -> Result<TriMatrix> {
        build_s(x, n)
    }
}

/// Wraps a source and flips entry `(row, col)` of every window that contains
/// it: zero becomes one, anything else becomes zero.
#[derive(Debug, Clone)]
pub struct FlipEntry<S> {
    pub inner: S,
    pub row: usize,
    pub col: usize,
}

impl<S: MatrixSource> MatrixSource for FlipEntry<S> {
    fn build(&self, x: &Rational, n: usize) -> Result<TriMatrix> {
        let m = self.inner.build(x, n)?;
        if self.row >= n || self.col > self.row {
            return Ok(m);
        }
        let flipped = if m.is_nonzero(self.row, self.col) {
            Rational::zero()
        } else {
            Rational::one()
        };
        m.with_entry(self.row, self.col, flipped)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct VerifyConfig {
    pub k_max: u32,
    pub samples: usize,
    pub seed: u64,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        VerifyConfig {
            k_max: 4,
            samples: 50,
            seed: 7,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Counterexample {
    pub position: Option<(usize, usize)>,
    pub detail: String,
}

impl fmt::Display for Counterexample {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.position {
            Some((i, j)) => write!(f, "at (i={i}, j={j}): {}", self.detail),
            None => f.write_str(&self.detail),
        }
    }
}

fn fail(
    position: Option<(usize, usize)>,
    detail: impl Into<String>,
) -> std::result::Result<(), Counterexample> {
    Err(Counterexample {
        position,
        detail: detail.into(),
    })
}

type Outcome = std::result::Result<(), Counterexample>;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CheckResult {
    pub k: u32,
    pub name: &'static str,
    pub outcome: Outcome,
}

impl fmt::Display for CheckResult {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.outcome {
            Ok(()) => write!(f, "PASS k={} {}", self.k, self.name),
            Err(c) => write!(f, "FAIL k={} {}: {}", self.k, self.name, c),
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Report {
    pub checks: Vec<CheckResult>,
}

impl Report {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.outcome.is_ok())
    }

    pub fn first_failure(&self) -> Option<&CheckResult> {
        self.checks.iter().find(|c| c.outcome.is_err())
    }
}

/// One line per check.
impl fmt::Display for Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.checks {
            writeln!(f, "{c}")?;
        }
        Ok(())
    }
}

/// Rational with numerator in `-9..=9` and denominator in `1..=9`.
pub fn random_rational(rng: &mut impl Rng) -> Rational {
    Rational::new(rng.random_range(-9..=9), rng.random_range(1..=9))
}

pub fn random_vector(rng: &mut impl Rng, len: usize) -> Vec<Rational> {
    (0..len).map(|_| random_rational(rng)).collect()
}

/// `(k + 1)` distinct values per axis, enough to pin down a polynomial of
/// degree `k` in each variable.
pub fn grid_axes(k: u32) -> (Vec<Rational>, Vec<Rational>) {
    let k = i64::from(k);
    let xs = (0..=k).map(|a| Rational::new(2 * a - k, 3)).collect();
    let ys = (0..=k).map(|b| Rational::new(3 * b - k, 4)).collect();
    (xs, ys)
}

fn compare(got: &TriMatrix, want: &TriMatrix, what: &str) -> Outcome {
    match got.first_mismatch(want) {
        None => Ok(()),
        Some((i, j)) => {
            let show = |m: &TriMatrix| m.get(i, j).map_or("-".to_string(), ToString::to_string);
            fail(
                Some((i, j)),
                format!("{what}: expected {}, got {}", show(want), show(got)),
            )
        }
    }
}

fn lift<T>(r: Result<T>) -> std::result::Result<T, Counterexample> {
    r.map_err(|e| Counterexample {
        position: None,
        detail: e.to_string(),
    })
}

/// Runs every check for each `k` in `0..=cfg.k_max`.
pub fn run(cfg: &VerifyConfig, source: &dyn MatrixSource) -> Report {
    let mut rng = XorShiftRng::seed_from_u64(cfg.seed);
    let mut report = Report::default();
    for k in 0..=cfg.k_max {
        let mut push = |name, outcome| report.checks.push(CheckResult { k, name, outcome });
        push("kummer-agreement", check_kummer(k, source));
        push("theorem2-grid", check_theorem2_grid(k, source));
        push("theorem1-inverse", check_theorem1(k, source));
        push("power-identities", check_powers(k, source));
        push(
            "self-similarity",
            check_self_similarity(k, &mut rng, source),
        );
        push(
            "kronecker-materialize",
            check_kron_materialize(k, &mut rng, source),
        );
        push(
            "kronecker-apply",
            check_kron_apply(k, cfg.samples, &mut rng, source),
        );
        push(
            "summand-oracle",
            check_summands(k, cfg.samples, &mut rng, source),
        );
        push("thue-morse-word", check_word(k));
    }
    report
}

/// `is_free_of` against exact binomial parity, and `S` against Pascal's
/// triangle mod 2 (`S[i][j]` is `C(i, j) mod 2`).
fn check_kummer(k: u32, source: &dyn MatrixSource) -> Outcome {
    let n = 1usize << k;
    let table = binomial_parity_table(n);
    for (i, row) in table.iter().enumerate() {
        for (j, &odd) in row.iter().enumerate() {
            if is_free_of(i, j) != odd {
                return fail(
                    Some((i, j)),
                    format!("free_of disagrees with C({}, {j}) parity", i + j),
                );
            }
        }
    }
    let s = lift(source.build(&Rational::one(), n))?;
    for i in 0..n {
        for j in 0..=i {
            let odd = table[i - j][j];
            let want = if odd {
                Rational::one()
            } else {
                Rational::zero()
            };
            if s.get(i, j) != Some(&want) {
                return fail(
                    Some((i, j)),
                    format!(
                        "S entry {} but C({i}, {j}) mod 2 is {want}",
                        s.get(i, j).unwrap()
                    ),
                );
            }
        }
    }
    Ok(())
}

fn check_theorem2_grid(k: u32, source: &dyn MatrixSource) -> Outcome {
    let n = 1usize << k;
    let (xs, ys) = grid_axes(k);
    for x in &xs {
        let sx = lift(source.build(x, n))?;
        for y in &ys {
            let sy = lift(source.build(y, n))?;
            let prod = lift(mat_mul(&sx, &sy))?;
            let sum = lift(source.build(&(x + y), n))?;
            compare(&prod, &sum, &format!("S({x}) S({y}) vs S({})", x + y))?;
        }
    }
    Ok(())
}

fn check_theorem1(k: u32, source: &dyn MatrixSource) -> Outcome {
    let n = 1usize << k;
    let s = lift(source.build(&Rational::one(), n))?;
    let neg = lift(source.build(&Rational::integer(-1), n))?;
    let inv = lift(mat_inverse(&s))?;
    compare(&inv, &neg, "inverse of S vs S(-1)")?;
    let signs = lift(tm_by_digit_sum(n))?;
    for i in 0..n {
        for j in 0..=i {
            let v = inv.get(i, j).unwrap();
            if !(v.is_zero() || v.abs().is_one()) {
                return fail(
                    Some((i, j)),
                    format!("inverse entry {v} not in {{-1, 0, 1}}"),
                );
            }
            if inv.is_nonzero(i, j) != s.is_nonzero(i, j) {
                return fail(Some((i, j)), "zero pattern of inverse differs from S");
            }
        }
    }
    for j in 0..n {
        let col = lift(column_nonzero_signs(&inv, j))?;
        let expected = free_residues(j, n - j).len();
        if col.len() != expected || !col.is_prefix_of(&signs) {
            return fail(
                Some((j, j)),
                format!("column {j} reads {col}, expected prefix of {signs} of length {expected}"),
            );
        }
    }
    Ok(())
}

fn check_powers(k: u32, source: &dyn MatrixSource) -> Outcome {
    let n = 1usize << k;
    for q in 1..=5i64 {
        for p in -3..=3i64 {
            let root = lift(source.build(&Rational::new(p, q), n))?;
            let powered = lift(mat_pow(&root, q as u32))?;
            let target = lift(source.build(&Rational::integer(p), n))?;
            compare(&powered, &target, &format!("S({p}/{q})^{q} vs S({p})"))?;
        }
    }
    let s = lift(source.build(&Rational::one(), n))?;
    let neg = lift(source.build(&Rational::integer(-1), n))?;
    compare(
        &lift(mat_mul(&neg, &s))?,
        &lift(TriMatrix::identity(n))?,
        "S(-1) S(1) vs I",
    )?;
    let zero = lift(source.build(&Rational::zero(), n))?;
    compare(&zero, &lift(TriMatrix::identity(n))?, "S(0) vs I")
}

fn check_self_similarity(k: u32, rng: &mut impl Rng, source: &dyn MatrixSource) -> Outcome {
    if k == 0 {
        return Ok(());
    }
    let x = random_rational(rng);
    let big = lift(source.build(&x, 1 << k))?;
    let small = lift(source.build(&x, 1 << (k - 1)))?;
    compare(
        &lift(big.leading_block(1 << (k - 1)))?,
        &small,
        &format!("leading block of S({x})"),
    )
}

fn check_kron_materialize(k: u32, rng: &mut impl Rng, source: &dyn MatrixSource) -> Outcome {
    for x in [Rational::one(), Rational::integer(-1), random_rational(rng)] {
        let dense = lift(source.build(&x, 1 << k))?;
        let kron = lift(KronOperator::new(k, x.clone()).materialize())?;
        compare(&dense, &kron, &format!("S({x}) vs Kronecker power"))?;
    }
    Ok(())
}

fn check_kron_apply(
    k: u32,
    samples: usize,
    rng: &mut impl Rng,
    source: &dyn MatrixSource,
) -> Outcome {
    let n = 1usize << k;
    let x = random_rational(rng);
    let y = random_rational(rng);
    let dense = lift(source.build(&x, n))?;
    let (op_x, op_y) = (
        KronOperator::new(k, x.clone()),
        KronOperator::new(k, y.clone()),
    );
    let op_sum = KronOperator::new(k, &x + &y);
    for _ in 0..samples.max(1) {
        let v = random_vector(rng, n);
        let fast = lift(op_x.apply(&v))?;
        let slow = lift(dense.mat_vec(&v))?;
        if let Some(i) = (0..n).find(|&i| fast[i] != slow[i]) {
            return fail(
                Some((i, 0)),
                format!("S({x}) v: dense {} vs Kronecker {}", slow[i], fast[i]),
            );
        }
        let chained = lift(op_y.apply(&fast))?;
        if chained != lift(op_sum.apply(&v))? {
            return fail(
                None,
                format!("S({y}) S({x}) v differs from S({}) v", &x + &y),
            );
        }
        if lift(op_x.solve(&fast))? != v {
            return fail(None, format!("solve did not invert S({x})"));
        }
    }
    Ok(())
}

fn check_summands(
    k: u32,
    samples: usize,
    rng: &mut impl Rng,
    source: &dyn MatrixSource,
) -> Outcome {
    let n = 1usize << k;
    for _ in 0..samples {
        let i = rng.random_range(0..n);
        let j = rng.random_range(0..=i);
        let x = random_rational(rng);
        let y = random_rational(rng);
        let oracle = theorem2_summand_oracle(i, j, &x, &y);
        let sum = lift(source.build(&(&x + &y), n))?;
        let entry = sum.get(i, j).unwrap();
        if &oracle != entry {
            return fail(
                Some((i, j)),
                format!("summand oracle at x={x}, y={y} gives {oracle}, S(x+y) has {entry}"),
            );
        }
    }
    Ok(())
}

fn check_word(k: u32) -> Outcome {
    let n = 1usize << k;
    let word = lift(tm_by_doubling(n))?;
    let signs = lift(tm_by_digit_sum(n))?;
    if word.to_signs() != signs {
        return fail(
            None,
            format!("doubling {word} disagrees with (-1)^b(n) {signs}"),
        );
    }
    if !word.is_cube_free() {
        return fail(None, format!("prefix of length {n} contains a cube"));
    }
    Ok(())
}
