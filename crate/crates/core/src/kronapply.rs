//! Implicit application of `S(x)` through its Kronecker factorization.
//!
//! The `2^k` window of `S(x)` is the `k`-fold Kronecker power of
//! `[[1, 0], [x, 1]]`. Applying it to a vector takes one butterfly stage per
//! bit position `p`: every index `i` with bit `p` set picks up `x` times its
//! partner `i - 2^p`. The stages commute, so the whole product costs
//! `k * 2^(k-1)` multiply-adds instead of the dense `~2^(2k-1)`.

use crate::error::{Error, Result};
use crate::rational::Rational;
use crate::sierpmatrix::TriMatrix;

/// Largest `k` that [`KronOperator::materialize`] expands by default.
pub const DEFAULT_MATERIALIZE_CAP: u32 = 10;

/// `S(x)` restricted to the `2^k` window, never stored densely.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KronOperator {
    k: u32,
    x: Rational,
}

/// Multiply-add count from an instrumented apply.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct ApplyStats {
    pub updates: u64,
}

fn stage<T>(v: &mut [T], bit: u32, mut update: impl FnMut(&mut T, &T)) -> u64 {
    let half = 1usize << bit;
    let mut count = 0;
    for block in v.chunks_exact_mut(2 * half) {
        let (lo, hi) = block.split_at_mut(half);
        for (h, l) in hi.iter_mut().zip(lo.iter()) {
            update(h, l);
            count += 1;
        }
    }
    count
}

impl KronOperator {
    pub fn new(k: u32, x: Rational) -> Self {
        KronOperator { k, x }
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn x(&self) -> &Rational {
        &self.x
    }

    /// `2^k`.
    pub fn len(&self) -> usize {
        1 << self.k
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// The inverse operator, `S(-x)`.
    pub fn inverse(&self) -> KronOperator {
        KronOperator::new(self.k, -&self.x)
    }

    fn check_len(&self, v: &[Rational]) -> Result<()> {
        if v.len() == self.len() {
            Ok(())
        } else {
            Err(Error::LengthMismatch {
                expected: self.len(),
                actual: v.len(),
            })
        }
    }

    /// `S(x) v`, stages in ascending bit order.
    pub fn apply(&self, v: &[Rational]) -> Result<Vec<Rational>> {
        self.apply_counted(v).map(|(out, _)| out)
    }

    pub fn apply_counted(&self, v: &[Rational]) -> Result<(Vec<Rational>, ApplyStats)> {
        let order: Vec<u32> = (0..self.k).collect();
        self.apply_in_order(v, &order)
    }

    /// Runs the stages in the given bit order. `order` must be a permutation
    /// of `0..k`.
    pub fn apply_in_order(
        &self,
        v: &[Rational],
        order: &[u32],
    ) -> Result<(Vec<Rational>, ApplyStats)> {
        self.check_len(v)?;
        let mut sorted = order.to_vec();
        sorted.sort_unstable();
        if sorted != (0..self.k).collect::<Vec<_>>() {
            return Err(Error::DimensionMismatch {
                left: self.k as usize,
                right: order.len(),
            });
        }
        let mut out = v.to_vec();
        let mut stats = ApplyStats::default();
        for &bit in order {
            stats.updates += stage(&mut out, bit, |hi, lo| hi.add_product(&self.x, lo));
        }
        Ok((out, stats))
    }

    /// The unique `v` with `self.apply(v) == w`, via `S(x)^-1 = S(-x)`.
    pub fn solve(&self, w: &[Rational]) -> Result<Vec<Rational>> {
        self.inverse().apply(w)
    }

    /// Expands the Kronecker power with the block rule
    /// `M_k = [[M_{k-1}, 0], [x M_{k-1}, M_{k-1}]]`.
    pub fn materialize(&self) -> Result<TriMatrix> {
        self.materialize_with_cap(DEFAULT_MATERIALIZE_CAP)
    }

    pub fn materialize_with_cap(&self, cap: u32) -> Result<TriMatrix> {
        if self.k > cap {
            return Err(Error::CapExceeded { k: self.k, cap });
        }
        // Full square rows; the block rule never touches the upper triangle.
        let mut rows = vec![vec![Rational::one()]];
        for _ in 0..self.k {
            let m = rows.len();
            let mut next = Vec::with_capacity(2 * m);
            for row in &rows {
                let mut r = row.clone();
                r.resize(2 * m, Rational::zero());
                next.push(r);
            }
            for row in &rows {
                let mut r: Vec<Rational> = row.iter().map(|v| v * &self.x).collect();
                r.extend(row.iter().cloned());
                next.push(r);
            }
            rows = next;
        }
        TriMatrix::from_rows(rows)
    }
}

/// Floating-point twins of the exact paths, used only for timing.
pub mod float {
    use std::fmt;
    use std::time::{Duration, Instant};

    use super::stage;
    use crate::bitops::{digit_sum, is_free_of};
    use crate::error::{Error, Result};

    /// In-place `S(x) v` over `f64`; returns the multiply-add count.
    pub fn kron_apply(x: f64, v: &mut [f64]) -> u64 {
        assert!(v.len().is_power_of_two(), "length must be a power of two");
        let k = v.len().trailing_zeros();
        (0..k)
            .map(|bit| stage(v, bit, |hi, lo| *hi += x * *lo))
            .sum()
    }

    /// Materialized lower triangle of `S(x)`, packed row-major.
    pub struct DenseLower {
        n: usize,
        entries: Vec<f64>,
    }

    impl DenseLower {
        pub fn build(x: f64, n: usize) -> Self {
            assert!(n.is_power_of_two(), "order must be a power of two");
            let powers: Vec<f64> = (0..=n.trailing_zeros() as i32).map(|e| x.powi(e)).collect();
            let mut entries = Vec::with_capacity(n * (n + 1) / 2);
            for i in 0..n {
                entries.extend((0..=i).map(|j| {
                    let d = i - j;
                    if is_free_of(d, j) {
                        powers[digit_sum(d) as usize]
                    } else {
                        0.0
                    }
                }));
            }
            DenseLower { n, entries }
        }

        pub fn n(&self) -> usize {
            self.n
        }

        /// Dense mat-vec touching every stored entry, zeros included;
        /// returns the result and `n (n + 1) / 2` multiply-adds.
        pub fn apply(&self, v: &[f64]) -> (Vec<f64>, u64) {
            assert_eq!(v.len(), self.n);
            let mut out = Vec::with_capacity(self.n);
            let mut count = 0u64;
            let mut start = 0;
            for i in 0..self.n {
                let row = &self.entries[start..start + i + 1];
                out.push(row.iter().zip(v).map(|(a, b)| a * b).sum());
                count += row.len() as u64;
                start += i + 1;
            }
            (out, count)
        }
    }

    pub const MAX_FAST_K: u32 = 22;
    pub const MAX_DENSE_K: u32 = 13;

    /// Median timings and operation counts for one benchmark run.
    #[derive(Debug, Clone, PartialEq)]
    pub struct BenchReport {
        pub k: u32,
        pub reps: usize,
        pub fast_median: Duration,
        pub fast_updates: u64,
        /// `None` above [`MAX_DENSE_K`].
        pub dense: Option<DenseTiming>,
    }

    #[derive(Debug, Clone, Copy, PartialEq)]
    pub struct DenseTiming {
        pub median: Duration,
        pub updates: u64,
    }

    /// `k * 2^(k-1)`.
    pub fn expected_fast_updates(k: u32) -> u64 {
        if k == 0 {
            0
        } else {
            u64::from(k) << (k - 1)
        }
    }

    /// `N (N + 1) / 2 = 2^(2k-1) + 2^(k-1)`, every stored lower-triangle entry.
    pub fn expected_dense_updates(k: u32) -> u64 {
        let n = 1u64 << k;
        n * (n + 1) / 2
    }

    impl BenchReport {
        pub fn speedup(&self) -> Option<f64> {
            let d = self.dense?;
            Some(d.median.as_secs_f64() / self.fast_median.as_secs_f64().max(1e-9))
        }

        pub fn counters_match(&self) -> bool {
            self.fast_updates == expected_fast_updates(self.k)
                && self
                    .dense
                    .is_none_or(|d| d.updates == expected_dense_updates(self.k))
        }
    }

    impl fmt::Display for BenchReport {
        fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
            let n = 1u64 << self.k;
            writeln!(f, "k={} n={} reps={}", self.k, n, self.reps)?;
            writeln!(
                f,
                "fast  median={:.3?} updates={} expected={}",
                self.fast_median,
                self.fast_updates,
                expected_fast_updates(self.k)
            )?;
            match self.dense {
                Some(d) => writeln!(
                    f,
                    "dense median={:.3?} updates={} expected={}",
                    d.median,
                    d.updates,
                    expected_dense_updates(self.k)
                )?,
                None => writeln!(f, "dense skipped (k > {MAX_DENSE_K})")?,
            }
            if let (Some(d), Some(speedup)) = (self.dense, self.speedup()) {
                writeln!(
                    f,
                    "work ratio={:.2} time ratio={:.2}",
                    d.updates as f64 / self.fast_updates.max(1) as f64,
                    speedup
                )?;
            }
            writeln!(
                f,
                "counters {}",
                if self.counters_match() {
                    "OK"
                } else {
                    "MISMATCH"
                }
            )
        }
    }

    fn median(mut times: Vec<Duration>) -> Duration {
        times.sort_unstable();
        times[times.len() / 2]
    }

    /// Times the butterfly path against a materialized dense mat-vec, both
    /// over `f64`. The dense path is skipped above [`MAX_DENSE_K`].
    pub fn run_bench(k: u32, reps: usize, x: f64) -> Result<BenchReport> {
        if k > MAX_FAST_K {
            return Err(Error::CapExceeded { k, cap: MAX_FAST_K });
        }
        let reps = reps.max(1);
        let n = 1usize << k;
        let input: Vec<f64> = (0..n)
            .map(|i| ((i * 7919) % 13) as f64 / 13.0 - 0.5)
            .collect();

        let mut fast_times = Vec::with_capacity(reps);
        let mut fast_updates = 0;
        for _ in 0..reps {
            let mut v = input.clone();
            let t = Instant::now();
            fast_updates = kron_apply(x, &mut v);
            fast_times.push(t.elapsed());
            std::hint::black_box(&v);
        }

        let dense = (k <= MAX_DENSE_K).then(|| {
            let m = DenseLower::build(x, n);
            let mut times = Vec::with_capacity(reps);
            let mut updates = 0;
            for _ in 0..reps {
                let t = Instant::now();
                let (out, count) = m.apply(std::hint::black_box(&input));
                times.push(t.elapsed());
                std::hint::black_box(out);
                updates = count;
            }
            DenseTiming {
                median: median(times),
                updates,
            }
        });

        Ok(BenchReport {
            k,
            reps,
            fast_median: median(fast_times),
            fast_updates,
            dense,
        })
    }
}
