//! Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any
//! failure. All checks are exact except the coarse timing threshold in
//! criterion 8.

use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use rand::SeedableRng;
use rand_xorshift::XorShiftRng;

use sierp::bitops::{binomial_parity_table, is_free_of};
use sierp::kronapply::float;
use sierp::sierpmatrix::{build_s, column_nonzero_signs, mat_inverse, mat_mul, mat_pow, s_power};
use sierp::tmword::{is_cube_free, tm_by_digit_sum, tm_by_doubling};
use sierp::verify::{
    self, grid_axes, random_rational, random_vector, Exact, FlipEntry, VerifyConfig,
};
use sierp::{KronOperator, Rational, TriMatrix};

const KUMMER_LIMIT: usize = 1024;
const KUMMER_BUDGET: Duration = Duration::from_secs(10);
const THEOREM2_MAX_K: u32 = 6;
const THEOREM2_BUDGET: Duration = Duration::from_secs(60);
const THEOREM1_MAX_K: u32 = 5;
const POWER_MAX_K: u32 = 4;
const KRON_MAX_K: u32 = 8;
const KRON_VECTORS: usize = 100;
const WORD_LENGTH: usize = 1024;
const CUBE_LENGTH: usize = 512;
const WORD_BUDGET: Duration = Duration::from_secs(30);
const BENCH_K: u32 = 13;
const MIN_SPEEDUP: f64 = 10.0;
const SEED: u64 = 7;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn same(got: &TriMatrix, want: &TriMatrix, what: &str) -> Result<(), String> {
    match got.first_mismatch(want) {
        None => Ok(()),
        Some((i, j)) => Err(format!(
            "{what}: mismatch at ({i}, {j}): got {:?}, want {:?}",
            got.get(i, j).map(ToString::to_string),
            want.get(i, j).map(ToString::to_string)
        )),
    }
}

fn within(start: Instant, budget: Duration, what: &str) -> Result<Duration, String> {
    let spent = start.elapsed();
    ensure(spent < budget, || {
        format!("{what} took {spent:?}, budget {budget:?}")
    })?;
    Ok(spent)
}

fn kummer_agreement() -> Outcome {
    let start = Instant::now();
    let table = binomial_parity_table(KUMMER_LIMIT);
    ensure(table.len() == KUMMER_LIMIT + 1, || "table too small".into())?;
    for (i, row) in table.iter().enumerate() {
        for (j, &odd) in row.iter().enumerate() {
            ensure(is_free_of(i, j) == odd, || {
                format!(
                    "is_free_of({i}, {j}) disagrees with parity of C({}, {j})",
                    i + j
                )
            })?;
        }
    }
    let spent = within(start, KUMMER_BUDGET, "Kummer sweep")?;
    Ok(format!(
        "{} pairs in {spent:.2?}",
        (KUMMER_LIMIT + 1).pow(2)
    ))
}

fn golden(name: &str) -> String {
    let path = format!("{}/tests/golden/{name}", env!("CARGO_MANIFEST_DIR"));
    std::fs::read_to_string(&path).unwrap_or_else(|e| panic!("{path}: {e}"))
}

/// Substitutes a value for `x` token by token in the symbolic golden file.
fn evaluate_symbolic(text: &str, powers: [&str; 4]) -> String {
    text.lines()
        .map(|line| {
            line.split(' ')
                .map(|tok| match tok {
                    "x" => powers[1],
                    "x^2" => powers[2],
                    "x^3" => powers[3],
                    other => other,
                })
                .collect::<Vec<_>>()
                .join(" ")
                + "\n"
        })
        .collect()
}

fn golden_8x8() -> Outcome {
    let symbolic = golden("s_of_x_8.txt");
    let at_two = evaluate_symbolic(&symbolic, ["1", "2", "4", "8"]);
    let built = build_s(&Rational::integer(2), 8)
        .map_err(|e| e.to_string())?
        .to_string();
    ensure(built == at_two, || {
        format!("S(2) differs from golden:\n{built}\nvs\n{at_two}")
    })?;

    let at_one = evaluate_symbolic(&symbolic, ["1", "1", "1", "1"]);
    let s = build_s(&Rational::one(), 8).map_err(|e| e.to_string())?;
    ensure(s.to_string() == at_one, || {
        format!("S differs from golden:\n{s}")
    })?;

    let fig1c = golden("fig1c_5.txt");
    let block: String = s
        .to_rows()
        .iter()
        .take(5)
        .map(|r| {
            r[..5]
                .iter()
                .map(ToString::to_string)
                .collect::<Vec<_>>()
                .join(" ")
                + "\n"
        })
        .collect();
    ensure(block == fig1c, || {
        format!("upper-left 5x5 of S differs from Fig. 1c:\n{block}")
    })?;

    let fig1b = golden("fig1b_pascal_mod2_5.txt");
    let triangle: String = (0..5)
        .map(|i| {
            s.row(i)
                .iter()
                .map(ToString::to_string)
                .collect::<Vec<_>>()
                .join(" ")
                + "\n"
        })
        .collect();
    ensure(triangle == fig1b, || {
        format!("rows of S differ from Pascal mod 2:\n{triangle}")
    })?;
    Ok("S(2), S(1), Fig. 1b and 1c match byte for byte".into())
}

fn theorem2_grid() -> Outcome {
    let mut last = Duration::ZERO;
    for k in 0..=THEOREM2_MAX_K {
        let start = Instant::now();
        let n = 1 << k;
        let (xs, ys) = grid_axes(k);
        for x in &xs {
            let sx = build_s(x, n).map_err(|e| e.to_string())?;
            for y in &ys {
                let sy = build_s(y, n).map_err(|e| e.to_string())?;
                let prod = mat_mul(&sx, &sy).map_err(|e| e.to_string())?;
                let sum = build_s(&(x + y), n).map_err(|e| e.to_string())?;
                same(&prod, &sum, &format!("k={k} S({x}) S({y})"))?;
            }
        }
        last = within(start, THEOREM2_BUDGET, &format!("grid at k={k}"))?;
    }
    Ok(format!(
        "(k+1)^2 grids for k <= {THEOREM2_MAX_K}; k={THEOREM2_MAX_K} in {last:.2?}"
    ))
}

fn theorem1() -> Outcome {
    for k in 0..=THEOREM1_MAX_K {
        let n = 1 << k;
        let s = build_s(&Rational::one(), n).map_err(|e| e.to_string())?;
        let inv = mat_inverse(&s).map_err(|e| e.to_string())?;
        same(
            &inv,
            &build_s(&Rational::integer(-1), n).unwrap(),
            &format!("k={k} inverse"),
        )?;
        let tm = tm_by_digit_sum(n).unwrap();
        for i in 0..n {
            for j in 0..=i {
                let v = inv.get(i, j).unwrap();
                ensure(v.is_zero() || v.abs().is_one(), || {
                    format!("k={k} ({i}, {j}) = {v}")
                })?;
                ensure(inv.is_nonzero(i, j) == s.is_nonzero(i, j), || {
                    format!("k={k} zero pattern differs at ({i}, {j})")
                })?;
            }
        }
        for j in 0..n {
            let col = column_nonzero_signs(&inv, j).map_err(|e| e.to_string())?;
            ensure(col.is_prefix_of(&tm), || {
                format!("k={k} column {j} reads {col}")
            })?;
        }
    }
    Ok(format!(
        "k <= {THEOREM1_MAX_K}: inverse is S(-1), entries in {{-1,0,1}}, columns follow t(1,-1)"
    ))
}

fn powers() -> Outcome {
    for k in 0..=POWER_MAX_K {
        let n = 1 << k;
        for q in 1..=5i64 {
            for p in -3..=3i64 {
                let root = s_power(&Rational::new(p, q), n).unwrap();
                let lhs = mat_pow(&root, q as u32).unwrap();
                same(
                    &lhs,
                    &s_power(&Rational::integer(p), n).unwrap(),
                    &format!("k={k} S({p}/{q})^{q}"),
                )?;
            }
        }
        let prod = mat_mul(
            &s_power(&Rational::integer(-1), n).unwrap(),
            &s_power(&Rational::one(), n).unwrap(),
        )
        .unwrap();
        same(
            &prod,
            &TriMatrix::identity(n).unwrap(),
            &format!("k={k} S(-1) S(1)"),
        )?;
    }
    Ok(format!("p in -3..=3, q in 1..=5, k <= {POWER_MAX_K}"))
}

fn kronecker() -> Outcome {
    let mut rng = XorShiftRng::seed_from_u64(SEED);
    for k in 0..=KRON_MAX_K {
        let n = 1 << k;
        for x in [
            Rational::one(),
            Rational::integer(-1),
            random_rational(&mut rng),
            random_rational(&mut rng),
        ] {
            let op = KronOperator::new(k, x.clone());
            let dense = build_s(&x, n).unwrap();
            same(
                &op.materialize().unwrap(),
                &dense,
                &format!("k={k} materialize S({x})"),
            )?;
            for t in 0..KRON_VECTORS {
                let v = random_vector(&mut rng, n);
                ensure(op.apply(&v).unwrap() == dense.mat_vec(&v).unwrap(), || {
                    format!("k={k} x={x} vector #{t}: Kronecker apply differs from dense")
                })?;
            }
        }
    }
    Ok(format!(
        "k <= {KRON_MAX_K}, 4 parameters x {KRON_VECTORS} vectors each"
    ))
}

fn words() -> Outcome {
    let start = Instant::now();
    for len in 1..=WORD_LENGTH {
        let w = tm_by_doubling(len).unwrap();
        ensure(w.to_signs() == tm_by_digit_sum(w.len()).unwrap(), || {
            format!("length {len}")
        })?;
    }
    let full = tm_by_doubling(CUBE_LENGTH).unwrap();
    for len in 1..=CUBE_LENGTH {
        ensure(is_cube_free(&full.letters()[..len]), || {
            format!("prefix {len} has a cube")
        })?;
    }
    let spent = within(start, WORD_BUDGET, "word checks")?;
    Ok(format!(
        "equal up to {WORD_LENGTH}, cube-free up to {CUBE_LENGTH}, {spent:.2?}"
    ))
}

fn performance() -> Outcome {
    for k in 0..=BENCH_K {
        let r = float::run_bench(k, 1, 1.0).map_err(|e| e.to_string())?;
        ensure(r.fast_updates == u64::from(k) * (1u64 << k) / 2, || {
            format!("k={k}: fast path counted {}", r.fast_updates)
        })?;
        let dense = r.dense.ok_or("dense path missing")?;
        let n = 1u64 << k;
        ensure(dense.updates == n * (n + 1) / 2, || {
            format!("k={k}: dense path counted {}", dense.updates)
        })?;
    }
    let r = float::run_bench(BENCH_K, 5, 1.0).map_err(|e| e.to_string())?;
    let speedup = r.speedup().ok_or("no dense timing")?;
    ensure(speedup >= MIN_SPEEDUP, || {
        format!("speedup {speedup:.1} below {MIN_SPEEDUP}")
    })?;
    Ok(format!(
        "counters exact for k <= {BENCH_K}; k={BENCH_K} fast {:.2?} vs dense {:.2?} ({speedup:.0}x)",
        r.fast_median,
        r.dense.unwrap().median
    ))
}

fn harness_integrity() -> Outcome {
    let (row, col) = (6, 3);
    let cfg = VerifyConfig {
        k_max: 3,
        samples: 20,
        seed: SEED,
    };
    ensure(verify::run(&cfg, &Exact).all_passed(), || {
        "clean run failed".into()
    })?;
    let report = verify::run(
        &cfg,
        &FlipEntry {
            inner: Exact,
            row,
            col,
        },
    );
    let first = report
        .first_failure()
        .ok_or("flipped entry went unnoticed")?;
    let pos = first.outcome.as_ref().unwrap_err().position;
    ensure(pos == Some((row, col)), || {
        format!("library reported {pos:?}")
    })?;

    let out = Command::new(env!("CARGO_BIN_EXE_sierp"))
        .args([
            "verify",
            "--k-max",
            "3",
            "--samples",
            "20",
            "--seed",
            "7",
            "--inject-fault",
            "6,3",
        ])
        .output()
        .map_err(|e| e.to_string())?;
    let stderr = String::from_utf8_lossy(&out.stderr);
    ensure(out.status.code() == Some(1), || {
        format!("exit status {:?}", out.status)
    })?;
    ensure(stderr.contains("(i=6, j=3)"), || {
        format!("stderr lacks counterexample: {stderr}")
    })?;
    Ok(format!(
        "flip at ({row}, {col}) -> exit 1, {}",
        stderr.trim()
    ))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 9] = [
        ("AC1 Kummer agreement", kummer_agreement),
        ("AC2 golden 8x8", golden_8x8),
        ("AC3 product identity on grid", theorem2_grid),
        ("AC4 inverse structure", theorem1),
        ("AC5 rational powers", powers),
        ("AC6 Kronecker factorization", kronecker),
        ("AC7 word equivalence and cube-freeness", words),
        ("AC8 performance", performance),
        ("AC9 harness integrity", harness_integrity),
    ];
    let mut failed = 0;
    for (name, check) in criteria {
        match check() {
            Ok(detail) => println!("PASS {name}: {detail}"),
            Err(why) => {
                failed += 1;
                println!("FAIL {name}: {why}");
            }
        }
    }
    println!(
        "{} of {} criteria passed",
        criteria.len() - failed,
        criteria.len()
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
