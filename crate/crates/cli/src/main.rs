//! `sierp`: emit, render, and verify the Sierpinski-Pascal matrices `S(x)`.
//!
//! Exit codes: 0 success, 1 verification failure, 2 usage error or limit
//! exceeded.

use std::io::{self, BufWriter, Write};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use sierp::kronapply::float;
use sierp::render::{RenderFormat, RenderSpec};
use sierp::sierpmatrix::build_s;
use sierp::tmword::tm_by_doubling;
use sierp::verify::{self, Exact, FlipEntry, VerifyConfig, MAX_VERIFY_K};
use sierp::{Rational, TriMatrix};

const MAX_MATRIX_K: u32 = 10;
const MAX_WORD_LENGTH: usize = 1 << 20;

#[derive(Parser)]
#[command(
    name = "sierp",
    version,
    about = "Sierpinski-Pascal matrices S(x) and the Thue-Morse word"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print the 2^k x 2^k window of S(x) with exact entries.
    Matrix {
        /// Parameter x as p or p/q.
        #[arg(long, default_value = "1", allow_hyphen_values = true)]
        x: Rational,
        #[arg(long)]
        k: u32,
        #[arg(long, value_enum, default_value_t = MatrixFormat::Csv)]
        format: MatrixFormat,
    },
    /// Draw Pascal's triangle mod 2 (the support of S) as text or PBM.
    Render {
        #[arg(long)]
        k: u32,
        #[arg(long, value_enum, default_value_t = ImageFormat::Ascii)]
        format: ImageFormat,
        /// Two characters: the glyph for 1, then the glyph for 0.
        #[arg(long, default_value = "#.")]
        glyphs: String,
    },
    /// Print a prefix of the Thue-Morse word.
    ThueMorse {
        #[arg(long)]
        length: usize,
        #[arg(long, value_enum, default_value_t = Alphabet::Letters)]
        alphabet: Alphabet,
    },
    /// Check every identity for each window size up to 2^k_max.
    Verify {
        #[arg(long, default_value_t = 4)]
        k_max: u32,
        #[arg(long, default_value_t = 50)]
        samples: usize,
        #[arg(long, default_value_t = 7)]
        seed: u64,
        /// Flip entry ROW,COL of every constructed matrix (harness self-test).
        #[arg(long, hide = true, value_parser = parse_position)]
        inject_fault: Option<(usize, usize)>,
    },
    /// Time the Kronecker butterfly against dense mat-vec over f64.
    Bench {
        #[arg(long)]
        k: u32,
        #[arg(long, default_value_t = 5)]
        reps: usize,
        #[arg(long, default_value_t = 1.0, allow_hyphen_values = true)]
        x: f64,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum MatrixFormat {
    Csv,
    Json,
}

#[derive(Clone, Copy, ValueEnum)]
enum ImageFormat {
    Ascii,
    Pbm,
}

#[derive(Clone, Copy, ValueEnum)]
enum Alphabet {
    Letters,
    Signs,
}

fn parse_position(s: &str) -> Result<(usize, usize), String> {
    let (i, j) = s.split_once(',').ok_or("expected ROW,COL")?;
    Ok((
        i.trim().parse().map_err(|e| format!("{e}"))?,
        j.trim().parse().map_err(|e| format!("{e}"))?,
    ))
}

enum Failure {
    Usage(String),
    Verification(String),
    Io(io::Error),
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Io(e)
    }
}

impl From<sierp::Error> for Failure {
    fn from(e: sierp::Error) -> Self {
        match e {
            sierp::Error::Io(msg) => Failure::Io(io::Error::other(msg)),
            other => Failure::Usage(other.to_string()),
        }
    }
}

fn write_csv(m: &TriMatrix, out: &mut impl Write) -> io::Result<()> {
    for row in m.to_rows() {
        let cells: Vec<String> = row.iter().map(ToString::to_string).collect();
        writeln!(out, "{}", cells.join(","))?;
    }
    Ok(())
}

fn write_json(m: &TriMatrix, out: &mut impl Write) -> io::Result<()> {
    writeln!(out, "[")?;
    let rows = m.to_rows();
    for (i, row) in rows.iter().enumerate() {
        let cells: Vec<String> = row.iter().map(|v| format!("\"{v}\"")).collect();
        let sep = if i + 1 < rows.len() { "," } else { "" };
        writeln!(out, "  [{}]{sep}", cells.join(","))?;
    }
    writeln!(out, "]")
}

fn run(cli: Cli, out: &mut impl Write) -> Result<(), Failure> {
    match cli.command {
        Command::Matrix { x, k, format } => {
            if k > MAX_MATRIX_K {
                return Err(Failure::Usage(format!(
                    "k = {k} exceeds the cap of {MAX_MATRIX_K}"
                )));
            }
            let m = build_s(&x, 1 << k)?;
            match format {
                MatrixFormat::Csv => write_csv(&m, out)?,
                MatrixFormat::Json => write_json(&m, out)?,
            }
        }
        Command::Render { k, format, glyphs } => {
            let chars: Vec<char> = glyphs.chars().collect();
            let [one, zero] = chars[..] else {
                return Err(Failure::Usage(format!(
                    "--glyphs needs exactly two characters, got {glyphs:?}"
                )));
            };
            let format = match format {
                ImageFormat::Ascii => RenderFormat::Ascii,
                ImageFormat::Pbm => RenderFormat::Pbm,
            };
            RenderSpec::new(k, format)
                .with_glyphs(one, zero)
                .write_to(out)?;
        }
        Command::ThueMorse { length, alphabet } => {
            if !(1..=MAX_WORD_LENGTH).contains(&length) {
                return Err(Failure::Usage(format!(
                    "length must be in 1..={MAX_WORD_LENGTH}"
                )));
            }
            let word = tm_by_doubling(length)?;
            let text = match alphabet {
                Alphabet::Letters => word.to_string(),
                Alphabet::Signs => word.to_signs().to_string(),
            };
            writeln!(out, "{}", &text[..length])?;
        }
        Command::Verify {
            k_max,
            samples,
            seed,
            inject_fault,
        } => {
            if k_max > MAX_VERIFY_K {
                return Err(Failure::Usage(format!(
                    "k_max = {k_max} exceeds the cap of {MAX_VERIFY_K}"
                )));
            }
            let cfg = VerifyConfig {
                k_max,
                samples,
                seed,
            };
            let report = match inject_fault {
                Some((row, col)) => verify::run(
                    &cfg,
                    &FlipEntry {
                        inner: Exact,
                        row,
                        col,
                    },
                ),
                None => verify::run(&cfg, &Exact),
            };
            write!(out, "{report}")?;
            if let Some(first) = report.first_failure() {
                return Err(Failure::Verification(format!(
                    "first counterexample: k={} {}: {}",
                    first.k,
                    first.name,
                    first.outcome.as_ref().unwrap_err()
                )));
            }
        }
        Command::Bench { k, reps, x } => {
            let report = float::run_bench(k, reps, x)?;
            write!(out, "{report}")?;
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let stdout = io::stdout();
    let mut out = BufWriter::new(stdout.lock());
    let result = run(cli, &mut out);
    let flushed = out.flush();
    match result.and(flushed.map_err(Failure::Io)) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Verification(msg)) => {
            eprintln!("{msg}");
            ExitCode::from(1)
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        // A closed pipe (e.g. `| head`) is not worth a diagnostic.
        Err(Failure::Io(e)) if e.kind() == io::ErrorKind::BrokenPipe => ExitCode::SUCCESS,
        Err(Failure::Io(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}
