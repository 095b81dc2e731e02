//! Exact arithmetic for the Sierpinski-Pascal matrix family `S(x)`.
//!
//! `S(x)` is the infinite unit lower-triangular matrix whose `(i, j)` entry is
//! `x^b(i-j)` when `i - j` is carry-free with respect to `j` and zero otherwise,
//! where `b(n)` counts the 1-bits of `n`. `S(1)` is Pascal's triangle mod 2,
//! `S(x) S(y) = S(x + y)`, and so `S(-1)` is the inverse of `S(1)`; its columns
//! carry the Prouhet-Thue-Morse word in signs.
//!
//! Everything here works on the `2^k x 2^k` upper-left window, which is closed
//! under products and inverses because the matrices are lower-triangular.

pub mod bitops;
mod error;
pub mod kronapply;
pub mod rational;
pub mod render;
pub mod sierpmatrix;
pub mod tmword;
pub mod verify;

pub use error::{Error, Result};
pub use kronapply::KronOperator;
pub use rational::Rational;
pub use sierpmatrix::TriMatrix;
pub use tmword::{Letter, SignWord, TmWord};
