//! The Prouhet-Thue-Morse word, built two ways: by repeated
//! switch-and-append starting from `a`, and by the closed form
//! `(-1)^b(n)`.

use std::fmt;

use crate::bitops::digit_sum;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Letter {
    A,
    B,
}

impl Letter {
    pub fn complement(self) -> Letter {
        match self {
            Letter::A => Letter::B,
            Letter::B => Letter::A,
        }
    }

    /// `a -> +1`, `b -> -1`.
    pub fn sign(self) -> i8 {
        match self {
            Letter::A => 1,
            Letter::B => -1,
        }
    }

    pub fn from_char(c: char) -> Option<Letter> {
        match c {
            'a' | 'A' => Some(Letter::A),
            'b' | 'B' => Some(Letter::B),
            _ => None,
        }
    }
}

/// Prefix of the Thue-Morse word over `{a, b}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TmWord {
    letters: Vec<Letter>,
}

impl TmWord {
    pub fn letters(&self) -> &[Letter] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn to_signs(&self) -> SignWord {
        SignWord(self.letters.iter().map(|l| l.sign()).collect())
    }

    pub fn is_cube_free(&self) -> bool {
        is_cube_free(&self.letters)
    }
}

/// Lowercase letters, e.g. `abbabaab`.
impl fmt::Display for TmWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for l in &self.letters {
            f.write_str(match l {
                Letter::A => "a",
                Letter::B => "b",
            })?;
        }
        Ok(())
    }
}

/// Thue-Morse word over `{+1, -1}`: `signs[n] = (-1)^b(n)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SignWord(Vec<i8>);

impl SignWord {
    /// Wraps raw signs; `None` if any value is not `+1` or `-1`.
    pub fn from_signs(signs: Vec<i8>) -> Option<SignWord> {
        signs
            .iter()
            .all(|&s| s == 1 || s == -1)
            .then_some(SignWord(signs))
    }

    pub fn signs(&self) -> &[i8] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_prefix_of(&self, other: &SignWord) -> bool {
        other.0.starts_with(&self.0)
    }
}

/// `+` and `-`, e.g. `+--+`.
impl fmt::Display for SignWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &s in &self.0 {
            f.write_str(if s > 0 { "+" } else { "-" })?;
        }
        Ok(())
    }
}

/// Starts from `a` and repeatedly appends the letter-complement of the word
/// so far, stopping at the first power-of-two length `>= min_length`.
pub fn tm_by_doubling(min_length: usize) -> Result<TmWord> {
    if min_length == 0 {
        return Err(Error::EmptyWord);
    }
    let target = min_length.next_power_of_two();
    let mut letters = Vec::with_capacity(target);
    letters.push(Letter::A);
    while letters.len() < target {
        let half = letters.len();
        letters.extend_from_within(..half);
        for l in &mut letters[half..] {
            *l = l.complement();
        }
    }
    Ok(TmWord { letters })
}

/// `(-1)^b(n)` for `0 <= n < length`.
pub fn tm_by_digit_sum(length: usize) -> Result<SignWord> {
    if length == 0 {
        return Err(Error::EmptyWord);
    }
    Ok(SignWord(
        (0..length)
            .map(|n| {
                if digit_sum(n).is_multiple_of(2) {
                    1
                } else {
                    -1
                }
            })
            .collect(),
    ))
}

/// True iff no factor of `word` has the form `www` with `w` nonempty.
///
/// Plain cubic scan over (period, start); fine for words of a few thousand
/// letters.
pub fn is_cube_free<T: PartialEq>(word: &[T]) -> bool {
    let len = word.len();
    for period in 1..=len / 3 {
        // run = length of the current stretch where word[i] == word[i + period]
        let mut run = 0;
        for i in 0..len - period {
            if word[i] == word[i + period] {
                run += 1;
                if run >= 2 * period {
                    return false;
                }
            } else {
                run = 0;
            }
        }
    }
    true
}
