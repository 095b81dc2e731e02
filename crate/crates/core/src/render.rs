//! Pascal's triangle mod 2, left-justified, as text or a PBM image.
//!
//! Pixels come from the carry-free predicate directly, so large windows never
//! materialize a rational matrix.

use std::io::{self, Write};

use crate::bitops::is_free_of;
use crate::error::{Error, Result};

pub const MAX_ASCII_K: u32 = 12;
pub const MAX_PBM_K: u32 = 14;

/// Plain PBM readers should not see lines longer than this.
const PBM_LINE_WIDTH: usize = 70;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RenderFormat {
    Ascii,
    Pbm,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RenderSpec {
    pub k: u32,
    pub format: RenderFormat,
    /// `(one, zero)` glyphs for ASCII output.
    pub glyphs: (char, char),
}

impl RenderSpec {
    pub fn new(k: u32, format: RenderFormat) -> Self {
        RenderSpec {
            k,
            format,
            glyphs: ('#', '.'),
        }
    }

    pub fn with_glyphs(mut self, one: char, zero: char) -> Self {
        self.glyphs = (one, zero);
        self
    }

    pub fn validate(&self) -> Result<()> {
        let cap = match self.format {
            RenderFormat::Ascii => MAX_ASCII_K,
            RenderFormat::Pbm => MAX_PBM_K,
        };
        if self.k > cap {
            return Err(Error::CapExceeded { k: self.k, cap });
        }
        Ok(())
    }

    pub fn write_to<W: Write>(&self, out: &mut W) -> Result<()> {
        self.validate()?;
        match self.format {
            RenderFormat::Ascii => write_ascii(self.k, self.glyphs, out),
            RenderFormat::Pbm => write_pbm(self.k, out),
        }
        .map_err(Error::from)
    }
}

/// Whether `(i, j)` is a one in `S`.
#[inline]
pub fn pixel(i: usize, j: usize) -> bool {
    j <= i && is_free_of(i - j, j)
}

pub fn write_ascii<W: Write>(k: u32, glyphs: (char, char), out: &mut W) -> io::Result<()> {
    let n = 1usize << k;
    let mut line = String::with_capacity(n * glyphs.0.len_utf8().max(glyphs.1.len_utf8()) + 1);
    for i in 0..n {
        line.clear();
        line.extend((0..n).map(|j| if pixel(i, j) { glyphs.0 } else { glyphs.1 }));
        line.push('\n');
        out.write_all(line.as_bytes())?;
    }
    Ok(())
}

/// Plain (P1) PBM; `1` is black. Each image row starts a new line and is
/// wrapped at 70 digits.
pub fn write_pbm<W: Write>(k: u32, out: &mut W) -> io::Result<()> {
    let n = 1usize << k;
    writeln!(out, "P1")?;
    writeln!(out, "{n} {n}")?;
    let mut line = Vec::with_capacity(PBM_LINE_WIDTH + 1);
    for i in 0..n {
        for chunk_start in (0..n).step_by(PBM_LINE_WIDTH) {
            line.clear();
            let end = (chunk_start + PBM_LINE_WIDTH).min(n);
            line.extend((chunk_start..end).map(|j| if pixel(i, j) { b'1' } else { b'0' }));
            line.push(b'\n');
            out.write_all(&line)?;
        }
    }
    Ok(())
}

pub fn render_ascii(k: u32, glyphs: (char, char)) -> Result<String> {
    let spec = RenderSpec::new(k, RenderFormat::Ascii).with_glyphs(glyphs.0, glyphs.1);
    let mut buf = Vec::new();
    spec.write_to(&mut buf)?;
    Ok(String::from_utf8(buf).expect("glyphs are chars"))
}

pub fn render_pbm(k: u32) -> Result<String> {
    let mut buf = Vec::new();
    RenderSpec::new(k, RenderFormat::Pbm).write_to(&mut buf)?;
    Ok(String::from_utf8(buf).expect("ASCII output"))
}

/// Bitmap decoded from a plain PBM file.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Bitmap {
    pub width: usize,
    pub height: usize,
    /// Row-major, `true` for black.
    pub pixels: Vec<bool>,
}

impl Bitmap {
    pub fn get(&self, row: usize, col: usize) -> bool {
        self.pixels[row * self.width + col]
    }
}

/// Reads a P1 file: magic, width, height, then `width * height` pixels of
/// `0`/`1`, with optional whitespace between pixels and `#` comments.
pub fn parse_pbm(text: &str) -> std::result::Result<Bitmap, String> {
    let mut tokens = Vec::new();
    for line in text.lines() {
        let line = line.split('#').next().unwrap_or("");
        tokens.extend(line.split_whitespace());
    }
    let mut it = tokens.into_iter();
    if it.next() != Some("P1") {
        return Err("missing P1 magic".into());
    }
    let mut dim = || -> std::result::Result<usize, String> {
        it.next()
            .ok_or("truncated header")?
            .parse()
            .map_err(|e| format!("bad dimension: {e}"))
    };
    let (width, height) = (dim()?, dim()?);
    let mut pixels = Vec::with_capacity(width * height);
    for tok in it {
        for c in tok.chars() {
            match c {
                '0' => pixels.push(false),
                '1' => pixels.push(true),
                other => return Err(format!("unexpected pixel {other:?}")),
            }
        }
    }
    if pixels.len() != width * height {
        return Err(format!(
            "expected {} pixels, found {}",
            width * height,
            pixels.len()
        ));
    }
    Ok(Bitmap {
        width,
        height,
        pixels,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::Rational;
    use crate::sierpmatrix::build_s;

    #[test]
    fn ascii_examples() {
        assert_eq!(
            render_ascii(2, ('#', '.')).unwrap(),
            "#...\n##..\n#.#.\n####\n"
        );
        assert_eq!(render_ascii(0, ('#', '.')).unwrap(), "#\n");
        assert_eq!(render_ascii(1, ('X', ' ')).unwrap(), "X \nXX\n");
    }

    #[test]
    fn caps() {
        assert_eq!(
            render_ascii(13, ('#', '.')),
            Err(Error::CapExceeded { k: 13, cap: 12 })
        );
        assert!(RenderSpec::new(14, RenderFormat::Pbm).validate().is_ok());
        assert!(RenderSpec::new(15, RenderFormat::Pbm).validate().is_err());
    }

    #[test]
    fn pbm_matches_dense_matrix() {
        let text = render_pbm(5).unwrap();
        assert!(text.lines().all(|l| l.len() <= 70));
        let bmp = parse_pbm(&text).unwrap();
        assert_eq!((bmp.width, bmp.height), (32, 32));
        let s = build_s(&Rational::one(), 32).unwrap();
        for i in 0..32 {
            for j in 0..32 {
                assert_eq!(bmp.get(i, j), s.is_nonzero(i, j), "({i}, {j})");
            }
        }
    }

    #[test]
    fn pbm_wraps_wide_rows() {
        let text = render_pbm(7).unwrap();
        // 128 pixels per row -> lines of 70 and 58
        assert_eq!(text.lines().count(), 2 + 2 * 128);
        assert_eq!(parse_pbm(&text).unwrap().width, 128);
    }

    #[test]
    fn parse_rejects_malformed() {
        assert!(parse_pbm("P4\n1 1\n1\n").is_err());
        assert!(parse_pbm("P1\n2 2\n1 0 1\n").is_err());
        assert!(parse_pbm("P1\n1 1\n2\n").is_err());
        assert_eq!(
            parse_pbm("P1\n# comment\n2 1\n1 0\n").unwrap().pixels,
            vec![true, false]
        );
    }
}
