//! Alphabets, finite windows of bi-infinite sequences, rotation codings and
//! the coordinate-wise operations used by the arc construction.
//!
//! A [`Window`] is a finite block `x[base], x[base+1], …` of a point of
//! `Λ^Z`. Binary operations always act on the overlap of the absolute
//! coordinate ranges; nothing is padded.

mod density;
mod fixed;
mod io;
mod rotation;

pub use density::{disagreement_count, disagreement_density, running_density, star_product};
pub use fixed::{FixedFraction, FRACTION_BITS, MIN_PRECISION_BITS};
pub use io::{parse_windows, read_window, write_window, write_window_file, HeaderFields};
pub use rotation::{sturmian_window, RotationCoding};

use crate::error::{Error, Result};
use std::fmt;

/// Finite alphabet `{0, 1, …, size-1}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Alphabet(u16);

impl Alphabet {
    pub const BINARY: Alphabet = Alphabet(2);

    pub fn new(size: usize) -> Result<Self> {
        if !(2..=256).contains(&size) {
            return Err(Error::InvalidAlphabet(size));
        }
        Ok(Alphabet(size as u16))
    }

    pub fn size(self) -> usize {
        self.0 as usize
    }

    pub fn contains(self, symbol: u8) -> bool {
        (symbol as usize) < self.size()
    }

    /// Largest symbol of the alphabet.
    pub fn max_symbol(self) -> u8 {
        (self.0 - 1) as u8
    }
}

/// A finite block of a bi-infinite sequence, anchored at an absolute index.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Window {
    alphabet: Alphabet,
    base: i64,
    symbols: Vec<u8>,
}

impl Window {
    pub fn new(alphabet: Alphabet, base: i64, symbols: Vec<u8>) -> Result<Self> {
        if symbols.is_empty() {
            return Err(Error::EmptyWindow);
        }
        if let Some((offset, &symbol)) = symbols.iter().enumerate().find(|(_, &s)| !alphabet.contains(s)) {
            return Err(Error::SymbolOutOfRange { symbol, offset, size: alphabet.size() });
        }
        Ok(Window { alphabet, base, symbols })
    }

    /// Parses a contiguous digit string such as `"2101"`.
    pub fn from_digits(alphabet: Alphabet, base: i64, digits: &str) -> Result<Self> {
        let symbols = digits
            .chars()
            .map(|c| {
                c.to_digit(10).map(|d| d as u8).ok_or_else(|| Error::InvalidParameter(format!("not a digit: {c:?}")))
            })
            .collect::<Result<Vec<_>>>()?;
        Window::new(alphabet, base, symbols)
    }

    /// Binary window at base 0, convenient in tests.
    pub fn binary(digits: &str) -> Result<Self> {
        Window::from_digits(Alphabet::BINARY, 0, digits)
    }

    pub fn constant(alphabet: Alphabet, base: i64, len: usize, symbol: u8) -> Result<Self> {
        Window::new(alphabet, base, vec![symbol; len])
    }

    pub fn alphabet(&self) -> Alphabet {
        self.alphabet
    }

    pub fn base(&self) -> i64 {
        self.base
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn symbols(&self) -> &[u8] {
        &self.symbols
    }

    pub fn into_symbols(self) -> Vec<u8> {
        self.symbols
    }

    /// One past the last absolute coordinate.
    pub fn end(&self) -> i64 {
        self.base + self.symbols.len() as i64
    }

    /// Symbol at absolute coordinate `j`, if covered.
    pub fn get(&self, j: i64) -> Option<u8> {
        if j < self.base || j >= self.end() {
            return None;
        }
        Some(self.symbols[(j - self.base) as usize])
    }

    /// Absolute half-open range shared with `other`.
    pub fn overlap(&self, other: &Window) -> Option<(i64, i64)> {
        let lo = self.base.max(other.base);
        let hi = self.end().min(other.end());
        (lo < hi).then_some((lo, hi))
    }

    /// Symbols on the absolute range `[lo, hi)`, which must be covered.
    pub fn slice_abs(&self, lo: i64, hi: i64) -> &[u8] {
        let a = (lo - self.base) as usize;
        let b = (hi - self.base) as usize;
        &self.symbols[a..b]
    }

    /// Sub-window on the absolute range `[lo, hi)`.
    pub fn restrict(&self, lo: i64, hi: i64) -> Result<Window> {
        if lo < self.base || hi > self.end() || lo >= hi {
            return Err(Error::InvalidParameter(format!(
                "range [{lo}, {hi}) not inside window [{}, {})",
                self.base,
                self.end()
            )));
        }
        Window::new(self.alphabet, lo, self.slice_abs(lo, hi).to_vec())
    }

    /// Entrywise `self ≤ other` on the overlap.
    pub fn le_entrywise(&self, other: &Window) -> Result<bool> {
        let (lo, hi) = self.overlap(other).ok_or(Error::DisjointWindows)?;
        Ok(self.slice_abs(lo, hi).iter().zip(other.slice_abs(lo, hi)).all(|(a, b)| a <= b))
    }

    /// Number of nonzero symbols.
    pub fn support_size(&self) -> usize {
        self.symbols.iter().filter(|&&s| s != 0).count()
    }
}

impl fmt::Display for Window {
    /// Contiguous digits for alphabets up to 10, space separated otherwise.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&format_symbols(self.alphabet, &self.symbols))
    }
}

/// Contiguous digits for alphabets up to 10, space separated otherwise.
pub fn format_symbols(alphabet: Alphabet, symbols: &[u8]) -> String {
    if alphabet.size() <= 10 {
        symbols.iter().map(|&s| (b'0' + s) as char).collect()
    } else {
        symbols.iter().map(u8::to_string).collect::<Vec<_>>().join(" ")
    }
}

/// Inverse of [`format_symbols`]; validates every symbol.
pub fn parse_symbols(alphabet: Alphabet, text: &str) -> Result<Vec<u8>> {
    let symbols = if alphabet.size() <= 10 {
        text.trim()
            .bytes()
            .map(|b| match b {
                b'0'..=b'9' => Ok(b - b'0'),
                _ => Err(Error::InvalidParameter(format!("not a digit: {:?}", b as char))),
            })
            .collect::<Result<Vec<u8>>>()?
    } else {
        text.split_whitespace()
            .map(|t| t.parse::<u8>().map_err(|e| Error::InvalidParameter(format!("{t:?}: {e}"))))
            .collect::<Result<Vec<u8>>>()?
    };
    if let Some((offset, &symbol)) = symbols.iter().enumerate().find(|(_, &s)| !alphabet.contains(s)) {
        return Err(Error::SymbolOutOfRange { symbol, offset, size: alphabet.size() });
    }
    Ok(symbols)
}

impl serde::Serialize for Window {
    /// Serialized as its symbol string.
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn alphabet_bounds() {
        assert!(Alphabet::new(1).is_err());
        assert!(Alphabet::new(257).is_err());
        assert_eq!(Alphabet::new(3).unwrap().max_symbol(), 2);
    }

    #[test]
    fn window_validates_symbols() {
        let err = Window::new(Alphabet::BINARY, 0, vec![0, 2]).unwrap_err();
        assert_eq!(err, Error::SymbolOutOfRange { symbol: 2, offset: 1, size: 2 });
        assert_eq!(Window::new(Alphabet::BINARY, 0, vec![]).unwrap_err(), Error::EmptyWindow);
    }

    #[test]
    fn overlap_and_get() {
        let a = Window::new(Alphabet::BINARY, -2, vec![1, 0, 1, 1]).unwrap();
        let b = Window::new(Alphabet::BINARY, 1, vec![0, 0, 0]).unwrap();
        assert_eq!(a.overlap(&b), Some((1, 2)));
        assert_eq!(a.get(-2), Some(1));
        assert_eq!(a.get(2), None);
        let c = Window::new(Alphabet::BINARY, 2, vec![0]).unwrap();
        assert_eq!(a.overlap(&c), None);
    }

    #[test]
    fn display_wide_alphabet() {
        let w = Window::new(Alphabet::new(12).unwrap(), 0, vec![11, 0, 3]).unwrap();
        assert_eq!(w.to_string(), "11 0 3");
    }
}
