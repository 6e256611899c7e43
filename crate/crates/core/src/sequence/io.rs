//! Plain-text window records.
//!
//! ```text
//! #base=-3 n=2
//! 0110100
//! ```
//!
//! Symbols are contiguous digits for `n ≤ 10` and whitespace-separated
//! integers otherwise. The header may carry extra `key=value` fields after
//! `n`; readers keep them but the window itself ignores them.

use super::{Alphabet, Window};
use crate::error::{Error, Result};
use crate::report::write_atomic;
use std::fmt::Write as _;
use std::path::Path;

/// Extra `key=value` pairs found on a header line, in order.
pub type HeaderFields = Vec<(String, String)>;

/// Serializes one record. `extra` fields are appended to the header.
pub fn write_window(w: &Window, extra: &[(&str, &str)]) -> String {
    let mut out = String::with_capacity(w.len() + 32);
    write!(out, "#base={} n={}", w.base(), w.alphabet().size()).unwrap();
    for (k, v) in extra {
        write!(out, " {k}={v}").unwrap();
    }
    out.push('\n');
    write!(out, "{w}").unwrap();
    out.push('\n');
    out
}

pub fn write_window_file(path: &Path, w: &Window, extra: &[(&str, &str)]) -> Result<()> {
    write_atomic(path, write_window(w, extra).as_bytes())
}

/// Reads the first record of a window file.
pub fn read_window(path: &Path) -> Result<Window> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    parse_windows(&text)?
        .into_iter()
        .next()
        .map(|(w, _)| w)
        .ok_or(Error::Parse { line: 1, message: "no window record".into() })
}

/// Parses every record in `text`.
pub fn parse_windows(text: &str) -> Result<Vec<(Window, HeaderFields)>> {
    let mut records = Vec::new();
    let mut lines = text.lines().enumerate().peekable();
    while let Some((idx, line)) = lines.next() {
        if line.trim().is_empty() {
            continue;
        }
        let line_no = idx + 1;
        let parse_err = |message: String| Error::Parse { line: line_no, message };
        let header =
            line.strip_prefix('#').ok_or_else(|| parse_err(format!("expected header, found {:?}", truncate(line))))?;
        let mut base = None;
        let mut size = None;
        let mut extra = Vec::new();
        for field in header.split_whitespace() {
            let (k, v) = field.split_once('=').ok_or_else(|| parse_err(format!("malformed header field {field:?}")))?;
            match k {
                "base" => base = Some(v.parse::<i64>().map_err(|e| parse_err(format!("base: {e}")))?),
                "n" => size = Some(v.parse::<usize>().map_err(|e| parse_err(format!("n: {e}")))?),
                _ => extra.push((k.to_string(), v.to_string())),
            }
        }
        let base = base.ok_or_else(|| parse_err("header lacks base".into()))?;
        let size = size.ok_or_else(|| parse_err("header lacks n".into()))?;
        let alphabet = Alphabet::new(size).map_err(|e| parse_err(e.to_string()))?;

        let (body_idx, body) = lines.next().ok_or_else(|| parse_err("header without symbol line".into()))?;
        let body_err = |message: String| Error::Parse { line: body_idx + 1, message };
        let symbols = if size <= 10 {
            body.trim_end()
                .bytes()
                .map(|b| match b {
                    b'0'..=b'9' => Ok(b - b'0'),
                    _ => Err(body_err(format!("unexpected byte {:?}", b as char))),
                })
                .collect::<Result<Vec<u8>>>()?
        } else {
            body.split_whitespace()
                .map(|t| t.parse::<u8>().map_err(|e| body_err(format!("{t:?}: {e}"))))
                .collect::<Result<Vec<u8>>>()?
        };
        let w = Window::new(alphabet, base, symbols).map_err(|e| body_err(e.to_string()))?;
        records.push((w, extra));
    }
    Ok(records)
}

fn truncate(s: &str) -> &str {
    match s.char_indices().nth(40) {
        Some((i, _)) => &s[..i],
        None => s,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn exact_text_format() {
        let w = Window::new(Alphabet::BINARY, -3, vec![0, 1, 1]).unwrap();
        assert_eq!(write_window(&w, &[]), "#base=-3 n=2\n011\n");
        assert_eq!(write_window(&w, &[("manifest", "ab12")]), "#base=-3 n=2 manifest=ab12\n011\n");
        let wide = Window::new(Alphabet::new(11).unwrap(), 5, vec![10, 0, 7]).unwrap();
        assert_eq!(write_window(&wide, &[]), "#base=5 n=11\n10 0 7\n");
    }

    #[test]
    fn several_records_and_extras() {
        let text = "#base=0 n=3 manifest=ff\n2101\n\n#base=7 n=2\n1\n";
        let recs = parse_windows(text).unwrap();
        assert_eq!(recs.len(), 2);
        assert_eq!(recs[0].0.to_string(), "2101");
        assert_eq!(recs[0].1, vec![("manifest".to_string(), "ff".to_string())]);
        assert_eq!(recs[1].0.base(), 7);
    }

    #[test]
    fn parse_errors_carry_line_numbers() {
        let err = parse_windows("#base=0 n=2\n012\n").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 2, .. }), "{err:?}");
        let err = parse_windows("0101\n").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 1, .. }));
        assert!(parse_windows("#base=0\n01\n").is_err());
        assert!(parse_windows("#base=0 n=2\n").is_err());
    }

    proptest! {
        #[test]
        fn round_trip_is_bit_exact(
            size in 2usize..20,
            base in -1000i64..1000,
            raw in proptest::collection::vec(any::<u8>(), 1..64),
        ) {
            let symbols: Vec<u8> = raw.iter().map(|s| s % size as u8).collect();
            let w = Window::new(Alphabet::new(size).unwrap(), base, symbols).unwrap();
            let text = write_window(&w, &[]);
            let back = parse_windows(&text).unwrap();
            prop_assert_eq!(&back[0].0, &w);
            prop_assert_eq!(write_window(&back[0].0, &[]), text);
        }
    }
}
