//! Lempel-Ziv (1976) complexity as an entropy cross-check.
//!
//! The exhaustive-history parse splits the window into phrases, each being
//! the longest prefix of the remaining text that already starts somewhere
//! earlier (overlap allowed) plus one fresh symbol. With `c` phrases over a
//! window of length `N`, `c · ln N / N` converges to the entropy rate of a
//! stationary ergodic source.

use crate::error::{Error, Result};
use crate::sequence::Window;

/// Windows shorter than this are rejected.
pub const LZ_MIN_LENGTH: usize = 10_000;

const NONE: u32 = u32::MAX;

/// Suffix automaton of the whole text, with the end position of the first
/// occurrence of every state.
struct SuffixAutomaton {
    len: Vec<u32>,
    link: Vec<u32>,
    first_end: Vec<u32>,
    next: Vec<Vec<(u8, u32)>>,
    last: u32,
}

impl SuffixAutomaton {
    fn build(text: &[u8]) -> Self {
        let cap = 2 * text.len() + 1;
        let mut sam = SuffixAutomaton {
            len: Vec::with_capacity(cap),
            link: Vec::with_capacity(cap),
            first_end: Vec::with_capacity(cap),
            next: Vec::with_capacity(cap),
            last: 0,
        };
        sam.push(0, NONE, 0, Vec::new());
        for (pos, &c) in text.iter().enumerate() {
            sam.extend(c, pos as u32);
        }
        sam
    }

    fn push(&mut self, len: u32, link: u32, first_end: u32, next: Vec<(u8, u32)>) -> u32 {
        self.len.push(len);
        self.link.push(link);
        self.first_end.push(first_end);
        self.next.push(next);
        (self.len.len() - 1) as u32
    }

    fn go(&self, state: u32, c: u8) -> Option<u32> {
        self.next[state as usize].iter().find(|&&(s, _)| s == c).map(|&(_, t)| t)
    }

    fn set(&mut self, state: u32, c: u8, target: u32) {
        let edges = &mut self.next[state as usize];
        match edges.iter_mut().find(|(s, _)| *s == c) {
            Some(e) => e.1 = target,
            None => edges.push((c, target)),
        }
    }

    fn extend(&mut self, c: u8, pos: u32) {
        let cur = self.push(self.len[self.last as usize] + 1, NONE, pos, Vec::new());
        let mut p = self.last;
        while p != NONE && self.go(p, c).is_none() {
            self.set(p, c, cur);
            p = self.link[p as usize];
        }
        if p == NONE {
            self.link[cur as usize] = 0;
        } else {
            let q = self.go(p, c).expect("transition exists");
            if self.len[p as usize] + 1 == self.len[q as usize] {
                self.link[cur as usize] = q;
            } else {
                let clone = self.push(
                    self.len[p as usize] + 1,
                    self.link[q as usize],
                    self.first_end[q as usize],
                    self.next[q as usize].clone(),
                );
                while p != NONE && self.go(p, c) == Some(q) {
                    self.set(p, c, clone);
                    p = self.link[p as usize];
                }
                self.link[q as usize] = clone;
                self.link[cur as usize] = clone;
            }
        }
        self.last = cur;
    }
}

/// Number of phrases in the exhaustive-history parse of `text`.
pub fn lz76_phrase_count(text: &[u8]) -> usize {
    let sam = SuffixAutomaton::build(text);
    let n = text.len();
    let (mut i, mut phrases) = (0usize, 0usize);
    while i < n {
        let (mut state, mut l) = (0u32, 0usize);
        // text[i..i+l+1] starts before i iff its first occurrence ends before i + l.
        while i + l < n {
            match sam.go(state, text[i + l]) {
                Some(t) if (sam.first_end[t as usize] as usize) < i + l => {
                    state = t;
                    l += 1;
                }
                _ => break,
            }
        }
        phrases += 1;
        i += l + 1;
    }
    phrases
}

/// `c · ln N / N` in nats, where `c` is the LZ76 phrase count.
pub fn lz_entropy_estimate(w: &Window) -> Result<f64> {
    if w.len() < LZ_MIN_LENGTH {
        return Err(Error::WindowTooShort { len: w.len(), required: LZ_MIN_LENGTH, what: "Lempel-Ziv estimate" });
    }
    let n = w.len() as f64;
    Ok(lz76_phrase_count(w.symbols()) as f64 * n.ln() / n)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sequence::Alphabet;
    use proptest::prelude::*;

    /// Quadratic-time parse straight from the definition.
    fn naive_phrase_count(text: &[u8]) -> usize {
        let (mut i, mut phrases) = (0, 0);
        while i < text.len() {
            let mut best = 0;
            for j in 0..i {
                let mut l = 0;
                while i + l < text.len() && text[j + l] == text[i + l] {
                    l += 1;
                }
                best = best.max(l);
            }
            phrases += 1;
            i += best + 1;
        }
        phrases
    }

    #[test]
    fn textbook_parse() {
        // 0 | 001 | 10 | 100 | 1000 | 101
        assert_eq!(lz76_phrase_count(&[0, 0, 0, 1, 1, 0, 1, 0, 0, 1, 0, 0, 0, 1, 0, 1]), 6);
        assert_eq!(lz76_phrase_count(&[0; 50]), 2);
        assert_eq!(lz76_phrase_count(&[0, 1].repeat(40)), 3);
    }

    #[test]
    fn periodic_and_constant_windows_are_near_zero() {
        let zeros = Window::constant(Alphabet::BINARY, 0, 1_000_000, 0).unwrap();
        assert!(lz_entropy_estimate(&zeros).unwrap() <= 0.01);
        let alt = Window::new(Alphabet::BINARY, 0, [0, 1].repeat(500_000)).unwrap();
        assert!(lz_entropy_estimate(&alt).unwrap() <= 0.01);
        assert!(lz_entropy_estimate(&Window::constant(Alphabet::BINARY, 0, 9_999, 0).unwrap()).is_err());
    }

    proptest! {
        #[test]
        fn matches_naive_parse(text in proptest::collection::vec(0u8..3, 1..200)) {
            prop_assert_eq!(lz76_phrase_count(&text), naive_phrase_count(&text));
        }

        #[test]
        fn matches_naive_parse_binary(text in proptest::collection::vec(0u8..2, 1..300)) {
            prop_assert_eq!(lz76_phrase_count(&text), naive_phrase_count(&text));
        }
    }
}
