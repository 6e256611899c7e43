//! Shift families: spacing, bounded-density, beta, B-free, B-admissible,
//! finite-type and full shifts.
//!
//! Every family here is translation invariant at word level, so admissibility
//! depends only on a window's symbols and never on its base index.

mod beta;
mod bfree;
mod language;
mod spec_file;

pub use beta::{parse_real, quasi_greedy_expansion, BetaShift, Expansion, QuadraticReal, DEFAULT_DIGITS_BUDGET};
pub use bfree::{badmissible_admits, bfree_admits, bfree_characteristic, primitive_basis, DEFAULT_BFREE_NODE_BUDGET};
pub use language::{
    count_words, count_words_upto, hereditary_closure, heredity_check, safe_symbol_check, topological_entropy_estimate,
    EnumerationBudget, TopologicalEntropy, Verdict,
};
pub use spec_file::{load_spec_file, SpacingRule, SpecFile, WordSpec};

use crate::error::{Error, Result};
use crate::sequence::{Alphabet, Window};
use std::collections::BTreeSet;

/// The gap set `P` of a spacing shift.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SpacingSet {
    /// Even gaps.
    Evens,
    /// Every positive gap (the full 2-shift).
    All,
    /// An explicit finite set. When `max` is given the set is only defined on
    /// `1..=max` and longer gaps are an error.
    Explicit { members: BTreeSet<u64>, max: Option<u64> },
}

impl SpacingSet {
    pub fn contains(&self, gap: u64) -> Result<bool> {
        Ok(match self {
            SpacingSet::Evens => gap.is_multiple_of(2),
            SpacingSet::All => true,
            SpacingSet::Explicit { members, max } => {
                if let Some(max) = max {
                    if gap > *max {
                        return Err(Error::InvalidParameter(format!(
                            "spacing set is undefined beyond {max}, gap {gap} requested"
                        )));
                    }
                }
                members.contains(&gap)
            }
        })
    }

    pub fn empty() -> Self {
        SpacingSet::Explicit { members: BTreeSet::new(), max: None }
    }
}

/// Description of a shift space.
#[derive(Debug, Clone, PartialEq)]
pub enum ShiftFamilySpec {
    /// `x_i = x_j = 1, i ≠ j ⟹ |i − j| ∈ P`.
    Spacing(SpacingSet),
    /// Every subword of length `p` sums to at most `f[p-1]`; lengths beyond
    /// the table are unconstrained.
    BoundedDensity(Vec<f64>),
    Beta(BetaShift),
    /// Orbit closure of the characteristic sequence of the B-free integers.
    BFree(Vec<u64>),
    /// For every `b ∈ B` the support misses some residue class mod `b`.
    BAdmissible(Vec<u64>),
    Sft {
        alphabet: Alphabet,
        forbidden: Vec<Vec<u8>>,
    },
    Full(Alphabet),
}

impl ShiftFamilySpec {
    pub fn sft(alphabet: Alphabet, forbidden: Vec<Vec<u8>>) -> Result<Self> {
        for word in &forbidden {
            if word.is_empty() {
                return Err(Error::InvalidParameter("forbidden words must be nonempty".into()));
            }
            if let Some(&s) = word.iter().find(|&&s| !alphabet.contains(s)) {
                return Err(Error::SymbolOutOfRange { symbol: s, offset: 0, size: alphabet.size() });
            }
        }
        Ok(ShiftFamilySpec::Sft { alphabet, forbidden })
    }

    /// Finite-type shift from digit strings, e.g. `["11"]`.
    pub fn sft_digits(alphabet_size: usize, forbidden: &[&str]) -> Result<Self> {
        let alphabet = Alphabet::new(alphabet_size)?;
        let words = forbidden
            .iter()
            .map(|w| Window::from_digits(alphabet, 0, w).map(Window::into_symbols))
            .collect::<Result<Vec<_>>>()?;
        ShiftFamilySpec::sft(alphabet, words)
    }

    pub fn bounded_density(f: Vec<f64>) -> Result<Self> {
        if let Some(v) = f.iter().find(|v| !(v.is_finite() && **v >= 0.0)) {
            return Err(Error::InvalidParameter(format!(
                "bounded-density values must be finite and nonnegative, got {v}"
            )));
        }
        Ok(ShiftFamilySpec::BoundedDensity(f))
    }

    pub fn b_free(b: Vec<u64>) -> Result<Self> {
        bfree::validate(&b)?;
        Ok(ShiftFamilySpec::BFree(b))
    }

    pub fn b_admissible(b: Vec<u64>) -> Result<Self> {
        bfree::validate(&b)?;
        Ok(ShiftFamilySpec::BAdmissible(b))
    }

    pub fn beta(source: &str, digits_budget: usize) -> Result<Self> {
        Ok(ShiftFamilySpec::Beta(BetaShift::parse(source, digits_budget)?))
    }

    pub fn alphabet(&self) -> Alphabet {
        match self {
            ShiftFamilySpec::Sft { alphabet, .. } | ShiftFamilySpec::Full(alphabet) => *alphabet,
            ShiftFamilySpec::Beta(b) => Alphabet::new(b.alphabet_size()).expect("beta alphabet validated"),
            _ => Alphabet::BINARY,
        }
    }

    /// Short family tag used in reports.
    pub fn tag(&self) -> &'static str {
        match self {
            ShiftFamilySpec::Spacing(_) => "spacing",
            ShiftFamilySpec::BoundedDensity(_) => "bounded_density",
            ShiftFamilySpec::Beta(_) => "beta",
            ShiftFamilySpec::BFree(_) => "bfree",
            ShiftFamilySpec::BAdmissible(_) => "badmissible",
            ShiftFamilySpec::Sft { .. } => "sft",
            ShiftFamilySpec::Full(_) => "full",
        }
    }

    /// Admissibility of a raw word over this family's alphabet.
    pub fn admits(&self, word: &[u8]) -> Result<bool> {
        match self {
            ShiftFamilySpec::Full(_) => Ok(true),
            ShiftFamilySpec::Spacing(p) => {
                let ones: Vec<usize> = (0..word.len()).filter(|&i| word[i] != 0).collect();
                for (a, &i) in ones.iter().enumerate() {
                    for &j in &ones[a + 1..] {
                        if !p.contains((j - i) as u64)? {
                            return Ok(false);
                        }
                    }
                }
                Ok(true)
            }
            ShiftFamilySpec::BoundedDensity(f) => {
                for (idx, &bound) in f.iter().enumerate().take(word.len()) {
                    let p = idx + 1;
                    let mut sum: u64 = word[..p].iter().map(|&s| s as u64).sum();
                    if sum as f64 > bound {
                        return Ok(false);
                    }
                    for end in p..word.len() {
                        sum = sum + word[end] as u64 - word[end - p] as u64;
                        if sum as f64 > bound {
                            return Ok(false);
                        }
                    }
                }
                Ok(true)
            }
            ShiftFamilySpec::Beta(b) => b.admits(word),
            ShiftFamilySpec::BFree(b) => bfree_admits(b, word, DEFAULT_BFREE_NODE_BUDGET),
            ShiftFamilySpec::BAdmissible(b) => Ok(badmissible_admits(b, word)),
            ShiftFamilySpec::Sft { forbidden, .. } => {
                Ok(!forbidden.iter().any(|f| f.len() <= word.len() && word.windows(f.len()).any(|w| w == f.as_slice())))
            }
        }
    }

    /// Finds a subword of `word` of length at most `max_len` that is
    /// inadmissible, scanning windows starting at each position.
    pub fn first_inadmissible_subword(&self, word: &[u8], max_len: usize) -> Result<Option<(usize, usize)>> {
        for start in 0..word.len() {
            let end = (start + max_len).min(word.len());
            if !self.admits(&word[start..end])? {
                return Ok(Some((start, end)));
            }
        }
        Ok(None)
    }
}

/// `true` iff `w` is a word of the shift space described by `spec`.
pub fn is_admissible(spec: &ShiftFamilySpec, w: &Window) -> Result<bool> {
    let expected = spec.alphabet().size();
    if w.alphabet().size() != expected {
        return Err(Error::AlphabetMismatch { expected, found: w.alphabet().size() });
    }
    spec.admits(w.symbols())
}
