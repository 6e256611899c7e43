//! JSON shift-family descriptions.
//!
//! ```json
//! {"family": "spacing", "P": {"rule": "evens"}}
//! {"family": "spacing", "P": {"list": [2, 3], "max": 10}}
//! {"family": "bounded_density", "f": [1, 1, 2]}
//! {"family": "beta", "beta": "(1+sqrt(5))/2", "digits_budget": 64}
//! {"family": "bfree", "B": [4, 9, 25]}
//! {"family": "badmissible", "B": [4, 9]}
//! {"family": "sft", "alphabet": 3, "forbidden": ["12"]}
//! {"family": "full", "alphabet": 2}
//! ```

use super::{ShiftFamilySpec, SpacingSet, DEFAULT_DIGITS_BUDGET};
use crate::error::{Error, Result};
use crate::sequence::{Alphabet, Window};
use serde::{Deserialize, Serialize};
use std::path::Path;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case", deny_unknown_fields)]
pub enum SpecFile {
    Spacing {
        #[serde(rename = "P")]
        p: SpacingRule,
    },
    #[serde(alias = "bounded-density")]
    BoundedDensity {
        f: Vec<f64>,
    },
    Beta {
        beta: String,
        #[serde(default = "default_digits")]
        digits_budget: usize,
    },
    #[serde(alias = "b_free", alias = "b-free")]
    Bfree {
        #[serde(rename = "B")]
        b: Vec<u64>,
    },
    #[serde(alias = "b_admissible", alias = "b-admissible")]
    Badmissible {
        #[serde(rename = "B")]
        b: Vec<u64>,
    },
    Sft {
        alphabet: usize,
        forbidden: Vec<WordSpec>,
    },
    Full {
        alphabet: usize,
    },
}

fn default_digits() -> usize {
    DEFAULT_DIGITS_BUDGET
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum SpacingRule {
    /// `evens` or `all`.
    Rule { rule: String },
    List {
        list: Vec<u64>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        max: Option<u64>,
    },
}

/// A word given as a digit string or a list of symbols.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum WordSpec {
    Digits(String),
    Symbols(Vec<u8>),
}

impl SpecFile {
    pub fn parse(json: &str) -> Result<Self> {
        serde_json::from_str(json).map_err(|e| Error::Parse { line: e.line(), message: e.to_string() })
    }

    pub fn to_spec(&self) -> Result<ShiftFamilySpec> {
        match self {
            SpecFile::Spacing { p } => Ok(ShiftFamilySpec::Spacing(match p {
                SpacingRule::Rule { rule } => match rule.as_str() {
                    "evens" => SpacingSet::Evens,
                    "all" => SpacingSet::All,
                    other => return Err(Error::InvalidParameter(format!("unknown spacing rule {other:?}"))),
                },
                SpacingRule::List { list, max } => {
                    if list.contains(&0) {
                        return Err(Error::InvalidParameter("spacing gaps must be positive".into()));
                    }
                    if let (Some(m), Some(big)) = (max, list.iter().max()) {
                        if big > m {
                            return Err(Error::InvalidParameter(format!("gap {big} exceeds max {m}")));
                        }
                    }
                    SpacingSet::Explicit { members: list.iter().copied().collect(), max: *max }
                }
            })),
            SpecFile::BoundedDensity { f } => ShiftFamilySpec::bounded_density(f.clone()),
            SpecFile::Beta { beta, digits_budget } => ShiftFamilySpec::beta(beta, *digits_budget),
            SpecFile::Bfree { b } => ShiftFamilySpec::b_free(b.clone()),
            SpecFile::Badmissible { b } => ShiftFamilySpec::b_admissible(b.clone()),
            SpecFile::Sft { alphabet, forbidden } => {
                let alphabet = Alphabet::new(*alphabet)?;
                let words = forbidden
                    .iter()
                    .map(|w| match w {
                        WordSpec::Digits(d) => Window::from_digits(alphabet, 0, d).map(Window::into_symbols),
                        WordSpec::Symbols(s) => Ok(s.clone()),
                    })
                    .collect::<Result<Vec<_>>>()?;
                ShiftFamilySpec::sft(alphabet, words)
            }
            SpecFile::Full { alphabet } => Ok(ShiftFamilySpec::Full(Alphabet::new(*alphabet)?)),
        }
    }

    pub fn from_spec(spec: &ShiftFamilySpec) -> SpecFile {
        match spec {
            ShiftFamilySpec::Spacing(p) => SpecFile::Spacing {
                p: match p {
                    SpacingSet::Evens => SpacingRule::Rule { rule: "evens".into() },
                    SpacingSet::All => SpacingRule::Rule { rule: "all".into() },
                    SpacingSet::Explicit { members, max } => {
                        SpacingRule::List { list: members.iter().copied().collect(), max: *max }
                    }
                },
            },
            ShiftFamilySpec::BoundedDensity(f) => SpecFile::BoundedDensity { f: f.clone() },
            ShiftFamilySpec::Beta(b) => {
                SpecFile::Beta { beta: b.source().to_string(), digits_budget: b.digits_budget() }
            }
            ShiftFamilySpec::BFree(b) => SpecFile::Bfree { b: b.clone() },
            ShiftFamilySpec::BAdmissible(b) => SpecFile::Badmissible { b: b.clone() },
            ShiftFamilySpec::Sft { alphabet, forbidden } => SpecFile::Sft {
                alphabet: alphabet.size(),
                forbidden: forbidden
                    .iter()
                    .map(|w| match Window::new(*alphabet, 0, w.clone()) {
                        Ok(win) if alphabet.size() <= 10 => WordSpec::Digits(win.to_string()),
                        _ => WordSpec::Symbols(w.clone()),
                    })
                    .collect(),
            },
            ShiftFamilySpec::Full(a) => SpecFile::Full { alphabet: a.size() },
        }
    }
}

pub fn load_spec_file(path: &Path) -> Result<ShiftFamilySpec> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    SpecFile::parse(&text)?.to_spec()
}
