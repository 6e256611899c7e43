//! Word-level language computations: heredity and safe-symbol verdicts,
//! hereditary closures, word counts and topological entropy.
//!
//! A `holds` verdict means no counterexample exists among words of length at
//! most `max_len`; it is not a statement about the infinite shift.

use super::ShiftFamilySpec;
use crate::error::{Error, Result};
use crate::sequence::{Alphabet, Window};
use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};
use serde::Serialize;
use std::collections::{BTreeSet, HashMap};

/// Upper bound on the number of words (or search nodes) an enumeration may
/// touch.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EnumerationBudget(pub u64);

impl Default for EnumerationBudget {
    fn default() -> Self {
        EnumerationBudget(1 << 24)
    }
}

impl EnumerationBudget {
    fn exceeded(self, what: &'static str, needed: impl ToString) -> Error {
        Error::BudgetExceeded { what, needed: needed.to_string(), budget: self.0 }
    }
}

/// Outcome of a bounded heredity or safe-symbol check.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Verdict {
    pub holds: bool,
    /// `(w, w')`: `w` admissible, `w'` derived from it and inadmissible.
    pub witness: Option<(Window, Window)>,
}

impl Verdict {
    fn holds() -> Self {
        Verdict { holds: true, witness: None }
    }
}

fn word_count(n: usize, len: usize, budget: EnumerationBudget) -> Result<usize> {
    let total = (n as u128).checked_pow(len as u32).unwrap_or(u128::MAX);
    if total > budget.0 as u128 {
        return Err(budget.exceeded("words of the full alphabet", format!("{n}^{len}")));
    }
    Ok(total as usize)
}

fn decode(mut idx: usize, n: usize, len: usize) -> Vec<u8> {
    let mut w = vec![0u8; len];
    for slot in w.iter_mut().rev() {
        *slot = (idx % n) as u8;
        idx /= n;
    }
    w
}

fn admissible_table(spec: &ShiftFamilySpec, len: usize, total: usize) -> Result<Vec<bool>> {
    let n = spec.alphabet().size();
    (0..total).map(|idx| spec.admits(&decode(idx, n, len))).collect()
}

fn witness(alphabet: Alphabet, from: usize, to: usize, len: usize) -> (Window, Window) {
    let n = alphabet.size();
    (
        Window::new(alphabet, 0, decode(from, n, len)).expect("decoded word is valid"),
        Window::new(alphabet, 0, decode(to, n, len)).expect("decoded word is valid"),
    )
}

/// Checks that lowering any symbols of an admissible word keeps it
/// admissible, exhaustively for lengths up to `max_len`.
///
/// On failure the witness `(w, w')` has the shortest possible length, the
/// lexicographically smallest offending `w'` and the largest admissible `w`
/// dominating it.
pub fn heredity_check(spec: &ShiftFamilySpec, max_len: usize, budget: EnumerationBudget) -> Result<Verdict> {
    let n = spec.alphabet().size();
    word_count(n, max_len, budget)?;
    for len in 1..=max_len {
        let total = word_count(n, len, budget)?;
        let adm = admissible_table(spec, len, total)?;
        // best[i]: largest admissible word ≥ word i coordinatewise. Raising a
        // symbol raises the index, so a descending sweep sees parents first.
        let mut best: Vec<Option<u32>> = vec![None; total];
        for idx in (0..total).rev() {
            let mut b = adm[idx].then_some(idx as u32);
            let mut place = 1usize;
            let mut rest = idx;
            for _ in 0..len {
                if rest % n < n - 1 {
                    b = b.max(best[idx + place]);
                }
                rest /= n;
                place *= n;
            }
            best[idx] = b;
        }
        if let Some(bad) = (0..total).find(|&i| !adm[i] && best[i].is_some()) {
            let (w, lower) = witness(spec.alphabet(), best[bad].unwrap() as usize, bad, len);
            return Ok(Verdict { holds: false, witness: Some((w, lower)) });
        }
    }
    Ok(Verdict::holds())
}

/// Checks that overwriting any positions of an admissible word with `a`
/// keeps it admissible, exhaustively for lengths up to `max_len`.
pub fn safe_symbol_check(spec: &ShiftFamilySpec, a: u8, max_len: usize, budget: EnumerationBudget) -> Result<Verdict> {
    let alphabet = spec.alphabet();
    if !alphabet.contains(a) {
        return Err(Error::SymbolOutOfRange { symbol: a, offset: 0, size: alphabet.size() });
    }
    let n = alphabet.size();
    word_count(n, max_len, budget)?;
    for len in 1..=max_len {
        let total = word_count(n, len, budget)?;
        let adm = admissible_table(spec, len, total)?;
        // Sources of z: words agreeing with z wherever z differs from `a`.
        // Un-overwriting one position strictly lowers the count of `a`s, so
        // processing by that count sees every parent first.
        let count_a = |mut idx: usize| {
            let mut c = 0;
            for _ in 0..len {
                c += (idx % n == a as usize) as usize;
                idx /= n;
            }
            c
        };
        let mut by_count: Vec<Vec<usize>> = vec![Vec::new(); len + 1];
        for idx in 0..total {
            by_count[count_a(idx)].push(idx);
        }
        let mut best: Vec<Option<u32>> = vec![None; total];
        for bucket in &by_count {
            for &idx in bucket {
                let mut b = adm[idx].then_some(idx as u32);
                let mut place = 1usize;
                let mut rest = idx;
                for _ in 0..len {
                    if rest % n == a as usize {
                        let cleared = idx - a as usize * place;
                        for s in (0..n).filter(|&s| s != a as usize) {
                            b = b.max(best[cleared + s * place]);
                        }
                    }
                    rest /= n;
                    place *= n;
                }
                best[idx] = b;
            }
        }
        if let Some(bad) = (0..total).find(|&i| !adm[i] && best[i].is_some()) {
            let (w, z) = witness(alphabet, best[bad].unwrap() as usize, bad, len);
            return Ok(Verdict { holds: false, witness: Some((w, z)) });
        }
    }
    Ok(Verdict::holds())
}

/// All words coordinatewise below some input word, at base 0, sorted by
/// length then lexicographically.
pub fn hereditary_closure(words: &[Window], budget: EnumerationBudget) -> Result<Vec<Window>> {
    let Some(first) = words.first() else {
        return Ok(Vec::new());
    };
    let alphabet = first.alphabet();
    let mut out: BTreeSet<(usize, Vec<u8>)> = BTreeSet::new();
    for w in words {
        if w.alphabet() != alphabet {
            return Err(Error::AlphabetMismatch { expected: alphabet.size(), found: w.alphabet().size() });
        }
        let below: u128 = w.symbols().iter().map(|&s| s as u128 + 1).product();
        if below > budget.0 as u128 {
            return Err(budget.exceeded("words below an input word", below));
        }
        let mut current = vec![0u8; w.len()];
        loop {
            out.insert((w.len(), current.clone()));
            if !advance(&mut current, w.symbols()) {
                break;
            }
        }
        if out.len() as u64 > budget.0 {
            return Err(budget.exceeded("closure size", out.len()));
        }
    }
    out.into_iter().map(|(_, s)| Window::new(alphabet, 0, s)).collect()
}

/// Odometer step over the box `[0, limits_0] × … × [0, limits_{L-1}]`.
fn advance(current: &mut [u8], limits: &[u8]) -> bool {
    for i in (0..current.len()).rev() {
        if current[i] < limits[i] {
            current[i] += 1;
            return true;
        }
        current[i] = 0;
    }
    false
}

/// Number of admissible words of each length `1..=max_len`.
pub fn count_words_upto(spec: &ShiftFamilySpec, max_len: usize, budget: EnumerationBudget) -> Result<Vec<BigUint>> {
    if max_len == 0 {
        return Err(Error::InvalidParameter("length must be positive".into()));
    }
    match spec {
        ShiftFamilySpec::Full(a) => Ok((1..=max_len).map(|l| BigUint::from(a.size()).pow(l as u32)).collect()),
        ShiftFamilySpec::Sft { alphabet, forbidden } => transfer_counts(spec, *alphabet, forbidden, max_len, budget),
        _ => prefix_tree_counts(spec, max_len, budget),
    }
}

/// Number of admissible words of exactly `len` symbols.
pub fn count_words(spec: &ShiftFamilySpec, len: usize, budget: EnumerationBudget) -> Result<BigUint> {
    Ok(count_words_upto(spec, len, budget)?.pop().expect("len ≥ 1"))
}

/// Depth-first enumeration extending only admissible prefixes; valid because
/// every supported language is closed under taking subwords.
fn prefix_tree_counts(spec: &ShiftFamilySpec, max_len: usize, budget: EnumerationBudget) -> Result<Vec<BigUint>> {
    let n = spec.alphabet().size() as u8;
    let mut counts = vec![0u64; max_len];
    let mut visited = 0u64;
    let mut stack: Vec<Vec<u8>> = vec![Vec::new()];
    while let Some(prefix) = stack.pop() {
        for s in 0..n {
            let mut w = prefix.clone();
            w.push(s);
            visited += 1;
            if visited > budget.0 {
                return Err(budget.exceeded("prefix-tree nodes", format!("more than {}", budget.0)));
            }
            if spec.admits(&w)? {
                counts[w.len() - 1] += 1;
                if w.len() < max_len {
                    stack.push(w);
                }
            }
        }
    }
    Ok(counts.into_iter().map(BigUint::from).collect())
}

/// Transfer-matrix counting on the higher block presentation with states the
/// admissible words of length `m − 1`, `m` the longest forbidden word.
fn transfer_counts(
    spec: &ShiftFamilySpec,
    alphabet: Alphabet,
    forbidden: &[Vec<u8>],
    max_len: usize,
    budget: EnumerationBudget,
) -> Result<Vec<BigUint>> {
    let memory = forbidden.iter().map(Vec::len).max().unwrap_or(1).saturating_sub(1);
    let n = alphabet.size();
    let mut counts = Vec::with_capacity(max_len);
    let short = memory.min(max_len);
    if short > 0 {
        counts.extend(prefix_tree_counts(spec, short, budget)?);
    }
    if max_len <= memory {
        return Ok(counts);
    }
    // States: admissible words of length `memory`.
    let mut states: Vec<Vec<u8>> = vec![Vec::new()];
    for _ in 0..memory {
        let mut next = Vec::new();
        for w in &states {
            for s in 0..n as u8 {
                let mut v = w.clone();
                v.push(s);
                if spec.admits(&v)? {
                    next.push(v);
                }
            }
        }
        if next.len() as u64 > budget.0 {
            return Err(budget.exceeded("transfer-matrix states", next.len()));
        }
        states = next;
    }
    let index: HashMap<&[u8], usize> = states.iter().enumerate().map(|(i, w)| (w.as_slice(), i)).collect();
    let mut edges: Vec<Vec<usize>> = vec![Vec::new(); states.len()];
    for (i, w) in states.iter().enumerate() {
        for s in 0..n as u8 {
            let mut v = w.clone();
            v.push(s);
            if spec.admits(&v)? {
                edges[i].push(index[&v[1..]]);
            }
        }
    }
    let mut vector: Vec<BigUint> = vec![BigUint::one(); states.len()];
    for _ in memory..max_len {
        let mut next = vec![BigUint::zero(); states.len()];
        for (i, targets) in edges.iter().enumerate() {
            for &j in targets {
                next[j] += &vector[i];
            }
        }
        vector = next;
        counts.push(vector.iter().sum());
    }
    Ok(counts)
}

/// Word-count entropy estimates `log N(L) / L` in nats.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TopologicalEntropy {
    /// Value at the largest length.
    pub estimate: f64,
    /// `(L, N(L), log N(L) / L)` for `L = 1..=max_len`.
    pub profile: Vec<(usize, String, f64)>,
}

pub(crate) fn ln_biguint(x: &BigUint) -> f64 {
    let bits = x.bits();
    if bits < 1000 {
        return x.to_f64().expect("finite below 2^1000").ln();
    }
    let shift = bits - 64;
    (x >> shift).to_f64().expect("64-bit mantissa").ln() + shift as f64 * std::f64::consts::LN_2
}

pub fn topological_entropy_estimate(
    spec: &ShiftFamilySpec,
    max_len: usize,
    budget: EnumerationBudget,
) -> Result<TopologicalEntropy> {
    let counts = count_words_upto(spec, max_len, budget)?;
    let mut profile = Vec::with_capacity(counts.len());
    for (i, c) in counts.iter().enumerate() {
        if c.is_zero() {
            return Err(Error::InvalidParameter(format!("no admissible words of length {}", i + 1)));
        }
        profile.push((i + 1, c.to_string(), ln_biguint(c) / (i + 1) as f64));
    }
    let estimate = profile.last().expect("max_len ≥ 1").2;
    Ok(TopologicalEntropy { estimate, profile })
}
