//! B-free characteristic sequences and the B-free / B-admissible languages.

use crate::error::{Error, Result};
use crate::sequence::{Alphabet, Window};
use num_integer::Integer;

/// Search nodes allowed when deciding whether a word occurs in a B-free sequence.
pub const DEFAULT_BFREE_NODE_BUDGET: u64 = 1 << 22;

pub(crate) fn validate(b: &[u64]) -> Result<()> {
    match b.iter().find(|&&v| v < 2) {
        Some(v) => Err(Error::InvalidParameter(format!("elements of B must be at least 2, got {v}"))),
        None => Ok(()),
    }
}

/// Characteristic window of the B-free integers on `[j_lo, j_hi]` (inclusive).
///
/// Entry `j` is 1 iff no element of `B` divides `|j|`; in particular entry 0
/// is always 0.
pub fn bfree_characteristic(b: &[u64], j_lo: i64, j_hi: i64) -> Result<Window> {
    validate(b)?;
    if j_lo > j_hi {
        return Err(Error::InvalidParameter(format!("empty range {j_lo}..{j_hi}")));
    }
    if b.is_empty() {
        log::warn!("empty B: every integer is B-free");
    }
    let len = (j_hi - j_lo + 1) as usize;
    let mut symbols = vec![1u8; len];
    for &m in b {
        let m = m as i64;
        // b | j ⟺ b | −j, so sieving over the signed range honours the |j| convention.
        let mut j = Integer::div_ceil(&j_lo, &m) * m;
        while j <= j_hi {
            symbols[(j - j_lo) as usize] = 0;
            j += m;
        }
    }
    Window::new(Alphabet::BINARY, j_lo, symbols)
}

/// `w` avoids, for every `b`, some residue class mod `b` (relative coordinates).
pub fn badmissible_admits(b: &[u64], word: &[u8]) -> bool {
    b.iter().all(|&m| {
        let m = m as usize;
        if word.len() < m {
            // Fewer positions than residues: some class is always missed.
            return true;
        }
        let mut hit = vec![false; m];
        for (i, &s) in word.iter().enumerate() {
            if s != 0 {
                hit[i % m] = true;
            }
        }
        hit.iter().any(|h| !h)
    })
}

/// Drops duplicates and multiples of other elements; the B-free set is unchanged.
pub fn primitive_basis(b: &[u64]) -> Vec<u64> {
    let mut sorted: Vec<u64> = b.to_vec();
    sorted.sort_unstable();
    sorted.dedup();
    let mut basis: Vec<u64> = Vec::new();
    for v in sorted {
        if !basis.iter().any(|&p| v % p == 0) {
            basis.push(v);
        }
    }
    basis
}

/// Does `word` occur in the (periodic) characteristic sequence of the B-free
/// integers?
///
/// An occurrence at offset `s` is a choice of residues `r_b = s mod b` that
/// are pairwise consistent (generalized CRT), never hit a position holding 1,
/// and together hit every position holding 0.
pub fn bfree_admits(b: &[u64], word: &[u8], node_budget: u64) -> Result<bool> {
    validate(b)?;
    let basis = primitive_basis(b);
    let zeros: Vec<usize> = (0..word.len()).filter(|&i| word[i] == 0).collect();
    let ones: Vec<usize> = (0..word.len()).filter(|&i| word[i] != 0).collect();
    if basis.is_empty() {
        return Ok(zeros.is_empty());
    }
    let forbidden: Vec<Vec<bool>> = basis
        .iter()
        .map(|&m| {
            let mut f = vec![false; m as usize];
            for &i in &ones {
                f[Search::residue(i, m) as usize] = true;
            }
            f
        })
        .collect();
    let coprime_to_rest: Vec<bool> = basis
        .iter()
        .enumerate()
        .map(|(k, &m)| basis.iter().enumerate().all(|(l, &o)| l == k || m.gcd(&o) == 1))
        .collect();

    let mut search = Search {
        basis: &basis,
        zeros: &zeros,
        forbidden: &forbidden,
        coprime_to_rest: &coprime_to_rest,
        chosen: Vec::with_capacity(basis.len()),
        covered: vec![0u32; zeros.len()],
        nodes: 0,
        node_budget,
    };
    search.run(0)
}

struct Search<'a> {
    basis: &'a [u64],
    zeros: &'a [usize],
    forbidden: &'a [Vec<bool>],
    coprime_to_rest: &'a [bool],
    chosen: Vec<(u64, u64)>,
    covered: Vec<u32>,
    nodes: u64,
    node_budget: u64,
}

impl Search<'_> {
    fn consistent(&self, m: u64, r: u64) -> bool {
        self.chosen.iter().all(|&(c, rc)| {
            let g = m.gcd(&c);
            r % g == rc % g
        })
    }

    fn residue(i: usize, m: u64) -> u64 {
        (m - (i as u64 % m)) % m
    }

    fn run(&mut self, k: usize) -> Result<bool> {
        self.nodes += 1;
        if self.nodes > self.node_budget {
            return Err(Error::BudgetExceeded {
                what: "B-free occurrence search",
                needed: format!("more than {} nodes", self.node_budget),
                budget: self.node_budget,
            });
        }
        if k == self.basis.len() {
            return Ok(self.covered.iter().all(|&c| c > 0));
        }
        // Prune: every uncovered zero must still be coverable by a later modulus.
        for (z, &i) in self.zeros.iter().enumerate() {
            if self.covered[z] == 0
                && !(k..self.basis.len()).any(|l| !self.forbidden[l][Self::residue(i, self.basis[l]) as usize])
            {
                return Ok(false);
            }
        }
        let m = self.basis[k];
        let mut candidates: Vec<u64> =
            self.zeros.iter().map(|&i| Self::residue(i, m)).filter(|&r| !self.forbidden[k][r as usize]).collect();
        candidates.sort_unstable();
        candidates.dedup();
        let covering = candidates.len();
        // Residues covering nothing: one representative suffices when m is
        // coprime to every other modulus, otherwise consistency can differ.
        let idle: Vec<u64> = (0..m)
            .filter(|&r| !self.forbidden[k][r as usize] && candidates.binary_search(&r).is_err())
            .take(if self.coprime_to_rest[k] { 1 } else { usize::MAX })
            .collect();
        candidates.extend(idle);
        for (idx, r) in candidates.into_iter().enumerate() {
            if !self.consistent(m, r) {
                continue;
            }
            let hits: Vec<usize> = if idx < covering {
                (0..self.zeros.len()).filter(|&z| Self::residue(self.zeros[z], m) == r).collect()
            } else {
                Vec::new()
            };
            for &z in &hits {
                self.covered[z] += 1;
            }
            self.chosen.push((m, r));
            let found = self.run(k + 1)?;
            self.chosen.pop();
            for &z in &hits {
                self.covered[z] -= 1;
            }
            if found {
                return Ok(true);
            }
        }
        Ok(false)
    }
}
