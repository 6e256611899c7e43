//! Entropy-rate estimation: plug-in conditional block entropies, a
//! Lempel-Ziv cross-check, and the Fano continuity envelope.
//!
//! All values are in nats.

mod lz;

pub use lz::{lz76_phrase_count, lz_entropy_estimate, LZ_MIN_LENGTH};

use crate::error::{Error, Result};
use crate::measures::{block_counts, BlockDistribution};
use crate::report::fmt_sig;
use crate::sequence::Window;
use num_traits::ToPrimitive;
use serde::Serialize;

/// Minimum window length per possible k-block: `len ≥ factor · n^k`.
pub const DEFAULT_ADEQUACY_FACTOR: u64 = 100;

/// Dense counting is used while `n^k` stays below this.
const DENSE_LIMIT: u64 = 1 << 22;

/// Shannon entropy `−Σ w ln w` of a block distribution.
pub fn block_entropy(p: &BlockDistribution) -> f64 {
    p.weights().values().map(|w| w.to_f64().unwrap_or(0.0)).filter(|&w| w > 0.0).map(|w| -w * w.ln()).sum()
}

/// Entropy of the empirical distribution with the given counts.
fn entropy_of_counts(counts: impl Iterator<Item = u64>) -> f64 {
    let mut total = 0u64;
    let mut sum_c_ln_c = 0.0;
    for c in counts.filter(|&c| c > 0) {
        total += c;
        let c = c as f64;
        sum_c_ln_c += c * c.ln();
    }
    if total == 0 {
        return 0.0;
    }
    let t = total as f64;
    (t.ln() - sum_c_ln_c / t).max(0.0)
}

/// Sliding k-block entropy of raw symbols over an alphabet of size `n`.
pub(crate) fn sliding_block_entropy(symbols: &[u8], n: usize, k: usize) -> f64 {
    let states = (n as u64).checked_pow(k as u32).filter(|&s| s <= DENSE_LIMIT);
    match states {
        Some(states) => {
            let mut counts = vec![0u64; states as usize];
            // Base-n code of the last k symbols.
            let mut code = 0u64;
            for (i, &s) in symbols.iter().enumerate() {
                code = (code * n as u64 + s as u64) % states;
                if i + 1 >= k {
                    counts[code as usize] += 1;
                }
            }
            entropy_of_counts(counts.into_iter())
        }
        None => entropy_of_counts(block_counts(symbols, k).into_values()),
    }
}

/// Plug-in entropy profile of a window.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EntropyProfile {
    pub k_values: Vec<usize>,
    /// `H(k)` for each entry of `k_values`.
    pub block_entropies: Vec<f64>,
    /// `h_k = H(k) − H(k−1)`, with `h_1 = H(1)`.
    pub conditional: Vec<f64>,
    /// `h_k` at the largest `k`, clamped to `[0, ln n]`.
    pub chosen_estimate: f64,
    pub method: &'static str,
    pub adequacy_factor: u64,
}

impl EntropyProfile {
    /// CSV with columns `k,H_k,h_k`.
    pub fn to_csv(&self, manifest_hash: Option<&str>) -> String {
        let mut out = String::new();
        if let Some(h) = manifest_hash {
            out.push_str(&format!("# manifest_sha256={h}\n"));
        }
        out.push_str("k,H_k,h_k\n");
        for ((k, big), small) in self.k_values.iter().zip(&self.block_entropies).zip(&self.conditional) {
            out.push_str(&format!("{k},{},{}\n", fmt_sig(*big), fmt_sig(*small)));
        }
        out
    }
}

/// Entropy profile up to block length `k` with the default adequacy guard.
pub fn entropy_estimate(w: &Window, k: usize) -> Result<EntropyProfile> {
    entropy_estimate_with_guard(w, k, DEFAULT_ADEQUACY_FACTOR)
}

pub fn entropy_estimate_with_guard(w: &Window, k: usize, factor: u64) -> Result<EntropyProfile> {
    if k == 0 {
        return Err(Error::InvalidParameter("block length must be positive".into()));
    }
    let n = w.alphabet().size();
    let required = (n as u64).checked_pow(k as u32).and_then(|s| s.checked_mul(factor)).unwrap_or(u64::MAX);
    if (w.len() as u64) < required {
        return Err(Error::WindowTooShort {
            len: w.len(),
            required: required.min(usize::MAX as u64) as usize,
            what: "plug-in entropy estimate",
        });
    }
    let k_values: Vec<usize> = (1..=k).collect();
    let block_entropies: Vec<f64> = k_values.iter().map(|&j| sliding_block_entropy(w.symbols(), n, j)).collect();
    let conditional: Vec<f64> =
        block_entropies.iter().enumerate().map(|(i, &h)| if i == 0 { h } else { h - block_entropies[i - 1] }).collect();
    let chosen_estimate = conditional[k - 1].clamp(0.0, (n as f64).ln());
    Ok(EntropyProfile {
        k_values,
        block_entropies,
        conditional,
        chosen_estimate,
        method: "plug-in conditional block entropy",
        adequacy_factor: factor,
    })
}

/// Binary entropy `H_b(δ)` in nats.
pub fn binary_entropy(delta: f64) -> f64 {
    let term = |p: f64| if p > 0.0 { -p * p.ln() } else { 0.0 };
    term(delta) + term(1.0 - delta)
}

/// Fano envelope `H_b(δ) + δ ln(n − 1)` bounding the entropy gap between
/// processes whose symbols disagree with probability `δ`.
pub fn fano_bound(delta: f64, n: usize) -> Result<f64> {
    if !(0.0..=1.0).contains(&delta) {
        return Err(Error::InvalidParameter(format!("delta {delta} outside [0, 1]")));
    }
    if n < 2 {
        return Err(Error::InvalidAlphabet(n));
    }
    Ok(binary_entropy(delta) + delta * ((n - 1) as f64).ln())
}
