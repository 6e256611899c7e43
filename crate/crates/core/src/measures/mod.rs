//! Empirical block distributions and the k-block transport distance that
//! approximates the d-bar distance between the underlying measures.

mod blocks;
mod transport;

pub(crate) use blocks::block_counts;
pub use blocks::{empirical_blocks, tv_distance, BlockDistribution};
pub use transport::{dbar_blocks, dbar_blocks_with_budget, dbar_ladder, TransportPlan, DEFAULT_TRANSPORT_BUDGET};

use crate::report::{fmt_rational, fmt_sig, rational_to_f64};
use crate::Rational;

/// Default ladder of block lengths for binary alphabets.
pub const DEFAULT_LADDER: [usize; 4] = [1, 2, 4, 8];

/// CSV with columns `k,cost,cost_exact`, preceded by a manifest comment when given.
pub fn ladder_csv(ladder: &[(usize, Rational)], manifest_hash: Option<&str>) -> String {
    let mut out = String::new();
    if let Some(h) = manifest_hash {
        out.push_str(&format!("# manifest_sha256={h}\n"));
    }
    out.push_str("k,cost,cost_exact\n");
    for (k, c) in ladder {
        out.push_str(&format!("{k},{},{}\n", fmt_sig(rational_to_f64(c)), fmt_rational(c)));
    }
    out
}
