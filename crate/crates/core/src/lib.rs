//! Rotation-coded arcs of generic points in shift spaces with a safe symbol.
//!
//! Given a window `x` of a sequence over `{0, …, n-1}` and a shift space in
//! which `0` is a safe symbol, masking `x` by the rotation coding
//! `y_{α,β} = (1[jα mod 1 < β])_j` produces a path `β ↦ x ∗ y_{α,β}` that
//! starts at the all-zero sequence (`β = 0`) and ends at `x` (`β = 1`). Along
//! the path the disagreement density between two points is at most `|β − β'|`,
//! so the empirical measures move continuously in the d-bar metric and the
//! entropy sweeps the interval `[0, h(x)]`.
//!
//! Modules:
//!
//! * [`sequence`]: windows, fixed-point rotation codings, star product,
//!   disagreement densities and the window text format.
//! * [`families`]: spacing, bounded-density, beta, B-free, B-admissible,
//!   finite-type and full shifts; admissibility, heredity and safe-symbol
//!   verdicts, word counts and topological entropy.
//! * [`measures`]: empirical block distributions and the exact k-block
//!   d-bar transportation distance.
//! * [`entropy`]: plug-in block entropies, an LZ76 cross-check and the
//!   Fano continuity envelope.
//! * [`arc`]: generic-point sources, α selection, arc sweeps, entropy
//!   bisection and the product-genericity diagnostic.
//! * [`report`]: manifests, number formatting and atomic writes.

pub mod arc;
pub mod entropy;
pub mod error;
pub mod families;
pub mod measures;
pub mod report;
pub mod sequence;

pub use error::{Error, Result};

/// Exact rational numbers used for densities, weights and transport costs.
pub type Rational = num_rational::BigRational;
