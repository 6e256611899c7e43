//! Choice of the rotation number α.

use crate::error::{Error, Result};
use crate::families::parse_real;
use crate::sequence::{FixedFraction, FRACTION_BITS};
use crate::Rational;
use num_bigint::BigInt;
use num_traits::{One, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use std::fmt;

/// Values whose reduced fixed-point denominator is at most `2^64` are
/// treated as rational and rejected.
pub const RATIONALITY_GUARD_BITS: u32 = 64;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum AlphaPolicy {
    /// The golden fraction `(√5 − 1)/2`.
    Default,
    /// `0x`-prefixed raw fixed-point hex, or an expression such as `sqrt(2)-1`.
    Explicit(String),
    Randomized(u64),
}

impl fmt::Display for AlphaPolicy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AlphaPolicy::Default => f.write_str("default"),
            AlphaPolicy::Explicit(v) => write!(f, "explicit:{v}"),
            AlphaPolicy::Randomized(seed) => write!(f, "random:{seed}"),
        }
    }
}

impl std::str::FromStr for AlphaPolicy {
    type Err = Error;

    /// `default`, `random:<seed>`, `explicit:<value>` or a bare value.
    fn from_str(s: &str) -> Result<Self> {
        if s == "default" || s == "golden" {
            return Ok(AlphaPolicy::Default);
        }
        if let Some(seed) = s.strip_prefix("random:") {
            return seed
                .parse()
                .map(AlphaPolicy::Randomized)
                .map_err(|e| Error::InvalidParameter(format!("alpha seed {seed:?}: {e}")));
        }
        Ok(AlphaPolicy::Explicit(s.strip_prefix("explicit:").unwrap_or(s).to_string()))
    }
}

fn guard(alpha: FixedFraction, what: &str) -> Result<FixedFraction> {
    if alpha.raw() == 0 {
        return Err(Error::InvalidParameter(format!("alpha {what} is 0")));
    }
    if alpha.lattice_denominator_log2() <= RATIONALITY_GUARD_BITS {
        return Err(Error::LowDenominator(format!(
            "{what} has fixed-point denominator 2^{}",
            alpha.lattice_denominator_log2()
        )));
    }
    Ok(alpha)
}

/// Resolves a policy to a fixed-point rotation number with `bits` of precision.
pub fn select_alpha(policy: &AlphaPolicy, bits: u32) -> Result<FixedFraction> {
    match policy {
        AlphaPolicy::Default => FixedFraction::golden(bits),
        AlphaPolicy::Randomized(seed) => {
            let mut rng = ChaCha8Rng::seed_from_u64(*seed);
            loop {
                let candidate = FixedFraction::from_raw(rng.gen::<u128>(), bits)?;
                if let Ok(alpha) = guard(candidate, "random draw") {
                    return Ok(alpha);
                }
            }
        }
        AlphaPolicy::Explicit(text) => {
            if let Some(hex) = text.strip_prefix("0x") {
                return guard(FixedFraction::from_hex(hex, bits)?, text);
            }
            let value = parse_real(text)?;
            if value.cmp_integer(&BigInt::zero()).is_le() || value.cmp_integer(&BigInt::one()).is_ge() {
                return Err(Error::InvalidParameter(format!("alpha {text} outside (0, 1)")));
            }
            if value.is_rational() && value.rational_part().denom().bits() <= RATIONALITY_GUARD_BITS as u64 {
                return Err(Error::LowDenominator(format!("{text} = {}", value.rational_part())));
            }
            let scale = Rational::from_integer(BigInt::one() << FRACTION_BITS as usize);
            let raw = value.scale(&scale).floor().to_u128().expect("value below one");
            guard(FixedFraction::from_raw(raw, bits)?, text)
        }
    }
}
