use crate::error::{Error, Result};
use crate::Rational;
use num_bigint::{BigInt, BigUint};
use num_traits::{One, ToPrimitive, Zero};
use std::fmt;

/// Total number of fractional bits in the representation.
pub const FRACTION_BITS: u32 = 128;

/// Minimum precision accepted for a rotation number.
pub const MIN_PRECISION_BITS: u32 = 96;

/// An unsigned fixed-point number in `[0, 1)`.
///
/// The value is `raw / 2^128`; at precision `p < 128` the low `128 - p` bits
/// are zero. Addition and integer multiples wrap modulo 1, which is exact on
/// the lattice `2^-p Z / Z`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FixedFraction {
    raw: u128,
    bits: u32,
}

impl FixedFraction {
    pub fn from_raw(raw: u128, bits: u32) -> Result<Self> {
        if !(MIN_PRECISION_BITS..=FRACTION_BITS).contains(&bits) {
            return Err(Error::InvalidParameter(format!(
                "precision must be between {MIN_PRECISION_BITS} and {FRACTION_BITS} bits, got {bits}"
            )));
        }
        Ok(FixedFraction { raw: raw & mask(bits), bits })
    }

    pub fn zero() -> Self {
        FixedFraction { raw: 0, bits: FRACTION_BITS }
    }

    /// `(√5 − 1)/2` truncated to `bits` fractional bits.
    pub fn golden(bits: u32) -> Result<Self> {
        // floor(√5 · 2^128) from the integer square root of 5 · 2^256.
        let scaled = (BigUint::from(5u32) << (2 * FRACTION_BITS as usize)).sqrt();
        let raw: BigUint = (scaled - (BigUint::one() << FRACTION_BITS as usize)) >> 1usize;
        FixedFraction::from_raw(raw.to_u128().expect("golden fraction fits in 128 bits"), bits)
    }

    /// Truncates a rational in `[0, 1)`.
    pub fn from_rational(value: &Rational, bits: u32) -> Result<Self> {
        if value < &Rational::zero() || value >= &Rational::one() {
            return Err(Error::InvalidParameter(format!("fraction {value} outside [0, 1)")));
        }
        let scaled = value * Rational::from_integer(BigInt::one() << FRACTION_BITS as usize);
        let raw = scaled.floor().to_integer().to_u128().expect("value below one");
        FixedFraction::from_raw(raw, bits)
    }

    pub fn raw(self) -> u128 {
        self.raw
    }

    pub fn precision_bits(self) -> u32 {
        self.bits
    }

    /// Exact value as a rational.
    pub fn to_rational(self) -> Rational {
        Rational::new(BigInt::from(self.raw), BigInt::one() << FRACTION_BITS as usize)
    }

    pub fn to_f64(self) -> f64 {
        self.raw as f64 / 2f64.powi(FRACTION_BITS as i32)
    }

    /// `(self + other) mod 1`.
    pub fn wrapping_add(self, other: FixedFraction) -> FixedFraction {
        FixedFraction { raw: self.raw.wrapping_add(other.raw), bits: self.bits.min(other.bits) }
    }

    /// `(j · self) mod 1` for any signed `j`, exactly.
    pub fn times(self, j: i64) -> FixedFraction {
        // Two's complement wrap-around is arithmetic modulo 2^128.
        FixedFraction { raw: (j as i128 as u128).wrapping_mul(self.raw), bits: self.bits }
    }

    /// 32 lowercase hex digits of the raw value.
    pub fn to_hex(self) -> String {
        format!("{:032x}", self.raw)
    }

    pub fn from_hex(hex: &str, bits: u32) -> Result<Self> {
        let raw = u128::from_str_radix(hex.trim_start_matches("0x"), 16)
            .map_err(|e| Error::InvalidParameter(format!("bad fixed-point hex {hex:?}: {e}")))?;
        FixedFraction::from_raw(raw, bits)
    }

    /// Denominator exponent `e` of the reduced fraction `raw / 2^128 = a / 2^e`.
    pub fn lattice_denominator_log2(self) -> u32 {
        if self.raw == 0 {
            0
        } else {
            FRACTION_BITS - self.raw.trailing_zeros()
        }
    }
}

fn mask(bits: u32) -> u128 {
    if bits >= FRACTION_BITS {
        u128::MAX
    } else {
        !(u128::MAX >> bits)
    }
}

impl fmt::Display for FixedFraction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "0x{}", self.to_hex())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn golden_digits() {
        let g = FixedFraction::golden(128).unwrap();
        assert!((g.to_f64() - 0.618_033_988_749_894_8).abs() < 1e-15);
        // 2g + 1 = √5, so (2g + 1)^2 < 5 < (2g + 1 + 2^-127)^2.
        let r = g.to_rational();
        let two = Rational::from_integer(2.into());
        let lo = &two * &r + Rational::one();
        let hi = &lo + Rational::new(BigInt::one(), BigInt::one() << 127usize);
        let five = Rational::from_integer(5.into());
        assert!(&lo * &lo < five && five < &hi * &hi);
    }

    #[test]
    fn negative_multiples_wrap() {
        let g = FixedFraction::golden(128).unwrap();
        for j in 1..50 {
            let sum = g.times(j).wrapping_add(g.times(-j));
            assert_eq!(sum.raw(), 0);
        }
        assert_eq!(g.times(0).raw(), 0);
    }

    #[test]
    fn precision_truncates_low_bits() {
        let g = FixedFraction::golden(96).unwrap();
        assert_eq!(g.raw() & ((1u128 << 32) - 1), 0);
        assert_eq!(g.times(12345).raw() & ((1u128 << 32) - 1), 0);
        assert!(FixedFraction::golden(64).is_err());
    }

    #[test]
    fn lattice_denominator() {
        let half = FixedFraction::from_rational(&Rational::new(1.into(), 2.into()), 128).unwrap();
        assert_eq!(half.lattice_denominator_log2(), 1);
        // The truncated golden fraction happens to end in two zero bits.
        assert_eq!(FixedFraction::golden(128).unwrap().lattice_denominator_log2(), 126);
    }

    #[test]
    fn hex_round_trip() {
        let g = FixedFraction::golden(128).unwrap();
        assert_eq!(FixedFraction::from_hex(&g.to_hex(), 128).unwrap(), g);
    }
}
