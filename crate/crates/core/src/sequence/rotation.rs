use super::fixed::{FixedFraction, FRACTION_BITS};
use super::{Alphabet, Window};
use crate::error::{Error, Result};
use crate::Rational;
use num_bigint::BigInt;
use num_traits::{One, ToPrimitive, Zero};

/// Parameters `(α, β)` of the binary coding `y_j = 1 ⟺ (jα mod 1) ∈ [0, β)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RotationCoding {
    alpha: FixedFraction,
    beta: Rational,
    /// `ceil(β · 2^128)`, or `None` when every lattice point lies below β.
    threshold: Option<u128>,
}

impl RotationCoding {
    pub fn new(alpha: FixedFraction, beta: Rational) -> Result<Self> {
        if beta < Rational::zero() || beta > Rational::one() {
            return Err(Error::InvalidParameter(format!("beta {beta} outside [0, 1]")));
        }
        // For an integer m: m < β·2^128 ⟺ m < ceil(β·2^128).
        let scaled = &beta * Rational::from_integer(BigInt::one() << FRACTION_BITS as usize);
        let threshold = scaled.ceil().to_integer().to_u128();
        Ok(RotationCoding { alpha, beta, threshold })
    }

    pub fn alpha(&self) -> FixedFraction {
        self.alpha
    }

    pub fn beta(&self) -> &Rational {
        &self.beta
    }

    /// Coded symbol for a point `jα mod 1` of the orbit.
    #[inline]
    pub fn code(&self, phase: u128) -> u8 {
        match self.threshold {
            Some(t) => (phase < t) as u8,
            None => 1,
        }
    }

    /// Entry of the coded sequence at absolute coordinate `j`.
    pub fn entry(&self, j: i64) -> u8 {
        self.code(self.alpha.times(j).raw())
    }
}

/// The window `y[base..base+length]` of the rotation coding.
///
/// The orbit is accumulated by exact modular addition on the fixed-point
/// lattice, so entries never drift no matter how long the window is.
pub fn sturmian_window(coding: &RotationCoding, base: i64, length: usize) -> Result<Window> {
    if length == 0 {
        return Err(Error::EmptyWindow);
    }
    let step = coding.alpha.raw();
    let mut phase = coding.alpha.times(base).raw();
    let mut symbols = Vec::with_capacity(length);
    for _ in 0..length {
        symbols.push(coding.code(phase));
        phase = phase.wrapping_add(step);
    }
    Window::new(Alphabet::BINARY, base, symbols)
}
