//! Beta shifts.
//!
//! β is held exactly as an element `a + b√d` of a real quadratic field (or of
//! ℚ when no square root appears), parsed from expressions such as `"1.5"`,
//! `"7/4"` or `"(1+sqrt(5))/2"`. The greedy expansion of 1 is computed by
//! iterating `t ↦ βt − ⌊βt⌋` with exact floors, so digit boundaries are never
//! guessed. Admissibility follows Parry's criterion: a word is in the
//! language iff every suffix is lexicographically at most the prefix of the
//! quasi-greedy expansion of 1 of the same length.

use crate::error::{Error, Result};
use crate::report::parse_rational;
use crate::Rational;
use num_bigint::BigInt;
use num_traits::{One, ToPrimitive, Zero};
use std::cmp::Ordering;
use std::collections::HashMap;

/// Default number of expansion digits computed for non-periodic expansions.
pub const DEFAULT_DIGITS_BUDGET: usize = 64;

/// `a + b√d` with `d` squarefree; `d = 1` means the number is rational and `b = 0`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct QuadraticReal {
    a: Rational,
    b: Rational,
    d: u64,
}

impl QuadraticReal {
    pub fn rational(a: Rational) -> Self {
        QuadraticReal { a, b: Rational::zero(), d: 1 }
    }

    /// `√n` for a positive integer `n`, reduced to `s√d` with `d` squarefree.
    pub fn sqrt(n: u64) -> Result<Self> {
        if n == 0 {
            return Ok(QuadraticReal::rational(Rational::zero()));
        }
        let (mut s, mut d) = (1u64, n);
        let mut p = 2u64;
        while p * p <= d {
            while d % (p * p) == 0 {
                d /= p * p;
                s *= p;
            }
            p += 1;
        }
        let s = Rational::from_integer(s.into());
        Ok(if d == 1 { QuadraticReal::rational(s) } else { QuadraticReal { a: Rational::zero(), b: s, d } })
    }

    pub fn is_rational(&self) -> bool {
        self.b.is_zero()
    }

    fn radicand_with(&self, other: &QuadraticReal) -> Result<u64> {
        match (self.is_rational(), other.is_rational()) {
            (true, true) => Ok(1),
            (false, true) => Ok(self.d),
            (true, false) => Ok(other.d),
            (false, false) if self.d == other.d => Ok(self.d),
            _ => Err(Error::InvalidParameter(format!("square roots of {} and {} cannot be mixed", self.d, other.d))),
        }
    }

    fn normalized(a: Rational, b: Rational, d: u64) -> Self {
        if b.is_zero() {
            QuadraticReal::rational(a)
        } else {
            QuadraticReal { a, b, d }
        }
    }

    pub fn add(&self, o: &QuadraticReal) -> Result<Self> {
        let d = self.radicand_with(o)?;
        Ok(Self::normalized(&self.a + &o.a, &self.b + &o.b, d))
    }

    pub fn sub(&self, o: &QuadraticReal) -> Result<Self> {
        let d = self.radicand_with(o)?;
        Ok(Self::normalized(&self.a - &o.a, &self.b - &o.b, d))
    }

    pub fn mul(&self, o: &QuadraticReal) -> Result<Self> {
        let d = self.radicand_with(o)?;
        let dd = Rational::from_integer(d.into());
        let a = &self.a * &o.a + &self.b * &o.b * dd;
        let b = &self.a * &o.b + &self.b * &o.a;
        Ok(Self::normalized(a, b, d))
    }

    pub fn div(&self, o: &QuadraticReal) -> Result<Self> {
        let d = self.radicand_with(o)?;
        // 1/(a + b√d) = (a − b√d) / (a² − b²d); the norm vanishes only at 0.
        let norm = &o.a * &o.a - &o.b * &o.b * Rational::from_integer(d.into());
        if norm.is_zero() {
            return Err(Error::InvalidParameter("division by zero".into()));
        }
        let inv = QuadraticReal { a: &o.a / &norm, b: -&o.b / &norm, d };
        self.mul(&Self::normalized(inv.a, inv.b, d))
    }

    pub fn neg(&self) -> Self {
        Self::normalized(-&self.a, -&self.b, self.d)
    }

    /// Exact sign.
    pub fn signum(&self) -> Ordering {
        let sa = self.a.cmp(&Rational::zero());
        let sb = self.b.cmp(&Rational::zero());
        match (sa, sb) {
            (x, Ordering::Equal) => x,
            (Ordering::Equal, y) => y,
            (x, y) if x == y => x,
            (x, _) => {
                // Opposite signs: compare a² with b²d.
                let a2 = &self.a * &self.a;
                let b2d = &self.b * &self.b * Rational::from_integer(self.d.into());
                match a2.cmp(&b2d) {
                    Ordering::Equal => Ordering::Equal,
                    Ordering::Greater => x,
                    Ordering::Less => x.reverse(),
                }
            }
        }
    }

    pub fn cmp_integer(&self, k: &BigInt) -> Ordering {
        let shifted = QuadraticReal { a: &self.a - Rational::from_integer(k.clone()), b: self.b.clone(), d: self.d };
        shifted.signum()
    }

    pub fn to_f64(&self) -> f64 {
        let a = self.a.to_f64().unwrap_or(f64::NAN);
        let b = self.b.to_f64().unwrap_or(f64::NAN);
        a + b * (self.d as f64).sqrt()
    }

    /// Exact floor.
    pub fn floor(&self) -> BigInt {
        // b√d = ±√(N/D) with N/D = b²d; seed with ⌊√(N·D)⌋ / D, which is
        // within 1/D of the true value, then correct by exact comparisons.
        let b2d = &self.b * &self.b * Rational::from_integer(self.d.into());
        let (n, d) = (b2d.numer(), b2d.denom());
        let root = Rational::new((n * d).sqrt(), d.clone());
        let seed = if self.b < Rational::zero() { &self.a - root } else { &self.a + root };
        let mut k = seed.floor().to_integer();
        while self.cmp_integer(&k) == Ordering::Less {
            k -= 1;
        }
        while self.cmp_integer(&(&k + 1)) != Ordering::Less {
            k += 1;
        }
        k
    }

    /// Multiplies by a rational.
    pub fn scale(&self, r: &Rational) -> Self {
        QuadraticReal { a: &self.a * r, b: &self.b * r, d: self.d }
    }

    pub fn rational_part(&self) -> &Rational {
        &self.a
    }
}

/// Parses arithmetic over decimals, `p/q`, `sqrt(n)` and parentheses.
pub fn parse_real(src: &str) -> Result<QuadraticReal> {
    let mut p = Parser { s: src.as_bytes(), pos: 0, src };
    let v = p.expr()?;
    p.skip_ws();
    if p.pos != p.s.len() {
        return Err(p.err("trailing input"));
    }
    Ok(v)
}

struct Parser<'a> {
    s: &'a [u8],
    pos: usize,
    src: &'a str,
}

impl Parser<'_> {
    fn err(&self, what: &str) -> Error {
        Error::InvalidParameter(format!("cannot parse {:?} at column {}: {what}", self.src, self.pos + 1))
    }

    fn skip_ws(&mut self) {
        while self.pos < self.s.len() && self.s[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.s.get(self.pos).copied()
    }

    fn expr(&mut self) -> Result<QuadraticReal> {
        let mut v = self.term()?;
        while let Some(op @ (b'+' | b'-')) = self.peek() {
            self.pos += 1;
            let rhs = self.term()?;
            v = if op == b'+' { v.add(&rhs)? } else { v.sub(&rhs)? };
        }
        Ok(v)
    }

    fn term(&mut self) -> Result<QuadraticReal> {
        let mut v = self.factor()?;
        while let Some(op @ (b'*' | b'/')) = self.peek() {
            self.pos += 1;
            let rhs = self.factor()?;
            v = if op == b'*' { v.mul(&rhs)? } else { v.div(&rhs)? };
        }
        Ok(v)
    }

    fn factor(&mut self) -> Result<QuadraticReal> {
        match self.peek() {
            Some(b'-') => {
                self.pos += 1;
                Ok(self.factor()?.neg())
            }
            Some(b'(') => {
                self.pos += 1;
                let v = self.expr()?;
                if self.peek() != Some(b')') {
                    return Err(self.err("expected ')'"));
                }
                self.pos += 1;
                Ok(v)
            }
            Some(b's') => {
                if !self.s[self.pos..].starts_with(b"sqrt") {
                    return Err(self.err("unknown identifier"));
                }
                self.pos += 4;
                if self.peek() != Some(b'(') {
                    return Err(self.err("expected '(' after sqrt"));
                }
                self.pos += 1;
                self.skip_ws();
                let start = self.pos;
                while self.pos < self.s.len() && self.s[self.pos].is_ascii_digit() {
                    self.pos += 1;
                }
                let n: u64 =
                    self.src[start..self.pos].parse().map_err(|_| self.err("sqrt takes a non-negative integer"))?;
                if self.peek() != Some(b')') {
                    return Err(self.err("expected ')'"));
                }
                self.pos += 1;
                QuadraticReal::sqrt(n)
            }
            Some(c) if c.is_ascii_digit() || c == b'.' => {
                let start = self.pos;
                while self.pos < self.s.len() && (self.s[self.pos].is_ascii_digit() || self.s[self.pos] == b'.') {
                    self.pos += 1;
                }
                Ok(QuadraticReal::rational(parse_rational(&self.src[start..self.pos])?))
            }
            _ => Err(self.err("expected a number")),
        }
    }
}

/// Digits of the quasi-greedy expansion of 1: a finite prefix, possibly
/// continued periodically.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Expansion {
    digits: Vec<u8>,
    /// `(start, period)`: `digit[i] = digit[start + (i - start) % period]` for `i ≥ start`.
    cycle: Option<(usize, usize)>,
}

impl Expansion {
    pub fn digit(&self, i: usize) -> Option<u8> {
        if i < self.digits.len() {
            return Some(self.digits[i]);
        }
        let (start, period) = self.cycle?;
        Some(self.digits[start + (i - start) % period])
    }

    /// Number of digits known, `None` when the expansion is eventually periodic.
    pub fn known_len(&self) -> Option<usize> {
        match self.cycle {
            Some(_) => None,
            None => Some(self.digits.len()),
        }
    }

    pub fn prefix(&self, len: usize) -> Option<Vec<u8>> {
        (0..len).map(|i| self.digit(i)).collect()
    }
}

/// Greedy expansion of 1 in base β, up to `budget` digits.
///
/// Returns the digits and either the termination length or a detected cycle.
fn greedy_expansion_of_one(beta: &QuadraticReal, budget: usize) -> Result<(Vec<u8>, GreedyEnd)> {
    let mut t = QuadraticReal::rational(Rational::one());
    let mut digits = Vec::new();
    let mut seen: HashMap<QuadraticReal, usize> = HashMap::new();
    while digits.len() < budget {
        let bt = beta.mul(&t)?;
        let digit = bt.floor();
        t = bt.sub(&QuadraticReal::rational(Rational::from_integer(digit.clone())))?;
        digits.push(digit.to_u8().ok_or_else(|| Error::InvalidParameter("beta digit exceeds 255".into()))?);
        if t.signum() == Ordering::Equal {
            return Ok((digits, GreedyEnd::Terminates));
        }
        // t_i determines every later digit, so a repeat closes a cycle.
        if let Some(&prev) = seen.get(&t) {
            let period = digits.len() - prev;
            return Ok((digits, GreedyEnd::Cycle { start: prev, period }));
        }
        seen.insert(t.clone(), digits.len());
    }
    Ok((digits, GreedyEnd::Budget))
}

enum GreedyEnd {
    Terminates,
    Cycle { start: usize, period: usize },
    Budget,
}

/// The quasi-greedy expansion of 1 for `β > 1`.
pub fn quasi_greedy_expansion(beta: &QuadraticReal, budget: usize) -> Result<Expansion> {
    let (mut digits, end) = greedy_expansion_of_one(beta, budget)?;
    Ok(match end {
        GreedyEnd::Terminates => {
            // d_1 … d_m 0^∞ becomes (d_1 … d_{m-1} (d_m − 1))^∞.
            let last = digits.len() - 1;
            digits[last] -= 1;
            let period = digits.len();
            Expansion { digits, cycle: Some((0, period)) }
        }
        GreedyEnd::Cycle { start, period } => Expansion { digits, cycle: Some((start, period)) },
        GreedyEnd::Budget => Expansion { digits, cycle: None },
    })
}

/// A beta shift with its precomputed quasi-greedy expansion.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BetaShift {
    source: String,
    value: QuadraticReal,
    digits_budget: usize,
    expansion: Expansion,
    alphabet_size: usize,
}

impl BetaShift {
    pub fn parse(source: &str, digits_budget: usize) -> Result<Self> {
        let value = parse_real(source)?;
        if value.cmp_integer(&BigInt::one()) != Ordering::Greater {
            return Err(Error::InvalidParameter(format!("beta must exceed 1, got {source}")));
        }
        if digits_budget == 0 {
            return Err(Error::InvalidParameter("digits budget must be positive".into()));
        }
        let alphabet_size = value
            .floor()
            .to_usize()
            .filter(|&f| f < 256)
            .map(|f| f + 1)
            .ok_or_else(|| Error::InvalidParameter(format!("beta {source} needs more than 256 digits")))?;
        let expansion = quasi_greedy_expansion(&value, digits_budget)?;
        Ok(BetaShift { source: source.to_string(), value, digits_budget, expansion, alphabet_size })
    }

    pub fn source(&self) -> &str {
        &self.source
    }

    pub fn value(&self) -> &QuadraticReal {
        &self.value
    }

    pub fn digits_budget(&self) -> usize {
        self.digits_budget
    }

    pub fn expansion(&self) -> &Expansion {
        &self.expansion
    }

    /// `⌊β⌋ + 1` digits.
    pub fn alphabet_size(&self) -> usize {
        self.alphabet_size
    }

    /// Parry's lexicographic criterion on a finite word.
    pub fn admits(&self, word: &[u8]) -> Result<bool> {
        if let Some(known) = self.expansion.known_len() {
            if word.len() > known {
                return Err(Error::BudgetExceeded {
                    what: "beta expansion digits",
                    needed: word.len().to_string(),
                    budget: known as u64,
                });
            }
        }
        for start in 0..word.len() {
            for (i, &w) in word[start..].iter().enumerate() {
                let q = self.expansion.digit(i).expect("digit within known range");
                match w.cmp(&q) {
                    Ordering::Less => break,
                    Ordering::Greater => return Ok(false),
                    Ordering::Equal => {}
                }
            }
        }
        Ok(true)
    }
}
