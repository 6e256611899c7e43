//! Sources of generic points: seeded samples of Bernoulli, Markov and Parry
//! processes, or trusted windows read from disk.

use crate::error::{Error, Result};
use crate::report::{fmt_rational, parse_rational, rational_to_f64};
use crate::sequence::{read_window, Alphabet, Window};
use crate::Rational;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

/// Iteration budget for the Perron eigenvector.
const POWER_ITERATION_BUDGET: usize = 1_000_000;

#[derive(Debug, Clone, PartialEq)]
pub enum GenericSource {
    /// Independent symbols with these probabilities.
    Bernoulli(Vec<Rational>),
    /// Row-stochastic matrix, started from its stationary distribution.
    Markov(Vec<Vec<Rational>>),
    /// Maximal-entropy chain of the vertex shift with this 0/1 adjacency matrix.
    SftParry(Vec<Vec<u8>>),
    File(PathBuf),
}

impl GenericSource {
    pub fn validate(&self) -> Result<()> {
        match self {
            GenericSource::Bernoulli(p) => check_probability_vector(p, "Bernoulli parameters"),
            GenericSource::Markov(m) => {
                check_square(m.len(), m.iter().map(Vec::len))?;
                for row in m {
                    check_probability_vector(row, "Markov row")?;
                }
                Ok(())
            }
            GenericSource::SftParry(a) => {
                check_square(a.len(), a.iter().map(Vec::len))?;
                if a.iter().flatten().any(|&x| x > 1) {
                    return Err(Error::InvalidParameter("adjacency entries must be 0 or 1".into()));
                }
                Ok(())
            }
            GenericSource::File(_) => Ok(()),
        }
    }
}

fn check_square(n: usize, rows: impl Iterator<Item = usize>) -> Result<()> {
    Alphabet::new(n)?;
    for len in rows {
        if len != n {
            return Err(Error::InvalidParameter(format!("matrix is not square: row of length {len}, expected {n}")));
        }
    }
    Ok(())
}

fn check_probability_vector(p: &[Rational], what: &str) -> Result<()> {
    Alphabet::new(p.len())?;
    if p.iter().any(|x| x < &Rational::zero()) {
        return Err(Error::InvalidParameter(format!("{what} must be nonnegative")));
    }
    let total: Rational = p.iter().sum();
    if !total.is_one() {
        return Err(Error::InvalidParameter(format!("{what} sum to {total}, not 1")));
    }
    Ok(())
}

impl fmt::Display for GenericSource {
    /// Canonical form accepted by [`FromStr`].
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let join = |v: &[Rational]| v.iter().map(fmt_rational).collect::<Vec<_>>().join(",");
        match self {
            GenericSource::Bernoulli(p) => write!(f, "bernoulli:{}", join(p)),
            GenericSource::Markov(m) => {
                write!(f, "markov:{}", m.iter().map(|r| join(r)).collect::<Vec<_>>().join(";"))
            }
            GenericSource::SftParry(a) => {
                let rows: Vec<String> = a.iter().map(|r| r.iter().map(|&x| (b'0' + x) as char).collect()).collect();
                write!(f, "parry:{}", rows.join(","))
            }
            GenericSource::File(p) => write!(f, "file:{}", p.display()),
        }
    }
}

impl FromStr for GenericSource {
    type Err = Error;

    /// `bernoulli:0.5` (probability of 1), `bernoulli:0.2,0.3,0.5`,
    /// `markov:0.9,0.1;0.2,0.8`, `parry:11,10` or `file:PATH`.
    fn from_str(s: &str) -> Result<Self> {
        let (kind, body) =
            s.split_once(':').ok_or_else(|| Error::InvalidParameter(format!("source {s:?} lacks a kind prefix")))?;
        let row = |r: &str| r.split(',').map(parse_rational).collect::<Result<Vec<_>>>();
        let source = match kind {
            "bernoulli" => {
                let mut p = row(body)?;
                if p.len() == 1 {
                    p.insert(0, Rational::one() - &p[0]);
                }
                GenericSource::Bernoulli(p)
            }
            "markov" => GenericSource::Markov(body.split(';').map(row).collect::<Result<_>>()?),
            "parry" => GenericSource::SftParry(
                body.split(',')
                    .map(|r| {
                        r.trim()
                            .bytes()
                            .map(|b| match b {
                                b'0' | b'1' => Ok(b - b'0'),
                                _ => Err(Error::InvalidParameter(format!("adjacency row {r:?} must be 0/1 digits"))),
                            })
                            .collect()
                    })
                    .collect::<Result<_>>()?,
            ),
            "file" => GenericSource::File(PathBuf::from(body)),
            other => return Err(Error::InvalidParameter(format!("unknown source kind {other:?}"))),
        };
        source.validate()?;
        Ok(source)
    }
}

/// Maximal-entropy Markov chain of a primitive vertex shift.
#[derive(Debug, Clone, PartialEq)]
pub struct ParryMeasure {
    pub transition: Vec<Vec<f64>>,
    pub stationary: Vec<f64>,
    pub log_perron_root: f64,
}

/// `A^w > 0` for the Wielandt exponent `w = (n−1)² + 1` iff `A` is primitive.
pub fn is_primitive(adjacency: &[Vec<u8>]) -> bool {
    let n = adjacency.len();
    let mul = |a: &Vec<Vec<bool>>, b: &Vec<Vec<bool>>| -> Vec<Vec<bool>> {
        (0..n).map(|i| (0..n).map(|j| (0..n).any(|l| a[i][l] && b[l][j])).collect()).collect()
    };
    let mut base: Vec<Vec<bool>> = adjacency.iter().map(|r| r.iter().map(|&x| x != 0).collect()).collect();
    let mut acc: Option<Vec<Vec<bool>>> = None;
    let mut e = (n - 1) * (n - 1) + 1;
    while e > 0 {
        if e & 1 == 1 {
            acc = Some(match acc {
                None => base.clone(),
                Some(a) => mul(&a, &base),
            });
        }
        e >>= 1;
        if e > 0 {
            base = mul(&base, &base);
        }
    }
    acc.is_some_and(|m| m.iter().flatten().all(|&x| x))
}

/// Perron root and positive eigenvector of `A` (or `Aᵀ`) by power iteration.
fn perron(adjacency: &[Vec<u8>], transpose: bool) -> Result<(f64, Vec<f64>)> {
    let n = adjacency.len();
    let entry = |i: usize, j: usize| if transpose { adjacency[j][i] } else { adjacency[i][j] } as f64;
    let mut v = vec![1.0 / n as f64; n];
    let mut lambda = 0.0;
    for _ in 0..POWER_ITERATION_BUDGET {
        let w: Vec<f64> = (0..n).map(|i| (0..n).map(|j| entry(i, j) * v[j]).sum()).collect();
        let norm: f64 = w.iter().sum();
        let next: Vec<f64> = w.iter().map(|x| x / norm).collect();
        let change = next.iter().zip(&v).map(|(a, b)| (a - b).abs() / a.max(f64::MIN_POSITIVE)).fold(0.0, f64::max);
        let lambda_change = (norm - lambda).abs() / norm;
        v = next;
        lambda = norm;
        if change <= 1e-12 && lambda_change <= 1e-12 {
            return Ok((lambda, v));
        }
    }
    Err(Error::NoConvergence(POWER_ITERATION_BUDGET))
}

pub fn parry_measure(adjacency: &[Vec<u8>]) -> Result<ParryMeasure> {
    GenericSource::SftParry(adjacency.to_vec()).validate()?;
    if !is_primitive(adjacency) {
        return Err(Error::NonPrimitive);
    }
    let n = adjacency.len();
    let (lambda, v) = perron(adjacency, false)?;
    let (_, u) = perron(adjacency, true)?;
    let mut transition = Vec::with_capacity(n);
    for i in 0..n {
        let row: Vec<f64> = (0..n).map(|j| adjacency[i][j] as f64 * v[j] / (lambda * v[i])).collect();
        let sum: f64 = row.iter().sum();
        if (sum - 1.0).abs() > 1e-10 {
            return Err(Error::NoConvergence(POWER_ITERATION_BUDGET));
        }
        transition.push(row.into_iter().map(|p| p / sum).collect());
    }
    let weights: Vec<f64> = u.iter().zip(&v).map(|(a, b)| a * b).collect();
    let total: f64 = weights.iter().sum();
    Ok(ParryMeasure {
        transition,
        stationary: weights.into_iter().map(|w| w / total).collect(),
        log_perron_root: lambda.ln(),
    })
}

/// Exact stationary distribution of an irreducible chain, by Gaussian
/// elimination on `πP = π`, `Σπ = 1`.
pub fn markov_stationary(p: &[Vec<Rational>]) -> Result<Vec<Rational>> {
    let n = p.len();
    // Rows of the system: (Pᵀ − I) π = 0, with the last equation replaced by Σπ = 1.
    let mut a: Vec<Vec<Rational>> = (0..n)
        .map(|i| {
            let mut row: Vec<Rational> = (0..n).map(|j| p[j][i].clone()).collect();
            row[i] -= Rational::one();
            row.push(Rational::zero());
            row
        })
        .collect();
    a[n - 1] = vec![Rational::one(); n + 1];
    for col in 0..n {
        let pivot = (col..n)
            .find(|&r| !a[r][col].is_zero())
            .ok_or_else(|| Error::InvalidParameter("Markov chain has no unique stationary distribution".into()))?;
        a.swap(col, pivot);
        let inv = Rational::one() / &a[col][col];
        for x in a[col].iter_mut() {
            *x *= &inv;
        }
        let pivot_row = a[col].clone();
        for (r, row) in a.iter_mut().enumerate() {
            if r != col && !row[col].is_zero() {
                let factor = row[col].clone();
                for (x, p) in row[col..].iter_mut().zip(&pivot_row[col..]) {
                    *x -= &factor * p;
                }
            }
        }
    }
    Ok(a.into_iter().map(|row| row[n].clone()).collect())
}

/// Cumulative sums with the last entry pinned to exactly 1.
fn cumulative(p: &[f64]) -> Vec<f64> {
    let mut acc = 0.0;
    let mut out: Vec<f64> = p
        .iter()
        .map(|x| {
            acc += x;
            acc
        })
        .collect();
    // Trailing zero-probability symbols must stay unreachable.
    let last = p.iter().rposition(|&x| x > 0.0).unwrap_or(p.len() - 1);
    for c in &mut out[last..] {
        *c = 1.0;
    }
    out
}

/// Inverse-CDF draw: the first symbol whose cumulative mass exceeds `u`.
fn draw(cdf: &[f64], u: f64) -> u8 {
    cdf.iter().position(|&c| u < c).unwrap_or(cdf.len() - 1) as u8
}

fn sample_chain(initial: &[f64], rows: &[Vec<f64>], length: usize, rng: &mut ChaCha8Rng) -> Vec<u8> {
    let start = cumulative(initial);
    let cdfs: Vec<Vec<f64>> = rows.iter().map(|r| cumulative(r)).collect();
    let mut out = Vec::with_capacity(length);
    let mut state = draw(&start, rng.gen());
    out.push(state);
    for _ in 1..length {
        state = draw(&cdfs[state as usize], rng.gen());
        out.push(state);
    }
    out
}

/// Deterministic sample of `length` symbols at base 0.
pub fn sample_generic(source: &GenericSource, length: usize, seed: u64) -> Result<Window> {
    source.validate()?;
    if length == 0 {
        return Err(Error::EmptyWindow);
    }
    let to_f64 = |v: &[Rational]| v.iter().map(rational_to_f64).collect::<Vec<f64>>();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    match source {
        GenericSource::Bernoulli(p) => {
            let cdf = cumulative(&to_f64(p));
            let symbols = (0..length).map(|_| draw(&cdf, rng.gen())).collect();
            Window::new(Alphabet::new(p.len())?, 0, symbols)
        }
        GenericSource::Markov(m) => {
            let pi = markov_stationary(m)?;
            let rows: Vec<Vec<f64>> = m.iter().map(|r| to_f64(r)).collect();
            let symbols = sample_chain(&to_f64(&pi), &rows, length, &mut rng);
            Window::new(Alphabet::new(m.len())?, 0, symbols)
        }
        GenericSource::SftParry(a) => {
            let parry = parry_measure(a)?;
            let symbols = sample_chain(&parry.stationary, &parry.transition, length, &mut rng);
            Window::new(Alphabet::new(a.len())?, 0, symbols)
        }
        GenericSource::File(path) => {
            let w = read_window(path)?;
            if w.len() < length {
                return Err(Error::WindowTooShort { len: w.len(), required: length, what: "file source" });
            }
            w.restrict(w.base(), w.base() + length as i64)
        }
    }
}
