//! The arc `β ↦ x ∗ y_{α,β}` from the all-zero sequence to a generic point
//! `x`, its sweeps, entropy bisection along it, and a diagnostic for the
//! joint genericity of `x` and the rotation coding.

mod alpha;
mod source;

pub use alpha::{select_alpha, AlphaPolicy, RATIONALITY_GUARD_BITS};
pub use source::{is_primitive, markov_stationary, parry_measure, sample_generic, GenericSource, ParryMeasure};

use crate::entropy::{entropy_estimate, EntropyProfile};
use crate::error::{Error, Result};
use crate::families::ShiftFamilySpec;
use crate::measures::block_counts;
use crate::report::{fmt_rational, fmt_sig, parse_rational, rational_to_f64};
use crate::sequence::{
    disagreement_density, format_symbols, star_product, sturmian_window, FixedFraction, RotationCoding, Window,
};
use crate::Rational;
use num_bigint::BigInt;
use num_traits::{One, ToPrimitive, Zero};
use rayon::prelude::*;
use serde::Serialize;

/// `x ∗ y_{α,β}` on the coordinates of `x`.
pub fn arc_point(x: &Window, alpha: FixedFraction, beta: &Rational) -> Result<Window> {
    let coding = RotationCoding::new(alpha, beta.clone())?;
    star_product(x, &sturmian_window(&coding, x.base(), x.len())?)
}

/// One point of a sweep.
#[derive(Debug, Clone, PartialEq)]
pub struct ArcSample {
    pub beta: Rational,
    pub window: Window,
    pub entropy_profile: EntropyProfile,
    pub dbar_to_x: Rational,
    /// Density of nonzero symbols, the disagreement density with the zero window.
    pub dbar_to_zero: Rational,
}

/// Empirical check that arc points stay in a shift space: `samples` subwords
/// of length `word_len`, evenly spaced, must be admissible.
#[derive(Debug, Clone)]
pub struct SpotCheck {
    pub spec: ShiftFamilySpec,
    pub word_len: usize,
    pub samples: usize,
}

impl SpotCheck {
    pub fn new(spec: ShiftFamilySpec) -> Self {
        SpotCheck { spec, word_len: 16, samples: 256 }
    }

    /// The shortest inadmissible subword among the sampled ones, if any.
    pub fn violation(&self, w: &Window) -> Result<Option<Vec<u8>>> {
        let expected = self.spec.alphabet().size();
        if w.alphabet().size() != expected {
            return Err(Error::AlphabetMismatch { expected, found: w.alphabet().size() });
        }
        let len = self.word_len.min(w.len());
        let slack = w.len() - len;
        let count = self.samples.max(1);
        for i in 0..count {
            let start = if count == 1 { 0 } else { (slack as u128 * i as u128 / (count - 1) as u128) as usize };
            let word = &w.symbols()[start..start + len];
            if !self.spec.admits(word)? {
                for l in 1..=len {
                    for s in 0..=len - l {
                        if !self.spec.admits(&word[s..s + l])? {
                            return Ok(Some(word[s..s + l].to_vec()));
                        }
                    }
                }
            }
        }
        Ok(None)
    }
}

fn check_betas(betas: &[Rational]) -> Result<()> {
    if betas.iter().any(|b| b < &Rational::zero() || b > &Rational::one()) {
        return Err(Error::InvalidParameter("beta grid must lie in [0, 1]".into()));
    }
    if betas.windows(2).any(|w| w[0] > w[1]) {
        return Err(Error::InvalidParameter("beta grid must be sorted".into()));
    }
    Ok(())
}

/// `steps + 1` equally spaced values `0, 1/steps, …, 1`.
pub fn uniform_grid(steps: u64) -> Vec<Rational> {
    (0..=steps).map(|i| Rational::new(BigInt::from(i), BigInt::from(steps.max(1)))).collect()
}

/// Grid `lo:hi:step` with exact rational endpoints, e.g. `0:1:0.05` or
/// `0:1/2:1/8`. The step must divide `hi − lo`.
pub fn parse_grid(text: &str) -> Result<Vec<Rational>> {
    let parts: Vec<&str> = text.split(':').collect();
    let [lo, hi, step] = parts[..] else {
        return Err(Error::InvalidParameter(format!("grid {text:?} is not lo:hi:step")));
    };
    let (lo, hi, step) = (parse_rational(lo)?, parse_rational(hi)?, parse_rational(step)?);
    if step <= Rational::zero() || hi < lo {
        return Err(Error::InvalidParameter(format!("grid {text:?} needs lo ≤ hi and a positive step")));
    }
    let count = (&hi - &lo) / &step;
    if !count.is_integer() {
        return Err(Error::InvalidParameter(format!("grid step does not divide the range in {text:?}")));
    }
    let count = count
        .to_integer()
        .to_u64()
        .filter(|&c| c < 1 << 20)
        .ok_or_else(|| Error::InvalidParameter(format!("grid {text:?} has too many points")))?;
    let betas: Vec<Rational> = (0..=count).map(|i| &lo + &step * Rational::from_integer(BigInt::from(i))).collect();
    check_betas(&betas)?;
    Ok(betas)
}

fn sample_at(
    x: &Window,
    alpha: FixedFraction,
    beta: &Rational,
    k: usize,
    check: Option<&SpotCheck>,
) -> Result<ArcSample> {
    let window = arc_point(x, alpha, beta)?;
    if let Some(check) = check {
        if let Some(word) = check.violation(&window)? {
            return Err(Error::AdmissibilityViolation {
                beta: fmt_rational(beta),
                subword: format_symbols(window.alphabet(), &word),
            });
        }
    }
    let entropy_profile = entropy_estimate(&window, k)?;
    let dbar_to_x = disagreement_density(&window, x)?;
    let dbar_to_zero = Rational::new(BigInt::from(window.support_size()), BigInt::from(window.len()));
    Ok(ArcSample { beta: beta.clone(), window, entropy_profile, dbar_to_x, dbar_to_zero })
}

/// Arc points, entropy profiles and distances for every `β` of a sorted grid.
///
/// Grid points are processed in parallel; results and errors are reported in
/// grid order, so the output does not depend on scheduling.
pub fn arc_sweep(
    x: &Window,
    alpha: FixedFraction,
    betas: &[Rational],
    k: usize,
    check: Option<&SpotCheck>,
) -> Result<Vec<ArcSample>> {
    check_betas(betas)?;
    let results: Vec<Result<ArcSample>> = betas.par_iter().map(|b| sample_at(x, alpha, b, k, check)).collect();
    results.into_iter().collect()
}

/// CSV of a sweep: `beta,entropy,dbar_to_x,dbar_to_zero` followed by the
/// exact rational columns.
pub fn arc_csv(samples: &[ArcSample], manifest_hash: Option<&str>) -> String {
    let mut out = String::new();
    if let Some(h) = manifest_hash {
        out.push_str(&format!("# manifest_sha256={h}\n"));
    }
    out.push_str("beta,entropy,dbar_to_x,dbar_to_zero,beta_exact,dbar_to_x_exact,dbar_to_zero_exact\n");
    for s in samples {
        out.push_str(&format!(
            "{},{},{},{},{},{},{}\n",
            fmt_sig(rational_to_f64(&s.beta)),
            fmt_sig(s.entropy_profile.chosen_estimate),
            fmt_sig(rational_to_f64(&s.dbar_to_x)),
            fmt_sig(rational_to_f64(&s.dbar_to_zero)),
            fmt_rational(&s.beta),
            fmt_rational(&s.dbar_to_x),
            fmt_rational(&s.dbar_to_zero),
        ));
    }
    out
}

/// Number of intervals in the coarse scan that precedes bisection.
pub const BISECT_GRID_STEPS: u64 = 40;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BisectOutcome {
    #[serde(serialize_with = "serialize_rational")]
    pub beta_star: Rational,
    pub achieved: f64,
    /// Bisection refinements after the coarse scan.
    pub iterations: usize,
    pub converged: bool,
}

fn serialize_rational<S: serde::Serializer>(r: &Rational, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&fmt_rational(r))
}

/// Finds `β` with `|ĥ(x ∗ y_{α,β}) − target| ≤ tol`.
///
/// The estimated entropy need not be monotone in `β`, so a coarse grid scan
/// first locates the leftmost adjacent pair bracketing the target, and
/// bisection then runs inside it. The returned `β` is one witness among
/// possibly many. When `max_iter` refinements do not reach the tolerance the
/// closest point seen is returned with `converged = false`.
pub fn bisect_entropy(
    x: &Window,
    alpha: FixedFraction,
    target: f64,
    tol: f64,
    max_iter: usize,
    k: usize,
) -> Result<BisectOutcome> {
    if tol.is_nan() || tol <= 0.0 {
        return Err(Error::InvalidParameter(format!("tolerance {tol} must be positive")));
    }
    let h = |beta: &Rational| -> Result<f64> { Ok(entropy_estimate(&arc_point(x, alpha, beta)?, k)?.chosen_estimate) };
    let top = entropy_estimate(x, k)?.chosen_estimate;
    if !(target >= 0.0 && target <= top + tol) {
        return Err(Error::TargetOutOfRange(format!("{target} not in [0, {}]", top + tol)));
    }
    let done = |beta: Rational, achieved: f64, iterations| BisectOutcome {
        beta_star: beta,
        achieved,
        iterations,
        converged: true,
    };
    let zero = Rational::zero();
    let h0 = h(&zero)?;
    if (h0 - target).abs() <= tol {
        return Ok(done(zero, h0, 0));
    }
    if (top - target).abs() <= tol {
        return Ok(done(Rational::one(), top, 0));
    }

    let grid = uniform_grid(BISECT_GRID_STEPS);
    let values: Vec<f64> = grid.par_iter().map(h).collect::<Result<_>>()?;
    if let Some(i) = values.iter().position(|v| (v - target).abs() <= tol) {
        return Ok(done(grid[i].clone(), values[i], 0));
    }
    let bracket = (0..grid.len() - 1).find(|&i| (values[i] - target).signum() != (values[i + 1] - target).signum());
    let Some(i) = bracket else {
        return Err(Error::TargetOutOfRange(format!("no grid pair brackets {target}")));
    };
    let (mut lo, mut hi) = (grid[i].clone(), grid[i + 1].clone());
    let lo_below = values[i] < target;
    let mut best = if (values[i] - target).abs() <= (values[i + 1] - target).abs() {
        (lo.clone(), values[i])
    } else {
        (hi.clone(), values[i + 1])
    };
    let two = Rational::from_integer(2.into());
    for iteration in 1..=max_iter {
        let mid = (&lo + &hi) / &two;
        let v = h(&mid)?;
        if (v - target).abs() < (best.1 - target).abs() {
            best = (mid.clone(), v);
        }
        if (v - target).abs() <= tol {
            return Ok(done(mid, v, iteration));
        }
        if (v < target) == lo_below {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(BisectOutcome { beta_star: best.0, achieved: best.1, iterations: max_iter, converged: false })
}

/// Total-variation distance between the joint k-block distribution of the
/// aligned pair `(x, y_{α,β})` and the product of its two marginals.
///
/// With `M` sliding blocks and counts `c(u,v)`, `a(u)`, `b(v)`, the distance
/// is `Σ |c·M − a·b| / (2M²)`, computed exactly.
pub fn product_genericity_diagnostic(x: &Window, alpha: FixedFraction, beta: &Rational, k: usize) -> Result<Rational> {
    if k == 0 {
        return Err(Error::InvalidParameter("block length must be positive".into()));
    }
    if k > x.len() {
        return Err(Error::BlockTooLong { k, len: x.len() });
    }
    let y = sturmian_window(&RotationCoding::new(alpha, beta.clone())?, x.base(), x.len())?;
    let n = x.alphabet().size() as u16;
    // Pair symbol 2·x_j + y_j, kept in u16 so wide alphabets cannot collide.
    let paired: Vec<u16> = x.symbols().iter().zip(y.symbols()).map(|(&a, &b)| 2 * a as u16 + b as u16).collect();
    debug_assert!(paired.iter().all(|&p| p < 2 * n));
    let mut joint: std::collections::HashMap<&[u16], u64> = std::collections::HashMap::new();
    for block in paired.windows(k) {
        *joint.entry(block).or_insert(0) += 1;
    }
    let ax = block_counts(x.symbols(), k);
    let by = block_counts(y.symbols(), k);
    let m = (x.len() - k + 1) as i128;
    let mut sum: i128 = 0;
    for (u, &a) in &ax {
        for (v, &b) in &by {
            let key: Vec<u16> = u.iter().zip(v).map(|(&p, &q)| 2 * p as u16 + q as u16).collect();
            let c = joint.get(key.as_slice()).copied().unwrap_or(0) as i128;
            sum += (c * m - a as i128 * b as i128).abs();
        }
    }
    Ok(Rational::new(BigInt::from(sum), BigInt::from(2 * m * m)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sequence::Alphabet;

    fn r(n: i64, d: i64) -> Rational {
        Rational::new(n.into(), d.into())
    }

    #[test]
    fn grids() {
        assert_eq!(parse_grid("0:1:0.05").unwrap(), uniform_grid(20));
        assert_eq!(parse_grid("1/4:1/2:1/8").unwrap(), vec![r(1, 4), r(3, 8), r(1, 2)]);
        assert_eq!(parse_grid("0.5:0.5:0.1").unwrap(), vec![r(1, 2)]);
        for bad in ["0:1", "0:1:0.3", "0:2:0.5", "1:0:0.1", "0:1:0", "0:1:x"] {
            assert!(parse_grid(bad).is_err(), "{bad}");
        }
    }

    fn coin(len: usize, seed: u64) -> Window {
        sample_generic(&GenericSource::Bernoulli(vec![r(1, 2), r(1, 2)]), len, seed).unwrap()
    }

    #[test]
    fn endpoints_and_monotone_masking() {
        let x = Window::new(Alphabet::new(3).unwrap(), -5, (0..200).map(|i| (i * 7 % 3) as u8).collect()).unwrap();
        let g = FixedFraction::golden(128).unwrap();
        let zero = arc_point(&x, g, &r(0, 1)).unwrap();
        assert_eq!(zero.support_size(), 0);
        assert_eq!(zero.base(), -5);
        assert_eq!(arc_point(&x, g, &r(1, 1)).unwrap(), x);
        let grid = uniform_grid(10);
        for pair in grid.windows(2) {
            let a = arc_point(&x, g, &pair[0]).unwrap();
            let b = arc_point(&x, g, &pair[1]).unwrap();
            assert!(a.le_entrywise(&b).unwrap());
        }
    }

    #[test]
    fn sweep_endpoints() {
        let x = coin(20_000, 1);
        let g = FixedFraction::golden(128).unwrap();
        let s = arc_sweep(&x, g, &[r(0, 1), r(1, 1)], 4, None).unwrap();
        assert!(s[0].entropy_profile.block_entropies.iter().all(|&h| h == 0.0));
        assert_eq!(s[1].entropy_profile, entropy_estimate(&x, 4).unwrap());
        assert_eq!(s[1].dbar_to_x, r(0, 1));
        assert_eq!(s[0].dbar_to_zero, r(0, 1));
        assert!(arc_sweep(&x, g, &[r(1, 2), r(1, 4)], 4, None).is_err());
    }

    #[test]
    fn spot_check_reports_beta_and_subword() {
        let g = FixedFraction::golden(128).unwrap();
        let evens = ShiftFamilySpec::Spacing(crate::families::SpacingSet::Evens);
        let admissible = Window::new(Alphabet::BINARY, 0, (0..5000).map(|i| (i % 4 == 0) as u8).collect()).unwrap();
        let check = SpotCheck::new(evens.clone());
        assert!(arc_sweep(&admissible, g, &uniform_grid(4), 2, Some(&check)).is_ok());
        let bad = Window::new(Alphabet::BINARY, 0, vec![1; 5000]).unwrap();
        let err = arc_sweep(&bad, g, &[r(1, 1)], 2, Some(&check)).unwrap_err();
        assert_eq!(err, Error::AdmissibilityViolation { beta: "1".into(), subword: "11".into() });
    }

    #[test]
    fn bisection_edge_cases() {
        let x = coin(30_000, 2);
        let g = FixedFraction::golden(128).unwrap();
        let zero = bisect_entropy(&x, g, 0.0, 0.02, 20, 4).unwrap();
        assert_eq!((zero.beta_star.clone(), zero.achieved, zero.iterations), (r(0, 1), 0.0, 0));
        let top = entropy_estimate(&x, 4).unwrap().chosen_estimate;
        let end = bisect_entropy(&x, g, top, 0.02, 20, 4).unwrap();
        assert_eq!(end.beta_star, r(1, 1));
        assert!(matches!(bisect_entropy(&x, g, top + 0.1, 0.02, 20, 4), Err(Error::TargetOutOfRange(_))));
        let mid = bisect_entropy(&x, g, 0.35, 0.02, 20, 4).unwrap();
        assert!(mid.converged && (mid.achieved - 0.35).abs() <= 0.02);
    }

    #[test]
    fn diagnostic_degenerate_masks() {
        let x = coin(5_000, 3);
        let g = FixedFraction::golden(128).unwrap();
        for k in [1, 2, 3] {
            assert!(product_genericity_diagnostic(&x, g, &r(0, 1), k).unwrap().is_zero());
            assert!(product_genericity_diagnostic(&x, g, &r(1, 1), k).unwrap().is_zero());
        }
    }

    #[test]
    fn diagnostic_detects_dependence() {
        // y = x exactly: the coding of a window with itself is maximally dependent.
        let g = FixedFraction::golden(128).unwrap();
        let y = sturmian_window(&RotationCoding::new(g, r(1, 2)).unwrap(), 0, 10_000).unwrap();
        let tv = product_genericity_diagnostic(&y, g, &r(1, 2), 1).unwrap();
        assert!(rational_to_f64(&tv) > 0.2, "{tv}");
    }
}
