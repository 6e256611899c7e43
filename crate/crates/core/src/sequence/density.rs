use super::Window;
use crate::error::{Error, Result};
use crate::Rational;
use num_rational::Ratio;

/// Coordinate-wise product `(x ∗ y)_j = x_j · y_j` on the overlap of the two
/// windows. `y` must be a binary mask.
pub fn star_product(x: &Window, y: &Window) -> Result<Window> {
    if y.alphabet().size() != 2 {
        return Err(Error::AlphabetMismatch { expected: 2, found: y.alphabet().size() });
    }
    let (lo, hi) = x.overlap(y).ok_or(Error::DisjointWindows)?;
    let symbols = x.slice_abs(lo, hi).iter().zip(y.slice_abs(lo, hi)).map(|(&a, &m)| a * m).collect();
    Window::new(x.alphabet(), lo, symbols)
}

/// `(#disagreements, overlap length)` on the common coordinate range.
pub fn disagreement_count(x: &Window, y: &Window) -> Result<(u64, u64)> {
    let (lo, hi) = x.overlap(y).ok_or(Error::DisjointWindows)?;
    let differ = x.slice_abs(lo, hi).iter().zip(y.slice_abs(lo, hi)).filter(|(a, b)| a != b).count();
    Ok((differ as u64, (hi - lo) as u64))
}

/// Fraction of overlap coordinates where the windows differ: the finite-window
/// surrogate of the upper density of `{j : x_j ≠ y_j}`.
pub fn disagreement_density(x: &Window, y: &Window) -> Result<Rational> {
    let (differ, len) = disagreement_count(x, y)?;
    Ok(Rational::new(differ.into(), len.into()))
}

/// Partial densities `|A ∩ {1..m}| / m` for `m = 1..flags.len()`.
pub fn running_density(flags: &[bool]) -> Result<Vec<Ratio<u64>>> {
    if flags.is_empty() {
        return Err(Error::InvalidParameter("running density of an empty sequence".into()));
    }
    let mut hits = 0u64;
    Ok(flags
        .iter()
        .enumerate()
        .map(|(i, &f)| {
            hits += f as u64;
            Ratio::new(hits, i as u64 + 1)
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sequence::Alphabet;
    use proptest::prelude::*;

    fn ternary(digits: &str, base: i64) -> Window {
        Window::from_digits(Alphabet::new(3).unwrap(), base, digits).unwrap()
    }

    #[test]
    fn star_product_examples() {
        let x = ternary("2101", 0);
        let mask = |d: &str| Window::binary(d).unwrap();
        assert_eq!(star_product(&x, &mask("0000")).unwrap().to_string(), "0000");
        assert_eq!(star_product(&x, &mask("1111")).unwrap().to_string(), "2101");
        let p = star_product(&x, &mask("1010")).unwrap();
        assert_eq!(p.to_string(), "2000");
        assert_eq!(p.alphabet().size(), 3);
    }

    #[test]
    fn star_product_uses_overlap_only() {
        let x = ternary("2121", 0);
        let y = Window::new(Alphabet::BINARY, 2, vec![1, 0, 1]).unwrap();
        let p = star_product(&x, &y).unwrap();
        assert_eq!((p.base(), p.to_string()), (2, "20".to_string()));
        let far = Window::new(Alphabet::BINARY, 10, vec![1]).unwrap();
        assert_eq!(star_product(&x, &far).unwrap_err(), Error::DisjointWindows);
        assert!(star_product(&x, &x).is_err());
    }

    #[test]
    fn density_examples() {
        let x = Window::binary("0000").unwrap();
        let y = Window::binary("1111").unwrap();
        assert_eq!(disagreement_density(&x, &x).unwrap(), Rational::from_integer(0.into()));
        assert_eq!(disagreement_density(&x, &y).unwrap(), Rational::from_integer(1.into()));
        let far = Window::new(Alphabet::BINARY, 4, vec![0]).unwrap();
        assert_eq!(disagreement_density(&x, &far).unwrap_err(), Error::DisjointWindows);
    }

    #[test]
    fn running_density_examples() {
        let r = running_density(&[true, false, true, false]).unwrap();
        assert_eq!(r, vec![Ratio::new(1, 1), Ratio::new(1, 2), Ratio::new(2, 3), Ratio::new(1, 2)]);
        assert!(running_density(&[false; 5]).unwrap().iter().all(|r| *r == Ratio::new(0, 1)));
        assert!(running_density(&[true; 3]).unwrap().iter().all(|r| *r == Ratio::new(1, 1)));
        assert!(running_density(&[]).is_err());
    }

    fn windows(len: usize) -> impl Strategy<Value = Vec<u8>> {
        proptest::collection::vec(0u8..3, len)
    }

    proptest! {
        #[test]
        fn density_is_a_pseudometric((a, b, c) in (1usize..40).prop_flat_map(|n| (windows(n), windows(n), windows(n)))) {
            let t = Alphabet::new(3).unwrap();
            let (x, y, z) = (
                Window::new(t, 0, a).unwrap(),
                Window::new(t, 0, b).unwrap(),
                Window::new(t, 0, c).unwrap(),
            );
            let d = |p: &Window, q: &Window| disagreement_density(p, q).unwrap();
            prop_assert_eq!(d(&x, &x), Rational::from_integer(0.into()));
            prop_assert_eq!(d(&x, &y), d(&y, &x));
            prop_assert!(d(&x, &z) <= d(&x, &y) + d(&y, &z));
        }

        #[test]
        fn star_product_is_monotone_in_mask(
            (x, m1, m2) in (1usize..40).prop_flat_map(|n| (
                windows(n),
                proptest::collection::vec(0u8..2, n),
                proptest::collection::vec(0u8..2, n),
            ))
        ) {
            let t = Alphabet::new(3).unwrap();
            let lo: Vec<u8> = m1.iter().zip(&m2).map(|(a, b)| a & b).collect();
            let x = Window::new(t, 0, x).unwrap();
            let small = star_product(&x, &Window::new(Alphabet::BINARY, 0, lo).unwrap()).unwrap();
            let big = star_product(&x, &Window::new(Alphabet::BINARY, 0, m1).unwrap()).unwrap();
            prop_assert!(small.le_entrywise(&big).unwrap());
        }

        #[test]
        fn final_running_density_matches(a in windows(30), b in windows(30)) {
            let t = Alphabet::new(3).unwrap();
            let (x, y) = (Window::new(t, 0, a).unwrap(), Window::new(t, 0, b).unwrap());
            let flags: Vec<bool> = x.symbols().iter().zip(y.symbols()).map(|(p, q)| p != q).collect();
            let last = *running_density(&flags).unwrap().last().unwrap();
            let exact = disagreement_density(&x, &y).unwrap();
            prop_assert_eq!(Rational::new((*last.numer()).into(), (*last.denom()).into()), exact);
        }
    }
}
