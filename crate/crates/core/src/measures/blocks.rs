//! Exact k-block distributions.

use crate::error::{Error, Result};
use crate::sequence::{format_symbols, parse_symbols, Alphabet, Window};
use crate::Rational;
use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use std::collections::{BTreeMap, HashMap};
use std::fmt::Write as _;

/// A probability distribution on the k-blocks of an alphabet, with exact
/// rational weights. Blocks of weight zero are not stored.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BlockDistribution {
    alphabet: Alphabet,
    k: usize,
    weights: BTreeMap<Vec<u8>, Rational>,
}

impl BlockDistribution {
    pub fn new(alphabet: Alphabet, k: usize, weights: BTreeMap<Vec<u8>, Rational>) -> Result<Self> {
        if k == 0 {
            return Err(Error::InvalidParameter("block length must be positive".into()));
        }
        let mut total = Rational::zero();
        for (block, w) in &weights {
            if block.len() != k {
                return Err(Error::BlockLengthMismatch(k, block.len()));
            }
            if let Some((offset, &symbol)) = block.iter().enumerate().find(|(_, &s)| !alphabet.contains(s)) {
                return Err(Error::SymbolOutOfRange { symbol, offset, size: alphabet.size() });
            }
            if w.is_negative() {
                return Err(Error::InvalidParameter(format!("negative weight {w}")));
            }
            total += w;
        }
        if !total.is_one() {
            return Err(Error::InvalidParameter(format!("weights sum to {total}, not 1")));
        }
        let weights = weights.into_iter().filter(|(_, w)| !w.is_zero()).collect();
        Ok(BlockDistribution { alphabet, k, weights })
    }

    /// Point mass on one block.
    pub fn delta(alphabet: Alphabet, block: Vec<u8>) -> Result<Self> {
        let k = block.len();
        BlockDistribution::new(alphabet, k, BTreeMap::from([(block, Rational::one())]))
    }

    /// Law of `k` independent symbols with marginal `probs`.
    pub fn iid(probs: &[Rational], k: usize) -> Result<Self> {
        let alphabet = Alphabet::new(probs.len())?;
        let mut weights = BTreeMap::from([(Vec::new(), Rational::one())]);
        for _ in 0..k {
            let mut next = BTreeMap::new();
            for (block, w) in &weights {
                for (s, p) in probs.iter().enumerate() {
                    let mut b = block.clone();
                    b.push(s as u8);
                    next.insert(b, w * p);
                }
            }
            weights = next;
        }
        BlockDistribution::new(alphabet, k, weights)
    }

    pub fn alphabet(&self) -> Alphabet {
        self.alphabet
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn weights(&self) -> &BTreeMap<Vec<u8>, Rational> {
        &self.weights
    }

    pub fn weight(&self, block: &[u8]) -> Rational {
        self.weights.get(block).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn support_size(&self) -> usize {
        self.weights.len()
    }

    /// Distribution of the first `j` symbols of a block.
    pub fn marginal(&self, j: usize) -> Result<BlockDistribution> {
        if j == 0 || j > self.k {
            return Err(Error::InvalidParameter(format!("marginal length {j} outside 1..={}", self.k)));
        }
        let mut weights: BTreeMap<Vec<u8>, Rational> = BTreeMap::new();
        for (block, w) in &self.weights {
            *weights.entry(block[..j].to_vec()).or_insert_with(Rational::zero) += w;
        }
        Ok(BlockDistribution { alphabet: self.alphabet, k: j, weights })
    }

    pub(crate) fn check_compatible(&self, other: &BlockDistribution) -> Result<()> {
        if self.alphabet != other.alphabet {
            return Err(Error::AlphabetMismatch { expected: self.alphabet.size(), found: other.alphabet.size() });
        }
        if self.k != other.k {
            return Err(Error::BlockLengthMismatch(self.k, other.k));
        }
        Ok(())
    }

    /// `#n=<size> k=<k>` followed by `block<TAB>p/q` lines in block order.
    pub fn to_text(&self) -> String {
        let mut out = format!("#n={} k={}\n", self.alphabet.size(), self.k);
        for (block, w) in &self.weights {
            writeln!(out, "{}\t{}", format_symbols(self.alphabet, block), crate::report::fmt_rational(w)).unwrap();
        }
        out
    }

    pub fn from_text(text: &str) -> Result<Self> {
        let mut lines = text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty());
        let (_, header) = lines.next().ok_or(Error::Parse { line: 1, message: "empty input".into() })?;
        let header_err = |message: String| Error::Parse { line: 1, message };
        let mut size = None;
        let mut k = None;
        for field in header.strip_prefix('#').ok_or_else(|| header_err("expected header".into()))?.split_whitespace() {
            match field.split_once('=') {
                Some(("n", v)) => size = v.parse::<usize>().ok(),
                Some(("k", v)) => k = v.parse::<usize>().ok(),
                _ => {}
            }
        }
        let alphabet = Alphabet::new(size.ok_or_else(|| header_err("header lacks n".into()))?)?;
        let k = k.ok_or_else(|| header_err("header lacks k".into()))?;
        let mut weights = BTreeMap::new();
        for (idx, line) in lines {
            let err = |message: String| Error::Parse { line: idx + 1, message };
            let (block, w) = line.split_once('\t').ok_or_else(|| err("expected block<TAB>weight".into()))?;
            let block = parse_symbols(alphabet, block).map_err(|e| err(e.to_string()))?;
            let w = crate::report::parse_rational(w).map_err(|e| err(e.to_string()))?;
            if weights.insert(block, w).is_some() {
                return Err(err("duplicate block".into()));
            }
        }
        BlockDistribution::new(alphabet, k, weights)
    }
}

/// Sliding k-block counts of `symbols`, keyed by block.
pub(crate) fn block_counts(symbols: &[u8], k: usize) -> BTreeMap<Vec<u8>, u64> {
    let mut counts: HashMap<&[u8], u64> = HashMap::new();
    for block in symbols.windows(k) {
        *counts.entry(block).or_insert(0) += 1;
    }
    counts.into_iter().map(|(b, c)| (b.to_vec(), c)).collect()
}

/// Empirical sliding k-block distribution of a window.
pub fn empirical_blocks(w: &Window, k: usize) -> Result<BlockDistribution> {
    if k == 0 {
        return Err(Error::InvalidParameter("block length must be positive".into()));
    }
    if k > w.len() {
        return Err(Error::BlockTooLong { k, len: w.len() });
    }
    let total = BigInt::from(w.len() - k + 1);
    let weights = block_counts(w.symbols(), k)
        .into_iter()
        .map(|(b, c)| (b, Rational::new(BigInt::from(c), total.clone())))
        .collect();
    Ok(BlockDistribution { alphabet: w.alphabet(), k, weights })
}

/// Half the L1 distance between the weight vectors.
pub fn tv_distance(p: &BlockDistribution, q: &BlockDistribution) -> Result<Rational> {
    p.check_compatible(q)?;
    let mut sum = Rational::zero();
    for (block, w) in &p.weights {
        sum += (w - q.weight(block)).abs();
    }
    for (block, w) in &q.weights {
        if !p.weights.contains_key(block) {
            sum += w;
        }
    }
    Ok(sum / Rational::from_integer(2.into()))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(n: i64, d: i64) -> Rational {
        Rational::new(n.into(), d.into())
    }

    #[test]
    fn sliding_blocks() {
        let p = empirical_blocks(&Window::binary("0101").unwrap(), 2).unwrap();
        assert_eq!(p.weight(&[0, 1]), r(2, 3));
        assert_eq!(p.weight(&[1, 0]), r(1, 3));
        assert_eq!(p.support_size(), 2);
        let q = empirical_blocks(&Window::binary("0000").unwrap(), 3).unwrap();
        assert_eq!(q.weights().len(), 1);
        assert_eq!(q.weight(&[0, 0, 0]), r(1, 1));
        assert_eq!(
            empirical_blocks(&Window::binary("01").unwrap(), 3).unwrap_err(),
            Error::BlockTooLong { k: 3, len: 2 }
        );
    }

    #[test]
    fn tv_examples() {
        let a = BlockDistribution::iid(&[r(4, 5), r(1, 5)], 1).unwrap();
        let b = BlockDistribution::iid(&[r(1, 2), r(1, 2)], 1).unwrap();
        assert_eq!(tv_distance(&a, &b).unwrap(), r(3, 10));
        assert_eq!(tv_distance(&a, &a).unwrap(), r(0, 1));
        let d0 = BlockDistribution::delta(Alphabet::BINARY, vec![0]).unwrap();
        let d1 = BlockDistribution::delta(Alphabet::BINARY, vec![1]).unwrap();
        assert_eq!(tv_distance(&d0, &d1).unwrap(), r(1, 1));
        let d2 = BlockDistribution::delta(Alphabet::BINARY, vec![1, 1]).unwrap();
        assert!(tv_distance(&d0, &d2).is_err());
    }

    #[test]
    fn validation() {
        let half = BTreeMap::from([(vec![0], r(1, 2))]);
        assert!(BlockDistribution::new(Alphabet::BINARY, 1, half).is_err());
        let bad_len = BTreeMap::from([(vec![0, 1], r(1, 1))]);
        assert!(BlockDistribution::new(Alphabet::BINARY, 1, bad_len).is_err());
        let neg = BTreeMap::from([(vec![0], r(3, 2)), (vec![1], r(-1, 2))]);
        assert!(BlockDistribution::new(Alphabet::BINARY, 1, neg).is_err());
    }

    #[test]
    fn iid_marginals() {
        let p = BlockDistribution::iid(&[r(1, 3), r(2, 3)], 3).unwrap();
        assert_eq!(p.weight(&[1, 1, 0]), r(4, 27));
        assert_eq!(p.marginal(1).unwrap(), BlockDistribution::iid(&[r(1, 3), r(2, 3)], 1).unwrap());
    }

    #[test]
    fn text_round_trip() {
        let p = BlockDistribution::iid(&[r(1, 3), r(1, 6), r(1, 2)], 2).unwrap();
        let text = p.to_text();
        assert!(text.starts_with("#n=3 k=2\n00\t1/9\n"));
        assert_eq!(BlockDistribution::from_text(&text).unwrap(), p);
        assert!(BlockDistribution::from_text("#n=2 k=1\n0\t1/2\n").is_err());
    }
}
