//! Second-order (transition-count) types of strings.

use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;

use num_rational::Ratio;

use crate::error::{Error, Result};
use crate::math::{log2, xlog2x_neg};
use crate::prob::PairDist;
use crate::words::{Word, WordSpace};

/// Default cap on `|X|^n` for class enumeration.
pub const ENUMERATION_CAP: usize = 1 << 20;

/// Transition counts of a string of length `len` over `0..alphabet`,
/// together with its first and last letters.
///
/// `counts[a * alphabet + b]` is the number of positions `i` with
/// `x_i = a, x_{i+1} = b`; the normalised type is `counts / (len − 1)`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SecondOrderType {
    alphabet: usize,
    len: usize,
    first: usize,
    last: usize,
    counts: Vec<u64>,
}

impl SecondOrderType {
    /// Type of a word of length at least 2.
    pub fn of_word(alphabet: usize, x: &[usize]) -> Result<Self> {
        if x.len() < 2 {
            return Err(Error::WordTooShort(x.len()));
        }
        let mut counts = vec![0u64; alphabet * alphabet];
        for w in x.windows(2) {
            counts[w[0] * alphabet + w[1]] += 1;
        }
        Ok(SecondOrderType {
            alphabet,
            len: x.len(),
            first: x[0],
            last: x[x.len() - 1],
            counts,
        })
    }

    /// Builds a type from counts, checking realisability by flow balance:
    /// out-degree minus in-degree is `δ_first − δ_last` at every letter, and
    /// the transitions touching `first` form a connected trail.
    pub fn from_counts(alphabet: usize, first: usize, last: usize, counts: Vec<u64>) -> Result<Self> {
        if counts.len() != alphabet * alphabet || first >= alphabet || last >= alphabet {
            return Err(Error::InvalidArgument("second-order type shape".into()));
        }
        let total: u64 = counts.iter().sum();
        if total == 0 {
            return Err(Error::WordTooShort(1));
        }
        let t = SecondOrderType {
            alphabet,
            len: total as usize + 1,
            first,
            last,
            counts,
        };
        for a in 0..alphabet {
            let expect = (a == first) as i64 - (a == last) as i64;
            if t.out_count(a) as i64 - t.in_count(a) as i64 != expect {
                return Err(Error::InvalidArgument("second-order counts violate flow balance".into()));
            }
        }
        if !t.edges_connected() {
            return Err(Error::InvalidArgument("second-order counts are not one trail".into()));
        }
        Ok(t)
    }

    fn edges_connected(&self) -> bool {
        let k = self.alphabet;
        let mut reach = vec![false; k];
        reach[self.first] = true;
        let mut stack = vec![self.first];
        while let Some(a) = stack.pop() {
            for b in 0..k {
                if (self.count(a, b) > 0 || self.count(b, a) > 0) && !reach[b] {
                    reach[b] = true;
                    stack.push(b);
                }
            }
        }
        (0..k).all(|a| reach[a] || (self.out_count(a) == 0 && self.in_count(a) == 0))
    }

    pub fn alphabet(&self) -> usize {
        self.alphabet
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn first(&self) -> usize {
        self.first
    }

    pub fn last(&self) -> usize {
        self.last
    }

    pub fn counts(&self) -> &[u64] {
        &self.counts
    }

    pub fn count(&self, a: usize, b: usize) -> u64 {
        self.counts[a * self.alphabet + b]
    }

    pub fn out_count(&self, a: usize) -> u64 {
        (0..self.alphabet).map(|b| self.count(a, b)).sum()
    }

    pub fn in_count(&self, b: usize) -> u64 {
        (0..self.alphabet).map(|a| self.count(a, b)).sum()
    }

    /// Exact `Q(a, b)`.
    pub fn q_exact(&self, a: usize, b: usize) -> Ratio<u64> {
        Ratio::new(self.count(a, b), self.len as u64 - 1)
    }

    pub fn q(&self, a: usize, b: usize) -> f64 {
        self.count(a, b) as f64 / (self.len - 1) as f64
    }

    pub fn pair_dist(&self) -> PairDist {
        let m = (self.len - 1) as f64;
        PairDist::new(self.alphabet, self.counts.iter().map(|&c| c as f64 / m).collect())
            .expect("normalised counts form a distribution")
    }

    /// `H(2|1)_Q` in bits.
    pub fn conditional_entropy(&self) -> f64 {
        let m = (self.len - 1) as f64;
        let mut h = 0.0;
        for a in 0..self.alphabet {
            let row = self.out_count(a) as f64;
            if row == 0.0 {
                continue;
            }
            for b in 0..self.alphabet {
                h += (row / m) * xlog2x_neg(self.count(a, b) as f64 / row);
            }
        }
        h
    }

    /// `D(Q_{2|1} ‖ W)` in bits, or `SupportMismatch`.
    pub fn conditional_kl(&self, w: &[Vec<f64>]) -> Result<f64> {
        let m = (self.len - 1) as f64;
        let mut d = 0.0;
        for a in 0..self.alphabet {
            let row = self.out_count(a) as f64;
            for b in 0..self.alphabet {
                let c = self.count(a, b) as f64;
                if c == 0.0 {
                    continue;
                }
                if w[a][b] <= 0.0 {
                    return Err(Error::SupportMismatch(a, b));
                }
                d += (c / m) * log2((c / row) / w[a][b]);
            }
        }
        Ok(d)
    }
}

/// Partition of `X^n` into second-order classes; each class lists its words
/// lexicographically.
pub fn enumerate_second_order_classes(
    alphabet: usize,
    n: usize,
    cap: usize,
) -> Result<BTreeMap<SecondOrderType, Vec<Word>>> {
    if n < 2 {
        return Err(Error::WordTooShort(n));
    }
    let space = WordSpace::new(alphabet, n);
    let size = space.checked_count("second-order enumeration", cap as u128)?;
    let mut classes: BTreeMap<SecondOrderType, Vec<Word>> = BTreeMap::new();
    for i in 0..size {
        let w = space.word(i);
        let t = SecondOrderType::of_word(alphabet, &w.0)?;
        classes.entry(t).or_default().push(w);
    }
    Ok(classes)
}

/// Upper bound `n^{|X|²}·|X|²` on the number of nonempty classes at length
/// `n`, as `f64` to avoid overflow.
pub fn class_count_bound(alphabet: usize, n: usize) -> f64 {
    let k2 = (alphabet * alphabet) as f64;
    crate::math::pow(n as f64, k2) * k2
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn type_examples() {
        let t = SecondOrderType::of_word(2, &[0, 0, 1]).unwrap();
        assert_eq!(t.q_exact(0, 0), Ratio::new(1, 2));
        assert_eq!(t.q_exact(0, 1), Ratio::new(1, 2));
        assert_eq!((t.first(), t.last()), (0, 1));
        let t = SecondOrderType::of_word(2, &[0, 1, 0, 1]).unwrap();
        assert_eq!(t.q_exact(0, 1), Ratio::new(2, 3));
        assert_eq!(t.q_exact(1, 0), Ratio::new(1, 3));
        let t = SecondOrderType::of_word(1, &[0, 0, 0, 0]).unwrap();
        assert_eq!(t.q_exact(0, 0), Ratio::new(1, 1));
        assert_eq!(SecondOrderType::of_word(2, &[0]), Err(Error::WordTooShort(1)));
    }

    #[test]
    fn from_counts_checks_realisability() {
        let t = SecondOrderType::of_word(3, &[0, 1, 2, 1]).unwrap();
        let back = SecondOrderType::from_counts(3, 0, 1, t.counts().to_vec()).unwrap();
        assert_eq!(back, t);
        assert!(SecondOrderType::from_counts(2, 0, 0, vec![0, 1, 0, 0]).is_err());
        // balanced but disconnected: a loop at 0 and a loop at 1
        assert!(SecondOrderType::from_counts(2, 0, 0, vec![1, 0, 0, 1]).is_err());
    }

    #[test]
    fn class_enumeration() {
        let classes = enumerate_second_order_classes(2, 3, ENUMERATION_CAP).unwrap();
        let total: usize = classes.values().map(Vec::len).sum();
        assert_eq!(total, 8);
        assert!(classes.len() <= 81);
        assert_eq!(enumerate_second_order_classes(1, 5, 100).unwrap().len(), 1);
    }
}
