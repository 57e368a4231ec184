//! Finite distributions, entropies, first-order types and the η function.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::math::{binary_entropy, log2, xlog2x_neg};
use crate::words::{Word, WordSpace};

/// Inputs must sum to one within this tolerance; they are then renormalised.
pub const NORMALIZATION_TOL: f64 = 1e-9;

/// Probability vector on `0..len`.
#[derive(Clone, Debug, PartialEq)]
pub struct Dist {
    probs: Vec<f64>,
}

fn validate(probs: &[f64], what: &str) -> Result<f64> {
    if probs.is_empty() {
        return Err(Error::InvalidDistribution(format!("{what} is empty")));
    }
    for (i, &p) in probs.iter().enumerate() {
        if !p.is_finite() || p < 0.0 {
            return Err(Error::InvalidDistribution(format!("{what}[{i}] = {p}")));
        }
    }
    let s: f64 = probs.iter().sum();
    if (s - 1.0).abs() > NORMALIZATION_TOL {
        return Err(Error::InvalidDistribution(format!("{what} sums to {s}")));
    }
    Ok(s)
}

impl Dist {
    pub fn new(probs: Vec<f64>) -> Result<Self> {
        let s = validate(&probs, "distribution")?;
        Ok(Dist {
            probs: probs.into_iter().map(|p| p / s).collect(),
        })
    }

    /// Normalises nonnegative weights.
    pub fn from_weights(weights: Vec<f64>) -> Result<Self> {
        let s: f64 = weights.iter().sum();
        if !(s > 0.0) || weights.iter().any(|w| !w.is_finite() || *w < 0.0) {
            return Err(Error::InvalidDistribution("weights must be nonnegative with positive sum".into()));
        }
        Ok(Dist {
            probs: weights.into_iter().map(|w| w / s).collect(),
        })
    }

    pub fn uniform(n: usize) -> Self {
        Dist {
            probs: vec![1.0 / n as f64; n],
        }
    }

    pub fn point(n: usize, at: usize) -> Self {
        let mut probs = vec![0.0; n];
        probs[at] = 1.0;
        Dist { probs }
    }

    pub fn len(&self) -> usize {
        self.probs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.probs.is_empty()
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    pub fn get(&self, i: usize) -> f64 {
        self.probs[i]
    }

    pub fn support(&self) -> Vec<usize> {
        (0..self.len()).filter(|&i| self.probs[i] > 0.0).collect()
    }

    pub fn mass(&self, set: &[usize]) -> f64 {
        set.iter().map(|&i| self.probs[i]).sum()
    }

    pub fn entropy(&self) -> f64 {
        entropy(self)
    }

    /// Law of `map(X)` on `0..m`.
    pub fn pushforward(&self, map: &[usize], m: usize) -> Dist {
        let mut probs = vec![0.0; m];
        for (i, &p) in self.probs.iter().enumerate() {
            probs[map[i]] += p;
        }
        Dist { probs }
    }

    /// Product law; index `(a, b)` is `a * other.len() + b`.
    pub fn product(&self, other: &Dist) -> Dist {
        let mut probs = Vec::with_capacity(self.len() * other.len());
        for &p in &self.probs {
            for &q in &other.probs {
                probs.push(p * q);
            }
        }
        Dist { probs }
    }

    /// `λ self + (1 - λ) other`.
    pub fn mix(&self, other: &Dist, lambda: f64) -> Dist {
        Dist {
            probs: self
                .probs
                .iter()
                .zip(&other.probs)
                .map(|(p, q)| lambda * p + (1.0 - lambda) * q)
                .collect(),
        }
    }

    /// `‖p − q‖₁`.
    pub fn l1(&self, other: &Dist) -> f64 {
        self.probs.iter().zip(&other.probs).map(|(p, q)| (p - q).abs()).sum()
    }

    /// Total variation, half the ℓ₁ distance.
    pub fn total_variation(&self, other: &Dist) -> f64 {
        0.5 * self.l1(other)
    }

    /// `i.i.d.` law of `n` draws over lexicographically indexed words.
    pub fn iid_power(&self, n: usize, cap: usize) -> Result<Dist> {
        let space = WordSpace::new(self.len(), n);
        let size = space.checked_count("i.i.d. word count", cap as u128)?;
        let probs = (0..size)
            .map(|i| space.letters(i).iter().map(|&a| self.probs[a]).product())
            .collect();
        Ok(Dist { probs })
    }
}

/// Distribution on ordered pairs `X × X`, stored row-major.
#[derive(Clone, Debug, PartialEq)]
pub struct PairDist {
    n: usize,
    probs: Vec<f64>,
}

impl PairDist {
    pub fn new(n: usize, probs: Vec<f64>) -> Result<Self> {
        if probs.len() != n * n {
            return Err(Error::InvalidDistribution(format!(
                "pair distribution needs {} entries, got {}",
                n * n,
                probs.len()
            )));
        }
        let s = validate(&probs, "pair distribution")?;
        Ok(PairDist {
            n,
            probs: probs.into_iter().map(|p| p / s).collect(),
        })
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let n = rows.len();
        if rows.iter().any(|r| r.len() != n) {
            return Err(Error::InvalidDistribution("pair distribution must be square".into()));
        }
        Self::new(n, rows.concat())
    }

    /// `P(a, b) = p1(a) W(b|a)`.
    pub fn from_conditional(p1: &[f64], w: &[Vec<f64>]) -> Self {
        let n = p1.len();
        let mut probs = Vec::with_capacity(n * n);
        for a in 0..n {
            for b in 0..n {
                probs.push(p1[a] * w[a][b]);
            }
        }
        PairDist { n, probs }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn get(&self, a: usize, b: usize) -> f64 {
        self.probs[a * self.n + b]
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    pub fn flatten(&self) -> Dist {
        Dist {
            probs: self.probs.clone(),
        }
    }

    pub fn marginal1(&self) -> Dist {
        Dist {
            probs: (0..self.n)
                .map(|a| (0..self.n).map(|b| self.get(a, b)).sum())
                .collect(),
        }
    }

    pub fn marginal2(&self) -> Dist {
        Dist {
            probs: (0..self.n)
                .map(|b| (0..self.n).map(|a| self.get(a, b)).sum())
                .collect(),
        }
    }

    pub fn entropy(&self) -> f64 {
        self.probs.iter().map(|&p| xlog2x_neg(p)).sum()
    }

    pub fn mutual_information(&self) -> f64 {
        mutual_information(self)
    }

    /// `H(2|1) = H(P) − H(P_1)`.
    pub fn conditional_entropy(&self) -> f64 {
        self.entropy() - self.marginal1().entropy()
    }
}

/// Shannon entropy in bits, clamped at zero against rounding (a pushed
/// forward point mass can carry `1 + ε`).
pub fn entropy(p: &Dist) -> f64 {
    p.probs.iter().map(|&x| xlog2x_neg(x)).sum::<f64>().max(0.0)
}

/// `I(1:2) = H(P_1) + H(P_2) − H(P)`, clamped at zero against rounding.
pub fn mutual_information(p: &PairDist) -> f64 {
    (p.marginal1().entropy() + p.marginal2().entropy() - p.entropy()).max(0.0)
}

/// `D(Q_{2|1} ‖ W | Q_1)` in bits.
pub fn conditional_kl(q: &PairDist, w: &[Vec<f64>]) -> Result<f64> {
    let n = q.n();
    let q1 = q.marginal1();
    let mut d = 0.0;
    for a in 0..n {
        if q1.get(a) <= 0.0 {
            continue;
        }
        for b in 0..n {
            let qab = q.get(a, b);
            if qab <= 0.0 {
                continue;
            }
            if w[a][b] <= 0.0 {
                return Err(Error::SupportMismatch(a, b));
            }
            d += qab * log2(qab / (q1.get(a) * w[a][b]));
        }
    }
    Ok(d.max(0.0))
}

/// `η(t) = (1 + t) h(1 / (1 + t))` on `[0, 1]`.
pub fn eta(t: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&t) {
        return Err(Error::DomainError(t));
    }
    Ok((1.0 + t) * binary_entropy(1.0 / (1.0 + t)))
}

/// Rounds `p` to an `n`-type by largest remainder; ties go to the lower
/// index. Returns the letter counts, which sum to `n`.
pub fn round_to_type(p: &Dist, n: usize) -> Vec<usize> {
    let scaled: Vec<f64> = p.probs.iter().map(|&x| x * n as f64).collect();
    let mut counts: Vec<usize> = scaled.iter().map(|&x| crate::math::floor(x) as usize).collect();
    let assigned: usize = counts.iter().sum();
    let mut order: Vec<usize> = (0..p.len()).collect();
    // stable sort keeps index order among equal remainders
    order.sort_by(|&i, &j| {
        let ri = scaled[i] - counts[i] as f64;
        let rj = scaled[j] - counts[j] as f64;
        rj.partial_cmp(&ri).unwrap_or(core::cmp::Ordering::Equal)
    });
    for &i in order.iter().take(n.saturating_sub(assigned)) {
        counts[i] += 1;
    }
    counts
}

/// Counts as a distribution.
pub fn type_dist(counts: &[usize]) -> Dist {
    let n: usize = counts.iter().sum();
    Dist {
        probs: counts.iter().map(|&c| c as f64 / n as f64).collect(),
    }
}

/// Counts of an `n`-type given as a distribution; fails unless every
/// probability is a multiple of `1/n` (within 1e-9).
pub fn type_counts(p: &Dist, n: usize) -> Result<Vec<usize>> {
    let mut counts = Vec::with_capacity(p.len());
    for &x in &p.probs {
        let c = x * n as f64;
        let r = crate::math::floor(c + 0.5);
        if (c - r).abs() > 1e-9 {
            return Err(Error::InvalidArgument(format!("{x} is not a multiple of 1/{n}")));
        }
        counts.push(r as usize);
    }
    if counts.iter().sum::<usize>() != n {
        return Err(Error::InvalidArgument("type counts do not sum to n".into()));
    }
    Ok(counts)
}

/// Multinomial coefficient `n! / Π c_i!` as `u128`, `None` on overflow.
pub fn multinomial(counts: &[usize]) -> Option<u128> {
    let mut acc: u128 = 1;
    let mut total: u128 = 0;
    for &c in counts {
        for k in 1..=c as u128 {
            total += 1;
            acc = acc.checked_mul(total)? / k;
        }
    }
    Some(acc)
}

/// Default cap on the size of an enumerated type class.
pub const TYPE_CLASS_CAP: usize = 1 << 20;

/// All words whose letter counts equal `counts`, in lexicographic order.
pub fn type_class(counts: &[usize], cap: usize) -> Result<Vec<Word>> {
    let size = multinomial(counts).unwrap_or(u128::MAX);
    crate::error::cap_check("type class size", size, cap as u128)?;
    let n: usize = counts.iter().sum();
    let mut out = Vec::with_capacity(size as usize);
    let mut left = counts.to_vec();
    let mut cur = Vec::with_capacity(n);
    fn rec(left: &mut [usize], cur: &mut Vec<usize>, n: usize, out: &mut Vec<Word>) {
        if cur.len() == n {
            out.push(Word(cur.clone()));
            return;
        }
        for a in 0..left.len() {
            if left[a] > 0 {
                left[a] -= 1;
                cur.push(a);
                rec(left, cur, n, out);
                cur.pop();
                left[a] += 1;
            }
        }
    }
    rec(&mut left, &mut cur, n, &mut out);
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn entropy_examples() {
        assert_eq!(Dist::point(3, 1).entropy(), 0.0);
        assert!((Dist::uniform(4).entropy() - 2.0).abs() < 1e-15);
        let p = Dist::new(vec![0.3, 0.7]).unwrap();
        let direct = -0.3 * libm::log2(0.3) - 0.7 * libm::log2(0.7);
        assert!((p.entropy() - direct).abs() < 1e-15);
        assert!((p.entropy() - 0.881_290_899_230_291_8).abs() < 1e-12);
    }

    #[test]
    fn mutual_information_examples() {
        let a = Dist::new(vec![0.2, 0.8]).unwrap();
        let b = Dist::new(vec![0.6, 0.4]).unwrap();
        let prod = PairDist::new(2, a.product(&b).probs().to_vec()).unwrap();
        assert!(prod.mutual_information() < 1e-12);
        let diag = PairDist::new(2, vec![0.5, 0.0, 0.0, 0.5]).unwrap();
        assert!((diag.mutual_information() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn conditional_kl_examples() {
        let w = vec![vec![0.5, 0.5], vec![0.5, 0.5]];
        let q = PairDist::new(2, vec![0.5, 0.0, 0.0, 0.5]).unwrap();
        assert!((conditional_kl(&q, &w).unwrap() - 1.0).abs() < 1e-12);
        let qw = PairDist::from_conditional(&[0.5, 0.5], &w);
        assert!(conditional_kl(&qw, &w).unwrap().abs() < 1e-15);
        let w2 = vec![vec![1.0, 0.0], vec![0.5, 0.5]];
        let bad = PairDist::new(2, vec![0.25, 0.25, 0.25, 0.25]).unwrap();
        assert_eq!(conditional_kl(&bad, &w2), Err(Error::SupportMismatch(0, 1)));
    }

    #[test]
    fn eta_examples() {
        assert_eq!(eta(0.0).unwrap(), 0.0);
        assert!((eta(1.0).unwrap() - 2.0).abs() < 1e-15);
        let h34 = -0.75 * libm::log2(0.75) - 0.25 * libm::log2(0.25);
        assert!((eta(1.0 / 3.0).unwrap() - 4.0 / 3.0 * h34).abs() < 1e-14);
        assert!((eta(1.0 / 3.0).unwrap() - 1.081_70).abs() < 1e-5);
        assert!(eta(1.5).is_err() && eta(-0.1).is_err());
    }

    #[test]
    fn type_rounding_and_classes() {
        assert_eq!(round_to_type(&Dist::uniform(2), 3), vec![2, 1]);
        assert_eq!(round_to_type(&Dist::uniform(5), 4), vec![1, 1, 1, 1, 0]);
        let c = type_class(&[1, 1], 100).unwrap();
        assert_eq!(c, vec![Word(vec![0, 1]), Word(vec![1, 0])]);
        assert_eq!(type_class(&[1, 2], 100).unwrap().len(), 3);
        assert_eq!(multinomial(&[2, 2, 2, 1, 1]), Some(5040));
        assert!(type_class(&[10, 10], 1000).is_err());
    }

    #[test]
    fn rejects_bad_input() {
        assert!(Dist::new(vec![0.5, 0.6]).is_err());
        assert!(Dist::new(vec![-0.1, 1.1]).is_err());
        assert!(PairDist::new(2, vec![1.0]).is_err());
    }
}
