//! Stationary Markov sources.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use rand_chacha::rand_core::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{cap_check, Error, Result};
use crate::linalg::{lu_solve, Matrix};
use crate::math::{exp2, gcd, xlog2x_neg};
use crate::prob::{Dist, PairDist};
use crate::second_order::SecondOrderType;
use crate::words::{Word, WordSpace};

/// Row sums must be one within this tolerance.
pub const ROW_TOL: f64 = 1e-12;
/// Default cap on `|X|^n` for enumerated marginals.
pub const MARGINAL_CAP: usize = 1 << 20;

/// A stationary Markov chain with transition matrix `W(b|a)` and stationary
/// law `π`, supported on its unique closed communicating class.
#[derive(Clone, Debug, PartialEq)]
pub struct MarkovSource {
    w: Vec<Vec<f64>>,
    pi: Vec<f64>,
    period: usize,
    pair: PairDist,
}

impl MarkovSource {
    /// Validates `w` and computes `π` and the period.
    pub fn build_chain(w: Vec<Vec<f64>>) -> Result<Self> {
        let n = w.len();
        if n == 0 {
            return Err(Error::InvalidStochasticMatrix("empty matrix".into()));
        }
        for (a, row) in w.iter().enumerate() {
            if row.len() != n {
                return Err(Error::InvalidStochasticMatrix(format!("row {a} has {} entries", row.len())));
            }
            if row.iter().any(|&v| !v.is_finite() || v < 0.0) {
                return Err(Error::InvalidStochasticMatrix(format!("row {a} has a negative entry")));
            }
            let s: f64 = row.iter().sum();
            if (s - 1.0).abs() > ROW_TOL {
                return Err(Error::InvalidStochasticMatrix(format!("row {a} sums to {s}")));
            }
        }
        let class = closed_class(&w)?;
        let pi = stationary_on(&w, &class)?;
        let period = period_on(&w, &class);
        let pair = PairDist::from_conditional(&pi, &w);
        Ok(MarkovSource { w, pi, period, pair })
    }

    /// Source with an explicitly given stationary law (used for blocked
    /// chains, whose closed classes need not be unique).
    fn from_parts(w: Vec<Vec<f64>>, pi: Vec<f64>, period: usize) -> Self {
        let pair = PairDist::from_conditional(&pi, &w);
        MarkovSource { w, pi, period, pair }
    }

    /// i.i.d. source: every row of `W` equals `p`.
    pub fn iid(p: &Dist) -> Result<Self> {
        Self::build_chain(vec![p.probs().to_vec(); p.len()])
    }

    pub fn alphabet(&self) -> usize {
        self.w.len()
    }

    pub fn w(&self) -> &[Vec<f64>] {
        &self.w
    }

    pub fn pi(&self) -> Dist {
        Dist::new(self.pi.clone()).expect("stationary law is normalised")
    }

    pub fn period(&self) -> usize {
        self.period
    }

    pub fn pair_dist(&self) -> &PairDist {
        &self.pair
    }

    /// `I(1:2)_P`.
    pub fn mutual_information(&self) -> f64 {
        self.pair.mutual_information()
    }

    /// `Σ_a π(a) H(W(·|a))` in bits per letter.
    pub fn entropy_rate(&self) -> f64 {
        self.pi
            .iter()
            .zip(&self.w)
            .map(|(&p, row)| p * row.iter().map(|&v| xlog2x_neg(v)).sum::<f64>())
            .sum()
    }

    /// `π(x_1) Π W(x_{i+1}|x_i)`.
    pub fn string_probability(&self, x: &[usize]) -> f64 {
        let Some(&first) = x.first() else { return 1.0 };
        x.windows(2).fold(self.pi[first], |acc, t| acc * self.w[t[0]][t[1]])
    }

    /// The same probability through the second-order type `Q` of `x`:
    /// `π(x_1) 2^{−(n−1)[H(2|1)_Q + D(Q_{2|1} ‖ W)]}`.
    pub fn string_probability_type_form(&self, x: &[usize]) -> f64 {
        if x.len() < 2 {
            return self.string_probability(x);
        }
        let t = SecondOrderType::of_word(self.alphabet(), x).expect("length checked");
        match t.conditional_kl(&self.w) {
            Ok(d) => {
                let m = (x.len() - 1) as f64;
                self.pi[x[0]] * exp2(-m * (t.conditional_entropy() + d))
            }
            Err(_) => 0.0,
        }
    }

    /// Law of `X_1 … X_n` over lexicographically indexed words.
    pub fn marginal(&self, n: usize) -> Result<Dist> {
        self.marginal_capped(n, MARGINAL_CAP)
    }

    pub fn marginal_capped(&self, n: usize, cap: usize) -> Result<Dist> {
        if n == 0 {
            return Err(Error::InvalidArgument("marginal length must be >= 1".into()));
        }
        let k = self.alphabet();
        let size = WordSpace::new(k, n).checked_count("marginal word count", cap as u128)?;
        // extend one letter at a time; index of (w, b) is w * k + b
        let mut probs = self.pi.clone();
        for _ in 1..n {
            let mut next = Vec::with_capacity(probs.len() * k);
            for (i, &p) in probs.iter().enumerate() {
                let last = i % k;
                for b in 0..k {
                    next.push(p * self.w[last][b]);
                }
            }
            probs = next;
        }
        debug_assert_eq!(probs.len(), size);
        Dist::new(probs)
    }

    /// The chain of non-overlapping blocks of length `k`.
    pub fn block(&self, k: usize) -> Result<BlockSource> {
        if k == 0 {
            return Err(Error::InvalidArgument("block length must be >= 1".into()));
        }
        if k == 1 {
            return Ok(BlockSource { k, source: self.clone() });
        }
        let a = self.alphabet();
        let space = WordSpace::new(a, k);
        let size = space.checked_count("block alphabet", BLOCK_CAP as u128)?;
        cap_check("block pair count", (size as u128) * (size as u128), MARGINAL_CAP as u128)?;
        if gcd(k as u64, self.period as u64) > 1 {
            log::warn!(
                "block length {k} is not coprime to the period {}; the blocked chain is reducible",
                self.period
            );
        }
        let pi = self.marginal(k)?.probs().to_vec();
        let words: Vec<Vec<usize>> = (0..size).map(|i| space.letters(i)).collect();
        let mut w = vec![vec![0.0; size]; size];
        for (x, row) in w.iter_mut().enumerate() {
            let last = words[x][k - 1];
            for (y, v) in row.iter_mut().enumerate() {
                let yw = &words[y];
                let mut p = self.w[last][yw[0]];
                for t in yw.windows(2) {
                    p *= self.w[t[0]][t[1]];
                }
                *v = p;
            }
        }
        let period = self.period / gcd(self.period as u64, k as u64) as usize;
        Ok(BlockSource {
            k,
            source: MarkovSource::from_parts(w, pi, period),
        })
    }

    /// Word of length `n` drawn from `μ_{1..n}`.
    pub fn sample(&self, n: usize, seed: u64) -> Word {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let start = draw(&self.pi, &mut rng);
        self.walk(start, n, &mut rng)
    }

    /// Word of length `n` started at `start` instead of from `π`.
    pub fn sample_from(&self, start: usize, n: usize, seed: u64) -> Word {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        self.walk(start, n, &mut rng)
    }

    fn walk(&self, start: usize, n: usize, rng: &mut ChaCha8Rng) -> Word {
        let mut x = Vec::with_capacity(n);
        if n == 0 {
            return Word(x);
        }
        x.push(start);
        while x.len() < n {
            let last = x[x.len() - 1];
            x.push(draw(&self.w[last], rng));
        }
        Word(x)
    }
}

/// Cap on `|X|^k` for blocked chains.
pub const BLOCK_CAP: usize = 1024;

fn draw(p: &[f64], rng: &mut ChaCha8Rng) -> usize {
    let u = (rng.next_u64() >> 11) as f64 / (1u64 << 53) as f64;
    let mut acc = 0.0;
    let mut last = 0;
    for (i, &v) in p.iter().enumerate() {
        if v <= 0.0 {
            continue;
        }
        acc += v;
        last = i;
        if u < acc {
            return i;
        }
    }
    last
}

/// Blocks of `k` consecutive letters of a base source.
#[derive(Clone, Debug)]
pub struct BlockSource {
    pub k: usize,
    /// Chain over `X^k` (lexicographic indices).
    pub source: MarkovSource,
}

/// The unique closed communicating class, ascending.
fn closed_class(w: &[Vec<f64>]) -> Result<Vec<usize>> {
    let n = w.len();
    let comp = tarjan(w);
    let k = comp.iter().max().map_or(0, |m| m + 1);
    let mut closed = vec![true; k];
    for a in 0..n {
        for b in 0..n {
            if w[a][b] > 0.0 && comp[a] != comp[b] {
                closed[comp[a]] = false;
            }
        }
    }
    let closed_ids: Vec<usize> = (0..k).filter(|&c| closed[c]).collect();
    if closed_ids.len() != 1 {
        return Err(Error::NotIrreducible(closed_ids.len()));
    }
    Ok((0..n).filter(|&a| comp[a] == closed_ids[0]).collect())
}

/// Strongly connected component id of every state.
fn tarjan(w: &[Vec<f64>]) -> Vec<usize> {
    struct State {
        index: Vec<usize>,
        low: Vec<usize>,
        on_stack: Vec<bool>,
        stack: Vec<usize>,
        comp: Vec<usize>,
        next_index: usize,
        next_comp: usize,
    }
    fn visit(v: usize, w: &[Vec<f64>], s: &mut State) {
        s.index[v] = s.next_index;
        s.low[v] = s.next_index;
        s.next_index += 1;
        s.stack.push(v);
        s.on_stack[v] = true;
        for u in 0..w.len() {
            if w[v][u] <= 0.0 {
                continue;
            }
            if s.index[u] == usize::MAX {
                visit(u, w, s);
                s.low[v] = s.low[v].min(s.low[u]);
            } else if s.on_stack[u] {
                s.low[v] = s.low[v].min(s.index[u]);
            }
        }
        if s.low[v] == s.index[v] {
            while let Some(u) = s.stack.pop() {
                s.on_stack[u] = false;
                s.comp[u] = s.next_comp;
                if u == v {
                    break;
                }
            }
            s.next_comp += 1;
        }
    }
    let n = w.len();
    let mut s = State {
        index: vec![usize::MAX; n],
        low: vec![0; n],
        on_stack: vec![false; n],
        stack: Vec::new(),
        comp: vec![0; n],
        next_index: 0,
        next_comp: 0,
    };
    for v in 0..n {
        if s.index[v] == usize::MAX {
            visit(v, w, &mut s);
        }
    }
    s.comp
}

/// Solves `π W = π`, `Σ π = 1` on the class; zero elsewhere.
fn stationary_on(w: &[Vec<f64>], class: &[usize]) -> Result<Vec<f64>> {
    let m = class.len();
    // (Wᵀ − I) π = 0 with the last equation replaced by normalisation
    let a = Matrix::from_fn(m, |i, j| {
        if i == m - 1 {
            1.0
        } else {
            w[class[j]][class[i]] - if i == j { 1.0 } else { 0.0 }
        }
    });
    let mut rhs = vec![0.0; m];
    rhs[m - 1] = 1.0;
    let sol = lu_solve(&a, &rhs)
        .ok_or_else(|| Error::InvalidStochasticMatrix("stationary system is singular".into()))?;
    let mut pi = vec![0.0; w.len()];
    for (i, &s) in class.iter().enumerate() {
        pi[s] = sol[i].max(0.0);
    }
    let total: f64 = pi.iter().sum();
    for v in &mut pi {
        *v /= total;
    }
    Ok(pi)
}

/// gcd of `level(u) + 1 − level(v)` over the edges of the class, with
/// levels from a breadth-first search.
fn period_on(w: &[Vec<f64>], class: &[usize]) -> usize {
    let n = w.len();
    let mut in_class = vec![false; n];
    for &c in class {
        in_class[c] = true;
    }
    let mut level = vec![usize::MAX; n];
    level[class[0]] = 0;
    let mut queue = alloc::collections::VecDeque::from([class[0]]);
    while let Some(u) = queue.pop_front() {
        for v in 0..n {
            if in_class[v] && w[u][v] > 0.0 && level[v] == usize::MAX {
                level[v] = level[u] + 1;
                queue.push_back(v);
            }
        }
    }
    let mut g = 0u64;
    for &u in class {
        for &v in class {
            if w[u][v] > 0.0 {
                let d = (level[u] as i64 + 1 - level[v] as i64).unsigned_abs();
                g = gcd(g, d);
            }
        }
    }
    g.max(1) as usize
}
