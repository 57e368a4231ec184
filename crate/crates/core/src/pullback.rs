//! Pullback graphs and hidden-process reductions.
//!
//! For `φ: Z → V(G)` the pullback `φ*(G)` lives on `Z` with
//! `z₁ ≃ z₂ ⟺ φ(z₁) ≃ φ(z₂)`.

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use crate::aep::{markov_aep_bracket, min_subset, SearchMode, SubsetCertificate};
use crate::error::{Error, Result};
use crate::graph::{is_cohomomorphism, Graph};
use crate::markov::MarkovSource;
use crate::prob::Dist;
use crate::refinement::graph_entropy_refinement;
use crate::spectral::{self, SpectralPointId};
use crate::words::WordSpace;

/// Agreement required of the two sides of a spectral-point identity.
pub const IDENTITY_TOL: f64 = 1e-6;
/// Largest block length for the hidden-process cross-check.
pub const HMM_K_CAP: usize = 12;

/// Hidden alphabet, observed graph and the observation map.
#[derive(Clone, Debug, PartialEq)]
pub struct Observation {
    hidden: Vec<String>,
    graph: Graph,
    map: Vec<usize>,
}

impl Observation {
    pub fn new(hidden: Vec<String>, graph: Graph, map: Vec<usize>) -> Result<Self> {
        if hidden.len() != map.len() {
            return Err(Error::InvalidArgument(format!(
                "{} hidden states but {} map entries",
                hidden.len(),
                map.len()
            )));
        }
        if let Some(&v) = map.iter().find(|&&v| v >= graph.n()) {
            return Err(Error::InvalidArgument(format!("map target {v} is not a vertex")));
        }
        // reject duplicate labels early
        Graph::new(hidden.clone())?;
        Ok(Observation { hidden, graph, map })
    }

    /// Hidden states labelled `0..map.len()`.
    pub fn from_map(graph: Graph, map: Vec<usize>) -> Result<Self> {
        let hidden = (0..map.len()).map(|i| format!("{i}")).collect();
        Self::new(hidden, graph, map)
    }

    pub fn hidden(&self) -> &[String] {
        &self.hidden
    }

    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    pub fn map(&self) -> &[usize] {
        &self.map
    }

    pub fn hidden_count(&self) -> usize {
        self.map.len()
    }

    /// `φ₁ × φ₂ : Z₁ × Z₂ → V(G₁ ⊠ G₂)`, pairs indexed `z₁·|Z₂| + z₂`.
    pub fn product(&self, other: &Observation) -> Observation {
        let m = other.graph.n();
        let hidden = self
            .hidden
            .iter()
            .flat_map(|a| other.hidden.iter().map(move |b| format!("{a}{b}")))
            .collect::<Vec<_>>();
        let map: Vec<usize> = self
            .map
            .iter()
            .flat_map(|&x| other.map.iter().map(move |&y| x * m + y))
            .collect();
        let graph = self.graph.strong_product(&other.graph);
        // concatenated labels may collide; fall back to indices
        Observation::new(hidden, graph.clone(), map.clone())
            .unwrap_or_else(|_| Observation::from_map(graph, map).expect("valid map"))
    }

    /// `(φⁿ)_* μ` on observed words, for `mu` on hidden words of length `n`.
    pub fn pushforward_words(&self, n: usize, mu: &Dist) -> Result<Dist> {
        let hidden = WordSpace::new(self.hidden_count(), n);
        let observed = WordSpace::new(self.graph.n(), n);
        let size = hidden.checked_count("hidden word space", usize::MAX as u128)?;
        let target = observed.checked_count("observed word space", usize::MAX as u128)?;
        if mu.len() != size {
            return Err(Error::InvalidDistribution(format!(
                "hidden word law has {} entries, expected {size}",
                mu.len()
            )));
        }
        let map: Vec<usize> = (0..size).map(|i| observed.index(&self.word_image(&hidden.letters(i)))).collect();
        Ok(mu.pushforward(&map, target))
    }

    fn word_image(&self, z: &[usize]) -> Vec<usize> {
        z.iter().map(|&a| self.map[a]).collect()
    }
}

/// `φ*(G)`.
pub fn pullback(obs: &Observation) -> Graph {
    let n = obs.hidden_count();
    let mut edges = Vec::new();
    for a in 0..n {
        for b in a + 1..n {
            if obs.graph.confusable(obs.map[a], obs.map[b]) {
                edges.push((a, b));
            }
        }
    }
    let g = Graph::from_edges(obs.hidden.clone(), &edges).expect("labels validated");
    debug_assert!(is_cohomomorphism(&g, &obs.graph, &obs.map));
    g
}

/// `φ₁*(G₁) ⊠ φ₂*(G₂) = (φ₁ × φ₂)*(G₁ ⊠ G₂)`, compared edge by edge.
pub fn pullback_product_check(obs1: &Observation, obs2: &Observation) -> bool {
    let left = pullback(obs1).strong_product(&pullback(obs2));
    let right = pullback(&obs1.product(obs2));
    left.n() == right.n()
        && (0..left.n()).all(|a| (0..left.n()).all(|b| left.adjacent(a, b) == right.adjacent(a, b)))
}

/// Two values that should coincide, with the tolerance used to compare them.
#[derive(Clone, Debug, PartialEq)]
pub struct IdentityReport {
    pub observed: f64,
    pub hidden: f64,
    pub tolerance: f64,
    /// `tolerance − |observed − hidden|`.
    pub margin: f64,
    pub equal: bool,
}

impl IdentityReport {
    fn new(observed: f64, hidden: f64, tolerance: f64) -> Self {
        let margin = tolerance - (observed - hidden).abs();
        IdentityReport {
            observed,
            hidden,
            tolerance,
            margin,
            equal: margin >= 0.0,
        }
    }
}

/// `f(φ*(G)[T])` against `f(G[φ(T)])`.
pub fn pullback_f_identity(obs: &Observation, t: &[usize], id: SpectralPointId) -> Result<IdentityReport> {
    if t.is_empty() {
        return Err(Error::EmptySubset);
    }
    let mut t = t.to_vec();
    t.sort_unstable();
    t.dedup();
    let hidden = spectral::evaluate(id, &pullback(obs).induced_subgraph(&t)?)?;
    let mut image: Vec<usize> = t.iter().map(|&z| obs.map[z]).collect();
    image.sort_unstable();
    image.dedup();
    let observed = spectral::evaluate(id, &obs.graph.induced_subgraph(&image)?)?;
    Ok(IdentityReport::new(observed, hidden, IDENTITY_TOL))
}

/// `F(G, φ_* P)` against `F(φ*(G), P)`; equal within twice the larger
/// solver gap.
pub fn pullback_refinement_identity(obs: &Observation, p: &Dist) -> Result<IdentityReport> {
    if p.len() != obs.hidden_count() {
        return Err(Error::InvalidDistribution(format!(
            "law has {} entries, expected {}",
            p.len(),
            obs.hidden_count()
        )));
    }
    let hidden = graph_entropy_refinement(&pullback(obs), p)?;
    let observed = graph_entropy_refinement(&obs.graph, &p.pushforward(&obs.map, obs.graph.n()))?;
    let tol = 2.0 * hidden.certified_gap.max(observed.certified_gap) + 1e-9;
    Ok(IdentityReport::new(observed.value, hidden.value, tol))
}

/// Exact minima of `log2 f` over subsets of mass `≥ c` on the observed
/// side `(G, (φⁿ)_* μ)` and the hidden side `(φ*(G), μ)`.
pub fn pullback_min_subset_identity(
    obs: &Observation,
    n: usize,
    mu_n: &Dist,
    c: f64,
    id: SpectralPointId,
) -> Result<(SubsetCertificate, SubsetCertificate)> {
    let pushed = obs.pushforward_words(n, mu_n)?;
    let observed = min_subset(&obs.graph, n, &pushed, c, id, SearchMode::Exact)?;
    let hidden = min_subset(&pullback(obs), n, mu_n, c, id, SearchMode::Exact)?;
    Ok((observed, hidden))
}

/// One block length of the hidden-process cross-check.
#[derive(Clone, Debug, PartialEq)]
pub struct HmmRow {
    pub k: usize,
    /// F-rate bracket of `(φ*(G), μ)`.
    pub frate_lower: f64,
    pub frate_upper: f64,
    /// `H(X_k | X_1..k−1, Z_1)`.
    pub hmm_lower: f64,
    /// `H(X_k | X_1..k−1)`.
    pub hmm_upper: f64,
    pub overlap: bool,
}

#[derive(Clone, Debug, PartialEq)]
pub struct HmmReport {
    pub rows: Vec<HmmRow>,
}

impl HmmReport {
    pub fn all_overlap(&self) -> bool {
        self.rows.iter().all(|r| r.overlap)
    }
}

/// Entropies `H(X_1..k)` and `H(Z_1, X_1..k)` for `k = 0..=k_max` of the
/// observed process `X_i = φ(Z_i)`.
pub fn observed_block_entropies(obs: &Observation, src: &MarkovSource, k_max: usize) -> Result<(Vec<f64>, Vec<f64>)> {
    let z = obs.hidden_count();
    let x = obs.graph.n();
    let pi = src.pi();
    let w = src.w();
    let mut hx = vec![0.0];
    let mut hzx = vec![pi.entropy()];
    // joint law of (Z_1, X_1..k, Z_k), keyed (z1, observed word index, z_k)
    let mut state: Vec<(usize, usize, usize, f64)> = (0..z)
        .filter(|&a| pi.get(a) > 0.0)
        .map(|a| (a, obs.map[a], a, pi.get(a)))
        .collect();
    for k in 1..=k_max {
        if k > 1 {
            let mut next = alloc::collections::BTreeMap::new();
            for &(z1, word, zk, p) in &state {
                for (b, &t) in w[zk].iter().enumerate() {
                    if t > 0.0 {
                        *next.entry((z1, word * x + obs.map[b], b)).or_insert(0.0) += p * t;
                    }
                }
            }
            state = next.into_iter().map(|((a, wd, b), p)| (a, wd, b, p)).collect();
        }
        let mut by_x = alloc::collections::BTreeMap::new();
        let mut by_zx = alloc::collections::BTreeMap::new();
        for &(z1, word, _, p) in &state {
            *by_x.entry(word).or_insert(0.0) += p;
            *by_zx.entry((z1, word)).or_insert(0.0) += p;
        }
        hx.push(entropy_of(by_x.values()));
        hzx.push(entropy_of(by_zx.values()));
    }
    Ok((hx, hzx))
}

fn entropy_of<'a>(ps: impl Iterator<Item = &'a f64>) -> f64 {
    ps.map(|&p| crate::math::xlog2x_neg(p)).sum()
}

/// Compares the F-rate bracket of `(φ*(G), μ)` with the conditional-entropy
/// bracket of the observed process, for `k = 1..=k_max`. `G` must be
/// edgeless.
pub fn hmm_frate_crosscheck(obs: &Observation, src: &MarkovSource, k_max: usize) -> Result<HmmReport> {
    if !obs.graph.is_edgeless() {
        return Err(Error::InvalidArgument("observed graph must be edgeless".into()));
    }
    if src.alphabet() != obs.hidden_count() {
        return Err(Error::InvalidArgument(format!(
            "chain has {} states but {} hidden states are declared",
            src.alphabet(),
            obs.hidden_count()
        )));
    }
    if k_max == 0 || k_max > HMM_K_CAP {
        return Err(Error::InvalidArgument(format!("k_max must lie in 1..={HMM_K_CAP}")));
    }
    let (hx, hzx) = observed_block_entropies(obs, src, k_max)?;
    let g = pullback(obs);
    let mut rows = Vec::with_capacity(k_max);
    for k in 1..=k_max {
        let b = markov_aep_bracket(&g, src, k)?;
        let slack = b.certified_gap / k as f64 + 1e-9;
        let hmm_upper = hx[k] - hx[k - 1];
        let hmm_lower = hzx[k] - hzx[k - 1];
        let overlap = b.lower - slack <= hmm_upper && hmm_lower <= b.upper + slack;
        rows.push(HmmRow {
            k,
            frate_lower: b.lower,
            frate_upper: b.upper,
            hmm_lower,
            hmm_upper,
            overlap,
        });
    }
    Ok(HmmReport { rows })
}

/// Casts a hidden chain `W` on `Z` with random emissions `E(x|z)` as a
/// deterministic observation of the chain on pairs `(z, x)` with
/// `E(x|z) > 0`, moving as `W(z'|z) E(x'|z')`.
pub fn enlarge_alphabet(graph: Graph, w: &[Vec<f64>], emission: &[Vec<f64>]) -> Result<(Observation, MarkovSource)> {
    if emission.len() != w.len() {
        return Err(Error::InvalidArgument("one emission row per hidden state required".into()));
    }
    let mut pairs = Vec::new();
    for (z, row) in emission.iter().enumerate() {
        if row.len() != graph.n() {
            return Err(Error::InvalidStochasticMatrix(format!("emission row {z} has wrong length")));
        }
        let sum: f64 = row.iter().sum();
        if row.iter().any(|&e| !(e >= 0.0)) || (sum - 1.0).abs() > crate::markov::ROW_TOL * row.len() as f64 {
            return Err(Error::InvalidStochasticMatrix(format!("emission row {z} is not a distribution")));
        }
        pairs.extend((0..row.len()).filter(|&x| row[x] > 0.0).map(|x| (z, x)));
    }
    let big: Vec<Vec<f64>> = pairs
        .iter()
        .map(|&(z, _)| pairs.iter().map(|&(z2, x2)| w[z][z2] * emission[z2][x2]).collect())
        .collect();
    let src = MarkovSource::build_chain(big)?;
    let hidden = pairs
        .iter()
        .map(|&(z, x)| format!("{z}:{}", graph.label(x)))
        .collect();
    let map = pairs.iter().map(|&(_, x)| x).collect();
    Ok((Observation::new(hidden, graph, map)?, src))
}
