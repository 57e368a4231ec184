//! F-rate brackets and typical-subset minimisation.
//!
//! For a stationary source `μ` and a spectral point `f`, the quantity
//!
//! ```text
//! (1/n) min { log2 f(G^{⊠n}[S]) : S ⊆ V(G)^n, μ_{1..n}(S) ≥ c }
//! ```
//!
//! has a limit independent of `c` (the generalised equipartition property).
//! For Markov sources that limit is the F-rate, bracketed for every block
//! length `k` by `[a_k/k − I(1:2)/k, a_k/k]` with
//! `a_k = F(G^{⊠k}, μ_{1..k})`.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::vec;
use alloc::vec::Vec;

use crate::cliques::{max_independent_set, DEFAULT_CLIQUE_CAP};
use crate::error::{cap_check, Error, Result};
use crate::graph::Graph;
use crate::markov::MarkovSource;
use crate::math::log2;
use crate::prob::Dist;
use crate::refinement::{induced_subgraph_lower_bound, refinement_on_product, RefinementValue};
use crate::second_order::SecondOrderType;
use crate::spectral::{self, SpectralPointId};
use crate::words::{Word, WordSpace};

/// Slack on the mass constraint.
pub const MASS_TOL: f64 = 1e-12;
/// Ground-set cap for exact subset search.
pub const EXACT_GROUND_CAP: usize = 18;

#[derive(Clone, Debug, PartialEq)]
pub struct FRateBracket {
    pub k: usize,
    /// `(1/k) F(G^{⊠k}, μ_{1..k})`.
    pub upper: f64,
    /// `upper − I(1:2)_P / k`.
    pub lower: f64,
    pub gap: f64,
    /// Solver gap of the inner refinement (bits, not divided by `k`).
    pub certified_gap: f64,
}

/// `a_k = F(G^{⊠k}, μ_{1..k})`.
pub fn block_refinement(g: &Graph, src: &MarkovSource, k: usize) -> Result<RefinementValue> {
    check_alphabet(g, src)?;
    let mu = src.marginal(k)?;
    refinement_on_product(&vec![g.clone(); k], &mu)
}

fn check_alphabet(g: &Graph, src: &MarkovSource) -> Result<()> {
    if g.n() != src.alphabet() {
        return Err(Error::InvalidArgument(alloc::format!(
            "graph has {} letters but the chain has {} states",
            g.n(),
            src.alphabet()
        )));
    }
    Ok(())
}

/// `a_k / k` for `k = 1..=k_max`.
pub fn frate_upper_sequence(g: &Graph, src: &MarkovSource, k_max: usize) -> Result<Vec<f64>> {
    (1..=k_max)
        .map(|k| Ok(block_refinement(g, src, k)?.value / k as f64))
        .collect()
}

/// `H̄(μ) − (H(μ_{1..k}) − a_k) / k` for `k = 1..=k_max`.
pub fn frate_lower_sequence(g: &Graph, src: &MarkovSource, k_max: usize) -> Result<Vec<f64>> {
    let rate = src.entropy_rate();
    (1..=k_max)
        .map(|k| {
            let h = src.marginal(k)?.entropy();
            let a = block_refinement(g, src, k)?.value;
            Ok(rate - (h - a) / k as f64)
        })
        .collect()
}

pub fn markov_aep_bracket(g: &Graph, src: &MarkovSource, k: usize) -> Result<FRateBracket> {
    if k == 0 {
        return Err(Error::InvalidArgument("block length must be >= 1".into()));
    }
    let a = block_refinement(g, src, k)?;
    let upper = a.value / k as f64;
    let gap = src.mutual_information() / k as f64;
    Ok(FRateBracket {
        k,
        upper,
        lower: upper - gap,
        gap,
        certified_gap: a.certified_gap,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SearchMode {
    Exact,
    Heuristic,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum CertificateKind {
    /// True minimiser.
    ExactMin,
    /// Feasible subset; its value bounds the minimum from above.
    HeuristicUpper,
    /// Analytic bound without a subset.
    AnalyticLower,
}

impl CertificateKind {
    pub fn name(self) -> &'static str {
        match self {
            CertificateKind::ExactMin => "exact",
            CertificateKind::HeuristicUpper => "heuristic-upper",
            CertificateKind::AnalyticLower => "analytic-lower",
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SubsetCertificate {
    /// Word indices (lexicographic in `V^n`), ascending.
    pub subset: Vec<usize>,
    pub mass: f64,
    pub f_value: f64,
    pub log2_f: f64,
    pub kind: CertificateKind,
}

/// `f(G^{⊠n}[S])` for `S` given as word indices.
pub fn subset_f(g: &Graph, n: usize, subset: &[usize], id: SpectralPointId) -> Result<f64> {
    if subset.is_empty() {
        return Err(Error::EmptySubset);
    }
    let space = WordSpace::new(g.n(), n);
    if let Some(ids) = g.cluster_ids() {
        let tuples: BTreeSet<Vec<usize>> = subset
            .iter()
            .map(|&w| space.letters(w).into_iter().map(|x| ids[x]).collect())
            .collect();
        return Ok(tuples.len() as f64);
    }
    let words: Vec<Word> = subset.iter().map(|&w| space.word(w)).collect();
    if id == SpectralPointId::FracCliqueCover && words.len() > DEFAULT_CLIQUE_CAP {
        let cliques = product_cliques_on(g, &words)?;
        return Ok(spectral::frac_clique_cover_from_cliques(words.len(), &cliques)?.value);
    }
    spectral::evaluate(id, &g.induced_on_words(&words))
}

/// Maximal cliques of `G^{⊠n}[S]`: the maximal sets among `S ∩ ΠC_i` over
/// tuples of maximal cliques `C_i` of `G`.
fn product_cliques_on(g: &Graph, words: &[Word]) -> Result<Vec<Vec<usize>>> {
    let base = crate::cliques::maximal_cliques(g)?;
    let n = words.first().map_or(0, Word::len);
    let tuples = (base.len() as u128).checked_pow(n as u32).unwrap_or(u128::MAX);
    cap_check("clique tuple count", tuples, crate::refinement::TUPLE_CAP as u128)?;
    let member: Vec<Vec<bool>> = base
        .iter()
        .map(|c| (0..g.n()).map(|v| c.contains(&v)).collect())
        .collect();
    // group words per tuple by filtering coordinate by coordinate
    let mut sets: BTreeSet<Vec<usize>> = BTreeSet::new();
    let mut stack: Vec<(usize, Vec<usize>)> = vec![(0, (0..words.len()).collect())];
    while let Some((pos, alive)) = stack.pop() {
        if alive.is_empty() {
            continue;
        }
        if pos == n {
            sets.insert(alive);
            continue;
        }
        for m in &member {
            let next: Vec<usize> = alive.iter().copied().filter(|&i| m[words[i].0[pos]]).collect();
            stack.push((pos + 1, next));
        }
    }
    let sets: Vec<Vec<usize>> = sets.into_iter().collect();
    let bits: Vec<crate::bitset::Bitset> = sets
        .iter()
        .map(|s| crate::bitset::Bitset::from_indices(words.len(), s.iter().copied()))
        .collect();
    Ok((0..sets.len())
        .filter(|&i| !(0..sets.len()).any(|j| j != i && sets[j].len() > sets[i].len() && bits[i].is_subset(&bits[j])))
        .map(|i| sets[i].clone())
        .collect())
}

/// Minimises `log2 f(G^{⊠n}[S])` over subsets of mass at least `c`.
pub fn min_subset(
    g: &Graph,
    n: usize,
    mu_n: &Dist,
    c: f64,
    id: SpectralPointId,
    mode: SearchMode,
) -> Result<SubsetCertificate> {
    if !(c > 0.0 && c <= 1.0) {
        return Err(Error::InvalidArgument(alloc::format!("mass threshold {c} outside (0, 1]")));
    }
    let space = WordSpace::new(g.n(), n);
    let size = space.checked_count("word space", usize::MAX as u128)?;
    if mu_n.len() != size {
        return Err(Error::InvalidDistribution(alloc::format!(
            "word distribution has {} entries, expected {size}",
            mu_n.len()
        )));
    }
    let mut ground = mu_n.support();
    let total = mu_n.mass(&ground);
    if total < c - MASS_TOL {
        return Err(Error::InfeasibleMass {
            requested: c,
            available: total,
        });
    }
    // descending probability, lexicographic on ties
    ground.sort_by(|&a, &b| mu_n.get(b).total_cmp(&mu_n.get(a)).then(a.cmp(&b)));
    if let Some(ids) = g.cluster_ids() {
        return Ok(cluster_minimum(&space, &ids, mu_n, &ground, c));
    }
    match mode {
        SearchMode::Exact => exact_minimum(g, n, mu_n, &ground, c, id),
        SearchMode::Heuristic => heuristic_minimum(g, n, mu_n, &ground, c, id),
    }
}

fn certificate(subset: Vec<usize>, mu: &Dist, f: f64, kind: CertificateKind) -> SubsetCertificate {
    let mut subset = subset;
    subset.sort_unstable();
    SubsetCertificate {
        mass: mu.mass(&subset),
        subset,
        f_value: f,
        log2_f: log2(f),
        kind,
    }
}

/// On cluster graphs `f(S)` is the number of cluster tuples hit, so whole
/// tuples are taken in order of decreasing mass.
fn cluster_minimum(space: &WordSpace, ids: &[usize], mu: &Dist, ground: &[usize], c: f64) -> SubsetCertificate {
    let mut groups: BTreeMap<Vec<usize>, (f64, Vec<usize>)> = BTreeMap::new();
    for &w in ground {
        let key: Vec<usize> = space.letters(w).into_iter().map(|x| ids[x]).collect();
        let e = groups.entry(key).or_insert((0.0, Vec::new()));
        e.0 += mu.get(w);
        e.1.push(w);
    }
    let mut order: Vec<(f64, Vec<usize>)> = groups.into_values().collect();
    order.sort_by(|a, b| b.0.total_cmp(&a.0).then(a.1[0].cmp(&b.1[0])));
    let mut subset = Vec::new();
    let mut mass = 0.0;
    let mut count = 0;
    for (m, words) in order {
        if mass >= c - MASS_TOL {
            break;
        }
        mass += m;
        count += 1;
        subset.extend(words);
    }
    certificate(subset, mu, count as f64, CertificateKind::ExactMin)
}

fn exact_minimum(
    g: &Graph,
    n: usize,
    mu: &Dist,
    ground: &[usize],
    c: f64,
    id: SpectralPointId,
) -> Result<SubsetCertificate> {
    cap_check("exact subset search ground set", ground.len() as u128, EXACT_GROUND_CAP as u128)?;
    let space = WordSpace::new(g.n(), n);
    let words: Vec<Word> = ground.iter().map(|&w| space.word(w)).collect();
    let full = g.induced_on_words(&words);
    let probs: Vec<f64> = ground.iter().map(|&w| mu.get(w)).collect();
    let mut suffix = vec![0.0; ground.len() + 1];
    for i in (0..ground.len()).rev() {
        suffix[i] = suffix[i + 1] + probs[i];
    }
    struct Search<'a> {
        full: &'a Graph,
        probs: &'a [f64],
        suffix: &'a [f64],
        c: f64,
        id: SpectralPointId,
        best: (f64, u32),
        memo: BTreeMap<u32, f64>,
    }
    impl Search<'_> {
        fn members(mask: u32) -> Vec<usize> {
            (0..32).filter(|&i| mask >> i & 1 == 1).collect()
        }
        fn f(&mut self, mask: u32) -> Result<f64> {
            if let Some(&v) = self.memo.get(&mask) {
                return Ok(v);
            }
            let sub = self.full.induced_subgraph(&Self::members(mask))?;
            let v = spectral::evaluate(self.id, &sub)?;
            self.memo.insert(mask, v);
            Ok(v)
        }
        fn lower(&self, mask: u32) -> Result<f64> {
            if mask == 0 {
                return Ok(0.0);
            }
            let sub = self.full.induced_subgraph(&Self::members(mask))?;
            Ok(max_independent_set(&sub)?.len() as f64)
        }
        fn rec(&mut self, i: usize, mask: u32, mass: f64) -> Result<()> {
            if mass >= self.c - MASS_TOL {
                let v = self.f(mask)?;
                if v < self.best.0 - 1e-9 {
                    self.best = (v, mask);
                }
                return Ok(());
            }
            if i == self.probs.len() || mass + self.suffix[i] < self.c - MASS_TOL {
                return Ok(());
            }
            // f is monotone under inclusion and at least α
            if self.lower(mask)? >= self.best.0 - 1e-9 {
                return Ok(());
            }
            self.rec(i + 1, mask | 1 << i, mass + self.probs[i])?;
            self.rec(i + 1, mask, mass)
        }
    }
    let mut s = Search {
        full: &full,
        probs: &probs,
        suffix: &suffix,
        c,
        id,
        best: (f64::INFINITY, 0),
        memo: BTreeMap::new(),
    };
    s.rec(0, 0, 0.0)?;
    let (f, mask) = s.best;
    let subset = Search::members(mask).into_iter().map(|i| ground[i]).collect();
    Ok(certificate(subset, mu, f, CertificateKind::ExactMin))
}

/// Budget of `f` evaluations spent by the swap search.
pub const SWAP_BUDGET: usize = 200;
/// Candidates considered on each side of a swap.
pub const SWAP_CANDIDATES: usize = 16;

fn heuristic_minimum(
    g: &Graph,
    n: usize,
    mu: &Dist,
    ground: &[usize],
    c: f64,
    id: SpectralPointId,
) -> Result<SubsetCertificate> {
    let eval = |s: &[usize]| subset_f(g, n, s, id);
    let greedy = prefix_until(ground, mu, c);
    let mut best_set = greedy.clone();
    let mut best_f = eval(&greedy)?;
    if n >= 2 {
        let blocks = class_blocks(g.n(), n, mu, ground, c);
        if blocks != greedy {
            let f = eval(&blocks)?;
            if f < best_f - 1e-9 {
                best_f = f;
                best_set = blocks;
            }
        }
    }
    // drop surplus words, least likely first
    let mut mass = mu.mass(&best_set);
    best_set.sort_by(|&a, &b| mu.get(b).total_cmp(&mu.get(a)).then(a.cmp(&b)));
    while let Some(&last) = best_set.last() {
        if best_set.len() > 1 && mass - mu.get(last) >= c - MASS_TOL {
            mass -= mu.get(last);
            best_set.pop();
        } else {
            break;
        }
    }
    if best_set.len() < mu.support().len() {
        best_f = best_f.min(eval(&best_set)?);
    }
    // 2-swaps: replace an included word by an excluded one
    let mut budget = SWAP_BUDGET;
    let mut improved = true;
    while improved && budget > 0 {
        improved = false;
        let inside: Vec<usize> = best_set.iter().rev().take(SWAP_CANDIDATES).copied().collect();
        let in_set: BTreeSet<usize> = best_set.iter().copied().collect();
        let outside: Vec<usize> = ground
            .iter()
            .copied()
            .filter(|w| !in_set.contains(w))
            .take(SWAP_CANDIDATES)
            .collect();
        'search: for &x in &inside {
            for &y in &outside {
                let m = mass - mu.get(x) + mu.get(y);
                if m < c - MASS_TOL {
                    continue;
                }
                if budget == 0 {
                    break 'search;
                }
                budget -= 1;
                let cand: Vec<usize> = best_set.iter().map(|&w| if w == x { y } else { w }).collect();
                let f = eval(&cand)?;
                if f < best_f - 1e-9 {
                    best_f = f;
                    best_set = cand;
                    best_set.sort_by(|&a, &b| mu.get(b).total_cmp(&mu.get(a)).then(a.cmp(&b)));
                    mass = m;
                    improved = true;
                    break 'search;
                }
            }
        }
    }
    Ok(certificate(best_set, mu, best_f, CertificateKind::HeuristicUpper))
}

fn prefix_until(order: &[usize], mu: &Dist, c: f64) -> Vec<usize> {
    let mut out = Vec::new();
    let mut mass = 0.0;
    for &w in order {
        if mass >= c - MASS_TOL {
            break;
        }
        mass += mu.get(w);
        out.push(w);
    }
    out
}

/// Whole second-order classes in order of decreasing class mass.
fn class_blocks(alphabet: usize, n: usize, mu: &Dist, ground: &[usize], c: f64) -> Vec<usize> {
    let space = WordSpace::new(alphabet, n);
    let mut classes: BTreeMap<SecondOrderType, (f64, Vec<usize>)> = BTreeMap::new();
    for &w in ground {
        let t = SecondOrderType::of_word(alphabet, &space.letters(w)).expect("n >= 2");
        let e = classes.entry(t).or_insert((0.0, Vec::new()));
        e.0 += mu.get(w);
        e.1.push(w);
    }
    let mut order: Vec<(f64, Vec<usize>)> = classes.into_values().collect();
    order.sort_by(|a, b| b.0.total_cmp(&a.0).then(a.1[0].cmp(&b.1[0])));
    let mut out = Vec::new();
    let mut mass = 0.0;
    for (m, words) in order {
        if mass >= c - MASS_TOL {
            break;
        }
        mass += m;
        out.extend(words);
    }
    out
}

/// One row of an equipartition scan.
#[derive(Clone, Debug, PartialEq)]
pub struct ScanRow {
    pub n: usize,
    pub c: f64,
    pub id: SpectralPointId,
    /// `(1/n) log2 f` of the best subset found.
    pub heuristic_value: f64,
    /// Analytic lower bound on the normalised minimum.
    pub lower_bound: f64,
    pub bracket_lower: f64,
    pub bracket_upper: f64,
    pub mass: f64,
    pub kind: CertificateKind,
    /// Block length of the bracket.
    pub k: usize,
}

/// Rows for one word length `n` and every threshold in `c_list`.
pub fn scan_length(
    g: &Graph,
    src: &MarkovSource,
    id: SpectralPointId,
    n: usize,
    c_list: &[f64],
    k_max: usize,
) -> Result<Vec<ScanRow>> {
    check_alphabet(g, src)?;
    let mu = src.marginal(n)?;
    let k = n.min(k_max.max(1));
    let bracket = markov_aep_bracket(g, src, k)?;
    let (bracket_lower, bracket_upper, f_n) = match id {
        SpectralPointId::FracCliqueCover => {
            let f_n = refinement_on_product(&vec![g.clone(); n], &mu)?;
            (bracket.lower, bracket.upper, Some(f_n.value - f_n.certified_gap))
        }
        // the χ̄_f bracket bounds every smaller spectral point from above
        _ => (0.0, bracket.upper, None),
    };
    let power_vertices = crate::math::pow(g.n() as f64, n as f64);
    c_list
        .iter()
        .map(|&c| {
            let cert = min_subset(g, n, &mu, c, id, SearchMode::Heuristic)?;
            let lower_bound = match f_n {
                Some(f) => {
                    // the lemma with P(S) ≥ c on the n-th power
                    (f - (1.0 - c) * log2(power_vertices) - 1.0) / n as f64
                }
                None => 0.0,
            };
            Ok(ScanRow {
                n,
                c,
                id,
                heuristic_value: cert.log2_f / n as f64,
                lower_bound,
                bracket_lower,
                bracket_upper,
                mass: cert.mass,
                kind: cert.kind,
                k,
            })
        })
        .collect()
}

/// Default mass thresholds of a scan.
pub const DEFAULT_C_LIST: [f64; 3] = [0.3, 0.5, 0.8];

/// Rows for `n = 1..=n_max`, ordered by `(n, c)`.
pub fn aep_scan(
    g: &Graph,
    src: &MarkovSource,
    id: SpectralPointId,
    n_max: usize,
    c_list: &[f64],
    k_max: usize,
) -> Result<Vec<ScanRow>> {
    let mut rows = Vec::new();
    for n in 1..=n_max {
        rows.extend(scan_length(g, src, id, n, c_list, k_max)?);
    }
    Ok(rows)
}

/// Lower bound of the subset lemma applied directly to `(g, p, s)`.
pub fn subset_lower_bound(g: &Graph, p: &Dist, s: &[usize]) -> Result<f64> {
    let f = crate::refinement::graph_entropy_refinement(g, p)?;
    Ok(induced_subgraph_lower_bound(f.value - f.certified_gap, g, p, s))
}

#[derive(Clone, Debug, PartialEq)]
pub struct BlockCheck {
    pub holds: bool,
    /// Best `log2 f` found at length `n`.
    pub a_n: f64,
    /// Best `log2 f` found at length `m`.
    pub a_m: f64,
    /// `a_m + (n − m) log2 f(G)`.
    pub bound: f64,
    pub margin: f64,
}

/// Checks `a_n ≤ a_m + (n − m) log2 f(G)` on computed minima. The search at
/// length `n` is seeded with `S_m × V^{n−m}`, where `S_m` is the subset
/// found at length `m`.
pub fn block_inequality_check(
    g: &Graph,
    src: &MarkovSource,
    id: SpectralPointId,
    n: usize,
    m: usize,
    c: f64,
    mode: SearchMode,
) -> Result<BlockCheck> {
    if m == 0 || m > n {
        return Err(Error::InvalidArgument("need 1 <= m <= n".into()));
    }
    check_alphabet(g, src)?;
    let mu_m = src.marginal(m)?;
    let cert_m = min_subset(g, m, &mu_m, c, id, mode)?;
    let log_f = log2(spectral::evaluate(id, g)?);
    let bound = cert_m.log2_f + (n - m) as f64 * log_f;
    let mu_n = src.marginal(n)?;
    let mut a_n = min_subset(g, n, &mu_n, c, id, mode)?.log2_f;
    if n > m {
        let tail = WordSpace::new(g.n(), n - m).checked_count("seed tail", usize::MAX as u128)?;
        let seeded: Vec<usize> = cert_m
            .subset
            .iter()
            .flat_map(|&s| (0..tail).map(move |t| s * tail + t))
            .filter(|&w| mu_n.get(w) > 0.0)
            .collect();
        if let Ok(f) = subset_f(g, n, &seeded, id) {
            a_n = a_n.min(log2(f));
        }
    }
    let margin = bound - a_n;
    Ok(BlockCheck {
        holds: margin >= -1e-6,
        a_n,
        a_m: cert_m.log2_f,
        bound,
        margin,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn edgeless_cardinality() {
        let g = Graph::edgeless(2);
        let mu = Dist::uniform(4);
        let cert = min_subset(&g, 2, &mu, 0.5, SpectralPointId::FracCliqueCover, SearchMode::Heuristic).unwrap();
        assert_eq!(cert.subset.len(), 2);
        assert!((cert.log2_f - 1.0).abs() < 1e-12);
        assert_eq!(cert.kind, CertificateKind::ExactMin);
    }

    #[test]
    fn complete_is_zero() {
        let g = Graph::complete(3);
        let mu = Dist::uniform(9);
        for id in SpectralPointId::ALL {
            let cert = min_subset(&g, 2, &mu, 0.8, id, SearchMode::Exact).unwrap();
            assert_eq!(cert.log2_f, 0.0);
        }
    }

    #[test]
    fn exact_search_on_c5() {
        let g = Graph::cycle(5);
        let mu = Dist::new(vec![0.3, 0.25, 0.2, 0.15, 0.1]).unwrap();
        // {0, 1} is a clique of mass 0.55
        let cert = min_subset(&g, 1, &mu, 0.5, SpectralPointId::FracCliqueCover, SearchMode::Exact).unwrap();
        assert_eq!(cert.subset, vec![0, 1]);
        assert_eq!(cert.f_value, 1.0);
        let heur = min_subset(&g, 1, &mu, 0.5, SpectralPointId::FracCliqueCover, SearchMode::Heuristic).unwrap();
        assert!(heur.f_value >= cert.f_value - 1e-9);
        assert!(heur.mass >= 0.5);
    }

    #[test]
    fn infeasible_and_bad_c() {
        let g = Graph::cycle(5);
        let mu = Dist::uniform(5);
        assert!(min_subset(&g, 1, &mu, 0.0, SpectralPointId::Alpha, SearchMode::Exact).is_err());
        assert!(min_subset(&g, 1, &mu, 1.5, SpectralPointId::Alpha, SearchMode::Exact).is_err());
    }

    #[test]
    fn iid_bracket_collapses() {
        let g = Graph::cycle(5);
        let p = Dist::new(vec![0.3, 0.25, 0.2, 0.15, 0.1]).unwrap();
        let src = MarkovSource::iid(&p).unwrap();
        let f1 = crate::refinement::graph_entropy_refinement(&g, &p).unwrap().value;
        let b = markov_aep_bracket(&g, &src, 2).unwrap();
        assert!(b.gap < 1e-12);
        assert!((b.upper - f1).abs() < 2e-5);
    }

    #[test]
    fn block_inequality_on_edgeless() {
        let g = Graph::edgeless(2);
        let src = MarkovSource::iid(&Dist::new(vec![0.3, 0.7]).unwrap()).unwrap();
        for m in 1..=4 {
            let r = block_inequality_check(&g, &src, SpectralPointId::FracCliqueCover, 4, m, 0.5, SearchMode::Exact)
                .unwrap();
            assert!(r.holds, "{r:?}");
        }
    }
}
