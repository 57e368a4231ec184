//! Probabilistic refinements `F(G, P)`.
//!
//! For the fractional clique cover number the refinement is the entropy of
//! the clique polytope of `G`:
//!
//! ```text
//! F(G, P) = min_{a ∈ conv{1_C : C clique}} Σ_x P(x) log2(1 / a_x)
//! ```
//!
//! minimised here by Frank–Wolfe with away steps. The linear maximisation
//! oracle scans the maximal cliques restricted to the support of `P`; on
//! strong products it scans tuples of maximal cliques of the factors. For
//! any spectral point, [`typegraph_estimate`] evaluates `f` on the type
//! class subgraph of a strong power.

use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;

use crate::bitset::Bitset;
use crate::cliques::maximal_cliques;
use crate::error::{cap_check, Error, Result};
use crate::graph::Graph;
use crate::math::{log2, LN_2};
use crate::prob::{eta, multinomial, round_to_type, type_class, Dist, TYPE_CLASS_CAP};
use crate::spectral::{self, SpectralPointId};
use crate::words::Word;

/// Cap on the number of clique tuples scanned on products.
pub const TUPLE_CAP: usize = 1_000_000;

#[derive(Clone, Copy, Debug)]
pub struct FwOptions {
    /// Stop once the Frank–Wolfe gap (bits) is at most this.
    pub tolerance: f64,
    pub max_iterations: usize,
}

impl Default for FwOptions {
    fn default() -> Self {
        FwOptions {
            tolerance: 1e-5,
            max_iterations: 100_000,
        }
    }
}

/// The clique polytope restricted to a coordinate set, given by its atoms
/// (clique indicators). Atoms are sorted coordinate lists.
#[derive(Clone, Debug)]
pub struct ConvexCorner {
    dim: usize,
    atoms: Vec<Vec<usize>>,
}

impl ConvexCorner {
    /// Builds a corner from arbitrary atoms over `0..dim`. Empty and
    /// duplicate atoms are dropped, as are atoms contained in another one.
    pub fn from_atoms(dim: usize, atoms: Vec<Vec<usize>>) -> Result<Self> {
        let mut atoms: Vec<Vec<usize>> = atoms
            .into_iter()
            .filter(|a| !a.is_empty())
            .map(|mut a| {
                a.sort_unstable();
                a.dedup();
                a
            })
            .collect();
        atoms.sort();
        atoms.dedup();
        if atoms.len() <= 5000 {
            let sets: Vec<Bitset> = atoms
                .iter()
                .map(|a| Bitset::from_indices(dim, a.iter().copied()))
                .collect();
            let keep: Vec<bool> = (0..atoms.len())
                .map(|i| {
                    !(0..atoms.len()).any(|j| {
                        j != i && atoms[j].len() > atoms[i].len() && sets[i].is_subset(&sets[j])
                    })
                })
                .collect();
            atoms = atoms
                .into_iter()
                .zip(keep)
                .filter_map(|(a, k)| k.then_some(a))
                .collect();
        }
        let mut covered = vec![false; dim];
        for a in &atoms {
            for &x in a {
                if x >= dim {
                    return Err(Error::OracleFailure("atom coordinate out of range".into()));
                }
                covered[x] = true;
            }
        }
        if let Some(x) = covered.iter().position(|c| !c) {
            return Err(Error::OracleFailure(alloc::format!("coordinate {x} lies in no clique")));
        }
        Ok(ConvexCorner { dim, atoms })
    }

    /// Clique polytope of `g` restricted to `support` (coordinates are
    /// positions in `support`).
    pub fn of_graph(g: &Graph, support: &[usize]) -> Result<Self> {
        let mut pos = vec![usize::MAX; g.n()];
        for (i, &v) in support.iter().enumerate() {
            pos[v] = i;
        }
        let atoms = maximal_cliques(g)?
            .into_iter()
            .map(|c| c.into_iter().filter(|&v| pos[v] != usize::MAX).map(|v| pos[v]).collect())
            .collect();
        Self::from_atoms(support.len(), atoms)
    }

    /// Clique polytope of `g_1 ⊠ … ⊠ g_k` restricted to `support`, a sorted
    /// list of product indices (mixed radix, first factor most significant).
    pub fn of_product(gs: &[Graph], support: &[usize]) -> Result<Self> {
        let factor_cliques: Vec<Vec<Vec<usize>>> =
            gs.iter().map(maximal_cliques).collect::<Result<_>>()?;
        let tuples = factor_cliques
            .iter()
            .try_fold(1u128, |acc, c| acc.checked_mul(c.len() as u128))
            .unwrap_or(u128::MAX);
        cap_check("clique tuple count", tuples, TUPLE_CAP as u128)?;
        let radix: Vec<usize> = gs.iter().map(Graph::n).collect();
        let pos: BTreeMap<usize, usize> = support.iter().enumerate().map(|(i, &w)| (w, i)).collect();
        let mut atoms = Vec::with_capacity(tuples as usize);
        let mut choice = vec![0usize; gs.len()];
        loop {
            let sets: Vec<&[usize]> = choice
                .iter()
                .zip(&factor_cliques)
                .map(|(&c, fc)| fc[c].as_slice())
                .collect();
            let mut atom = Vec::new();
            for_each_product_index(&sets, &radix, |idx| {
                if let Some(&p) = pos.get(&idx) {
                    atom.push(p);
                }
            });
            atoms.push(atom);
            if !advance(&mut choice, &factor_cliques.iter().map(Vec::len).collect::<Vec<_>>()) {
                break;
            }
        }
        Self::from_atoms(support.len(), atoms)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn atoms(&self) -> &[Vec<usize>] {
        &self.atoms
    }

    /// Atom of maximum weight and its weight.
    pub fn oracle(&self, weights: &[f64]) -> (usize, f64) {
        let mut best = (0, f64::NEG_INFINITY);
        for (i, a) in self.atoms.iter().enumerate() {
            let w: f64 = a.iter().map(|&x| weights[x]).sum();
            if w > best.1 {
                best = (i, w);
            }
        }
        best
    }
}

fn advance(choice: &mut [usize], sizes: &[usize]) -> bool {
    for i in (0..choice.len()).rev() {
        choice[i] += 1;
        if choice[i] < sizes[i] {
            return true;
        }
        choice[i] = 0;
    }
    false
}

fn for_each_product_index(sets: &[&[usize]], radix: &[usize], mut f: impl FnMut(usize)) {
    fn rec(sets: &[&[usize]], radix: &[usize], k: usize, acc: usize, f: &mut impl FnMut(usize)) {
        if k == sets.len() {
            f(acc);
            return;
        }
        for &v in sets[k] {
            rec(sets, radix, k + 1, acc * radix[k] + v, f);
        }
    }
    rec(sets, radix, 0, 0, &mut f);
}

/// Value of a refinement solve.
#[derive(Clone, Debug, PartialEq)]
pub struct RefinementValue {
    /// Objective at the witness, in bits; an upper bound on the minimum.
    pub value: f64,
    /// Frank–Wolfe gap at the witness; `value − certified_gap` is a lower
    /// bound on the minimum.
    pub certified_gap: f64,
    /// Ground-set indices of the support of `P`.
    pub support: Vec<usize>,
    /// The minimiser `a`, aligned with `support`.
    pub witness: Vec<f64>,
    /// Convex combination of clique indicators equal to `witness`
    /// (cliques as ground-set indices).
    pub combination: Vec<(Vec<usize>, f64)>,
    pub iterations: usize,
    pub converged: bool,
}

/// `Σ_x p_x log2(1 / a_x)`.
fn objective(p: &[f64], a: &[f64]) -> f64 {
    p.iter()
        .zip(a)
        .map(|(&px, &ax)| if px > 0.0 { -px * log2(ax) } else { 0.0 })
        .sum()
}

/// Minimises `Σ p_x log2(1/a_x)` over the corner; `p` is indexed by corner
/// coordinates and sums to one.
pub fn minimize_over_corner(corner: &ConvexCorner, p: &[f64], opts: FwOptions) -> CornerSolution {
    let d = corner.dim;
    let atoms = &corner.atoms;
    let m = atoms.len();
    let mut lambda: Vec<f64> = vec![1.0 / m as f64; m];
    let mut active: Vec<usize> = (0..m).collect();
    let mut a = vec![0.0; d];
    let rebuild = |lambda: &[f64], active: &[usize], a: &mut [f64]| {
        a.iter_mut().for_each(|v| *v = 0.0);
        for &i in active {
            for &x in &atoms[i] {
                a[x] += lambda[i];
            }
        }
    };
    rebuild(&lambda, &active, &mut a);
    let mut scores = vec![0.0; d];
    let mut gap = f64::INFINITY;
    let mut iterations = 0;
    while iterations < opts.max_iterations {
        for x in 0..d {
            scores[x] = p[x] / a[x];
        }
        let (s, s_score) = corner.oracle(&scores);
        gap = (s_score - 1.0) / LN_2;
        if gap <= opts.tolerance {
            break;
        }
        iterations += 1;
        let (v, v_score) = active
            .iter()
            .map(|&i| (i, atoms[i].iter().map(|&x| scores[x]).sum::<f64>()))
            .fold((usize::MAX, f64::INFINITY), |b, c| if c.1 < b.1 { c } else { b });
        let away_gap = (1.0 - v_score) / LN_2;
        let mut dir = vec![0.0; d];
        let (forward, gamma_max) = if gap >= away_gap || lambda[v] >= 1.0 {
            for x in 0..d {
                dir[x] = -a[x];
            }
            for &x in &atoms[s] {
                dir[x] += 1.0;
            }
            (true, 1.0)
        } else {
            dir.copy_from_slice(&a);
            for &x in &atoms[v] {
                dir[x] -= 1.0;
            }
            (false, lambda[v] / (1.0 - lambda[v]))
        };
        let gamma = line_search(p, &a, &dir, gamma_max);
        if forward {
            for &i in &active {
                lambda[i] *= 1.0 - gamma;
            }
            if !active.contains(&s) {
                active.push(s);
                lambda[s] = 0.0;
            }
            lambda[s] += gamma;
            if gamma >= 1.0 {
                active.retain(|&i| i == s);
            }
        } else {
            for &i in &active {
                lambda[i] *= 1.0 + gamma;
            }
            lambda[v] -= gamma;
            if gamma >= gamma_max {
                lambda[v] = 0.0;
            }
        }
        active.retain(|&i| lambda[i] > 0.0);
        if iterations % 64 == 0 {
            let total: f64 = active.iter().map(|&i| lambda[i]).sum();
            for &i in &active {
                lambda[i] /= total;
            }
            rebuild(&lambda, &active, &mut a);
        } else {
            for x in 0..d {
                a[x] += gamma * dir[x];
            }
        }
    }
    let total: f64 = active.iter().map(|&i| lambda[i]).sum();
    for &i in &active {
        lambda[i] /= total;
    }
    rebuild(&lambda, &active, &mut a);
    for x in 0..d {
        scores[x] = p[x] / a[x];
    }
    gap = gap.max((corner.oracle(&scores).1 - 1.0) / LN_2).max(0.0);
    active.sort_unstable();
    CornerSolution {
        value: objective(p, &a),
        gap,
        a,
        combination: active.iter().map(|&i| (i, lambda[i])).collect(),
        iterations,
        converged: gap <= opts.tolerance,
    }
}

/// Result of [`minimize_over_corner`] in corner coordinates.
#[derive(Clone, Debug)]
pub struct CornerSolution {
    pub value: f64,
    pub gap: f64,
    pub a: Vec<f64>,
    /// `(atom index, weight)` pairs.
    pub combination: Vec<(usize, f64)>,
    pub iterations: usize,
    pub converged: bool,
}

/// Minimises the 1-D convex restriction along `dir` over `[0, gamma_max]`
/// by bisection on the derivative.
fn line_search(p: &[f64], a: &[f64], dir: &[f64], gamma_max: f64) -> f64 {
    let slope = |g: f64| -> f64 {
        let mut s = 0.0;
        for x in 0..p.len() {
            if p[x] > 0.0 && dir[x] != 0.0 {
                let v = a[x] + g * dir[x];
                if v <= 0.0 {
                    return f64::INFINITY;
                }
                s -= p[x] * dir[x] / v;
            }
        }
        s
    };
    if slope(gamma_max) <= 0.0 {
        return gamma_max;
    }
    let (mut lo, mut hi) = (0.0, gamma_max);
    while hi - lo > 1e-12 * gamma_max.max(1e-300) {
        let mid = 0.5 * (lo + hi);
        if slope(mid) > 0.0 {
            hi = mid;
        } else {
            lo = mid;
        }
        if mid == lo && mid == hi {
            break;
        }
    }
    lo
}

fn validate_support(p: &Dist, n: usize) -> Result<Vec<usize>> {
    if p.len() != n {
        return Err(Error::InvalidDistribution(alloc::format!(
            "distribution has {} entries for {} letters",
            p.len(),
            n
        )));
    }
    Ok(p.support())
}

fn cluster_value(ids: &[usize], p: &Dist, support: Vec<usize>) -> RefinementValue {
    let k = ids.iter().max().map_or(0, |m| m + 1);
    let mass = p.pushforward(ids, k);
    let mut members: Vec<Vec<usize>> = vec![Vec::new(); k];
    for &x in &support {
        members[ids[x]].push(x);
    }
    RefinementValue {
        value: mass.entropy(),
        certified_gap: 0.0,
        witness: support.iter().map(|&x| mass.get(ids[x])).collect(),
        combination: members
            .into_iter()
            .enumerate()
            .filter(|(_, m)| !m.is_empty())
            .map(|(c, m)| (m, mass.get(c)))
            .collect(),
        support,
        iterations: 0,
        converged: true,
    }
}

fn from_corner(corner: &ConvexCorner, support: Vec<usize>, sol: CornerSolution) -> RefinementValue {
    if !sol.converged {
        log::warn!(
            "refinement stopped after {} iterations with gap {:.3e}",
            sol.iterations,
            sol.gap
        );
    }
    RefinementValue {
        // the objective is nonnegative; raising an upper bound keeps it one
        value: sol.value.max(0.0),
        certified_gap: sol.gap,
        witness: sol.a,
        combination: sol
            .combination
            .iter()
            .map(|&(i, w)| (corner.atoms[i].iter().map(|&x| support[x]).collect(), w))
            .collect(),
        support,
        iterations: sol.iterations,
        converged: sol.converged,
    }
}

/// `F(G, P)` for the fractional clique cover number.
pub fn graph_entropy_refinement(g: &Graph, p: &Dist) -> Result<RefinementValue> {
    graph_entropy_refinement_with(g, p, FwOptions::default())
}

pub fn graph_entropy_refinement_with(g: &Graph, p: &Dist, opts: FwOptions) -> Result<RefinementValue> {
    let support = validate_support(p, g.n())?;
    if let Some(ids) = g.cluster_ids() {
        return Ok(cluster_value(&ids, p, support));
    }
    let corner = ConvexCorner::of_graph(g, &support)?;
    let ps: Vec<f64> = support.iter().map(|&x| p.get(x)).collect();
    let sol = minimize_over_corner(&corner, &ps, opts);
    Ok(from_corner(&corner, support, sol))
}

/// `F(g_1 ⊠ … ⊠ g_k, P)` with `P` over the product alphabet (mixed radix,
/// first factor most significant).
pub fn refinement_on_product(gs: &[Graph], p: &Dist) -> Result<RefinementValue> {
    refinement_on_product_with(gs, p, FwOptions::default())
}

pub fn refinement_on_product_with(gs: &[Graph], p: &Dist, opts: FwOptions) -> Result<RefinementValue> {
    if gs.is_empty() {
        return Err(Error::InvalidArgument("product needs at least one factor".into()));
    }
    let size = gs
        .iter()
        .try_fold(1usize, |acc, g| acc.checked_mul(g.n()))
        .ok_or(Error::SizeCapExceeded {
            what: "product alphabet",
            size: u128::MAX,
            cap: usize::MAX as u128,
        })?;
    let support = validate_support(p, size)?;
    let ids: Option<Vec<Vec<usize>>> = gs.iter().map(Graph::cluster_ids).collect();
    if let Some(ids) = ids {
        let radix: Vec<usize> = ids.iter().map(|i| i.iter().max().map_or(0, |m| m + 1)).collect();
        let word_ids: Vec<usize> = (0..size)
            .map(|mut w| {
                let mut id = 0;
                let mut mult = 1;
                for k in (0..gs.len()).rev() {
                    id += ids[k][w % gs[k].n()] * mult;
                    mult *= radix[k];
                    w /= gs[k].n();
                }
                id
            })
            .collect();
        return Ok(cluster_value(&word_ids, p, support));
    }
    let corner = ConvexCorner::of_product(gs, &support)?;
    let ps: Vec<f64> = support.iter().map(|&x| p.get(x)).collect();
    let sol = minimize_over_corner(&corner, &ps, opts);
    Ok(from_corner(&corner, support, sol))
}

/// `(1/n) log2 f(G^{⊠n}[T])` for the type class `T` of the `n`-type
/// nearest to `p`.
pub fn typegraph_estimate(id: SpectralPointId, g: &Graph, p: &Dist, n: usize) -> Result<f64> {
    if n == 0 {
        return Err(Error::InvalidArgument("type length must be >= 1".into()));
    }
    let counts = round_to_type(p, n);
    let f = type_graph_value(id, g, &counts)?;
    Ok(log2(f) / n as f64)
}

/// `f(G^{⊠n}[T])` for the type class with the given letter counts.
pub fn type_graph_value(id: SpectralPointId, g: &Graph, counts: &[usize]) -> Result<f64> {
    if let Some(ids) = g.cluster_ids() {
        // every cluster sequence with the aggregated counts is realised
        let k = ids.iter().max().map_or(0, |m| m + 1);
        let mut agg = vec![0usize; k];
        for (x, &c) in counts.iter().enumerate() {
            agg[ids[x]] += c;
        }
        return Ok(multinomial(&agg).map_or(f64::INFINITY, |v| v as f64));
    }
    match id {
        SpectralPointId::FracCliqueCover => {
            // vertex-transitive under coordinate permutations: χ̄_f = |T| / ω(T)
            let size = multinomial(counts).ok_or(Error::SizeCapExceeded {
                what: "type class size",
                size: u128::MAX,
                cap: u128::MAX,
            })?;
            let omega = type_graph_clique_number(g, counts)?;
            Ok(size as f64 / omega as f64)
        }
        _ => {
            let class = type_class(counts, TYPE_CLASS_CAP)?;
            spectral::evaluate(id, &g.induced_on_words(&class))
        }
    }
}

/// Direct evaluation on the materialised type graph (no symmetry shortcut).
pub fn type_graph_value_direct(id: SpectralPointId, g: &Graph, counts: &[usize]) -> Result<f64> {
    let class: Vec<Word> = type_class(counts, TYPE_CLASS_CAP)?;
    spectral::evaluate(id, &g.induced_on_words(&class))
}

/// Cap on multisets of maximal cliques searched by
/// [`type_graph_clique_number`].
pub const MULTISET_CAP: u128 = 10_000_000;

/// Clique number of `G^{⊠n}[T]`.
///
/// Every clique of the strong power lies in a product `C_1 × … × C_n` of
/// maximal cliques, and since `T` is closed under coordinate permutations
/// the count `|T ∩ ΠC_i|` only depends on the multiset `{C_i}`. Each count
/// is a dynamic program over remaining letter counts.
pub fn type_graph_clique_number(g: &Graph, counts: &[usize]) -> Result<u128> {
    let cliques = maximal_cliques(g)?;
    let n: usize = counts.iter().sum();
    let m = cliques.len();
    let multisets = binomial((m + n - 1) as u128, n as u128);
    cap_check("clique multiset count", multisets, MULTISET_CAP)?;
    let mut best = 0u128;
    let mut k = vec![0usize; m];
    multiset_rec(&cliques, counts, &mut k, 0, n, &mut best);
    Ok(best)
}

fn binomial(n: u128, k: u128) -> u128 {
    let k = k.min(n.saturating_sub(k));
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc.saturating_mul(n - i) / (i + 1);
    }
    acc
}

fn multiset_rec(
    cliques: &[Vec<usize>],
    counts: &[usize],
    k: &mut [usize],
    j: usize,
    left: usize,
    best: &mut u128,
) {
    if j + 1 == cliques.len() {
        k[j] = left;
        let c = count_in_product(cliques, counts, k);
        if c > *best {
            *best = c;
        }
        return;
    }
    for take in 0..=left {
        k[j] = take;
        multiset_rec(cliques, counts, k, j + 1, left - take, best);
    }
}

/// Number of words with letter counts `counts` whose positions are split
/// into groups of sizes `k[j]` drawing letters from `cliques[j]`.
fn count_in_product(cliques: &[Vec<usize>], counts: &[usize], k: &[usize]) -> u128 {
    let mut states: BTreeMap<Vec<usize>, u128> = BTreeMap::new();
    states.insert(counts.to_vec(), 1);
    for (j, clique) in cliques.iter().enumerate() {
        if k[j] == 0 {
            continue;
        }
        let mut next: BTreeMap<Vec<usize>, u128> = BTreeMap::new();
        for (rem, ways) in &states {
            let mut take = vec![0usize; clique.len()];
            compositions(clique, rem, k[j], 0, &mut take, &mut |take| {
                let mut r = rem.clone();
                for (i, &x) in clique.iter().enumerate() {
                    r[x] -= take[i];
                }
                let mult = multinomial(take).unwrap_or(u128::MAX);
                let e = next.entry(r).or_insert(0);
                *e = e.saturating_add(ways.saturating_mul(mult));
            });
        }
        states = next;
    }
    states.get(&vec![0; counts.len()]).copied().unwrap_or(0)
}

fn compositions(
    clique: &[usize],
    rem: &[usize],
    left: usize,
    i: usize,
    take: &mut [usize],
    f: &mut impl FnMut(&[usize]),
) {
    if i + 1 == clique.len() {
        if left <= rem[clique[i]] {
            take[i] = left;
            f(take);
        }
        return;
    }
    for t in 0..=left.min(rem[clique[i]]) {
        take[i] = t;
        compositions(clique, rem, left - t, i + 1, take, f);
    }
}

/// `F − (1 − P(S)) log2 |V| − 1`: a lower bound on `log2 f(G[S])` given the
/// refinement value `f_refinement = F(G, P)`.
pub fn induced_subgraph_lower_bound(f_refinement: f64, g: &Graph, p: &Dist, s: &[usize]) -> f64 {
    f_refinement - (1.0 - p.mass(s)) * log2(g.n() as f64) - 1.0
}

/// `δ log2 f + 2 η(δ)` for a given `log2 f`.
pub fn continuity_bound(log2_f: f64, delta: f64) -> Result<f64> {
    Ok(delta * log2_f + 2.0 * eta(delta)?)
}

/// [`continuity_bound`] with `f = χ̄_f(g)`.
pub fn same_marginal_continuity_bound(g: &Graph, delta: f64) -> Result<f64> {
    let f = spectral::frac_clique_cover(g)?.value;
    continuity_bound(log2(f), delta)
}
