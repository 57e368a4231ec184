//! Ornstein (d-bar) distances and continuity checks.
//!
//! The distance between two laws on `X^n` is the optimal transport cost
//! under the normalised Hamming distance, computed exactly by the
//! transportation simplex (MODI potentials on a spanning-tree basis). The
//! final potentials are a dual certificate.

use alloc::collections::VecDeque;
use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use crate::error::{cap_check, Error, Result};
use crate::graph::Graph;
use crate::markov::MarkovSource;
use crate::math::log2;
use crate::prob::{eta, Dist};
use crate::refinement::{graph_entropy_refinement, refinement_on_product};
use crate::spectral;
use crate::words::WordSpace;

/// Default cap on `|X|^{2n}`, the number of transport variables.
pub const TRANSPORT_CAP: u128 = 1_000_000;
/// Required agreement of primal and dual objectives.
pub const DUALITY_TOL: f64 = 1e-9;

/// Fraction of positions where `x` and `y` differ.
pub fn hamming_distance(x: &[usize], y: &[usize]) -> Result<f64> {
    if x.len() != y.len() {
        return Err(Error::LengthMismatch(x.len(), y.len()));
    }
    if x.is_empty() {
        return Ok(0.0);
    }
    let d = x.iter().zip(y).filter(|(a, b)| a != b).count();
    Ok(d as f64 / x.len() as f64)
}

/// Optimal solution of a transportation problem.
#[derive(Clone, Debug)]
pub struct TransportSolution {
    /// `(source, sink, mass)` over the original indices, positive masses only.
    pub plan: Vec<(usize, usize, f64)>,
    pub cost: f64,
    /// Dual objective of the shifted (exactly feasible) potentials.
    pub dual_bound: f64,
    pub u: Vec<f64>,
    pub v: Vec<f64>,
    pub pivots: usize,
}

/// Minimises `Σ cost(i, j) x_ij` subject to row sums `p` and column sums `q`
/// (both summing to one).
pub fn transport(p: &[f64], q: &[f64], cost: impl Fn(usize, usize) -> f64) -> Result<TransportSolution> {
    let rows: Vec<usize> = (0..p.len()).filter(|&i| p[i] > 0.0).collect();
    let cols: Vec<usize> = (0..q.len()).filter(|&j| q[j] > 0.0).collect();
    let (m, k) = (rows.len(), cols.len());
    if m == 0 || k == 0 {
        return Err(Error::InvalidDistribution("empty transport marginal".into()));
    }
    let c: Vec<f64> = rows
        .iter()
        .flat_map(|&i| cols.iter().map(move |&j| (i, j)))
        .map(|(i, j)| cost(i, j))
        .collect();
    let at = |i: usize, j: usize| c[i * k + j];
    let mut supply: Vec<f64> = rows.iter().map(|&i| p[i]).collect();
    let mut demand: Vec<f64> = cols.iter().map(|&j| q[j]).collect();
    let ts: f64 = supply.iter().sum();
    let td: f64 = demand.iter().sum();
    for d in &mut demand {
        *d *= ts / td;
    }

    // north-west corner basis: m + k − 1 cells forming a spanning tree
    let mut basis: Vec<(usize, usize)> = Vec::with_capacity(m + k - 1);
    let mut x: Vec<f64> = Vec::with_capacity(m + k - 1);
    let (mut i, mut j) = (0, 0);
    loop {
        let amount = supply[i].min(demand[j]);
        basis.push((i, j));
        x.push(amount);
        supply[i] -= amount;
        demand[j] -= amount;
        if i == m - 1 && j == k - 1 {
            break;
        }
        if j == k - 1 || (i < m - 1 && supply[i] <= demand[j]) {
            i += 1;
        } else {
            j += 1;
        }
    }

    let mut pivots = 0;
    let max_pivots = 50 * (m + k) * (m + k) + 1000;
    let (u, v) = loop {
        let (u, v) = potentials(m, k, &basis, &at);
        // entering cell: most negative reduced cost, first in scan order
        let mut enter: Option<(usize, usize)> = None;
        let mut best = -1e-12;
        for r in 0..m {
            for s in 0..k {
                let red = at(r, s) - u[r] - v[s];
                if red < best {
                    best = red;
                    enter = Some((r, s));
                }
            }
        }
        let Some((er, es)) = enter else { break (u, v) };
        if pivots >= max_pivots {
            return Err(Error::SolverDiverged("transportation simplex pivot budget exhausted".into()));
        }
        pivots += 1;
        // path in the basis tree from column es to row er closes the cycle
        let path = tree_path(m, k, &basis, er, es);
        // path[0] is the cell touching column es: signs alternate −, +, −, …
        let mut theta = f64::INFINITY;
        let mut leave = usize::MAX;
        for (t, &b) in path.iter().enumerate() {
            if t % 2 == 0 && (x[b] < theta || (x[b] == theta && b < leave)) {
                theta = x[b];
                leave = b;
            }
        }
        for (t, &b) in path.iter().enumerate() {
            if t % 2 == 0 {
                x[b] -= theta;
            } else {
                x[b] += theta;
            }
        }
        basis[leave] = (er, es);
        x[leave] = theta;
    };

    let mut plan = Vec::new();
    let mut cost_total = 0.0;
    for (b, &(r, s)) in basis.iter().enumerate() {
        let mass = x[b].max(0.0);
        if mass > 0.0 {
            plan.push((rows[r], cols[s], mass));
            cost_total += mass * at(r, s);
        }
    }
    plan.sort_by_key(|&(x, y, _)| (x, y));
    // shift potentials so that u_i + v_j ≤ c_ij holds exactly
    let mut slack = 0.0f64;
    for r in 0..m {
        for s in 0..k {
            slack = slack.min(at(r, s) - u[r] - v[s]);
        }
    }
    let pr: Vec<f64> = rows.iter().map(|&i| p[i]).collect();
    let qc: Vec<f64> = cols.iter().map(|&j| q[j] * ts / td).collect();
    let dual = pr.iter().zip(&u).map(|(a, b)| a * (b + slack)).sum::<f64>()
        + qc.iter().zip(&v).map(|(a, b)| a * b).sum::<f64>();
    if cost_total - dual > DUALITY_TOL {
        return Err(Error::SolverDiverged(format!(
            "transport duality gap {:.3e} exceeds {DUALITY_TOL}",
            cost_total - dual
        )));
    }
    let mut u_full = vec![0.0; p.len()];
    let mut v_full = vec![0.0; q.len()];
    for (r, &i) in rows.iter().enumerate() {
        u_full[i] = u[r] + slack;
    }
    for (s, &j) in cols.iter().enumerate() {
        v_full[j] = v[s];
    }
    Ok(TransportSolution {
        plan,
        cost: cost_total,
        dual_bound: dual,
        u: u_full,
        v: v_full,
        pivots,
    })
}

/// Potentials with `u_0 = 0` and `u_r + v_s = c_rs` on the basis.
fn potentials(m: usize, k: usize, basis: &[(usize, usize)], at: &impl Fn(usize, usize) -> f64) -> (Vec<f64>, Vec<f64>) {
    let mut row_cells: Vec<Vec<usize>> = vec![Vec::new(); m];
    let mut col_cells: Vec<Vec<usize>> = vec![Vec::new(); k];
    for (b, &(r, s)) in basis.iter().enumerate() {
        row_cells[r].push(b);
        col_cells[s].push(b);
    }
    let mut u = vec![f64::NAN; m];
    let mut v = vec![f64::NAN; k];
    u[0] = 0.0;
    // nodes 0..m are rows, m..m+k columns
    let mut queue = VecDeque::from([0usize]);
    while let Some(node) = queue.pop_front() {
        if node < m {
            for &b in &row_cells[node] {
                let s = basis[b].1;
                if v[s].is_nan() {
                    v[s] = at(node, s) - u[node];
                    queue.push_back(m + s);
                }
            }
        } else {
            let s = node - m;
            for &b in &col_cells[s] {
                let r = basis[b].0;
                if u[r].is_nan() {
                    u[r] = at(r, s) - v[s];
                    queue.push_back(r);
                }
            }
        }
    }
    (u, v)
}

/// Basis cells on the tree path from column `es` to row `er`, in order.
fn tree_path(m: usize, k: usize, basis: &[(usize, usize)], er: usize, es: usize) -> Vec<usize> {
    let mut adj: Vec<Vec<(usize, usize)>> = vec![Vec::new(); m + k];
    for (b, &(r, s)) in basis.iter().enumerate() {
        adj[r].push((m + s, b));
        adj[m + s].push((r, b));
    }
    let start = m + es;
    let mut prev: Vec<Option<(usize, usize)>> = vec![None; m + k];
    let mut seen = vec![false; m + k];
    seen[start] = true;
    let mut queue = VecDeque::from([start]);
    while let Some(node) = queue.pop_front() {
        if node == er {
            break;
        }
        for &(next, b) in &adj[node] {
            if !seen[next] {
                seen[next] = true;
                prev[next] = Some((node, b));
                queue.push_back(next);
            }
        }
    }
    let mut path = Vec::new();
    let mut node = er;
    while let Some((p, b)) = prev[node] {
        path.push(b);
        node = p;
    }
    path.reverse();
    path
}

/// Optimal coupling of two laws on `X^n` under normalised Hamming cost.
#[derive(Clone, Debug)]
pub struct Coupling {
    pub alphabet: usize,
    pub n: usize,
    /// `(x, y, mass)` with lexicographic word indices.
    pub entries: Vec<(usize, usize, f64)>,
    pub cost: f64,
}

#[derive(Clone, Debug)]
pub struct OrnsteinResult {
    pub distance: f64,
    pub dual_bound: f64,
    pub coupling: Coupling,
    pub pivots: usize,
}

/// `d̄(p, q)` for laws on `X^n`.
pub fn ornstein_distance(alphabet: usize, n: usize, p: &Dist, q: &Dist) -> Result<OrnsteinResult> {
    let space = WordSpace::new(alphabet, n);
    let size = space.checked_count("word space", u32::MAX as u128)?;
    cap_check("transport variables", (size as u128) * (size as u128), TRANSPORT_CAP)?;
    if p.len() != size || q.len() != size {
        return Err(Error::InvalidDistribution(format!(
            "word distributions must have {size} entries"
        )));
    }
    let words: Vec<Vec<usize>> = (0..size).map(|i| space.letters(i)).collect();
    let sol = transport(p.probs(), q.probs(), |i, j| {
        hamming_distance(&words[i], &words[j]).expect("equal lengths")
    })?;
    Ok(OrnsteinResult {
        distance: sol.cost,
        dual_bound: sol.dual_bound,
        pivots: sol.pivots,
        coupling: Coupling {
            alphabet,
            n,
            entries: sol.plan,
            cost: sol.cost,
        },
    })
}

/// `d̄(μ_{1..n}, ν_{1..n})` for `n = 1..=n_max`.
pub fn dbar_sequence(src1: &MarkovSource, src2: &MarkovSource, n_max: usize) -> Result<Vec<f64>> {
    if src1.alphabet() != src2.alphabet() {
        return Err(Error::InvalidArgument("sources have different alphabets".into()));
    }
    let a = src1.alphabet();
    (1..=n_max)
        .map(|n| Ok(ornstein_distance(a, n, &src1.marginal(n)?, &src2.marginal(n)?)?.distance))
        .collect()
}

/// Outcome of a continuity check `|ΔF| ≤ bound`.
#[derive(Clone, Debug, PartialEq)]
pub struct ContinuityReport {
    /// `δ` or `d̄` entering the bound.
    pub distance: f64,
    /// Left side `|ΔF|` (normalised by `n` for the Ornstein form).
    pub lhs: f64,
    pub bound: f64,
    /// Solver slack allowed on the left side.
    pub slack: f64,
    /// `bound + slack − lhs`.
    pub margin: f64,
    pub holds: bool,
}

fn report(distance: f64, lhs: f64, bound: f64, slack: f64) -> ContinuityReport {
    let margin = bound + slack - lhs;
    ContinuityReport {
        distance,
        lhs,
        bound,
        slack,
        margin,
        holds: margin >= 0.0,
    }
}

/// `|(1/n)F(G^{⊠n},p) − (1/n)F(G^{⊠n},q)| ≤ d̄ log2 f(G) + 2η(d̄)` with
/// `f = χ̄_f`.
pub fn continuity_check(g: &Graph, n: usize, p: &Dist, q: &Dist) -> Result<ContinuityReport> {
    let d = ornstein_distance(g.n(), n, p, q)?.distance.clamp(0.0, 1.0);
    let factors = vec![g.clone(); n];
    let fp = refinement_on_product(&factors, p)?;
    let fq = refinement_on_product(&factors, q)?;
    let log_f = log2(spectral::frac_clique_cover(g)?.value);
    let lhs = (fp.value - fq.value).abs() / n as f64;
    let slack = 3.0 * fp.certified_gap.max(fq.certified_gap) / n as f64;
    Ok(report(d, lhs, d * log_f + 2.0 * eta(d)?, slack))
}

/// `|F(G⊠H,P) − F(G⊠H,Q)| ≤ δ log2 f(G) + 2η(δ)` for laws with equal
/// `H`-marginals, `δ = ½‖P − Q‖₁` and `f = χ̄_f`. Index `(g, h)` is
/// `g * |V(H)| + h`.
pub fn same_marginal_check(g: &Graph, h: &Graph, p: &Dist, q: &Dist) -> Result<ContinuityReport> {
    let (ng, nh) = (g.n(), h.n());
    if p.len() != ng * nh || q.len() != ng * nh {
        return Err(Error::InvalidDistribution("joint laws must live on V(G) × V(H)".into()));
    }
    for y in 0..nh {
        let ph: f64 = (0..ng).map(|x| p.get(x * nh + y)).sum();
        let qh: f64 = (0..ng).map(|x| q.get(x * nh + y)).sum();
        if (ph - qh).abs() > 1e-9 {
            return Err(Error::InvalidArgument("H-marginals differ".into()));
        }
    }
    let delta = p.total_variation(q).clamp(0.0, 1.0);
    let factors = [g.clone(), h.clone()];
    let fp = refinement_on_product(&factors, p)?;
    let fq = refinement_on_product(&factors, q)?;
    let log_f = log2(spectral::frac_clique_cover(g)?.value);
    let lhs = (fp.value - fq.value).abs();
    let slack = 3.0 * fp.certified_gap.max(fq.certified_gap);
    Ok(report(delta, lhs, delta * log_f + 2.0 * eta(delta)?, slack))
}

/// Single-letter refinement difference, convenient for callers comparing
/// `F(G, p)` and `F(G, q)` directly.
pub fn refinement_difference(g: &Graph, p: &Dist, q: &Dist) -> Result<f64> {
    Ok((graph_entropy_refinement(g, p)?.value - graph_entropy_refinement(g, q)?.value).abs())
}
