//! Clique enumeration and exact clique / independent-set search.

use alloc::vec;
use alloc::vec::Vec;

use crate::bitset::Bitset;
use crate::error::{cap_check, Result};
use crate::graph::Graph;

/// Default vertex cap for maximal clique enumeration.
pub const DEFAULT_CLIQUE_CAP: usize = 128;
/// Hard cap on the number of maximal cliques reported.
pub const MAX_CLIQUE_COUNT: usize = 1_000_000;

/// Inclusion-maximal cliques by Bron–Kerbosch with pivoting.
///
/// Each clique is sorted ascending and the list is sorted lexicographically,
/// so the output is independent of traversal order.
pub fn maximal_cliques(g: &Graph) -> Result<Vec<Vec<usize>>> {
    maximal_cliques_capped(g, DEFAULT_CLIQUE_CAP)
}

pub fn maximal_cliques_capped(g: &Graph, vertex_cap: usize) -> Result<Vec<Vec<usize>>> {
    cap_check("clique enumeration vertex count", g.n() as u128, vertex_cap as u128)?;
    let n = g.n();
    let mut out = Vec::new();
    let mut r = Vec::new();
    bron_kerbosch(g, &mut r, Bitset::full(n), Bitset::new(n), &mut out)?;
    for c in &mut out {
        c.sort_unstable();
    }
    out.sort();
    Ok(out)
}

fn bron_kerbosch(
    g: &Graph,
    r: &mut Vec<usize>,
    p: Bitset,
    mut x: Bitset,
    out: &mut Vec<Vec<usize>>,
) -> Result<()> {
    if p.is_empty() {
        if x.is_empty() {
            cap_check("maximal clique count", out.len() as u128 + 1, MAX_CLIQUE_COUNT as u128)?;
            out.push(r.clone());
        }
        return Ok(());
    }
    // pivot with most neighbours in P, lowest index on ties
    let mut pivot = usize::MAX;
    let mut best = 0;
    for u in p.iter().chain(x.iter()) {
        let c = p.intersection_count(g.neighbors(u));
        if pivot == usize::MAX || c > best || (c == best && u < pivot) {
            pivot = u;
            best = c;
        }
    }
    let mut p = p;
    let candidates = p.difference(g.neighbors(pivot));
    for v in candidates.iter() {
        r.push(v);
        let nv = g.neighbors(v);
        bron_kerbosch(g, r, p.intersect(nv), x.intersect(nv), out)?;
        r.pop();
        p.remove(v);
        x.insert(v);
    }
    Ok(())
}

/// Maximum-weight clique for nonnegative weights, found by scanning a list of
/// maximal cliques. Returns the index into `cliques` and the weight.
pub fn best_clique(cliques: &[Vec<usize>], weights: &[f64]) -> Option<(usize, f64)> {
    let mut best: Option<(usize, f64)> = None;
    for (i, c) in cliques.iter().enumerate() {
        let w: f64 = c.iter().map(|&v| weights[v]).sum();
        if best.is_none_or(|(_, b)| w > b) {
            best = Some((i, w));
        }
    }
    best
}

/// Adjacency rows as `u64` masks; requires `n <= 64`.
fn masks(g: &Graph, complement: bool) -> Vec<u64> {
    let n = g.n();
    (0..n)
        .map(|a| {
            let mut m = 0u64;
            for b in 0..n {
                if a != b && g.adjacent(a, b) != complement {
                    m |= 1 << b;
                }
            }
            m
        })
        .collect()
}

/// Size of a largest clique of the graph given by `adj` (u64 rows),
/// branch and bound with a greedy colouring bound.
fn max_clique_masks(adj: &[u64]) -> (usize, u64) {
    let n = adj.len();
    let all = if n == 64 { u64::MAX } else { (1u64 << n) - 1 };
    let mut best = (0usize, 0u64);
    expand(adj, 0, 0, all, &mut best);
    best
}

fn expand(adj: &[u64], size: usize, current: u64, mut p: u64, best: &mut (usize, u64)) {
    // colour classes give the bound; vertices are visited in reverse colour order
    let mut order = Vec::with_capacity(p.count_ones() as usize);
    let mut colour = Vec::with_capacity(order.capacity());
    let mut uncoloured = p;
    let mut k = 0;
    while uncoloured != 0 {
        k += 1;
        let mut q = uncoloured;
        while q != 0 {
            let v = q.trailing_zeros() as usize;
            q &= q - 1;
            q &= !adj[v];
            uncoloured &= !(1u64 << v);
            order.push(v);
            colour.push(k);
        }
    }
    for i in (0..order.len()).rev() {
        if size + colour[i] <= best.0 {
            return;
        }
        let v = order[i];
        let bit = 1u64 << v;
        let next = p & adj[v];
        if next == 0 {
            if size + 1 > best.0 {
                *best = (size + 1, current | bit);
            }
        } else {
            expand(adj, size + 1, current | bit, next, best);
        }
        p &= !bit;
    }
}

/// Vertex cap for the exact independent set and clique searches.
pub const EXACT_SEARCH_CAP: usize = 64;

/// Clique number `ω(g)` (largest set of pairwise confusable letters).
pub fn clique_number(g: &Graph) -> Result<usize> {
    cap_check("exact clique search vertex count", g.n() as u128, EXACT_SEARCH_CAP as u128)?;
    if g.n() == 0 {
        return Ok(0);
    }
    Ok(max_clique_masks(&masks(g, false)).0)
}

/// A maximum independent set of `g`, ascending.
pub fn max_independent_set(g: &Graph) -> Result<Vec<usize>> {
    cap_check("exact independent set vertex count", g.n() as u128, EXACT_SEARCH_CAP as u128)?;
    if g.n() == 0 {
        return Ok(Vec::new());
    }
    let (_, set) = max_clique_masks(&masks(g, true));
    Ok((0..g.n()).filter(|&v| set >> v & 1 == 1).collect())
}

/// Chromatic number of the graph given by `adj` (u64 rows) by DSATUR-style
/// backtracking, starting from the lower bound `lower`.
pub(crate) fn chromatic_number_masks(adj: &[u64], lower: usize) -> usize {
    let n = adj.len();
    if n == 0 {
        return 0;
    }
    let greedy = greedy_colouring(adj);
    let mut k = lower.max(1);
    while k < greedy {
        let mut colours = vec![usize::MAX; n];
        if colour_with(adj, k, &mut colours, 0) {
            return k;
        }
        k += 1;
    }
    greedy
}

fn greedy_colouring(adj: &[u64]) -> usize {
    let n = adj.len();
    let mut colours = vec![usize::MAX; n];
    let mut used = 0;
    for v in 0..n {
        let mut c = 0;
        while (0..n).any(|u| adj[v] >> u & 1 == 1 && colours[u] == c) {
            c += 1;
        }
        colours[v] = c;
        used = used.max(c + 1);
    }
    used
}

fn colour_with(adj: &[u64], k: usize, colours: &mut [usize], done: usize) -> bool {
    let n = adj.len();
    if done == n {
        return true;
    }
    // most saturated uncoloured vertex, then highest degree
    let mut pick = usize::MAX;
    let mut key = (0usize, 0usize);
    for v in 0..n {
        if colours[v] != usize::MAX {
            continue;
        }
        let mut seen = 0u64;
        for u in 0..n {
            if adj[v] >> u & 1 == 1 && colours[u] != usize::MAX {
                seen |= 1 << colours[u];
            }
        }
        let cand = (seen.count_ones() as usize, adj[v].count_ones() as usize);
        if pick == usize::MAX || cand > key {
            pick = v;
            key = cand;
        }
    }
    // symmetry breaking: never open more than one new colour
    let max_used = colours.iter().filter(|&&c| c != usize::MAX).max().map_or(0, |&c| c + 1);
    for c in 0..k.min(max_used + 1) {
        if (0..n).any(|u| adj[pick] >> u & 1 == 1 && colours[u] == c) {
            continue;
        }
        colours[pick] = c;
        if colour_with(adj, k, colours, done + 1) {
            return true;
        }
        colours[pick] = usize::MAX;
    }
    false
}

/// Masks of the complement, exported for the clique cover search.
pub(crate) fn complement_masks(g: &Graph) -> Vec<u64> {
    masks(g, true)
}
