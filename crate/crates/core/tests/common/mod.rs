#![allow(dead_code)]

use frate_core::{Dist, Graph};
use proptest::prelude::*;

/// Graph on `n` vertices whose edges are chosen by `bits` (upper triangle,
/// row-major).
pub fn graph_from_bits(n: usize, bits: &[bool]) -> Graph {
    let mut edges = Vec::new();
    let mut k = 0;
    for a in 0..n {
        for b in a + 1..n {
            if bits[k % bits.len().max(1)] {
                edges.push((a, b));
            }
            k += 1;
        }
    }
    Graph::from_edge_list(n, &edges).unwrap()
}

pub fn graph(min: usize, max: usize) -> impl Strategy<Value = Graph> {
    (min..=max).prop_flat_map(|n| {
        let m = (n * n.saturating_sub(1) / 2).max(1);
        prop::collection::vec(any::<bool>(), m).prop_map(move |bits| graph_from_bits(n, &bits))
    })
}

/// Strictly positive law on `n` points.
pub fn dist(n: usize) -> impl Strategy<Value = Dist> {
    prop::collection::vec(1u32..=100, n).prop_map(|w| Dist::from_weights(w.into_iter().map(f64::from).collect()).unwrap())
}

/// Law on `n` points with possibly empty support entries (at least one
/// positive).
pub fn dist_with_zeros(n: usize) -> impl Strategy<Value = Dist> {
    prop::collection::vec(0u32..=100, n).prop_map(|mut w| {
        if w.iter().all(|&x| x == 0) {
            w[0] = 1;
        }
        Dist::from_weights(w.into_iter().map(f64::from).collect()).unwrap()
    })
}

pub fn graph_and_dist(min: usize, max: usize) -> impl Strategy<Value = (Graph, Dist)> {
    graph(min, max).prop_flat_map(|g| {
        let n = g.n();
        (Just(g), dist_with_zeros(n))
    })
}

/// Row-stochastic matrix with strictly positive entries.
pub fn stochastic(n: usize) -> impl Strategy<Value = Vec<Vec<f64>>> {
    prop::collection::vec(prop::collection::vec(1u32..=20, n), n).prop_map(|rows| {
        rows.into_iter()
            .map(|r| {
                let s: u32 = r.iter().sum();
                r.into_iter().map(|x| f64::from(x) / f64::from(s)).collect()
            })
            .collect()
    })
}

/// `default` cases unless `PROPTEST_CASES` overrides it.
pub fn cases(default: u32) -> ProptestConfig {
    let n = std::env::var("PROPTEST_CASES").ok().and_then(|v| v.parse().ok()).unwrap_or(default);
    ProptestConfig::with_cases(n)
}
