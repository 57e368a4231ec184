mod common;

use common::{cases, stochastic};
use frate_core::aep::{
    block_inequality_check, block_refinement, markov_aep_bracket, min_subset, subset_f, SearchMode,
};
use frate_core::{Dist, Graph, MarkovSource, SpectralPointId};
use proptest::prelude::*;

fn path3() -> Graph {
    Graph::from_edge_list(3, &[(0, 1), (1, 2)]).unwrap()
}

/// Smallest number of words reaching mass `c`, by sorting.
fn sorted_count(mu: &Dist, c: f64) -> usize {
    let mut p = mu.probs().to_vec();
    p.sort_by(|a, b| b.total_cmp(a));
    let mut acc = 0.0;
    for (i, x) in p.iter().enumerate() {
        acc += x;
        if acc >= c - 1e-12 {
            return i + 1;
        }
    }
    p.len()
}

proptest! {
    #![proptest_config(cases(12))]

    #[test]
    fn bracket_width_and_sandwich(w in stochastic(3)) {
        let g = path3();
        let src = MarkovSource::build_chain(w).unwrap();
        let brackets: Vec<_> = (1..=4).map(|k| markov_aep_bracket(&g, &src, k).unwrap()).collect();
        let info = src.mutual_information();
        for b in &brackets {
            prop_assert!((b.upper - b.lower - info / b.k as f64).abs() < 1e-12);
        }
        for b in &brackets {
            for c in &brackets {
                let slack = 3.0 * (b.certified_gap / b.k as f64).max(c.certified_gap / c.k as f64) + 1e-9;
                prop_assert!(b.lower <= c.upper + slack, "lower({}) {} > upper({}) {}", b.k, b.lower, c.k, c.upper);
            }
        }
    }

    #[test]
    fn refinement_sequence_subadditive(w in stochastic(3)) {
        let g = path3();
        let src = MarkovSource::build_chain(w).unwrap();
        let a: Vec<_> = (1..=4).map(|k| block_refinement(&g, &src, k).unwrap()).collect();
        for k in 1..=4 {
            for m in 1..=4 - k {
                let gap = a[k - 1].certified_gap.max(a[m - 1].certified_gap).max(a[k + m - 1].certified_gap);
                prop_assert!(a[k - 1].value + a[m - 1].value >= a[k + m - 1].value - 4.0 * gap - 1e-9);
            }
        }
    }

    #[test]
    fn edgeless_minimum_is_sorted_count(w in stochastic(2), n in 1usize..9, c in 0.05f64..=1.0) {
        let g = Graph::edgeless(2);
        let src = MarkovSource::build_chain(w).unwrap();
        let mu = src.marginal(n).unwrap();
        for mode in [SearchMode::Exact, SearchMode::Heuristic] {
            let cert = min_subset(&g, n, &mu, c, SpectralPointId::FracCliqueCover, mode).unwrap();
            prop_assert_eq!(cert.subset.len(), sorted_count(&mu, c));
            prop_assert!(cert.mass >= c - 1e-12);
        }
    }

    #[test]
    fn exact_minimum_monotone_in_c(w in stochastic(3), n in 1usize..3) {
        let g = path3();
        let src = MarkovSource::build_chain(w).unwrap();
        let mu = src.marginal(n).unwrap();
        for id in SpectralPointId::ALL {
            let mut last = f64::NEG_INFINITY;
            for c in [0.1, 0.3, 0.5, 0.8, 1.0] {
                let cert = min_subset(&g, n, &mu, c, id, SearchMode::Exact).unwrap();
                prop_assert!(cert.log2_f >= last - 1e-9);
                let direct = subset_f(&g, n, &cert.subset, id).unwrap();
                prop_assert!((direct.log2() - cert.log2_f).abs() < 1e-6);
                last = cert.log2_f;
            }
        }
    }
}

#[test]
fn heuristic_values_near_bracket() {
    // one confusable pair; the third letter is transient
    let g = Graph::from_edge_list(3, &[(0, 1)]).unwrap();
    let src = MarkovSource::build_chain(vec![vec![0.9, 0.1, 0.0], vec![0.2, 0.8, 0.0], vec![0.5, 0.5, 0.0]]).unwrap();
    let upper1 = markov_aep_bracket(&g, &src, 1).unwrap().upper;
    let lower4 = markov_aep_bracket(&g, &src, 4).unwrap().lower;
    for n in 1..=8 {
        let mu = src.marginal(n).unwrap();
        for c in [0.3, 0.5, 0.8] {
            let cert = min_subset(&g, n, &mu, c, SpectralPointId::FracCliqueCover, SearchMode::Heuristic).unwrap();
            let v = cert.log2_f / n as f64;
            assert!(v >= lower4 - 0.05 && v <= upper1 + 0.05, "n={n} c={c}: {v} not in [{lower4}, {upper1}]");
        }
    }
}

#[test]
fn edgeless_values_approach_entropy_rate() {
    // the finite-n shortfall log2(1/c)/n shrinks with n
    let g = Graph::edgeless(2);
    let src = MarkovSource::build_chain(vec![vec![0.5, 0.5], vec![0.45, 0.55]]).unwrap();
    let rate = src.entropy_rate();
    let mut last = f64::INFINITY;
    for n in [4, 8, 12, 16] {
        let mu = src.marginal(n).unwrap();
        let cert = min_subset(&g, n, &mu, 0.8, SpectralPointId::FracCliqueCover, SearchMode::Heuristic).unwrap();
        let err = (cert.log2_f / n as f64 - rate).abs();
        assert!(err <= last + 1e-9, "n={n}: {err} > {last}");
        assert!(err <= 0.8f64.recip().log2() / n as f64 + 0.02);
        last = err;
    }
}

#[test]
fn block_inequality_holds() {
    let g = Graph::cycle(5);
    let w: Vec<Vec<f64>> = (0..5)
        .map(|a| (0..5).map(|b| if a == b { 0.4 } else { 0.15 }).collect())
        .collect();
    let src = MarkovSource::build_chain(w).unwrap();
    for (n, m) in [(2, 1), (3, 1), (3, 2)] {
        let check = block_inequality_check(&g, &src, SpectralPointId::FracCliqueCover, n, m, 0.5, SearchMode::Heuristic).unwrap();
        assert!(check.holds, "{check:?}");
    }
}
