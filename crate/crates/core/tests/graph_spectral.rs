mod common;

use common::{graph, graph_from_bits};
use frate_core::cliques::maximal_cliques;
use frate_core::graph::{find_isomorphism, is_cohomomorphism};
use frate_core::spectral::{self, alpha, clique_cover_number, frac_clique_cover, lovasz_theta};
use frate_core::{Graph, SpectralPointId};
use proptest::prelude::*;

fn rel_close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol * a.abs().max(b.abs()).max(1.0)
}

proptest! {
    #![proptest_config(common::cases(24))]

    #[test]
    fn strong_product_commutes((g, h) in (graph(1, 4), graph(1, 4))) {
        let gh = g.strong_product(&h);
        let hg = h.strong_product(&g);
        let (m, k) = (g.n(), h.n());
        // (x, y) ↦ (y, x)
        for a in 0..m * k {
            for b in 0..m * k {
                let sa = (a % k) * m + a / k;
                let sb = (b % k) * m + b / k;
                prop_assert_eq!(gh.adjacent(a, b), hg.adjacent(sa, sb));
            }
        }
    }

    #[test]
    fn strong_product_associates((g, h, k) in (graph(1, 3), graph(1, 3), graph(1, 3))) {
        let left = g.strong_product(&h).strong_product(&k);
        let right = g.strong_product(&h.strong_product(&k));
        prop_assert_eq!(left.n(), right.n());
        for a in 0..left.n() {
            for b in 0..left.n() {
                prop_assert_eq!(left.adjacent(a, b), right.adjacent(a, b));
            }
        }
    }

    #[test]
    fn complement_of_strong_is_costrong((g, h) in (graph(1, 4), graph(1, 4))) {
        let left = g.strong_product(&h).complement();
        let right = g.complement().costrong_product(&h.complement());
        for a in 0..left.n() {
            for b in 0..left.n() {
                prop_assert_eq!(left.adjacent(a, b), right.adjacent(a, b));
            }
        }
    }

    #[test]
    fn induced_commutes_with_product(
        (g, h) in (graph(2, 4), graph(2, 4)),
        s_mask in 1u8..16, t_mask in 1u8..16,
    ) {
        let s: Vec<usize> = (0..g.n()).filter(|&i| s_mask >> i & 1 == 1).collect();
        let t: Vec<usize> = (0..h.n()).filter(|&i| t_mask >> i & 1 == 1).collect();
        prop_assume!(!s.is_empty() && !t.is_empty());
        let hn = h.n();
        let st: Vec<usize> = s.iter().flat_map(|&x| t.iter().map(move |&y| x * hn + y)).collect();
        let left = g.strong_product(&h).induced_subgraph(&st).unwrap();
        let right = g.induced_subgraph(&s).unwrap().strong_product(&h.induced_subgraph(&t).unwrap());
        for a in 0..left.n() {
            for b in 0..left.n() {
                prop_assert_eq!(left.adjacent(a, b), right.adjacent(a, b));
            }
        }
    }

    #[test]
    fn inclusion_is_cohomomorphism(g in graph(2, 7), mask in 1u8..128) {
        let s: Vec<usize> = (0..g.n()).filter(|&i| mask >> i & 1 == 1).collect();
        prop_assume!(!s.is_empty());
        let sub = g.induced_subgraph(&s).unwrap();
        prop_assert!(is_cohomomorphism(&sub, &g, &s));
    }

    #[test]
    fn maximal_cliques_are_maximal_and_cover(g in graph(1, 9)) {
        let cliques = maximal_cliques(&g).unwrap();
        let mut covered = vec![false; g.n()];
        for (i, c) in cliques.iter().enumerate() {
            prop_assert!(g.is_clique(c));
            for &v in c {
                covered[v] = true;
            }
            // no vertex extends it
            for v in 0..g.n() {
                if !c.contains(&v) {
                    prop_assert!(!c.iter().all(|&u| g.adjacent(u, v)));
                }
            }
            for (j, d) in cliques.iter().enumerate() {
                if i != j {
                    prop_assert!(!c.iter().all(|v| d.contains(v)));
                }
            }
        }
        prop_assert!(covered.into_iter().all(|b| b));
    }

    #[test]
    fn sandwich(g in graph(1, 10)) {
        let a = alpha(&g).unwrap() as f64;
        let t = lovasz_theta(&g).unwrap().value;
        let f = frac_clique_cover(&g).unwrap().value;
        prop_assert!(a <= t + 1e-5, "alpha {} theta {}", a, t);
        prop_assert!(t <= f + 1e-5, "theta {} fcc {}", t, f);
    }

    #[test]
    fn coding_chain(g in graph(1, 12)) {
        let f = frac_clique_cover(&g).unwrap().value;
        let chi = clique_cover_number(&g).unwrap() as f64;
        let omega = alpha(&g.complement()).unwrap() as f64;
        prop_assert!(f <= chi + 1e-9);
        prop_assert!(chi <= f * (1.0 + omega.ln()) + 1e-9, "chi {} fcc {} omega {}", chi, f, omega);
    }

    #[test]
    fn multiplicative((g, h) in (graph(1, 6), graph(1, 6))) {
        for id in [SpectralPointId::Lovasz, SpectralPointId::FracCliqueCover] {
            let fg = spectral::evaluate(id, &g).unwrap();
            let fh = spectral::evaluate(id, &h).unwrap();
            let fgh = spectral::evaluate(id, &g.strong_product(&h)).unwrap();
            prop_assert!(rel_close(fgh, fg * fh, 1e-4), "{}: {} vs {}", id, fgh, fg * fh);
        }
    }

    #[test]
    fn additive((g, h) in (graph(1, 6), graph(1, 6))) {
        for id in [SpectralPointId::Lovasz, SpectralPointId::FracCliqueCover] {
            let fg = spectral::evaluate(id, &g).unwrap();
            let fh = spectral::evaluate(id, &h).unwrap();
            let fu = spectral::evaluate(id, &g.disjoint_union(&h)).unwrap();
            prop_assert!((fu - fg - fh).abs() <= 1e-6, "{}: {} vs {}", id, fu, fg + fh);
        }
    }

    #[test]
    fn monotone_under_cohomomorphism(g in graph(1, 7), map_seed in prop::collection::vec(0usize..7, 1..7)) {
        // any h whose edges include every pair that the map sends to a confusable pair
        let map: Vec<usize> = map_seed.iter().map(|&v| v % g.n()).collect();
        let k = map.len();
        let mut edges = Vec::new();
        for a in 0..k {
            for b in a + 1..k {
                if g.confusable(map[a], map[b]) {
                    edges.push((a, b));
                }
            }
        }
        let h = Graph::from_edge_list(k, &edges).unwrap();
        prop_assert!(is_cohomomorphism(&h, &g, &map));
        for id in SpectralPointId::ALL {
            let fh = spectral::evaluate(id, &h).unwrap();
            let fg = spectral::evaluate(id, &g).unwrap();
            prop_assert!(fh <= fg + 1e-6, "{}: {} > {}", id, fh, fg);
        }
    }
}

#[test]
fn normalization() {
    for d in 1..=8 {
        let g = Graph::edgeless(d);
        for id in SpectralPointId::ALL {
            assert!((spectral::evaluate(id, &g).unwrap() - d as f64).abs() < 1e-6);
        }
        assert_eq!(clique_cover_number(&g).unwrap(), d);
    }
}

#[test]
fn pentagon_values() {
    let c5 = Graph::cycle(5);
    assert_eq!(alpha(&c5).unwrap(), 2);
    assert!((lovasz_theta(&c5).unwrap().value - 5f64.sqrt()).abs() < 1e-6);
    assert!((frac_clique_cover(&c5).unwrap().value - 2.5).abs() < 1e-9);
    assert_eq!(clique_cover_number(&c5).unwrap(), 3);
    let c5sq = c5.strong_product(&c5);
    assert_eq!(alpha(&c5sq).unwrap(), 5);
    assert!((lovasz_theta(&c5sq).unwrap().value - 5.0).abs() < 1e-5);
}

#[test]
fn isomorphic_relabelling_preserves_values() {
    let g = graph_from_bits(6, &[true, false, true, true, false, false, true, false, true, true, false, true, false, false, true]);
    let perm = [3, 0, 5, 1, 4, 2];
    let edges: Vec<(usize, usize)> = g.edges().into_iter().map(|(a, b)| (perm[a], perm[b])).collect();
    let h = Graph::from_edge_list(6, &edges).unwrap();
    assert!(find_isomorphism(&g, &h).is_some());
    for id in SpectralPointId::ALL {
        let a = spectral::evaluate(id, &g).unwrap();
        let b = spectral::evaluate(id, &h).unwrap();
        assert!((a - b).abs() < 1e-6);
    }
}
