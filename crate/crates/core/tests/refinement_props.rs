mod common;

use common::{cases, dist, dist_with_zeros, graph, graph_and_dist};
use frate_core::graph::is_cohomomorphism;
use frate_core::math::binary_entropy;
use frate_core::prob::{entropy, PairDist};
use frate_core::refinement::{graph_entropy_refinement, refinement_on_product, typegraph_estimate};
use frate_core::spectral::frac_clique_cover;
use frate_core::{Dist, Graph, SpectralPointId};
use proptest::prelude::*;

fn f(g: &Graph, p: &Dist) -> (f64, f64) {
    let r = graph_entropy_refinement(g, p).unwrap();
    (r.value, r.certified_gap)
}

fn marginals(p: &Dist, m: usize, k: usize) -> (Dist, Dist) {
    let a = (0..m).map(|x| (0..k).map(|y| p.get(x * k + y)).sum()).collect();
    let b = (0..k).map(|y| (0..m).map(|x| p.get(x * k + y)).sum()).collect();
    (Dist::from_weights(a).unwrap(), Dist::from_weights(b).unwrap())
}

/// Embeds an `m × k` joint law into a square one (zero padding).
fn pad(p: &Dist, m: usize, k: usize) -> Vec<f64> {
    let s = m.max(k);
    let mut out = vec![0.0; s * s];
    for a in 0..m {
        for b in 0..k {
            out[a * s + b] = p.get(a * k + b);
        }
    }
    out
}

fn joint(g: Graph, h: Graph) -> impl Strategy<Value = (Graph, Graph, Dist)> {
    let n = g.n() * h.n();
    (Just(g), Just(h), dist_with_zeros(n))
}

proptest! {
    #![proptest_config(cases(24))]

    #[test]
    fn edgeless_and_complete(p in (1usize..7).prop_flat_map(dist_with_zeros)) {
        let n = p.len();
        prop_assert!((f(&Graph::edgeless(n), &p).0 - entropy(&p)).abs() < 1e-12);
        prop_assert!(f(&Graph::complete(n), &p).0.abs() < 1e-12);
    }

    #[test]
    fn bounded_by_entropy_and_log_fcc((g, p) in graph_and_dist(1, 7)) {
        let (v, gap) = f(&g, &p);
        prop_assert!(v >= -1e-12);
        prop_assert!(v - gap <= entropy(&p) + 1e-9);
        let fcc = frac_clique_cover(&g).unwrap().value;
        prop_assert!(v - gap <= fcc.log2() + 1e-9);
    }

    #[test]
    fn concave(
        (g, p, q) in graph(2, 6).prop_flat_map(|g| { let n = g.n(); (Just(g), dist(n), dist(n)) }),
    ) {
        let (fp, gp) = f(&g, &p);
        let (fq, gq) = f(&g, &q);
        for i in 1..10 {
            let l = i as f64 / 10.0;
            let (fm, gm) = f(&g, &p.mix(&q, l));
            let slack = 2.0 * gp.max(gq).max(gm);
            prop_assert!(fm >= l * fp + (1.0 - l) * fq - slack - 1e-9, "λ={} {} < {}", l, fm, l * fp + (1.0 - l) * fq);
        }
    }

    #[test]
    fn subadditivity_chain((g, h, p) in (graph(1, 5), graph(1, 5)).prop_flat_map(|(g, h)| joint(g, h))) {
        let (m, k) = (g.n(), h.n());
        let whole = refinement_on_product(&[g.clone(), h.clone()], &p).unwrap();
        let (pg, ph) = marginals(&p, m, k);
        let (fg, gg) = f(&g, &pg);
        let (fh, gh) = f(&h, &ph);
        let info = PairDist::new(m.max(k), pad(&p, m, k)).unwrap().mutual_information();
        let slack = 3.0 * whole.certified_gap.max(gg).max(gh) + 1e-9;
        prop_assert!(whole.value <= fg + fh + slack, "{} > {}", whole.value, fg + fh);
        prop_assert!(fg + fh <= whole.value + info + slack, "{} > {}", fg + fh, whole.value + info);
    }

    #[test]
    fn conditional_nonnegative((g, h, p) in (graph(1, 5), graph(1, 5)).prop_flat_map(|(g, h)| joint(g, h))) {
        let (m, k) = (g.n(), h.n());
        let whole = refinement_on_product(&[g.clone(), h.clone()], &p).unwrap();
        let (_, ph) = marginals(&p, m, k);
        let (fh, gh) = f(&h, &ph);
        prop_assert!(fh <= whole.value + 2.0 * whole.certified_gap.max(gh) + 1e-9);
    }

    #[test]
    fn disjoint_union(
        (g, h, pg, ph, w) in (graph(1, 5), graph(1, 5)).prop_flat_map(|(g, h)| {
            let (m, k) = (g.n(), h.n());
            (Just(g), Just(h), dist(m), dist(k), 1u32..100)
        }),
    ) {
        let t = f64::from(w) / 100.0;
        let mut probs: Vec<f64> = pg.probs().iter().map(|x| t * x).collect();
        probs.extend(ph.probs().iter().map(|x| (1.0 - t) * x));
        let u = g.disjoint_union(&h);
        let (fu, gu) = f(&u, &Dist::from_weights(probs).unwrap());
        let (fg, gg) = f(&g, &pg);
        let (fh, gh) = f(&h, &ph);
        let want = t * fg + (1.0 - t) * fh + binary_entropy(t);
        prop_assert!((fu - want).abs() <= 3.0 * gu.max(gg).max(gh) + 1e-9, "{} vs {}", fu, want);
    }

    #[test]
    fn monotone_under_cohomomorphism(
        (g, map, p) in graph(1, 6).prop_flat_map(|g| {
            let n = g.n();
            (Just(g), prop::collection::vec(0..n, 1..7))
        }).prop_flat_map(|(g, map)| { let k = map.len(); (Just(g), Just(map), dist_with_zeros(k)) }),
        extra in prop::collection::vec(any::<bool>(), 21),
    ) {
        // h has every forced edge plus an arbitrary selection of others
        let k = map.len();
        let mut edges = Vec::new();
        let mut e = 0;
        for a in 0..k {
            for b in a + 1..k {
                if g.confusable(map[a], map[b]) || extra[e % extra.len()] {
                    edges.push((a, b));
                }
                e += 1;
            }
        }
        let h = Graph::from_edge_list(k, &edges).unwrap();
        prop_assert!(is_cohomomorphism(&h, &g, &map));
        let (fh, gh) = f(&h, &p);
        let (fg, gg) = f(&g, &p.pushforward(&map, g.n()));
        prop_assert!(fh <= fg + 2.0 * gh.max(gg) + 1e-9, "{} > {}", fh, fg);
    }
}

/// All compositions of `total` into `parts` nonnegative parts.
fn compositions(total: usize, parts: usize) -> Vec<Vec<usize>> {
    if parts == 1 {
        return vec![vec![total]];
    }
    (0..=total)
        .flat_map(|first| {
            compositions(total - first, parts - 1).into_iter().map(move |mut rest| {
                rest.insert(0, first);
                rest
            })
        })
        .collect()
}

#[test]
fn maximum_recovers_log_fcc() {
    let graphs = [
        Graph::cycle(5),
        Graph::from_edge_list(4, &[(0, 1), (1, 2), (2, 3)]).unwrap(),
        Graph::from_edge_list(5, &[(0, 1), (1, 2), (0, 2), (2, 3), (3, 4)]).unwrap(),
        Graph::from_edge_list(3, &[(0, 1)]).unwrap(),
    ];
    for g in &graphs {
        let n = g.n();
        // at least 10⁴ grid points for five letters
        let total = match n {
            5 => 20,
            4 => 40,
            _ => 140,
        };
        let best = compositions(total, n)
            .into_iter()
            .map(|c| {
                let p = Dist::from_weights(c.into_iter().map(|x| x as f64).collect()).unwrap();
                graph_entropy_refinement(g, &p).unwrap().value
            })
            .fold(f64::NEG_INFINITY, f64::max);
        let want = frac_clique_cover(g).unwrap().value.log2();
        assert!((best - want).abs() <= 1e-2, "max {best} vs log fcc {want}");
    }
}

#[test]
fn pentagon_uniform() {
    let (v, gap) = f(&Graph::cycle(5), &Dist::uniform(5));
    assert!((v - 2.5f64.log2()).abs() <= gap + 1e-6);
}

#[test]
fn type_graph_estimates_approach_refinement() {
    let g = Graph::cycle(5);
    let p = Dist::uniform(5);
    let value = graph_entropy_refinement(&g, &p).unwrap().value;
    for n in [2usize, 4, 6, 8] {
        let now = typegraph_estimate(SpectralPointId::FracCliqueCover, &g, &p, n).unwrap();
        let half = typegraph_estimate(SpectralPointId::FracCliqueCover, &g, &p, n.div_ceil(2)).unwrap();
        assert!((now - value).abs() <= (half - value).abs() + 0.05, "n={n}: {now} vs {half} (F = {value})");
    }
}
