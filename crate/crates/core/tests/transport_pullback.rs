mod common;

use common::{cases, dist, graph, stochastic};
use frate_core::aep::SubsetCertificate;
use frate_core::graph::is_cohomomorphism;
use frate_core::pullback::{
    enlarge_alphabet, hmm_frate_crosscheck, observed_block_entropies, pullback, pullback_f_identity,
    pullback_min_subset_identity, pullback_product_check, pullback_refinement_identity, Observation,
};
use frate_core::transport::{continuity_check, dbar_sequence, ornstein_distance, same_marginal_check, transport, DUALITY_TOL};
use frate_core::{Dist, Graph, MarkovSource, SpectralPointId};
use proptest::prelude::*;

fn words(k: usize, n: usize) -> usize {
    k.pow(n as u32)
}

fn observation(max_hidden: usize, max_observed: usize) -> impl Strategy<Value = Observation> {
    graph(1, max_observed).prop_flat_map(move |g| {
        let n = g.n();
        (Just(g), prop::collection::vec(0..n, 1..=max_hidden))
            .prop_map(|(g, map)| Observation::from_map(g, map).unwrap())
    })
}

proptest! {
    #![proptest_config(cases(24))]

    #[test]
    fn ornstein_is_a_metric(
        (k, n, p, q, r) in (2usize..4, 1usize..3).prop_flat_map(|(k, n)| {
            let m = words(k, n);
            (Just(k), Just(n), dist(m), dist(m), dist(m))
        }),
    ) {
        let d = |a: &Dist, b: &Dist| ornstein_distance(k, n, a, b).unwrap();
        let pq = d(&p, &q);
        let qp = d(&q, &p);
        prop_assert!((pq.distance - qp.distance).abs() < 1e-12);
        prop_assert!(pq.distance - pq.dual_bound <= DUALITY_TOL);
        prop_assert!(pq.distance <= p.total_variation(&q) + 1e-12);
        prop_assert!(d(&p, &p).distance.abs() < 1e-12);
        let tri = d(&p, &r).distance;
        prop_assert!(tri <= pq.distance + d(&q, &r).distance + 1e-8);
        // the coupling has the right marginals
        let mut rows = vec![0.0; p.len()];
        let mut cols = vec![0.0; q.len()];
        for &(x, y, m) in &pq.coupling.entries {
            rows[x] += m;
            cols[y] += m;
        }
        for x in 0..p.len() {
            prop_assert!((rows[x] - p.get(x)).abs() < 1e-9);
            prop_assert!((cols[x] - q.get(x)).abs() < 1e-9);
        }
    }

    #[test]
    fn transport_matches_brute_force_on_two_by_two(a in 0.0f64..1.0, b in 0.0f64..1.0, c in prop::collection::vec(0.0f64..5.0, 4)) {
        let p = [a, 1.0 - a];
        let q = [b, 1.0 - b];
        // the plan is determined by x = mass on (0, 0)
        let lo = (a + b - 1.0).max(0.0);
        let hi = a.min(b);
        let cost = |x: f64| c[0] * x + c[1] * (a - x) + c[2] * (b - x) + c[3] * (1.0 - a - b + x);
        let want = cost(lo).min(cost(hi));
        let sol = transport(&p, &q, |i, j| c[i * 2 + j]);
        if a > 0.0 && b > 0.0 {
            let sol = sol.unwrap();
            prop_assert!((sol.cost - want).abs() < 1e-9, "{} vs {}", sol.cost, want);
        }
    }

    #[test]
    fn same_marginal_continuity(
        (ph, cond_p, cond_q) in (dist(5), prop::collection::vec(dist(5), 5), prop::collection::vec(dist(5), 5)),
    ) {
        // laws on V(C5) × V(C5) sharing the second marginal
        let joint = |cond: &[Dist]| {
            let mut v = vec![0.0; 25];
            for h in 0..5 {
                for g in 0..5 {
                    v[g * 5 + h] = ph.get(h) * cond[h].get(g);
                }
            }
            Dist::from_weights(v).unwrap()
        };
        let c5 = Graph::cycle(5);
        let r = same_marginal_check(&c5, &c5, &joint(&cond_p), &joint(&cond_q)).unwrap();
        prop_assert!(r.holds, "{:?}", r);
    }

    #[test]
    fn ornstein_continuity((p, q) in (dist(25), dist(25))) {
        let r = continuity_check(&Graph::cycle(5), 2, &p, &q).unwrap();
        prop_assert!(r.holds, "{:?}", r);
        prop_assert!(r.distance <= p.total_variation(&q) + 1e-12);
    }

    #[test]
    fn pullback_is_cohomomorphism(obs in observation(7, 5)) {
        let g = pullback(&obs);
        prop_assert!(is_cohomomorphism(&g, obs.graph(), obs.map()));
        for a in 0..g.n() {
            for b in 0..g.n() {
                prop_assert_eq!(g.confusable(a, b), obs.graph().confusable(obs.map()[a], obs.map()[b]));
            }
        }
    }

    #[test]
    fn pullback_products_agree((o1, o2) in (observation(5, 4), observation(5, 4))) {
        prop_assert!(pullback_product_check(&o1, &o2));
    }

    #[test]
    fn pullback_induced_values(
        (obs, mask) in (observation(7, 5), 1u8..128),
    ) {
        let t: Vec<usize> = (0..obs.hidden_count()).filter(|&i| mask >> i & 1 == 1).collect();
        prop_assume!(!t.is_empty());
        for id in SpectralPointId::ALL {
            let r = pullback_f_identity(&obs, &t, id).unwrap();
            prop_assert!(r.equal, "{}: {:?}", id, r);
        }
    }

    #[test]
    fn pullback_refinement((obs, p) in observation(7, 5).prop_flat_map(|o| { let n = o.hidden_count(); (Just(o), dist(n)) })) {
        let r = pullback_refinement_identity(&obs, &p).unwrap();
        prop_assert!(r.equal, "{:?}", r);
    }
}

#[test]
fn dbar_between_chains_is_bounded_by_tv() {
    let a = MarkovSource::build_chain(vec![vec![0.9, 0.1], vec![0.2, 0.8]]).unwrap();
    let b = MarkovSource::build_chain(vec![vec![0.7, 0.3], vec![0.4, 0.6]]).unwrap();
    let seq = dbar_sequence(&a, &b, 4).unwrap();
    for (i, d) in seq.iter().enumerate() {
        let n = i + 1;
        let tv = a.marginal(n).unwrap().total_variation(&b.marginal(n).unwrap());
        assert!(*d <= tv + 1e-12);
        assert!(*d >= 0.0);
    }
    assert!((seq[0] - a.pi().total_variation(&b.pi())).abs() < 1e-9);
}

fn same_value(a: &SubsetCertificate, b: &SubsetCertificate) -> bool {
    (a.log2_f - b.log2_f).abs() <= 1e-6
}

#[test]
fn pullback_min_subsets_agree() {
    let src_rows = [
        vec![vec![0.5, 0.3, 0.2], vec![0.1, 0.6, 0.3], vec![0.3, 0.3, 0.4]],
        vec![vec![0.8, 0.1, 0.1], vec![0.2, 0.5, 0.3], vec![0.25, 0.25, 0.5]],
    ];
    let observations = [
        Observation::from_map(Graph::edgeless(2), vec![0, 0, 1]).unwrap(),
        Observation::from_map(Graph::from_edge_list(2, &[(0, 1)]).unwrap(), vec![0, 1, 1]).unwrap(),
        Observation::from_map(Graph::from_edge_list(3, &[(0, 1), (1, 2)]).unwrap(), vec![0, 1, 2]).unwrap(),
        Observation::from_map(Graph::from_edge_list(3, &[(0, 1)]).unwrap(), vec![2, 0, 1]).unwrap(),
        Observation::from_map(Graph::from_edge_list(3, &[(0, 2)]).unwrap(), vec![1, 1, 2]).unwrap(),
    ];
    let mut instances = 0;
    for obs in &observations {
        for w in &src_rows {
            let src = MarkovSource::build_chain(w.clone()).unwrap();
            let mu = src.marginal(2).unwrap();
            for id in SpectralPointId::ALL {
                let (observed, hidden) = pullback_min_subset_identity(obs, 2, &mu, 0.5, id).unwrap();
                assert!(same_value(&observed, &hidden), "{id}: {observed:?} vs {hidden:?}");
            }
            instances += 1;
        }
    }
    assert_eq!(instances, 10);
}

#[test]
fn hmm_brackets() {
    let w = vec![vec![0.8, 0.15, 0.05], vec![0.1, 0.7, 0.2], vec![0.3, 0.2, 0.5]];
    let src = MarkovSource::build_chain(w).unwrap();
    let obs = Observation::from_map(Graph::edgeless(2), vec![0, 0, 1]).unwrap();
    let report = hmm_frate_crosscheck(&obs, &src, 6).unwrap();
    assert!(report.all_overlap(), "{report:?}");
    for pair in report.rows.windows(2) {
        assert!(pair[1].hmm_upper <= pair[0].hmm_upper + 1e-9);
        assert!(pair[1].hmm_lower >= pair[0].hmm_lower - 1e-9);
    }
    let last = report.rows.last().unwrap();
    assert!(last.hmm_lower <= last.hmm_upper + 1e-12);

    // constant observation carries no information
    let constant = Observation::from_map(Graph::edgeless(1), vec![0, 0, 0]).unwrap();
    let rep = hmm_frate_crosscheck(&constant, &src, 3).unwrap();
    for r in &rep.rows {
        assert!(r.hmm_upper.abs() < 1e-12 && r.frate_upper.abs() < 1e-12);
    }
}

proptest! {
    #![proptest_config(cases(16))]

    #[test]
    fn hmm_brackets_random(w in stochastic(3), emit in stochastic(3)) {
        let (obs, src) = enlarge_alphabet(Graph::edgeless(3), &w, &emit).unwrap();
        prop_assume!(obs.hidden_count() <= 9);
        let report = hmm_frate_crosscheck(&obs, &src, 4).unwrap();
        prop_assert!(report.all_overlap(), "{:?}", report);
        let (hx, _) = observed_block_entropies(&obs, &src, 2).unwrap();
        // the observed letter law is the emission mixture under the stationary law
        let pi_hidden: Vec<f64> = {
            let chain = MarkovSource::build_chain(w.clone()).unwrap();
            chain.pi().probs().to_vec()
        };
        let letter: Vec<f64> = (0..3).map(|x| (0..3).map(|z| pi_hidden[z] * emit[z][x]).sum()).collect();
        let h1: f64 = letter.iter().filter(|&&p| p > 0.0).map(|&p| -p * p.log2()).sum();
        prop_assert!((hx[1] - h1).abs() < 1e-9);
    }
}
