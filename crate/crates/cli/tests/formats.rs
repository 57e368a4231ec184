use std::collections::BTreeMap;

use frate_cli::config::ExperimentConfig;
use frate_cli::formats::{
    coupling_csv, coupling_rows, parse_coupling_csv, ChainFile, DistFile, GraphFile, ObservationFile,
};
use frate_cli::report::{frate_csv, parse_frate_csv, parse_scan_csv, FrateRow, ScanCsvRow, SCAN_HEADER};
use frate_core::pullback::Observation;
use frate_core::transport::ornstein_distance;
use frate_core::{Dist, Graph};
use proptest::prelude::*;

fn graph(max: usize) -> impl Strategy<Value = Graph> {
    (1..=max).prop_flat_map(|n| {
        let m = (n * (n - 1) / 2).max(1);
        prop::collection::vec(any::<bool>(), m).prop_map(move |bits| {
            let mut edges = Vec::new();
            let mut k = 0;
            for a in 0..n {
                for b in a + 1..n {
                    if bits[k] {
                        edges.push((a, b));
                    }
                    k += 1;
                }
            }
            let labels = (0..n).map(|i| format!("v{i}")).collect();
            Graph::from_edges(labels, &edges).unwrap()
        })
    })
}

fn label() -> impl Strategy<Value = String> {
    "[a-z][a-z0-9]{0,3}"
}

fn roundtrip<T: serde::Serialize + serde::de::DeserializeOwned>(v: &T) -> T {
    serde_json::from_str(&serde_json::to_string_pretty(v).unwrap()).unwrap()
}

proptest! {
    #[test]
    fn graph_file_roundtrip(g in graph(8)) {
        let file = GraphFile::from_graph(&g);
        let back: GraphFile = roundtrip(&file);
        prop_assert_eq!(&back, &file);
        prop_assert_eq!(back.to_graph().unwrap(), g);
    }

    #[test]
    fn dist_file_roundtrip(w in prop::collection::vec(0.001f64..1.0, 1..8)) {
        let p = Dist::from_weights(w).unwrap();
        let file = DistFile {
            alphabet: (0..p.len()).map(|i| format!("x{i}")).collect(),
            probs: p.probs().to_vec(),
        };
        let back: DistFile = roundtrip(&file);
        prop_assert_eq!(&back, &file);
        // loading renormalises, which may move the last bit
        let loaded = back.to_dist().unwrap();
        prop_assert!(loaded.probs().iter().zip(p.probs()).all(|(a, b)| (a - b).abs() <= 1e-15));
    }

    #[test]
    fn chain_file_roundtrip(rows in (1usize..5).prop_flat_map(|n| prop::collection::vec(prop::collection::vec(1u32..20, n), n))) {
        let w: Vec<Vec<f64>> = rows
            .iter()
            .map(|r| {
                let s: u32 = r.iter().sum();
                r.iter().map(|&x| f64::from(x) / f64::from(s)).collect()
            })
            .collect();
        let file = ChainFile { states: (0..w.len()).map(|i| i.to_string()).collect(), w };
        let back: ChainFile = roundtrip(&file);
        prop_assert_eq!(&back, &file);
        prop_assert!(back.to_source().is_ok());
    }

    #[test]
    fn observation_file_roundtrip(
        (g, map) in graph(5).prop_flat_map(|g| { let n = g.n(); (Just(g), prop::collection::vec(0..n, 1..7)) }),
        names in prop::collection::btree_set(label(), 7),
    ) {
        let hidden: Vec<String> = names.into_iter().take(map.len()).collect();
        let obs = Observation::new(hidden, g, map).unwrap();
        let file = ObservationFile::from_observation(&obs);
        let back: ObservationFile = roundtrip(&file);
        prop_assert_eq!(&back, &file);
        prop_assert_eq!(back.to_observation().unwrap(), obs);
    }

    #[test]
    fn scan_csv_roundtrip(rows in prop::collection::vec((1usize..20, 0.01f64..1.0, -5.0f64..5.0, -5.0f64..5.0, 0.0f64..1.0), 0..10)) {
        let rows: Vec<ScanCsvRow> = rows
            .into_iter()
            .map(|(n, c, v, lb, m)| ScanCsvRow {
                n,
                c,
                spectral_point: "fcc".into(),
                heuristic_value: v,
                lower_bound: lb,
                bracket_lower: v - 1.0,
                bracket_upper: v + 1.0,
                mass: m,
            })
            .collect();
        let mut w = csv::WriterBuilder::new().has_headers(false).from_writer(Vec::new());
        for r in &rows {
            w.serialize(r).unwrap();
        }
        let text = format!("{SCAN_HEADER}\n{}", String::from_utf8(w.into_inner().unwrap()).unwrap());
        prop_assert_eq!(parse_scan_csv(&text).unwrap(), rows);
    }

    #[test]
    fn frate_csv_roundtrip(vals in prop::collection::vec((-2.0f64..2.0, 0.0f64..1.0), 1..6)) {
        let rows: Vec<FrateRow> = vals
            .iter()
            .enumerate()
            .map(|(i, &(u, gap))| FrateRow {
                k: i + 1,
                upper: u,
                lower: u - gap,
                width: gap,
                rate_lower: u - 2.0 * gap,
                solver_gap: gap / 10.0,
                certificate: "solver-gap".into(),
            })
            .collect();
        prop_assert_eq!(parse_frate_csv(&frate_csv(&rows)).unwrap(), rows);
    }

    #[test]
    fn coupling_csv_roundtrip((p, q) in (prop::collection::vec(0.01f64..1.0, 4), prop::collection::vec(0.01f64..1.0, 4))) {
        let (p, q) = (Dist::from_weights(p).unwrap(), Dist::from_weights(q).unwrap());
        let r = ornstein_distance(2, 2, &p, &q).unwrap();
        let rows = coupling_rows(&r.coupling, &["a".to_string(), "b".to_string()]);
        prop_assert_eq!(parse_coupling_csv(&coupling_csv(&rows)).unwrap(), rows.clone());
        let mass: f64 = rows.iter().map(|r| r.mass).sum();
        prop_assert!((mass - 1.0).abs() < 1e-9);
    }
}

#[test]
fn config_roundtrip() {
    let mut cfg = ExperimentConfig::new("g.json".into(), "w.json".into());
    cfg.obs = Some("o.json".into());
    cfg.c = vec![0.25, 0.75];
    cfg.seeds = vec![1, 2];
    cfg.out = Some("out".into());
    assert_eq!(roundtrip(&cfg), cfg);
}

#[test]
fn observation_map_is_keyed_by_hidden_label() {
    let file: ObservationFile = serde_json::from_str(
        r#"{"hidden": ["z2", "z1"], "map": {"z1": "x", "z2": "y"}, "graph": {"vertices": ["x", "y"], "edges": [["x", "y"]]}}"#,
    )
    .unwrap();
    let obs = file.to_observation().unwrap();
    assert_eq!(obs.map(), &[1, 0]);
    let expect: BTreeMap<String, String> =
        [("z1".to_string(), "x".to_string()), ("z2".to_string(), "y".to_string())].into_iter().collect();
    assert_eq!(ObservationFile::from_observation(&obs).map, expect);
}
