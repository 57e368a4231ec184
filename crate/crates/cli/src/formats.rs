//! JSON file formats for graphs, distributions, chains and observations,
//! and the coupling CSV.

use std::collections::BTreeMap;
use std::fs;
use std::path::Path;

use frate_core::pullback::Observation;
use frate_core::transport::Coupling;
use frate_core::words::{word_label, WordSpace};
use frate_core::{Dist, Graph, MarkovSource};
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::error::{CliError, CliResult};

/// `{"vertices": [...], "edges": [["a","b"], ...]}`
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GraphFile {
    pub vertices: Vec<String>,
    pub edges: Vec<[String; 2]>,
}

impl GraphFile {
    pub fn from_graph(g: &Graph) -> Self {
        GraphFile {
            vertices: g.labels().to_vec(),
            edges: g
                .edges()
                .into_iter()
                .map(|(a, b)| [g.label(a).to_string(), g.label(b).to_string()])
                .collect(),
        }
    }

    /// Self-loops, repeated edges (in either orientation) and unknown
    /// endpoints are rejected.
    pub fn to_graph(&self) -> CliResult<Graph> {
        let index: BTreeMap<&str, usize> = self
            .vertices
            .iter()
            .enumerate()
            .map(|(i, v)| (v.as_str(), i))
            .collect();
        let edges = self
            .edges
            .iter()
            .map(|[a, b]| {
                let ia = *index
                    .get(a.as_str())
                    .ok_or_else(|| CliError::Input(format!("edge endpoint {a:?} is not a vertex")))?;
                let ib = *index
                    .get(b.as_str())
                    .ok_or_else(|| CliError::Input(format!("edge endpoint {b:?} is not a vertex")))?;
                Ok((ia, ib))
            })
            .collect::<CliResult<Vec<_>>>()?;
        Ok(Graph::from_edges(self.vertices.clone(), &edges)?)
    }
}

/// `{"alphabet": [...], "probs": [...]}`
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DistFile {
    pub alphabet: Vec<String>,
    pub probs: Vec<f64>,
}

impl DistFile {
    pub fn to_dist(&self) -> CliResult<Dist> {
        if self.alphabet.len() != self.probs.len() {
            return Err(CliError::Input(format!(
                "{} letters but {} probabilities",
                self.alphabet.len(),
                self.probs.len()
            )));
        }
        Ok(Dist::new(self.probs.clone())?)
    }

    /// Reorders the law onto `labels`, which must be a permutation of the
    /// alphabet.
    pub fn to_dist_on(&self, labels: &[String]) -> CliResult<Dist> {
        let p = self.to_dist()?;
        if labels.len() != self.alphabet.len() {
            return Err(CliError::Input("distribution alphabet does not match".into()));
        }
        let probs = labels
            .iter()
            .map(|l| {
                self.alphabet
                    .iter()
                    .position(|a| a == l)
                    .map(|i| p.get(i))
                    .ok_or_else(|| CliError::Input(format!("letter {l:?} missing from the distribution")))
            })
            .collect::<CliResult<Vec<_>>>()?;
        Ok(Dist::new(probs)?)
    }
}

/// `{"states": [...], "W": [[...], ...]}`
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ChainFile {
    pub states: Vec<String>,
    #[serde(rename = "W")]
    pub w: Vec<Vec<f64>>,
}

impl ChainFile {
    pub fn to_source(&self) -> CliResult<MarkovSource> {
        if self.states.len() != self.w.len() {
            return Err(CliError::Input(format!(
                "{} states but {} rows",
                self.states.len(),
                self.w.len()
            )));
        }
        let mut seen = self.states.clone();
        seen.sort();
        seen.dedup();
        if seen.len() != self.states.len() {
            return Err(CliError::Input("duplicate state label".into()));
        }
        Ok(MarkovSource::build_chain(self.w.clone())?)
    }

    /// Checks that the states are the graph's vertices in the same order.
    pub fn check_alphabet(&self, g: &Graph) -> CliResult<()> {
        if self.states != g.labels() {
            return Err(CliError::Input(
                "chain states must list the graph vertices in the same order".into(),
            ));
        }
        Ok(())
    }
}

/// `{"hidden": [...], "map": {"z": "x", ...}, "graph": <graph>}`
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ObservationFile {
    pub hidden: Vec<String>,
    pub map: BTreeMap<String, String>,
    pub graph: GraphFile,
}

impl ObservationFile {
    pub fn from_observation(obs: &Observation) -> Self {
        let g = obs.graph();
        ObservationFile {
            hidden: obs.hidden().to_vec(),
            map: obs
                .hidden()
                .iter()
                .zip(obs.map())
                .map(|(z, &x)| (z.clone(), g.label(x).to_string()))
                .collect(),
            graph: GraphFile::from_graph(g),
        }
    }

    pub fn to_observation(&self) -> CliResult<Observation> {
        let graph = self.graph.to_graph()?;
        if self.map.len() != self.hidden.len() {
            return Err(CliError::Input("map must assign every hidden state exactly once".into()));
        }
        let map = self
            .hidden
            .iter()
            .map(|z| {
                let x = self
                    .map
                    .get(z)
                    .ok_or_else(|| CliError::Input(format!("hidden state {z:?} has no image")))?;
                graph
                    .index_of(x)
                    .ok_or_else(|| CliError::Input(format!("image {x:?} of {z:?} is not a vertex")))
            })
            .collect::<CliResult<Vec<_>>>()?;
        Ok(Observation::new(self.hidden.clone(), graph, map)?)
    }
}

pub fn read_json<T: DeserializeOwned>(path: &Path) -> CliResult<T> {
    let text = fs::read_to_string(path).map_err(|source| CliError::Read {
        path: path.to_path_buf(),
        source,
    })?;
    serde_json::from_str(&text).map_err(|e| CliError::Parse {
        path: path.to_path_buf(),
        message: e.to_string(),
    })
}

/// Pretty JSON with a trailing newline.
pub fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("report types serialise");
    s.push('\n');
    s
}

pub fn write_file(path: &Path, contents: &str) -> CliResult<()> {
    if let Some(dir) = path.parent() {
        if !dir.as_os_str().is_empty() {
            fs::create_dir_all(dir).map_err(|source| CliError::Write {
                path: dir.to_path_buf(),
                source,
            })?;
        }
    }
    fs::write(path, contents).map_err(|source| CliError::Write {
        path: path.to_path_buf(),
        source,
    })
}

pub fn load_graph(path: &Path) -> CliResult<Graph> {
    read_json::<GraphFile>(path)?.to_graph()
}

pub fn load_chain(path: &Path) -> CliResult<(ChainFile, MarkovSource)> {
    let file: ChainFile = read_json(path)?;
    let src = file.to_source()?;
    Ok((file, src))
}

pub fn load_observation(path: &Path) -> CliResult<Observation> {
    read_json::<ObservationFile>(path)?.to_observation()
}

/// One row of a coupling export.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CouplingRow {
    pub x: String,
    pub y: String,
    pub mass: f64,
}

/// Sparse triples `x,y,mass` with word labels over `letters`.
pub fn coupling_rows(coupling: &Coupling, letters: &[String]) -> Vec<CouplingRow> {
    let space = WordSpace::new(coupling.alphabet, coupling.n);
    let label = |i: usize| {
        let w: Vec<&str> = space.letters(i).into_iter().map(|a| letters[a].as_str()).collect();
        word_label(&w)
    };
    coupling
        .entries
        .iter()
        .map(|&(x, y, mass)| CouplingRow {
            x: label(x),
            y: label(y),
            mass,
        })
        .collect()
}

pub fn coupling_csv(rows: &[CouplingRow]) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    for r in rows {
        w.serialize(r).expect("in-memory csv");
    }
    String::from_utf8(w.into_inner().expect("in-memory csv")).expect("utf-8")
}

pub fn parse_coupling_csv(text: &str) -> CliResult<Vec<CouplingRow>> {
    csv::Reader::from_reader(text.as_bytes())
        .deserialize()
        .collect::<Result<Vec<CouplingRow>, _>>()
        .map_err(|e| CliError::Input(format!("coupling csv: {e}")))
}
