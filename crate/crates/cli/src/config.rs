use std::path::PathBuf;

use frate_core::SpectralPointId;
use serde::{Deserialize, Serialize};

use crate::error::{CliError, CliResult};

/// Default mass thresholds of a scan.
pub const DEFAULT_C: [f64; 3] = frate_core::aep::DEFAULT_C_LIST;
/// Default cap on the vertex count `|V|^n` of the largest strong power.
pub const DEFAULT_CAP_VERTICES: u64 = 1 << 16;

/// Inputs of a scan, loadable from JSON with `--config`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub graph: PathBuf,
    pub chain: PathBuf,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub obs: Option<PathBuf>,
    #[serde(default = "default_point")]
    pub point: String,
    #[serde(default = "default_n_max")]
    pub n_max: usize,
    #[serde(default = "default_k_max")]
    pub k_max: usize,
    #[serde(default = "default_c")]
    pub c: Vec<f64>,
    #[serde(default)]
    pub seeds: Vec<u64>,
    #[serde(default = "default_cap")]
    pub cap_vertices: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub out: Option<PathBuf>,
}

fn default_point() -> String {
    "fcc".into()
}

fn default_n_max() -> usize {
    8
}

fn default_k_max() -> usize {
    4
}

fn default_c() -> Vec<f64> {
    DEFAULT_C.to_vec()
}

fn default_cap() -> u64 {
    DEFAULT_CAP_VERTICES
}

impl ExperimentConfig {
    pub fn new(graph: PathBuf, chain: PathBuf) -> Self {
        ExperimentConfig {
            graph,
            chain,
            obs: None,
            point: default_point(),
            n_max: default_n_max(),
            k_max: default_k_max(),
            c: default_c(),
            seeds: Vec::new(),
            cap_vertices: default_cap(),
            out: None,
        }
    }

    /// Checks the invariants and returns the parsed spectral point.
    pub fn validate(&self) -> CliResult<SpectralPointId> {
        let mut files = vec![&self.graph, &self.chain];
        files.extend(self.obs.as_ref());
        for f in files {
            if !f.is_file() {
                return Err(CliError::Read {
                    path: f.clone(),
                    source: std::io::Error::new(std::io::ErrorKind::NotFound, "no such file"),
                });
            }
        }
        if self.n_max == 0 || self.k_max == 0 {
            return Err(CliError::Input("n_max and k_max must be positive".into()));
        }
        if self.cap_vertices == 0 {
            return Err(CliError::Input("cap_vertices must be positive".into()));
        }
        if self.c.is_empty() {
            return Err(CliError::Input("at least one mass threshold is needed".into()));
        }
        if let Some(c) = self.c.iter().find(|&&c| !(c > 0.0 && c <= 1.0)) {
            return Err(CliError::Input(format!("mass threshold {c} outside (0, 1]")));
        }
        parse_point(&self.point)
    }
}

pub fn parse_point(s: &str) -> CliResult<SpectralPointId> {
    SpectralPointId::parse(s).ok_or_else(|| CliError::Input(format!("unknown spectral point {s:?}")))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_fill_missing_fields() {
        let cfg: ExperimentConfig = serde_json::from_str(r#"{"graph": "g.json", "chain": "w.json"}"#).unwrap();
        assert_eq!(cfg, ExperimentConfig::new("g.json".into(), "w.json".into()));
    }

    #[test]
    fn validation_rejects_bad_thresholds() {
        let dir = std::env::temp_dir();
        let mut cfg = ExperimentConfig::new(dir.clone(), dir);
        assert!(matches!(cfg.validate(), Err(CliError::Read { .. })));
        cfg.c = vec![1.5];
        assert!(cfg.validate().is_err());
    }
}
