//! JSON experiment config, merged under command-line flags.

use std::path::{Path, PathBuf};

use epictrl_core::chunglu::{generate, ChungLuModel, ModelSpec};
use epictrl_core::netcore::load_network;
use epictrl_core::saa::{Mode, Rounding};
use epictrl_core::ContactNetwork;
use serde::{Deserialize, Serialize};

use crate::args::{Algo, InstanceArgs};
use crate::error::{CliError, Result};

/// A model given inline or as a path to a JSON file.
#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
pub enum ModelSource {
    Spec(ModelSpec),
    Path(PathBuf),
}

/// Every field is optional; a flag on the command line wins over the
/// matching field here.
#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub graph: Option<PathBuf>,
    pub model: Option<ModelSource>,
    pub p: Option<f64>,
    pub budget: Option<f64>,
    pub epsilon: Option<f64>,
    pub gamma: Option<f64>,
    pub karger_gamma: Option<f64>,
    pub lambda: Option<f64>,
    pub repetitions: Option<u64>,
    pub rounding: Option<Rounding>,
    pub mode: Option<Mode>,
    pub num_samples: Option<u64>,
    pub eval_samples: Option<u64>,
    pub samples: Option<u64>,
    pub d: Option<f64>,
    pub algos: Option<Vec<Algo>>,
    pub kmax: Option<usize>,
    pub trials: Option<u64>,
    pub seed: Option<u64>,
    /// Relative paths in the file resolve against its directory.
    #[serde(skip)]
    pub base: PathBuf,
}

impl ExperimentConfig {
    pub fn load(path: Option<&Path>) -> Result<Self> {
        let Some(path) = path else {
            return Ok(ExperimentConfig::default());
        };
        let text = std::fs::read_to_string(path).map_err(|e| input_error(path, e))?;
        let mut cfg: ExperimentConfig =
            serde_json::from_str(&text).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?;
        cfg.base = path.parent().map(Path::to_path_buf).unwrap_or_default();
        Ok(cfg)
    }

    fn resolve(&self, p: &Path) -> PathBuf {
        if p.is_absolute() {
            p.to_path_buf()
        } else {
            self.base.join(p)
        }
    }

    pub fn seed(&self, flag: Option<u64>) -> u64 {
        flag.or(self.seed).unwrap_or(0)
    }

    /// The graph or model named by the flags, else by the config. Exactly
    /// one source must be given.
    pub fn source(&self, graph: Option<&Path>, model: Option<&Path>) -> Result<Source> {
        match (graph, model) {
            (Some(_), Some(_)) => Err(CliError::Config("give either --graph or --model, not both".into())),
            (Some(g), None) => Ok(Source::Graph(g.to_path_buf())),
            (None, Some(m)) => Ok(Source::Model(ModelSource::Path(m.to_path_buf()))),
            (None, None) => match (&self.graph, &self.model) {
                (Some(_), Some(_)) => Err(CliError::Config("config names both a graph and a model".into())),
                (Some(g), None) => Ok(Source::Graph(self.resolve(g))),
                (None, Some(ModelSource::Path(m))) => Ok(Source::Model(ModelSource::Path(self.resolve(m)))),
                (None, Some(spec)) => Ok(Source::Model(spec.clone())),
                (None, None) => Err(CliError::Config("no instance: pass --graph or --model".into())),
            },
        }
    }

    /// Loads or generates the instance and applies the probability override.
    pub fn instance(&self, args: &InstanceArgs, seed: u64) -> Result<(ContactNetwork, InstanceInfo)> {
        let source = self.source(args.graph.as_deref(), args.model.as_deref())?;
        let (network, mut info) = match &source {
            Source::Graph(path) => {
                let g = load_network(path).map_err(|e| match e {
                    epictrl_core::Error::Io(message) => CliError::Input { path: path.display().to_string(), message },
                    other => other.into(),
                })?;
                let info = InstanceInfo { graph: Some(path.display().to_string()), model: None, n: 0, m: 0, p: None };
                (g, info)
            }
            Source::Model(m) => {
                let model = load_model(m)?;
                let info = InstanceInfo { graph: None, model: Some(model.spec()), n: 0, m: 0, p: None };
                (generate(&model, seed), info)
            }
        };
        let network = match args.p.or(self.p) {
            Some(p) => {
                info.p = Some(p);
                network.with_uniform_probability(p)?
            }
            None => network,
        };
        info.n = network.n();
        info.m = network.m();
        Ok((network, info))
    }
}

#[derive(Debug, Clone)]
pub enum Source {
    Graph(PathBuf),
    Model(ModelSource),
}

/// Where the instance came from, echoed in reports.
#[derive(Debug, Clone, Serialize)]
pub struct InstanceInfo {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub graph: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub model: Option<ModelSpec>,
    pub n: usize,
    pub m: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub p: Option<f64>,
}

pub fn load_model(source: &ModelSource) -> Result<ChungLuModel> {
    let spec = match source {
        ModelSource::Spec(spec) => *spec,
        ModelSource::Path(path) => {
            let text = std::fs::read_to_string(path).map_err(|e| input_error(path, e))?;
            serde_json::from_str(&text).map_err(|e| CliError::Input {
                path: path.display().to_string(),
                message: e.to_string(),
            })?
        }
    };
    Ok(ChungLuModel::from_spec(&spec)?)
}

pub fn input_error(path: &Path, e: std::io::Error) -> CliError {
    CliError::Input { path: path.display().to_string(), message: e.to_string() }
}
