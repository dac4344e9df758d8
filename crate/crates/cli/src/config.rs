use std::fs;
use std::path::{Path, PathBuf};

use rq_core::words::{ParamsConfig, RankOneParams};
use serde::de::DeserializeOwned;
use serde::Deserialize;

use crate::error::{schema, CliResult};

/// Either a bare parameter object or parameters plus experiment settings.
/// Command-line flags override the settings given here.
#[derive(Clone, Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub params: Option<ParamsConfig>,
    pub sieve_limit: Option<u64>,
    pub cache_path: Option<PathBuf>,
    pub stage: Option<usize>,
    pub offsets: Option<Vec<i64>>,
    pub checkpoints: Option<Vec<u64>>,
    pub k_set: Option<Vec<u64>>,
    pub n_targets: Option<Vec<u64>>,
    pub epsilon: Option<f64>,
    pub epsilons: Option<Vec<f64>>,
    pub horizon: Option<usize>,
    pub m_candidates: Option<Vec<u64>>,
    pub tail_window: Option<usize>,
    pub bound: Option<u64>,
}

pub struct Loaded {
    pub config: ExperimentConfig,
    pub params: RankOneParams,
    /// Relative cache paths in the file resolve against its directory.
    pub base_dir: PathBuf,
}

fn decode<T: DeserializeOwned>(value: serde_json::Value, origin: &Path) -> CliResult<T> {
    serde_path_to_error::deserialize(value).map_err(|e| {
        let path = e.path().to_string();
        schema(format!("{}: at `{path}`: {}", origin.display(), e.inner()))
    })
}

pub fn load(path: &Path) -> CliResult<Loaded> {
    let text = fs::read_to_string(path)?;
    let value: serde_json::Value =
        serde_json::from_str(&text).map_err(|e| schema(format!("{}: {e}", path.display())))?;
    let wrapped = value.as_object().is_some_and(|o| o.contains_key("params"));
    let (config, params_cfg) = if wrapped {
        let config: ExperimentConfig = decode(value, path)?;
        let params = config
            .params
            .clone()
            .ok_or_else(|| schema(format!("{}: at `params`: expected an object", path.display())))?;
        (config, params)
    } else {
        (ExperimentConfig::default(), decode::<ParamsConfig>(value, path)?)
    };
    let params = RankOneParams::from_config(&params_cfg)
        .map_err(|e| schema(format!("{}: at `params`: {e}", path.display())))?;
    Ok(Loaded {
        config,
        params,
        base_dir: path.parent().map(Path::to_path_buf).unwrap_or_default(),
    })
}
