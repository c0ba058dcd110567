//! Run configuration loaded from TOML.
//!
//! Every section and key is optional; missing values take their defaults.
//!
//! ```toml
//! seed = 42
//!
//! [ingest]
//! window_hours = 72
//! api_base = "https://api.pullpush.io"
//!
//! [sentiment]
//! normalization_alpha = 15.0
//!
//! [preprocess]
//! train_ratio = 0.8
//!
//! [model]
//! cv_folds = 5
//!
//! [model.grid]
//! max_depth = [3, 5]
//! ```

use std::path::Path;
use std::time::Duration;

use serde::{Deserialize, Serialize};

use crate::explain::MAX_BACKGROUND;
use crate::ingest::{ClientConfig, RetryPolicy, DEFAULT_WINDOW_HOURS};
use crate::model::ParamGrid;
use crate::preprocess::PreprocessConfig;
use crate::sentiment::RuleConfig;
use crate::Error;

pub const DEFAULT_SEED: u64 = 42;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Config {
    pub seed: u64,
    pub ingest: IngestConfig,
    pub sentiment: RuleConfig,
    pub preprocess: PreprocessConfig,
    pub model: ModelConfig,
    pub explain: ExplainConfig,
}

impl Default for Config {
    fn default() -> Self {
        Config {
            seed: DEFAULT_SEED,
            ingest: IngestConfig::default(),
            sentiment: RuleConfig::default(),
            preprocess: PreprocessConfig::default(),
            model: ModelConfig::default(),
            explain: ExplainConfig::default(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct IngestConfig {
    pub window_hours: u32,
    /// Archive base URL; `None` uses the environment or the built-in default.
    pub api_base: Option<String>,
    pub retry_attempts: u32,
    pub initial_backoff_ms: u64,
    pub request_interval_ms: u64,
    pub timeout_secs: u64,
}

impl Default for IngestConfig {
    fn default() -> Self {
        IngestConfig {
            window_hours: DEFAULT_WINDOW_HOURS,
            api_base: None,
            retry_attempts: 3,
            initial_backoff_ms: 1000,
            request_interval_ms: 1000,
            timeout_secs: 30,
        }
    }
}

impl IngestConfig {
    pub fn client(&self) -> ClientConfig {
        let mut client = ClientConfig::default();
        if let Some(base) = &self.api_base {
            client.base_url = base.clone();
        }
        client.retry = RetryPolicy {
            attempts: self.retry_attempts,
            initial_backoff: Duration::from_millis(self.initial_backoff_ms),
        };
        client.request_interval = Duration::from_millis(self.request_interval_ms);
        client.timeout = Duration::from_secs(self.timeout_secs);
        client
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ModelConfig {
    pub cv_folds: usize,
    pub grid: ParamGrid,
}

impl Default for ModelConfig {
    fn default() -> Self {
        ModelConfig {
            cv_folds: 5,
            grid: ParamGrid::default(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ExplainConfig {
    pub background_cap: usize,
}

impl Default for ExplainConfig {
    fn default() -> Self {
        ExplainConfig {
            background_cap: MAX_BACKGROUND,
        }
    }
}

impl Config {
    pub fn from_toml(text: &str) -> Result<Self, Error> {
        let config: Config = toml::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        config.validate()?;
        Ok(config)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self, Error> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::from_toml(&text).map_err(|e| Error::Config(format!("{}: {e}", path.display())))
    }

    pub fn validate(&self) -> Result<(), Error> {
        let bad = |m: String| Err(Error::Config(m));
        if self.ingest.window_hours == 0 {
            return bad("ingest.window_hours must be positive".into());
        }
        if self.ingest.retry_attempts == 0 {
            return bad("ingest.retry_attempts must be at least 1".into());
        }
        self.sentiment.validate().map_err(Error::Config)?;
        let r = self.preprocess.train_ratio;
        if !(r > 0.0 && r < 1.0) {
            return bad(format!("preprocess.train_ratio must be in (0, 1), got {r}"));
        }
        if self.preprocess.iqr.k < 0.0 {
            return bad("preprocess.iqr.k must be non-negative".into());
        }
        if self.model.cv_folds < 2 {
            return bad("model.cv_folds must be at least 2".into());
        }
        for params in self.model.grid.combinations() {
            params
                .validate()
                .map_err(|e| Error::Config(e.to_string()))?;
        }
        if self.model.grid.combinations().is_empty() {
            return bad("model.grid is empty".into());
        }
        if self.explain.background_cap == 0 {
            return bad("explain.background_cap must be positive".into());
        }
        Ok(())
    }
}
