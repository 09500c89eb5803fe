//! Run configuration file.

use std::path::Path;

use regensim::house_of_cards::Regime;
use regensim::models::config::{Model, ModelConfig, ScheduleConfig};
use regensim::ThresholdSchedule;
use serde::{Deserialize, Serialize};

use crate::error::CliError;

/// Depths over which a schedule override is compared with the model's own.
const DOMINANCE_DEPTH: usize = 512;

pub const DEFAULT_MAX_DEPTH: usize = 1_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Format {
    JsonLines,
    Csv,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub model: Option<ModelConfig>,
    /// Replaces the model's thresholds; must not exceed them.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub schedule: Option<ScheduleConfig>,
    #[serde(default = "unasserted")]
    pub regime: Regime,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(default = "default_max_depth")]
    pub max_depth: usize,
    /// Unset: JSON lines for `sample`, CSV for the tables.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub format: Option<Format>,
}

fn unasserted() -> Regime {
    Regime::Unasserted
}

fn default_max_depth() -> usize {
    DEFAULT_MAX_DEPTH
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            model: None,
            schedule: None,
            regime: Regime::Unasserted,
            seed: None,
            max_depth: DEFAULT_MAX_DEPTH,
            format: None,
        }
    }
}

impl RunConfig {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Config(format!("cannot read {}: {e}", path.display())))?;
        Self::parse(&text)
    }

    pub fn parse(text: &str) -> Result<Self, CliError> {
        let config: Self =
            serde_json::from_str(text).map_err(|e| CliError::Config(e.to_string()))?;
        if config.max_depth == 0 {
            return Err(CliError::Config("max_depth must be at least 1".into()));
        }
        Ok(config)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("config serializes")
    }

    pub fn model(&self) -> Result<Model, CliError> {
        let model = self
            .model
            .as_ref()
            .ok_or_else(|| CliError::Config("config has no model".into()))?;
        Ok(model.build()?)
    }

    /// The override if present (checked against the model when both are
    /// given), otherwise the model's schedule.
    pub fn schedule(&self) -> Result<ThresholdSchedule, CliError> {
        let own = self
            .model
            .as_ref()
            .map(|m| m.build().and_then(|m| m.schedule()))
            .transpose()?;
        match (&self.schedule, own) {
            (Some(c), own) => {
                let s = c.build()?;
                if let Some(own) = own {
                    if !s.dominated_by(&own, DOMINANCE_DEPTH) {
                        return Err(CliError::Config(
                            "schedule override exceeds the model's thresholds".into(),
                        ));
                    }
                }
                Ok(s)
            }
            (None, Some(own)) => Ok(own),
            (None, None) => Err(CliError::Config(
                "config needs a model or a schedule".into(),
            )),
        }
    }
}
