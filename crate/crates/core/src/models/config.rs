//! Serializable model and schedule descriptions.
//!
//! ```json
//! {"kind": "binary_ar", "theta0": 0.2, "theta": [0.3], "link": "linear"}
//! {"kind": "finite_order", "alphabet": [-1, 1], "order": 1,
//!  "table": [[0.55, 0.45], [0.25, 0.75]]}
//! ```

use serde::{Deserialize, Serialize};

use super::{BinaryArSpec, CoefficientTail, FiniteOrderSpec, Link, DEFAULT_K_ENUM};
use crate::spec::{Alphabet, ScheduleTail, Specification, ThresholdSchedule};
use crate::Result;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LinkKind {
    #[default]
    Logistic,
    Linear,
}

/// `theta_m` past the explicit list.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum TailConfig {
    /// `scale * m^(-exponent)`.
    Power { scale: f64, exponent: f64 },
    /// `scale * ratio^m`.
    Geometric { scale: f64, ratio: f64 },
}

impl From<TailConfig> for CoefficientTail {
    fn from(t: TailConfig) -> Self {
        match t {
            TailConfig::Power { scale, exponent } => CoefficientTail::Power { scale, exponent },
            TailConfig::Geometric { scale, ratio } => CoefficientTail::Geometric { scale, ratio },
        }
    }
}

fn default_k_enum() -> usize {
    DEFAULT_K_ENUM
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum ModelConfig {
    BinaryAr {
        theta0: f64,
        /// `theta_1, theta_2, ...`
        #[serde(default)]
        theta: Vec<f64>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        tail: Option<TailConfig>,
        #[serde(default)]
        link: LinkKind,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        k0: Option<usize>,
        #[serde(default = "default_k_enum")]
        k_enum: usize,
    },
    FiniteOrder {
        alphabet: Vec<i64>,
        order: usize,
        /// One row per context, `w_{-1}` the fastest-varying digit.
        table: Vec<Vec<f64>>,
    },
}

/// A built model.
#[derive(Debug, Clone)]
pub enum Model {
    BinaryAr(BinaryArSpec),
    FiniteOrder(FiniteOrderSpec),
}

impl Model {
    pub fn spec(&self) -> &dyn Specification {
        match self {
            Model::BinaryAr(s) => s,
            Model::FiniteOrder(s) => s,
        }
    }

    pub fn schedule(&self) -> Result<ThresholdSchedule> {
        match self {
            Model::BinaryAr(s) => s.schedule(),
            Model::FiniteOrder(s) => s.schedule(),
        }
    }
}

impl ModelConfig {
    pub fn build(&self) -> Result<Model> {
        Ok(match self {
            ModelConfig::BinaryAr {
                theta0,
                theta,
                tail,
                link,
                k0,
                k_enum,
            } => {
                let link = match link {
                    LinkKind::Logistic => Link::Logistic,
                    LinkKind::Linear => Link::Linear,
                };
                let spec = BinaryArSpec::new(*theta0, theta.clone(), tail.map(Into::into), link)?
                    .with_k0(*k0)
                    .with_k_enum(*k_enum);
                Model::BinaryAr(spec)
            }
            ModelConfig::FiniteOrder {
                alphabet,
                order,
                table,
            } => Model::FiniteOrder(FiniteOrderSpec::new(
                Alphabet::new(alphabet.clone())?,
                *order,
                table.clone(),
            )?),
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum ScheduleTailConfig {
    Exhausted,
    Degenerate,
    Constant {
        value: f64,
    },
    /// `1 - scale * ratio^k`.
    GeometricGap {
        scale: f64,
        ratio: f64,
    },
    /// `1 - scale * (k + 1)^(-exponent)`.
    PowerGap {
        scale: f64,
        exponent: f64,
    },
}

/// An explicit threshold schedule.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScheduleConfig {
    #[serde(default)]
    pub prefix: Vec<f64>,
    pub tail: ScheduleTailConfig,
}

impl ScheduleConfig {
    pub fn build(&self) -> Result<ThresholdSchedule> {
        let tail = match self.tail {
            ScheduleTailConfig::Exhausted => ScheduleTail::Exhausted,
            ScheduleTailConfig::Degenerate => ScheduleTail::Degenerate,
            ScheduleTailConfig::Constant { value } => ScheduleTail::Constant(value),
            ScheduleTailConfig::GeometricGap { scale, ratio } => {
                ScheduleTail::GeometricGap { scale, ratio }
            }
            ScheduleTailConfig::PowerGap { scale, exponent } => {
                ScheduleTail::PowerGap { scale, exponent }
            }
        };
        ThresholdSchedule::new(self.prefix.clone(), tail)
    }
}
