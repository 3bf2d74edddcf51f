//! Scenario configuration files (JSON).

use std::path::Path;

use serde::{Deserialize, Serialize};

use kimura_core::kimura::{default_truncation_and_degree, min_projection_order};
use kimura_core::wf::MIN_REPLICATES;
use kimura_core::InitialCondition;

use crate::CliError;

fn default_output_grid() -> usize {
    101
}

/// One scenario: an initial condition, the times to report, and optionally
/// a Wright-Fisher block for `validate-mc`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioConfig {
    pub initial_condition: InitialCondition,
    /// Highest retained mode; defaults to 60 for point masses, 30 otherwise.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub truncation: Option<usize>,
    pub times: Vec<f64>,
    /// Gauss-Legendre order per smooth piece for projecting the initial density.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub quad_order: Option<usize>,
    /// Number of x points in each density file.
    #[serde(default = "default_output_grid")]
    pub output_grid: usize,
    /// Diffusion constant; only 1 is supported.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub kappa: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub wf: Option<WfBlock>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WfBlock {
    pub population_size: u64,
    pub replicates: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    /// Defaults to the generation of the last requested time.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub generations: Option<usize>,
    /// Defaults to the location of a point-mass initial condition.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub x0: Option<f64>,
}

/// Reads and validates a config; schema errors name the offending field.
pub fn load_config(path: &Path) -> Result<ScenarioConfig, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Config(format!("cannot read {}: {e}", path.display())))?;
    parse_config(&text)
}

pub fn parse_config(text: &str) -> Result<ScenarioConfig, CliError> {
    let de = &mut serde_json::Deserializer::from_str(text);
    let cfg: ScenarioConfig = serde_path_to_error::deserialize(de).map_err(|e| {
        let path = e.path().to_string();
        CliError::Config(format!("at `{path}`: {}", e.into_inner()))
    })?;
    cfg.validate()?;
    Ok(cfg)
}

impl ScenarioConfig {
    pub fn validate(&self) -> Result<(), CliError> {
        let bad = |field: &str, msg: String| Err(CliError::Config(format!("at `{field}`: {msg}")));
        if let Err(e) = self.initial_condition.validate() {
            return bad("initial_condition", e.to_string());
        }
        for (i, &t) in self.times.iter().enumerate() {
            if !(t.is_finite() && t >= 0.0) {
                return bad(&format!("times[{i}]"), format!("time must be finite and nonnegative, got {t}"));
            }
            if i > 0 && t < self.times[i - 1] {
                return bad(&format!("times[{i}]"), "times must be sorted ascending".into());
            }
        }
        if self.output_grid < 2 {
            return bad("output_grid", format!("need at least 2 points, got {}", self.output_grid));
        }
        if let Some(k) = self.kappa {
            if k != 1.0 {
                return bad("kappa", format!("only kappa = 1 is supported, got {k}"));
            }
        }
        let truncation = self.truncation();
        if truncation < 2 {
            return bad("truncation", format!("must be at least 2, got {truncation}"));
        }
        if !self.initial_condition.is_delta() {
            let need = self.min_quad_order();
            if self.quad_order() < need {
                return bad(
                    "quad_order",
                    format!("{} is too small for truncation {truncation}; need at least {need}", self.quad_order()),
                );
            }
        }
        if let Some(wf) = &self.wf {
            if wf.replicates < MIN_REPLICATES {
                return bad("wf.replicates", format!("must be at least {MIN_REPLICATES}, got {}", wf.replicates));
            }
        }
        Ok(())
    }

    pub fn truncation(&self) -> usize {
        self.truncation.unwrap_or_else(|| default_truncation_and_degree(&self.initial_condition).0)
    }

    fn min_quad_order(&self) -> usize {
        let degree = default_truncation_and_degree(&self.initial_condition).1;
        min_projection_order(self.truncation(), degree)
    }

    /// Explicit `quad_order`, or the smallest exact one.
    pub fn quad_order(&self) -> usize {
        self.quad_order.unwrap_or_else(|| self.min_quad_order())
    }
}
