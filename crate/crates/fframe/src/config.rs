//! Run configuration shared by the CLI commands.

use serde::{Deserialize, Serialize};

use crate::frame::FrameSpec;
use crate::hierarchy::WeightHierarchy;
use crate::reconstruct::DualFamily;
use crate::{Error, Result};

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub frame: FrameSpec,
    /// explicit weight table; defaults to the polynomial family (1+j)^s
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub weights: Option<WeightHierarchy>,
    /// max level S
    #[serde(default = "default_levels")]
    pub levels: usize,
    #[serde(default = "default_samples")]
    pub samples: usize,
    #[serde(default)]
    pub seed: u64,
    #[serde(default = "default_eps_grid")]
    pub eps_grid: Vec<f64>,
    /// cross-check closed forms against the brute-force oracle
    #[serde(default)]
    pub oracle: bool,
    /// explicit dual family for general frames
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dual: Option<Vec<Vec<f64>>>,
}

fn default_levels() -> usize {
    2
}

fn default_samples() -> usize {
    200
}

fn default_eps_grid() -> Vec<f64> {
    (0..=6).map(|k| 10f64.powi(-k)).collect()
}

impl RunConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        let cfg: RunConfig = serde_json::from_str(text)
            .map_err(|e| Error::Precondition(format!("config parse error: {e}")))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if let Some(w) = &self.weights {
            if w.dim() != self.frame.dim() {
                return Err(Error::DimensionMismatch(format!(
                    "field weights: dim {} vs frame dim {}",
                    w.dim(),
                    self.frame.dim()
                )));
            }
        }
        if self.eps_grid.iter().any(|&e| e.is_nan() || e <= 0.0) {
            return Err(Error::Precondition("field eps_grid: entries must be positive".into()));
        }
        Ok(())
    }

    /// The hierarchy this run operates in.
    pub fn hierarchy(&self) -> WeightHierarchy {
        match &self.weights {
            Some(w) => w.clone(),
            None => WeightHierarchy::polynomial(self.levels, self.frame.dim()),
        }
    }

    /// The dual family, when one is defined: canonical for block frames,
    /// from the config's `dual` field otherwise.
    pub fn dual_family(&self) -> Result<Option<DualFamily>> {
        if let Some(vectors) = &self.dual {
            return Ok(Some(DualFamily::from_vectors(&self.frame, vectors.clone())?));
        }
        Ok(self
            .frame
            .as_block()
            .map(crate::reconstruct::DualFamily::build_dual))
    }
}
