use serde::{Deserialize, Serialize};

use crate::dataio::DEFAULT_TIMESTEPS;
use crate::error::{Error, Result};
use crate::network::{ModelConfig, Variant};
use crate::nncore::{AdamConfig, HuberConfig};
use crate::qsim::Entangler;

/// How per-run curves are combined into the final prediction.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum AveragingDomain {
    /// Arithmetic mean of the mD curves.
    #[default]
    Linear,
    /// Mean of `ln(k + c)`, transformed back.
    Log,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct TrainConfig {
    pub variant: Variant,
    pub n_qubits: usize,
    pub n_layers: usize,
    pub entangler: Entangler,
    pub hidden: usize,
    pub dense: usize,
    pub timesteps: usize,
    pub epochs: usize,
    pub checkpoint_every: usize,
    pub runs: usize,
    pub seed: u64,
    pub adam: AdamConfig,
    pub dropout: f64,
    pub huber: HuberConfig,
    pub averaging: AveragingDomain,
}

impl Default for TrainConfig {
    fn default() -> Self {
        Self {
            variant: Variant::QlstmaIg,
            n_qubits: 4,
            n_layers: 1,
            entangler: Entangler::Chain,
            hidden: 64,
            dense: 32,
            timesteps: DEFAULT_TIMESTEPS,
            epochs: 1000,
            checkpoint_every: 10,
            runs: 5,
            seed: 0,
            adam: AdamConfig::default(),
            dropout: 0.5,
            huber: HuberConfig::default(),
            averaging: AveragingDomain::Linear,
        }
    }
}

impl TrainConfig {
    pub fn new(variant: Variant) -> Self {
        Self {
            variant,
            ..Self::default()
        }
    }

    pub fn model_config(&self) -> ModelConfig {
        ModelConfig {
            variant: self.variant,
            input_dim: 4,
            hidden: self.hidden,
            dense: self.dense,
            n_qubits: self.n_qubits,
            n_layers: self.n_layers,
            entangler: self.entangler,
        }
    }

    /// Number of intermediate checkpoints a run produces.
    pub fn checkpoint_count(&self) -> usize {
        self.epochs / self.checkpoint_every
    }

    pub fn validate(&self) -> Result<()> {
        if self.epochs == 0 {
            return Err(Error::Config("epochs must be ≥ 1".into()));
        }
        if self.runs == 0 {
            return Err(Error::Config("runs must be ≥ 1".into()));
        }
        if self.checkpoint_every == 0 {
            return Err(Error::Config("checkpoint cadence must be ≥ 1".into()));
        }
        if self.timesteps < 2 {
            return Err(Error::Config("timesteps must be ≥ 2".into()));
        }
        if !(0.0..1.0).contains(&self.dropout) {
            return Err(Error::Config(format!("dropout must be in [0, 1), got {}", self.dropout)));
        }
        if !(self.adam.lr >= 0.0 && self.adam.lr.is_finite()) {
            return Err(Error::Config(format!("learning rate must be ≥ 0, got {}", self.adam.lr)));
        }
        HuberConfig::new(self.huber.delta)?;
        self.model_config().validate()
    }
}
