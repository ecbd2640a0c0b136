//! Recurrent cells, the attention + dense head, and backpropagation through
//! time for the three model variants.

mod cell;
mod model;
mod params;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::qsim::{Entangler, MAX_QUBITS};

pub use cell::{
    cell_backward, lstm_cell, qlstm_ig_cell, qlstm_sg_cell, CellCache, CellState, GateValues,
};
pub use model::{
    model_backward, model_forward, unroll, unroll_backward, ForwardCache, Mode, ModelGradients,
};
pub use params::{
    param_count, DenseHead, LstmGateParams, ModelParams, ParamCount, QlstmIgParams, QlstmSgParams,
    QuantumGate, RecurrentParams,
};

/// Gate order used throughout: forget, input, candidate, output.
pub const GATE_NAMES: [&str; 4] = ["f", "i", "c", "o"];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Variant {
    #[serde(rename = "lstma")]
    Lstma,
    #[serde(rename = "qlstma-sg")]
    QlstmaSg,
    #[serde(rename = "qlstma-ig")]
    QlstmaIg,
}

impl Variant {
    pub fn is_quantum(self) -> bool {
        !matches!(self, Variant::Lstma)
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Variant::Lstma => "lstma",
            Variant::QlstmaSg => "qlstma-sg",
            Variant::QlstmaIg => "qlstma-ig",
        }
    }
}

impl fmt::Display for Variant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Variant {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "lstma" => Ok(Variant::Lstma),
            "qlstma-sg" => Ok(Variant::QlstmaSg),
            "qlstma-ig" => Ok(Variant::QlstmaIg),
            other => Err(Error::Config(format!(
                "unknown variant `{other}` (expected lstma, qlstma-sg or qlstma-ig)"
            ))),
        }
    }
}

/// Architecture of one model. `n_qubits`, `n_layers` and `entangler` are
/// ignored by the classical variant.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ModelConfig {
    pub variant: Variant,
    pub input_dim: usize,
    pub hidden: usize,
    pub dense: usize,
    pub n_qubits: usize,
    pub n_layers: usize,
    #[serde(default)]
    pub entangler: Entangler,
}

impl ModelConfig {
    pub fn new(variant: Variant) -> Self {
        Self {
            variant,
            input_dim: 4,
            hidden: 64,
            dense: 32,
            n_qubits: 4,
            n_layers: 1,
            entangler: Entangler::Chain,
        }
    }

    pub fn with_hidden(mut self, hidden: usize) -> Self {
        self.hidden = hidden;
        self
    }

    pub fn with_qubits(mut self, n_qubits: usize) -> Self {
        self.n_qubits = n_qubits;
        self
    }

    pub fn with_dense(mut self, dense: usize) -> Self {
        self.dense = dense;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.input_dim == 0 || self.hidden == 0 || self.dense == 0 {
            return Err(Error::Config(
                "input_dim, hidden and dense must all be ≥ 1".into(),
            ));
        }
        if self.variant.is_quantum() {
            if self.n_qubits == 0 || self.n_qubits > MAX_QUBITS {
                return Err(Error::Config(format!(
                    "n_qubits must be in 1..={MAX_QUBITS}, got {}",
                    self.n_qubits
                )));
            }
            if self.n_layers == 0 {
                return Err(Error::Config("n_layers must be ≥ 1".into()));
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn variant_round_trip() {
        for v in [Variant::Lstma, Variant::QlstmaSg, Variant::QlstmaIg] {
            assert_eq!(v.as_str().parse::<Variant>().unwrap(), v);
            let json = serde_json::to_string(&v).unwrap();
            assert_eq!(json, format!("\"{v}\""));
        }
        assert!("qlstm".parse::<Variant>().is_err());
    }

    #[test]
    fn config_validation() {
        assert!(ModelConfig::new(Variant::QlstmaIg).with_qubits(13).validate().is_err());
        assert!(ModelConfig::new(Variant::Lstma).with_qubits(13).validate().is_ok());
        assert!(ModelConfig::new(Variant::Lstma).with_hidden(0).validate().is_err());
    }
}
