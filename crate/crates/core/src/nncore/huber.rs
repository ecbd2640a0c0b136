use ndarray::{Array1, ArrayView1, Zip};
use serde::{Deserialize, Serialize};

use crate::error::{shape_err, Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HuberConfig {
    pub delta: f64,
}

impl Default for HuberConfig {
    fn default() -> Self {
        Self { delta: 1.0 }
    }
}

impl HuberConfig {
    pub fn new(delta: f64) -> Result<Self> {
        if !(delta > 0.0 && delta.is_finite()) {
            return Err(Error::Config(format!("huber delta must be > 0, got {delta}")));
        }
        Ok(Self { delta })
    }

    /// Per-element loss for error `e = y − ŷ`.
    pub fn elementwise(&self, e: f64) -> f64 {
        let a = e.abs();
        if a <= self.delta {
            0.5 * e * e
        } else {
            self.delta * (a - 0.5 * self.delta)
        }
    }

    /// `∂/∂e` of [`HuberConfig::elementwise`].
    pub fn derivative(&self, e: f64) -> f64 {
        if e.abs() <= self.delta {
            e
        } else {
            self.delta * e.signum()
        }
    }
}

/// Mean Huber loss and its gradient with respect to `y_pred`.
pub fn huber_loss(
    y_true: ArrayView1<'_, f64>,
    y_pred: ArrayView1<'_, f64>,
    cfg: &HuberConfig,
) -> Result<(f64, Array1<f64>)> {
    if y_true.len() != y_pred.len() {
        return Err(shape_err(format!(
            "huber loss over {} targets and {} predictions",
            y_true.len(),
            y_pred.len()
        )));
    }
    if y_true.is_empty() {
        return Err(shape_err("huber loss over empty vectors"));
    }
    let n = y_true.len() as f64;
    let mut loss = 0.0;
    let grad = Zip::from(&y_true).and(&y_pred).map_collect(|&t, &p| {
        let e = t - p;
        loss += cfg.elementwise(e);
        -cfg.derivative(e) / n
    });
    Ok((loss / n, grad))
}
