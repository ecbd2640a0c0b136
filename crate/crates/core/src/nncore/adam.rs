use ndarray::{ArrayViewD, ArrayViewMutD};
use serde::{Deserialize, Serialize};

use super::Parameters;
use crate::error::{shape_err, Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AdamConfig {
    pub lr: f64,
    pub beta1: f64,
    pub beta2: f64,
    pub eps: f64,
}

impl Default for AdamConfig {
    fn default() -> Self {
        Self {
            lr: 1e-3,
            beta1: 0.9,
            beta2: 0.999,
            eps: 1e-8,
        }
    }
}

/// Moment estimates, flattened in [`Parameters`] order.
#[derive(Debug, Clone, PartialEq)]
pub struct AdamState {
    pub first_moment: Vec<f64>,
    pub second_moment: Vec<f64>,
    pub step_count: u64,
}

impl AdamState {
    pub fn new(num_scalars: usize) -> Self {
        Self {
            first_moment: vec![0.0; num_scalars],
            second_moment: vec![0.0; num_scalars],
            step_count: 0,
        }
    }

    pub fn for_params<P: Parameters + ?Sized>(params: &P) -> Self {
        Self::new(params.num_scalars())
    }

    /// Applies one step to every tensor of `params` using the matching
    /// tensors of `grads`.
    pub fn step<P: Parameters>(&mut self, params: &mut P, grads: &P, cfg: &AdamConfig) -> Result<()> {
        let g = grads.tensors();
        let mut p = params.tensors_mut();
        adam_step(&mut p, &g, self, cfg)
    }
}

/// Bias-corrected Adam update in place.
///
/// Fails without touching any parameter if a gradient is non-finite.
pub fn adam_step(
    params: &mut [(String, ArrayViewMutD<'_, f64>)],
    grads: &[(String, ArrayViewD<'_, f64>)],
    state: &mut AdamState,
    cfg: &AdamConfig,
) -> Result<()> {
    if params.len() != grads.len() {
        return Err(shape_err(format!(
            "{} parameter tensors but {} gradients",
            params.len(),
            grads.len()
        )));
    }
    let mut total = 0;
    for ((pn, p), (gn, g)) in params.iter().zip(grads) {
        if p.shape() != g.shape() {
            return Err(shape_err(format!(
                "`{pn}` has shape {:?} but gradient `{gn}` has {:?}",
                p.shape(),
                g.shape()
            )));
        }
        if let Some(bad) = g.iter().find(|v| !v.is_finite()) {
            return Err(Error::Numeric(format!("gradient of `{gn}` contains {bad}")));
        }
        total += p.len();
    }
    if total != state.first_moment.len() {
        return Err(shape_err(format!(
            "optimizer state holds {} moments for {} parameters",
            state.first_moment.len(),
            total
        )));
    }

    state.step_count += 1;
    let t = state.step_count as i32;
    let bc1 = 1.0 - cfg.beta1.powi(t);
    let bc2 = 1.0 - cfg.beta2.powi(t);
    let mut offset = 0;
    for ((_, p), (_, g)) in params.iter_mut().zip(grads) {
        let n = p.len();
        let m = &mut state.first_moment[offset..offset + n];
        let v = &mut state.second_moment[offset..offset + n];
        for (((p, &g), m), v) in p.iter_mut().zip(g.iter()).zip(m.iter_mut()).zip(v.iter_mut()) {
            *m = cfg.beta1 * *m + (1.0 - cfg.beta1) * g;
            *v = cfg.beta2 * *v + (1.0 - cfg.beta2) * g * g;
            let m_hat = *m / bc1;
            let v_hat = *v / bc2;
            *p -= cfg.lr * m_hat / (v_hat.sqrt() + cfg.eps);
        }
        offset += n;
    }
    Ok(())
}
