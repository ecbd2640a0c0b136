//! Single-head scaled dot-product self-attention over a hidden sequence.

use ndarray::{Array2, ArrayView2, ArrayViewD, ArrayViewMutD};
use rand::Rng;

use super::linear::glorot_uniform;
use super::softmax::{softmax_rows, softmax_rows_backward};
use super::Parameters;
use crate::error::{shape_err, Result};

/// Square projections `(d_h, d_h)` for query, key and value.
#[derive(Debug, Clone, PartialEq)]
pub struct AttentionParams {
    pub w_q: Array2<f64>,
    pub w_k: Array2<f64>,
    pub w_v: Array2<f64>,
}

#[derive(Debug, Clone)]
pub struct AttentionCache {
    input: Array2<f64>,
    q: Array2<f64>,
    k: Array2<f64>,
    v: Array2<f64>,
    weights: Array2<f64>,
}

impl AttentionCache {
    /// Row-stochastic `(T, T)` attention weights.
    pub fn weights(&self) -> &Array2<f64> {
        &self.weights
    }
}

impl AttentionParams {
    pub fn zeros(d: usize) -> Self {
        Self {
            w_q: Array2::zeros((d, d)),
            w_k: Array2::zeros((d, d)),
            w_v: Array2::zeros((d, d)),
        }
    }

    pub fn glorot<R: Rng + ?Sized>(d: usize, rng: &mut R) -> Self {
        Self {
            w_q: glorot_uniform(d, d, rng),
            w_k: glorot_uniform(d, d, rng),
            w_v: glorot_uniform(d, d, rng),
        }
    }

    pub fn dim(&self) -> usize {
        self.w_q.nrows()
    }
}

impl Parameters for AttentionParams {
    fn tensors(&self) -> Vec<(String, ArrayViewD<'_, f64>)> {
        vec![
            ("w_q".into(), self.w_q.view().into_dyn()),
            ("w_k".into(), self.w_k.view().into_dyn()),
            ("w_v".into(), self.w_v.view().into_dyn()),
        ]
    }

    fn tensors_mut(&mut self) -> Vec<(String, ArrayViewMutD<'_, f64>)> {
        vec![
            ("w_q".into(), self.w_q.view_mut().into_dyn()),
            ("w_k".into(), self.w_k.view_mut().into_dyn()),
            ("w_v".into(), self.w_v.view_mut().into_dyn()),
        ]
    }
}

/// `Q = H·W_qᵀ`, `K = H·W_kᵀ`, `V = H·W_vᵀ`, `out = softmax(Q·Kᵀ/√d)·V`.
pub fn attention_forward(
    h: ArrayView2<'_, f64>,
    p: &AttentionParams,
) -> Result<(Array2<f64>, AttentionCache)> {
    let d = p.dim();
    if h.nrows() == 0 {
        return Err(shape_err("attention over an empty sequence"));
    }
    if h.ncols() != d {
        return Err(shape_err(format!(
            "attention input width {} (expected {d})",
            h.ncols()
        )));
    }
    let q = h.dot(&p.w_q.t());
    let k = h.dot(&p.w_k.t());
    let v = h.dot(&p.w_v.t());
    let scale = 1.0 / (d as f64).sqrt();
    let scores = q.dot(&k.t()) * scale;
    let weights = softmax_rows(scores.view());
    let out = weights.dot(&v);
    Ok((
        out,
        AttentionCache {
            input: h.to_owned(),
            q,
            k,
            v,
            weights,
        },
    ))
}

/// Returns `(∂L/∂H, ∂L/∂p)`.
pub fn attention_backward(
    cache: &AttentionCache,
    p: &AttentionParams,
    d_out: ArrayView2<'_, f64>,
) -> Result<(Array2<f64>, AttentionParams)> {
    if d_out.dim() != cache.input.dim() {
        return Err(shape_err(format!(
            "attention upstream {:?} (expected {:?})",
            d_out.dim(),
            cache.input.dim()
        )));
    }
    let scale = 1.0 / (p.dim() as f64).sqrt();
    let d_weights = d_out.dot(&cache.v.t());
    let d_v = cache.weights.t().dot(&d_out);
    let d_scores = softmax_rows_backward(cache.weights.view(), d_weights.view()) * scale;
    let d_q = d_scores.dot(&cache.k);
    let d_k = d_scores.t().dot(&cache.q);

    let h = &cache.input;
    let grad = AttentionParams {
        w_q: d_q.t().dot(h),
        w_k: d_k.t().dot(h),
        w_v: d_v.t().dot(h),
    };
    let d_h = d_q.dot(&p.w_q) + d_k.dot(&p.w_k) + d_v.dot(&p.w_v);
    Ok((d_h, grad))
}
