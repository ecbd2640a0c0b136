use ndarray::{Array1, Array2, ArrayView1, ArrayView2, Axis, Ix2};
use rand::Rng;

use super::cell::{cell_backward, CellCache, CellState};
use super::params::{ModelParams, RecurrentParams};
use crate::error::{shape_err, Error, Result};
use crate::nncore::{
    attention_backward, attention_forward, dropout, dropout_backward, relu, relu_backward,
    AttentionCache, DropoutMask,
};

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Mode {
    /// Dropout with the given rate after attention.
    Train { dropout: f64 },
    Eval,
}

/// Everything the backward pass needs from one forward call.
#[derive(Debug, Clone)]
pub struct ForwardCache {
    cells: Vec<CellCache>,
    hidden: Array2<f64>,
    attention: AttentionCache,
    mask: DropoutMask<Ix2>,
    dense_in: Array2<f64>,
    dense_pre: Array2<f64>,
    dense_act: Array2<f64>,
}

impl ForwardCache {
    /// Hidden sequence `(T, d_h)` produced by the recurrent block.
    pub fn hidden(&self) -> &Array2<f64> {
        &self.hidden
    }

    pub fn attention_weights(&self) -> &Array2<f64> {
        self.attention.weights()
    }

    pub fn timesteps(&self) -> usize {
        self.cells.len()
    }
}

#[derive(Debug, Clone)]
pub struct ModelGradients {
    pub params: ModelParams,
    /// `∂L/∂features`, shape `(T, d_in)`.
    pub features: Array2<f64>,
}

/// Runs the cell over every row of `features` from a zero state.
pub fn unroll(
    features: ArrayView2<'_, f64>,
    p: &RecurrentParams,
) -> Result<(Array2<f64>, Vec<CellCache>)> {
    let hidden = p.hidden();
    let steps = features.nrows();
    let mut out = Array2::zeros((steps, hidden));
    let mut caches = Vec::with_capacity(steps);
    let mut state = CellState::zeros(hidden);
    for (t, x) in features.rows().into_iter().enumerate() {
        let (next, cache) = p.step(x, &state)?;
        out.row_mut(t).assign(&next.h);
        caches.push(cache);
        state = next;
    }
    Ok((out, caches))
}

/// Backpropagation through time. `d_hidden[t]` is the gradient reaching
/// `h_t` from outside the recurrence; returns `∂L/∂features`.
pub fn unroll_backward(
    caches: &[CellCache],
    p: &RecurrentParams,
    d_hidden: ArrayView2<'_, f64>,
    grad: &mut RecurrentParams,
) -> Result<Array2<f64>> {
    if d_hidden.nrows() != caches.len() {
        return Err(shape_err(format!(
            "{} hidden gradients for {} cached steps",
            d_hidden.nrows(),
            caches.len()
        )));
    }
    let hidden = p.hidden();
    let mut d_features = Array2::zeros((caches.len(), p.input_dim()));
    let mut dh_next = Array1::zeros(hidden);
    let mut dc_next = Array1::zeros(hidden);
    for t in (0..caches.len()).rev() {
        let dh = &d_hidden.row(t) + &dh_next;
        let (dx, dh_prev, dc_prev) = cell_backward(&caches[t], p, dh.view(), dc_next.view(), grad)?;
        d_features.row_mut(t).assign(&dx);
        dh_next = dh_prev;
        dc_next = dc_prev;
    }
    Ok(d_features)
}

/// Recurrent block → self-attention → dropout (training only) → per-step
/// dense ReLU → linear output. Predictions are in normalized-target space.
pub fn model_forward<R: Rng + ?Sized>(
    features: ArrayView2<'_, f64>,
    p: &ModelParams,
    mode: Mode,
    rng: &mut R,
) -> Result<(Array1<f64>, ForwardCache)> {
    if features.nrows() == 0 {
        return Err(shape_err("empty feature sequence"));
    }
    if features.ncols() != p.config.input_dim {
        return Err(shape_err(format!(
            "features have {} columns (expected {})",
            features.ncols(),
            p.config.input_dim
        )));
    }
    let (hidden, cells) = unroll(features, &p.recurrent)?;
    let (attended, attention) = attention_forward(hidden.view(), &p.attention)?;
    let (dense_in, mask) = match mode {
        Mode::Train { dropout: rate } => dropout(attended.view(), rate, true, rng)?,
        Mode::Eval => dropout(attended.view(), 0.0, false, rng)?,
    };
    let dense_pre = p.head.l1.apply_rows(dense_in.view())?;
    let dense_act = relu(dense_pre.view());
    let out = p.head.l2.apply_rows(dense_act.view())?;
    let predictions = out.column(0).to_owned();
    if let Some(t) = predictions.iter().position(|v| !v.is_finite()) {
        return Err(Error::Numeric(format!("non-finite prediction at step {t}")));
    }
    Ok((
        predictions,
        ForwardCache {
            cells,
            hidden,
            attention,
            mask,
            dense_in,
            dense_pre,
            dense_act,
        },
    ))
}

pub fn model_backward(
    cache: &ForwardCache,
    p: &ModelParams,
    d_predictions: ArrayView1<'_, f64>,
) -> Result<ModelGradients> {
    if d_predictions.len() != cache.timesteps() {
        return Err(shape_err(format!(
            "{} prediction gradients for a {}-step forward pass",
            d_predictions.len(),
            cache.timesteps()
        )));
    }
    if cache.hidden.ncols() != p.config.hidden {
        return Err(Error::Usage("forward cache does not match these parameters".into()));
    }
    let mut grad = p.zeros_like();
    let d_out = d_predictions.insert_axis(Axis(1));
    let d_act = p
        .head
        .l2
        .backward_rows_into(cache.dense_act.view(), d_out, &mut grad.head.l2);
    let d_pre = relu_backward(cache.dense_pre.view(), d_act.view());
    let d_in = p
        .head
        .l1
        .backward_rows_into(cache.dense_in.view(), d_pre.view(), &mut grad.head.l1);
    let d_attended = dropout_backward(&cache.mask, d_in.view());
    let (d_hidden, d_attn) = attention_backward(&cache.attention, &p.attention, d_attended.view())?;
    grad.attention = d_attn;
    let features = unroll_backward(&cache.cells, &p.recurrent, d_hidden.view(), &mut grad.recurrent)?;
    Ok(ModelGradients {
        params: grad,
        features,
    })
}

#[cfg(test)]
mod tests {
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    use super::*;
    use crate::network::{ModelConfig, Variant};
    use crate::nncore::Parameters;

    fn features(steps: usize, seed: u64) -> Array2<f64> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        Array2::from_shape_simple_fn((steps, 4), || rng.random_range(0.0..1.0))
    }

    #[test]
    fn zero_model_predicts_zero() {
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        for v in [Variant::Lstma, Variant::QlstmaSg, Variant::QlstmaIg] {
            let p = ModelParams::zeros(ModelConfig::new(v).with_hidden(8).with_qubits(2)).unwrap();
            let (y, _) = model_forward(features(12, 1).view(), &p, Mode::Eval, &mut rng).unwrap();
            assert_eq!(y, Array1::<f64>::zeros(12));
        }
    }

    #[test]
    fn eval_is_repeatable() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let p = ModelParams::init(ModelConfig::new(Variant::QlstmaIg).with_hidden(6).with_qubits(2), &mut rng)
            .unwrap();
        let x = features(10, 2);
        let a = model_forward(x.view(), &p, Mode::Eval, &mut rng).unwrap().0;
        let b = model_forward(x.view(), &p, Mode::Eval, &mut rng).unwrap().0;
        assert_eq!(a, b);
    }

    #[test]
    fn zero_upstream_gives_zero_gradients() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let p = ModelParams::init(ModelConfig::new(Variant::QlstmaSg).with_hidden(4).with_qubits(2), &mut rng)
            .unwrap();
        let (_, cache) = model_forward(features(6, 5).view(), &p, Mode::Train { dropout: 0.5 }, &mut rng).unwrap();
        let g = model_backward(&cache, &p, Array1::zeros(6).view()).unwrap();
        assert!(g.params.tensors().iter().all(|(_, t)| t.iter().all(|&v| v == 0.0)));
    }

    #[test]
    fn recurrence_is_causal_attention_is_not() {
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        let p = ModelParams::init(ModelConfig::new(Variant::Lstma).with_hidden(5), &mut rng).unwrap();
        let x = features(8, 7);

        // Without attention: a gradient on h_0 only reaches step 0.
        let (_, caches) = unroll(x.view(), &p.recurrent).unwrap();
        let mut d_hidden = Array2::zeros((8, 5));
        d_hidden.row_mut(0).fill(1.0);
        let mut grad = p.zeros_like().recurrent;
        let dx = unroll_backward(&caches, &p.recurrent, d_hidden.view(), &mut grad).unwrap();
        assert!(dx.row(0).iter().any(|&v| v != 0.0));
        assert!(dx.rows().into_iter().skip(1).all(|r| r.iter().all(|&v| v == 0.0)));

        // Through attention: prediction 0 depends on every step.
        let (_, cache) = model_forward(x.view(), &p, Mode::Eval, &mut rng).unwrap();
        let mut up = Array1::zeros(8);
        up[0] = 1.0;
        let g = model_backward(&cache, &p, up.view()).unwrap();
        assert!(g.features.row(7).iter().any(|&v| v != 0.0));
    }

    #[test]
    fn mismatched_upstream_length() {
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        let p = ModelParams::init(ModelConfig::new(Variant::Lstma).with_hidden(4), &mut rng).unwrap();
        let (_, cache) = model_forward(features(5, 1).view(), &p, Mode::Eval, &mut rng).unwrap();
        assert!(model_backward(&cache, &p, Array1::zeros(4).view()).is_err());
    }

    #[test]
    fn wrong_feature_width() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let p = ModelParams::zeros(ModelConfig::new(Variant::Lstma).with_hidden(4)).unwrap();
        let x = Array2::zeros((5, 3));
        assert!(matches!(model_forward(x.view(), &p, Mode::Eval, &mut rng), Err(Error::Shape(_))));
    }
}
