use ndarray::{Array1, Array2, ArrayView1, ArrayView2, ArrayViewD, ArrayViewMutD};
use rand::Rng;

use super::Parameters;
use crate::error::{shape_err, Result};

/// Affine map `y = W·x + b`, `W` of shape `(out, in)`.
#[derive(Debug, Clone, PartialEq)]
pub struct LinearParams {
    pub weight: Array2<f64>,
    pub bias: Array1<f64>,
}

/// Saved input of a forward call.
#[derive(Debug, Clone)]
pub struct LinearCache {
    pub input: Array1<f64>,
}

pub fn glorot_uniform<R: Rng + ?Sized>(out_dim: usize, in_dim: usize, rng: &mut R) -> Array2<f64> {
    let limit = (6.0 / (in_dim + out_dim) as f64).sqrt();
    Array2::from_shape_simple_fn((out_dim, in_dim), || rng.random_range(-limit..=limit))
}

impl LinearParams {
    pub fn zeros(out_dim: usize, in_dim: usize) -> Self {
        Self {
            weight: Array2::zeros((out_dim, in_dim)),
            bias: Array1::zeros(out_dim),
        }
    }

    /// Glorot-uniform weight, zero bias.
    pub fn glorot<R: Rng + ?Sized>(out_dim: usize, in_dim: usize, rng: &mut R) -> Self {
        Self {
            weight: glorot_uniform(out_dim, in_dim, rng),
            bias: Array1::zeros(out_dim),
        }
    }

    pub fn in_dim(&self) -> usize {
        self.weight.ncols()
    }

    pub fn out_dim(&self) -> usize {
        self.weight.nrows()
    }

    pub fn zeros_like(&self) -> Self {
        Self::zeros(self.out_dim(), self.in_dim())
    }

    pub fn apply(&self, x: ArrayView1<'_, f64>) -> Result<Array1<f64>> {
        if x.len() != self.in_dim() {
            return Err(shape_err(format!(
                "linear input of length {} (expected {})",
                x.len(),
                self.in_dim()
            )));
        }
        Ok(self.weight.dot(&x) + &self.bias)
    }

    /// Row-wise application to a `(T, in)` matrix.
    pub fn apply_rows(&self, x: ArrayView2<'_, f64>) -> Result<Array2<f64>> {
        if x.ncols() != self.in_dim() {
            return Err(shape_err(format!(
                "linear input with {} columns (expected {})",
                x.ncols(),
                self.in_dim()
            )));
        }
        Ok(x.dot(&self.weight.t()) + &self.bias)
    }

    /// Accumulates parameter gradients into `grad` and returns `∂L/∂x`.
    pub fn backward_into(
        &self,
        input: ArrayView1<'_, f64>,
        upstream: ArrayView1<'_, f64>,
        grad: &mut LinearParams,
    ) -> Array1<f64> {
        for (o, &g) in upstream.iter().enumerate() {
            if g != 0.0 {
                grad.weight.row_mut(o).scaled_add(g, &input);
            }
        }
        grad.bias += &upstream;
        self.weight.t().dot(&upstream)
    }

    /// Row-wise counterpart of [`LinearParams::backward_into`].
    pub fn backward_rows_into(
        &self,
        input: ArrayView2<'_, f64>,
        upstream: ArrayView2<'_, f64>,
        grad: &mut LinearParams,
    ) -> Array2<f64> {
        grad.weight += &upstream.t().dot(&input);
        grad.bias += &upstream.sum_axis(ndarray::Axis(0));
        upstream.dot(&self.weight)
    }
}

impl Parameters for LinearParams {
    fn tensors(&self) -> Vec<(String, ArrayViewD<'_, f64>)> {
        vec![
            ("weight".into(), self.weight.view().into_dyn()),
            ("bias".into(), self.bias.view().into_dyn()),
        ]
    }

    fn tensors_mut(&mut self) -> Vec<(String, ArrayViewMutD<'_, f64>)> {
        vec![
            ("weight".into(), self.weight.view_mut().into_dyn()),
            ("bias".into(), self.bias.view_mut().into_dyn()),
        ]
    }
}

pub fn linear_forward(x: ArrayView1<'_, f64>, p: &LinearParams) -> Result<(Array1<f64>, LinearCache)> {
    let y = p.apply(x)?;
    Ok((y, LinearCache { input: x.to_owned() }))
}

/// Returns `(∂L/∂x, ∂L/∂p)`.
pub fn linear_backward(
    cache: &LinearCache,
    p: &LinearParams,
    upstream: ArrayView1<'_, f64>,
) -> Result<(Array1<f64>, LinearParams)> {
    if upstream.len() != p.out_dim() {
        return Err(shape_err(format!(
            "upstream gradient of length {} (expected {})",
            upstream.len(),
            p.out_dim()
        )));
    }
    let mut grad = p.zeros_like();
    let dx = p.backward_into(cache.input.view(), upstream, &mut grad);
    Ok((dx, grad))
}
