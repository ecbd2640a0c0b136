use std::f64::consts::{FRAC_PI_2, TAU};

use ndarray::{Array2, Array3, Array4};
use rand::Rng;
use serde::{Deserialize, Serialize};

use super::state::StateVector;
use crate::error::{shape_err, Error, Result};

/// Shift used by the parameter-shift rule for gates generated by a Pauli/2.
pub const PARAMETER_SHIFT: f64 = FRAC_PI_2;

/// CNOT pattern of an entangling layer.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Entangler {
    /// `q → q+1` for `q = 0..n-2`.
    #[default]
    Chain,
    /// Chain plus `n-1 → 0` (only for `n > 2`).
    Ring,
}

/// Trainable rotation angles, shape `(n_layers, n_qubits, 3)`.
#[derive(Debug, Clone, PartialEq)]
pub struct VqcParams {
    pub angles: Array3<f64>,
    pub entangler: Entangler,
}

impl VqcParams {
    pub fn zeros(n_layers: usize, n_qubits: usize) -> Self {
        Self {
            angles: Array3::zeros((n_layers, n_qubits, 3)),
            entangler: Entangler::Chain,
        }
    }

    /// Angles drawn uniformly from `[0, 2π)`.
    pub fn random<R: Rng + ?Sized>(n_layers: usize, n_qubits: usize, rng: &mut R) -> Self {
        let mut p = Self::zeros(n_layers, n_qubits);
        p.angles.mapv_inplace(|_| rng.random_range(0.0..TAU));
        p
    }

    pub fn with_entangler(mut self, entangler: Entangler) -> Self {
        self.entangler = entangler;
        self
    }

    pub fn n_layers(&self) -> usize {
        self.angles.dim().0
    }

    pub fn n_qubits(&self) -> usize {
        self.angles.dim().1
    }

    pub fn len(&self) -> usize {
        self.angles.len()
    }

    pub fn is_empty(&self) -> bool {
        self.angles.is_empty()
    }

    fn validate(&self, n_inputs: usize) -> Result<()> {
        let (layers, qubits, three) = self.angles.dim();
        if layers == 0 {
            return Err(Error::Config("VQC needs at least one layer".into()));
        }
        if qubits != n_inputs || three != 3 {
            return Err(shape_err(format!(
                "VQC angles {:?} for {} inputs (need (L, {}, 3))",
                self.angles.dim(),
                n_inputs,
                n_inputs
            )));
        }
        Ok(())
    }
}

/// Per-wire Pauli-Z expectations, each in `[-1, 1]`.
#[derive(Debug, Clone, PartialEq)]
pub struct VqcOutput {
    pub expectations: Vec<f64>,
}

/// Jacobians of the readout.
#[derive(Debug, Clone, PartialEq)]
pub struct VqcGradient {
    /// `d_inputs[[k, j]] = ∂⟨Z_k⟩ / ∂x_j`.
    pub d_inputs: Array2<f64>,
    /// `d_params[[k, l, q, a]] = ∂⟨Z_k⟩ / ∂angles[[l, q, a]]`.
    pub d_params: Array4<f64>,
}

pub fn vqc_forward(inputs: &[f64], params: &VqcParams) -> Result<VqcOutput> {
    params.validate(inputs.len())?;
    Ok(VqcOutput {
        expectations: evaluate(inputs, &params.angles, params.entangler)?,
    })
}

/// Exact jacobians by the parameter-shift rule,
/// `∂E/∂α = [E(α + π/2) − E(α − π/2)] / 2`, for every embedding and
/// variational angle.
pub fn vqc_gradient(inputs: &[f64], params: &VqcParams) -> Result<VqcGradient> {
    params.validate(inputs.len())?;
    let n = inputs.len();
    let (layers, _, _) = params.angles.dim();
    let ent = params.entangler;

    let mut d_inputs = Array2::zeros((n, n));
    let mut shifted = inputs.to_vec();
    for j in 0..n {
        shifted[j] = inputs[j] + PARAMETER_SHIFT;
        let plus = evaluate(&shifted, &params.angles, ent)?;
        shifted[j] = inputs[j] - PARAMETER_SHIFT;
        let minus = evaluate(&shifted, &params.angles, ent)?;
        shifted[j] = inputs[j];
        for k in 0..n {
            d_inputs[[k, j]] = 0.5 * (plus[k] - minus[k]);
        }
    }

    let mut d_params = Array4::zeros((n, layers, n, 3));
    let mut angles = params.angles.clone();
    for l in 0..layers {
        for q in 0..n {
            for a in 0..3 {
                let orig = angles[[l, q, a]];
                angles[[l, q, a]] = orig + PARAMETER_SHIFT;
                let plus = evaluate(inputs, &angles, ent)?;
                angles[[l, q, a]] = orig - PARAMETER_SHIFT;
                let minus = evaluate(inputs, &angles, ent)?;
                angles[[l, q, a]] = orig;
                for k in 0..n {
                    d_params[[k, l, q, a]] = 0.5 * (plus[k] - minus[k]);
                }
            }
        }
    }
    Ok(VqcGradient { d_inputs, d_params })
}

fn evaluate(inputs: &[f64], angles: &Array3<f64>, entangler: Entangler) -> Result<Vec<f64>> {
    let mut state = StateVector::ground(inputs.len())?;
    state.angle_embed(inputs)?;
    for layer in angles.outer_iter() {
        state.entangling_layer(layer, entangler)?;
    }
    Ok(state.pauli_z_expectations())
}
