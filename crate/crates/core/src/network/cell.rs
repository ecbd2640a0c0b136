use ndarray::{concatenate, s, Array1, ArrayView1, Axis};

use super::params::{LstmGateParams, QlstmIgParams, QlstmSgParams, QuantumGate, RecurrentParams};
use crate::error::{shape_err, Error, Result};
use crate::nncore::{sigmoid, sigmoid_backward, tanh, tanh_backward, LinearParams};
use crate::qsim::{vqc_forward, vqc_gradient, VqcParams};

#[derive(Debug, Clone, PartialEq)]
pub struct CellState {
    pub h: Array1<f64>,
    pub c: Array1<f64>,
}

impl CellState {
    pub fn zeros(hidden: usize) -> Self {
        Self {
            h: Array1::zeros(hidden),
            c: Array1::zeros(hidden),
        }
    }
}

/// Post-activation gate values of one step.
#[derive(Debug, Clone, PartialEq)]
pub struct GateValues {
    pub forget: Array1<f64>,
    pub input: Array1<f64>,
    pub candidate: Array1<f64>,
    pub output: Array1<f64>,
}

#[derive(Debug, Clone)]
enum QuantumCache {
    Classical,
    /// Circuit inputs and read-outs of the shared circuit.
    Shared { angles: Array1<f64>, readout: Array1<f64> },
    Independent { angles: [Array1<f64>; 4], readout: [Array1<f64>; 4] },
}

#[derive(Debug, Clone)]
pub struct CellCache {
    concat: Array1<f64>,
    c_prev: Array1<f64>,
    gates: GateValues,
    tanh_c: Array1<f64>,
    quantum: QuantumCache,
}

impl CellCache {
    pub fn gates(&self) -> &GateValues {
        &self.gates
    }
}

fn concat_input(x: ArrayView1<'_, f64>, prev: &CellState, input_dim: usize) -> Result<Array1<f64>> {
    if x.len() != input_dim {
        return Err(shape_err(format!(
            "cell input of length {} (expected {input_dim})",
            x.len()
        )));
    }
    Ok(concatenate(Axis(0), &[x, prev.h.view()]).expect("1-d concatenation"))
}

fn check_state(prev: &CellState, hidden: usize) -> Result<()> {
    if prev.h.len() != hidden || prev.c.len() != hidden {
        return Err(shape_err(format!(
            "cell state widths ({}, {}) (expected {hidden})",
            prev.h.len(),
            prev.c.len()
        )));
    }
    Ok(())
}

fn finish(
    concat: Array1<f64>,
    prev: &CellState,
    pre: [Array1<f64>; 4],
    quantum: QuantumCache,
) -> (CellState, CellCache) {
    let [a_f, a_i, a_c, a_o] = pre;
    let gates = GateValues {
        forget: sigmoid(a_f.view()),
        input: sigmoid(a_i.view()),
        candidate: tanh(a_c.view()),
        output: sigmoid(a_o.view()),
    };
    let c = &gates.forget * &prev.c + &gates.input * &gates.candidate;
    let tanh_c = tanh(c.view());
    let h = &gates.output * &tanh_c;
    (
        CellState { h, c },
        CellCache {
            concat,
            c_prev: prev.c.clone(),
            gates,
            tanh_c,
            quantum,
        },
    )
}

fn run_vqc(pre: &LinearParams, vqc: &VqcParams, u: &Array1<f64>) -> Result<(Array1<f64>, Array1<f64>)> {
    let angles = pre.apply(u.view())?;
    let out = vqc_forward(angles.as_slice().expect("contiguous"), vqc)?;
    Ok((angles, Array1::from(out.expectations)))
}

pub fn lstm_cell(
    x: ArrayView1<'_, f64>,
    prev: &CellState,
    p: &LstmGateParams,
) -> Result<(CellState, CellCache)> {
    let hidden = p.gates[0].out_dim();
    check_state(prev, hidden)?;
    let u = concat_input(x, prev, p.gates[0].in_dim() - hidden)?;
    let mut pre = Vec::with_capacity(4);
    for g in &p.gates {
        pre.push(g.apply(u.view())?);
    }
    let pre: [Array1<f64>; 4] = pre.try_into().expect("four gates");
    Ok(finish(u, prev, pre, QuantumCache::Classical))
}

/// One circuit evaluation per step; each gate reads the shared circuit
/// output through its own projection.
pub fn qlstm_sg_cell(
    x: ArrayView1<'_, f64>,
    prev: &CellState,
    p: &QlstmSgParams,
) -> Result<(CellState, CellCache)> {
    let hidden = p.post[0].out_dim();
    check_state(prev, hidden)?;
    let u = concat_input(x, prev, p.pre.in_dim() - hidden)?;
    let (angles, readout) = run_vqc(&p.pre, &p.vqc, &u)?;
    let mut pre = Vec::with_capacity(4);
    for post in &p.post {
        pre.push(post.apply(readout.view())?);
    }
    let pre: [Array1<f64>; 4] = pre.try_into().expect("four gates");
    Ok(finish(u, prev, pre, QuantumCache::Shared { angles, readout }))
}

/// Four circuit evaluations per step, one per gate.
pub fn qlstm_ig_cell(
    x: ArrayView1<'_, f64>,
    prev: &CellState,
    p: &QlstmIgParams,
) -> Result<(CellState, CellCache)> {
    let hidden = p.gates[0].post.out_dim();
    check_state(prev, hidden)?;
    let u = concat_input(x, prev, p.gates[0].pre.in_dim() - hidden)?;
    let mut pre = Vec::with_capacity(4);
    let mut angles = Vec::with_capacity(4);
    let mut readout = Vec::with_capacity(4);
    for QuantumGate { pre: lin, vqc, post } in &p.gates {
        let (a, z) = run_vqc(lin, vqc, &u)?;
        pre.push(post.apply(z.view())?);
        angles.push(a);
        readout.push(z);
    }
    let pre: [Array1<f64>; 4] = pre.try_into().expect("four gates");
    Ok(finish(
        u,
        prev,
        pre,
        QuantumCache::Independent {
            angles: angles.try_into().expect("four gates"),
            readout: readout.try_into().expect("four gates"),
        },
    ))
}

impl RecurrentParams {
    pub fn step(&self, x: ArrayView1<'_, f64>, prev: &CellState) -> Result<(CellState, CellCache)> {
        match self {
            RecurrentParams::Lstm(p) => lstm_cell(x, prev, p),
            RecurrentParams::Sg(p) => qlstm_sg_cell(x, prev, p),
            RecurrentParams::Ig(p) => qlstm_ig_cell(x, prev, p),
        }
    }
}

/// Chains `∂L/∂z` through a circuit, accumulating angle gradients, and
/// returns `∂L/∂(circuit inputs)`.
fn vqc_backward(
    vqc: &VqcParams,
    angles: &Array1<f64>,
    d_readout: &Array1<f64>,
    grad: &mut VqcParams,
) -> Result<Array1<f64>> {
    let jac = vqc_gradient(angles.as_slice().expect("contiguous"), vqc)?;
    let (n, layers, _, _) = jac.d_params.dim();
    let flat = jac
        .d_params
        .into_shape_with_order((n, layers * n * 3))
        .expect("contiguous jacobian");
    let d_angles = d_readout.dot(&flat);
    let mut g = grad
        .angles
        .view_mut()
        .into_shape_with_order(layers * n * 3)
        .expect("contiguous angles");
    g += &d_angles;
    Ok(jac.d_inputs.t().dot(d_readout))
}

/// Backward through one step. `dh` and `dc` are the total gradients reaching
/// `h_t` and `c_t`; returns `(∂L/∂x_t, ∂L/∂h_{t−1}, ∂L/∂c_{t−1})`.
pub fn cell_backward(
    cache: &CellCache,
    p: &RecurrentParams,
    dh: ArrayView1<'_, f64>,
    dc: ArrayView1<'_, f64>,
    grad: &mut RecurrentParams,
) -> Result<(Array1<f64>, Array1<f64>, Array1<f64>)> {
    let g = &cache.gates;
    let d_o = &dh * &cache.tanh_c;
    let dc_total = &dc + &(&dh * &g.output * &cache.tanh_c.mapv(|t| 1.0 - t * t));
    let d_f = &dc_total * &cache.c_prev;
    let d_i = &dc_total * &g.candidate;
    let d_cand = &dc_total * &g.input;
    let dc_prev = &dc_total * &g.forget;

    let da = [
        sigmoid_backward(g.forget.view(), d_f.view()),
        sigmoid_backward(g.input.view(), d_i.view()),
        tanh_backward(g.candidate.view(), d_cand.view()),
        sigmoid_backward(g.output.view(), d_o.view()),
    ];

    let u = cache.concat.view();
    let du = match (p, grad, &cache.quantum) {
        (RecurrentParams::Lstm(p), RecurrentParams::Lstm(gr), QuantumCache::Classical) => {
            let mut du = Array1::zeros(u.len());
            for k in 0..4 {
                du += &p.gates[k].backward_into(u, da[k].view(), &mut gr.gates[k]);
            }
            du
        }
        (RecurrentParams::Sg(p), RecurrentParams::Sg(gr), QuantumCache::Shared { angles, readout }) => {
            let mut dz = Array1::zeros(readout.len());
            for k in 0..4 {
                dz += &p.post[k].backward_into(readout.view(), da[k].view(), &mut gr.post[k]);
            }
            let d_angles = vqc_backward(&p.vqc, angles, &dz, &mut gr.vqc)?;
            p.pre.backward_into(u, d_angles.view(), &mut gr.pre)
        }
        (
            RecurrentParams::Ig(p),
            RecurrentParams::Ig(gr),
            QuantumCache::Independent { angles, readout },
        ) => {
            let mut du = Array1::zeros(u.len());
            for k in 0..4 {
                let (gate, gg) = (&p.gates[k], &mut gr.gates[k]);
                let dz = gate.post.backward_into(readout[k].view(), da[k].view(), &mut gg.post);
                let d_angles = vqc_backward(&gate.vqc, &angles[k], &dz, &mut gg.vqc)?;
                du += &gate.pre.backward_into(u, d_angles.view(), &mut gg.pre);
            }
            du
        }
        _ => {
            return Err(Error::Usage(
                "cell cache, parameters and gradient buffer belong to different variants".into(),
            ))
        }
    };
    let input_dim = u.len() - dh.len();
    let dx = du.slice(s![..input_dim]).to_owned();
    let dh_prev = du.slice(s![input_dim..]).to_owned();
    Ok((dx, dh_prev, dc_prev))
}
