use ndarray::{ArrayViewD, ArrayViewMutD};
use rand::Rng;

use super::{ModelConfig, Variant, GATE_NAMES};
use crate::error::Result;
use crate::nncore::{AttentionParams, LinearParams, Parameters};
use crate::qsim::VqcParams;

/// Classical LSTM: one `(d_in + d_h) → d_h` affine map per gate.
#[derive(Debug, Clone, PartialEq)]
pub struct LstmGateParams {
    pub gates: [LinearParams; 4],
}

/// Shared-gate quantum LSTM: one pre-map and one circuit for all gates, with
/// a separate `n_qubits → d_h` read-out projection per gate.
#[derive(Debug, Clone, PartialEq)]
pub struct QlstmSgParams {
    pub pre: LinearParams,
    pub vqc: VqcParams,
    pub post: [LinearParams; 4],
}

/// Pre-map, circuit and read-out of a single quantum gate.
#[derive(Debug, Clone, PartialEq)]
pub struct QuantumGate {
    pub pre: LinearParams,
    pub vqc: VqcParams,
    pub post: LinearParams,
}

/// Independent-gate quantum LSTM: a full [`QuantumGate`] per gate.
#[derive(Debug, Clone, PartialEq)]
pub struct QlstmIgParams {
    pub gates: [QuantumGate; 4],
}

#[derive(Debug, Clone, PartialEq)]
pub enum RecurrentParams {
    Lstm(LstmGateParams),
    Sg(QlstmSgParams),
    Ig(QlstmIgParams),
}

/// Time-distributed head: `hidden → dense` (ReLU) then `dense → 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct DenseHead {
    pub l1: LinearParams,
    pub l2: LinearParams,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ModelParams {
    pub config: ModelConfig,
    pub recurrent: RecurrentParams,
    pub attention: AttentionParams,
    pub head: DenseHead,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ParamCount {
    pub recurrent: usize,
    pub attention: usize,
    pub head: usize,
    pub total: usize,
}

fn linear_init<R: Rng + ?Sized>(
    out_dim: usize,
    in_dim: usize,
    rng: Option<&mut R>,
) -> LinearParams {
    match rng {
        Some(rng) => LinearParams::glorot(out_dim, in_dim, rng),
        None => LinearParams::zeros(out_dim, in_dim),
    }
}

fn vqc_init<R: Rng + ?Sized>(cfg: &ModelConfig, rng: Option<&mut R>) -> VqcParams {
    let p = match rng {
        Some(rng) => VqcParams::random(cfg.n_layers, cfg.n_qubits, rng),
        None => VqcParams::zeros(cfg.n_layers, cfg.n_qubits),
    };
    p.with_entangler(cfg.entangler)
}

impl RecurrentParams {
    fn build<R: Rng + ?Sized>(cfg: &ModelConfig, mut rng: Option<&mut R>) -> Self {
        let concat = cfg.input_dim + cfg.hidden;
        let (h, nq) = (cfg.hidden, cfg.n_qubits);
        match cfg.variant {
            Variant::Lstma => RecurrentParams::Lstm(LstmGateParams {
                gates: std::array::from_fn(|_| linear_init(h, concat, rng.as_deref_mut())),
            }),
            Variant::QlstmaSg => {
                let pre = linear_init(nq, concat, rng.as_deref_mut());
                let vqc = vqc_init(cfg, rng.as_deref_mut());
                let post = std::array::from_fn(|_| linear_init(h, nq, rng.as_deref_mut()));
                RecurrentParams::Sg(QlstmSgParams { pre, vqc, post })
            }
            Variant::QlstmaIg => RecurrentParams::Ig(QlstmIgParams {
                gates: std::array::from_fn(|_| {
                    let pre = linear_init(nq, concat, rng.as_deref_mut());
                    let vqc = vqc_init(cfg, rng.as_deref_mut());
                    let post = linear_init(h, nq, rng.as_deref_mut());
                    QuantumGate { pre, vqc, post }
                }),
            }),
        }
    }

    pub fn hidden(&self) -> usize {
        match self {
            RecurrentParams::Lstm(p) => p.gates[0].out_dim(),
            RecurrentParams::Sg(p) => p.post[0].out_dim(),
            RecurrentParams::Ig(p) => p.gates[0].post.out_dim(),
        }
    }

    pub fn input_dim(&self) -> usize {
        let concat = match self {
            RecurrentParams::Lstm(p) => p.gates[0].in_dim(),
            RecurrentParams::Sg(p) => p.pre.in_dim(),
            RecurrentParams::Ig(p) => p.gates[0].pre.in_dim(),
        };
        concat - self.hidden()
    }
}

impl Parameters for RecurrentParams {
    fn tensors(&self) -> Vec<(String, ArrayViewD<'_, f64>)> {
        fn push<'a>(out: &mut Vec<(String, ArrayViewD<'a, f64>)>, prefix: &str, p: &'a LinearParams) {
            for (n, t) in p.tensors() {
                out.push((format!("{prefix}.{n}"), t));
            }
        }
        let mut out = Vec::new();
        match self {
            RecurrentParams::Lstm(p) => {
                for (g, lin) in GATE_NAMES.iter().zip(&p.gates) {
                    push(&mut out, &format!("gate_{g}"), lin);
                }
            }
            RecurrentParams::Sg(p) => {
                push(&mut out, "shared.pre", &p.pre);
                out.push(("shared.vqc.angles".into(), p.vqc.angles.view().into_dyn()));
                for (g, lin) in GATE_NAMES.iter().zip(&p.post) {
                    for (n, t) in lin.tensors() {
                        out.push((format!("gate_{g}.post.{n}"), t));
                    }
                }
            }
            RecurrentParams::Ig(p) => {
                for (g, gate) in GATE_NAMES.iter().zip(&p.gates) {
                    for (n, t) in gate.pre.tensors() {
                        out.push((format!("gate_{g}.pre.{n}"), t));
                    }
                    out.push((format!("gate_{g}.vqc.angles"), gate.vqc.angles.view().into_dyn()));
                    for (n, t) in gate.post.tensors() {
                        out.push((format!("gate_{g}.post.{n}"), t));
                    }
                }
            }
        }
        out
    }

    fn tensors_mut(&mut self) -> Vec<(String, ArrayViewMutD<'_, f64>)> {
        let mut out = Vec::new();
        match self {
            RecurrentParams::Lstm(p) => {
                for (g, lin) in GATE_NAMES.iter().zip(p.gates.iter_mut()) {
                    for (n, t) in lin.tensors_mut() {
                        out.push((format!("gate_{g}.{n}"), t));
                    }
                }
            }
            RecurrentParams::Sg(p) => {
                for (n, t) in p.pre.tensors_mut() {
                    out.push((format!("shared.pre.{n}"), t));
                }
                out.push(("shared.vqc.angles".into(), p.vqc.angles.view_mut().into_dyn()));
                for (g, lin) in GATE_NAMES.iter().zip(p.post.iter_mut()) {
                    for (n, t) in lin.tensors_mut() {
                        out.push((format!("gate_{g}.post.{n}"), t));
                    }
                }
            }
            RecurrentParams::Ig(p) => {
                for (g, gate) in GATE_NAMES.iter().zip(p.gates.iter_mut()) {
                    for (n, t) in gate.pre.tensors_mut() {
                        out.push((format!("gate_{g}.pre.{n}"), t));
                    }
                    out.push((
                        format!("gate_{g}.vqc.angles"),
                        gate.vqc.angles.view_mut().into_dyn(),
                    ));
                    for (n, t) in gate.post.tensors_mut() {
                        out.push((format!("gate_{g}.post.{n}"), t));
                    }
                }
            }
        }
        out
    }
}

impl ModelParams {
    /// Glorot-uniform classical weights, zero biases, VQC angles uniform on
    /// `[0, 2π)`.
    pub fn init<R: Rng + ?Sized>(config: ModelConfig, rng: &mut R) -> Result<Self> {
        config.validate()?;
        let recurrent = RecurrentParams::build(&config, Some(&mut *rng));
        let attention = AttentionParams::glorot(config.hidden, rng);
        let head = DenseHead {
            l1: LinearParams::glorot(config.dense, config.hidden, rng),
            l2: LinearParams::glorot(1, config.dense, rng),
        };
        Ok(Self {
            config,
            recurrent,
            attention,
            head,
        })
    }

    pub fn zeros(config: ModelConfig) -> Result<Self> {
        config.validate()?;
        Ok(Self {
            config,
            recurrent: RecurrentParams::build::<rand_chacha::ChaCha8Rng>(&config, None),
            attention: AttentionParams::zeros(config.hidden),
            head: DenseHead {
                l1: LinearParams::zeros(config.dense, config.hidden),
                l2: LinearParams::zeros(1, config.dense),
            },
        })
    }

    /// Zero tensors with the same layout, used as a gradient accumulator.
    pub fn zeros_like(&self) -> Self {
        let mut z = self.clone();
        for (_, mut t) in z.tensors_mut() {
            t.fill(0.0);
        }
        z
    }

    /// `self += scale · other`, tensor by tensor.
    pub fn scaled_add(&mut self, scale: f64, other: &ModelParams) {
        let src = other.tensors();
        for ((_, mut dst), (_, s)) in self.tensors_mut().into_iter().zip(src) {
            dst.scaled_add(scale, &s);
        }
    }

    pub fn is_finite(&self) -> bool {
        self.tensors().iter().all(|(_, t)| t.iter().all(|v| v.is_finite()))
    }
}

impl Parameters for ModelParams {
    fn tensors(&self) -> Vec<(String, ArrayViewD<'_, f64>)> {
        let mut out = self.recurrent.tensors();
        for (n, t) in self.attention.tensors() {
            out.push((format!("attn.{n}"), t));
        }
        for (n, t) in self.head.l1.tensors() {
            out.push((format!("head.l1.{n}"), t));
        }
        for (n, t) in self.head.l2.tensors() {
            out.push((format!("head.l2.{n}"), t));
        }
        out
    }

    fn tensors_mut(&mut self) -> Vec<(String, ArrayViewMutD<'_, f64>)> {
        let mut out = self.recurrent.tensors_mut();
        for (n, t) in self.attention.tensors_mut() {
            out.push((format!("attn.{n}"), t));
        }
        for (n, t) in self.head.l1.tensors_mut() {
            out.push((format!("head.l1.{n}"), t));
        }
        for (n, t) in self.head.l2.tensors_mut() {
            out.push((format!("head.l2.{n}"), t));
        }
        out
    }
}

pub fn param_count(p: &ModelParams) -> ParamCount {
    let recurrent = p.recurrent.num_scalars();
    let attention = p.attention.num_scalars();
    let head = p.head.l1.num_scalars() + p.head.l2.num_scalars();
    ParamCount {
        recurrent,
        attention,
        head,
        total: recurrent + attention + head,
    }
}
