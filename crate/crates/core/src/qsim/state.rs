use ndarray::ArrayView2;
use num_complex::Complex64;

use super::circuit::Entangler;
use super::gates::{self, Gate};
use crate::error::{shape_err, Error, Result};

pub const MAX_QUBITS: usize = 12;

const UNITARY_TOL: f64 = 1e-12;

/// `2^n` complex amplitudes of an `n`-qubit register.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    n_qubits: usize,
    amps: Vec<Complex64>,
}

impl StateVector {
    /// The ground state `|0…0⟩`.
    pub fn ground(n_qubits: usize) -> Result<Self> {
        check_qubits(n_qubits)?;
        let mut amps = vec![Complex64::new(0.0, 0.0); 1 << n_qubits];
        amps[0] = Complex64::new(1.0, 0.0);
        Ok(Self { n_qubits, amps })
    }

    /// Wraps raw amplitudes. The caller is responsible for normalization.
    pub fn from_amplitudes(n_qubits: usize, amps: Vec<Complex64>) -> Result<Self> {
        check_qubits(n_qubits)?;
        if amps.len() != 1 << n_qubits {
            return Err(shape_err(format!(
                "{} amplitudes for {} qubits (need {})",
                amps.len(),
                n_qubits,
                1usize << n_qubits
            )));
        }
        Ok(Self { n_qubits, amps })
    }

    /// Computational basis state `|index⟩`.
    pub fn basis(n_qubits: usize, index: usize) -> Result<Self> {
        check_qubits(n_qubits)?;
        if index >= 1 << n_qubits {
            return Err(Error::Index(format!("basis index {index} for {n_qubits} qubits")));
        }
        let mut amps = vec![Complex64::new(0.0, 0.0); 1 << n_qubits];
        amps[index] = Complex64::new(1.0, 0.0);
        Ok(Self { n_qubits, amps })
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum()
    }

    pub fn apply_1q(&mut self, wire: usize, gate: &Gate) -> Result<()> {
        self.check_wire(wire)?;
        if gates::unitarity_defect(gate) > UNITARY_TOL {
            return Err(Error::Config(format!("gate on wire {wire} is not unitary")));
        }
        self.apply_1q_unchecked(wire, gate);
        Ok(())
    }

    pub(crate) fn apply_1q_unchecked(&mut self, wire: usize, g: &Gate) {
        let mask = 1usize << wire;
        let len = self.amps.len();
        // Walk blocks of 2·mask; the low half has bit `wire` clear.
        let mut base = 0;
        while base < len {
            for i in base..base + mask {
                let j = i | mask;
                let a0 = self.amps[i];
                let a1 = self.amps[j];
                self.amps[i] = g[0][0] * a0 + g[0][1] * a1;
                self.amps[j] = g[1][0] * a0 + g[1][1] * a1;
            }
            base += mask << 1;
        }
    }

    pub fn apply_cnot(&mut self, control: usize, target: usize) -> Result<()> {
        self.check_wire(control)?;
        self.check_wire(target)?;
        if control == target {
            return Err(Error::Config(format!(
                "CNOT control and target are both wire {control}"
            )));
        }
        self.apply_cnot_unchecked(control, target);
        Ok(())
    }

    pub(crate) fn apply_cnot_unchecked(&mut self, control: usize, target: usize) {
        let cmask = 1usize << control;
        let tmask = 1usize << target;
        for i in 0..self.amps.len() {
            if i & cmask != 0 && i & tmask == 0 {
                self.amps.swap(i, i | tmask);
            }
        }
    }

    /// `Ry(inputs[q])` on every wire `q`.
    pub fn angle_embed(&mut self, inputs: &[f64]) -> Result<()> {
        if inputs.len() != self.n_qubits {
            return Err(shape_err(format!(
                "{} embedding inputs for {} qubits",
                inputs.len(),
                self.n_qubits
            )));
        }
        for (q, &x) in inputs.iter().enumerate() {
            self.apply_1q_unchecked(q, &gates::ry(x));
        }
        Ok(())
    }

    /// One strongly entangling layer; `layer_angles` has shape `(n_qubits, 3)`
    /// holding `(φ, θ, ω)` per wire.
    pub fn entangling_layer(
        &mut self,
        layer_angles: ArrayView2<'_, f64>,
        entangler: Entangler,
    ) -> Result<()> {
        if layer_angles.dim() != (self.n_qubits, 3) {
            return Err(shape_err(format!(
                "layer angles {:?} for {} qubits (need ({}, 3))",
                layer_angles.dim(),
                self.n_qubits,
                self.n_qubits
            )));
        }
        for q in 0..self.n_qubits {
            let g = gates::rot(layer_angles[[q, 0]], layer_angles[[q, 1]], layer_angles[[q, 2]]);
            self.apply_1q_unchecked(q, &g);
        }
        self.entangle(entangler);
        Ok(())
    }

    pub(crate) fn entangle(&mut self, entangler: Entangler) {
        let n = self.n_qubits;
        for q in 0..n.saturating_sub(1) {
            self.apply_cnot_unchecked(q, q + 1);
        }
        if entangler == Entangler::Ring && n > 2 {
            self.apply_cnot_unchecked(n - 1, 0);
        }
    }

    /// `⟨Z_q⟩` for every wire.
    pub fn pauli_z_expectations(&self) -> Vec<f64> {
        let mut out = vec![0.0; self.n_qubits];
        for (b, a) in self.amps.iter().enumerate() {
            let p = a.norm_sqr();
            for (q, e) in out.iter_mut().enumerate() {
                if b >> q & 1 == 0 {
                    *e += p;
                } else {
                    *e -= p;
                }
            }
        }
        out
    }

    fn check_wire(&self, wire: usize) -> Result<()> {
        if wire >= self.n_qubits {
            return Err(Error::Index(format!(
                "wire {wire} on a {}-qubit register",
                self.n_qubits
            )));
        }
        Ok(())
    }
}

fn check_qubits(n: usize) -> Result<()> {
    if n == 0 || n > MAX_QUBITS {
        return Err(Error::Config(format!(
            "n_qubits must be in 1..={MAX_QUBITS}, got {n}"
        )));
    }
    Ok(())
}
