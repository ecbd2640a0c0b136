//! Dense statevector simulation of the variational encoder.
//!
//! Circuit: angle embedding (`Ry(x_q)` on wire `q`) on the ground state,
//! `n_layers` strongly entangling layers (`Rot = Rz(ω)·Ry(θ)·Rz(φ)` per wire,
//! then a CNOT chain `q → q+1`), and per-wire Pauli-Z readout.
//!
//! Basis index `b` encodes wire `q` as bit `q`, wire 0 least significant.

mod circuit;
pub mod gates;
mod state;

pub use circuit::{
    vqc_forward, vqc_gradient, Entangler, VqcGradient, VqcOutput, VqcParams, PARAMETER_SHIFT,
};
pub use gates::Gate;
pub use state::{StateVector, MAX_QUBITS};
