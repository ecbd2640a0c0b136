//! Single-qubit gate matrices.

use num_complex::Complex64;

/// Row-major 2×2 complex matrix.
pub type Gate = [[Complex64; 2]; 2];

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

pub fn identity() -> Gate {
    [[ONE, ZERO], [ZERO, ONE]]
}

pub fn pauli_x() -> Gate {
    [[ZERO, ONE], [ONE, ZERO]]
}

pub fn hadamard() -> Gate {
    let s = Complex64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
    [[s, s], [s, -s]]
}

pub fn ry(theta: f64) -> Gate {
    let (s, c) = (theta / 2.0).sin_cos();
    [
        [Complex64::new(c, 0.0), Complex64::new(-s, 0.0)],
        [Complex64::new(s, 0.0), Complex64::new(c, 0.0)],
    ]
}

pub fn rz(phi: f64) -> Gate {
    [
        [Complex64::from_polar(1.0, -phi / 2.0), ZERO],
        [ZERO, Complex64::from_polar(1.0, phi / 2.0)],
    ]
}

/// `Rot(φ, θ, ω) = Rz(ω)·Ry(θ)·Rz(φ)`.
pub fn rot(phi: f64, theta: f64, omega: f64) -> Gate {
    matmul(&rz(omega), &matmul(&ry(theta), &rz(phi)))
}

pub fn matmul(a: &Gate, b: &Gate) -> Gate {
    let mut out = [[ZERO; 2]; 2];
    for i in 0..2 {
        for j in 0..2 {
            out[i][j] = a[i][0] * b[0][j] + a[i][1] * b[1][j];
        }
    }
    out
}

/// Max-abs deviation of `g†g` from the identity.
pub fn unitarity_defect(g: &Gate) -> f64 {
    let mut worst: f64 = 0.0;
    for i in 0..2 {
        for j in 0..2 {
            let v = g[0][i].conj() * g[0][j] + g[1][i].conj() * g[1][j];
            let target = if i == j { ONE } else { ZERO };
            worst = worst.max((v - target).norm());
        }
    }
    worst
}
