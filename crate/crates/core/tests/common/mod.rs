//! Independent reference implementations used by the integration tests.
#![allow(dead_code)]

use ndarray::{Array2, Array3};
use num_complex::Complex64;
use qlstma::dataio::{generate_synthetic, SyntheticConfig, Well};
use qlstma::qsim::Entangler;

type C = Complex64;

fn c(re: f64, im: f64) -> C {
    C::new(re, im)
}

/// `2^n × 2^n` matrix of a single-qubit operator on `wire` (wire 0 is the
/// least significant bit of the basis index).
pub fn embed_1q(n: usize, wire: usize, g: [[C; 2]; 2]) -> Array2<C> {
    let mut m: Array2<C> = Array2::from_elem((1, 1), c(1.0, 0.0));
    for q in (0..n).rev() {
        let op = if q == wire { g } else { [[c(1.0, 0.0), c(0.0, 0.0)], [c(0.0, 0.0), c(1.0, 0.0)]] };
        m = kron(&m, &op);
    }
    m
}

/// Kronecker product `a ⊗ g`.
fn kron(a: &Array2<C>, g: &[[C; 2]; 2]) -> Array2<C> {
    let (r, k) = a.dim();
    let mut out = Array2::from_elem((2 * r, 2 * k), c(0.0, 0.0));
    for i in 0..r {
        for j in 0..k {
            for p in 0..2 {
                for q in 0..2 {
                    out[[2 * i + p, 2 * j + q]] = a[[i, j]] * g[p][q];
                }
            }
        }
    }
    out
}

pub fn ry_matrix(t: f64) -> [[C; 2]; 2] {
    let (s, co) = ((t / 2.0).sin(), (t / 2.0).cos());
    [[c(co, 0.0), c(-s, 0.0)], [c(s, 0.0), c(co, 0.0)]]
}

pub fn rz_matrix(t: f64) -> [[C; 2]; 2] {
    [[C::from_polar(1.0, -t / 2.0), c(0.0, 0.0)], [c(0.0, 0.0), C::from_polar(1.0, t / 2.0)]]
}

fn mul2(a: [[C; 2]; 2], b: [[C; 2]; 2]) -> [[C; 2]; 2] {
    let mut o = [[c(0.0, 0.0); 2]; 2];
    for i in 0..2 {
        for j in 0..2 {
            o[i][j] = a[i][0] * b[0][j] + a[i][1] * b[1][j];
        }
    }
    o
}

/// Permutation matrix of `CNOT(control → target)`.
pub fn cnot_matrix(n: usize, control: usize, target: usize) -> Array2<C> {
    let dim = 1 << n;
    let mut m = Array2::from_elem((dim, dim), c(0.0, 0.0));
    for b in 0..dim {
        let out = if b >> control & 1 == 1 { b ^ (1 << target) } else { b };
        m[[out, b]] = c(1.0, 0.0);
    }
    m
}

fn apply(m: &Array2<C>, psi: &[C]) -> Vec<C> {
    (0..psi.len())
        .map(|i| (0..psi.len()).map(|j| m[[i, j]] * psi[j]).sum())
        .collect()
}

/// Circuit unitary applied step by step as dense matrices, then
/// `⟨ψ|Z_k|ψ⟩` with a dense `Z_k`.
pub fn dense_vqc(inputs: &[f64], angles: &Array3<f64>, entangler: Entangler) -> Vec<f64> {
    let n = inputs.len();
    let dim = 1 << n;
    let mut psi = vec![c(0.0, 0.0); dim];
    psi[0] = c(1.0, 0.0);
    let mut steps: Vec<Array2<C>> = Vec::new();
    for (q, &x) in inputs.iter().enumerate() {
        steps.push(embed_1q(n, q, ry_matrix(x)));
    }
    for l in 0..angles.dim().0 {
        for q in 0..n {
            let (phi, theta, omega) = (angles[[l, q, 0]], angles[[l, q, 1]], angles[[l, q, 2]]);
            let g = mul2(rz_matrix(omega), mul2(ry_matrix(theta), rz_matrix(phi)));
            steps.push(embed_1q(n, q, g));
        }
        for q in 0..n.saturating_sub(1) {
            steps.push(cnot_matrix(n, q, q + 1));
        }
        if entangler == Entangler::Ring && n > 2 {
            steps.push(cnot_matrix(n, n - 1, 0));
        }
    }
    for m in &steps {
        psi = apply(m, &psi);
    }
    let z = [[c(1.0, 0.0), c(0.0, 0.0)], [c(0.0, 0.0), c(-1.0, 0.0)]];
    (0..n)
        .map(|k| {
            let zk = embed_1q(n, k, z);
            let zpsi = apply(&zk, &psi);
            psi.iter().zip(&zpsi).map(|(a, b)| (a.conj() * b).re).sum()
        })
        .collect()
}

/// Central difference `[f(x + h) − f(x − h)] / 2h` of a scalar function of
/// one coordinate of `x`.
pub fn central_diff(x: &mut [f64], i: usize, h: f64, mut f: impl FnMut(&[f64]) -> f64) -> f64 {
    let orig = x[i];
    x[i] = orig + h;
    let up = f(x);
    x[i] = orig - h;
    let down = f(x);
    x[i] = orig;
    (up - down) / (2.0 * h)
}

/// `|a − b| ≤ max(rel · max(|a|, |b|), abs)`.
pub fn close(a: f64, b: f64, rel: f64, abs: f64) -> bool {
    (a - b).abs() <= (rel * a.abs().max(b.abs())).max(abs)
}

/// Natural cubic spline coefficients `[a, b, c, d]` per segment obtained by
/// solving the full dense system for the knot second derivatives with
/// Gaussian elimination.
pub fn dense_natural_spline(xs: &[f64], ys: &[f64]) -> Vec<[f64; 4]> {
    let n = xs.len();
    let h: Vec<f64> = xs.windows(2).map(|w| w[1] - w[0]).collect();
    let mut a = vec![vec![0.0; n + 1]; n];
    a[0][0] = 1.0;
    a[n - 1][n - 1] = 1.0;
    for i in 1..n - 1 {
        a[i][i - 1] = h[i - 1];
        a[i][i] = 2.0 * (h[i - 1] + h[i]);
        a[i][i + 1] = h[i];
        a[i][n] = 6.0 * ((ys[i + 1] - ys[i]) / h[i] - (ys[i] - ys[i - 1]) / h[i - 1]);
    }
    for col in 0..n {
        let p = (col..n)
            .max_by(|&r, &s| a[r][col].abs().total_cmp(&a[s][col].abs()))
            .unwrap();
        a.swap(col, p);
        for r in 0..n {
            if r != col {
                let f = a[r][col] / a[col][col];
                if f != 0.0 {
                    for k in col..=n {
                        a[r][k] -= f * a[col][k];
                    }
                }
            }
        }
    }
    let m: Vec<f64> = (0..n).map(|i| a[i][n] / a[i][i]).collect();
    (0..n - 1)
        .map(|i| {
            [
                ys[i],
                (ys[i + 1] - ys[i]) / h[i] - h[i] * (2.0 * m[i] + m[i + 1]) / 6.0,
                m[i] / 2.0,
                (m[i + 1] - m[i]) / (6.0 * h[i]),
            ]
        })
        .collect()
}

/// Small seeded synthetic dataset.
pub fn synthetic_wells(counts: [usize; 3], seed: u64) -> Vec<Well> {
    generate_synthetic(&SyntheticConfig {
        seed,
        counts,
        ..SyntheticConfig::default()
    })
    .unwrap()
}
