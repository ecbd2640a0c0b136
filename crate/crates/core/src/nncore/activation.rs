//! Elementwise activations. Backward passes take the forward output where
//! that is cheaper than the input.

use ndarray::{Array, ArrayView, Dimension, Zip};

/// Logistic function, evaluated without overflow for large `|x|`.
pub fn sigmoid_scalar(x: f64) -> f64 {
    if x >= 0.0 {
        1.0 / (1.0 + (-x).exp())
    } else {
        let e = x.exp();
        e / (1.0 + e)
    }
}

pub fn sigmoid<D: Dimension>(x: ArrayView<'_, f64, D>) -> Array<f64, D> {
    x.mapv(sigmoid_scalar)
}

pub fn tanh<D: Dimension>(x: ArrayView<'_, f64, D>) -> Array<f64, D> {
    x.mapv(f64::tanh)
}

pub fn relu<D: Dimension>(x: ArrayView<'_, f64, D>) -> Array<f64, D> {
    x.mapv(|v| v.max(0.0))
}

/// `dy · y(1 − y)` where `y = sigmoid(x)`.
pub fn sigmoid_backward<D: Dimension>(
    y: ArrayView<'_, f64, D>,
    dy: ArrayView<'_, f64, D>,
) -> Array<f64, D> {
    Zip::from(&y).and(&dy).map_collect(|&y, &g| g * y * (1.0 - y))
}

/// `dy · (1 − y²)` where `y = tanh(x)`.
pub fn tanh_backward<D: Dimension>(
    y: ArrayView<'_, f64, D>,
    dy: ArrayView<'_, f64, D>,
) -> Array<f64, D> {
    Zip::from(&y).and(&dy).map_collect(|&y, &g| g * (1.0 - y * y))
}

/// Takes the forward input; the derivative at 0 is taken as 0.
pub fn relu_backward<D: Dimension>(
    x: ArrayView<'_, f64, D>,
    dy: ArrayView<'_, f64, D>,
) -> Array<f64, D> {
    Zip::from(&x).and(&dy).map_collect(|&x, &g| if x > 0.0 { g } else { 0.0 })
}

#[cfg(test)]
mod tests {
    use ndarray::{array, Array1};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    use super::*;

    #[test]
    fn fixed_points() {
        assert_eq!(sigmoid_scalar(0.0), 0.5);
        assert_eq!(tanh(array![0.0].view())[0], 0.0);
        assert_eq!(relu(array![-1.0].view())[0], 0.0);
        assert!(sigmoid_scalar(-800.0) >= 0.0 && sigmoid_scalar(800.0) <= 1.0);
        assert!(sigmoid_scalar(-800.0).is_finite());
    }

    #[test]
    fn sigmoid_symmetry() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..100 {
            let x: f64 = rng.random_range(-30.0..30.0);
            assert!((sigmoid_scalar(-x) - (1.0 - sigmoid_scalar(x))).abs() < 1e-15);
        }
    }

    #[test]
    fn derivatives_match_finite_differences() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let x = Array1::from_shape_simple_fn(100, || rng.random_range(-4.0..4.0));
        let ones = Array1::ones(100);
        let h = 1e-5;
        let ds = sigmoid_backward(sigmoid(x.view()).view(), ones.view());
        let dt = tanh_backward(tanh(x.view()).view(), ones.view());
        let dr = relu_backward(x.view(), ones.view());
        for i in 0..100 {
            let v = x[i];
            let fd_s = (sigmoid_scalar(v + h) - sigmoid_scalar(v - h)) / (2.0 * h);
            let fd_t = ((v + h).tanh() - (v - h).tanh()) / (2.0 * h);
            let fd_r = ((v + h).max(0.0) - (v - h).max(0.0)) / (2.0 * h);
            assert!((fd_s - ds[i]).abs() < 1e-8);
            assert!((fd_t - dt[i]).abs() < 1e-8);
            if v.abs() > h {
                assert!((fd_r - dr[i]).abs() < 1e-8);
            }
        }
    }
}
