use ndarray::{Array2, ArrayView2, Axis, Zip};

/// Row-wise softmax with max subtraction.
pub fn softmax_rows(m: ArrayView2<'_, f64>) -> Array2<f64> {
    let mut out = m.to_owned();
    for mut row in out.axis_iter_mut(Axis(0)) {
        let max = row.fold(f64::NEG_INFINITY, |a, &b| a.max(b));
        row.mapv_inplace(|v| (v - max).exp());
        let sum = row.sum();
        row /= sum;
    }
    out
}

/// Given `y = softmax_rows(x)` and `dy`, returns `dx`:
/// `dx_ij = y_ij (dy_ij − Σ_k y_ik dy_ik)`.
pub fn softmax_rows_backward(y: ArrayView2<'_, f64>, dy: ArrayView2<'_, f64>) -> Array2<f64> {
    let mut dx = Array2::zeros(y.raw_dim());
    Zip::from(dx.rows_mut())
        .and(y.rows())
        .and(dy.rows())
        .for_each(|mut dx, y, dy| {
            let dot = y.dot(&dy);
            Zip::from(&mut dx)
                .and(&y)
                .and(&dy)
                .for_each(|d, &y, &g| *d = y * (g - dot));
        });
    dx
}
