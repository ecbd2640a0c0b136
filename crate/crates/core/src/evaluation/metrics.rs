use crate::error::{shape_err, Result};

fn check(pred: &[f64], truth: &[f64]) -> Result<()> {
    if pred.len() != truth.len() {
        return Err(shape_err(format!(
            "{} predictions for {} truth values",
            pred.len(),
            truth.len()
        )));
    }
    if pred.is_empty() {
        return Err(shape_err("metrics over empty curves"));
    }
    Ok(())
}

/// Mean absolute error.
pub fn mae(pred: &[f64], truth: &[f64]) -> Result<f64> {
    check(pred, truth)?;
    let s: f64 = pred.iter().zip(truth).map(|(p, t)| (p - t).abs()).sum();
    Ok(s / pred.len() as f64)
}

/// Root mean squared error.
pub fn rmse(pred: &[f64], truth: &[f64]) -> Result<f64> {
    check(pred, truth)?;
    let s: f64 = pred.iter().zip(truth).map(|(p, t)| (p - t) * (p - t)).sum();
    Ok((s / pred.len() as f64).sqrt())
}
