use ndarray::{Array, ArrayView, Dimension};
use rand::Rng;

use crate::error::{Error, Result};

/// Inverted-dropout mask; `None` means the layer was a pass-through.
#[derive(Debug, Clone)]
pub struct DropoutMask<D: Dimension> {
    scale: Option<Array<f64, D>>,
}

impl<D: Dimension> DropoutMask<D> {
    pub fn is_identity(&self) -> bool {
        self.scale.is_none()
    }
}

/// Training mode zeroes each entry with probability `rate` and scales the
/// survivors by `1/(1 − rate)`; inference mode is the identity.
pub fn dropout<D: Dimension, R: Rng + ?Sized>(
    x: ArrayView<'_, f64, D>,
    rate: f64,
    training: bool,
    rng: &mut R,
) -> Result<(Array<f64, D>, DropoutMask<D>)> {
    if !(0.0..1.0).contains(&rate) {
        return Err(Error::Config(format!("dropout rate must be in [0, 1), got {rate}")));
    }
    if !training || rate == 0.0 {
        return Ok((x.to_owned(), DropoutMask { scale: None }));
    }
    let keep = 1.0 / (1.0 - rate);
    let scale = x.mapv(|_| if rng.random::<f64>() < rate { 0.0 } else { keep });
    Ok((&x * &scale, DropoutMask { scale: Some(scale) }))
}

pub fn dropout_backward<D: Dimension>(
    mask: &DropoutMask<D>,
    dy: ArrayView<'_, f64, D>,
) -> Array<f64, D> {
    match &mask.scale {
        Some(s) => &dy * s,
        None => dy.to_owned(),
    }
}

#[cfg(test)]
mod tests {
    use ndarray::{array, Array1};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    use super::*;

    #[test]
    fn zero_rate_and_inference_are_identity() {
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        let x = array![1.0, -2.0, 3.0];
        let (y, m) = dropout(x.view(), 0.0, true, &mut rng).unwrap();
        assert_eq!(y, x);
        assert!(m.is_identity());
        let (y, _) = dropout(x.view(), 0.5, false, &mut rng).unwrap();
        assert_eq!(y, x);
    }

    #[test]
    fn invalid_rate() {
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        let x = array![1.0];
        assert!(matches!(dropout(x.view(), 1.0, true, &mut rng), Err(Error::Config(_))));
        assert!(dropout(x.view(), -0.1, true, &mut rng).is_err());
    }

    #[test]
    fn preserves_mean_in_expectation() {
        let mut rng = ChaCha8Rng::seed_from_u64(42);
        let x = Array1::<f64>::ones(100_000);
        let (y, _) = dropout(x.view(), 0.5, true, &mut rng).unwrap();
        let mean = y.mean().unwrap();
        assert!((mean - 1.0).abs() < 0.01, "mean {mean}");
        assert!(y.iter().all(|&v| v == 0.0 || v == 2.0));
    }

    #[test]
    fn backward_applies_same_mask() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let x = Array1::<f64>::ones(50);
        let (y, m) = dropout(x.view(), 0.3, true, &mut rng).unwrap();
        let dx = dropout_backward(&m, Array1::ones(50).view());
        assert_eq!(dx, y);
    }
}
