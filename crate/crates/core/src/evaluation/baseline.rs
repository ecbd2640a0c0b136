use serde::{Deserialize, Serialize};

use crate::dataio::{log_inverse, resample_spline, Facies, Well};
use crate::error::{Error, Result};

/// Inverse-distance weights scaled by facies similarity.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FaciesWeighting {
    pub power: f64,
    /// Weight multiplier for facies sequence distance 0, 1 and 2.
    pub similarity: [f64; 3],
}

impl Default for FaciesWeighting {
    fn default() -> Self {
        Self {
            power: 2.0,
            similarity: [1.0, 0.5, 0.25],
        }
    }
}

impl FaciesWeighting {
    pub fn validate(&self) -> Result<()> {
        if !(self.power > 0.0 && self.power.is_finite()) {
            return Err(Error::Config(format!("IDW power must be > 0, got {}", self.power)));
        }
        let s = self.similarity;
        if !(s[2] > 0.0 && s[1] >= s[2] && s[0] >= s[1] && s[0].is_finite()) {
            return Err(Error::Config(format!(
                "facies similarity must be positive and non-increasing, got {s:?}"
            )));
        }
        Ok(())
    }

    pub fn similarity(&self, a: Facies, b: Facies) -> f64 {
        self.similarity[a.sequence_distance(b)]
    }
}

/// A well's `ln(k + c)` curve on its resampling grid.
#[derive(Debug, Clone, PartialEq)]
pub struct LogCurve {
    pub well_id: String,
    pub x: f64,
    pub y: f64,
    pub facies: Facies,
    pub log_perm: Vec<f64>,
}

impl LogCurve {
    pub fn from_well(well: &Well, n: usize) -> Result<Self> {
        let (_, log_perm) = resample_spline(well, n)?;
        Ok(Self {
            well_id: well.well_id.clone(),
            x: well.x,
            y: well.y,
            facies: well.facies,
            log_perm,
        })
    }
}

/// Predicts a curve at `(x, y)` as the weighted mean of the training
/// curves in the log domain, grid point by grid point, returned in mD.
/// A query that coincides with a training well returns that well's curve.
pub fn idw_facies_baseline(
    train: &[LogCurve],
    x: f64,
    y: f64,
    facies: Facies,
    weighting: &FaciesWeighting,
) -> Result<Vec<f64>> {
    weighting.validate()?;
    let first = train
        .first()
        .ok_or_else(|| Error::Validation("baseline needs at least one training well".into()))?;
    let n = first.log_perm.len();
    if let Some(bad) = train.iter().find(|c| c.log_perm.len() != n) {
        return Err(Error::Shape(format!(
            "well {} has {} grid points, expected {n}",
            bad.well_id,
            bad.log_perm.len()
        )));
    }
    let mut weights = Vec::with_capacity(train.len());
    for c in train {
        let d = (c.x - x).hypot(c.y - y);
        if d == 0.0 {
            return Ok(c.log_perm.iter().map(|&v| log_inverse(v)).collect());
        }
        weights.push(weighting.similarity(c.facies, facies) / d.powf(weighting.power));
    }
    let total: f64 = weights.iter().sum();
    Ok((0..n)
        .map(|i| {
            let s: f64 = train.iter().zip(&weights).map(|(c, w)| w * c.log_perm[i]).sum();
            log_inverse(s / total)
        })
        .collect())
}
