use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Offset `c` in `ln(k + c)`.
pub const LOG_OFFSET: f64 = 1e-6;

pub fn log_transform(permeability: f64) -> Result<f64> {
    if !(permeability >= 0.0) {
        return Err(Error::Domain(format!(
            "log transform needs permeability ≥ 0, got {permeability}"
        )));
    }
    Ok((permeability + LOG_OFFSET).ln())
}

/// `exp(y_ln) − c`, clamped at 0.
pub fn log_inverse(log_value: f64) -> f64 {
    (log_value.exp() - LOG_OFFSET).max(0.0)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ChannelStats {
    pub min: f64,
    pub max: f64,
}

impl ChannelStats {
    pub fn new(name: &str, min: f64, max: f64) -> Result<Self> {
        if !(min.is_finite() && max.is_finite()) || max <= min {
            return Err(Error::DegenerateRange(name.to_string()));
        }
        Ok(Self { min, max })
    }

    /// Min/max over `values`.
    pub fn fit(name: &str, values: impl IntoIterator<Item = f64>) -> Result<Self> {
        let (lo, hi) = values
            .into_iter()
            .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), v| (lo.min(v), hi.max(v)));
        Self::new(name, lo, hi)
    }

    pub fn normalize(&self, v: f64) -> f64 {
        (v - self.min) / (self.max - self.min)
    }

    pub fn inverse(&self, v: f64) -> f64 {
        v * (self.max - self.min) + self.min
    }
}

pub fn minmax_normalize(v: f64, stats: &ChannelStats) -> f64 {
    stats.normalize(v)
}

pub fn minmax_inverse(v: f64, stats: &ChannelStats) -> f64 {
    stats.inverse(v)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Channels {
    pub x: ChannelStats,
    pub y: ChannelStats,
    pub z: ChannelStats,
    pub facies: ChannelStats,
    /// Log-permeability.
    pub target: ChannelStats,
}

/// Serialized as `{c, channels: {x, y, z, facies, target}}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NormalizationStats {
    pub c: f64,
    pub channels: Channels,
}

impl NormalizationStats {
    /// Normalized target → millidarcies.
    pub fn target_to_md(&self, normalized: f64) -> f64 {
        log_inverse(self.channels.target.inverse(normalized))
    }

    /// Millidarcies → normalized target.
    pub fn md_to_target(&self, permeability: f64) -> Result<f64> {
        Ok(self.channels.target.normalize(log_transform(permeability)?))
    }
}
