//! Seeded delta-plain well generator.
//!
//! Facies occupy parallel strips across the x axis in the cyclic order
//! channel | sand | mud | sand. Log-permeability is a per-facies base level
//! plus a smooth field shared by all wells (a sum of low-frequency
//! sinusoids in x, y and depth) plus white noise.

use std::f64::consts::TAU;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use super::well::{Facies, Sample, Well};
use crate::error::{Error, Result};

const FIELD_MODES: usize = 6;
const PERM_FLOOR_MD: f64 = 0.01;
const PERM_CEIL_MD: f64 = 5026.0;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SyntheticConfig {
    pub seed: u64,
    /// Wells per facies, indexed by facies code.
    pub counts: [usize; 3],
    /// Median permeability per facies, mD.
    pub median_md: [f64; 3],
    /// Standard deviation of `ln k` per facies.
    pub log_spread: [f64; 3],
    /// Side of the square map area.
    pub extent: f64,
    /// Range of well top depths.
    pub top_depth: (f64, f64),
    /// Range of interval thickness.
    pub thickness: (f64, f64),
    /// Range of log samples per well (inclusive).
    pub samples_per_well: (usize, usize),
    /// Fraction of the log-domain spread carried by uncorrelated noise.
    pub noise_scale: f64,
}

impl Default for SyntheticConfig {
    fn default() -> Self {
        Self {
            seed: 0,
            counts: [34, 17, 12],
            median_md: [326.94, 2.56, 0.12],
            log_spread: [0.7, 1.6, 0.5],
            extent: 10_000.0,
            top_depth: (1800.0, 1860.0),
            thickness: (20.0, 40.0),
            samples_per_well: (40, 120),
            noise_scale: 0.35,
        }
    }
}

impl SyntheticConfig {
    pub fn validate(&self) -> Result<()> {
        let bad = |m: &str| Err(Error::Config(m.to_string()));
        if self.counts.iter().any(|&c| c == 0) {
            return bad("every facies needs at least one well");
        }
        if self.median_md.iter().any(|&m| !(m > 0.0 && m.is_finite())) {
            return bad("facies medians must be positive");
        }
        if self.log_spread.iter().any(|&s| !(s > 0.0 && s.is_finite())) {
            return bad("facies spreads must be positive");
        }
        if !(self.extent > 0.0) {
            return bad("extent must be positive");
        }
        if !(self.top_depth.1 >= self.top_depth.0) || !(self.thickness.1 >= self.thickness.0 && self.thickness.0 > 0.0) {
            return bad("depth ranges must be ordered and thickness positive");
        }
        let (lo, hi) = self.samples_per_well;
        if lo < 4 || hi < lo {
            return bad("samples per well must be an ordered range starting at ≥ 4");
        }
        if !(0.0..=1.0).contains(&self.noise_scale) {
            return bad("noise scale must be in [0, 1]");
        }
        Ok(())
    }
}

struct Mode {
    kx: f64,
    ky: f64,
    kz: f64,
    phase: f64,
}

/// Unit-variance smooth field.
struct Field {
    modes: Vec<Mode>,
}

impl Field {
    fn new(cfg: &SyntheticConfig, rng: &mut ChaCha8Rng) -> Self {
        let modes = (0..FIELD_MODES)
            .map(|_| {
                let dir = rng.random_range(0.0..TAU);
                let lateral = rng.random_range(0.5..2.0) * cfg.extent;
                let vertical = rng.random_range(0.3..1.2) * cfg.thickness.1;
                Mode {
                    kx: TAU / lateral * dir.cos(),
                    ky: TAU / lateral * dir.sin(),
                    kz: TAU / vertical,
                    phase: rng.random_range(0.0..TAU),
                }
            })
            .collect();
        Self { modes }
    }

    fn at(&self, x: f64, y: f64, z: f64) -> f64 {
        let amp = (2.0 / self.modes.len() as f64).sqrt();
        self.modes
            .iter()
            .map(|m| (m.kx * x + m.ky * y + m.kz * z + m.phase).sin())
            .sum::<f64>()
            * amp
    }
}

fn strip_x(facies: Facies, extent: f64, rng: &mut ChaCha8Rng) -> f64 {
    let w = extent / 4.0;
    let strip = match facies {
        Facies::Channel => 0,
        Facies::Sand => {
            if rng.random_bool(0.5) {
                1
            } else {
                3
            }
        }
        Facies::Mud => 2,
    };
    w * (strip as f64 + rng.random_range(0.05..0.95))
}

pub fn generate_synthetic(cfg: &SyntheticConfig) -> Result<Vec<Well>> {
    cfg.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let field = Field::new(cfg, &mut rng);
    let correlated = (1.0 - cfg.noise_scale * cfg.noise_scale).sqrt();
    let mut wells = Vec::with_capacity(cfg.counts.iter().sum());
    for facies in Facies::ALL {
        let f = facies.code() as usize;
        for _ in 0..cfg.counts[f] {
            let x = strip_x(facies, cfg.extent, &mut rng);
            let y = rng.random_range(0.0..cfg.extent);
            let top = if cfg.top_depth.1 > cfg.top_depth.0 {
                rng.random_range(cfg.top_depth.0..cfg.top_depth.1)
            } else {
                cfg.top_depth.0
            };
            let thickness = if cfg.thickness.1 > cfg.thickness.0 {
                rng.random_range(cfg.thickness.0..cfg.thickness.1)
            } else {
                cfg.thickness.0
            };
            let n = rng.random_range(cfg.samples_per_well.0..=cfg.samples_per_well.1);
            let step = thickness / (n - 1) as f64;
            let base = cfg.median_md[f].ln();
            let samples = (0..n)
                .map(|k| {
                    let jitter = if k == 0 || k == n - 1 {
                        0.0
                    } else {
                        rng.random_range(-0.3..0.3) * step
                    };
                    let depth = top + step * k as f64 + jitter;
                    let noise: f64 = StandardNormal.sample(&mut rng);
                    let z = field.at(x, y, depth - top);
                    let ln_k = base + cfg.log_spread[f] * (correlated * z + cfg.noise_scale * noise);
                    Sample {
                        depth,
                        permeability: ln_k.exp().clamp(PERM_FLOOR_MD, PERM_CEIL_MD),
                    }
                })
                .collect();
            wells.push(Well {
                well_id: format!("W{:03}", wells.len() + 1),
                x,
                y,
                facies,
                samples,
            });
        }
    }
    Ok(wells)
}
