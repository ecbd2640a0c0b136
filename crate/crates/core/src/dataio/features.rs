use ndarray::{Array1, Array2};

use super::spline::NaturalCubicSpline;
use super::transform::{log_inverse, log_transform, ChannelStats, Channels, NormalizationStats, LOG_OFFSET};
use super::well::{Facies, Well, MIN_KNOTS};
use crate::error::{Error, Result};

/// Samples per resampled well.
pub const DEFAULT_TIMESTEPS: usize = 100;

/// A well on its uniform depth grid, ready for the network.
#[derive(Debug, Clone, PartialEq)]
pub struct ResampledWell {
    pub well_id: String,
    pub facies: Facies,
    pub x: f64,
    pub y: f64,
    /// `(n, 4)`: normalized `[x, y, z, facies]` per depth step.
    pub features: Array2<f64>,
    /// Normalized log-permeability per depth step.
    pub target: Array1<f64>,
    pub depth_grid: Vec<f64>,
}

impl ResampledWell {
    pub fn timesteps(&self) -> usize {
        self.depth_grid.len()
    }

    /// Target curve back in millidarcies.
    pub fn target_md(&self, stats: &NormalizationStats) -> Vec<f64> {
        self.target.iter().map(|&t| stats.target_to_md(t)).collect()
    }
}

fn uniform_grid(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    let step = (hi - lo) / (n - 1) as f64;
    let mut grid: Vec<f64> = (0..n).map(|i| lo + step * i as f64).collect();
    grid[n - 1] = hi;
    grid
}

/// Natural cubic spline through `(depth, ln(k + c))`, sampled on `n`
/// uniformly spaced depths spanning the well. Returns `(depth_grid, log_perm)`.
pub fn resample_spline(well: &Well, n: usize) -> Result<(Vec<f64>, Vec<f64>)> {
    if n < 2 {
        return Err(Error::Config(format!("resampling needs n ≥ 2, got {n}")));
    }
    if well.samples.len() < MIN_KNOTS {
        return Err(Error::Validation(format!(
            "well {}: {} samples, spline resampling needs ≥ {MIN_KNOTS}",
            well.well_id,
            well.samples.len()
        )));
    }
    well.validate()?;
    let depths: Vec<f64> = well.samples.iter().map(|s| s.depth).collect();
    let logs = well
        .samples
        .iter()
        .map(|s| log_transform(s.permeability))
        .collect::<Result<Vec<_>>>()?;
    let spline = NaturalCubicSpline::fit(&depths, &logs)
        .map_err(|e| Error::Validation(format!("well {}: {e}", well.well_id)))?;
    let grid = uniform_grid(depths[0], depths[depths.len() - 1], n);
    let values: Vec<f64> = grid.iter().map(|&z| spline.eval(z)).collect();
    if values.iter().any(|v| !v.is_finite()) {
        return Err(Error::Numeric(format!("well {}: non-finite spline value", well.well_id)));
    }
    Ok((grid, values))
}

/// Fits per-channel min/max on training wells only. The facies channel is
/// fixed to `[0, 2]`.
pub fn fit_stats(training: &[Well], n: usize) -> Result<NormalizationStats> {
    if training.is_empty() {
        return Err(Error::Validation("no training wells to fit statistics on".into()));
    }
    let mut depths = Vec::with_capacity(training.len() * 2);
    let mut logs = Vec::with_capacity(training.len() * n);
    for w in training {
        let (grid, values) = resample_spline(w, n)?;
        depths.push(grid[0]);
        depths.push(grid[n - 1]);
        logs.extend(values);
    }
    Ok(NormalizationStats {
        c: LOG_OFFSET,
        channels: Channels {
            x: ChannelStats::fit("x", training.iter().map(|w| w.x))?,
            y: ChannelStats::fit("y", training.iter().map(|w| w.y))?,
            z: ChannelStats::fit("z", depths)?,
            facies: ChannelStats::new("facies", 0.0, 2.0)?,
            target: ChannelStats::fit("target", logs)?,
        },
    })
}

pub fn build_features(well: &Well, stats: &NormalizationStats, n: usize) -> Result<ResampledWell> {
    if stats.c != LOG_OFFSET {
        return Err(Error::Validation(format!(
            "statistics use log offset {} (this build uses {LOG_OFFSET})",
            stats.c
        )));
    }
    let (grid, logs) = resample_spline(well, n)?;
    let ch = &stats.channels;
    let xn = ch.x.normalize(well.x);
    let yn = ch.y.normalize(well.y);
    let fn_ = ch.facies.normalize(well.facies.code() as f64);
    let mut features = Array2::zeros((n, 4));
    for (t, &z) in grid.iter().enumerate() {
        features[[t, 0]] = xn;
        features[[t, 1]] = yn;
        features[[t, 2]] = ch.z.normalize(z);
        features[[t, 3]] = fn_;
    }
    if features.iter().any(|v| !(0.0..=1.0).contains(v)) {
        log::warn!(
            "well {}: features fall outside the training range; passing through unclipped",
            well.well_id
        );
    }
    let target = logs.iter().map(|&v| ch.target.normalize(v)).collect();
    Ok(ResampledWell {
        well_id: well.well_id.clone(),
        facies: well.facies,
        x: well.x,
        y: well.y,
        features,
        target,
        depth_grid: grid,
    })
}

/// Spline curve of a well in millidarcies on its `n`-point grid.
pub fn spline_curve_md(well: &Well, n: usize) -> Result<(Vec<f64>, Vec<f64>)> {
    let (grid, logs) = resample_spline(well, n)?;
    Ok((grid, logs.into_iter().map(log_inverse).collect()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dataio::well::Sample;

    fn well(id: &str, x: f64, y: f64, facies: Facies, slope: f64) -> Well {
        Well {
            well_id: id.into(),
            x,
            y,
            facies,
            samples: (0..6)
                .map(|k| Sample {
                    depth: 100.0 + 2.0 * k as f64,
                    permeability: (1.0 + slope * k as f64).exp() - LOG_OFFSET,
                })
                .collect(),
        }
    }

    #[test]
    fn linear_log_perm_is_reproduced() {
        let w = well("A", 0.0, 0.0, Facies::Channel, 0.5);
        let (grid, logs) = resample_spline(&w, 11).unwrap();
        assert_eq!(grid.len(), 11);
        for (z, v) in grid.iter().zip(&logs) {
            let expected = 1.0 + 0.5 * (z - 100.0) / 2.0;
            assert!((v - expected).abs() < 1e-9);
        }
    }

    #[test]
    fn too_few_knots() {
        let mut w = well("A", 0.0, 0.0, Facies::Channel, 0.5);
        w.samples.truncate(3);
        assert!(matches!(resample_spline(&w, 10), Err(Error::Validation(_))));
    }

    #[test]
    fn stats_examples() {
        let wells = [
            well("A", 10.0, 20.0, Facies::Channel, 0.1),
            well("B", 30.0, 40.0, Facies::Channel, -0.2),
        ];
        let s = fit_stats(&wells, 20).unwrap();
        assert_eq!((s.channels.x.min, s.channels.x.max), (10.0, 30.0));
        assert_eq!((s.channels.y.min, s.channels.y.max), (20.0, 40.0));
        assert_eq!((s.channels.facies.min, s.channels.facies.max), (0.0, 2.0));
        assert_eq!(s, fit_stats(&wells, 20).unwrap());
        assert_eq!(s.channels.facies.normalize(1.0), 0.5);
    }

    #[test]
    fn degenerate_channel() {
        let wells = [well("A", 10.0, 20.0, Facies::Sand, 0.1), well("B", 10.0, 40.0, Facies::Sand, 0.2)];
        assert!(matches!(fit_stats(&wells, 20), Err(Error::DegenerateRange(c)) if c == "x"));
    }

    #[test]
    fn features_layout_and_target_round_trip() {
        let wells = [
            well("A", 10.0, 20.0, Facies::Channel, 0.1),
            well("B", 30.0, 40.0, Facies::Mud, -0.2),
        ];
        let stats = fit_stats(&wells, 20).unwrap();
        let r = build_features(&wells[0], &stats, 20).unwrap();
        assert_eq!(r.features.dim(), (20, 4));
        assert!(r.features.column(0).iter().all(|&v| v == 0.0));
        assert!(r.features.column(3).iter().all(|&v| v == 0.0));
        let (_, md) = spline_curve_md(&wells[0], 20).unwrap();
        for (a, b) in r.target_md(&stats).iter().zip(&md) {
            assert!((a - b).abs() <= 1e-9 * b.max(1.0));
        }

        let outside = well("C", 50.0, 20.0, Facies::Sand, 0.0);
        let r = build_features(&outside, &stats, 20).unwrap();
        assert!(r.features[[0, 0]] > 1.0);
    }
}
