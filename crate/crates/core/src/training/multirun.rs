use ndarray::ArrayView2;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::checkpoint::Checkpoint;
use super::config::{AveragingDomain, TrainConfig};
use super::trainer::{train_one_run, RunResult};
use crate::dataio::{log_inverse, log_transform, NormalizationStats, ResampledWell};
use crate::error::{Error, Result};
use crate::network::{model_forward, Mode};

/// One model's prediction for one well, in millidarcies.
#[derive(Debug, Clone, PartialEq)]
pub struct PredictedCurve {
    pub well_id: String,
    pub depth: Vec<f64>,
    pub perm_md: Vec<f64>,
}

/// Averaged prediction for one well plus the per-run curves behind it.
#[derive(Debug, Clone, PartialEq)]
pub struct WellPrediction {
    pub well_id: String,
    pub depth: Vec<f64>,
    pub mean_md: Vec<f64>,
    pub runs: Vec<Vec<f64>>,
}

#[derive(Debug, Clone)]
pub struct MultiRunResult {
    pub runs: Vec<RunResult>,
}

impl MultiRunResult {
    pub fn final_checkpoints(&self) -> Vec<&Checkpoint> {
        self.runs.iter().map(|r| &r.final_checkpoint).collect()
    }

    /// Predicts every well with each run's final model and averages.
    pub fn predict(&self, wells: &[ResampledWell], domain: AveragingDomain) -> Result<Vec<WellPrediction>> {
        let ckpts: Vec<Checkpoint> = self.runs.iter().map(|r| r.final_checkpoint.clone()).collect();
        predict_ensemble(&ckpts, wells, domain)
    }
}

/// Trains `cfg.runs` models with seeds `cfg.seed + i` on a pool of `jobs`
/// threads (0 picks the rayon default). Results are ordered by run index.
pub fn multi_run(
    cfg: &TrainConfig,
    stats: &NormalizationStats,
    train: &[ResampledWell],
    jobs: usize,
) -> Result<MultiRunResult> {
    cfg.validate()?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs)
        .build()
        .map_err(|e| Error::Config(format!("thread pool: {e}")))?;
    let runs = pool.install(|| {
        (0..cfg.runs)
            .into_par_iter()
            .map(|i| {
                let seed = cfg.seed.wrapping_add(i as u64);
                train_one_run(cfg, i, seed, stats, train).map_err(|e| e.context(format!("run {i}")))
            })
            .collect::<Result<Vec<_>>>()
    })?;
    Ok(MultiRunResult { runs })
}

/// Evaluation-mode prediction of each well, mapped back to mD with the
/// checkpoint's normalization statistics.
pub fn predict(ckpt: &Checkpoint, wells: &[ResampledWell]) -> Result<Vec<PredictedCurve>> {
    wells
        .iter()
        .map(|w| {
            Ok(PredictedCurve {
                well_id: w.well_id.clone(),
                depth: w.depth_grid.clone(),
                perm_md: predict_curve(ckpt, w.features.view())
                    .map_err(|e| e.context(format!("well {}", w.well_id)))?,
            })
        })
        .collect()
}

/// Evaluation-mode prediction of one normalized `(T, d_in)` feature
/// sequence, in mD.
pub fn predict_curve(ckpt: &Checkpoint, features: ArrayView2<'_, f64>) -> Result<Vec<f64>> {
    // Eval mode draws nothing from the RNG.
    let mut rng = ChaCha8Rng::seed_from_u64(0);
    let (pred, _) = model_forward(features, &ckpt.params, Mode::Eval, &mut rng)?;
    Ok(pred.iter().map(|&t| ckpt.stats.target_to_md(t)).collect())
}

/// Pointwise mean of equally long mD curves, either directly or of
/// `ln(k + c)` mapped back.
pub fn average_curves(curves: &[Vec<f64>], domain: AveragingDomain) -> Result<Vec<f64>> {
    let first = curves
        .first()
        .ok_or_else(|| Error::Config("no curves to average".into()))?;
    if let Some(bad) = curves.iter().find(|c| c.len() != first.len()) {
        return Err(Error::Shape(format!(
            "cannot average curves of length {} and {}",
            first.len(),
            bad.len()
        )));
    }
    let n = curves.len() as f64;
    (0..first.len())
        .map(|i| match domain {
            AveragingDomain::Linear => Ok(curves.iter().map(|c| c[i]).sum::<f64>() / n),
            AveragingDomain::Log => {
                let mut s = 0.0;
                for c in curves {
                    s += log_transform(c[i])?;
                }
                Ok(log_inverse(s / n))
            }
        })
        .collect()
}

/// Averaged predictions from several checkpoints.
pub fn predict_ensemble(
    ckpts: &[Checkpoint],
    wells: &[ResampledWell],
    domain: AveragingDomain,
) -> Result<Vec<WellPrediction>> {
    if ckpts.is_empty() {
        return Err(Error::Config("no checkpoints to predict with".into()));
    }
    let per_run: Vec<Vec<PredictedCurve>> = ckpts
        .par_iter()
        .enumerate()
        .map(|(i, c)| predict(c, wells).map_err(|e| e.context(format!("run {i}"))))
        .collect::<Result<_>>()?;
    wells
        .iter()
        .enumerate()
        .map(|(w, well)| {
            let runs: Vec<Vec<f64>> = per_run.iter().map(|r| r[w].perm_md.clone()).collect();
            Ok(WellPrediction {
                well_id: well.well_id.clone(),
                depth: well.depth_grid.clone(),
                mean_md: average_curves(&runs, domain)?,
                runs,
            })
        })
        .collect()
}
