use std::fs;
use std::io::{Read, Write};
use std::path::Path;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::checkpoint::{save_checkpoint, Checkpoint};
use super::config::TrainConfig;
use crate::dataio::{NormalizationStats, ResampledWell};
use crate::error::{Error, Result};
use crate::network::{model_backward, model_forward, Mode, ModelParams};
use crate::nncore::{huber_loss, AdamState};

/// One independently seeded training run.
#[derive(Debug, Clone)]
pub struct RunResult {
    pub run_index: usize,
    pub seed: u64,
    /// Snapshots at every multiple of the checkpoint cadence.
    pub checkpoints: Vec<Checkpoint>,
    pub final_checkpoint: Checkpoint,
    /// Mean training loss per epoch, measured before that epoch's update.
    pub loss_trace: Vec<f64>,
}

impl RunResult {
    /// Writes `checkpoints/epoch_XXXX.json`, `final.json` and `loss.csv`
    /// under `dir`.
    pub fn write(&self, dir: &Path) -> Result<()> {
        let ckpt_dir = dir.join("checkpoints");
        fs::create_dir_all(&ckpt_dir).map_err(|e| Error::io(&ckpt_dir, e))?;
        for c in &self.checkpoints {
            save_checkpoint(c, ckpt_dir.join(format!("epoch_{:04}.json", c.epoch)))?;
        }
        save_checkpoint(&self.final_checkpoint, dir.join("final.json"))?;
        let loss_path = dir.join("loss.csv");
        let file = fs::File::create(&loss_path).map_err(|e| Error::io(&loss_path, e))?;
        write_loss_trace(&self.loss_trace, file).map_err(|e| e.context(loss_path.display()))
    }
}

fn well_pass(
    well: &ResampledWell,
    params: &ModelParams,
    cfg: &TrainConfig,
    seed: u64,
) -> Result<(f64, ModelParams)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mode = Mode::Train { dropout: cfg.dropout };
    let (pred, cache) = model_forward(well.features.view(), params, mode, &mut rng)?;
    let (loss, d_pred) = huber_loss(well.target.view(), pred.view(), &cfg.huber)?;
    let grads = model_backward(&cache, params, d_pred.view())?;
    Ok((loss, grads.params))
}

/// Trains one model with full-batch Adam: every epoch runs all training
/// wells, averages loss and gradients over wells, and takes a single step.
///
/// Dropout masks are drawn from per-well seeds taken from the run RNG, so results
/// do not depend on the thread count.
pub fn train_one_run(
    cfg: &TrainConfig,
    run_index: usize,
    run_seed: u64,
    stats: &NormalizationStats,
    train: &[ResampledWell],
) -> Result<RunResult> {
    cfg.validate()?;
    if train.is_empty() {
        return Err(Error::Config("no training wells".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(run_seed);
    let mut params = ModelParams::init(cfg.model_config(), &mut rng)?;
    let mut adam = AdamState::for_params(&params);
    let mut checkpoints = Vec::with_capacity(cfg.checkpoint_count());
    let mut loss_trace = Vec::with_capacity(cfg.epochs);
    let snapshot = |params: &ModelParams, epoch: usize| Checkpoint {
        config: cfg.clone(),
        seed: run_seed,
        epoch,
        stats: *stats,
        params: params.clone(),
    };
    let scale = 1.0 / train.len() as f64;

    for epoch in 1..=cfg.epochs {
        let seeds: Vec<u64> = train.iter().map(|_| rng.random()).collect();
        let passes: Vec<(f64, ModelParams)> = train
            .par_iter()
            .zip(seeds.par_iter())
            .map(|(w, &s)| well_pass(w, &params, cfg, s).map_err(|e| e.context(format!("well {}", w.well_id))))
            .collect::<Result<_>>()
            .map_err(|e| e.context(format!("epoch {epoch}")))?;
        let mut grad = params.zeros_like();
        let mut loss = 0.0;
        for (l, g) in &passes {
            loss += l * scale;
            grad.scaled_add(scale, g);
        }
        if !loss.is_finite() {
            return Err(Error::Numeric(format!("epoch {epoch}: training loss is {loss}")));
        }
        loss_trace.push(loss);
        adam.step(&mut params, &grad, &cfg.adam)
            .map_err(|e| e.context(format!("epoch {epoch}")))?;
        if !params.is_finite() {
            return Err(Error::Numeric(format!("epoch {epoch}: parameters became non-finite")));
        }
        if epoch % cfg.checkpoint_every == 0 {
            log::info!("run {run_index} epoch {epoch}: loss {loss:.6}");
            checkpoints.push(snapshot(&params, epoch));
        }
    }

    Ok(RunResult {
        run_index,
        seed: run_seed,
        checkpoints,
        final_checkpoint: snapshot(&params, cfg.epochs),
        loss_trace,
    })
}

/// CSV `epoch,loss`, epochs counted from 1.
pub fn write_loss_trace<W: Write>(trace: &[f64], writer: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(writer);
    let err = |e: csv::Error| Error::Parse(format!("writing loss trace: {e}"));
    w.write_record(["epoch", "loss"]).map_err(err)?;
    for (i, l) in trace.iter().enumerate() {
        w.write_record([(i + 1).to_string(), l.to_string()]).map_err(err)?;
    }
    w.flush().map_err(|e| Error::Parse(format!("writing loss trace: {e}")))
}

pub fn read_loss_trace<R: Read>(reader: R) -> Result<Vec<f64>> {
    let mut r = csv::Reader::from_reader(reader);
    let mut out = Vec::new();
    for (i, rec) in r.records().enumerate() {
        let rec = rec.map_err(|e| Error::Parse(format!("loss trace line {}: {e}", i + 2)))?;
        let loss = rec
            .get(1)
            .and_then(|s| s.trim().parse::<f64>().ok())
            .ok_or_else(|| Error::Parse(format!("loss trace line {}: bad loss value", i + 2)))?;
        out.push(loss);
    }
    Ok(out)
}
