use std::fs;
use std::io::{Read, Write};
use std::path::Path;

use rayon::prelude::*;

use super::report::{facies_report, truth_curves, ReportMeta};
use crate::dataio::{build_features, Well};
use crate::error::{Error, Result};
use crate::training::{load_checkpoint, predict};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EvolutionRow {
    pub epoch: usize,
    /// Mean over test wells of the per-well MAE.
    pub mae_md: f64,
    pub rmse_md: f64,
}

fn epoch_of(name: &str) -> Option<usize> {
    name.strip_prefix("epoch_")?.strip_suffix(".json")?.parse().ok()
}

/// Scores every `epoch_NNNN.json` checkpoint in `dir` on the test wells.
/// Rows are sorted by epoch.
pub fn error_evolution(dir: &Path, test: &[Well]) -> Result<Vec<EvolutionRow>> {
    if test.is_empty() {
        return Err(Error::Validation("no test wells to evaluate".into()));
    }
    let entries = fs::read_dir(dir).map_err(|e| Error::io(dir, e))?;
    let mut files = Vec::new();
    for entry in entries {
        let entry = entry.map_err(|e| Error::io(dir, e))?;
        if let Some(epoch) = entry.file_name().to_str().and_then(epoch_of) {
            files.push((epoch, entry.path()));
        }
    }
    if files.is_empty() {
        return Err(Error::Validation(format!("no epoch_*.json checkpoints in {}", dir.display())));
    }
    files.sort();
    let mut rows: Vec<EvolutionRow> = files
        .par_iter()
        .map(|(epoch, path)| {
            let ctx = |e: Error| e.context(format!("checkpoint epoch {epoch}"));
            let ckpt = load_checkpoint(path).map_err(ctx)?;
            let n = ckpt.config.timesteps;
            let features = test
                .iter()
                .map(|w| build_features(w, &ckpt.stats, n))
                .collect::<Result<Vec<_>>>()
                .map_err(ctx)?;
            let pred = predict(&ckpt, &features).map_err(ctx)?;
            let truth = truth_curves(test, n).map_err(ctx)?;
            let r = facies_report(&pred, &truth, ReportMeta::default()).map_err(ctx)?;
            Ok(EvolutionRow {
                epoch: *epoch,
                mae_md: r.overall_avg.mae_md,
                rmse_md: r.overall_avg.rmse_md,
            })
        })
        .collect::<Result<_>>()?;
    rows.sort_by_key(|r| r.epoch);
    if let Some(w) = rows.windows(2).find(|w| w[0].epoch == w[1].epoch) {
        return Err(Error::Validation(format!("two checkpoints for epoch {}", w[0].epoch)));
    }
    Ok(rows)
}

/// CSV `epoch,mae_md,rmse_md`.
pub fn write_curves_csv<W: Write>(rows: &[EvolutionRow], writer: W) -> Result<()> {
    let err = |e: csv::Error| Error::Parse(format!("writing curves: {e}"));
    let mut w = csv::Writer::from_writer(writer);
    w.write_record(["epoch", "mae_md", "rmse_md"]).map_err(err)?;
    for r in rows {
        w.write_record([r.epoch.to_string(), r.mae_md.to_string(), r.rmse_md.to_string()])
            .map_err(err)?;
    }
    w.flush().map_err(|e| Error::Parse(format!("writing curves: {e}")))
}

pub fn read_curves_csv<R: Read>(reader: R) -> Result<Vec<EvolutionRow>> {
    let mut r = csv::Reader::from_reader(reader);
    let mut rows = Vec::new();
    for (i, rec) in r.records().enumerate() {
        let line = i + 2;
        let rec = rec.map_err(|e| Error::Parse(format!("curves line {line}: {e}")))?;
        let bad = || Error::Parse(format!("curves line {line}: expected epoch,mae_md,rmse_md"));
        let get = |j: usize| rec.get(j).map(str::trim).ok_or_else(bad);
        rows.push(EvolutionRow {
            epoch: get(0)?.parse().map_err(|_| bad())?,
            mae_md: get(1)?.parse().map_err(|_| bad())?,
            rmse_md: get(2)?.parse().map_err(|_| bad())?,
        });
    }
    Ok(rows)
}
