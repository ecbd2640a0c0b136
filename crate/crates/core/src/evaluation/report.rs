use std::collections::BTreeMap;
use std::io::Write;

use serde::{Deserialize, Serialize};

use super::metrics::{mae, rmse};
use crate::dataio::{Facies, Well};
use crate::error::{Error, Result};
use crate::training::PredictedCurve;

/// Reference curve of a test well in mD, on the same grid as its prediction.
#[derive(Debug, Clone, PartialEq)]
pub struct TruthCurve {
    pub well_id: String,
    pub facies: Facies,
    pub perm_md: Vec<f64>,
}

/// Spline-resampled measured curves, the reference the models are scored
/// against.
pub fn truth_curves(wells: &[Well], n: usize) -> Result<Vec<TruthCurve>> {
    wells
        .iter()
        .map(|w| {
            let (_, perm_md) = crate::dataio::spline_curve_md(w, n)?;
            Ok(TruthCurve {
                well_id: w.well_id.clone(),
                facies: w.facies,
                perm_md,
            })
        })
        .collect()
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct ReportMeta {
    pub variant: Option<String>,
    pub n_qubits: Option<usize>,
    pub runs: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WellMetrics {
    pub well_id: String,
    pub facies: Facies,
    pub mae_md: f64,
    pub rmse_md: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FaciesMetrics {
    pub facies: Facies,
    pub wells: usize,
    pub mae_md: f64,
    pub rmse_md: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Overall {
    pub mae_md: f64,
    pub rmse_md: f64,
}

/// Per-well rows, per-facies means and the unweighted mean over wells.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MetricsReport {
    pub meta: ReportMeta,
    pub wells: Vec<WellMetrics>,
    pub facies_avg: Vec<FaciesMetrics>,
    pub overall_avg: Overall,
}

fn mean(v: impl Iterator<Item = f64>) -> f64 {
    let (s, n) = v.fold((0.0, 0usize), |(s, n), x| (s + x, n + 1));
    s / n as f64
}

pub fn facies_report(
    predictions: &[PredictedCurve],
    truth: &[TruthCurve],
    meta: ReportMeta,
) -> Result<MetricsReport> {
    if predictions.is_empty() {
        return Err(Error::Validation("no predictions to evaluate".into()));
    }
    let mut wells = Vec::with_capacity(predictions.len());
    for p in predictions {
        let t = truth
            .iter()
            .find(|t| t.well_id == p.well_id)
            .ok_or_else(|| Error::Validation(format!("no truth curve for well {}", p.well_id)))?;
        let ctx = |e: Error| e.context(format!("well {}", p.well_id));
        wells.push(WellMetrics {
            well_id: p.well_id.clone(),
            facies: t.facies,
            mae_md: mae(&p.perm_md, &t.perm_md).map_err(ctx)?,
            rmse_md: rmse(&p.perm_md, &t.perm_md).map_err(ctx)?,
        });
    }
    let mut groups: BTreeMap<Facies, Vec<&WellMetrics>> = BTreeMap::new();
    for w in &wells {
        groups.entry(w.facies).or_default().push(w);
    }
    let facies_avg = groups
        .into_iter()
        .map(|(facies, ws)| FaciesMetrics {
            facies,
            wells: ws.len(),
            mae_md: mean(ws.iter().map(|w| w.mae_md)),
            rmse_md: mean(ws.iter().map(|w| w.rmse_md)),
        })
        .collect();
    let overall_avg = Overall {
        mae_md: mean(wells.iter().map(|w| w.mae_md)),
        rmse_md: mean(wells.iter().map(|w| w.rmse_md)),
    };
    Ok(MetricsReport {
        meta,
        wells,
        facies_avg,
        overall_avg,
    })
}

/// `well_id,facies,mae_md,rmse_md`, then one `facies_avg` row per facies
/// and a final `overall_avg` row with an empty facies column.
pub fn write_metrics_csv<W: Write>(report: &MetricsReport, writer: W) -> Result<()> {
    let err = |e: csv::Error| Error::Parse(format!("writing metrics: {e}"));
    let mut w = csv::Writer::from_writer(writer);
    w.write_record(["well_id", "facies", "mae_md", "rmse_md"]).map_err(err)?;
    for m in &report.wells {
        w.write_record([m.well_id.clone(), m.facies.to_string(), m.mae_md.to_string(), m.rmse_md.to_string()])
            .map_err(err)?;
    }
    for f in &report.facies_avg {
        w.write_record(["facies_avg".into(), f.facies.to_string(), f.mae_md.to_string(), f.rmse_md.to_string()])
            .map_err(err)?;
    }
    let o = report.overall_avg;
    w.write_record(["overall_avg".into(), String::new(), o.mae_md.to_string(), o.rmse_md.to_string()])
        .map_err(err)?;
    w.flush().map_err(|e| Error::Parse(format!("writing metrics: {e}")))
}
