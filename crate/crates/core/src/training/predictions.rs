use std::io::{Read, Write};

use super::multirun::WellPrediction;
use crate::error::{Error, Result};

/// Predictions for a set of wells as stored in `predictions.csv`:
/// `well_id,depth,perm_md_pred[,run_0,run_1,...]`.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct PredictionTable {
    pub wells: Vec<WellPrediction>,
}

impl PredictionTable {
    pub fn get(&self, well_id: &str) -> Option<&WellPrediction> {
        self.wells.iter().find(|w| w.well_id == well_id)
    }
}

pub fn write_predictions_csv<W: Write>(table: &PredictionTable, writer: W) -> Result<()> {
    let n_runs = table.wells.first().map_or(0, |w| w.runs.len());
    if table.wells.iter().any(|w| w.runs.len() != n_runs) {
        return Err(Error::Shape("wells have differing numbers of runs".into()));
    }
    let err = |e: csv::Error| Error::Parse(format!("writing predictions: {e}"));
    let mut w = csv::Writer::from_writer(writer);
    let mut header = vec!["well_id".to_string(), "depth".into(), "perm_md_pred".into()];
    header.extend((0..n_runs).map(|i| format!("run_{i}")));
    w.write_record(&header).map_err(err)?;
    for well in &table.wells {
        for (i, (&d, &m)) in well.depth.iter().zip(&well.mean_md).enumerate() {
            let mut rec = vec![well.well_id.clone(), d.to_string(), m.to_string()];
            rec.extend(well.runs.iter().map(|r| r[i].to_string()));
            w.write_record(&rec).map_err(err)?;
        }
    }
    w.flush().map_err(|e| Error::Parse(format!("writing predictions: {e}")))
}

pub fn read_predictions_csv<R: Read>(reader: R) -> Result<PredictionTable> {
    let mut r = csv::Reader::from_reader(reader);
    let header = r
        .headers()
        .map_err(|e| Error::Parse(format!("predictions header: {e}")))?
        .clone();
    let cols: Vec<&str> = header.iter().collect();
    if cols.len() < 3 || cols[..3] != ["well_id", "depth", "perm_md_pred"] {
        return Err(Error::Parse(format!(
            "predictions header must start with well_id,depth,perm_md_pred, found {}",
            cols.join(",")
        )));
    }
    let n_runs = cols.len() - 3;
    let mut table = PredictionTable::default();
    for (i, rec) in r.records().enumerate() {
        let line = i + 2;
        let rec = rec.map_err(|e| Error::Parse(format!("predictions line {line}: {e}")))?;
        let num = |j: usize| -> Result<f64> {
            rec.get(j)
                .and_then(|s| s.trim().parse::<f64>().ok())
                .ok_or_else(|| Error::Parse(format!("predictions line {line}: bad `{}` value", cols[j])))
        };
        let id = &rec[0];
        if table.wells.last().is_none_or(|w| w.well_id != id) {
            if table.get(id).is_some() {
                return Err(Error::Parse(format!("predictions line {line}: rows for well {id} are not contiguous")));
            }
            table.wells.push(WellPrediction {
                well_id: id.to_string(),
                depth: Vec::new(),
                mean_md: Vec::new(),
                runs: vec![Vec::new(); n_runs],
            });
        }
        let well = table.wells.last_mut().expect("just pushed");
        well.depth.push(num(1)?);
        well.mean_md.push(num(2)?);
        for k in 0..n_runs {
            well.runs[k].push(num(3 + k)?);
        }
    }
    Ok(table)
}
