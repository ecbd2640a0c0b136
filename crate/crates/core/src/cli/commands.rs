use std::collections::BTreeMap;
use std::fs::{self, File};
use std::path::{Path, PathBuf};

use serde_json::{json, Value};

use super::manifest::{read_manifest, write_manifest};
use super::plot::{render_svg, PlotOptions, Series};
use super::{
    BaselineArgs, CurvesArgs, DataArgs, EvaluateArgs, GenerateArgs, PlotArgs, PredictArgs, TrainArgs,
};
use crate::dataio::{
    build_features, fit_stats, generate_synthetic, load_split, load_wells_csv, proportional_split,
    resample_spline, spline_curve_md, write_split, write_wells_csv, ResampledWell, Role, SyntheticConfig,
    Well,
};
use crate::error::{Error, Result};
use crate::evaluation::{
    error_evolution, facies_report, idw_facies_baseline, write_curves_csv, write_metrics_csv,
    EvolutionRow, FaciesWeighting, LogCurve, ReportMeta, TruthCurve,
};
use crate::nncore::{AdamConfig, HuberConfig};
use crate::training::{
    load_checkpoint, multi_run, predict_ensemble, read_predictions_csv, write_predictions_csv,
    Checkpoint, PredictedCurve, PredictionTable, TrainConfig, WellPrediction,
};

fn create_dir(dir: &Path) -> Result<()> {
    fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))
}

fn create_file(path: &Path) -> Result<File> {
    File::create(path).map_err(|e| Error::io(path, e))
}

fn load_data(data: &DataArgs) -> Result<(Vec<Well>, crate::dataio::Split)> {
    let wells = load_wells_csv(&data.data)?;
    let split = load_split(&data.split)?;
    Ok((wells, split))
}

fn to_json<T: serde::Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("serializable")
}

pub(super) fn generate(a: &GenerateArgs) -> Result<()> {
    let counts: [usize; 3] = a.wells_per_facies.as_slice().try_into().map_err(|_| {
        Error::Config(format!(
            "--wells-per-facies needs three counts (channel,sand,mud), got {}",
            a.wells_per_facies.len()
        ))
    })?;
    let cfg = SyntheticConfig {
        seed: a.seed,
        counts,
        ..SyntheticConfig::default()
    };
    let wells = generate_synthetic(&cfg)?;
    let split = proportional_split(&wells, a.test_wells, a.seed)?;
    create_dir(&a.out)?;
    write_wells_csv(a.out.join("wells.csv"), &wells)?;
    write_split(a.out.join("split.csv"), &split)?;
    log::info!(
        "{} wells ({} train / {} test) written to {}",
        wells.len(),
        split.ids(Role::Train).len(),
        split.ids(Role::Test).len(),
        a.out.display()
    );
    write_manifest(
        &a.out,
        "generate",
        json!({
            "seed": cfg.seed,
            "wells_per_facies": cfg.counts,
            "test_wells": a.test_wells,
            "median_md": cfg.median_md,
            "log_spread": cfg.log_spread,
            "extent": cfg.extent,
            "top_depth": [cfg.top_depth.0, cfg.top_depth.1],
            "thickness": [cfg.thickness.0, cfg.thickness.1],
            "samples_per_well": [cfg.samples_per_well.0, cfg.samples_per_well.1],
            "noise_scale": cfg.noise_scale,
        }),
    )
}

pub(super) fn train(a: &TrainArgs) -> Result<()> {
    if !a.variant.is_quantum() && a.qubits.is_some() {
        log::warn!("--qubits has no effect on the classical lstma variant; ignoring it");
    }
    let cfg = TrainConfig {
        variant: a.variant,
        n_qubits: a.qubits.unwrap_or(4),
        n_layers: a.layers,
        entangler: a.entangler,
        hidden: a.hidden,
        dense: a.dense,
        timesteps: a.timesteps,
        epochs: a.epochs,
        checkpoint_every: a.checkpoint_every,
        runs: a.runs,
        seed: a.seed,
        adam: AdamConfig {
            lr: a.lr,
            ..AdamConfig::default()
        },
        dropout: a.dropout,
        huber: HuberConfig::new(a.delta)?,
        averaging: a.averaging,
    };
    cfg.validate()?;
    let (wells, split) = load_data(&a.data)?;
    let train_wells = split.select_owned(&wells, Role::Train)?;
    if train_wells.is_empty() {
        return Err(Error::Validation("split has no training wells".into()));
    }
    let stats = fit_stats(&train_wells, cfg.timesteps)?;
    let features = train_wells
        .iter()
        .map(|w| build_features(w, &stats, cfg.timesteps))
        .collect::<Result<Vec<_>>>()?;
    log::info!(
        "training {} x {} on {} wells for {} epochs",
        cfg.runs,
        cfg.variant,
        features.len(),
        cfg.epochs
    );
    let result = multi_run(&cfg, &stats, &features, a.jobs)?;

    create_dir(&a.out)?;
    let stats_path = a.out.join("stats.json");
    fs::write(&stats_path, serde_json::to_string_pretty(&stats).expect("serializable"))
        .map_err(|e| Error::io(&stats_path, e))?;
    let mut seeds = Vec::new();
    for run in &result.runs {
        let dir = a.out.join(format!("run_{}", run.run_index));
        run.write(&dir)?;
        write_manifest(
            &dir,
            "train",
            json!({
                "run_index": run.run_index,
                "seed": run.seed,
                "config": to_json(&cfg),
                "final_loss": run.loss_trace.last(),
            }),
        )?;
        seeds.push(run.seed);
    }
    write_manifest(
        &a.out,
        "train",
        json!({
            "variant": cfg.variant,
            "n_qubits": cfg.variant.is_quantum().then_some(cfg.n_qubits),
            "runs": cfg.runs,
            "seeds": seeds,
            "config": to_json(&cfg),
            "data": a.data.data,
            "split": a.data.split,
            "train_wells": features.iter().map(|w| w.well_id.as_str()).collect::<Vec<_>>(),
        }),
    )
}

/// Run directories of a `train` output (`run_0`, `run_1`, ...), or the
/// directory itself when it is a single run.
fn run_dirs(model: &Path) -> Result<Vec<PathBuf>> {
    if model.join("final.json").is_file() {
        return Ok(vec![model.to_path_buf()]);
    }
    let entries = fs::read_dir(model).map_err(|e| Error::io(model, e))?;
    let mut runs = Vec::new();
    for entry in entries {
        let entry = entry.map_err(|e| Error::io(model, e))?;
        let name = entry.file_name();
        if let Some(i) = name.to_str().and_then(|n| n.strip_prefix("run_")).and_then(|n| n.parse::<usize>().ok()) {
            if entry.path().is_dir() {
                runs.push((i, entry.path()));
            }
        }
    }
    if runs.is_empty() {
        return Err(Error::Validation(format!("{}: no trained runs found", model.display())));
    }
    runs.sort();
    Ok(runs.into_iter().map(|(_, p)| p).collect())
}

fn select_wells(wells: &[Well], split: &crate::dataio::Split, which: &str) -> Result<Vec<Well>> {
    match which {
        "test" => split.select_owned(wells, Role::Test),
        "train" => split.select_owned(wells, Role::Train),
        "all" => Ok(wells.to_vec()),
        other => Err(Error::Usage(format!("--wells must be test, train or all, got `{other}`"))),
    }
}

pub(super) fn predict(a: &PredictArgs) -> Result<()> {
    let ckpts = run_dirs(&a.model)?
        .iter()
        .map(|d| load_checkpoint(d.join("final.json")))
        .collect::<Result<Vec<Checkpoint>>>()?;
    let first = &ckpts[0];
    if ckpts.iter().any(|c| c.stats != first.stats || c.config.timesteps != first.config.timesteps) {
        return Err(Error::Validation("runs were trained with different preprocessing".into()));
    }
    let averaging = a.averaging.unwrap_or(first.config.averaging);
    let (wells, split) = load_data(&a.data)?;
    let selected = select_wells(&wells, &split, &a.wells)?;
    if selected.is_empty() {
        return Err(Error::Validation(format!("no {} wells to predict", a.wells)));
    }
    let features = selected
        .iter()
        .map(|w| build_features(w, &first.stats, first.config.timesteps))
        .collect::<Result<Vec<ResampledWell>>>()?;
    let table = PredictionTable {
        wells: predict_ensemble(&ckpts, &features, averaging)?,
    };
    create_dir(&a.out)?;
    let path = a.out.join("predictions.csv");
    write_predictions_csv(&table, create_file(&path)?).map_err(|e| e.context(path.display()))?;
    write_manifest(
        &a.out,
        "predict",
        json!({
            "model": a.model,
            "variant": first.config.variant,
            "n_qubits": first.config.variant.is_quantum().then_some(first.config.n_qubits),
            "runs": ckpts.len(),
            "seeds": ckpts.iter().map(|c| c.seed).collect::<Vec<_>>(),
            "averaging": averaging,
            "wells": a.wells,
            "data": a.data.data,
            "split": a.data.split,
        }),
    )
}

pub(super) fn evaluate(a: &EvaluateArgs) -> Result<()> {
    let file = File::open(&a.predictions).map_err(|e| Error::io(&a.predictions, e))?;
    let table = read_predictions_csv(file).map_err(|e| e.context(a.predictions.display()))?;
    let wells = load_wells_csv(&a.data)?;
    let mut predictions = Vec::with_capacity(table.wells.len());
    let mut truth = Vec::with_capacity(table.wells.len());
    for p in &table.wells {
        let well = wells
            .iter()
            .find(|w| w.well_id == p.well_id)
            .ok_or_else(|| Error::Validation(format!("no measured data for predicted well {}", p.well_id)))?;
        let (grid, perm_md) = spline_curve_md(well, p.depth.len())?;
        if grid.iter().zip(&p.depth).any(|(g, d)| (g - d).abs() > 1e-6 * g.abs().max(1.0)) {
            return Err(Error::Validation(format!(
                "well {}: prediction depths do not match the resampling grid",
                p.well_id
            )));
        }
        truth.push(TruthCurve {
            well_id: well.well_id.clone(),
            facies: well.facies,
            perm_md,
        });
        predictions.push(PredictedCurve {
            well_id: p.well_id.clone(),
            depth: p.depth.clone(),
            perm_md: p.mean_md.clone(),
        });
    }
    let source = a.predictions.parent().and_then(read_manifest);
    let setting = |key: &str| source.as_ref().and_then(|m| m["settings"].get(key).cloned());
    let meta = ReportMeta {
        variant: setting("variant").and_then(|v| v.as_str().map(String::from)),
        n_qubits: setting("n_qubits").and_then(|v| v.as_u64()).map(|v| v as usize),
        runs: setting("runs")
            .and_then(|v| v.as_u64())
            .map(|v| v as usize)
            .or_else(|| table.wells.first().map(|w| w.runs.len()).filter(|&n| n > 0)),
    };
    let report = facies_report(&predictions, &truth, meta)?;
    create_dir(&a.out)?;
    let csv_path = a.out.join("metrics.csv");
    write_metrics_csv(&report, create_file(&csv_path)?).map_err(|e| e.context(csv_path.display()))?;
    let json_path = a.out.join("metrics.json");
    fs::write(&json_path, serde_json::to_string_pretty(&report).expect("serializable"))
        .map_err(|e| Error::io(&json_path, e))?;
    log::info!(
        "overall MAE {:.4} mD, RMSE {:.4} mD over {} wells",
        report.overall_avg.mae_md,
        report.overall_avg.rmse_md,
        report.wells.len()
    );
    write_manifest(
        &a.out,
        "evaluate",
        json!({ "predictions": a.predictions, "data": a.data, "meta": to_json(&report.meta) }),
    )
}

pub(super) fn curves(a: &CurvesArgs) -> Result<()> {
    let (wells, split) = load_data(&a.data)?;
    let test = split.select_owned(&wells, Role::Test)?;
    let runs = run_dirs(&a.model)?;
    let per_run = runs
        .iter()
        .map(|d| error_evolution(&d.join("checkpoints"), &test).map_err(|e| e.context(d.display())))
        .collect::<Result<Vec<_>>>()?;
    let epochs: Vec<usize> = per_run[0].iter().map(|r| r.epoch).collect();
    if per_run.iter().any(|rows| rows.iter().map(|r| r.epoch).ne(epochs.iter().copied())) {
        return Err(Error::Validation("runs saved checkpoints at different epochs".into()));
    }
    let n = per_run.len() as f64;
    let mean: Vec<EvolutionRow> = epochs
        .iter()
        .enumerate()
        .map(|(i, &epoch)| EvolutionRow {
            epoch,
            mae_md: per_run.iter().map(|r| r[i].mae_md).sum::<f64>() / n,
            rmse_md: per_run.iter().map(|r| r[i].rmse_md).sum::<f64>() / n,
        })
        .collect();
    create_dir(&a.out)?;
    let path = a.out.join("curves.csv");
    write_curves_csv(&mean, create_file(&path)?)?;
    if per_run.len() > 1 {
        for (i, rows) in per_run.iter().enumerate() {
            let path = a.out.join(format!("curves_run_{i}.csv"));
            write_curves_csv(rows, create_file(&path)?)?;
        }
    }
    write_manifest(
        &a.out,
        "curves",
        json!({
            "model": a.model,
            "runs": per_run.len(),
            "checkpoints": epochs.len(),
            "data": a.data.data,
            "split": a.data.split,
        }),
    )
}

pub(super) fn baseline(a: &BaselineArgs) -> Result<()> {
    let similarity: [f64; 3] = a.similarity.as_slice().try_into().map_err(|_| {
        Error::Config(format!("--similarity needs three weights, got {}", a.similarity.len()))
    })?;
    let weighting = FaciesWeighting {
        power: a.power,
        similarity,
    };
    weighting.validate()?;
    let (wells, split) = load_data(&a.data)?;
    let train = split
        .select(&wells, Role::Train)?
        .into_iter()
        .map(|w| LogCurve::from_well(w, a.timesteps))
        .collect::<Result<Vec<_>>>()?;
    let mut table = PredictionTable::default();
    for w in split.select(&wells, Role::Test)? {
        let (depth, _) = resample_spline(w, a.timesteps)?;
        let mean_md = idw_facies_baseline(&train, w.x, w.y, w.facies, &weighting)?;
        table.wells.push(WellPrediction {
            well_id: w.well_id.clone(),
            depth,
            mean_md,
            runs: Vec::new(),
        });
    }
    create_dir(&a.out)?;
    let path = a.out.join("baseline.csv");
    write_predictions_csv(&table, create_file(&path)?)?;
    write_manifest(
        &a.out,
        "baseline",
        json!({
            "variant": "idw-facies",
            "power": weighting.power,
            "similarity": weighting.similarity,
            "timesteps": a.timesteps,
            "data": a.data.data,
            "split": a.data.split,
        }),
    )
}

pub(super) fn plot(a: &PlotArgs) -> Result<()> {
    let file = File::open(&a.input).map_err(|e| Error::io(&a.input, e))?;
    let ctx = a.input.display().to_string();
    let mut rdr = csv::Reader::from_reader(file);
    let headers: Vec<String> = rdr
        .headers()
        .map_err(|e| Error::Parse(format!("{ctx}: {e}")))?
        .iter()
        .map(String::from)
        .collect();
    let column = |name: &str| {
        headers
            .iter()
            .position(|h| h == name)
            .ok_or_else(|| Error::Validation(format!("{ctx}: no column `{name}`")))
    };
    let filter = match &a.filter {
        Some(f) => {
            let (k, v) = f
                .split_once('=')
                .ok_or_else(|| Error::Usage(format!("--where expects COLUMN=VALUE, got `{f}`")))?;
            Some((column(k)?, v.to_string()))
        }
        None => None,
    };
    let mut rows = Vec::new();
    for (i, rec) in rdr.records().enumerate() {
        let rec = rec.map_err(|e| Error::Parse(format!("{ctx} line {}: {e}", i + 2)))?;
        if filter.as_ref().is_none_or(|(k, v)| rec.get(*k) == Some(v.as_str())) {
            rows.push(rec);
        }
    }
    let x_name = a.x.clone().unwrap_or_else(|| headers[0].clone());
    let xi = column(&x_name)?;
    let numeric = |j: usize| rows.iter().all(|r| r.get(j).is_some_and(|s| s.trim().parse::<f64>().is_ok()));
    let y_cols: Vec<usize> = if a.y.is_empty() {
        (0..headers.len()).filter(|&j| j != xi && numeric(j)).collect()
    } else {
        a.y.iter().map(|n| column(n)).collect::<Result<_>>()?
    };
    let value = |r: &csv::StringRecord, j: usize, line: usize| -> Result<f64> {
        r.get(j)
            .and_then(|s| s.trim().parse().ok())
            .ok_or_else(|| Error::Parse(format!("{ctx}: row {line}: `{}` is not numeric", headers[j])))
    };
    let mut series = Vec::new();
    for &j in &y_cols {
        let mut points = Vec::with_capacity(rows.len());
        for (i, r) in rows.iter().enumerate() {
            points.push((value(r, xi, i + 1)?, value(r, j, i + 1)?));
        }
        series.push(Series {
            name: headers[j].clone(),
            points,
        });
    }
    let stem = a.input.file_stem().and_then(|s| s.to_str()).unwrap_or("plot").to_string();
    let opts = PlotOptions {
        title: a.title.clone().unwrap_or_else(|| stem.clone()),
        x_label: x_name.clone(),
        y_label: y_cols.iter().map(|&j| headers[j].as_str()).collect::<Vec<_>>().join(", "),
        log_y: a.log_y,
    };
    let svg = render_svg(&series, &opts)?;
    create_dir(&a.out)?;
    let path = a.out.join(format!("{stem}.svg"));
    fs::write(&path, svg).map_err(|e| Error::io(&path, e))?;
    let mut settings = BTreeMap::new();
    settings.insert("input", json!(a.input));
    settings.insert("x", json!(x_name));
    settings.insert("y", json!(series.iter().map(|s| &s.name).collect::<Vec<_>>()));
    settings.insert("where", json!(a.filter));
    settings.insert("log_y", json!(a.log_y));
    write_manifest(&a.out, "plot", to_json(&settings))
}
