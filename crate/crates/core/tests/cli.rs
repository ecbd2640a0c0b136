use std::path::Path;
use std::process::{Command, Output};

use qlstma::dataio::{load_wells_csv, spline_curve_md};
use qlstma::training::{write_predictions_csv, PredictionTable, WellPrediction};
use tempfile::TempDir;

fn qlstma(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qlstma"))
        .args(args)
        .env("RUST_LOG", "info")
        .output()
        .expect("binary runs")
}

fn ok(args: &[&str]) -> Output {
    let out = qlstma(args);
    assert!(
        out.status.success(),
        "{args:?} failed:\n{}",
        String::from_utf8_lossy(&out.stderr)
    );
    out
}

fn p(path: &Path) -> &str {
    path.to_str().unwrap()
}

fn generate(dir: &Path, counts: &str, test: &str) {
    ok(&["generate", "--wells-per-facies", counts, "--test-wells", test, "--seed", "3", "--out", p(dir)]);
}

fn train_tiny(data: &Path, out: &Path, extra: &[&str]) -> Output {
    let wells = data.join("wells.csv");
    let split = data.join("split.csv");
    let mut args = vec![
        "train", "--data", p(&wells), "--split", p(&split), "--variant", "lstma", "--hidden", "4", "--dense", "4",
        "--timesteps", "6", "--out", p(out),
    ];
    args.extend_from_slice(extra);
    qlstma(&args)
}

fn lines(path: &Path) -> Vec<String> {
    std::fs::read_to_string(path).unwrap().lines().map(String::from).collect()
}

#[test]
fn generate_is_deterministic() {
    let (a, b) = (TempDir::new().unwrap(), TempDir::new().unwrap());
    generate(a.path(), "4,3,2", "3");
    generate(b.path(), "4,3,2", "3");
    for f in ["wells.csv", "split.csv"] {
        assert_eq!(lines(&a.path().join(f)), lines(&b.path().join(f)), "{f}");
    }
    assert!(a.path().join("run.json").is_file());
}

#[test]
fn generate_minimal_counts_without_test_wells() {
    let dir = TempDir::new().unwrap();
    generate(dir.path(), "1,1,1", "0");
    assert_eq!(load_wells_csv(dir.path().join("wells.csv")).unwrap().len(), 3);
    assert!(lines(&dir.path().join("split.csv")).iter().skip(1).all(|l| l.ends_with("train")));
}

#[test]
fn qubits_on_classical_variant_warns() {
    let data = TempDir::new().unwrap();
    generate(data.path(), "2,2,2", "3");
    let out = TempDir::new().unwrap();
    let res = train_tiny(data.path(), out.path(), &["--qubits", "4", "--epochs", "2", "--runs", "1"]);
    assert!(res.status.success());
    assert!(String::from_utf8_lossy(&res.stderr).contains("--qubits has no effect"));
}

#[test]
fn checkpoint_cadence_and_manifests() {
    let data = TempDir::new().unwrap();
    generate(data.path(), "2,2,2", "3");
    let out = TempDir::new().unwrap();
    let res = train_tiny(
        data.path(),
        out.path(),
        &["--epochs", "20", "--checkpoint-every", "10", "--runs", "1"],
    );
    assert!(res.status.success(), "{}", String::from_utf8_lossy(&res.stderr));
    let run = out.path().join("run_0");
    let mut names: Vec<String> = std::fs::read_dir(run.join("checkpoints"))
        .unwrap()
        .map(|e| e.unwrap().file_name().into_string().unwrap())
        .collect();
    names.sort();
    assert_eq!(names, ["epoch_0010.json", "epoch_0020.json"]);
    assert!(run.join("final.json").is_file());
    assert_eq!(lines(&run.join("loss.csv")).len(), 21);
    assert!(run.join("run.json").is_file() && out.path().join("run.json").is_file());
    assert!(out.path().join("stats.json").is_file());
}

#[test]
fn evaluate_perfect_predictions_gives_zero_errors() {
    let data = TempDir::new().unwrap();
    generate(data.path(), "3,2,2", "3");
    let wells = load_wells_csv(data.path().join("wells.csv")).unwrap();
    let table = PredictionTable {
        wells: wells
            .iter()
            .map(|w| {
                let (depth, perm) = spline_curve_md(w, 25).unwrap();
                WellPrediction { well_id: w.well_id.clone(), depth, mean_md: perm.clone(), runs: vec![perm] }
            })
            .collect(),
    };
    let pred_dir = TempDir::new().unwrap();
    let pred = pred_dir.path().join("predictions.csv");
    write_predictions_csv(&table, std::fs::File::create(&pred).unwrap()).unwrap();
    let out = TempDir::new().unwrap();
    ok(&["evaluate", "--predictions", p(&pred), "--data", p(&data.path().join("wells.csv")), "--out", p(out.path())]);
    let report: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(out.path().join("metrics.json")).unwrap()).unwrap();
    assert_eq!(report["overall_avg"]["mae_md"], 0.0);
    assert_eq!(report["overall_avg"]["rmse_md"], 0.0);
    assert_eq!(report["wells"].as_array().unwrap().len(), 7);
    assert!(out.path().join("metrics.csv").is_file() && out.path().join("run.json").is_file());
}

#[test]
fn full_pipeline_with_hundred_checkpoints() {
    let data = TempDir::new().unwrap();
    generate(data.path(), "2,2,2", "3");
    let model = TempDir::new().unwrap();
    let res = train_tiny(
        data.path(),
        model.path(),
        &["--epochs", "100", "--checkpoint-every", "1", "--runs", "2", "--jobs", "1"],
    );
    assert!(res.status.success(), "{}", String::from_utf8_lossy(&res.stderr));
    let wells = data.path().join("wells.csv");
    let split = data.path().join("split.csv");

    let pred = TempDir::new().unwrap();
    ok(&["predict", "--model", p(model.path()), "--data", p(&wells), "--split", p(&split), "--out", p(pred.path())]);
    let pred_lines = lines(&pred.path().join("predictions.csv"));
    assert_eq!(pred_lines[0], "well_id,depth,perm_md_pred,run_0,run_1");
    assert_eq!(pred_lines.len(), 1 + 3 * 6);

    let eval = TempDir::new().unwrap();
    ok(&[
        "evaluate", "--predictions", p(&pred.path().join("predictions.csv")), "--data", p(&wells), "--out",
        p(eval.path()),
    ]);
    let metrics = lines(&eval.path().join("metrics.csv"));
    assert!(metrics.last().unwrap().starts_with("overall_avg,"));

    let curves = TempDir::new().unwrap();
    ok(&["curves", "--model", p(model.path()), "--data", p(&wells), "--split", p(&split), "--out", p(curves.path())]);
    assert_eq!(lines(&curves.path().join("curves.csv")).len(), 101);
    assert!(curves.path().join("curves_run_1.csv").is_file());

    let base = TempDir::new().unwrap();
    ok(&["baseline", "--data", p(&wells), "--split", p(&split), "--timesteps", "6", "--out", p(base.path())]);
    assert_eq!(lines(&base.path().join("baseline.csv")).len(), 1 + 3 * 6);

    ok(&["plot", "--input", p(&curves.path().join("curves.csv")), "--x", "epoch", "--out", p(curves.path())]);
    let svg = std::fs::read_to_string(curves.path().join("curves.svg")).unwrap();
    assert_eq!(svg.matches("<polyline").count(), 2);
    for d in [model.path(), pred.path(), eval.path(), curves.path(), base.path()] {
        assert!(d.join("run.json").is_file(), "{}", d.display());
    }
}

#[test]
fn two_point_series_gives_one_polyline() {
    let dir = TempDir::new().unwrap();
    let input = dir.path().join("pts.csv");
    std::fs::write(&input, "x,y\n0,1\n1,3\n").unwrap();
    ok(&["plot", "--input", p(&input), "--out", p(dir.path())]);
    let svg = std::fs::read_to_string(dir.path().join("pts.svg")).unwrap();
    assert_eq!(svg.matches("<polyline").count(), 1);
}

#[test]
fn exit_codes() {
    assert_eq!(qlstma(&["no-such-command"]).status.code(), Some(1));
    assert_eq!(qlstma(&["train", "--epochs", "x"]).status.code(), Some(1));

    let missing = qlstma(&["evaluate", "--predictions", "/nonexistent/preds.csv", "--data", "w.csv", "--out", "o"]);
    assert_eq!(missing.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&missing.stderr).contains("/nonexistent/preds.csv"));

    let data = TempDir::new().unwrap();
    generate(data.path(), "2,2,2", "3");
    let out = TempDir::new().unwrap();
    let res = train_tiny(data.path(), out.path(), &["--epochs", "50", "--runs", "1", "--lr", "1e300", "--dropout", "0"]);
    assert_eq!(res.status.code(), Some(3), "{}", String::from_utf8_lossy(&res.stderr));
}
