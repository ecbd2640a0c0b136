mod common;

use ndarray::{Array1, Array2};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use common::{central_diff, close};
use qlstma::dataio::{
    build_features, fit_stats, log_inverse, log_transform, resample_spline, ChannelStats,
};
use qlstma::evaluation::{facies_report, mae, rmse, ReportMeta, TruthCurve};
use qlstma::network::{model_forward, param_count, CellState, Mode, ModelConfig, ModelParams, Variant};
use qlstma::nncore::{
    adam_step, attention_backward, attention_forward, huber_loss, softmax_rows, AdamConfig, AdamState,
    AttentionParams, HuberConfig, Parameters,
};
use qlstma::qsim::{gates, vqc_forward, StateVector, VqcParams};
use qlstma::training::PredictedCurve;

fn matrix(rows: usize, cols: usize, lo: f64, hi: f64) -> impl Strategy<Value = Array2<f64>> {
    prop::collection::vec(lo..hi, rows * cols).prop_map(move |v| Array2::from_shape_vec((rows, cols), v).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn gate_sequences_preserve_norm(
        n in 1usize..7,
        ops in prop::collection::vec((0usize..7, 0usize..7, -7.0..7.0f64, -7.0..7.0f64, -7.0..7.0f64), 1..60),
    ) {
        let mut s = StateVector::ground(n).unwrap();
        for (a, b, x, y, z) in ops {
            let (a, b) = (a % n, b % n);
            if a != b && n > 1 {
                s.apply_cnot(a, b).unwrap();
            }
            s.apply_1q(a, &gates::rot(x, y, z)).unwrap();
            s.apply_1q(b, &gates::hadamard()).unwrap();
        }
        prop_assert!((s.norm_sqr() - 1.0).abs() <= 1e-12);
    }

    #[test]
    fn expectations_bounded_and_repeatable(n in 1usize..7, layers in 1usize..4, seed: u64) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let params = VqcParams::random(layers, n, &mut rng);
        let inputs: Vec<f64> = (0..n).map(|i| (seed as f64 * 0.37 + i as f64).sin() * 3.0).collect();
        let a = vqc_forward(&inputs, &params).unwrap().expectations;
        let b = vqc_forward(&inputs, &params).unwrap().expectations;
        prop_assert_eq!(&a, &b);
        prop_assert!(a.iter().all(|e| (-1.0 - 1e-12..=1.0 + 1e-12).contains(e)));
    }

    #[test]
    fn softmax_rows_sum_to_one(m in matrix(5, 7, -30.0, 30.0)) {
        let s = softmax_rows(m.view());
        for row in s.rows() {
            prop_assert!((row.sum() - 1.0).abs() <= 1e-12);
            prop_assert!(row.iter().all(|&v| v >= 0.0));
        }
    }

    #[test]
    fn attention_with_identity_values_is_convex(h in matrix(6, 3, -2.0, 2.0), seed: u64) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut p = AttentionParams::glorot(3, &mut rng);
        p.w_v = Array2::eye(3);
        let (out, _) = attention_forward(h.view(), &p).unwrap();
        for j in 0..3 {
            let col = h.column(j);
            let lo = col.iter().copied().fold(f64::INFINITY, f64::min);
            let hi = col.iter().copied().fold(f64::NEG_INFINITY, f64::max);
            prop_assert!(out.column(j).iter().all(|&v| v >= lo - 1e-12 && v <= hi + 1e-12));
        }
    }

    #[test]
    fn huber_is_nonnegative_and_zero_only_at_match(
        t in prop::collection::vec(-5.0..5.0f64, 1..20),
        e in prop::collection::vec(-3.0..3.0f64, 1..20),
        delta in 0.1..3.0f64,
    ) {
        let n = t.len().min(e.len());
        let yt = Array1::from(t[..n].to_vec());
        let yp = &yt + &Array1::from(e[..n].to_vec());
        let cfg = HuberConfig::new(delta).unwrap();
        let (loss, _) = huber_loss(yt.view(), yp.view(), &cfg).unwrap();
        prop_assert!(loss >= 0.0);
        prop_assert_eq!(loss == 0.0, e[..n].iter().all(|&v| v == 0.0));
        prop_assert_eq!(huber_loss(yt.view(), yt.view(), &cfg).unwrap().0, 0.0);
    }

    #[test]
    fn adam_with_zero_gradient_is_identity(seed: u64, steps in 1usize..5) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut params = ModelParams::init(ModelConfig::new(Variant::QlstmaIg).with_hidden(3).with_qubits(2), &mut rng).unwrap();
        let before = params.clone();
        let zero = params.zeros_like();
        let mut state = AdamState::for_params(&params);
        for _ in 0..steps {
            let g = zero.tensors();
            let mut p = params.tensors_mut();
            adam_step(&mut p, &g, &mut state, &AdamConfig::default()).unwrap();
        }
        prop_assert_eq!(params, before);
        prop_assert_eq!(state.step_count, steps as u64);
    }

    #[test]
    fn gate_activations_stay_in_range(seed: u64, variant_idx in 0usize..3) {
        let variant = [Variant::Lstma, Variant::QlstmaSg, Variant::QlstmaIg][variant_idx];
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let p = ModelParams::init(ModelConfig::new(variant).with_hidden(5).with_qubits(3), &mut rng).unwrap();
        let mut state = CellState::zeros(5);
        for t in 0..8 {
            let x = Array1::from_shape_fn(4, |j| ((t * 4 + j) as f64 * 0.7 + seed as f64).sin() * 4.0);
            let (next, cache) = p.recurrent.step(x.view(), &state).unwrap();
            let g = cache.gates();
            for v in g.forget.iter().chain(&g.input).chain(&g.output) {
                prop_assert!(*v > 0.0 && *v < 1.0);
            }
            prop_assert!(g.candidate.iter().all(|v| *v > -1.0 && *v < 1.0));
            state = next;
        }
    }

    #[test]
    fn eval_forward_is_pure(seed: u64) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let p = ModelParams::init(ModelConfig::new(Variant::QlstmaSg).with_hidden(4).with_qubits(2), &mut rng).unwrap();
        let x = Array2::from_shape_fn((7, 4), |(t, j)| ((t + 3 * j) as f64 * 0.13) % 1.0);
        let (a, _) = model_forward(x.view(), &p, Mode::Eval, &mut rng).unwrap();
        let (b, _) = model_forward(x.view(), &p, Mode::Eval, &mut ChaCha8Rng::seed_from_u64(seed ^ 1)).unwrap();
        prop_assert_eq!(a, b);
    }

    #[test]
    fn transform_round_trip(k in 0.0..5026.0f64) {
        let stats = ChannelStats::new("target", log_transform(0.0).unwrap(), log_transform(5026.0).unwrap()).unwrap();
        let back = log_inverse(stats.inverse(stats.normalize(log_transform(k).unwrap())));
        let err = if k < 1.0 { (back - k).abs() } else { (back - k).abs() / k };
        prop_assert!(err <= 1e-9, "{} → {}", k, back);
    }

    #[test]
    fn metrics_zero_iff_identical(v in prop::collection::vec(0.0..100.0f64, 1..30), bump in 0usize..30) {
        prop_assert_eq!(mae(&v, &v).unwrap(), 0.0);
        prop_assert_eq!(rmse(&v, &v).unwrap(), 0.0);
        let mut w = v.clone();
        let i = bump % w.len();
        w[i] += 0.5;
        prop_assert!(mae(&v, &w).unwrap() > 0.0 && rmse(&v, &w).unwrap() > 0.0);
    }

    #[test]
    fn overall_average_is_mean_of_wells(values in prop::collection::vec((0u8..3, prop::collection::vec(0.0..500.0f64, 4), prop::collection::vec(0.0..500.0f64, 4)), 1..12)) {
        let (mut preds, mut truth) = (Vec::new(), Vec::new());
        for (i, (f, p, t)) in values.iter().enumerate() {
            let id = format!("W{i}");
            preds.push(PredictedCurve { well_id: id.clone(), depth: vec![0.0, 1.0, 2.0, 3.0], perm_md: p.clone() });
            truth.push(TruthCurve { well_id: id, facies: qlstma::dataio::Facies::from_code(*f as i64).unwrap(), perm_md: t.clone() });
        }
        let r = facies_report(&preds, &truth, ReportMeta::default()).unwrap();
        let mean = r.wells.iter().map(|w| w.mae_md).sum::<f64>() / r.wells.len() as f64;
        prop_assert!((r.overall_avg.mae_md - mean).abs() <= 1e-12);
        for w in &r.wells {
            prop_assert!(w.rmse_md >= w.mae_md * (1.0 - 1e-12) && w.mae_md >= 0.0);
        }
    }
}

#[test]
fn attention_backward_matches_finite_differences() {
    let mut rng = ChaCha8Rng::seed_from_u64(77);
    let p = AttentionParams::glorot(3, &mut rng);
    let h = Array2::from_shape_fn((5, 3), |(i, j)| ((i * 3 + j) as f64 * 0.61).sin());
    let up = Array2::from_shape_fn((5, 3), |(i, j)| ((i + 2 * j) as f64 * 0.3).cos());
    let loss = |h: &Array2<f64>, p: &AttentionParams| (attention_forward(h.view(), p).unwrap().0 * &up).sum();
    let (_, cache) = attention_forward(h.view(), &p).unwrap();
    let (dh, grad) = attention_backward(&cache, &p, up.view()).unwrap();

    let mut flat: Vec<f64> = h.iter().copied().collect();
    for i in 0..flat.len() {
        let fd = central_diff(&mut flat, i, 1e-5, |v| loss(&Array2::from_shape_vec((5, 3), v.to_vec()).unwrap(), &p));
        assert!(close(dh.iter().nth(i).copied().unwrap(), fd, 1e-4, 1e-6), "dh[{i}]");
    }
    for (ti, (name, g)) in grad.tensors().into_iter().enumerate() {
        let exact: Vec<f64> = g.iter().copied().collect();
        for (k, &e) in exact.iter().enumerate() {
            let eval = |v: f64| {
                let mut q = p.clone();
                *q.tensors_mut()[ti].1.iter_mut().nth(k).unwrap() = v;
                loss(&h, &q)
            };
            let orig = p.tensors()[ti].1.iter().nth(k).copied().unwrap();
            let fd = (eval(orig + 1e-4) - eval(orig - 1e-4)) / 2e-4;
            assert!(close(e, fd, 1e-4, 1e-6), "{name}[{k}]: {e} vs {fd}");
        }
    }
}

#[test]
fn quantum_recurrent_blocks_are_smaller_than_classical() {
    let classical = param_count(&ModelParams::zeros(ModelConfig::new(Variant::Lstma)).unwrap()).recurrent;
    let mut previous = 0;
    for q in 1..=8 {
        let sg = param_count(&ModelParams::zeros(ModelConfig::new(Variant::QlstmaSg).with_qubits(q)).unwrap()).recurrent;
        let ig = param_count(&ModelParams::zeros(ModelConfig::new(Variant::QlstmaIg).with_qubits(q)).unwrap()).recurrent;
        assert!(sg < ig && ig < classical, "{q} qubits: sg {sg}, ig {ig}, lstm {classical}");
        assert!(ig > previous);
        previous = ig;
    }
}

#[test]
fn resampling_keeps_length_and_positivity() {
    let wells = common::synthetic_wells([5, 5, 5], 31);
    for n in [2, 7, 20, 100] {
        for w in &wells {
            let (grid, logs) = resample_spline(w, n).unwrap();
            assert_eq!((grid.len(), logs.len()), (n, n));
            assert!(logs.iter().all(|v| v.is_finite()));
            assert!(logs.iter().all(|&v| log_inverse(v) + 1e-6 > 0.0));
            let (lo, hi) = w.depth_range().unwrap();
            assert_eq!((grid[0], grid[n - 1]), (lo, hi));
        }
    }
}

#[test]
fn statistics_come_from_training_wells_only() {
    let wells = common::synthetic_wells([4, 3, 3], 32);
    let (train, test) = wells.split_at(7);
    let stats = fit_stats(train, 20).unwrap();
    let snapshot = stats;
    for w in test {
        build_features(w, &stats, 20).unwrap();
    }
    assert_eq!(stats, snapshot);
    assert_eq!(fit_stats(train, 20).unwrap(), stats);
    assert_ne!(fit_stats(&wells, 20).unwrap(), stats);
}
