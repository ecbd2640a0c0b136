//! Full-batch training, checkpointing and multi-run averaging.

mod checkpoint;
mod config;
mod multirun;
mod predictions;
mod trainer;

pub use checkpoint::{load_checkpoint, save_checkpoint, Checkpoint, CHECKPOINT_VERSION};
pub use config::{AveragingDomain, TrainConfig};
pub use multirun::{average_curves, multi_run, predict, predict_curve, predict_ensemble, MultiRunResult, PredictedCurve, WellPrediction};
pub use predictions::{read_predictions_csv, write_predictions_csv, PredictionTable};
pub use trainer::{read_loss_trace, train_one_run, write_loss_trace, RunResult};
