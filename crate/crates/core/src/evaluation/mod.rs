//! Error metrics, per-facies reports, error evolution over checkpoints and
//! a facies-aware inverse-distance baseline.

mod baseline;
mod evolution;
mod metrics;
mod report;

pub use baseline::{idw_facies_baseline, FaciesWeighting, LogCurve};
pub use evolution::{error_evolution, read_curves_csv, write_curves_csv, EvolutionRow};
pub use metrics::{mae, rmse};
pub use report::{
    facies_report, truth_curves, write_metrics_csv, FaciesMetrics, MetricsReport, Overall, ReportMeta,
    TruthCurve, WellMetrics,
};
