//! Well data: model, CSV I/O, transforms, spline resampling, feature
//! assembly and a synthetic well generator.
//!
//! Pipeline per well: `ln(k + c)` → natural cubic spline on a uniform depth
//! grid → min-max normalization with statistics fitted on training wells.

mod csvio;
mod features;
mod spline;
mod split;
mod synthetic;
mod transform;
mod well;

pub use csvio::{load_wells_csv, read_wells, write_wells, write_wells_csv};
pub use features::{build_features, fit_stats, resample_spline, spline_curve_md, ResampledWell, DEFAULT_TIMESTEPS};
pub use spline::NaturalCubicSpline;
pub use split::{allocate_proportional, load_split, proportional_split, write_split, Role, Split};
pub use synthetic::{generate_synthetic, SyntheticConfig};
pub use transform::{
    log_inverse, log_transform, minmax_inverse, minmax_normalize, ChannelStats, Channels,
    NormalizationStats, LOG_OFFSET,
};
pub use well::{Facies, Sample, Well, MIN_KNOTS};
