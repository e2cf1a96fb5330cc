//! Complexity accounting, gap bounds, instance features and the sweep and
//! scalability protocols.

mod complexity;
mod features;
mod gap;
mod scale;
mod sweep;

pub use complexity::{complexity_from_dims, complexity_report, ComplexityReport};
pub use features::{characterize_instance, InstanceFeatures, SizeTier};
pub use gap::gap_bound;
pub use scale::{scalability_run, scale_run, summarize_tier, tier_seed, ScaleConfig, ScaleRow, ScaleRun};
pub use sweep::{sweep_delta, sweep_kappa, DeltaSweep, SweepOptions, SweepRow};
