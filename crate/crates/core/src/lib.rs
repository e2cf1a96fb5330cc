//! Makespan scheduling on identical parallel machines with release dates
//! (`Pm|r_j|C_max`) over a bucket-indexed time grid.
//!
//! ```
//! use bucketsched::{build_grid, solve_bucket, solve_exact, Budget, GridOptions, Instance, Job};
//!
//! let inst = Instance::new(vec![Job::new(0, 3.0, 0.0), Job::new(1, 5.0, 0.0), Job::new(2, 2.0, 4.0)], 2).unwrap();
//! let exact = solve_exact(&inst, Budget::default());
//! let grid = build_grid(&inst, &GridOptions::default()).unwrap();
//! let bucket = solve_bucket(&inst, &grid, Budget::default());
//! assert!(bucket.cmax >= exact.cmax);
//! ```

pub mod analysis;
pub mod bucket;
pub mod bucket_solver;
pub mod budget;
pub mod error;
pub mod exact;
pub mod generate;
pub mod heuristics;
pub mod io;
pub mod metrics;
pub mod model;
pub mod validate;

pub use bucket::{build_grid, decode, project_schedule, BucketAssignment, BucketGrid, BucketSolution, GridOptions};
pub use bucket_solver::{count_variables, export_milp, solve_bucket, BucketResult, LpForm, VariableCounts};
pub use budget::Budget;
pub use error::{Error, Result};
pub use exact::{brute_force, lower_bound, solve_exact, ExactResult};
pub use generate::{generate_instance, CvClass, GenSpec, ReleaseClass};
pub use heuristics::{ga_schedule, spt_schedule, GaConfig, GaOutcome};
pub use metrics::{compute_metrics, Metrics};
pub use model::{Instance, Job, Schedule, ScheduleEntry, EPS};
pub use validate::{validate_schedule, ValidationReport, Violation};
