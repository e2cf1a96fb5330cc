//! Search over the bucket-indexed space, variable accounting, and LP export.

mod count;
mod lp;
mod search;

pub use count::{count_from_dims, count_variables, fractional_bucket_vars, time_slots, VariableCounts};
pub use lp::{export_milp, write_milp, LpForm};
pub use search::{solve_bucket, BucketResult};
