use serde::Serialize;

use crate::bucket::BucketGrid;
use crate::model::{Instance, EPS};

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct VariableCounts {
    /// `n * m * (ceil(T) + 1)`
    pub time_indexed: u64,
    /// `n * m * B`
    pub bucket_indexed: u64,
    /// `1 - bucket / time`
    pub reduction: f64,
}

pub fn count_variables(inst: &Instance, grid: &BucketGrid) -> VariableCounts {
    count_from_dims(inst.n(), inst.machines(), grid.horizon(), grid.buckets())
}

pub fn count_from_dims(n: usize, m: usize, horizon: f64, buckets: usize) -> VariableCounts {
    let nm = (n * m) as u64;
    let time_indexed = nm * (time_slots(horizon) as u64);
    let bucket_indexed = nm * buckets as u64;
    VariableCounts {
        time_indexed,
        bucket_indexed,
        reduction: (1.0 - bucket_indexed as f64 / time_indexed as f64).max(0.0),
    }
}

/// Number of unit slots `0..=ceil(T)` on the integral time grid.
pub fn time_slots(horizon: f64) -> usize {
    (horizon - EPS).ceil().max(0.0) as usize + 1
}

/// `n * m * B` for a non-integral bucket count, as reported by tables that use
/// `B = T / delta` without flooring.
pub fn fractional_bucket_vars(n: usize, m: usize, buckets: f64) -> f64 {
    (n * m) as f64 * buckets
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn twenty_job_reduction() {
        let c = count_from_dims(20, 4, 786.0, 44);
        assert_eq!(c.bucket_indexed, 3520);
        assert_eq!(c.time_indexed, 62960);
        assert!((c.reduction - 0.944).abs() < 5e-4);
    }

    #[test]
    fn unit_grid_has_no_reduction() {
        let c = count_from_dims(3, 2, 10.0, 11);
        assert_eq!(c.time_indexed, c.bucket_indexed);
        assert_eq!(c.reduction, 0.0);
    }

    #[test]
    fn fractional_row() {
        assert!((fractional_bucket_vars(20, 4, 10.6) - 848.0).abs() < 1e-9);
    }

    #[test]
    fn slots_round_up() {
        assert_eq!(time_slots(2.0), 3);
        assert_eq!(time_slots(2.5), 4);
    }
}
