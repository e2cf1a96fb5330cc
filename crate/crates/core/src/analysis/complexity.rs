use serde::Serialize;
use statrs::function::gamma::ln_gamma;

use crate::bucket::BucketGrid;
use crate::model::Instance;

/// Search-space sizes in log10, plus the precision redundancy of the time grid.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ComplexityReport {
    pub log10_time_indexed: f64,
    pub log10_bucket: f64,
    pub log10_speedup: f64,
    pub log10_assignment: f64,
    pub log10_sequencing: f64,
    pub precision_redundancy: f64,
}

pub fn complexity_report(inst: &Instance, grid: &BucketGrid) -> ComplexityReport {
    complexity_from_dims(inst.n(), grid.horizon(), grid.buckets() as f64, inst.max_p() / inst.min_p())
}

/// `ratio` is `max p / min p`; `buckets` may be fractional.
pub fn complexity_from_dims(n: usize, horizon: f64, buckets: f64, ratio: f64) -> ComplexityReport {
    let nf = n as f64;
    let log10_time_indexed = nf * horizon.log10();
    let log10_bucket = nf * buckets.log10();
    ComplexityReport {
        log10_time_indexed,
        log10_bucket,
        log10_speedup: log10_time_indexed - log10_bucket,
        log10_assignment: nf * 2f64.log10(),
        log10_sequencing: ln_gamma(nf + 1.0) / std::f64::consts::LN_10,
        precision_redundancy: nf * ratio.ln() / horizon,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn table_inputs() {
        let r = complexity_from_dims(20, 786.0, 10.56, 1.0);
        assert!((r.log10_speedup - 37.44).abs() < 0.01);
    }

    #[test]
    fn formula_consistent_bucket_count() {
        let r = complexity_from_dims(20, 786.0, 44.0, 1.0);
        assert!((r.log10_speedup - 25.04).abs() < 0.01);
    }

    #[test]
    fn no_compression() {
        assert_eq!(complexity_from_dims(7, 50.0, 50.0, 3.0).log10_speedup, 0.0);
    }

    #[test]
    fn sequencing_is_log_factorial() {
        let r = complexity_from_dims(5, 10.0, 2.0, 1.0);
        assert!((r.log10_sequencing - 120f64.log10()).abs() < 1e-9);
        assert!((r.log10_assignment - 32f64.log10()).abs() < 1e-12);
        assert_eq!(r.precision_redundancy, 0.0);
    }
}
