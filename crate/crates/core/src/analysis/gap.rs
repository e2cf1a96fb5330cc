use crate::error::{Error, Result};

/// Certified ratio ceiling `1 + kappa * delta / C* + 1 / B`.
pub fn gap_bound(kappa: f64, delta: f64, cmax_opt: f64, buckets: f64) -> Result<f64> {
    for (name, v) in [("kappa", kappa), ("delta", delta), ("optimal makespan", cmax_opt), ("bucket count", buckets)] {
        if !(v.is_finite() && v > 0.0) {
            return Err(Error::Domain(format!("{name} must be positive, got {v}")));
        }
    }
    Ok(1.0 + kappa * delta / cmax_opt + 1.0 / buckets)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn worked_bound() {
        let g = gap_bound(4.0, 18.0, 10.3, 44.0).unwrap();
        assert!((g - 7.99).abs() < 0.05, "{g}");
    }

    #[test]
    fn limits() {
        assert!((gap_bound(1e-12, 1e-12, 5.0, 10.0).unwrap() - 1.1).abs() < 1e-9);
        assert!((gap_bound(2.0, 5.0, 10.0, 1e12).unwrap() - 2.0).abs() < 1e-9);
    }

    #[test]
    fn rejects_non_positive_optimum() {
        assert!(matches!(gap_bound(1.0, 1.0, 0.0, 1.0), Err(Error::Domain(_))));
        assert!(gap_bound(1.0, 1.0, -3.0, 1.0).is_err());
    }
}
