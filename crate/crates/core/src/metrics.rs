use serde::Serialize;

use crate::bucket::BucketGrid;
use crate::error::{Error, Result};
use crate::model::{Instance, Schedule};
use crate::validate::validate_schedule;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Metrics {
    pub cmax: f64,
    /// `sum p / (m * cmax)`.
    pub utilization: f64,
    /// Population standard deviation of machine loads over their mean.
    pub load_balance: f64,
    pub machine_loads: Vec<f64>,
    /// `(ceil(T) + 1) / B`, present only when a grid is supplied.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub compression_ratio_vars: Option<f64>,
}

pub fn compute_metrics(inst: &Instance, sched: &Schedule, grid: Option<&BucketGrid>) -> Result<Metrics> {
    let report = validate_schedule(inst, sched);
    if let Some(v) = report.first() {
        return Err(Error::Infeasible(v.clone()));
    }

    let m = inst.machines();
    let cmax = sched.makespan(inst);
    let mut machine_loads = vec![0.0; m];
    for e in &sched.entries {
        machine_loads[e.machine] += inst.job(e.job).p;
    }
    let utilization = inst.total_processing() / (m as f64 * cmax);
    let load_balance = dispersion(&machine_loads);
    let compression_ratio_vars = grid.map(|g| (g.horizon().ceil() + 1.0) / g.buckets() as f64);

    Ok(Metrics { cmax, utilization, load_balance, machine_loads, compression_ratio_vars })
}

/// Coefficient of variation with the population standard deviation.
pub fn dispersion(values: &[f64]) -> f64 {
    if values.is_empty() {
        return 0.0;
    }
    let len = values.len() as f64;
    let mean = values.iter().sum::<f64>() / len;
    if mean == 0.0 {
        return 0.0;
    }
    let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / len;
    var.sqrt() / mean
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::Job;

    fn inst(ps: &[f64], m: usize) -> Instance {
        Instance::new(ps.iter().enumerate().map(|(i, &p)| Job::new(i, p, 0.0)).collect(), m).unwrap()
    }

    #[test]
    fn symmetric_two_machines() {
        let i = inst(&[3.0, 3.0], 2);
        let s = Schedule::from_assignments(&[(0, 0.0), (1, 0.0)]);
        let m = compute_metrics(&i, &s, None).unwrap();
        assert_eq!(m.cmax, 3.0);
        assert_eq!(m.utilization, 1.0);
        assert_eq!(m.load_balance, 0.0);
        assert!(m.compression_ratio_vars.is_none());
    }

    #[test]
    fn single_machine_is_balanced() {
        let i = inst(&[2.0, 3.0], 1);
        let s = Schedule::from_assignments(&[(0, 0.0), (0, 2.0)]);
        let m = compute_metrics(&i, &s, None).unwrap();
        assert_eq!(m.cmax, 5.0);
        assert_eq!(m.utilization, 1.0);
        assert_eq!(m.load_balance, 0.0);
    }

    #[test]
    fn unequal_loads() {
        let i = inst(&[4.0, 2.0], 2);
        let s = Schedule::from_assignments(&[(0, 0.0), (1, 0.0)]);
        let m = compute_metrics(&i, &s, None).unwrap();
        assert_eq!(m.cmax, 4.0);
        assert_eq!(m.utilization, 0.75);
        assert_eq!(m.machine_loads, vec![4.0, 2.0]);
        // mean 3, population sd 1
        assert!((m.load_balance - 1.0 / 3.0).abs() < 1e-12);
    }

    #[test]
    fn infeasible_schedule_is_rejected() {
        let i = inst(&[4.0, 4.0], 1);
        let s = Schedule::from_assignments(&[(0, 0.0), (0, 1.0)]);
        assert!(matches!(compute_metrics(&i, &s, None), Err(Error::Infeasible(_))));
    }

    #[test]
    fn compression_ratio_with_grid() {
        let i = inst(&[4.0, 9.0], 1);
        // T = 13, delta* = 6, B = floor(13/6) + 1 = 3
        let g = crate::bucket::build_grid(&i, &crate::bucket::GridOptions::default()).unwrap();
        let s = Schedule::from_assignments(&[(0, 0.0), (0, 4.0)]);
        let m = compute_metrics(&i, &s, Some(&g)).unwrap();
        assert!((m.compression_ratio_vars.unwrap() - 14.0 / 3.0).abs() < 1e-12);
    }
}
