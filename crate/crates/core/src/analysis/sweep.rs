use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::complexity::complexity_report;
use crate::bucket::{build_grid, GridOptions};
use crate::bucket_solver::{count_variables, solve_bucket};
use crate::budget::Budget;
use crate::error::{Error, Result};
use crate::metrics::compute_metrics;
use crate::model::Instance;

/// One row of a granularity or stride sweep. Columns that do not apply to the
/// sweep kind are `None`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    /// Swept value: the bucket width or the stride.
    pub value: f64,
    pub delta: f64,
    pub kappa: usize,
    pub buckets: usize,
    /// Infinite when no bucket-feasible solution was found.
    pub cmax: f64,
    pub gap_pct: Option<f64>,
    pub utilization: Option<f64>,
    pub proved: bool,
    /// Seconds.
    pub elapsed: f64,
    pub vars: Option<u64>,
    pub exact_share: Option<f64>,
    pub approx_share: Option<f64>,
    pub log10_speedup: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DeltaSweep {
    /// Sorted by ascending bucket width.
    pub rows: Vec<SweepRow>,
    /// Smallest-B width whose gap stays within the tolerance.
    pub delta_opt: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SweepOptions {
    /// Fixed stride for the width sweep; derived from the instance when `None`.
    pub kappa: Option<usize>,
    /// Fixed width for the stride sweep; derived from the instance when `None`.
    pub delta: Option<f64>,
    pub budget: Budget,
    /// Relative gap tolerance used to pick the best width.
    pub epsilon: f64,
}

impl Default for SweepOptions {
    fn default() -> Self {
        Self { kappa: None, delta: None, budget: Budget::default(), epsilon: 0.05 }
    }
}

fn gap_pct(cmax: f64, reference: f64) -> Option<f64> {
    (cmax.is_finite() && reference.is_finite() && reference > 0.0).then(|| 100.0 * (cmax - reference) / reference)
}

fn solve_row(inst: &Instance, opts: GridOptions, value: f64, budget: Budget) -> Result<SweepRow> {
    let grid = build_grid(inst, &opts)?;
    let res = solve_bucket(inst, &grid, budget);
    let utilization = match &res.solution {
        Some(sol) => Some(compute_metrics(inst, &sol.schedule, None)?.utilization),
        None => None,
    };
    Ok(SweepRow {
        value,
        delta: grid.delta(),
        kappa: grid.kappa(),
        buckets: grid.buckets(),
        cmax: res.cmax,
        gap_pct: None,
        utilization,
        proved: res.proved_bucket_optimal,
        elapsed: res.elapsed,
        vars: None,
        exact_share: None,
        approx_share: None,
        log10_speedup: None,
    })
}

/// Solves the instance once per bucket width. Gaps are measured against
/// `oracle` when given, otherwise against the best makespan in the sweep.
pub fn sweep_delta(inst: &Instance, deltas: &[f64], oracle: Option<f64>, opts: &SweepOptions) -> Result<DeltaSweep> {
    if let Some(&d) = deltas.iter().find(|d| !(d.is_finite() && **d > 0.0)) {
        return Err(Error::Config(format!("sweep widths must be positive, got {d}")));
    }
    let mut deltas = deltas.to_vec();
    deltas.sort_by(f64::total_cmp);
    deltas.dedup();
    let mut rows = deltas
        .par_iter()
        .map(|&d| {
            let grid_opts = GridOptions { kappa: opts.kappa, ..GridOptions::default().with_delta(d) };
            let mut row = solve_row(inst, grid_opts.clone(), d, opts.budget)?;
            row.vars = Some(count_variables(inst, &build_grid(inst, &grid_opts)?).bucket_indexed);
            Ok(row)
        })
        .collect::<Result<Vec<_>>>()?;

    let reference = oracle.unwrap_or_else(|| rows.iter().map(|r| r.cmax).fold(f64::INFINITY, f64::min));
    for row in &mut rows {
        row.gap_pct = gap_pct(row.cmax, reference);
    }
    let delta_opt = rows
        .iter()
        .filter(|r| r.gap_pct.is_some_and(|g| g <= 100.0 * opts.epsilon + 1e-9))
        .min_by(|a, b| a.buckets.cmp(&b.buckets).then(a.delta.total_cmp(&b.delta)))
        .map(|r| r.delta);
    Ok(DeltaSweep { rows, delta_opt })
}

/// Solves the instance once per stride at a fixed width.
pub fn sweep_kappa(
    inst: &Instance,
    kappas: &[usize],
    oracle: Option<f64>,
    opts: &SweepOptions,
) -> Result<Vec<SweepRow>> {
    if kappas.contains(&0) {
        return Err(Error::Config("sweep strides must be at least 1".into()));
    }
    let mut kappas = kappas.to_vec();
    kappas.sort_unstable();
    kappas.dedup();
    let mut rows = kappas
        .par_iter()
        .map(|&k| {
            let mut grid_opts = GridOptions::default().with_kappa(k);
            grid_opts.delta = opts.delta;
            let grid = build_grid(inst, &grid_opts)?;
            let mut row = solve_row(inst, grid_opts, k as f64, opts.budget)?;
            let share = grid.exact_share();
            row.exact_share = Some(share);
            row.approx_share = Some(1.0 - share);
            row.log10_speedup = Some(complexity_report(inst, &grid).log10_speedup);
            Ok(row)
        })
        .collect::<Result<Vec<_>>>()?;
    let reference = oracle.unwrap_or_else(|| rows.iter().map(|r| r.cmax).fold(f64::INFINITY, f64::min));
    for row in &mut rows {
        row.gap_pct = gap_pct(row.cmax, reference);
    }
    Ok(rows)
}
