use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::complexity::complexity_report;
use crate::bucket::{build_grid, GridOptions};
use crate::bucket_solver::solve_bucket;
use crate::budget::Budget;
use crate::error::Result;
use crate::exact::solve_exact;
use crate::generate::{generate_instance, GenSpec, ReleaseClass};
use crate::metrics::compute_metrics;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ScaleConfig {
    pub bucket_budget: Budget,
    pub exact_budget: Budget,
    pub p_min: f64,
    pub p_max: f64,
    pub release_class: ReleaseClass,
}

impl Default for ScaleConfig {
    fn default() -> Self {
        Self {
            bucket_budget: Budget::default(),
            exact_budget: Budget::default(),
            p_min: 1.0,
            p_max: 50.0,
            release_class: ReleaseClass::Dense,
        }
    }
}

/// One seeded instance of a tier.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScaleRun {
    pub n: usize,
    pub m: usize,
    pub seed: u64,
    pub bucket_cmax: f64,
    pub exact_cmax: f64,
    pub exact_proved: bool,
    pub bucket_proved: bool,
    /// Present only when the exact solve proved optimality.
    pub gap_pct: Option<f64>,
    pub utilization: Option<f64>,
    pub log10_speedup: f64,
    pub elapsed: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScaleRow {
    pub n: usize,
    pub m: usize,
    pub runs: usize,
    pub mean_gap_pct: Option<f64>,
    /// Runs that contributed to the mean gap.
    pub gap_runs: usize,
    pub mean_utilization: Option<f64>,
    pub mean_log10_speedup: f64,
    /// Share of runs whose bucket search finished within budget.
    pub success_rate: f64,
    pub mean_elapsed: f64,
}

/// Seed of repetition `rep` in tier `(n, m)`.
pub fn tier_seed(seed: u64, n: usize, m: usize, rep: usize) -> u64 {
    seed.wrapping_mul(0x9E37_79B9_7F4A_7C15)
        .wrapping_add((n as u64) << 40)
        .wrapping_add((m as u64) << 24)
        .wrapping_add(rep as u64)
}

pub fn scale_run(n: usize, m: usize, seed: u64, cfg: &ScaleConfig) -> Result<ScaleRun> {
    let spec = GenSpec::new(n, m, seed).with_p_range(cfg.p_min, cfg.p_max).with_release(cfg.release_class);
    let inst = generate_instance(&spec)?;
    let grid = build_grid(&inst, &GridOptions::default())?;
    let bucket = solve_bucket(&inst, &grid, cfg.bucket_budget);
    let exact = solve_exact(&inst, cfg.exact_budget);
    let utilization = match &bucket.solution {
        Some(sol) => Some(compute_metrics(&inst, &sol.schedule, None)?.utilization),
        None => None,
    };
    let gap_pct =
        (exact.proved_optimal && bucket.cmax.is_finite()).then(|| 100.0 * (bucket.cmax - exact.cmax) / exact.cmax);
    Ok(ScaleRun {
        n,
        m,
        seed,
        bucket_cmax: bucket.cmax,
        exact_cmax: exact.cmax,
        exact_proved: exact.proved_optimal,
        bucket_proved: bucket.proved_bucket_optimal,
        gap_pct,
        utilization,
        log10_speedup: complexity_report(&inst, &grid).log10_speedup,
        elapsed: bucket.elapsed,
    })
}

fn mean(values: impl Iterator<Item = f64>) -> Option<f64> {
    let (sum, count) = values.fold((0.0, 0usize), |(s, c), v| (s + v, c + 1));
    (count > 0).then(|| sum / count as f64)
}

pub fn summarize_tier(n: usize, m: usize, runs: &[ScaleRun]) -> ScaleRow {
    let gaps: Vec<f64> = runs.iter().filter_map(|r| r.gap_pct).collect();
    ScaleRow {
        n,
        m,
        runs: runs.len(),
        mean_gap_pct: mean(gaps.iter().copied()),
        gap_runs: gaps.len(),
        mean_utilization: mean(runs.iter().filter_map(|r| r.utilization)),
        mean_log10_speedup: mean(runs.iter().map(|r| r.log10_speedup)).unwrap_or(0.0),
        success_rate: mean(runs.iter().map(|r| if r.bucket_proved { 1.0 } else { 0.0 })).unwrap_or(0.0),
        mean_elapsed: mean(runs.iter().map(|r| r.elapsed)).unwrap_or(0.0),
    }
}

/// Runs `reps` seeded dense-release instances per `(n, m)` tier.
pub fn scalability_run(tiers: &[(usize, usize)], reps: usize, seed: u64, cfg: &ScaleConfig) -> Result<Vec<ScaleRow>> {
    tiers
        .iter()
        .map(|&(n, m)| {
            let runs = (0..reps)
                .into_par_iter()
                .map(|rep| scale_run(n, m, tier_seed(seed, n, m, rep), cfg))
                .collect::<Result<Vec<_>>>()?;
            Ok(summarize_tier(n, m, &runs))
        })
        .collect()
}
