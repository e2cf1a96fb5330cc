//! Seeded benchmark suites. Each unit of work (one instance, or one tier
//! repetition) is cached as `rows/<suite>/<key>.json` together with a digest of
//! its inputs; reruns reuse units whose digest still matches.

use std::path::{Path, PathBuf};

use bucketsched::analysis::{
    characterize_instance, scale_run, summarize_tier, sweep_delta, sweep_kappa, tier_seed, ScaleConfig, ScaleRun,
    SweepOptions, SweepRow,
};
use bucketsched::bucket::geometric_mean_delta;
use bucketsched::io::fmt_num;
use bucketsched::{
    build_grid, generate_instance, solve_bucket, solve_exact, Budget, CvClass, GenSpec, GridOptions, ReleaseClass,
};
use clap::{Args, ValueEnum};
use rayon::prelude::*;
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::config::Config;
use crate::error::{CliError, CliResult};
use crate::fsutil::{read_text, write_atomic};
use crate::report::text_digest;
use crate::BudgetFlags;

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Suite {
    Delta,
    Kappa,
    Scale,
    Features,
}

impl Suite {
    fn name(self) -> &'static str {
        match self {
            Suite::Delta => "delta",
            Suite::Kappa => "kappa",
            Suite::Scale => "scale",
            Suite::Features => "features",
        }
    }
}

#[derive(Args)]
pub struct BenchArgs {
    #[arg(long, value_enum)]
    suite: Suite,
    /// Instances per configuration (delta, kappa, features) or repetitions per tier (scale).
    #[arg(long, default_value_t = 5)]
    seeds: usize,
    /// Base seed.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 12)]
    n: usize,
    #[arg(long, default_value_t = 3)]
    m: usize,
    /// Bucket widths; defaults to 0.5, 0.75, 1, 1.5 and 2 times the geometric mean of p.
    #[arg(long, value_delimiter = ',')]
    deltas: Vec<f64>,
    #[arg(long, value_delimiter = ',', default_values_t = [1usize, 2, 3, 4, 6, 8])]
    kappas: Vec<usize>,
    /// Scale tiers as NxM, comma separated.
    #[arg(long, value_delimiter = ',', default_values_t = ["10x2".to_string(), "20x4".to_string()])]
    tiers: Vec<String>,
    #[command(flatten)]
    budget: BudgetFlags,
    /// Fill the time column (makes output run-dependent).
    #[arg(long)]
    timings: bool,
    /// Worker threads; 0 uses all cores.
    #[arg(long, default_value_t = 0)]
    jobs: usize,
    #[arg(long)]
    out_dir: Option<PathBuf>,
}

#[derive(Serialize, Deserialize)]
struct Cached<T> {
    digest: String,
    data: T,
}

/// Loads a cached unit when its digest matches, otherwise computes and stores it.
fn cached<T, F>(dir: &Path, key: &str, digest: &str, compute: F) -> CliResult<T>
where
    T: Serialize + DeserializeOwned,
    F: FnOnce() -> CliResult<T>,
{
    let path = dir.join(format!("{key}.json"));
    if path.exists() {
        if let Ok(hit) = serde_json::from_str::<Cached<T>>(&read_text(&path)?) {
            if hit.digest == digest {
                return Ok(hit.data);
            }
        }
    }
    let data = compute()?;
    let entry = Cached { digest: digest.to_string(), data };
    let mut text = serde_json::to_string_pretty(&entry).map_err(|e| CliError::Internal(e.to_string()))?;
    text.push('\n');
    write_atomic(&path, text.as_bytes())?;
    Ok(entry.data)
}

fn opt_num(x: Option<f64>) -> String {
    x.filter(|v| v.is_finite()).map(fmt_num).unwrap_or_default()
}

fn num(x: f64) -> String {
    opt_num(Some(x))
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

struct Table {
    header: &'static str,
    lines: Vec<String>,
}

impl Table {
    fn new(header: &'static str) -> Self {
        Self { header, lines: Vec::new() }
    }

    fn push(&mut self, fields: &[String]) {
        self.lines.push(fields.iter().map(|f| csv_field(f)).collect::<Vec<_>>().join(","));
    }

    fn render(&self) -> String {
        let mut s = String::from(self.header);
        s.push('\n');
        for l in &self.lines {
            s.push_str(l);
            s.push('\n');
        }
        s
    }
}

fn parse_tier(s: &str) -> CliResult<(usize, usize)> {
    let bad = || CliError::Usage(format!("tier `{s}` must look like 10x2"));
    let (n, m) = s.trim().split_once(['x', 'X']).ok_or_else(bad)?;
    let n: usize = n.parse().map_err(|_| bad())?;
    let m: usize = m.parse().map_err(|_| bad())?;
    if n == 0 || m == 0 {
        return Err(bad());
    }
    Ok((n, m))
}

pub fn cmd_bench(cfg: &Config, args: BenchArgs) -> CliResult<()> {
    let out_dir = cfg.out_dir(args.out_dir.as_deref()).unwrap_or_else(|| PathBuf::from("bench-out"));
    let budget = args.budget.budget(cfg)?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(args.jobs)
        .build()
        .map_err(|e| CliError::Internal(e.to_string()))?;
    let rows_dir = out_dir.join("rows").join(args.suite.name());
    let tables = pool.install(|| match args.suite {
        Suite::Delta => bench_delta(&args, budget, &rows_dir),
        Suite::Kappa => bench_kappa(&args, budget, &rows_dir),
        Suite::Scale => bench_scale(&args, budget, &rows_dir),
        Suite::Features => bench_features(&args, budget, &rows_dir),
    })?;
    for (name, table) in tables {
        let path = out_dir.join(name);
        write_atomic(&path, table.render().as_bytes())?;
        println!("{}", path.display());
    }
    Ok(())
}

fn budget_key(b: &Budget) -> String {
    format!("{}:{:?}", b.max_nodes, b.time_limit)
}

fn sweep_instance(args: &BenchArgs, s: usize) -> GenSpec {
    GenSpec::new(args.n, args.m, args.seed + s as u64)
}

#[derive(Serialize, Deserialize)]
struct SweepUnit {
    rows: Vec<SweepRow>,
    oracle: Option<f64>,
    delta_opt: Option<f64>,
    error: Option<String>,
}

fn strip_time(rows: &mut [SweepRow], timings: bool) {
    if !timings {
        rows.iter_mut().for_each(|r| r.elapsed = 0.0);
    }
}

fn run_sweep_unit<F>(args: &BenchArgs, budget: Budget, s: usize, f: F) -> SweepUnit
where
    F: FnOnce(&bucketsched::Instance, Option<f64>, &SweepOptions) -> bucketsched::Result<(Vec<SweepRow>, Option<f64>)>,
{
    let run = || -> bucketsched::Result<SweepUnit> {
        let inst = generate_instance(&sweep_instance(args, s))?;
        let exact = solve_exact(&inst, budget);
        let oracle = exact.proved_optimal.then_some(exact.cmax);
        let opts = SweepOptions { budget, ..Default::default() };
        let (mut rows, delta_opt) = f(&inst, oracle, &opts)?;
        strip_time(&mut rows, args.timings);
        Ok(SweepUnit { rows, oracle, delta_opt, error: None })
    };
    run().unwrap_or_else(|e| SweepUnit { rows: Vec::new(), oracle: None, delta_opt: None, error: Some(e.to_string()) })
}

fn bench_delta(args: &BenchArgs, budget: Budget, dir: &Path) -> CliResult<Vec<(String, Table)>> {
    if args.deltas.iter().any(|d| !(d.is_finite() && *d > 0.0)) {
        return Err(CliError::Usage("--deltas must be positive".into()));
    }
    let units = (0..args.seeds)
        .into_par_iter()
        .map(|s| {
            let spec = sweep_instance(args, s);
            let key = format!("seed{}", spec.seed);
            let deltas = format!("{:?}", args.deltas);
            let digest = text_digest(&[
                &serde_json::to_string(&spec).unwrap_or_default(),
                &deltas,
                &budget_key(&budget),
                &args.timings.to_string(),
            ]);
            cached(dir, &key, &digest, || {
                Ok(run_sweep_unit(args, budget, s, |inst, oracle, opts| {
                    let deltas = if args.deltas.is_empty() {
                        let d = geometric_mean_delta(inst);
                        [0.5, 0.75, 1.0, 1.5, 2.0].iter().map(|f| f * d).collect()
                    } else {
                        args.deltas.clone()
                    };
                    let sweep = sweep_delta(inst, &deltas, oracle, opts)?;
                    Ok((sweep.rows, sweep.delta_opt))
                }))
            })
        })
        .collect::<CliResult<Vec<_>>>()?;

    let mut table = Table::new("seed,delta,buckets,vars,cmax,gap_pct,utilization,proved,delta_opt,time_s,status");
    for (s, unit) in units.iter().enumerate() {
        let seed = (args.seed + s as u64).to_string();
        if let Some(err) = &unit.error {
            table.push(&[
                seed,
                String::new(),
                String::new(),
                String::new(),
                String::new(),
                String::new(),
                String::new(),
                String::new(),
                String::new(),
                String::new(),
                format!("error: {err}"),
            ]);
            continue;
        }
        for r in &unit.rows {
            table.push(&[
                seed.clone(),
                num(r.delta),
                r.buckets.to_string(),
                r.vars.map(|v| v.to_string()).unwrap_or_default(),
                num(r.cmax),
                opt_num(r.gap_pct),
                opt_num(r.utilization),
                r.proved.to_string(),
                opt_num(unit.delta_opt),
                if args.timings { num(r.elapsed) } else { String::new() },
                "ok".into(),
            ]);
        }
    }
    Ok(vec![("delta.csv".into(), table)])
}

fn bench_kappa(args: &BenchArgs, budget: Budget, dir: &Path) -> CliResult<Vec<(String, Table)>> {
    if args.kappas.contains(&0) {
        return Err(CliError::Usage("--kappas must be at least 1".into()));
    }
    let units = (0..args.seeds)
        .into_par_iter()
        .map(|s| {
            let spec = sweep_instance(args, s);
            let key = format!("seed{}", spec.seed);
            let digest = text_digest(&[
                &serde_json::to_string(&spec).unwrap_or_default(),
                &format!("{:?}", args.kappas),
                &budget_key(&budget),
                &args.timings.to_string(),
            ]);
            cached(dir, &key, &digest, || {
                Ok(run_sweep_unit(args, budget, s, |inst, oracle, opts| {
                    Ok((sweep_kappa(inst, &args.kappas, oracle, opts)?, None))
                }))
            })
        })
        .collect::<CliResult<Vec<_>>>()?;

    let mut table = Table::new(
        "seed,kappa,exact_share,approx_share,buckets,cmax,gap_pct,utilization,log10_speedup,proved,time_s,status",
    );
    for (s, unit) in units.iter().enumerate() {
        let seed = (args.seed + s as u64).to_string();
        if let Some(err) = &unit.error {
            let mut fields = vec![seed];
            fields.extend(std::iter::repeat_n(String::new(), 10));
            fields.push(format!("error: {err}"));
            table.push(&fields);
            continue;
        }
        for r in &unit.rows {
            table.push(&[
                seed.clone(),
                r.kappa.to_string(),
                opt_num(r.exact_share),
                opt_num(r.approx_share),
                r.buckets.to_string(),
                num(r.cmax),
                opt_num(r.gap_pct),
                opt_num(r.utilization),
                opt_num(r.log10_speedup),
                r.proved.to_string(),
                if args.timings { num(r.elapsed) } else { String::new() },
                "ok".into(),
            ]);
        }
    }
    Ok(vec![("kappa.csv".into(), table)])
}

fn bench_scale(args: &BenchArgs, budget: Budget, dir: &Path) -> CliResult<Vec<(String, Table)>> {
    let tiers = args.tiers.iter().map(|t| parse_tier(t)).collect::<CliResult<Vec<_>>>()?;
    let cfg = ScaleConfig { bucket_budget: budget, exact_budget: budget, ..Default::default() };
    let mut table =
        Table::new("n,m,runs,mean_gap_pct,gap_runs,mean_utilization,mean_log10_speedup,success_rate,time_s,errors");
    for (n, m) in tiers {
        let outcomes = (0..args.seeds)
            .into_par_iter()
            .map(|rep| {
                let seed = tier_seed(args.seed, n, m, rep);
                let digest = text_digest(&[
                    &format!("{n}x{m}:{seed}"),
                    &serde_json::to_string(&cfg).unwrap_or_default(),
                    &args.timings.to_string(),
                ]);
                cached(dir, &format!("{n}x{m}-rep{rep}"), &digest, || {
                    Ok(match scale_run(n, m, seed, &cfg) {
                        Ok(mut run) => {
                            if !args.timings {
                                run.elapsed = 0.0;
                            }
                            Ok(run)
                        }
                        Err(e) => Err(e.to_string()),
                    })
                })
            })
            .collect::<CliResult<Vec<Result<ScaleRun, String>>>>()?;
        let runs: Vec<ScaleRun> = outcomes.iter().filter_map(|o| o.as_ref().ok().cloned()).collect();
        let errors = outcomes.len() - runs.len();
        let row = summarize_tier(n, m, &runs);
        table.push(&[
            n.to_string(),
            m.to_string(),
            row.runs.to_string(),
            opt_num(row.mean_gap_pct),
            row.gap_runs.to_string(),
            opt_num(row.mean_utilization),
            num(row.mean_log10_speedup),
            num(row.success_rate),
            if args.timings { num(row.mean_elapsed) } else { String::new() },
            errors.to_string(),
        ]);
    }
    Ok(vec![("scale.csv".into(), table)])
}

#[derive(Serialize, Deserialize)]
struct FeatureUnit {
    cv_p: f64,
    release_span_fraction: f64,
    release_concentration: f64,
    size_tier: String,
    cv_class: String,
    release_class: String,
    bucket_cmax: f64,
    exact_cmax: Option<f64>,
    gap_pct: Option<f64>,
    elapsed: f64,
}

fn bench_features(args: &BenchArgs, budget: Budget, dir: &Path) -> CliResult<Vec<(String, Table)>> {
    let mut jobs = Vec::new();
    for cv in CvClass::ALL {
        for rel in ReleaseClass::ALL {
            for s in 0..args.seeds {
                jobs.push((cv, rel, args.seed + s as u64));
            }
        }
    }
    let outcomes = jobs
        .par_iter()
        .map(|&(cv, rel, seed)| {
            let spec = GenSpec::new(args.n, args.m, seed).with_cv(Some(cv)).with_release(rel);
            let spec_text = serde_json::to_string(&spec).unwrap_or_default();
            let digest = text_digest(&[&spec_text, &budget_key(&budget), &args.timings.to_string()]);
            let key = format!("{}-{}-seed{seed}", cv.as_str(), rel.as_str());
            cached(dir, &key, &digest, || {
                let run = || -> bucketsched::Result<FeatureUnit> {
                    let inst = generate_instance(&spec)?;
                    let f = characterize_instance(&inst);
                    let grid = build_grid(&inst, &GridOptions::default())?;
                    let bucket = solve_bucket(&inst, &grid, budget);
                    let exact = solve_exact(&inst, budget);
                    let exact_cmax = exact.proved_optimal.then_some(exact.cmax);
                    let gap_pct = exact_cmax.filter(|_| bucket.cmax.is_finite()).map(|c| 100.0 * (bucket.cmax - c) / c);
                    Ok(FeatureUnit {
                        cv_p: f.cv_p,
                        release_span_fraction: f.release_span_fraction,
                        release_concentration: f.release_concentration,
                        size_tier: f.size_tier.as_str().into(),
                        cv_class: f.cv_class.as_str().into(),
                        release_class: f.release_class.as_str().into(),
                        bucket_cmax: bucket.cmax,
                        exact_cmax,
                        gap_pct,
                        elapsed: if args.timings { bucket.elapsed } else { 0.0 },
                    })
                };
                Ok(run().map_err(|e| e.to_string()))
            })
        })
        .collect::<CliResult<Vec<Result<FeatureUnit, String>>>>()?;

    let mut table = Table::new(
        "seed,target_cv,target_release,cv_p,cv_class,release_span_fraction,release_concentration,release_class,size_tier,bucket_cmax,exact_cmax,gap_pct,time_s,status",
    );
    let mut groups: std::collections::BTreeMap<(String, String), Vec<f64>> = Default::default();
    for (&(cv, rel, seed), out) in jobs.iter().zip(&outcomes) {
        match out {
            Ok(u) => {
                if let Some(g) = u.gap_pct {
                    groups.entry(("cv".into(), u.cv_class.clone())).or_default().push(g);
                    groups.entry(("release".into(), u.release_class.clone())).or_default().push(g);
                    groups.entry(("size".into(), u.size_tier.clone())).or_default().push(g);
                }
                table.push(&[
                    seed.to_string(),
                    cv.as_str().into(),
                    rel.as_str().into(),
                    num(u.cv_p),
                    u.cv_class.clone(),
                    num(u.release_span_fraction),
                    num(u.release_concentration),
                    u.release_class.clone(),
                    u.size_tier.clone(),
                    num(u.bucket_cmax),
                    opt_num(u.exact_cmax),
                    opt_num(u.gap_pct),
                    if args.timings { num(u.elapsed) } else { String::new() },
                    "ok".into(),
                ]);
            }
            Err(e) => {
                let mut fields = vec![seed.to_string(), cv.as_str().into(), rel.as_str().into()];
                fields.extend(std::iter::repeat_n(String::new(), 10));
                fields.push(format!("error: {e}"));
                table.push(&fields);
            }
        }
    }
    let mut summary = Table::new("axis,class,instances,mean_gap_pct,max_gap_pct");
    for ((axis, class), gaps) in &groups {
        let mean = gaps.iter().sum::<f64>() / gaps.len() as f64;
        let max = gaps.iter().cloned().fold(f64::MIN, f64::max);
        summary.push(&[axis.clone(), class.clone(), gaps.len().to_string(), num(mean), num(max)]);
    }
    Ok(vec![("features.csv".into(), table), ("features_summary.csv".into(), summary)])
}
