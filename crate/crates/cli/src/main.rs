mod bench;
mod config;
mod error;
mod fsutil;
mod gantt;
mod report;

use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::time::Instant;

use bucketsched::analysis::{complexity_report, gap_bound};
use bucketsched::bucket::{DeltaRule, KappaRule};
use bucketsched::exact::brute_force;
use bucketsched::io::{instance_to_json, read_instance, schedule_to_csv};
use bucketsched::{
    build_grid, compute_metrics, count_variables, export_milp, ga_schedule, generate_instance, lower_bound,
    solve_bucket, solve_exact, spt_schedule, BucketGrid, Budget, CvClass, GaConfig, GenSpec, GridOptions, Instance,
    LpForm, ReleaseClass, Schedule,
};
use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::config::Config;
use crate::error::{CliError, CliResult};
use crate::fsutil::{in_out_dir, write_atomic};
use crate::report::{GapInfo, GridParams, InstanceInfo, Parameters, SolveReport};

#[derive(Parser)]
#[command(name = "bucketsched", version, about = "Bucket-indexed makespan scheduling on parallel machines")]
struct Cli {
    /// TOML file with [grid], [ga], [budget] and [gen] defaults.
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a seeded instance.
    Gen(GenArgs),
    /// Solve an instance with one method and print a JSON report.
    Solve(SolveArgs),
    /// Run a sweep or scalability suite over seeded instances.
    Bench(bench::BenchArgs),
    /// Write the time- or bucket-indexed model in LP format.
    Export(ExportArgs),
}

#[derive(Args, Clone, Default)]
pub struct GenFlags {
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long)]
    pub m: Option<usize>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long)]
    pub p_min: Option<f64>,
    #[arg(long)]
    pub p_max: Option<f64>,
    /// sparse, moderate or dense
    #[arg(long)]
    pub release: Option<String>,
    /// low, medium or high
    #[arg(long)]
    pub cv: Option<String>,
}

impl GenFlags {
    pub fn spec(&self, cfg: &Config) -> CliResult<GenSpec> {
        let (Some(n), Some(m)) = (self.n, self.m) else {
            return Err(CliError::Usage("an instance needs --n and --m (or --instance FILE)".into()));
        };
        let mut spec = GenSpec::new(n, m, self.seed);
        let p_min = self.p_min.or(cfg.gen.p_min).unwrap_or(spec.p_min);
        let p_max = self.p_max.or(cfg.gen.p_max).unwrap_or(spec.p_max);
        spec = spec.with_p_range(p_min, p_max);
        if let Some(r) = self.release.as_ref().or(cfg.gen.release.as_ref()) {
            spec = spec.with_release(r.parse::<ReleaseClass>().map_err(|e| CliError::Usage(e.to_string()))?);
        }
        if let Some(c) = self.cv.as_ref().or(cfg.gen.cv.as_ref()) {
            spec = spec.with_cv(Some(c.parse::<CvClass>().map_err(|e| CliError::Usage(e.to_string()))?));
        }
        Ok(spec)
    }
}

#[derive(Args)]
struct GenArgs {
    #[command(flatten)]
    gen: GenFlags,
    /// Output file; the instance goes to stdout when omitted.
    #[arg(short, long)]
    output: Option<PathBuf>,
    #[arg(long)]
    out_dir: Option<PathBuf>,
}

#[derive(Args)]
struct InstanceSource {
    /// Instance JSON file. Without it the instance is generated from the --n/--m flags.
    #[arg(short, long)]
    instance: Option<PathBuf>,
    #[command(flatten)]
    gen: GenFlags,
}

impl InstanceSource {
    fn load(&self, cfg: &Config) -> CliResult<(Instance, Option<GenSpec>)> {
        match &self.instance {
            Some(path) => Ok((read_instance(path)?, None)),
            None => {
                let spec = self.gen.spec(cfg)?;
                Ok((generate_instance(&spec)?, Some(spec)))
            }
        }
    }
}

#[derive(Args, Clone, Default)]
struct GridFlags {
    #[arg(long)]
    delta: Option<f64>,
    #[arg(long)]
    kappa: Option<usize>,
    #[arg(long, value_enum)]
    delta_rule: Option<DeltaRuleArg>,
    #[arg(long, value_enum)]
    kappa_rule: Option<KappaRuleArg>,
    /// Disable offset compression (every bucket is fully usable).
    #[arg(long)]
    no_phi: bool,
    /// Allow a bucket width larger than the horizon.
    #[arg(long)]
    allow_coarse: bool,
}

#[derive(Clone, Copy, ValueEnum)]
enum DeltaRuleArg {
    GeometricMean,
    MinP,
}

#[derive(Clone, Copy, ValueEnum)]
enum KappaRuleArg {
    Log2,
    Ratio,
}

impl GridFlags {
    fn options(&self, cfg: &Config) -> GridOptions {
        let g = &cfg.grid;
        GridOptions {
            delta: self.delta.or(g.delta),
            kappa: self.kappa.or(g.kappa),
            delta_rule: match self.delta_rule {
                Some(DeltaRuleArg::GeometricMean) => DeltaRule::GeometricMean,
                Some(DeltaRuleArg::MinP) => DeltaRule::MinP,
                None => g.delta_rule.unwrap_or_default(),
            },
            kappa_rule: match self.kappa_rule {
                Some(KappaRuleArg::Log2) => KappaRule::Log2,
                Some(KappaRuleArg::Ratio) => KappaRule::Ratio,
                None => g.kappa_rule.unwrap_or_default(),
            },
            allow_coarse: self.allow_coarse || g.allow_coarse.unwrap_or(false),
            phi: !self.no_phi && g.phi.unwrap_or(true),
        }
    }
}

#[derive(Args, Clone, Default)]
pub struct BudgetFlags {
    #[arg(long)]
    pub max_nodes: Option<u64>,
    /// Seconds.
    #[arg(long)]
    pub time_limit: Option<f64>,
}

impl BudgetFlags {
    pub fn budget(&self, cfg: &Config) -> CliResult<Budget> {
        let mut b = Budget::default();
        if let Some(n) = self.max_nodes.or(cfg.budget.max_nodes) {
            b.max_nodes = n;
        }
        if let Some(t) = self.time_limit.or(cfg.budget.time_limit) {
            if !(t.is_finite() && t > 0.0) {
                return Err(CliError::Usage(format!("--time-limit must be positive, got {t}")));
            }
            b.time_limit = Some(t);
        }
        Ok(b)
    }
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Method {
    Spt,
    Ga,
    Bucket,
    Exact,
    Brute,
}

impl Method {
    fn name(self) -> &'static str {
        match self {
            Method::Spt => "spt",
            Method::Ga => "ga",
            Method::Bucket => "bucket",
            Method::Exact => "exact",
            Method::Brute => "brute",
        }
    }
}

#[derive(Args)]
struct SolveArgs {
    #[command(flatten)]
    source: InstanceSource,
    #[arg(long, value_enum, default_value = "bucket")]
    method: Method,
    #[command(flatten)]
    grid: GridFlags,
    #[command(flatten)]
    budget: BudgetFlags,
    #[arg(long)]
    ga_seed: Option<u64>,
    #[arg(long)]
    population: Option<usize>,
    #[arg(long)]
    generations: Option<usize>,
    #[arg(long)]
    crossover_rate: Option<f64>,
    #[arg(long)]
    mutation_rate: Option<f64>,
    /// Also solve exactly and report the gap to the optimum.
    #[arg(long)]
    oracle: bool,
    /// Report file; stdout when omitted.
    #[arg(short, long)]
    output: Option<PathBuf>,
    /// Schedule CSV (job,machine,bucket,start,end).
    #[arg(long)]
    schedule: Option<PathBuf>,
    /// Gantt chart SVG.
    #[arg(long)]
    gantt: Option<PathBuf>,
    /// GA best-makespan trace CSV.
    #[arg(long)]
    trace: Option<PathBuf>,
    /// Include wall-clock times (makes output run-dependent).
    #[arg(long)]
    timings: bool,
    #[arg(long)]
    out_dir: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum FormArg {
    Time,
    Bucket,
}

#[derive(Args)]
struct ExportArgs {
    #[command(flatten)]
    source: InstanceSource,
    #[arg(long, value_enum, default_value = "time")]
    form: FormArg,
    #[command(flatten)]
    grid: GridFlags,
    /// Build the bucket grid from the default width rule instead of --delta.
    #[arg(long)]
    auto_grid: bool,
    /// LP file; stdout when omitted.
    #[arg(short, long)]
    output: Option<PathBuf>,
    #[arg(long)]
    out_dir: Option<PathBuf>,
}

fn main() {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            let code = match e.kind() {
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            std::process::exit(code);
        }
    };
    if let Err(e) = run(cli) {
        eprintln!("error: {e}");
        std::process::exit(e.exit_code());
    }
}

fn run(cli: Cli) -> CliResult<()> {
    let cfg = Config::load(cli.config.as_deref())?;
    match cli.command {
        Command::Gen(args) => cmd_gen(&cfg, args),
        Command::Solve(args) => cmd_solve(&cfg, args),
        Command::Bench(args) => bench::cmd_bench(&cfg, args),
        Command::Export(args) => cmd_export(&cfg, args),
    }
}

fn emit(out_dir: Option<&Path>, path: Option<&PathBuf>, text: &str) -> CliResult<()> {
    match path {
        Some(p) => write_atomic(&in_out_dir(out_dir, p), text.as_bytes()),
        None => std::io::stdout().write_all(text.as_bytes()).map_err(|e| CliError::io("writing stdout", e)),
    }
}

fn cmd_gen(cfg: &Config, args: GenArgs) -> CliResult<()> {
    let spec = args.gen.spec(cfg)?;
    let inst = generate_instance(&spec)?;
    let out_dir = cfg.out_dir(args.out_dir.as_deref());
    emit(out_dir.as_deref(), args.output.as_ref(), &instance_to_json(&inst))?;
    let digest = report::instance_digest(&inst);
    if args.output.is_some() {
        println!("{digest}");
    } else {
        eprintln!("{digest}");
    }
    Ok(())
}

fn ga_config(cfg: &Config, args: &SolveArgs) -> GaConfig {
    let d = GaConfig::default();
    let g = &cfg.ga;
    GaConfig {
        population: args.population.or(g.population).unwrap_or(d.population),
        generations: args.generations.or(g.generations).unwrap_or(d.generations),
        crossover_rate: args.crossover_rate.or(g.crossover_rate).unwrap_or(d.crossover_rate),
        mutation_rate: args.mutation_rate.or(g.mutation_rate).unwrap_or(d.mutation_rate),
        tournament: g.tournament.unwrap_or(d.tournament),
        seed: args.ga_seed.or(g.seed).unwrap_or(d.seed),
        seed_spt: g.seed_spt.unwrap_or(d.seed_spt),
    }
}

struct Solved {
    schedule: Schedule,
    buckets: Option<Vec<usize>>,
    proved: Option<bool>,
    nodes: Option<u64>,
    trace: Option<Vec<f64>>,
}

fn cmd_solve(cfg: &Config, args: SolveArgs) -> CliResult<()> {
    let (inst, gen) = args.source.load(cfg)?;
    let out_dir = cfg.out_dir(args.out_dir.as_deref());
    let out_dir = out_dir.as_deref();
    let budget = args.budget.budget(cfg)?;
    let mut params = Parameters::default();
    let mut grid: Option<BucketGrid> = None;
    let started = Instant::now();

    let solved = match args.method {
        Method::Spt => Solved { schedule: spt_schedule(&inst), buckets: None, proved: None, nodes: None, trace: None },
        Method::Ga => {
            let ga = ga_config(cfg, &args);
            let out = ga_schedule(&inst, &ga)?;
            params.ga = Some(ga);
            Solved { schedule: out.schedule, buckets: None, proved: None, nodes: None, trace: Some(out.trace) }
        }
        Method::Exact => {
            let res = solve_exact(&inst, budget);
            params.budget = Some(budget);
            Solved {
                schedule: res.schedule,
                buckets: None,
                proved: Some(res.proved_optimal),
                nodes: Some(res.nodes_explored),
                trace: None,
            }
        }
        Method::Brute => {
            let res = brute_force(&inst)?;
            Solved {
                schedule: res.schedule,
                buckets: None,
                proved: Some(true),
                nodes: Some(res.nodes_explored),
                trace: None,
            }
        }
        Method::Bucket => {
            let opts = args.grid.options(cfg);
            let g = build_grid(&inst, &opts)?;
            let res = solve_bucket(&inst, &g, budget);
            params.budget = Some(budget);
            params.grid = Some(GridParams {
                delta: g.delta(),
                kappa: g.kappa(),
                buckets: g.buckets(),
                phi: g.phi_enabled(),
                allow_coarse: opts.allow_coarse,
            });
            let Some(sol) = res.solution else {
                return Err(CliError::Core(bucketsched::Error::Refused(format!(
                    "no bucket-feasible assignment found within the budget ({} nodes)",
                    res.nodes_explored
                ))));
            };
            let buckets = sol.assignment.buckets();
            grid = Some(g);
            Solved {
                schedule: sol.schedule,
                buckets: Some(buckets),
                proved: Some(res.proved_bucket_optimal),
                nodes: Some(res.nodes_explored),
                trace: None,
            }
        }
    };
    let elapsed = started.elapsed().as_secs_f64();

    let metrics = compute_metrics(&inst, &solved.schedule, grid.as_ref())?;
    let lb = lower_bound(&inst);
    let mut gap = GapInfo {
        lower_bound: lb,
        vs_lower_bound_pct: (100.0 * (metrics.cmax - lb) / lb).max(0.0),
        exact_cmax: None,
        vs_exact_pct: None,
        ratio_bound: None,
    };
    if args.oracle {
        let exact = solve_exact(&inst, budget);
        if exact.proved_optimal {
            gap.exact_cmax = Some(exact.cmax);
            gap.vs_exact_pct = Some(100.0 * (metrics.cmax - exact.cmax) / exact.cmax);
            if let Some(g) = &grid {
                gap.ratio_bound = Some(gap_bound(g.kappa() as f64, g.delta(), exact.cmax, g.buckets() as f64)?);
            }
        }
    }

    let report = SolveReport {
        version: report::VERSION,
        instance: InstanceInfo::new(&inst, gen),
        method: args.method.name().to_string(),
        parameters: params,
        feasible: true,
        proved_optimal: solved.proved,
        nodes_explored: solved.nodes,
        complexity: grid.as_ref().map(|g| complexity_report(&inst, g)),
        variables: grid.as_ref().map(|g| count_variables(&inst, g)),
        metrics,
        gap,
        elapsed_s: args.timings.then_some(elapsed),
    };

    if let Some(path) = &args.schedule {
        let csv = schedule_to_csv(&inst, &solved.schedule, solved.buckets.as_deref());
        write_atomic(&in_out_dir(out_dir, path), csv.as_bytes())?;
    }
    if let Some(path) = &args.gantt {
        let svg = gantt::render_gantt(&inst, &solved.schedule, grid.as_ref());
        write_atomic(&in_out_dir(out_dir, path), svg.as_bytes())?;
    }
    if let Some(path) = &args.trace {
        let Some(trace) = &solved.trace else {
            return Err(CliError::Usage("--trace is only available with --method ga".into()));
        };
        let mut csv = String::from("generation,best_cmax\n");
        for (g, c) in trace.iter().enumerate() {
            csv.push_str(&format!("{g},{}\n", bucketsched::io::fmt_num(*c)));
        }
        write_atomic(&in_out_dir(out_dir, path), csv.as_bytes())?;
    }
    emit(out_dir, args.output.as_ref(), &report.to_json())
}

fn cmd_export(cfg: &Config, args: ExportArgs) -> CliResult<()> {
    let (inst, _) = args.source.load(cfg)?;
    let out_dir = cfg.out_dir(args.out_dir.as_deref());
    let form = match args.form {
        FormArg::Time => LpForm::Time,
        FormArg::Bucket => LpForm::Bucket,
    };
    let grid = match form {
        LpForm::Time => None,
        LpForm::Bucket => {
            let opts = args.grid.options(cfg);
            if opts.delta.is_none() && !args.auto_grid {
                return Err(CliError::Usage(
                    "the bucket form needs a grid: pass --delta (or --auto-grid for the default width)".into(),
                ));
            }
            Some(build_grid(&inst, &opts)?)
        }
    };
    emit(out_dir.as_deref(), args.output.as_ref(), &export_milp(&inst, grid.as_ref(), form)?)
}
