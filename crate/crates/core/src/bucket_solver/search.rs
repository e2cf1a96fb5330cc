use serde::Serialize;

use crate::bucket::{decode, project_schedule, BucketAssignment, BucketGrid, BucketSolution, JobCell};
use crate::budget::{Budget, Meter};
use crate::exact::lower_bound;
use crate::heuristics::{list_schedule, spt_schedule};
use crate::model::{Instance, EPS};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BucketResult {
    /// `None` only when no bucket-feasible assignment was found within the budget.
    pub solution: Option<BucketSolution>,
    /// Infinite when `solution` is `None`.
    pub cmax: f64,
    pub proved_bucket_optimal: bool,
    pub nodes_explored: u64,
    /// Seconds.
    pub elapsed: f64,
    pub gap_vs_exact: Option<f64>,
}

/// Branch and bound over per-job `(machine, bucket)` cells.
///
/// Placements are generated in strictly increasing `(bucket, machine, dispatch
/// rank)` order, so every assignment is produced once and each placement is
/// appended to the tail of its machine's decode sequence. A machine may be
/// opened only after all lower-indexed machines, and jobs with equal `(r, p)`
/// are placed in id order. Exact buckets are tried before approximate ones.
pub fn solve_bucket(inst: &Instance, grid: &BucketGrid, budget: Budget) -> BucketResult {
    let mut meter = Meter::new(budget);
    let mut search = Search::new(inst, grid);
    search.seed_incumbent();
    let settled = search.best_cmax <= search.global_lb + EPS;
    if settled {
        meter.tick();
    } else {
        search.dfs(&mut meter, None);
    }
    let proved = settled || !meter.exhausted || search.best_cmax <= search.global_lb + EPS;

    let solution = search
        .best
        .as_ref()
        .map(|cells| decode(inst, grid, &BucketAssignment::new(cells.clone())).expect("complete assignment"));
    let cmax = solution.as_ref().map_or(f64::INFINITY, |s| s.makespan(inst));
    BucketResult {
        solution,
        cmax,
        proved_bucket_optimal: proved,
        nodes_explored: meter.nodes,
        elapsed: meter.elapsed(),
        gap_vs_exact: None,
    }
}

#[derive(Clone, Copy)]
struct Tail {
    bucket: usize,
    machine: usize,
    rank: usize,
}

struct Search<'a> {
    inst: &'a Instance,
    grid: &'a BucketGrid,
    order: Vec<usize>,
    /// `twin[rank]`: true when the job at `rank - 1` has the same `(r, p)`.
    twin: Vec<bool>,
    bucket_order: Vec<usize>,
    avail: Vec<f64>,
    used: usize,
    placed: Vec<bool>,
    cells: Vec<JobCell>,
    remaining: f64,
    global_lb: f64,
    best: Option<Vec<JobCell>>,
    best_cmax: f64,
}

impl<'a> Search<'a> {
    fn new(inst: &'a Instance, grid: &'a BucketGrid) -> Self {
        let order = inst.dispatch_order();
        let twin = (0..order.len())
            .map(|k| {
                k > 0 && {
                    let (a, b) = (inst.job(order[k - 1]), inst.job(order[k]));
                    a.r == b.r && a.p == b.p
                }
            })
            .collect();
        let mut bucket_order = grid.exact_buckets();
        bucket_order.extend(grid.approx_buckets());
        Self {
            inst,
            grid,
            order,
            twin,
            bucket_order,
            avail: vec![0.0; inst.machines()],
            used: 0,
            placed: vec![false; inst.n()],
            cells: vec![JobCell::new(0, 0); inst.n()],
            remaining: inst.total_processing(),
            global_lb: lower_bound(inst),
            best: None,
            best_cmax: f64::INFINITY,
        }
    }

    fn offer(&mut self, asn: BucketAssignment) {
        if let Ok(sol) = decode(self.inst, self.grid, &asn) {
            let c = sol.makespan(self.inst);
            if sol.feasible && c < self.best_cmax - EPS {
                self.best_cmax = c;
                self.best = Some(asn.cells);
            }
        }
    }

    /// Greedy dispatch in release order with bucket bumps, plus projections of
    /// list schedules.
    fn seed_incumbent(&mut self) {
        let (inst, grid) = (self.inst, self.grid);
        let mut avail = vec![0.0f64; inst.machines()];
        let mut cells = vec![JobCell::new(0, 0); inst.n()];
        for &j in &self.order {
            let job = inst.job(j);
            let mut pick: Option<(f64, usize, usize)> = None;
            for (m, &a) in avail.iter().enumerate() {
                let mut start = job.r.max(a);
                let mut b = grid.bucket_index(start);
                if grid.overflows(b, j, start) {
                    b += 1;
                    start = grid.bucket_start(b);
                }
                if pick.is_none_or(|(s, _, _)| start + job.p < s - EPS) {
                    pick = Some((start + job.p, m, b));
                }
            }
            let (end, m, b) = pick.expect("at least one machine");
            avail[m] = end;
            cells[j] = JobCell::new(m, b);
        }
        if cells.iter().all(|c| c.bucket < grid.buckets()) {
            self.offer(BucketAssignment::new(cells));
        }

        for sched in [spt_schedule(inst), list_schedule(inst, &self.order)] {
            if let Ok(proj) = project_schedule(inst, grid, &sched) {
                self.offer(proj.solution.assignment);
            }
        }
    }

    /// Bound on any completion of the current partial assignment whose next
    /// placement must come after `tail`.
    fn bound(&self, tail: Tail) -> f64 {
        let inst = self.inst;
        let open_at = self.grid.bucket_start(tail.bucket);
        let closed_at = self.grid.bucket_start(tail.bucket + 1);
        let mut h: Vec<f64> = self
            .avail
            .iter()
            .enumerate()
            .map(|(m, &a)| a.max(if m < tail.machine { closed_at } else { open_at }))
            .collect();
        let max_avail = self.avail.iter().cloned().fold(0.0, f64::max);
        if self.remaining <= EPS {
            return max_avail;
        }
        h.sort_by(f64::total_cmp);
        let min_h = h[0];

        let mut single = 0.0f64;
        for &j in &self.order {
            if !self.placed[j] {
                let job = inst.job(j);
                single = single.max(job.r.max(min_h) + job.p);
            }
        }

        // smallest L with sum_m max(0, L - h_m) >= remaining work
        let mut fill = self.remaining;
        let mut level = h[0];
        for i in 0..h.len() {
            let next = if i + 1 < h.len() { h[i + 1] } else { f64::INFINITY };
            let width = (i + 1) as f64;
            if level + fill / width <= next {
                level += fill / width;
                fill = 0.0;
                break;
            }
            fill -= (next - level) * width;
            level = next;
        }
        debug_assert!(fill <= EPS);

        level.max(max_avail).max(single).max(self.global_lb)
    }

    /// Returns true when the search should stop.
    fn dfs(&mut self, meter: &mut Meter, tail: Option<Tail>) -> bool {
        if !meter.tick() {
            return true;
        }
        if self.placed.iter().all(|&p| p) {
            let cmax = self.avail.iter().cloned().fold(0.0, f64::max);
            if cmax < self.best_cmax - EPS {
                self.best_cmax = cmax;
                self.best = Some(self.cells.clone());
            }
            return self.best_cmax <= self.global_lb + EPS;
        }
        let inst = self.inst;
        let grid = self.grid;
        let n = inst.n();
        let first_bucket = tail.map_or(0, |t| t.bucket);

        for bi in 0..self.bucket_order.len() {
            let b = self.bucket_order[bi];
            if b < first_bucket {
                continue;
            }
            let bucket_start = grid.bucket_start(b);
            let machines = self.used.min(inst.machines() - 1) + 1;
            let first_machine = match tail {
                Some(t) if t.bucket == b => t.machine,
                _ => 0,
            };
            for m in first_machine..machines {
                let first_rank = match tail {
                    Some(t) if t.bucket == b && t.machine == m => t.rank + 1,
                    _ => 0,
                };
                for rank in first_rank..n {
                    let j = self.order[rank];
                    if self.placed[j] || (self.twin[rank] && !self.placed[self.order[rank - 1]]) {
                        continue;
                    }
                    let job = *inst.job(j);
                    let start = job.r.max(bucket_start).max(self.avail[m]);
                    if grid.overflows(b, j, start) || start + job.p >= self.best_cmax - EPS {
                        continue;
                    }

                    let (prev_avail, prev_used) = (self.avail[m], self.used);
                    self.placed[j] = true;
                    self.cells[j] = JobCell::new(m, b);
                    self.avail[m] = start + job.p;
                    self.used = self.used.max(m + 1);
                    self.remaining -= job.p;

                    let here = Tail { bucket: b, machine: m, rank };
                    let stop =
                        if self.bound(here) < self.best_cmax - EPS { self.dfs(meter, Some(here)) } else { false };

                    self.remaining += job.p;
                    self.used = prev_used;
                    self.avail[m] = prev_avail;
                    self.placed[j] = false;
                    if stop {
                        return true;
                    }
                }
            }
        }
        false
    }
}
