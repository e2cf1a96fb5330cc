use super::{lower_bound, ExactResult};
use crate::budget::{Budget, Meter};
use crate::heuristics::list_schedule;
use crate::model::{Instance, Schedule, EPS};

/// Depth-first branch and bound over list orders.
///
/// Each level picks the next job for the machine that frees up first (lowest
/// index on ties). Every optimal schedule is reproduced by list scheduling its
/// jobs in start-time order, so this space contains an optimum. A job is skipped
/// when another unscheduled job could be completed on that machine before it
/// would even start, and only the lowest-id job of each identical `(r, p)` group
/// is tried.
pub fn solve_exact(inst: &Instance, budget: Budget) -> ExactResult {
    let mut meter = Meter::new(budget);
    let root_lb = lower_bound(inst);

    let mut search = Search::new(inst, root_lb);
    let exhausted = if search.best_cmax <= root_lb + EPS {
        meter.tick();
        false
    } else {
        search.dfs(&mut meter);
        meter.exhausted
    };

    let proved = !exhausted || search.best_cmax <= root_lb + EPS;
    ExactResult {
        schedule: search.best.clone(),
        cmax: search.best_cmax,
        proved_optimal: proved,
        nodes_explored: meter.nodes,
        elapsed: meter.elapsed(),
        lower_bound_at_root: root_lb,
    }
}

struct Search<'a> {
    inst: &'a Instance,
    order: Vec<usize>,
    avail: Vec<f64>,
    placed: Vec<bool>,
    assign: Vec<(usize, f64)>,
    remaining: f64,
    root_lb: f64,
    best: Schedule,
    best_cmax: f64,
}

impl<'a> Search<'a> {
    fn new(inst: &'a Instance, root_lb: f64) -> Self {
        let order = inst.dispatch_order();
        let mut spt: Vec<usize> = (0..inst.n()).collect();
        spt.sort_by(|&a, &b| inst.job(a).p.total_cmp(&inst.job(b).p).then(a.cmp(&b)));
        let mut lpt = spt.clone();
        lpt.reverse();
        let (best, best_cmax) = [spt, order.clone(), lpt]
            .iter()
            .map(|o| {
                let s = list_schedule(inst, o);
                let c = s.makespan(inst);
                (s, c)
            })
            .fold(None::<(Schedule, f64)>, |acc, cand| match acc {
                Some(a) if a.1 <= cand.1 => Some(a),
                _ => Some(cand),
            })
            .expect("three candidates");
        Self {
            inst,
            order,
            avail: vec![0.0; inst.machines()],
            placed: vec![false; inst.n()],
            assign: vec![(0, 0.0); inst.n()],
            remaining: inst.total_processing(),
            root_lb,
            best,
            best_cmax,
        }
    }

    fn earliest_machine(&self) -> usize {
        let mut best = 0;
        for (k, &a) in self.avail.iter().enumerate().skip(1) {
            if a < self.avail[best] {
                best = k;
            }
        }
        best
    }

    /// Returns true when the search may stop (budget spent or root bound reached).
    fn dfs(&mut self, meter: &mut Meter) -> bool {
        if !meter.tick() {
            return true;
        }
        let inst = self.inst;
        let machine = self.earliest_machine();
        let a = self.avail[machine];

        let mut open = 0usize;
        let mut sum_avail = 0.0;
        let mut max_avail = 0.0f64;
        for &x in &self.avail {
            sum_avail += x;
            max_avail = max_avail.max(x);
        }
        let mut first_finish = f64::INFINITY;
        for &j in &self.order {
            if !self.placed[j] {
                open += 1;
                let job = inst.job(j);
                first_finish = first_finish.min(job.r.max(a) + job.p);
            }
        }
        if open == 0 {
            if max_avail < self.best_cmax - EPS {
                self.best_cmax = max_avail;
                self.best = Schedule::from_assignments(&self.assign);
            }
            return self.best_cmax <= self.root_lb + EPS;
        }
        let bound = max_avail.max((sum_avail + self.remaining) / self.avail.len() as f64).max(first_finish);
        if bound >= self.best_cmax - EPS {
            return false;
        }

        let mut prev: Option<(f64, f64)> = None;
        for idx in 0..self.order.len() {
            let j = self.order[idx];
            if self.placed[j] {
                continue;
            }
            let job = *inst.job(j);
            if prev == Some((job.r, job.p)) {
                continue;
            }
            prev = Some((job.r, job.p));
            let start = job.r.max(a);
            if start >= first_finish {
                continue;
            }

            self.placed[j] = true;
            self.assign[j] = (machine, start);
            self.avail[machine] = start + job.p;
            self.remaining -= job.p;
            let stop = self.dfs(meter);
            self.remaining += job.p;
            self.avail[machine] = a;
            self.placed[j] = false;
            if stop {
                return true;
            }
            if self.best_cmax <= bound + EPS {
                break;
            }
        }
        false
    }
}
