//! Exact optimization: lower bounds, an enumeration oracle for tiny
//! instances, and a depth-first branch-and-bound solver.

mod bnb;
mod brute;

use serde::Serialize;

pub use bnb::solve_exact;
pub use brute::{brute_force, brute_force_with_guard, BRUTE_FORCE_MAX_N};

use crate::model::{Instance, Schedule};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExactResult {
    pub schedule: Schedule,
    pub cmax: f64,
    pub proved_optimal: bool,
    pub nodes_explored: u64,
    /// Seconds.
    pub elapsed: f64,
    pub lower_bound_at_root: f64,
}

/// `max(sum p / m, max_j (r_j + p_j))`.
pub fn lower_bound(inst: &Instance) -> f64 {
    let load = inst.total_processing() / inst.machines() as f64;
    let latest = inst.jobs().iter().map(|j| j.r + j.p).fold(0.0, f64::max);
    load.max(latest)
}

/// Makespan of one machine processing `seq` in order, each job as early as possible.
pub(crate) fn sequence_completion(inst: &Instance, seq: &[usize]) -> f64 {
    seq.iter().fold(0.0, |t, &j| t.max(inst.job(j).r) + inst.job(j).p)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::Job;

    fn inst(jobs: &[(f64, f64)], m: usize) -> Instance {
        Instance::new(jobs.iter().enumerate().map(|(i, &(p, r))| Job::new(i, p, r)).collect(), m).unwrap()
    }

    #[test]
    fn lower_bound_examples() {
        let six: Vec<(f64, f64)> = [7.0, 6.0, 8.0, 5.0, 4.0, 5.0].iter().map(|&p| (p, 0.0)).collect();
        assert_eq!(lower_bound(&inst(&six, 2)), 17.5);
        assert_eq!(lower_bound(&inst(&[(5.0, 10.0)], 1)), 15.0);
        assert_eq!(lower_bound(&inst(&[(3.0, 0.0), (9.0, 0.0), (4.0, 0.0)], 3)), 9.0);
    }

    #[test]
    fn sequence_completion_waits_for_release() {
        let i = inst(&[(2.0, 0.0), (1.0, 5.0)], 1);
        assert_eq!(sequence_completion(&i, &[0, 1]), 6.0);
        assert_eq!(sequence_completion(&i, &[1, 0]), 8.0);
    }
}
