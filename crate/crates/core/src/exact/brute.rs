use std::time::Instant;

use super::{lower_bound, sequence_completion, ExactResult};
use crate::error::{Error, Result};
use crate::model::{Instance, Schedule};

pub const BRUTE_FORCE_MAX_N: usize = 10;

pub fn brute_force(inst: &Instance) -> Result<ExactResult> {
    brute_force_with_guard(inst, BRUTE_FORCE_MAX_N)
}

/// Enumerates every machine assignment and every processing order on each
/// machine. With release dates only, starting each job as early as its
/// predecessor and release allow is optimal for a fixed assignment and order,
/// so the enumeration covers the whole solution space.
///
/// Machines are independent once the assignment is fixed, so the best order of
/// each job subset is enumerated once and reused.
pub fn brute_force_with_guard(inst: &Instance, max_n: usize) -> Result<ExactResult> {
    let n = inst.n();
    if n > max_n {
        return Err(Error::Refused(format!("enumeration oracle is limited to {max_n} jobs, instance has {n}")));
    }
    let started = Instant::now();
    let m = inst.machines();

    let mut best_order: Vec<Option<(f64, Vec<usize>)>> = vec![None; 1 << n];
    let mut subset_best = |mask: usize| -> f64 {
        if let Some((c, _)) = &best_order[mask] {
            return *c;
        }
        let mut jobs: Vec<usize> = (0..n).filter(|&j| mask & (1 << j) != 0).collect();
        let mut best = (f64::INFINITY, Vec::new());
        for_each_permutation(&mut jobs, &mut |perm| {
            let c = sequence_completion(inst, perm);
            if c < best.0 {
                best = (c, perm.to_vec());
            }
        });
        if mask == 0 {
            best.0 = 0.0;
        }
        let c = best.0;
        best_order[mask] = Some(best);
        c
    };

    let mut assign = vec![0usize; n];
    let mut best: Option<(f64, Vec<usize>)> = None;
    let mut evaluated = 0u64;
    loop {
        let mut masks = vec![0usize; m];
        for (job, &machine) in assign.iter().enumerate() {
            masks[machine] |= 1 << job;
        }
        let cmax = masks.iter().map(|&mask| subset_best(mask)).fold(0.0, f64::max);
        evaluated += 1;
        if best.as_ref().is_none_or(|(c, _)| cmax < *c) {
            best = Some((cmax, assign.clone()));
        }
        // odometer over m^n assignments
        let mut pos = 0;
        while pos < n {
            assign[pos] += 1;
            if assign[pos] < m {
                break;
            }
            assign[pos] = 0;
            pos += 1;
        }
        if pos == n {
            break;
        }
    }

    let (cmax, assign) = best.expect("at least one assignment");
    let mut masks = vec![0usize; m];
    for (job, &machine) in assign.iter().enumerate() {
        masks[machine] |= 1 << job;
    }
    let mut starts = vec![(0usize, 0.0f64); n];
    for (machine, &mask) in masks.iter().enumerate() {
        let order = &best_order[mask].as_ref().expect("evaluated").1;
        let mut t = 0.0f64;
        for &j in order {
            let s = t.max(inst.job(j).r);
            starts[j] = (machine, s);
            t = s + inst.job(j).p;
        }
    }

    Ok(ExactResult {
        schedule: Schedule::from_assignments(&starts),
        cmax,
        proved_optimal: true,
        nodes_explored: evaluated,
        elapsed: started.elapsed().as_secs_f64(),
        lower_bound_at_root: lower_bound(inst),
    })
}

/// Heap's algorithm.
fn for_each_permutation(items: &mut [usize], visit: &mut dyn FnMut(&[usize])) {
    fn heap(k: usize, items: &mut [usize], visit: &mut dyn FnMut(&[usize])) {
        if k <= 1 {
            visit(items);
            return;
        }
        heap(k - 1, items, visit);
        for i in 0..k - 1 {
            if k.is_multiple_of(2) {
                items.swap(i, k - 1);
            } else {
                items.swap(0, k - 1);
            }
            heap(k - 1, items, visit);
        }
    }
    let k = items.len();
    heap(k, items, visit);
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::Job;
    use crate::validate::validate_schedule;

    fn inst(jobs: &[(f64, f64)], m: usize) -> Instance {
        Instance::new(jobs.iter().enumerate().map(|(i, &(p, r))| Job::new(i, p, r)).collect(), m).unwrap()
    }

    #[test]
    fn permutations_are_complete() {
        let mut items = vec![0, 1, 2, 3];
        let mut seen = std::collections::BTreeSet::new();
        for_each_permutation(&mut items, &mut |p| {
            seen.insert(p.to_vec());
        });
        assert_eq!(seen.len(), 24);
    }

    #[test]
    fn six_job_partition() {
        let six: Vec<(f64, f64)> = [7.0, 6.0, 8.0, 5.0, 4.0, 5.0].iter().map(|&p| (p, 0.0)).collect();
        let i = inst(&six, 2);
        let res = brute_force(&i).unwrap();
        assert_eq!(res.cmax, 18.0);
        assert!(res.proved_optimal);
        assert!(validate_schedule(&i, &res.schedule).is_feasible());
        assert_eq!(res.schedule.makespan(&i), 18.0);
    }

    #[test]
    fn single_job() {
        let res = brute_force(&inst(&[(5.0, 10.0)], 2)).unwrap();
        assert_eq!(res.cmax, 15.0);
    }

    #[test]
    fn enough_machines_gives_max_p() {
        let res = brute_force(&inst(&[(3.0, 0.0), (9.0, 0.0), (4.0, 0.0)], 4)).unwrap();
        assert_eq!(res.cmax, 9.0);
    }

    #[test]
    fn release_example_optimum() {
        // J1(3,0), J2(5,0), J3(2,4): {J1, J3} on one machine finishes at 6
        let res = brute_force(&inst(&[(3.0, 0.0), (5.0, 0.0), (2.0, 4.0)], 2)).unwrap();
        assert_eq!(res.cmax, 6.0);
    }

    #[test]
    fn guard_refuses_large_instances() {
        let jobs: Vec<(f64, f64)> = (0..11).map(|_| (1.0, 0.0)).collect();
        assert!(matches!(brute_force(&inst(&jobs, 2)), Err(Error::Refused(_))));
        assert!(brute_force_with_guard(&inst(&jobs[..3], 2), 2).is_err());
    }
}
