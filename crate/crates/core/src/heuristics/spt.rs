use crate::model::{Instance, Schedule};

/// Shortest-processing-time list scheduling.
///
/// Jobs are taken in ascending `p` (ties by id); each goes to the machine that
/// becomes available first (ties by index) and starts at
/// `max(r_j, availability)`.
pub fn spt_schedule(inst: &Instance) -> Schedule {
    list_schedule(inst, &spt_order(inst))
}

pub fn spt_order(inst: &Instance) -> Vec<usize> {
    let mut order: Vec<usize> = (0..inst.n()).collect();
    order.sort_by(|&a, &b| inst.job(a).p.total_cmp(&inst.job(b).p).then(a.cmp(&b)));
    order
}

/// Dispatches jobs in the given priority order onto the earliest-available machine.
pub fn list_schedule(inst: &Instance, order: &[usize]) -> Schedule {
    let mut avail = vec![0.0f64; inst.machines()];
    let mut assign = vec![(0usize, 0.0f64); inst.n()];
    for &job in order {
        let machine = earliest_machine(&avail);
        let start = inst.job(job).r.max(avail[machine]);
        assign[job] = (machine, start);
        avail[machine] = start + inst.job(job).p;
    }
    Schedule::from_assignments(&assign)
}

/// Makespan of [`list_schedule`] without materializing the schedule.
pub(crate) fn list_makespan(inst: &Instance, order: &[usize], avail: &mut [f64]) -> f64 {
    avail.iter_mut().for_each(|a| *a = 0.0);
    for &job in order {
        let machine = earliest_machine(avail);
        avail[machine] = inst.job(job).r.max(avail[machine]) + inst.job(job).p;
    }
    avail.iter().cloned().fold(0.0, f64::max)
}

fn earliest_machine(avail: &[f64]) -> usize {
    let mut best = 0;
    for (m, &a) in avail.iter().enumerate().skip(1) {
        if a < avail[best] {
            best = m;
        }
    }
    best
}
