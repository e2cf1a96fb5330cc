use serde::Serialize;

use crate::bucket::BucketGrid;
use crate::error::{Error, Result};
use crate::model::{Instance, Schedule};
use crate::validate::validate_schedule;

/// One job's place in bucket space. Offsets are fractions of the bucket width.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct JobCell {
    pub machine: usize,
    pub bucket: usize,
    pub delta1: f64,
    pub delta2: f64,
}

impl JobCell {
    pub fn new(machine: usize, bucket: usize) -> Self {
        Self { machine, bucket, delta1: 0.0, delta2: 0.0 }
    }
}

/// Per-job cells indexed by job id.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BucketAssignment {
    pub cells: Vec<JobCell>,
}

impl BucketAssignment {
    pub fn new(cells: Vec<JobCell>) -> Self {
        Self { cells }
    }

    pub fn buckets(&self) -> Vec<usize> {
        self.cells.iter().map(|c| c.bucket).collect()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BucketSolution {
    pub assignment: BucketAssignment,
    pub schedule: Schedule,
    pub feasible: bool,
    /// Jobs whose start was pushed past the end of their bucket window.
    pub overflow: Vec<usize>,
}

impl BucketSolution {
    pub fn makespan(&self, inst: &Instance) -> f64 {
        self.schedule.makespan(inst)
    }
}

/// Recovers start times from a bucket assignment.
///
/// On each machine jobs run in bucket order, ties broken by earliest release,
/// then shortest processing time, then id. Each start is
/// `max(r_j, b_j * delta, predecessor completion)`.
pub fn decode(inst: &Instance, grid: &BucketGrid, asn: &BucketAssignment) -> Result<BucketSolution> {
    check_complete(inst, asn)?;
    let mut seqs = machine_lists(inst, asn);
    for seq in &mut seqs {
        seq.sort_by(|&a, &b| asn.cells[a].bucket.cmp(&asn.cells[b].bucket).then(inst.job(a).dispatch_cmp(inst.job(b))));
    }
    Ok(decode_sequences(inst, grid, asn, &seqs))
}

fn check_complete(inst: &Instance, asn: &BucketAssignment) -> Result<()> {
    if asn.cells.len() != inst.n() {
        return Err(Error::InvalidInput(format!(
            "assignment covers {} jobs, instance has {}",
            asn.cells.len(),
            inst.n()
        )));
    }
    if let Some((job, c)) = asn.cells.iter().enumerate().find(|(_, c)| c.machine >= inst.machines()) {
        return Err(Error::InvalidInput(format!("job {job} assigned to non-existent machine {}", c.machine)));
    }
    Ok(())
}

fn machine_lists(inst: &Instance, asn: &BucketAssignment) -> Vec<Vec<usize>> {
    let mut seqs = vec![Vec::new(); inst.machines()];
    for (job, cell) in asn.cells.iter().enumerate() {
        seqs[cell.machine].push(job);
    }
    seqs
}

/// Left-shifted timing of fixed per-machine sequences, with bucket windows enforced.
fn decode_sequences(inst: &Instance, grid: &BucketGrid, asn: &BucketAssignment, seqs: &[Vec<usize>]) -> BucketSolution {
    let mut starts = vec![(0usize, 0.0f64); inst.n()];
    let mut cells = asn.cells.clone();
    let mut overflow = Vec::new();
    for (machine, seq) in seqs.iter().enumerate() {
        let mut avail = 0.0f64;
        for &job in seq {
            let b = cells[job].bucket;
            let start = inst.job(job).r.max(grid.bucket_start(b)).max(avail);
            if grid.overflows(b, job, start) {
                overflow.push(job);
            }
            let (d1, d2) = split_offset(grid, job, (start - grid.bucket_start(b)) / grid.delta());
            cells[job].delta1 = d1;
            cells[job].delta2 = d2;
            starts[job] = (machine, start);
            avail = start + inst.job(job).p;
        }
    }
    overflow.sort_unstable();
    BucketSolution {
        assignment: BucketAssignment { cells },
        schedule: Schedule::from_assignments(&starts),
        feasible: overflow.is_empty(),
        overflow,
    }
}

/// Splits an intra-bucket offset into the two cascaded adjustments, each
/// bounded by half of the usable fraction `1 - psi_j`.
pub fn split_offset(grid: &BucketGrid, job: usize, offset: f64) -> (f64, f64) {
    let half = grid.cap_fraction(job) / 2.0;
    let offset = offset.max(0.0);
    let d1 = offset.min(half);
    let d2 = (offset - d1).min(half);
    (d1, d2)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Projection {
    pub solution: BucketSolution,
    /// Decoded makespan minus the input makespan.
    pub makespan_delta: f64,
    /// Per-job `original start - decoded start`; always in `[0, delta)`.
    pub displacement: Vec<f64>,
}

impl Projection {
    pub fn max_displacement(&self) -> f64 {
        self.displacement.iter().cloned().fold(0.0, f64::max)
    }
}

/// Maps a feasible schedule into bucket space and decodes it back, keeping
/// each machine's job order.
pub fn project_schedule(inst: &Instance, grid: &BucketGrid, sched: &Schedule) -> Result<Projection> {
    if let Some(v) = validate_schedule(inst, sched).first() {
        return Err(Error::Infeasible(v.clone()));
    }
    let mut cells = vec![JobCell::new(0, 0); inst.n()];
    for e in &sched.entries {
        let (bucket, offset) = grid.bucket_of(e.start.min(grid.horizon()), e.job)?;
        let (delta1, delta2) = split_offset(grid, e.job, offset);
        cells[e.job] = JobCell { machine: e.machine, bucket, delta1, delta2 };
    }
    let asn = BucketAssignment { cells };
    let seqs = sched.machine_sequences(inst.machines());
    let solution = decode_sequences(inst, grid, &asn, &seqs);

    let mut displacement = vec![0.0; inst.n()];
    for e in &sched.entries {
        displacement[e.job] = e.start - solution.schedule.entries[e.job].start;
    }
    let makespan_delta = solution.makespan(inst) - sched.makespan(inst);
    Ok(Projection { solution, makespan_delta, displacement })
}
