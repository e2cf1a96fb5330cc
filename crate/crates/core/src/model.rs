//! Problem and solution data model for `Pm|r_j|C_max`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Absolute tolerance for comparing time values.
pub const EPS: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Job {
    pub id: usize,
    /// Processing time.
    pub p: f64,
    /// Release date.
    pub r: f64,
}

impl Job {
    pub fn new(id: usize, p: f64, r: f64) -> Self {
        Self { id, p, r }
    }

    /// Dispatch key used whenever jobs compete for the same slot:
    /// earliest release, then shortest processing time, then lowest id.
    pub(crate) fn dispatch_cmp(&self, other: &Job) -> std::cmp::Ordering {
        self.r.total_cmp(&other.r).then(self.p.total_cmp(&other.p)).then(self.id.cmp(&other.id))
    }
}

/// A set of jobs to be processed on `machines` identical machines.
#[derive(Debug, Clone, PartialEq)]
pub struct Instance {
    jobs: Vec<Job>,
    machines: usize,
    horizon: f64,
}

impl Instance {
    /// Builds an instance with the default horizon `max r + sum p`.
    pub fn new(jobs: Vec<Job>, machines: usize) -> Result<Self> {
        let horizon = default_horizon(&jobs);
        Self::with_horizon(jobs, machines, horizon)
    }

    pub fn with_horizon(jobs: Vec<Job>, machines: usize, horizon: f64) -> Result<Self> {
        if jobs.is_empty() {
            return Err(Error::InvalidInput("instance needs at least one job".into()));
        }
        if machines == 0 {
            return Err(Error::InvalidInput("instance needs at least one machine".into()));
        }
        for (idx, job) in jobs.iter().enumerate() {
            if job.id != idx {
                return Err(Error::InvalidInput(format!(
                    "job ids must be 0..n-1 in order, found id {} at position {idx}",
                    job.id
                )));
            }
            if !(job.p.is_finite() && job.p > 0.0) {
                return Err(Error::InvalidInput(format!(
                    "job {}: processing time p must be positive, got {}",
                    job.id, job.p
                )));
            }
            if !(job.r.is_finite() && job.r >= 0.0) {
                return Err(Error::InvalidInput(format!(
                    "job {}: release date r must be non-negative, got {}",
                    job.id, job.r
                )));
            }
        }
        if !(horizon.is_finite() && horizon > 0.0) {
            return Err(Error::InvalidInput(format!("horizon T must be positive, got {horizon}")));
        }
        let needed = jobs.iter().map(|j| j.r + j.p).fold(0.0, f64::max);
        if horizon + EPS < needed {
            return Err(Error::InvalidInput(format!(
                "horizon T = {horizon} is shorter than the latest release-plus-processing time {needed}"
            )));
        }
        Ok(Self { jobs, machines, horizon })
    }

    pub fn jobs(&self) -> &[Job] {
        &self.jobs
    }

    pub fn job(&self, id: usize) -> &Job {
        &self.jobs[id]
    }

    pub fn n(&self) -> usize {
        self.jobs.len()
    }

    pub fn machines(&self) -> usize {
        self.machines
    }

    pub fn horizon(&self) -> f64 {
        self.horizon
    }

    pub fn total_processing(&self) -> f64 {
        self.jobs.iter().map(|j| j.p).sum()
    }

    pub fn max_p(&self) -> f64 {
        self.jobs.iter().map(|j| j.p).fold(f64::MIN, f64::max)
    }

    pub fn min_p(&self) -> f64 {
        self.jobs.iter().map(|j| j.p).fold(f64::MAX, f64::min)
    }

    pub fn max_r(&self) -> f64 {
        self.jobs.iter().map(|j| j.r).fold(0.0, f64::max)
    }

    /// Job ids sorted by the dispatch key (release, processing time, id).
    pub fn dispatch_order(&self) -> Vec<usize> {
        let mut order: Vec<usize> = (0..self.n()).collect();
        order.sort_by(|&a, &b| self.jobs[a].dispatch_cmp(&self.jobs[b]));
        order
    }

    /// The same jobs on a different number of machines.
    pub fn with_machines(&self, machines: usize) -> Result<Self> {
        Self::with_horizon(self.jobs.clone(), machines, self.horizon)
    }
}

pub fn default_horizon(jobs: &[Job]) -> f64 {
    let max_r = jobs.iter().map(|j| j.r).fold(0.0, f64::max);
    max_r + jobs.iter().map(|j| j.p).sum::<f64>()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScheduleEntry {
    pub job: usize,
    pub machine: usize,
    pub start: f64,
}

/// A machine and start time for every job.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct Schedule {
    pub entries: Vec<ScheduleEntry>,
}

impl Schedule {
    pub fn new(mut entries: Vec<ScheduleEntry>) -> Self {
        entries.sort_by(|a, b| a.job.cmp(&b.job).then(a.start.total_cmp(&b.start)));
        Self { entries }
    }

    /// Builds a schedule from per-job `(machine, start)` pairs indexed by job id.
    pub fn from_assignments(assign: &[(usize, f64)]) -> Self {
        Self {
            entries: assign
                .iter()
                .enumerate()
                .map(|(job, &(machine, start))| ScheduleEntry { job, machine, start })
                .collect(),
        }
    }

    pub fn entry(&self, job: usize) -> Option<&ScheduleEntry> {
        self.entries.iter().find(|e| e.job == job)
    }

    /// `max_j (S_j + p_j)`; jobs unknown to the instance are ignored.
    pub fn makespan(&self, inst: &Instance) -> f64 {
        self.entries.iter().filter(|e| e.job < inst.n()).map(|e| e.start + inst.job(e.job).p).fold(0.0, f64::max)
    }

    /// Job ids per machine, each list sorted by start time.
    pub fn machine_sequences(&self, machines: usize) -> Vec<Vec<usize>> {
        let mut seqs = vec![Vec::new(); machines];
        let mut sorted: Vec<&ScheduleEntry> = self.entries.iter().collect();
        sorted.sort_by(|a, b| a.start.total_cmp(&b.start).then(a.job.cmp(&b.job)));
        for e in sorted {
            if e.machine < machines {
                seqs[e.machine].push(e.job);
            }
        }
        seqs
    }
}
