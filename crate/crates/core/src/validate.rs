//! Feasibility checking for schedules.

use std::fmt;

use serde::Serialize;

use crate::model::{Instance, Schedule, EPS};

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Violation {
    MissingJob { job: usize },
    DuplicateJob { job: usize },
    UnknownJob { job: usize },
    InvalidMachine { job: usize, machine: usize },
    ReleaseViolation { job: usize, start: f64, release: f64 },
    Overlap { machine: usize, first: usize, second: usize },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::MissingJob { job } => write!(f, "job {job} is not scheduled"),
            Violation::DuplicateJob { job } => write!(f, "job {job} is scheduled more than once"),
            Violation::UnknownJob { job } => write!(f, "job {job} does not exist in the instance"),
            Violation::InvalidMachine { job, machine } => {
                write!(f, "job {job} is assigned to non-existent machine {machine}")
            }
            Violation::ReleaseViolation { job, start, release } => {
                write!(f, "job {job} starts at {start} before its release date {release}")
            }
            Violation::Overlap { machine, first, second } => {
                write!(f, "jobs {first} and {second} overlap on machine {machine}")
            }
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_feasible(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn first(&self) -> Option<&Violation> {
        self.violations.first()
    }
}

/// Lists every way in which `sched` fails to be a feasible schedule for `inst`.
pub fn validate_schedule(inst: &Instance, sched: &Schedule) -> ValidationReport {
    let n = inst.n();
    let mut violations = Vec::new();
    let mut seen = vec![0usize; n];

    for e in &sched.entries {
        if e.job >= n {
            violations.push(Violation::UnknownJob { job: e.job });
            continue;
        }
        seen[e.job] += 1;
        if seen[e.job] == 2 {
            violations.push(Violation::DuplicateJob { job: e.job });
        }
        if e.machine >= inst.machines() {
            violations.push(Violation::InvalidMachine { job: e.job, machine: e.machine });
        }
        let release = inst.job(e.job).r;
        if e.start + EPS < release {
            violations.push(Violation::ReleaseViolation { job: e.job, start: e.start, release });
        }
    }
    for (job, &count) in seen.iter().enumerate() {
        if count == 0 {
            violations.push(Violation::MissingJob { job });
        }
    }

    // Pairwise interval check per machine; duplicates are compared too.
    for machine in 0..inst.machines() {
        let mut on_machine: Vec<_> = sched.entries.iter().filter(|e| e.machine == machine && e.job < n).collect();
        on_machine.sort_by(|a, b| a.start.total_cmp(&b.start).then(a.job.cmp(&b.job)));
        for (i, a) in on_machine.iter().enumerate() {
            let a_end = a.start + inst.job(a.job).p;
            for b in &on_machine[i + 1..] {
                if b.start + EPS >= a_end {
                    break;
                }
                violations.push(Violation::Overlap { machine, first: a.job, second: b.job });
            }
        }
    }

    ValidationReport { violations }
}
