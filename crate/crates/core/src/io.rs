//! Instance JSON files and schedule CSV files.
//!
//! Instance: `{"n": .., "m": .., "T": .., "jobs": [{"id": .., "p": .., "r": ..}, ..]}`.
//! Schedule: CSV with header `job,machine,bucket,start,end`; the bucket column
//! is empty for solutions that carry no bucket index.

use std::fmt::Write as _;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{Instance, Job, Schedule, ScheduleEntry};

/// Rounds to the six fractional digits stored in files.
pub fn round6(x: f64) -> f64 {
    let r = (x * 1e6).round() / 1e6;
    if r == 0.0 {
        0.0
    } else {
        r
    }
}

/// Time value with at least one and at most six fractional digits (`78.0`, `84.6`).
pub fn fmt_time(x: f64) -> String {
    let x = round6(x);
    if x.fract() == 0.0 {
        format!("{x:.1}")
    } else {
        trim_zeros(format!("{x:.6}"))
    }
}

/// Number with no trailing zeros, integers without a decimal point.
pub fn fmt_num(x: f64) -> String {
    let x = round6(x);
    if x.fract() == 0.0 {
        format!("{x:.0}")
    } else {
        trim_zeros(format!("{x:.6}"))
    }
}

fn trim_zeros(s: String) -> String {
    s.trim_end_matches('0').trim_end_matches('.').to_string()
}

#[derive(Serialize, Deserialize)]
struct InstanceFile {
    n: usize,
    m: usize,
    #[serde(rename = "T")]
    horizon: f64,
    jobs: Vec<JobRecord>,
}

#[derive(Serialize, Deserialize)]
struct JobRecord {
    id: usize,
    p: f64,
    r: f64,
}

pub fn instance_to_json(inst: &Instance) -> String {
    let file = InstanceFile {
        n: inst.n(),
        m: inst.machines(),
        horizon: round6(inst.horizon()),
        jobs: inst.jobs().iter().map(|j| JobRecord { id: j.id, p: round6(j.p), r: round6(j.r) }).collect(),
    };
    let mut s = serde_json::to_string_pretty(&file).expect("instance serializes");
    s.push('\n');
    s
}

pub fn instance_from_json(text: &str, context: &str) -> Result<Instance> {
    let file: InstanceFile = serde_json::from_str(text)
        .map_err(|e| Error::Parse { context: context.to_string(), message: e.to_string() })?;
    if file.n != file.jobs.len() {
        return Err(Error::Parse {
            context: context.to_string(),
            message: format!("n = {} but {} jobs are listed", file.n, file.jobs.len()),
        });
    }
    let mut jobs: Vec<Job> = file.jobs.iter().map(|j| Job::new(j.id, j.p, j.r)).collect();
    jobs.sort_by_key(|j| j.id);
    Instance::with_horizon(jobs, file.m, file.horizon)
}

pub fn write_instance(inst: &Instance, path: impl AsRef<Path>) -> Result<()> {
    std::fs::write(path, instance_to_json(inst))?;
    Ok(())
}

pub fn read_instance(path: impl AsRef<Path>) -> Result<Instance> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path)?;
    instance_from_json(&text, &path.display().to_string())
}

pub const SCHEDULE_HEADER: &str = "job,machine,bucket,start,end";

/// Renders a schedule as CSV, one row per job in id order.
pub fn schedule_to_csv(inst: &Instance, sched: &Schedule, buckets: Option<&[usize]>) -> String {
    let mut out = String::new();
    out.push_str(SCHEDULE_HEADER);
    out.push('\n');
    let mut entries: Vec<&ScheduleEntry> = sched.entries.iter().collect();
    entries.sort_by_key(|e| e.job);
    for e in entries {
        let bucket = buckets.and_then(|b| b.get(e.job)).map(|b| b.to_string()).unwrap_or_default();
        let end = e.start + inst.job(e.job).p;
        let _ = writeln!(out, "{},{},{},{},{}", e.job, e.machine, bucket, fmt_time(e.start), fmt_time(end));
    }
    out
}

/// Parses schedule CSV; returns the schedule and, when every row carries one,
/// the per-job bucket indices.
pub fn schedule_from_csv(text: &str, context: &str) -> Result<(Schedule, Option<Vec<usize>>)> {
    let perr = |line: usize, message: String| Error::Parse { context: format!("{context}:{line}"), message };
    let mut lines = text.lines().enumerate();
    match lines.next() {
        Some((_, header)) if header.trim() == SCHEDULE_HEADER => {}
        Some((_, header)) => {
            return Err(perr(1, format!("expected header '{SCHEDULE_HEADER}', found '{header}'")));
        }
        None => return Err(perr(1, "empty file".into())),
    }

    let mut entries = Vec::new();
    let mut buckets: Vec<(usize, Option<usize>)> = Vec::new();
    for (idx, line) in lines {
        let lineno = idx + 1;
        if line.trim().is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split(',').map(str::trim).collect();
        if fields.len() != 5 {
            return Err(perr(lineno, format!("expected 5 fields, found {}", fields.len())));
        }
        let int =
            |i: usize, name: &str| fields[i].parse::<usize>().map_err(|e| perr(lineno, format!("field '{name}': {e}")));
        let real =
            |i: usize, name: &str| fields[i].parse::<f64>().map_err(|e| perr(lineno, format!("field '{name}': {e}")));
        let job = int(0, "job")?;
        let machine = int(1, "machine")?;
        let bucket = if fields[2].is_empty() { None } else { Some(int(2, "bucket")?) };
        let start = real(3, "start")?;
        real(4, "end")?;
        entries.push(ScheduleEntry { job, machine, start });
        buckets.push((job, bucket));
    }

    let buckets = if !buckets.is_empty() && buckets.iter().all(|(_, b)| b.is_some()) {
        buckets.sort_by_key(|(j, _)| *j);
        Some(buckets.into_iter().map(|(_, b)| b.unwrap()).collect())
    } else {
        None
    };
    Ok((Schedule::new(entries), buckets))
}

pub fn write_schedule(
    inst: &Instance,
    sched: &Schedule,
    buckets: Option<&[usize]>,
    path: impl AsRef<Path>,
) -> Result<()> {
    std::fs::write(path, schedule_to_csv(inst, sched, buckets))?;
    Ok(())
}

pub fn read_schedule(path: impl AsRef<Path>) -> Result<(Schedule, Option<Vec<usize>>)> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path)?;
    schedule_from_csv(&text, &path.display().to_string())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn time_formatting() {
        assert_eq!(fmt_time(0.0), "0.0");
        assert_eq!(fmt_time(78.0), "78.0");
        assert_eq!(fmt_time(84.6), "84.6");
        assert_eq!(fmt_time(1.0 / 3.0), "0.333333");
        assert_eq!(fmt_num(3.0), "3");
        assert_eq!(fmt_num(2.5), "2.5");
        assert_eq!(fmt_num(-0.0000001), "0");
    }

    #[test]
    fn table_two_row_layout() {
        let inst = Instance::new(vec![Job::new(0, 78.0, 0.0)], 2).unwrap();
        let sched = Schedule::from_assignments(&[(1, 0.0)]);
        let csv = schedule_to_csv(&inst, &sched, Some(&[0]));
        assert_eq!(csv, "job,machine,bucket,start,end\n0,1,0,0.0,78.0\n");
        let plain = schedule_to_csv(&inst, &sched, None);
        assert_eq!(plain, "job,machine,bucket,start,end\n0,1,,0.0,78.0\n");
    }

    #[test]
    fn missing_field_names_it() {
        let text = r#"{"n":1,"m":1,"T":5,"jobs":[{"id":0,"r":0}]}"#;
        let err = instance_from_json(text, "test").unwrap_err();
        assert!(matches!(err, Error::Parse { .. }));
        assert!(err.to_string().contains("`p`"), "{err}");
    }

    #[test]
    fn negative_release_is_rejected() {
        let text = r#"{"n":1,"m":1,"T":5,"jobs":[{"id":0,"p":5,"r":-1}]}"#;
        let err = instance_from_json(text, "test").unwrap_err();
        assert!(matches!(err, Error::InvalidInput(_)), "{err}");
        assert!(err.to_string().contains("r must be non-negative"));
    }

    #[test]
    fn count_mismatch_is_a_parse_error() {
        let text = r#"{"n":2,"m":1,"T":5,"jobs":[{"id":0,"p":5,"r":0}]}"#;
        assert!(matches!(instance_from_json(text, "t"), Err(Error::Parse { .. })));
    }

    #[test]
    fn bad_csv_reports_line_and_field() {
        let text = "job,machine,bucket,start,end\n0,0,,0.0,1.0\n1,x,,1.0,2.0\n";
        let err = schedule_from_csv(text, "s.csv").unwrap_err().to_string();
        assert!(err.contains("s.csv:3") && err.contains("machine"), "{err}");
    }
}
