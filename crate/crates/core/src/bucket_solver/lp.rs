//! CPLEX-LP text export of the time-indexed and bucket-indexed models.
//!
//! Variables: `x_j_m_t` (time form) or `x_j_m_b` (bucket form) binaries,
//! `Cmax`, and in the bucket form continuous `S_j` starts and `d_j` offsets.

use std::fmt::Write as _;
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::count::time_slots;
use crate::bucket::BucketGrid;
use crate::error::{Error, Result};
use crate::io::fmt_num;
use crate::model::Instance;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum LpForm {
    Time,
    Bucket,
}

impl std::str::FromStr for LpForm {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "time" => Ok(LpForm::Time),
            "bucket" => Ok(LpForm::Bucket),
            other => Err(Error::Config(format!("unknown model form `{other}` (expected time or bucket)"))),
        }
    }
}

const TERMS_PER_LINE: usize = 8;

struct Row {
    name: String,
    terms: Vec<(f64, String)>,
    sense: &'static str,
    rhs: f64,
}

impl Row {
    fn new(name: String, sense: &'static str, rhs: f64) -> Self {
        Self { name, terms: Vec::new(), sense, rhs }
    }

    fn term(&mut self, coef: f64, var: impl Into<String>) {
        self.terms.push((coef, var.into()));
    }

    fn write(&self, out: &mut String) {
        let _ = write!(out, " {}:", self.name);
        for (k, (coef, var)) in self.terms.iter().enumerate() {
            if k > 0 && k % TERMS_PER_LINE == 0 {
                out.push_str("\n   ");
            }
            write_term(out, *coef, var, k == 0);
        }
        let _ = writeln!(out, " {} {}", self.sense, fmt_num(self.rhs));
    }
}

fn write_term(out: &mut String, coef: f64, var: &str, first: bool) {
    let sign = if coef < 0.0 {
        "-"
    } else if first {
        ""
    } else {
        "+"
    };
    let mag = coef.abs();
    let sep = if sign.is_empty() { "" } else { " " };
    if mag == 1.0 {
        let _ = write!(out, " {sign}{sep}{var}");
    } else {
        let _ = write!(out, " {sign}{sep}{} {var}", fmt_num(mag));
    }
}

struct Model {
    comment: String,
    rows: Vec<Row>,
    bounds: Vec<String>,
    binaries: Vec<String>,
}

impl Model {
    fn render(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "\\ {}", self.comment);
        out.push_str("Minimize\n obj: Cmax\nSubject To\n");
        for row in &self.rows {
            row.write(&mut out);
        }
        out.push_str("Bounds\n");
        for b in &self.bounds {
            let _ = writeln!(out, " {b}");
        }
        out.push_str("Binaries\n");
        for (k, var) in self.binaries.iter().enumerate() {
            out.push(' ');
            out.push_str(var);
            if k % TERMS_PER_LINE == TERMS_PER_LINE - 1 || k + 1 == self.binaries.len() {
                out.push('\n');
            }
        }
        out.push_str("End\n");
        out
    }
}

/// Renders the model as LP text. The bucket form needs a grid.
pub fn export_milp(inst: &Instance, grid: Option<&BucketGrid>, form: LpForm) -> Result<String> {
    let model = match form {
        LpForm::Time => time_model(inst),
        LpForm::Bucket => {
            let grid = grid.ok_or_else(|| Error::Config("the bucket model needs a bucket grid".into()))?;
            bucket_model(inst, grid)
        }
    };
    Ok(model.render())
}

pub fn write_milp(inst: &Instance, grid: Option<&BucketGrid>, form: LpForm, path: impl AsRef<Path>) -> Result<()> {
    let text = export_milp(inst, grid, form)?;
    std::fs::write(path, text)?;
    Ok(())
}

fn time_model(inst: &Instance) -> Model {
    let (n, m) = (inst.n(), inst.machines());
    let slots = time_slots(inst.horizon());
    let x = |j: usize, k: usize, t: usize| format!("x_{j}_{k}_{t}");
    let dur: Vec<usize> = inst.jobs().iter().map(|j| time_slots(j.p) - 1).collect();
    let mut rows = Vec::new();

    for j in 0..n {
        let mut row = Row::new(format!("assign_{j}"), "=", 1.0);
        for k in 0..m {
            for t in 0..slots {
                row.term(1.0, x(j, k, t));
            }
        }
        rows.push(row);
    }
    for j in 0..n {
        let p = inst.job(j).p;
        let mut row = Row::new(format!("mksp_{j}"), ">=", 0.0);
        row.term(1.0, "Cmax");
        for k in 0..m {
            for t in 0..slots {
                row.term(-(t as f64 + p), x(j, k, t));
            }
        }
        rows.push(row);
    }
    for j in 0..n {
        let release = time_slots(inst.job(j).r) - 1;
        if release == 0 {
            continue;
        }
        let mut row = Row::new(format!("release_{j}"), "=", 0.0);
        for k in 0..m {
            for t in 0..release.min(slots) {
                row.term(1.0, x(j, k, t));
            }
        }
        rows.push(row);
    }
    // at most one job in process on machine k at time t
    for k in 0..m {
        for t in 0..slots {
            let mut row = Row::new(format!("cap_{k}_{t}"), "<=", 1.0);
            let mut jobs = 0;
            for (j, &d) in dur.iter().enumerate() {
                let lo = (t + 1).saturating_sub(d.max(1));
                if lo <= t {
                    jobs += 1;
                }
                for s in lo..=t {
                    row.term(1.0, x(j, k, s));
                }
            }
            if jobs >= 2 {
                rows.push(row);
            }
        }
    }

    let binaries = (0..n)
        .flat_map(|j| (0..m).flat_map(move |k| (0..slots).map(move |t| (j, k, t))))
        .map(|(j, k, t)| x(j, k, t))
        .collect();
    Model {
        comment: format!("time-indexed model: n={n} m={m} slots={slots}"),
        rows,
        bounds: vec!["Cmax >= 0".into()],
        binaries,
    }
}

fn bucket_model(inst: &Instance, grid: &BucketGrid) -> Model {
    let (n, m, nb) = (inst.n(), inst.machines(), grid.buckets());
    let delta = grid.delta();
    let x = |j: usize, k: usize, b: usize| format!("x_{j}_{k}_{b}");
    let mut rows = Vec::new();

    for j in 0..n {
        let mut row = Row::new(format!("assign_{j}"), "=", 1.0);
        for k in 0..m {
            for b in 0..nb {
                row.term(1.0, x(j, k, b));
            }
        }
        rows.push(row);
    }
    // S_j = (b_j + d_j) * delta
    for j in 0..n {
        let mut row = Row::new(format!("start_{j}"), "=", 0.0);
        row.term(1.0, format!("S_{j}"));
        row.term(-delta, format!("d_{j}"));
        for k in 0..m {
            for b in 1..nb {
                row.term(-(b as f64) * delta, x(j, k, b));
            }
        }
        rows.push(row);
    }
    for j in 0..n {
        let mut row = Row::new(format!("release_{j}"), ">=", inst.job(j).r);
        row.term(1.0, format!("S_{j}"));
        rows.push(row);
    }
    for j in 0..n {
        let mut row = Row::new(format!("mksp_{j}"), ">=", inst.job(j).p);
        row.term(1.0, "Cmax");
        row.term(-1.0, format!("S_{j}"));
        rows.push(row);
    }
    // occupancy of bucket b by a job started d buckets earlier: clamp(p/delta - d, 0, 1)
    for k in 0..m {
        for b in 0..nb {
            let mut row = Row::new(format!("cap_{k}_{b}"), "<=", 1.0);
            let mut jobs = 0;
            for j in 0..n {
                let span = inst.job(j).p / delta;
                let mut any = false;
                for start in (0..=b).rev() {
                    let w = (span - (b - start) as f64).clamp(0.0, 1.0);
                    if w <= 0.0 {
                        break;
                    }
                    any = true;
                    row.term(w, x(j, k, start));
                }
                if any {
                    jobs += 1;
                }
            }
            if jobs >= 2 {
                rows.push(row);
            }
        }
    }

    let mut bounds = vec!["Cmax >= 0".to_string()];
    for j in 0..n {
        bounds.push(format!("S_{j} >= 0"));
        bounds.push(format!("0 <= d_{j} <= {}", fmt_num(grid.cap_fraction(j))));
    }
    let binaries = (0..n)
        .flat_map(|j| (0..m).flat_map(move |k| (0..nb).map(move |b| (j, k, b))))
        .map(|(j, k, b)| x(j, k, b))
        .collect();
    Model {
        comment: format!("bucket-indexed model: n={n} m={m} B={nb} delta={} kappa={}", fmt_num(delta), grid.kappa()),
        rows,
        bounds,
        binaries,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bucket::{build_grid, GridOptions};
    use crate::model::Job;

    fn inst(jobs: &[(f64, f64)], m: usize) -> Instance {
        Instance::new(jobs.iter().enumerate().map(|(i, &(p, r))| Job::new(i, p, r)).collect(), m).unwrap()
    }

    fn section<'a>(text: &'a str, head: &str, next: &str) -> &'a str {
        let a = text.find(head).unwrap() + head.len();
        let b = text[a..].find(next).unwrap() + a;
        &text[a..b]
    }

    #[test]
    fn single_job_time_model() {
        let i = Instance::with_horizon(vec![Job::new(0, 1.0, 0.0)], 1, 2.0).unwrap();
        let text = export_milp(&i, None, LpForm::Time).unwrap();
        let bins: Vec<&str> = section(&text, "Binaries\n", "End").split_whitespace().collect();
        assert_eq!(bins, ["x_0_0_0", "x_0_0_1", "x_0_0_2"]);
        assert!(text.contains(" assign_0: x_0_0_0 + x_0_0_1 + x_0_0_2 = 1\n"));
        assert!(text.contains(" mksp_0: Cmax - x_0_0_0 - 2 x_0_0_1 - 3 x_0_0_2 >= 0\n"));
        assert!(!text.contains("cap_"));
        assert!(!text.contains("release_"));
    }

    #[test]
    fn release_rows_block_early_slots() {
        let i = inst(&[(1.0, 2.0), (2.0, 0.0)], 1);
        let text = export_milp(&i, None, LpForm::Time).unwrap();
        assert!(text.contains(" release_0: x_0_0_0 + x_0_0_1 = 0\n"));
        assert!(!text.contains("release_1"));
        // job 1 occupies two slots
        assert!(text.contains(" cap_0_1: x_0_0_1 + x_1_0_0 + x_1_0_1 <= 1\n"));
    }

    #[test]
    fn single_bucket_model() {
        let i = inst(&[(3.0, 0.0), (2.0, 1.0)], 2);
        let g =
            build_grid(&i, &GridOptions { allow_coarse: true, ..GridOptions::default().with_delta(100.0) }).unwrap();
        assert_eq!(g.buckets(), 1);
        let text = export_milp(&i, Some(&g), LpForm::Bucket).unwrap();
        let bins: Vec<&str> = section(&text, "Binaries\n", "End").split_whitespace().collect();
        assert_eq!(bins.len(), 4);
        assert!(text.contains(" start_0: S_0 - 100 d_0 = 0\n"));
        assert!(text.contains(" release_1: S_1 >= 1\n"));
        assert!(text.contains(" cap_0_0: 0.03 x_0_0_0 + 0.02 x_1_0_0 <= 1\n"));
    }

    #[test]
    fn bucket_form_needs_grid() {
        let i = inst(&[(1.0, 0.0)], 1);
        assert!(export_milp(&i, None, LpForm::Bucket).is_err());
    }

    #[test]
    fn long_rows_wrap() {
        let i = Instance::with_horizon(vec![Job::new(0, 1.0, 0.0)], 1, 20.0).unwrap();
        let text = export_milp(&i, None, LpForm::Time).unwrap();
        assert!(text.lines().all(|l| l.len() < 255));
        assert!(text.contains("\n    + x_0_0_8"));
    }

    #[test]
    fn export_is_deterministic() {
        let i = inst(&[(3.0, 0.0), (5.0, 2.0), (2.0, 4.0)], 2);
        let g = build_grid(&i, &GridOptions::default()).unwrap();
        for form in [LpForm::Time, LpForm::Bucket] {
            assert_eq!(export_milp(&i, Some(&g), form).unwrap(), export_milp(&i, Some(&g), form).unwrap());
        }
    }
}
