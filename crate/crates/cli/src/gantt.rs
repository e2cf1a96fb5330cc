//! Static SVG Gantt chart: one bar per job, dashed lines at release dates,
//! thin solid lines at bucket boundaries.

use std::fmt::Write as _;

use bucketsched::io::fmt_num;
use bucketsched::{BucketGrid, Instance, Schedule};

const LEFT: f64 = 60.0;
const TOP: f64 = 30.0;
const PLOT_WIDTH: f64 = 900.0;
const ROW: f64 = 32.0;
const BAR: f64 = 22.0;
const AXIS: f64 = 30.0;

fn px(x: f64) -> String {
    format!("{:.2}", x)
}

pub fn render_gantt(inst: &Instance, sched: &Schedule, grid: Option<&BucketGrid>) -> String {
    let m = inst.machines();
    let cmax = sched.makespan(inst);
    let span = cmax.max(inst.max_r()).max(1e-9);
    let scale = PLOT_WIDTH / span;
    let x_of = |t: f64| LEFT + t * scale;
    let height = TOP + m as f64 * ROW + AXIS;
    let width = LEFT + PLOT_WIDTH + 20.0;

    let mut svg = String::new();
    let _ = writeln!(
        svg,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{}" height="{}" viewBox="0 0 {} {}">"#,
        px(width),
        px(height),
        px(width),
        px(height)
    );
    svg.push_str(
        "<style>\n\
         text { font-family: monospace; font-size: 11px; }\n\
         .job { stroke: #333; stroke-width: 0.5; }\n\
         .release { stroke: #c0392b; stroke-width: 1; stroke-dasharray: 4 3; }\n\
         .bucket { stroke: #bbb; stroke-width: 0.5; }\n\
         </style>\n",
    );
    let _ = writeln!(svg, r#"<text x="{}" y="18">C_max = {}</text>"#, px(LEFT), fmt_num(cmax));

    let bottom = TOP + m as f64 * ROW;
    if let Some(g) = grid {
        for b in 1..g.buckets() {
            let t = g.bucket_start(b);
            if t > span {
                break;
            }
            let x = px(x_of(t));
            let _ = writeln!(svg, r#"<line class="bucket" x1="{x}" y1="{}" x2="{x}" y2="{}"/>"#, px(TOP), px(bottom));
        }
    }

    for k in 0..m {
        let y = TOP + k as f64 * ROW + (ROW - BAR) / 2.0;
        let _ = writeln!(svg, r#"<text x="8" y="{}">M{k}</text>"#, px(y + BAR / 2.0 + 4.0));
    }
    for e in &sched.entries {
        let job = inst.job(e.job);
        let x = x_of(e.start);
        let w = job.p * scale;
        let y = TOP + e.machine as f64 * ROW + (ROW - BAR) / 2.0;
        let hue = (e.job * 137) % 360;
        let _ = writeln!(
            svg,
            r#"<rect class="job" x="{}" y="{}" width="{}" height="{}" fill="hsl({hue},60%,70%)"><title>J{} p={} r={} start={}</title></rect>"#,
            px(x),
            px(y),
            px(w),
            px(BAR),
            e.job,
            fmt_num(job.p),
            fmt_num(job.r),
            fmt_num(e.start)
        );
        if w >= 18.0 {
            let _ = writeln!(svg, r#"<text x="{}" y="{}">J{}</text>"#, px(x + 3.0), px(y + BAR / 2.0 + 4.0), e.job);
        }
    }

    let mut releases: Vec<f64> = inst.jobs().iter().map(|j| j.r).collect();
    releases.sort_by(f64::total_cmp);
    releases.dedup();
    for r in releases {
        let x = px(x_of(r));
        let _ = writeln!(
            svg,
            r#"<line class="release" x1="{x}" y1="{}" x2="{x}" y2="{}"><title>r = {}</title></line>"#,
            px(TOP - 4.0),
            px(bottom),
            fmt_num(r)
        );
    }

    let _ = writeln!(
        svg,
        r#"<line x1="{}" y1="{}" x2="{}" y2="{}" stroke="black"/>"#,
        px(LEFT),
        px(bottom),
        px(LEFT + PLOT_WIDTH),
        px(bottom)
    );
    for k in 0..=4 {
        let t = span * k as f64 / 4.0;
        let _ = writeln!(svg, r#"<text x="{}" y="{}">{}</text>"#, px(x_of(t) - 6.0), px(bottom + 16.0), fmt_num(t));
    }
    svg.push_str("</svg>\n");
    svg
}

#[cfg(test)]
mod tests {
    use super::*;
    use bucketsched::{build_grid, spt_schedule, GridOptions, Job};

    #[test]
    fn one_bar_per_job_and_one_dash_per_release() {
        let inst = Instance::new(
            vec![Job::new(0, 3.0, 0.0), Job::new(1, 5.0, 0.0), Job::new(2, 2.0, 4.0), Job::new(3, 1.0, 4.0)],
            2,
        )
        .unwrap();
        let sched = spt_schedule(&inst);
        let grid = build_grid(&inst, &GridOptions::default()).unwrap();
        let svg = render_gantt(&inst, &sched, Some(&grid));
        assert_eq!(svg.matches(r#"<rect class="job""#).count(), 4);
        assert_eq!(svg.matches(r#"<line class="release""#).count(), 2);
        assert!(svg.contains(r#"<line class="bucket""#));
        assert_eq!(svg, render_gantt(&inst, &sched, Some(&grid)));
    }
}
