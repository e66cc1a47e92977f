//! CSV files: `summary.csv`, `seeds.csv`, `trace_<method>_<B>_<start>.csv`
//! and `gaps_<B>.csv`. Reals carry six decimals, lines end in `\n`.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use nads_core::TracePoint;

use crate::error::{CliError, Result};
use crate::experiment::{ExperimentReport, RunRecord};
use crate::gaps::{GapSeries, Trace, GAP_PERCENTS};

pub const SUMMARY_HEADER: &str = "dataset,method,B,start,score,time_s,evals";
pub const TRACE_HEADER: &str = "elapsed_s,evals,score";
pub const SEEDS_HEADER: &str = "method,B,start,seeds";

pub fn trace_file_name(method: &str, budget: usize, start: &str) -> String {
    format!("trace_{method}_{budget}_{start}.csv")
}

pub fn gaps_file_name(budget: usize) -> String {
    format!("gaps_{budget}.csv")
}

fn write(path: &Path, contents: &str) -> Result<()> {
    fs::write(path, contents).map_err(|e| CliError::io(path, e))
}

pub fn render_trace(points: &[TracePoint]) -> String {
    let mut out = format!("{TRACE_HEADER}\n");
    for p in points {
        writeln!(out, "{:.6},{},{:.6}", p.elapsed_seconds, p.evals, p.score).unwrap();
    }
    out
}

pub fn render_gaps(series: &[GapSeries]) -> String {
    let mut out = String::from("method,start,reference_m");
    for pct in GAP_PERCENTS {
        write!(out, ",g{pct}").unwrap();
    }
    out.push('\n');
    for s in series {
        write!(out, "{},{},{:.6}", s.method, s.start, s.reference_m).unwrap();
        for g in s.sampled {
            write!(out, ",{g:.6}").unwrap();
        }
        out.push('\n');
    }
    out
}

fn summary_line(out: &mut String, dataset: &str, r: &RunRecord) {
    writeln!(
        out,
        "{dataset},{},{},{},{:.6},{:.6},{}",
        r.method, r.budget, r.start, r.score, r.time_s, r.evals
    )
    .unwrap();
}

pub fn render_summary(report: &ExperimentReport) -> String {
    let mut out = format!("{SUMMARY_HEADER}\n");
    for r in &report.runs {
        summary_line(&mut out, &report.dataset, r);
    }
    for a in &report.aggregates {
        for (label, score) in [("mean", a.mean_score), ("best", a.best_score)] {
            writeln!(
                out,
                "{},{},{},{label},{score:.6},{:.6},{}",
                report.dataset, a.method, a.budget, a.mean_time_s, a.mean_evals
            )
            .unwrap();
        }
    }
    out
}

pub fn render_seeds(report: &ExperimentReport) -> String {
    let mut out = format!("{SEEDS_HEADER}\n");
    for r in &report.runs {
        let ids: Vec<String> = r.external_seeds.iter().map(u64::to_string).collect();
        writeln!(out, "{},{},{},{}", r.method, r.budget, r.start, ids.join(" ")).unwrap();
    }
    out
}

/// Writes every output file into `dir`, returning the paths written.
pub fn emit_outputs(report: &ExperimentReport, dir: &Path) -> Result<Vec<PathBuf>> {
    fs::create_dir_all(dir).map_err(|e| CliError::io(dir, e))?;
    let mut written = Vec::new();
    let mut put = |name: String, body: String| -> Result<()> {
        let path = dir.join(name);
        write(&path, &body)?;
        written.push(path);
        Ok(())
    };
    put("summary.csv".into(), render_summary(report))?;
    put("seeds.csv".into(), render_seeds(report))?;
    for r in &report.runs {
        put(trace_file_name(r.method.name(), r.budget, &r.start), render_trace(&r.trace))?;
    }
    for (budget, series) in &report.gaps {
        put(gaps_file_name(*budget), render_gaps(series))?;
    }
    Ok(written)
}

pub fn write_gaps(dir: &Path, budget: usize, series: &[GapSeries]) -> Result<PathBuf> {
    fs::create_dir_all(dir).map_err(|e| CliError::io(dir, e))?;
    let path = dir.join(gaps_file_name(budget));
    write(&path, &render_gaps(series))?;
    Ok(path)
}

pub fn write_trace(path: &Path, points: &[TracePoint]) -> Result<()> {
    write(path, &render_trace(points))
}

fn parse_trace(path: &Path, text: &str) -> Result<Vec<TracePoint>> {
    let bad = |line: usize, why: &str| {
        CliError::config(format!("{}:{line}: {why}", path.display()))
    };
    let mut lines = text.lines().enumerate();
    match lines.next() {
        Some((_, h)) if h.trim() == TRACE_HEADER => {}
        _ => return Err(bad(1, "missing trace header")),
    }
    let mut points = Vec::new();
    for (idx, line) in lines {
        if line.trim().is_empty() {
            continue;
        }
        let f: Vec<&str> = line.split(',').collect();
        if f.len() != 3 {
            return Err(bad(idx + 1, "expected three columns"));
        }
        let num = |s: &str| s.trim().parse::<f64>().map_err(|_| bad(idx + 1, "bad number"));
        points.push(TracePoint {
            elapsed_seconds: num(f[0])?,
            evals: f[1].trim().parse().map_err(|_| bad(idx + 1, "bad eval count"))?,
            score: num(f[2])?,
        });
    }
    Ok(points)
}

/// Loads every `trace_<method>_<B>_<start>.csv` in `dir`, ordered by file name.
pub fn read_traces(dir: &Path) -> Result<Vec<Trace>> {
    let entries = fs::read_dir(dir).map_err(|e| CliError::io(dir, e))?;
    let mut names: Vec<String> = Vec::new();
    for entry in entries {
        let entry = entry.map_err(|e| CliError::io(dir, e))?;
        let name = entry.file_name().to_string_lossy().into_owned();
        if name.starts_with("trace_") && name.ends_with(".csv") {
            names.push(name);
        }
    }
    names.sort();
    let mut traces = Vec::with_capacity(names.len());
    for name in names {
        let stem = &name["trace_".len()..name.len() - ".csv".len()];
        let mut parts = stem.splitn(3, '_');
        let (Some(method), Some(b), Some(start)) = (parts.next(), parts.next(), parts.next()) else {
            return Err(CliError::config(format!("cannot parse trace file name {name:?}")));
        };
        let budget = b
            .parse()
            .map_err(|_| CliError::config(format!("bad budget in trace file name {name:?}")))?;
        let path = dir.join(&name);
        let text = fs::read_to_string(&path).map_err(|e| CliError::io(&path, e))?;
        traces.push(Trace {
            method: method.to_string(),
            budget,
            start: start.to_string(),
            points: parse_trace(&path, &text)?,
        });
    }
    Ok(traces)
}
