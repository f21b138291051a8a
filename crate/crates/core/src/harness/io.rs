//! Results CSV, the optional trajectory side file and the summary table.

use std::fs::File;
use std::io::{BufWriter, Read, Write};
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use super::{ExperimentReport, Failure, HarnessError, RunRecord};
use crate::benchmarks::FunctionId;
use crate::parallel::ScheduleKind;
use crate::params::SsoParams;

const FAILURE_PREFIX: &str = "# failed: ";

// Field order defines the CSV header.
#[derive(Debug, Serialize, Deserialize)]
struct Row {
    run_id: u64,
    schedule: ScheduleKind,
    function: FunctionId,
    nsol: usize,
    nvar: usize,
    niter: usize,
    cw: f64,
    cp: f64,
    cg: f64,
    seed: u64,
    best_fitness: f64,
    wall_time_s: f64,
}

#[derive(Debug, Serialize, Deserialize)]
struct TrajectoryRow {
    run_id: u64,
    schedule: ScheduleKind,
    function: FunctionId,
    iteration: usize,
    best_fitness: f64,
}

/// Records read back from a results CSV.
#[derive(Debug, Clone, PartialEq)]
pub struct CsvContents {
    pub records: Vec<RunRecord>,
    /// Text of the failure marker, if the experiment stopped early.
    pub failure: Option<String>,
}

fn failure_line(f: &Failure) -> String {
    format!(
        "{FAILURE_PREFIX}function={} schedule={} run_id={}: {}",
        f.function_id,
        f.schedule,
        f.run_id,
        f.message.replace('\n', " ")
    )
}

/// Writes one row per record, then the failure marker if there is one.
pub fn write_csv<W: Write>(records: &[RunRecord], failure: Option<&Failure>, out: W) -> Result<(), HarnessError> {
    let mut w = csv::Writer::from_writer(out);
    if records.is_empty() {
        w.write_record(super::CSV_HEADER.split(','))?;
    }
    for r in records {
        w.serialize(Row {
            run_id: r.run_id,
            schedule: r.schedule,
            function: r.function_id,
            nsol: r.params.nsol,
            nvar: r.params.nvar,
            niter: r.params.niter,
            cw: r.params.cw,
            cp: r.params.cp,
            cg: r.params.cg,
            seed: r.seed,
            best_fitness: r.best_fitness,
            wall_time_s: r.wall_time,
        })?;
    }
    w.flush()?;
    let mut out = w.into_inner().map_err(|e| HarnessError::Io(e.into_error()))?;
    if let Some(f) = failure {
        writeln!(out, "{}", failure_line(f))?;
    }
    out.flush()?;
    Ok(())
}

/// Parses a results CSV. Positions are not stored, so `best_position` is
/// empty and `trajectory` is `None`; bounds come from the function id.
pub fn read_csv<R: Read>(mut input: R) -> Result<CsvContents, HarnessError> {
    let mut text = String::new();
    input.read_to_string(&mut text)?;
    let failure = text
        .lines()
        .find_map(|l| l.strip_prefix(FAILURE_PREFIX))
        .map(str::to_string);
    let first = text.lines().find(|l| !l.starts_with('#')).unwrap_or("");
    if first.trim_end() != super::CSV_HEADER {
        return Err(HarnessError::Data(format!("unexpected CSV header `{first}`")));
    }
    let mut reader = csv::ReaderBuilder::new().comment(Some(b'#')).from_reader(text.as_bytes());
    let mut records = Vec::new();
    for row in reader.deserialize::<Row>() {
        let row = row?;
        let (lo, hi) = row.function.bounds();
        let params = SsoParams::default()
            .with_thresholds(row.cw, row.cp, row.cg)
            .with_bounds(lo, hi)
            .with_sizes(row.nsol, row.nvar, row.niter);
        records.push(RunRecord {
            run_id: row.run_id,
            schedule: row.schedule,
            function_id: row.function,
            params,
            seed: row.seed,
            best_fitness: row.best_fitness,
            best_position: Vec::new(),
            wall_time: row.wall_time_s,
            trajectory: None,
        });
    }
    Ok(CsvContents { records, failure })
}

/// `results.csv` -> `results.trajectory.csv`.
pub fn trajectory_path(csv_path: &Path) -> PathBuf {
    csv_path.with_extension("trajectory.csv")
}

fn write_trajectories<W: Write>(records: &[RunRecord], out: W) -> Result<(), HarnessError> {
    let mut w = csv::Writer::from_writer(out);
    for r in records {
        for (iteration, &best_fitness) in r.trajectory.iter().flatten().enumerate() {
            w.serialize(TrajectoryRow {
                run_id: r.run_id,
                schedule: r.schedule,
                function: r.function_id,
                iteration: iteration + 1,
                best_fitness,
            })?;
        }
    }
    w.flush()?;
    Ok(())
}

fn attach_trajectories<R: Read>(records: &mut [RunRecord], input: R) -> Result<(), HarnessError> {
    let mut reader = csv::Reader::from_reader(input);
    for row in reader.deserialize::<TrajectoryRow>() {
        let row = row?;
        let record = records
            .iter_mut()
            .find(|r| (r.run_id, r.schedule, r.function_id) == (row.run_id, row.schedule, row.function))
            .ok_or_else(|| {
                HarnessError::Data(format!(
                    "trajectory row for run {} ({}, {}) has no matching record",
                    row.run_id, row.schedule, row.function
                ))
            })?;
        let t = record.trajectory.get_or_insert_with(Vec::new);
        if row.iteration != t.len() + 1 {
            return Err(HarnessError::Data(format!(
                "trajectory of run {} skips to iteration {}",
                row.run_id, row.iteration
            )));
        }
        t.push(row.best_fitness);
    }
    Ok(())
}

/// Writes the results CSV to `path`, plus the trajectory side file when any
/// record carries a trajectory.
pub fn write_report(report: &ExperimentReport, path: &Path) -> Result<(), HarnessError> {
    write_csv(&report.records, report.failure.as_ref(), BufWriter::new(File::create(path)?))?;
    if report.records.iter().any(|r| r.trajectory.is_some()) {
        write_trajectories(&report.records, BufWriter::new(File::create(trajectory_path(path))?))?;
    }
    Ok(())
}

/// Reads a results CSV and, if present, its trajectory side file.
pub fn read_report(path: &Path) -> Result<CsvContents, HarnessError> {
    let mut contents = read_csv(File::open(path)?)?;
    let side = trajectory_path(path);
    if side.exists() {
        attach_trajectories(&mut contents.records, File::open(side)?)?;
    }
    Ok(contents)
}

/// Per-cell Avg./Std./Min. table preceded by `#` metadata lines.
pub fn write_summary<W: Write>(report: &ExperimentReport, mut out: W) -> Result<(), HarnessError> {
    for (k, v) in report.config.metadata() {
        writeln!(out, "# {k}: {v}")?;
    }
    writeln!(out, "function,schedule,nsol,n,avg,std,min,mean_wall_time_s")?;
    for s in &report.summary {
        let std = s.std.map(|v| v.to_string()).unwrap_or_default();
        writeln!(
            out,
            "{},{},{},{},{},{},{},{}",
            s.function_id, s.schedule, s.nsol, s.n, s.mean, std, s.min, s.mean_wall_time
        )?;
    }
    if let Some(f) = &report.failure {
        writeln!(out, "{}", failure_line(f))?;
    }
    Ok(())
}
