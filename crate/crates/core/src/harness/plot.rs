use std::fmt;
use std::io::Write;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::{speedup_curve, HarnessError, RunRecord, DEFAULT_POWER_A, DEFAULT_POWER_B};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum PlotKind {
    /// Global-best fitness per iteration of every run.
    Trajectory,
    /// Final fitness of every run, labelled by schedule.
    PrecisionBox,
    /// Mean wall times and speedup per population size.
    SpeedupCurve,
}

impl PlotKind {
    pub fn as_str(self) -> &'static str {
        match self {
            PlotKind::Trajectory => "trajectory",
            PlotKind::PrecisionBox => "precision-box",
            PlotKind::SpeedupCurve => "speedup-curve",
        }
    }
}

impl fmt::Display for PlotKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for PlotKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        [PlotKind::Trajectory, PlotKind::PrecisionBox, PlotKind::SpeedupCurve]
            .into_iter()
            .find(|k| k.as_str() == s)
            .ok_or_else(|| format!("unknown plot kind `{s}` (expected trajectory, precision-box or speedup-curve)"))
    }
}

/// Writes whitespace-free comma-separated columns preceded by `#` lines
/// describing them. Returns the number of data rows.
pub fn emit_plot_data<W: Write>(records: &[RunRecord], kind: PlotKind, mut out: W) -> Result<usize, HarnessError> {
    if records.is_empty() {
        return Err(HarnessError::Empty("records"));
    }
    writeln!(out, "# kind: {kind}")?;
    let mut rows = 0;
    match kind {
        PlotKind::Trajectory => {
            if let Some(r) = records.iter().find(|r| r.trajectory.is_none()) {
                return Err(HarnessError::MissingTrajectory {
                    run_id: r.run_id,
                    schedule: r.schedule,
                    function: r.function_id,
                });
            }
            writeln!(out, "# iteration: 1-based iteration index")?;
            writeln!(out, "# best_fitness: global-best fitness after that iteration")?;
            writeln!(out, "iteration,best_fitness,run_id,schedule,function")?;
            for r in records {
                for (i, v) in r.trajectory.iter().flatten().enumerate() {
                    writeln!(out, "{},{v},{},{},{}", i + 1, r.run_id, r.schedule, r.function_id)?;
                    rows += 1;
                }
            }
        }
        PlotKind::PrecisionBox => {
            writeln!(out, "# one row per run; best_fitness is the final global-best fitness")?;
            writeln!(out, "schedule,function,run_id,best_fitness")?;
            for r in records {
                writeln!(out, "{},{},{},{}", r.schedule, r.function_id, r.run_id, r.best_fitness)?;
                rows += 1;
            }
        }
        PlotKind::SpeedupCurve => {
            writeln!(out, "# one row per population size; times are mean wall seconds")?;
            writeln!(out, "# speedup = sequential / parallel; power ratio {DEFAULT_POWER_B}/{DEFAULT_POWER_A}")?;
            writeln!(out, "nsol,mean_time_sequential,mean_time_parallel,speedup,rectified_efficiency")?;
            for s in speedup_curve(records, DEFAULT_POWER_A, DEFAULT_POWER_B)? {
                writeln!(
                    out,
                    "{},{},{},{},{}",
                    s.nsol.unwrap_or_default(),
                    s.mean_time_a,
                    s.mean_time_b,
                    s.speedup,
                    s.rectified_efficiency
                )?;
                rows += 1;
            }
        }
    }
    Ok(rows)
}
