use serde::Serialize;

use super::{HarnessError, RunRecord};
use crate::parallel::ScheduleKind;

/// Rated power of the reference CPU, watts.
pub const DEFAULT_POWER_A: f64 = 84.0;
/// Rated power of the reference accelerator card, watts.
pub const DEFAULT_POWER_B: f64 = 180.0;

/// Speedup of implementation B over A, corrected for their power ratings.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SpeedupReport {
    /// Population size the timings belong to, when known.
    pub nsol: Option<usize>,
    pub mean_time_a: f64,
    pub mean_time_b: f64,
    /// `mean_time_a / mean_time_b`
    pub speedup: f64,
    pub power_a: f64,
    pub power_b: f64,
    /// `power_b / power_a`
    pub power_ratio: f64,
    /// `speedup / power_ratio`
    pub rectified_efficiency: f64,
}

fn mean_time(what: &'static str, times: &[f64]) -> Result<f64, HarnessError> {
    if times.is_empty() {
        return Err(HarnessError::Empty(what));
    }
    if let Some(&bad) = times.iter().find(|t| !t.is_finite() || **t <= 0.0) {
        return Err(HarnessError::NonPositiveTime { what, value: bad });
    }
    Ok(times.iter().sum::<f64>() / times.len() as f64)
}

pub fn compute_speedup(
    times_a: &[f64],
    times_b: &[f64],
    power_a: f64,
    power_b: f64,
) -> Result<SpeedupReport, HarnessError> {
    let mean_time_a = mean_time("times_a", times_a)?;
    let mean_time_b = mean_time("times_b", times_b)?;
    for (key, p) in [("power_a", power_a), ("power_b", power_b)] {
        if !p.is_finite() || p <= 0.0 {
            return Err(HarnessError::Config { key, message: format!("power must be positive, got {p}") });
        }
    }
    let speedup = mean_time_a / mean_time_b;
    let power_ratio = power_b / power_a;
    Ok(SpeedupReport {
        nsol: None,
        mean_time_a,
        mean_time_b,
        speedup,
        power_a,
        power_b,
        power_ratio,
        rectified_efficiency: speedup / power_ratio,
    })
}

/// One report per population size, A = sequential and B = parallel,
/// in ascending order of `nsol`.
pub fn speedup_curve(records: &[RunRecord], power_a: f64, power_b: f64) -> Result<Vec<SpeedupReport>, HarnessError> {
    let mut sizes: Vec<usize> = records.iter().map(|r| r.params.nsol).collect();
    sizes.sort_unstable();
    sizes.dedup();
    if sizes.is_empty() {
        return Err(HarnessError::Empty("records"));
    }
    sizes
        .into_iter()
        .map(|nsol| {
            let times = |kind: ScheduleKind| -> Vec<f64> {
                records
                    .iter()
                    .filter(|r| r.params.nsol == nsol && r.schedule == kind)
                    .map(|r| r.wall_time)
                    .collect()
            };
            let (a, b) = (times(ScheduleKind::Sequential), times(ScheduleKind::Parallel));
            if a.is_empty() || b.is_empty() {
                return Err(HarnessError::Data(format!("nsol = {nsol} lacks runs of both schedules")));
            }
            let mut report = compute_speedup(&a, &b, power_a, power_b)?;
            report.nsol = Some(nsol);
            Ok(report)
        })
        .collect()
}
