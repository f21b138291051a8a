use proptest::prelude::*;
use sso_core::benchmarks::FunctionId;
use sso_core::harness::{
    compute_speedup, emit_plot_data, read_csv, run_experiment, write_csv, ExperimentConfig, PlotKind, RunRecord,
};
use sso_core::{ScheduleKind, SsoParams};

fn small(runs: usize) -> ExperimentConfig {
    ExperimentConfig {
        functions: vec![FunctionId::F1, FunctionId::F5],
        runs,
        nsol: 8,
        nvar: 5,
        niter: 30,
        workers: 3,
        base_seed: 100,
        ..ExperimentConfig::default()
    }
}

fn record_strategy() -> impl Strategy<Value = RunRecord> {
    (
        0u64..1000,
        prop::bool::ANY,
        0usize..9,
        (1usize..500, 1usize..100, 1usize..5000),
        (0.0f64..1.0, 0.0f64..1.0, 0.0f64..1.0),
        any::<u64>(),
        prop::num::f64::NORMAL | prop::num::f64::ZERO,
        1u64..100_000_000,
    )
        .prop_map(|(run_id, par, f, (nsol, nvar, niter), (a, b, c), seed, best, micros)| {
            let mut t = [a, b, c];
            t.sort_by(f64::total_cmp);
            let id = FunctionId::ALL[f];
            let (lo, hi) = id.bounds();
            RunRecord {
                run_id,
                schedule: if par { ScheduleKind::Parallel } else { ScheduleKind::Sequential },
                function_id: id,
                params: SsoParams::default()
                    .with_thresholds(t[0], t[1], t[2])
                    .with_bounds(lo, hi)
                    .with_sizes(nsol, nvar, niter),
                seed,
                best_fitness: best,
                best_position: Vec::new(),
                wall_time: micros as f64 / 1e6,
                trajectory: None,
            }
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn csv_round_trip(records in prop::collection::vec(record_strategy(), 0..30)) {
        let mut buf = Vec::new();
        write_csv(&records, None, &mut buf).unwrap();
        let back = read_csv(buf.as_slice()).unwrap();
        prop_assert_eq!(back.failure, None);
        prop_assert_eq!(back.records.len(), records.len());
        for (a, b) in records.iter().zip(&back.records) {
            prop_assert_eq!(a.best_fitness.to_bits(), b.best_fitness.to_bits());
            prop_assert_eq!(a, b);
        }
    }

    #[test]
    fn speedup_identities(
        a in prop::collection::vec(1e-6f64..1e4, 1..20),
        b in prop::collection::vec(1e-6f64..1e4, 1..20),
        pa in 1.0f64..500.0,
        pb in 1.0f64..500.0,
    ) {
        let r = compute_speedup(&a, &b, pa, pb).unwrap();
        prop_assert_eq!(r.speedup, r.mean_time_a / r.mean_time_b);
        prop_assert_eq!(r.power_ratio, pb / pa);
        prop_assert_eq!(r.rectified_efficiency, r.speedup / r.power_ratio);
    }
}

#[test]
fn summary_matches_recomputation_from_rows() {
    let report = run_experiment(&small(7)).unwrap();
    let mut buf = Vec::new();
    write_csv(&report.records, None, &mut buf).unwrap();

    // parse the raw rows without the library reader
    let mut reader = csv::Reader::from_reader(buf.as_slice());
    let rows: Vec<csv::StringRecord> = reader.records().map(Result::unwrap).collect();
    for s in &report.summary {
        let values: Vec<f64> = rows
            .iter()
            .filter(|r| &r[1] == s.schedule.as_str() && &r[2] == s.function_id.token())
            .map(|r| r[10].parse().unwrap())
            .collect();
        let n = values.len() as f64;
        let mean = values.iter().sum::<f64>() / n;
        let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1.0);
        let min = values.iter().cloned().fold(f64::MAX, f64::min);
        assert_eq!(values.len(), s.n);
        assert!((mean - s.mean).abs() <= 1e-12 * mean.abs().max(1.0));
        assert!((var.sqrt() - s.std.unwrap()).abs() <= 1e-12 * mean.abs().max(1.0));
        assert_eq!(min, s.min);
    }
}

#[test]
fn rerun_is_identical_apart_from_timing() {
    let strip = |records: &[RunRecord]| {
        let mut buf = Vec::new();
        write_csv(records, None, &mut buf).unwrap();
        String::from_utf8(buf)
            .unwrap()
            .lines()
            .map(|l| l.rsplit_once(',').unwrap().0.to_string())
            .collect::<Vec<_>>()
    };
    let a = run_experiment(&small(3)).unwrap();
    let b = run_experiment(&small(3)).unwrap();
    assert_eq!(strip(&a.records), strip(&b.records));
}

#[test]
fn table_layout_summary() {
    let report = run_experiment(&ExperimentConfig { functions: vec![FunctionId::F1], ..small(20) }).unwrap();
    assert_eq!(report.summary.len(), 2);
    assert!(report.summary.iter().all(|s| s.n == 20 && s.std.is_some()));
}

fn data_lines(text: &str) -> Vec<&str> {
    text.lines().filter(|l| !l.starts_with('#')).skip(1).collect()
}

#[test]
fn trajectory_plot_is_monotone() {
    let config = ExperimentConfig {
        functions: vec![FunctionId::F6],
        schedules: vec![ScheduleKind::Parallel],
        runs: 1,
        nsol: 10,
        nvar: 5,
        niter: 1000,
        workers: 2,
        record_trajectory: true,
        ..ExperimentConfig::default()
    };
    let report = run_experiment(&config).unwrap();
    let mut buf = Vec::new();
    assert_eq!(emit_plot_data(&report.records, PlotKind::Trajectory, &mut buf).unwrap(), 1000);
    let text = String::from_utf8(buf).unwrap();
    let second: Vec<f64> = data_lines(&text).iter().map(|l| l.split(',').nth(1).unwrap().parse().unwrap()).collect();
    assert_eq!(second.len(), 1000);
    assert!(second.windows(2).all(|w| w[1] <= w[0]));
}

#[test]
fn precision_box_has_row_per_run() {
    let report = run_experiment(&ExperimentConfig { functions: vec![FunctionId::F1], ..small(20) }).unwrap();
    let mut buf = Vec::new();
    emit_plot_data(&report.records, PlotKind::PrecisionBox, &mut buf).unwrap();
    let text = String::from_utf8(buf).unwrap();
    let rows = data_lines(&text);
    assert_eq!(rows.len(), 40);
    assert_eq!(rows.iter().filter(|l| l.starts_with("parallel,")).count(), 20);
}

#[test]
fn speedup_curve_has_point_per_size() {
    let mut records = Vec::new();
    for (nsol, cpu, gpu) in [(100, 48.8263, 0.13875), (200, 193.10285, 0.154), (300, 434.8518, 0.1638), (350, 582.71855, 0.1695)] {
        for (schedule, t) in [(ScheduleKind::Sequential, cpu), (ScheduleKind::Parallel, gpu)] {
            records.push(RunRecord {
                run_id: 0,
                schedule,
                function_id: FunctionId::F4,
                params: SsoParams::default().with_sizes(nsol, 50, 1000),
                seed: 0,
                best_fitness: 1.0,
                best_position: Vec::new(),
                wall_time: t,
                trajectory: None,
            });
        }
    }
    let mut buf = Vec::new();
    assert_eq!(emit_plot_data(&records, PlotKind::SpeedupCurve, &mut buf).unwrap(), 4);
    let text = String::from_utf8(buf).unwrap();
    let sizes: Vec<&str> = data_lines(&text).iter().map(|l| l.split(',').next().unwrap()).collect();
    assert_eq!(sizes, ["100", "200", "300", "350"]);
}
