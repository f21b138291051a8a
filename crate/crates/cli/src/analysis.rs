use std::collections::BTreeMap;
use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::Path;

use anyhow::{anyhow, Context};
use sso_core::harness::{compute_speedup, emit_plot_data, read_csv, read_report, PlotKind, RunRecord};
use sso_core::stats::{
    friedman, kruskal_wallis, normality, t_test_independent, variance_homogeneity, HomogeneityMethod, StatsError,
    TestResult,
};

use crate::experiment::harness_failure;
use crate::{usage, CompareArgs, Failure, PlotArgs, StatsArgs, TestKind};

/// Prints a test result; a degenerate result is an error under `strict`.
pub fn print_test(label: &str, r: &TestResult, strict: bool) -> Result<(), Failure> {
    println!("test: {} ({label})", r.method);
    println!("statistic: {}", r.statistic);
    println!("df: {}", r.df);
    println!("p_value: {}", r.p_value);
    for n in &r.notes {
        println!("note: {n}");
    }
    if r.degenerate {
        let msg = format!("{} on {label}: {}", r.method, r.notes.join("; "));
        if strict {
            return Err(Failure::Degenerate(msg));
        }
        eprintln!("warning: degenerate result: {msg}");
    }
    Ok(())
}

fn report(label: &str, result: Result<TestResult, StatsError>, strict: bool) -> Result<(), Failure> {
    match result {
        Ok(r) => print_test(label, &r, strict),
        Err(StatsError::Degenerate(m)) if strict => Err(Failure::Degenerate(format!("{label}: {m}"))),
        Err(StatsError::Degenerate(m)) => {
            println!("degenerate ({label}): {m}");
            eprintln!("warning: degenerate data in {label}: {m}");
            Ok(())
        }
        Err(e) => Err(Failure::Runtime(anyhow!("{label}: {e}"))),
    }
}

fn load(path: &Path) -> Result<Vec<RunRecord>, Failure> {
    let file = File::open(path).map_err(|e| Failure::Runtime(anyhow!("opening {}: {e}", path.display())))?;
    let contents = read_csv(file).map_err(|e| Failure::Runtime(anyhow!("{}: {e}", path.display())))?;
    if let Some(f) = &contents.failure {
        eprintln!("warning: {} is from an experiment that stopped early ({f})", path.display());
    }
    Ok(contents.records)
}

const GROUP_COLUMNS: [&str; 10] =
    ["schedule", "function", "nsol", "nvar", "niter", "cw", "cp", "cg", "run_id", "seed"];

fn column(r: &RunRecord, name: &str) -> String {
    match name {
        "schedule" => r.schedule.to_string(),
        "function" => r.function_id.to_string(),
        "nsol" => r.params.nsol.to_string(),
        "nvar" => r.params.nvar.to_string(),
        "niter" => r.params.niter.to_string(),
        "cw" => r.params.cw.to_string(),
        "cp" => r.params.cp.to_string(),
        "cg" => r.params.cg.to_string(),
        "run_id" => r.run_id.to_string(),
        "seed" => r.seed.to_string(),
        _ => unreachable!("column names are checked before use"),
    }
}

fn key(r: &RunRecord, columns: &[&str]) -> String {
    columns.iter().map(|c| column(r, c)).collect::<Vec<_>>().join("/")
}

/// Best fitness grouped by `columns`, groups in order of first appearance.
fn groups(records: &[RunRecord], columns: &[&str]) -> Vec<(String, Vec<f64>)> {
    let mut out: Vec<(String, Vec<f64>)> = Vec::new();
    for r in records {
        let k = key(r, columns);
        match out.iter_mut().find(|(g, _)| *g == k) {
            Some((_, v)) => v.push(r.best_fitness),
            None => out.push((k, vec![r.best_fitness])),
        }
    }
    out
}

/// Rows are blocks (runs matched on every identifying column outside the
/// grouping), columns are the groups.
fn blocks(records: &[RunRecord], columns: &[&str]) -> Result<(Vec<String>, Vec<Vec<f64>>), Failure> {
    let block_columns: Vec<&str> =
        GROUP_COLUMNS.iter().copied().filter(|c| !columns.contains(c) && *c != "seed").collect();
    let treatments: Vec<String> = groups(records, columns).into_iter().map(|(k, _)| k).collect();
    let mut table: BTreeMap<String, Vec<Option<f64>>> = BTreeMap::new();
    for r in records {
        let t = treatments.iter().position(|k| *k == key(r, columns)).expect("group exists");
        let row = table.entry(key(r, &block_columns)).or_insert_with(|| vec![None; treatments.len()]);
        if row[t].replace(r.best_fitness).is_some() {
            return Err(Failure::Runtime(anyhow!(
                "block {} has two runs in group {}",
                key(r, &block_columns),
                treatments[t]
            )));
        }
    }
    let mut rows = Vec::with_capacity(table.len());
    for (k, row) in table {
        let complete: Option<Vec<f64>> = row.into_iter().collect();
        rows.push(complete.ok_or_else(|| Failure::Runtime(anyhow!("block {k} lacks a run in some group")))?);
    }
    Ok((treatments, rows))
}

pub fn stats(args: StatsArgs) -> Result<(), Failure> {
    let columns: Vec<&str> = args.group_by.split(',').map(str::trim).collect();
    if let Some(bad) = columns.iter().find(|c| !GROUP_COLUMNS.contains(c)) {
        return Err(usage(format!("--group-by: unknown column `{bad}` (use {})", GROUP_COLUMNS.join(", "))));
    }
    let records = load(&args.input)?;
    let groups = groups(&records, &columns);
    for (k, v) in &groups {
        println!("group: {k} (n={})", v.len());
    }
    let samples: Vec<&[f64]> = groups.iter().map(|(_, v)| v.as_slice()).collect();
    let label = format!("grouped by {}", args.group_by);
    match args.test {
        TestKind::Kruskal => report(&label, kruskal_wallis(&samples), args.strict),
        TestKind::Bartlett => report(&label, variance_homogeneity(&samples, HomogeneityMethod::Bartlett), args.strict),
        TestKind::Levene => report(&label, variance_homogeneity(&samples, HomogeneityMethod::LeveneMean), args.strict),
        TestKind::Ttest => {
            let [a, b]: [&[f64]; 2] = samples
                .try_into()
                .map_err(|s: Vec<_>| Failure::Runtime(anyhow!("t-test needs exactly 2 groups, found {}", s.len())))?;
            report(&label, t_test_independent(a, b), args.strict)
        }
        TestKind::Friedman => {
            let (_, rows) = blocks(&records, &columns)?;
            println!("blocks: {}", rows.len());
            report(&label, friedman(&rows), args.strict)
        }
        TestKind::Normality => {
            for (k, v) in &groups {
                report(k, normality(v), args.strict)?;
            }
            Ok(())
        }
    }
}

pub fn compare(args: CompareArgs) -> Result<(), Failure> {
    let a = load(&args.a)?;
    let b = load(&args.b)?;
    let times = |r: &[RunRecord]| r.iter().map(|x| x.wall_time).collect::<Vec<_>>();
    let mut s = compute_speedup(&times(&a), &times(&b), args.power_a, args.power_b).map_err(harness_failure)?;
    let sizes: Vec<usize> = a.iter().chain(&b).map(|r| r.params.nsol).collect();
    if sizes.windows(2).all(|w| w[0] == w[1]) {
        s.nsol = sizes.first().copied();
    }
    if let Some(n) = s.nsol {
        println!("nsol: {n}");
    }
    println!("mean_time_a: {}", s.mean_time_a);
    println!("mean_time_b: {}", s.mean_time_b);
    println!("speedup: {}", s.speedup);
    println!("power_a: {}", s.power_a);
    println!("power_b: {}", s.power_b);
    println!("power_ratio: {}", s.power_ratio);
    println!("rectified_efficiency: {}", s.rectified_efficiency);

    // pair runs of the same function and run id across the two files
    let index = |records: &[RunRecord], path: &Path| -> Result<BTreeMap<(String, u64), f64>, Failure> {
        let mut m = BTreeMap::new();
        for r in records {
            if m.insert((r.function_id.to_string(), r.run_id), r.best_fitness).is_some() {
                return Err(Failure::Runtime(anyhow!(
                    "{}: run {} of {} appears more than once",
                    path.display(),
                    r.run_id,
                    r.function_id
                )));
            }
        }
        Ok(m)
    };
    let (ia, ib) = (index(&a, &args.a)?, index(&b, &args.b)?);
    let rows: Vec<[f64; 2]> = ia.iter().filter_map(|(k, &x)| ib.get(k).map(|&y| [x, y])).collect();
    println!("paired_runs: {}", rows.len());
    report("precision, A vs B paired by run", friedman(&rows), args.strict)
}

pub fn plot_data(args: PlotArgs) -> Result<(), Failure> {
    let kind: PlotKind = args.kind.parse().map_err(|e| usage(format!("--kind: {e}")))?;
    let contents = read_report(&args.input).map_err(harness_failure)?;
    let rows = match &args.out {
        Some(path) => {
            let file = File::create(path).with_context(|| format!("creating {}", path.display()))?;
            let mut w = BufWriter::new(file);
            let rows = emit_plot_data(&contents.records, kind, &mut w).map_err(harness_failure)?;
            w.flush().context("flushing plot data")?;
            rows
        }
        None => emit_plot_data(&contents.records, kind, io::stdout().lock()).map_err(harness_failure)?,
    };
    log::info!("{rows} rows of {kind} data");
    Ok(())
}
