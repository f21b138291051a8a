use std::fs::File;
use std::io::{self, BufWriter};

use anyhow::Context;
use sso_core::benchmarks::FunctionId;
use sso_core::harness::{
    default_workers, parameter_sweep, run_experiment, write_csv, write_report, write_summary, ExperimentConfig,
    HarnessError, SweepConfig,
};

use crate::analysis::print_test;
use crate::config::{self, RunFile, SweepFile};
use crate::{usage, Failure, RunArgs, SweepArgs};

pub fn harness_failure(e: HarnessError) -> Failure {
    match e {
        HarnessError::Config { .. } => Failure::Usage(e.into()),
        other => Failure::Runtime(other.into()),
    }
}

pub fn run(args: RunArgs) -> Result<(), Failure> {
    let file: RunFile = config::load(args.config.as_deref())?;
    let mut c = ExperimentConfig::default();
    if let Some(s) = args.function.or(file.function) {
        c.functions = config::functions(&s)?;
    }
    if let Some(s) = args.schedule.or(file.schedule) {
        c.schedules = config::schedules(&s)?;
    }
    if let Some(s) = args.layout.or(file.layout) {
        c.layout = config::layout(&s)?;
    }
    c.workers = args.workers.or(file.workers).unwrap_or(c.workers);
    c.nsol = args.nsol.or(file.nsol).unwrap_or(c.nsol);
    c.nvar = args.nvar.or(file.nvar).unwrap_or(c.nvar);
    c.niter = args.iters.or(file.iters).unwrap_or(c.niter);
    c.cw = args.cw.or(file.cw).unwrap_or(c.cw);
    c.cp = args.cp.or(file.cp).unwrap_or(c.cp);
    c.cg = args.cg.or(file.cg).unwrap_or(c.cg);
    c.base_seed = args.seed.or(file.seed).unwrap_or(c.base_seed);
    c.runs = args.runs.or(file.runs).unwrap_or(c.runs);
    c.record_trajectory = args.trajectory || file.trajectory.unwrap_or(false);
    c.parallel_cells = args.parallel_cells || file.parallel_cells.unwrap_or(false);
    let out = args.out.or(file.out);

    let report = run_experiment(&c).map_err(harness_failure)?;
    if let Some(path) = &out {
        write_report(&report, path)
            .with_context(|| format!("writing {}", path.display()))?;
    }
    write_summary(&report, io::stdout().lock()).map_err(harness_failure)?;
    if let Some(f) = &report.failure {
        return Err(Failure::Runtime(anyhow::anyhow!(
            "{} {} run {} failed: {}; {} completed runs kept",
            f.function_id,
            f.schedule,
            f.run_id,
            f.message,
            report.records.len()
        )));
    }
    Ok(())
}

pub fn sweep(args: SweepArgs) -> Result<(), Failure> {
    let file: SweepFile = config::load(args.config.as_deref())?;
    let mut c = SweepConfig { workers: default_workers(), ..SweepConfig::default() };
    if let Some(s) = args.function.or(file.function) {
        let ids = config::functions(&s)?;
        let [id]: [FunctionId; 1] = ids
            .try_into()
            .map_err(|_| usage("--function: sweep takes exactly one function"))?;
        c.function = id;
    }
    if let Some(s) = args.triples.or(file.triples) {
        c.triples = config::triples(&s)?;
    }
    if let Some(s) = args.schedule.or(file.schedule) {
        let kinds = config::schedules(&s)?;
        c.schedule = *kinds
            .first()
            .filter(|_| kinds.len() == 1)
            .ok_or_else(|| usage("--schedule: sweep takes exactly one schedule"))?;
    }
    if let Some(s) = args.layout.or(file.layout) {
        c.layout = config::layout(&s)?;
    }
    c.runs = args.runs.or(file.runs).unwrap_or(c.runs);
    c.workers = args.workers.or(file.workers).unwrap_or(c.workers);
    c.nsol = args.nsol.or(file.nsol).unwrap_or(c.nsol);
    c.nvar = args.nvar.or(file.nvar).unwrap_or(c.nvar);
    c.niter = args.iters.or(file.iters).unwrap_or(c.niter);
    c.base_seed = args.seed.or(file.seed).unwrap_or(c.base_seed);
    let strict = args.strict || file.strict.unwrap_or(false);
    let out = args.out.or(file.out);

    let report = parameter_sweep(&c).map_err(harness_failure)?;
    if let Some(path) = &out {
        let records: Vec<_> = report.cells.iter().flat_map(|cell| cell.records.iter().cloned()).collect();
        let file = File::create(path).with_context(|| format!("creating {}", path.display()))?;
        write_csv(&records, None, BufWriter::new(file)).map_err(harness_failure)?;
    }
    println!("function: {}", c.function);
    println!("cw,cp,cg,n,avg,std,min,rank_sum,mean_rank");
    for cell in &report.cells {
        let s = &cell.summary;
        let [cw, cp, cg] = cell.triple;
        let std = s.std.map(|v| v.to_string()).unwrap_or_default();
        println!(
            "{cw},{cp},{cg},{},{},{std},{},{},{}",
            s.n, s.mean, s.min, cell.rank_sum, cell.mean_rank
        );
    }
    for d in &report.diagnostics {
        println!("# {d}");
    }
    match &report.kruskal {
        Some(k) => print_test("combinations", k, strict),
        None => Ok(()),
    }
}
