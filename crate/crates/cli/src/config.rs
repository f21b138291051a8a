//! Config files and the value syntax shared with the command-line flags.

use std::path::{Path, PathBuf};

use serde::de::DeserializeOwned;
use serde::Deserialize;
use sso_core::benchmarks::FunctionId;
use sso_core::{LayoutMode, ScheduleKind};

use crate::{usage, Failure};

/// Keys accepted in a `run` config file.
#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields, rename_all = "kebab-case")]
pub struct RunFile {
    pub function: Option<String>,
    pub schedule: Option<String>,
    pub workers: Option<usize>,
    pub nsol: Option<usize>,
    pub nvar: Option<usize>,
    pub iters: Option<usize>,
    pub cw: Option<f64>,
    pub cp: Option<f64>,
    pub cg: Option<f64>,
    pub seed: Option<u64>,
    pub runs: Option<usize>,
    pub layout: Option<String>,
    pub out: Option<PathBuf>,
    pub trajectory: Option<bool>,
    pub parallel_cells: Option<bool>,
}

/// Keys accepted in a `sweep` config file.
#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields, rename_all = "kebab-case")]
pub struct SweepFile {
    pub function: Option<String>,
    pub triples: Option<String>,
    pub runs: Option<usize>,
    pub out: Option<PathBuf>,
    pub schedule: Option<String>,
    pub workers: Option<usize>,
    pub nsol: Option<usize>,
    pub nvar: Option<usize>,
    pub iters: Option<usize>,
    pub seed: Option<u64>,
    pub layout: Option<String>,
    pub strict: Option<bool>,
}

pub fn load<T: DeserializeOwned + Default>(path: Option<&Path>) -> Result<T, Failure> {
    let Some(path) = path else {
        return Ok(T::default());
    };
    let text = std::fs::read_to_string(path)
        .map_err(|e| usage(format!("cannot read config {}: {e}", path.display())))?;
    toml::from_str(&text).map_err(|e| usage(format!("config {}: {}", path.display(), e.message())))
}

pub fn functions(spec: &str) -> Result<Vec<FunctionId>, Failure> {
    if spec.eq_ignore_ascii_case("all") {
        return Ok(FunctionId::ALL.to_vec());
    }
    spec.split(',')
        .map(|s| s.trim().parse::<FunctionId>().map_err(|e| usage(format!("--function: {e}"))))
        .collect()
}

pub fn schedules(spec: &str) -> Result<Vec<ScheduleKind>, Failure> {
    if spec == "both" {
        return Ok(vec![ScheduleKind::Sequential, ScheduleKind::Parallel]);
    }
    spec.split(',')
        .map(|s| s.trim().parse::<ScheduleKind>().map_err(|e| usage(format!("--schedule: {e}"))))
        .collect()
}

pub fn layout(spec: &str) -> Result<LayoutMode, Failure> {
    spec.parse::<LayoutMode>().map_err(|e| usage(format!("--layout: {e}")))
}

/// `builtin` or a file of `cw,cp,cg` lines; blank lines and `#` comments are skipped.
pub fn triples(spec: &str) -> Result<Vec<[f64; 3]>, Failure> {
    if spec == "builtin" {
        return Ok(sso_core::harness::TABLE_TRIPLES.to_vec());
    }
    let text = std::fs::read_to_string(spec).map_err(|e| usage(format!("--triples {spec}: {e}")))?;
    let mut out = Vec::new();
    for (n, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let values: Vec<f64> = line
            .split(',')
            .map(|v| v.trim().parse::<f64>())
            .collect::<Result<_, _>>()
            .map_err(|e| usage(format!("--triples {spec}:{}: {e}", n + 1)))?;
        let triple: [f64; 3] = values
            .try_into()
            .map_err(|_| usage(format!("--triples {spec}:{}: expected three values", n + 1)))?;
        out.push(triple);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn function_lists() {
        assert_eq!(functions("all").unwrap().len(), 9);
        assert_eq!(functions("f1, f5").unwrap(), vec![FunctionId::F1, FunctionId::F5]);
        assert!(functions("f10").is_err());
    }

    #[test]
    fn schedule_lists() {
        assert_eq!(schedules("both").unwrap().len(), 2);
        assert_eq!(schedules("parallel").unwrap(), vec![ScheduleKind::Parallel]);
        assert!(schedules("gpu").is_err());
    }

    #[test]
    fn unknown_config_key_is_named() {
        let e = toml::from_str::<RunFile>("nsol = 5\nbogus = 1\n").unwrap_err();
        assert!(e.message().contains("bogus"));
    }
}
