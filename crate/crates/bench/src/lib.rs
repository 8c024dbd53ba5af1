//! Sweeps, CSV output and analytic-vs-simulation reports for the clustered
//! joint-decoding throughput models in `mjd_core`.

pub mod config;
pub mod csv_out;
pub mod dof_table;
pub mod error;
pub mod experiment;
pub mod plot;
pub mod report;

use std::fs;
use std::path::{Path, PathBuf};

use mjd_core::{db_to_linear, SchemeKind, SystemParams};

pub use config::RunOptions;
pub use csv_out::{emit_csv, read_csv, HEADER};
pub use dof_table::{emit_dof_table, DofRow};
pub use error::{BenchError, Result};
pub use experiment::{run_experiment, ExperimentSpec, Preset, ResultRow, Routes, SweepVariable};
pub use report::{compare_report, Summary};

/// Environment variable naming the directory used when `--out` is absent.
pub const OUT_DIR_ENV: &str = "MJD_BENCH_OUT_DIR";
pub const DEFAULT_OUT_DIR: &str = "results";

#[derive(Debug)]
pub enum RunOutput {
    Throughput { rows: Vec<ResultRow>, summary: Option<Summary> },
    Dof(Vec<DofRow>),
}

#[derive(Debug)]
pub struct RunOutcome {
    pub path: PathBuf,
    pub output: RunOutput,
}

impl RunOutcome {
    /// True when no point failed and every analytic/simulation pair is
    /// within tolerance.
    pub fn passed(&self) -> bool {
        match &self.output {
            RunOutput::Throughput { rows, summary } => {
                !rows.iter().any(ResultRow::is_error) && summary.as_ref().is_none_or(Summary::passed)
            }
            RunOutput::Dof(_) => true,
        }
    }
}

fn fixed_params(o: &RunOptions) -> Result<SystemParams> {
    let mut p = SystemParams::table_defaults();
    if let Some(m) = o.m {
        p = p.with_cluster_size(m)?;
    }
    if let Some(k) = o.k {
        p = p.with_users_per_cell(k)?;
    }
    if let Some(a) = o.alpha {
        p = p.with_alpha(a)?;
    }
    if let Some(g) = o.gamma_db {
        p = p.with_gamma(db_to_linear(g))?;
    }
    Ok(p)
}

fn schemes(o: &RunOptions) -> Result<Vec<SchemeKind>> {
    let Some(list) = &o.schemes else {
        return Ok(SchemeKind::ALL.to_vec());
    };
    let mut out = Vec::new();
    for s in list {
        if s.eq_ignore_ascii_case("all") {
            out.extend(SchemeKind::ALL);
            continue;
        }
        out.push(SchemeKind::parse(s).ok_or_else(|| BenchError::InvalidSpec(format!("unknown scheme {s:?}")))?);
    }
    out.sort();
    out.dedup();
    Ok(out)
}

/// Experiment described by `o`, or `None` for the pre-log table.
pub fn build_spec(o: &RunOptions) -> Result<Option<ExperimentSpec>> {
    let fixed = fixed_params(o)?;
    let mut spec = match &o.preset {
        Some(name) => {
            let preset = Preset::parse(name).ok_or_else(|| BenchError::InvalidSpec(format!("unknown preset {name:?}")))?;
            match preset.spec() {
                Some(s) => s,
                None => return Ok(None),
            }
        }
        None => ExperimentSpec::single(fixed),
    };
    spec.fixed = fixed;
    if o.preset.is_none() {
        spec.sweep_values = vec![fixed.cluster_size() as f64];
    }
    spec.schemes = schemes(o)?;
    if let Some(r) = &o.route {
        spec.routes = Routes::parse(r).ok_or_else(|| BenchError::InvalidSpec(format!("unknown route {r:?}")))?;
    }
    if let Some(n) = o.iters {
        spec.iterations = n;
    }
    if let Some(s) = o.seed {
        spec.seed = s;
    }
    spec.record_runtime = o.record_runtime.unwrap_or(false);
    Ok(Some(spec))
}

fn output_path(o: &RunOptions, out_dir: &Path) -> PathBuf {
    o.out.clone().unwrap_or_else(|| {
        let name = o.preset.as_deref().map(str::to_ascii_lowercase).unwrap_or_else(|| "point".into());
        out_dir.join(format!("{name}.csv"))
    })
}

/// Evaluate, write the CSV (and optionally a gnuplot script next to it)
/// and, when both routes were run, the comparison summary.
pub fn execute_run(o: &RunOptions, out_dir: &Path) -> Result<RunOutcome> {
    let path = output_path(o, out_dir);
    let Some(spec) = build_spec(o)? else {
        let rows = dof_table::fig3_table();
        dof_table::write_dof_csv(&rows, &path)?;
        return Ok(RunOutcome {
            path,
            output: RunOutput::Dof(rows),
        });
    };
    let rows = run_experiment(&spec)?;
    emit_csv(&rows, &path)?;
    if o.gnuplot.unwrap_or(false) {
        let gp = path.with_extension("gp");
        fs::write(&gp, plot::gnuplot_script(&path, spec.sweep_variable, &spec.schemes))
            .map_err(|source| BenchError::Io { path: gp, source })?;
    }
    let summary = match spec.routes {
        Routes::Both => Some(compare_report(&rows)?),
        _ => None,
    };
    Ok(RunOutcome {
        path,
        output: RunOutput::Throughput { rows, summary },
    })
}
