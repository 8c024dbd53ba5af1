//! Sweep definitions and their evaluation.

use std::fmt;
use std::time::Instant;

use mjd_core::analytic;
use mjd_core::montecarlo::{simulate, MonteCarloConfig, DEFAULT_ITERATIONS};
use mjd_core::{Route, SchemeKind, SystemParams, ThroughputResult};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{BenchError, Result};

pub const DEFAULT_SEED: u64 = 42;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SweepVariable {
    M,
    Alpha,
    K,
}

impl SweepVariable {
    pub fn label(&self) -> &'static str {
        match self {
            SweepVariable::M => "M",
            SweepVariable::Alpha => "alpha",
            SweepVariable::K => "K",
        }
    }

    fn apply(&self, fixed: SystemParams, value: f64) -> Result<SystemParams> {
        let whole = || {
            if value >= 0.0 && value.fract() == 0.0 {
                Ok(value as usize)
            } else {
                Err(BenchError::InvalidSpec(format!("{} must be a whole number, got {value}", self.label())))
            }
        };
        Ok(match self {
            SweepVariable::M => fixed.with_cluster_size(whole()?)?,
            SweepVariable::K => fixed.with_users_per_cell(whole()?)?,
            SweepVariable::Alpha => fixed.with_alpha(value)?,
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Routes {
    Analytic,
    MonteCarlo,
    Both,
}

impl Routes {
    pub fn parse(s: &str) -> Option<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "both" => Some(Routes::Both),
            other => Route::parse(other).map(|r| match r {
                Route::Analytic => Routes::Analytic,
                Route::MonteCarlo => Routes::MonteCarlo,
            }),
        }
    }

    pub fn list(&self) -> &'static [Route] {
        match self {
            Routes::Analytic => &[Route::Analytic],
            Routes::MonteCarlo => &[Route::MonteCarlo],
            Routes::Both => &[Route::Analytic, Route::MonteCarlo],
        }
    }
}

/// Named built-in sweeps.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Preset {
    /// Throughput against cluster size.
    Fig2,
    /// Pre-log against cluster size.
    Fig3,
    /// Throughput against the intercell factor.
    Fig4,
    /// Throughput against users per cell.
    Fig5,
}

impl Preset {
    pub const ALL: [Preset; 4] = [Preset::Fig2, Preset::Fig3, Preset::Fig4, Preset::Fig5];

    pub fn parse(s: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|p| p.name() == s.trim().to_ascii_lowercase())
    }

    pub fn name(&self) -> &'static str {
        match self {
            Preset::Fig2 => "fig2",
            Preset::Fig3 => "fig3",
            Preset::Fig4 => "fig4",
            Preset::Fig5 => "fig5",
        }
    }

    /// The throughput sweep behind this preset; `None` for the pre-log table.
    pub fn spec(&self) -> Option<ExperimentSpec> {
        let (var, values): (SweepVariable, Vec<f64>) = match self {
            Preset::Fig2 => (SweepVariable::M, (3..=10).map(f64::from).collect()),
            Preset::Fig3 => return None,
            Preset::Fig4 => (SweepVariable::Alpha, (1..=10).map(|i| f64::from(i) / 10.0).collect()),
            Preset::Fig5 => (SweepVariable::K, (2..=10).map(f64::from).collect()),
        };
        Some(ExperimentSpec {
            name: self.name().to_string(),
            sweep_variable: var,
            sweep_values: values,
            ..ExperimentSpec::default()
        })
    }
}

impl fmt::Display for Preset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentSpec {
    pub name: String,
    pub sweep_variable: SweepVariable,
    pub sweep_values: Vec<f64>,
    pub fixed: SystemParams,
    pub schemes: Vec<SchemeKind>,
    pub routes: Routes,
    pub iterations: usize,
    pub seed: u64,
    pub record_runtime: bool,
}

impl Default for ExperimentSpec {
    fn default() -> Self {
        let fixed = SystemParams::table_defaults();
        Self {
            name: "point".to_string(),
            sweep_variable: SweepVariable::M,
            sweep_values: vec![fixed.cluster_size() as f64],
            fixed,
            schemes: SchemeKind::ALL.to_vec(),
            routes: Routes::Both,
            iterations: DEFAULT_ITERATIONS,
            seed: DEFAULT_SEED,
            record_runtime: false,
        }
    }
}

impl ExperimentSpec {
    /// A one-point experiment at `params`.
    pub fn single(params: SystemParams) -> Self {
        Self {
            sweep_values: vec![params.cluster_size() as f64],
            fixed: params,
            ..Self::default()
        }
    }

    /// Parameters of every sweep point, in sweep order.
    pub fn points(&self) -> Result<Vec<SystemParams>> {
        if self.sweep_values.is_empty() {
            return Err(BenchError::InvalidSpec("sweep has no values".into()));
        }
        if self.schemes.is_empty() {
            return Err(BenchError::InvalidSpec("no schemes selected".into()));
        }
        if self.iterations == 0 {
            return Err(BenchError::InvalidSpec("iterations must be at least 1".into()));
        }
        self.sweep_values
            .iter()
            .map(|&v| self.sweep_variable.apply(self.fixed, v))
            .collect()
    }
}

/// One CSV line. `stderr` is in bits, like `value_bits`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResultRow {
    pub scheme: SchemeKind,
    pub route: Route,
    #[serde(rename = "M")]
    pub m: usize,
    #[serde(rename = "K")]
    pub k: usize,
    pub n: usize,
    pub alpha: f64,
    pub gamma_db: f64,
    pub value_bits: Option<f64>,
    pub value_nats: Option<f64>,
    pub stderr: Option<f64>,
    pub iterations: Option<usize>,
    pub seed: Option<u64>,
    pub runtime_ms: Option<u64>,
    pub error: Option<String>,
}

impl ResultRow {
    fn blank(scheme: SchemeKind, route: Route, p: &SystemParams) -> Self {
        Self {
            scheme,
            route,
            m: p.cluster_size(),
            k: p.users_per_cell(),
            n: p.antennas(),
            alpha: p.alpha(),
            gamma_db: p.gamma_db(),
            value_bits: None,
            value_nats: None,
            stderr: None,
            iterations: None,
            seed: None,
            runtime_ms: None,
            error: None,
        }
    }

    pub fn from_result(r: &ThroughputResult) -> Self {
        Self {
            value_bits: Some(r.value_bits()),
            value_nats: Some(r.value_nats),
            stderr: r.stderr_bits(),
            iterations: r.meta.iterations,
            seed: r.meta.seed,
            ..Self::blank(r.scheme, r.route, &r.params)
        }
    }

    /// Row standing in for a point that could not be evaluated.
    pub fn failed(scheme: SchemeKind, route: Route, p: &SystemParams, err: &dyn fmt::Display) -> Self {
        Self {
            error: Some(err.to_string()),
            ..Self::blank(scheme, route, p)
        }
    }

    pub fn is_error(&self) -> bool {
        self.error.is_some()
    }

    /// Human-readable parameter tuple.
    pub fn point(&self) -> String {
        format!("M={} K={} n={} alpha={} gamma_db={}", self.m, self.k, self.n, self.alpha, self.gamma_db)
    }
}

fn evaluate(scheme: SchemeKind, route: Route, params: SystemParams, spec: &ExperimentSpec) -> ResultRow {
    let start = Instant::now();
    let result = match route {
        Route::Analytic => analytic::capacity(scheme, &params),
        Route::MonteCarlo => simulate(
            &MonteCarloConfig::new(scheme, params)
                .with_iterations(spec.iterations)
                .with_seed(spec.seed),
        ),
    };
    let mut row = match result {
        Ok(r) => ResultRow::from_result(&r),
        Err(e) => ResultRow::failed(scheme, route, &params, &e),
    };
    if spec.record_runtime {
        row.runtime_ms = Some(start.elapsed().as_millis() as u64);
    }
    row
}

/// Every (point, scheme, route) of `spec`, ordered by point, then scheme,
/// then route. Failures become error rows.
pub fn run_experiment(spec: &ExperimentSpec) -> Result<Vec<ResultRow>> {
    let points = spec.points()?;
    let tasks: Vec<(SystemParams, SchemeKind, Route)> = points
        .iter()
        .flat_map(|&p| {
            spec.schemes
                .iter()
                .flat_map(move |&s| spec.routes.list().iter().map(move |&r| (p, s, r)))
        })
        .collect();
    Ok(tasks
        .into_par_iter()
        .map(|(p, s, r)| evaluate(s, r, p, spec))
        .collect())
}
