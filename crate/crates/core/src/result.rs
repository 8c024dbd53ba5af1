use serde::{Deserialize, Serialize};
use std::f64::consts::LN_2;
use std::fmt;

use crate::params::{SchemeKind, SystemParams};

/// How a throughput value was obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Route {
    #[serde(rename = "analytic")]
    Analytic,
    #[serde(rename = "mc")]
    MonteCarlo,
}

impl Route {
    pub fn label(&self) -> &'static str {
        match self {
            Route::Analytic => "analytic",
            Route::MonteCarlo => "mc",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "analytic" => Some(Route::Analytic),
            "mc" | "montecarlo" | "monte-carlo" => Some(Route::MonteCarlo),
            _ => None,
        }
    }
}

impl fmt::Display for Route {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

/// Run descriptors attached to a result.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct RunMeta {
    pub iterations: Option<usize>,
    pub seed: Option<u64>,
    pub stderr_nats: Option<f64>,
    pub redraws: usize,
    pub grid_points: Option<usize>,
    pub x_max: Option<f64>,
}

/// Per-cell throughput of one scheme at one parameter point.
#[derive(Debug, Clone, PartialEq)]
pub struct ThroughputResult {
    pub scheme: SchemeKind,
    pub params: SystemParams,
    pub route: Route,
    pub value_nats: f64,
    pub meta: RunMeta,
}

impl ThroughputResult {
    pub fn analytic(scheme: SchemeKind, params: SystemParams, value_nats: f64) -> Self {
        Self {
            scheme,
            params,
            route: Route::Analytic,
            value_nats,
            meta: RunMeta::default(),
        }
    }

    pub fn value_bits(&self) -> f64 {
        self.value_nats / LN_2
    }

    pub fn stderr_bits(&self) -> Option<f64> {
        self.meta.stderr_nats.map(|s| s / LN_2)
    }
}
