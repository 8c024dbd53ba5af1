//! Analytic-vs-simulation agreement per sweep point.

use std::collections::BTreeMap;
use std::fmt;

use mjd_core::{Route, SchemeKind};

use crate::error::{BenchError, Result};
use crate::experiment::ResultRow;

/// Largest accepted relative gap between the two routes.
pub fn tolerance(scheme: SchemeKind) -> f64 {
    match scheme {
        // the aligned model replaces precoded columns by Gaussian ones
        SchemeKind::IA => 0.04,
        SchemeKind::GlobalMJD | SchemeKind::RDMA | SchemeKind::CI => 0.03,
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PairReport {
    pub scheme: SchemeKind,
    pub point: String,
    pub analytic: Option<f64>,
    pub monte_carlo: Option<f64>,
    pub stderr: Option<f64>,
    /// `None` when either side failed.
    pub relative_error: Option<f64>,
    pub tolerance: f64,
}

impl PairReport {
    pub fn passed(&self) -> bool {
        self.relative_error.is_some_and(|e| e <= self.tolerance)
    }
}

/// Throughput of the edge-split scheme against the interference-as-noise
/// baseline at one point. Reported, never gated.
#[derive(Debug, Clone, PartialEq)]
pub struct EdgeComparison {
    pub point: String,
    pub route: Route,
    pub rdma_bits: f64,
    pub ci_bits: f64,
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct Summary {
    pub pairs: Vec<PairReport>,
    pub edge: Vec<EdgeComparison>,
}

impl Summary {
    pub fn failures(&self) -> usize {
        self.pairs.iter().filter(|p| !p.passed()).count()
    }

    pub fn passed(&self) -> bool {
        self.failures() == 0
    }
}

type Key = (usize, usize, usize, u64, u64);

fn key(r: &ResultRow) -> Key {
    (r.m, r.k, r.n, r.alpha.to_bits(), r.gamma_db.to_bits())
}

/// Pair every analytic row with its simulation row.
pub fn compare_report(rows: &[ResultRow]) -> Result<Summary> {
    let mut by: BTreeMap<(Key, SchemeKind), [Option<&ResultRow>; 2]> = BTreeMap::new();
    let mut order = Vec::new();
    for r in rows {
        let slot = by.entry((key(r), r.scheme)).or_insert_with(|| {
            order.push((key(r), r.scheme));
            [None, None]
        });
        slot[(r.route == Route::MonteCarlo) as usize] = Some(r);
    }
    let mut summary = Summary::default();
    for k in &order {
        let [a, m] = by[k];
        let (a, m) = match (a, m) {
            (Some(a), Some(m)) => (a, m),
            (Some(r), None) | (None, Some(r)) => {
                let missing = if r.route == Route::Analytic { Route::MonteCarlo } else { Route::Analytic };
                return Err(BenchError::UnmatchedPair {
                    scheme: r.scheme.to_string(),
                    missing: missing.to_string(),
                    point: r.point(),
                });
            }
            (None, None) => unreachable!(),
        };
        let relative_error = match (a.value_nats, m.value_nats) {
            (Some(x), Some(y)) if y != 0.0 => Some(((x - y) / y).abs()),
            (Some(x), Some(y)) if x == y => Some(0.0),
            _ => None,
        };
        summary.pairs.push(PairReport {
            scheme: a.scheme,
            point: a.point(),
            analytic: a.value_bits,
            monte_carlo: m.value_bits,
            stderr: m.stderr,
            relative_error,
            tolerance: tolerance(a.scheme),
        });
    }
    for route in [Route::Analytic, Route::MonteCarlo] {
        let pick = |s: SchemeKind| {
            rows.iter()
                .filter(move |r| r.scheme == s && r.route == route)
                .filter_map(|r| r.value_bits.map(|v| (key(r), (r.point(), v))))
                .collect::<BTreeMap<_, _>>()
        };
        let ci = pick(SchemeKind::CI);
        for (k, (point, rd)) in pick(SchemeKind::RDMA) {
            if let Some((_, c)) = ci.get(&k) {
                summary.edge.push(EdgeComparison {
                    point,
                    route,
                    rdma_bits: rd,
                    ci_bits: *c,
                });
            }
        }
    }
    Ok(summary)
}

fn opt(v: Option<f64>) -> String {
    v.map_or_else(|| "-".to_string(), |v| format!("{v:.4}"))
}

impl fmt::Display for Summary {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for p in &self.pairs {
            writeln!(
                f,
                "{:<4} {:<44} analytic {:>10} mc {:>10} (se {:>7})  rel {:>8} / {:.0}%  {}",
                p.scheme.label(),
                p.point,
                opt(p.analytic),
                opt(p.monte_carlo),
                opt(p.stderr),
                p.relative_error.map_or("-".to_string(), |e| format!("{:.2}%", 100.0 * e)),
                100.0 * p.tolerance,
                if p.passed() { "PASS" } else { "FAIL" },
            )?;
        }
        for e in &self.edge {
            let rel = if e.ci_bits == 0.0 { 0.0 } else { (e.rdma_bits - e.ci_bits) / e.ci_bits };
            writeln!(f, "rdma vs ci [{}] {}: {:+.2}% (not gated)", e.route, e.point, 100.0 * rel)?;
        }
        write!(f, "{} of {} pairs within tolerance", self.pairs.len() - self.failures(), self.pairs.len())
    }
}
