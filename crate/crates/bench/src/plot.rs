//! Gnuplot script for a result CSV. The CSV stays the canonical output.

use std::path::Path;

use mjd_core::{Route, SchemeKind};

use crate::experiment::SweepVariable;

fn column(var: SweepVariable) -> usize {
    match var {
        SweepVariable::M => 3,
        SweepVariable::K => 4,
        SweepVariable::Alpha => 6,
    }
}

/// Lines for the analytic rows and points for the simulated rows of each
/// scheme, throughput in bits against the swept variable.
pub fn gnuplot_script(csv: &Path, var: SweepVariable, schemes: &[SchemeKind]) -> String {
    let file = csv.display().to_string().replace('\'', "\\'");
    let x = column(var);
    let mut s = String::new();
    s.push_str("set datafile separator ','\n");
    s.push_str("set key autotitle columnhead\n");
    s.push_str(&format!("set xlabel '{}'\n", var.label()));
    s.push_str("set ylabel 'throughput per cell [bits/s/Hz]'\n");
    s.push_str("set grid\n");
    let mut parts = Vec::new();
    for scheme in schemes {
        for route in [Route::Analytic, Route::MonteCarlo] {
            let style = if route == Route::Analytic { "lines" } else { "points" };
            parts.push(format!(
                "'{file}' using (strcol(1) eq '{s}' && strcol(2) eq '{r}' ? ${x} : NaN):8 with {style} title '{s} {r}'",
                s = scheme.label(),
                r = route.label(),
            ));
        }
    }
    s.push_str("plot ");
    s.push_str(&parts.join(", \\\n     "));
    s.push('\n');
    s
}
