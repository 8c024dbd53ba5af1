//! Exact high-SNR pre-log per scheme over a cluster-size sweep.

use std::ops::RangeInclusive;
use std::path::Path;

use mjd_core::analytic::dof_exact;
use mjd_core::SchemeKind;
use serde::{Deserialize, Serialize};

use crate::csv_out::write_file;
use crate::error::Result;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DofRow {
    pub scheme: SchemeKind,
    #[serde(rename = "M")]
    pub m: u64,
    #[serde(rename = "K")]
    pub k: u64,
    pub n: u64,
    pub dof_numer: u64,
    pub dof_denom: u64,
    pub dof: f64,
}

/// Rows ordered by `K`, then `M`, then scheme.
pub fn emit_dof_table(m: RangeInclusive<u64>, k: &[u64]) -> Vec<DofRow> {
    let mut rows = Vec::new();
    for &k in k {
        for m in m.clone() {
            for scheme in SchemeKind::ALL {
                let d = dof_exact(scheme, m, k + 1);
                rows.push(DofRow {
                    scheme,
                    m,
                    k,
                    n: k + 1,
                    dof_numer: *d.numer(),
                    dof_denom: *d.denom(),
                    dof: *d.numer() as f64 / *d.denom() as f64,
                });
            }
        }
    }
    rows
}

/// The cluster-size sweep at the reference `K`.
pub fn fig3_table() -> Vec<DofRow> {
    emit_dof_table(3..=10, &[5])
}

pub fn write_dof_csv(rows: &[DofRow], path: &Path) -> Result<()> {
    write_file(rows, path)
}
