use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::params::SystemParams;

/// Which channel a profile shapes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ProfileKind {
    Mjd,
    Ia,
    RdmaActive,
    RdmaInactive,
    CiInterference,
    Custom,
}

/// Half of the RDMA resource split.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum RdmaPart {
    /// Cluster-edge terminals transmit at double power.
    Active,
    /// Cluster-edge terminals are silent.
    Inactive,
}

/// Deterministic matrix of per-entry standard deviations.
///
/// Rows are receive dimensions, columns transmit dimensions. A channel draw
/// multiplies it entrywise with an i.i.d. CN(0, 1) matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct VarianceProfile {
    kind: ProfileKind,
    params: Option<SystemParams>,
    entries: DMatrix<f64>,
}

impl VarianceProfile {
    pub fn new(entries: DMatrix<f64>) -> Result<Self> {
        if entries.iter().any(|&v| !(v >= 0.0 && v.is_finite())) {
            return Err(Error::InvalidParams(
                "variance profile entries must be finite and non-negative".into(),
            ));
        }
        Ok(Self {
            kind: ProfileKind::Custom,
            params: None,
            entries,
        })
    }

    fn built(kind: ProfileKind, params: SystemParams, entries: DMatrix<f64>) -> Self {
        Self {
            kind,
            params: Some(params),
            entries,
        }
    }

    pub fn kind(&self) -> ProfileKind {
        self.kind
    }

    pub fn params(&self) -> Option<&SystemParams> {
        self.params.as_ref()
    }

    pub fn entries(&self) -> &DMatrix<f64> {
        &self.entries
    }

    pub fn rows(&self) -> usize {
        self.entries.nrows()
    }

    pub fn cols(&self) -> usize {
        self.entries.ncols()
    }

    pub fn get(&self, row: usize, col: usize) -> f64 {
        self.entries[(row, col)]
    }

    /// Squared Frobenius norm over `rows * cols`.
    pub fn q_norm(&self) -> f64 {
        let cells = (self.rows() * self.cols()) as f64;
        if cells == 0.0 {
            return 0.0;
        }
        self.entries.iter().map(|v| v * v).sum::<f64>() / cells
    }

    /// Sub-profile restricted to a row range, keeping all columns.
    pub fn row_block(&self, start: usize, len: usize) -> DMatrix<f64> {
        self.entries.rows(start, len).into_owned()
    }
}

/// `rows x cols` banded pattern: 1 on the diagonal, `alpha` just right of it.
fn banded(rows: usize, cols: usize, alpha: f64) -> DMatrix<f64> {
    DMatrix::from_fn(rows, cols, |i, j| {
        if j == i {
            1.0
        } else if j == i + 1 {
            alpha
        } else {
            0.0
        }
    })
}

/// Kronecker product with an all-ones `n x Kn` block.
fn expand(pattern: &DMatrix<f64>, n: usize, kn: usize) -> DMatrix<f64> {
    DMatrix::from_fn(pattern.nrows() * n, pattern.ncols() * kn, |i, j| {
        pattern[(i / n, j / kn)]
    })
}

fn require_cluster(params: &SystemParams) -> Result<(usize, usize, usize, f64)> {
    let m = params.cluster_size();
    if m < 3 {
        return Err(Error::ClusterTooSmall(m));
    }
    Ok((m, params.users_per_cell(), params.antennas(), params.alpha()))
}

/// `Mn x (M+1)Kn` block-banded profile of the global joint-decoding channel.
pub fn build_profile_mjd(params: &SystemParams) -> VarianceProfile {
    let (m, k, n, alpha) = (
        params.cluster_size(),
        params.users_per_cell(),
        params.antennas(),
        params.alpha(),
    );
    let entries = expand(&banded(m, m + 1, alpha), n, k * n);
    VarianceProfile::built(ProfileKind::Mjd, *params, entries)
}

/// `(Mn - 1) x ((M-1)Kn + K)` equivalent profile after alignment and filtering.
///
/// Row blocks: the first base station sees the K aligned streams of its own
/// group plus the next group at `alpha`; interior stations keep the banded
/// pattern; the last station keeps `n - 1` filtered dimensions of its own group.
pub fn build_profile_ia(params: &SystemParams) -> Result<VarianceProfile> {
    let (m, k, n, alpha) = require_cluster(params)?;
    let kn = k * n;
    let rows = m * n - 1;
    let cols = (m - 1) * kn + k;
    let mut entries = DMatrix::zeros(rows, cols);

    entries.view_mut((0, 0), (n, k)).fill(1.0);
    entries.view_mut((0, k), (n, kn)).fill(alpha);

    let interior = expand(&banded(m - 2, m - 1, alpha), n, kn);
    entries
        .view_mut((n, k), (interior.nrows(), interior.ncols()))
        .copy_from(&interior);

    entries
        .view_mut(((m - 1) * n, (m - 2) * kn + k), (n - 1, kn))
        .fill(1.0);

    Ok(VarianceProfile::built(ProfileKind::Ia, *params, entries))
}

/// RDMA profile for one half of the resource split.
///
/// `Active`: `Mn x MKn`, the last station sees only the edge group with
/// amplitude 2. `Inactive`: `(M-1)n x (M-1)Kn`, the last remaining station
/// sees only its own group.
pub fn build_profile_rdma(params: &SystemParams, part: RdmaPart) -> Result<VarianceProfile> {
    let (m, k, n, alpha) = require_cluster(params)?;
    let kn = k * n;
    let (cells, edge_amplitude, kind) = match part {
        RdmaPart::Active => (m, 2.0, ProfileKind::RdmaActive),
        RdmaPart::Inactive => (m - 1, 1.0, ProfileKind::RdmaInactive),
    };
    let mut entries = DMatrix::zeros(cells * n, cells * kn);
    let top = expand(&banded(cells - 1, cells, alpha), n, kn);
    entries
        .view_mut((0, 0), (top.nrows(), top.ncols()))
        .copy_from(&top);
    entries
        .view_mut(((cells - 1) * n, (cells - 1) * kn), (n, kn))
        .fill(edge_amplitude);
    Ok(VarianceProfile::built(kind, *params, entries))
}

/// `n x Kn` profile of the neighbouring edge group seen as interference.
pub fn build_profile_ci_interference(params: &SystemParams) -> VarianceProfile {
    let (k, n) = (params.users_per_cell(), params.antennas());
    let entries = DMatrix::from_element(n, k * n, params.alpha());
    VarianceProfile::built(ProfileKind::CiInterference, *params, entries)
}
