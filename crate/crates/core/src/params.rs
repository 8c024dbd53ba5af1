use serde::{Deserialize, Serialize};
use std::fmt;

use crate::error::{Error, Result};

/// Scenario tuple shared by every computation: cluster size, users per cell,
/// antennas per terminal and base station, intercell factor and per-antenna SNR.
///
/// `n == K + 1` is enforced at construction so that a single terminal can be
/// aligned onto one receive direction and zero-forced by a `K x n` filter.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SystemParams {
    m: usize,
    k: usize,
    n: usize,
    alpha: f64,
    gamma: f64,
}

impl SystemParams {
    pub fn new(m: usize, k: usize, n: usize, alpha: f64, gamma: f64) -> Result<Self> {
        if m < 3 {
            return Err(Error::ClusterTooSmall(m));
        }
        if k < 1 {
            return Err(Error::InvalidParams(format!("K must be at least 1, got {k}")));
        }
        if n != k + 1 {
            return Err(Error::InvalidParams(format!(
                "n must equal K + 1 (K = {k}, n = {n})"
            )));
        }
        if !(0.0..=1.0).contains(&alpha) {
            return Err(Error::InvalidParams(format!(
                "alpha must lie in [0, 1], got {alpha}"
            )));
        }
        if !(gamma > 0.0 && gamma.is_finite()) {
            return Err(Error::InvalidParams(format!(
                "gamma must be positive and finite, got {gamma}"
            )));
        }
        Ok(Self {
            m,
            k,
            n,
            alpha,
            gamma,
        })
    }

    /// Shorthand deriving `n = K + 1`.
    pub fn with_users(m: usize, k: usize, alpha: f64, gamma: f64) -> Result<Self> {
        Self::new(m, k, k + 1, alpha, gamma)
    }

    /// Reference operating point: M = 4, K = 5, n = 6, alpha = 0.5, 20 dB.
    pub fn table_defaults() -> Self {
        Self::new(4, 5, 6, 0.5, 100.0).expect("reference parameters are valid")
    }

    pub fn cluster_size(&self) -> usize {
        self.m
    }

    pub fn users_per_cell(&self) -> usize {
        self.k
    }

    pub fn antennas(&self) -> usize {
        self.n
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    /// Transmit SNR per terminal antenna (linear).
    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    /// Total normalized terminal power `n * gamma`.
    pub fn gamma_tilde(&self) -> f64 {
        self.n as f64 * self.gamma
    }

    pub fn gamma_db(&self) -> f64 {
        10.0 * self.gamma.log10()
    }

    pub fn with_cluster_size(self, m: usize) -> Result<Self> {
        Self::new(m, self.k, self.n, self.alpha, self.gamma)
    }

    pub fn with_alpha(self, alpha: f64) -> Result<Self> {
        Self::new(self.m, self.k, self.n, alpha, self.gamma)
    }

    /// Changes K and keeps `n = K + 1`.
    pub fn with_users_per_cell(self, k: usize) -> Result<Self> {
        Self::new(self.m, k, k + 1, self.alpha, self.gamma)
    }

    pub fn with_gamma(self, gamma: f64) -> Result<Self> {
        Self::new(self.m, self.k, self.n, self.alpha, gamma)
    }
}

impl fmt::Display for SystemParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "M={} K={} n={} alpha={} gamma={:.2} dB",
            self.m,
            self.k,
            self.n,
            self.alpha,
            self.gamma_db()
        )
    }
}

pub fn db_to_linear(db: f64) -> f64 {
    10f64.powf(db / 10.0)
}

/// The four ways of handling intercluster interference.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SchemeKind {
    /// Global multicell joint decoding (no cluster boundary).
    #[serde(rename = "mjd")]
    GlobalMJD,
    /// Interference alignment at the cluster edges.
    IA,
    /// Resource division between cluster-edge cells.
    RDMA,
    /// Intercluster signals treated as cochannel interference.
    CI,
}

impl SchemeKind {
    pub const ALL: [SchemeKind; 4] = [
        SchemeKind::GlobalMJD,
        SchemeKind::IA,
        SchemeKind::RDMA,
        SchemeKind::CI,
    ];

    pub fn label(&self) -> &'static str {
        match self {
            SchemeKind::GlobalMJD => "mjd",
            SchemeKind::IA => "ia",
            SchemeKind::RDMA => "rdma",
            SchemeKind::CI => "ci",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "mjd" | "globalmjd" | "global-mjd" | "global_mjd" => Some(SchemeKind::GlobalMJD),
            "ia" => Some(SchemeKind::IA),
            "rdma" | "rd" => Some(SchemeKind::RDMA),
            "ci" => Some(SchemeKind::CI),
            _ => None,
        }
    }
}

impl fmt::Display for SchemeKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}
