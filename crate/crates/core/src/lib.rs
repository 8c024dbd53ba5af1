//! Throughput of clustered multi-cell uplink schemes, computed two ways:
//! through free-probability spectral densities and through Monte Carlo
//! averages of log-determinants.

pub mod analytic;
pub mod channel;
pub mod error;
pub mod freeprob;
pub mod linalg;
pub mod montecarlo;
pub mod params;
pub mod result;
pub mod rng;

pub use error::{Error, Result};
pub use params::{db_to_linear, SchemeKind, SystemParams};
pub use result::{Route, RunMeta, ThroughputResult};
