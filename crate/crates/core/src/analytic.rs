//! Large-system per-cell throughput of each scheme and its pre-log.

use num_rational::Ratio;

use crate::error::Result;
use crate::freeprob::{
    density_from_sum, mp_shannon_transform, shannon_integral, GridSpec, RTransformSum,
    RTransformTerm, SpectralDensity,
};
use crate::channel::RdmaPart;
use crate::params::{SchemeKind, SystemParams};
use crate::result::ThroughputResult;

fn dims(p: &SystemParams) -> (f64, f64, f64, f64) {
    (
        p.cluster_size() as f64,
        p.users_per_cell() as f64,
        p.antennas() as f64,
        p.alpha(),
    )
}

/// Global joint decoding: `K n V_MP(n gamma (1 + alpha^2), K)`.
///
/// Every cell sees its own group at unit gain and one neighbour group at
/// `alpha`, independently of where the cluster boundary would be, so the
/// value does not depend on `M`.
pub fn mjd_nats(params: &SystemParams) -> f64 {
    let (_, k, n, a) = dims(params);
    k * n * mp_shannon_transform(n * params.gamma() * (1.0 + a * a), k)
}

pub fn capacity_mjd(params: &SystemParams) -> ThroughputResult {
    ThroughputResult::analytic(SchemeKind::GlobalMJD, *params, mjd_nats(params))
}

/// Variants of the joint-decoding formula kept for comparison against
/// simulation. None of them is used by [`capacity_mjd`].
pub mod candidates {
    use super::*;

    /// Finite-cluster form with the averaged profile power and aspect ratio
    /// `K (M+1) / M`.
    pub fn mjd_cluster_form(params: &SystemParams) -> f64 {
        let (m, k, n, a) = dims(params);
        let g = m / (m + 1.0) * n * params.gamma() * (1.0 + a * a);
        k * n * mp_shannon_transform(g, k * (m + 1.0) / m)
    }

    /// Same power scaling with aspect ratio `K`.
    pub fn mjd_cluster_power_form(params: &SystemParams) -> f64 {
        let (m, k, n, a) = dims(params);
        let g = m / (m + 1.0) * n * params.gamma() * (1.0 + a * a);
        k * n * mp_shannon_transform(g, k)
    }

    /// RDMA with the plain-term powers `(M-1)(1+alpha^2)` and
    /// `(M-2)(1+alpha^2)` and edge power 2.
    pub fn rdma_unscaled_nats(params: &SystemParams) -> Result<f64> {
        let (m, k, _, a) = dims(params);
        let active = RTransformSum::new(vec![
            RTransformTerm::plain(k * m / (m - 1.0), (m - 1.0) * (1.0 + a * a))?,
            RTransformTerm::zero_padded(1.0 / m, k, 2.0)?,
        ])?;
        let inactive = RTransformSum::new(vec![
            RTransformTerm::plain(k * (m - 1.0) / (m - 2.0), (m - 2.0) * (1.0 + a * a))?,
            RTransformTerm::zero_padded(1.0 / (m - 1.0), k, 1.0)?,
        ])?;
        rdma_from_sums(params, &active, &inactive)
    }
}

/// Averaged-profile model of `(1/n) H^H H` for the joint-decoding channel of
/// a finite cluster.
pub fn mjd_profile_sum(params: &SystemParams) -> Result<RTransformSum> {
    let (m, k, _, a) = dims(params);
    RTransformSum::new(vec![RTransformTerm::plain(
        k * (m + 1.0) / m,
        m * (1.0 + a * a) / (m + 1.0),
    )?])
}

/// Three zero-padded blocks of the aligned system: the first station with
/// its aligned streams, the interior stations, and the filtered last station.
pub fn ia_sum(params: &SystemParams) -> Result<RTransformSum> {
    let (m, k, _, a) = dims(params);
    let d = m * k + m - k;
    RTransformSum::new(vec![
        RTransformTerm::zero_padded(
            (k + 2.0) / d,
            k / (k + 1.0) + k,
            (1.0 + (k + 1.0) * a * a) / (k + 2.0),
        )?,
        RTransformTerm::zero_padded(
            (m - 1.0) * (k + 1.0) / d,
            (m - 1.0) * k / (m - 2.0),
            (m - 2.0) * (1.0 + a * a) / (m - 1.0),
        )?,
        RTransformTerm::zero_padded((k + 1.0) / d, k + 1.0, 1.0)?,
    ])
}

/// Interior stations as a full block plus the isolated edge group as a
/// padded block. Powers are the mean squared profile entries of each block.
pub fn rdma_sum(params: &SystemParams, part: RdmaPart) -> Result<RTransformSum> {
    let (m, k, _, a) = dims(params);
    match part {
        RdmaPart::Active => RTransformSum::new(vec![
            RTransformTerm::plain(k * m / (m - 1.0), (m - 1.0) * (1.0 + a * a) / m)?,
            RTransformTerm::zero_padded(1.0 / m, k, 4.0)?,
        ]),
        RdmaPart::Inactive => RTransformSum::new(vec![
            RTransformTerm::plain(k * (m - 1.0) / (m - 2.0), (m - 2.0) * (1.0 + a * a) / (m - 1.0))?,
            RTransformTerm::zero_padded(1.0 / (m - 1.0), k, 1.0)?,
        ]),
    }
}

/// Density of a sum on its default grid.
pub fn spectral_density(sum: &RTransformSum) -> Result<SpectralDensity> {
    density_from_sum(sum, &GridSpec::for_sum(sum))
}

fn integral(sum: &RTransformSum, g: f64) -> Result<f64> {
    Ok(shannon_integral(&spectral_density(sum)?, g))
}

/// Interference alignment: `((M-1)Kn + K) / M` times the Shannon integral of
/// the aligned-system density at `n gamma`.
pub fn ia_nats(params: &SystemParams) -> Result<f64> {
    let (m, k, n, _) = dims(params);
    let columns = (m - 1.0) * k * n + k;
    Ok(columns / m * integral(&ia_sum(params)?, params.gamma_tilde())?)
}

pub fn capacity_ia(params: &SystemParams) -> Result<ThroughputResult> {
    Ok(ThroughputResult::analytic(SchemeKind::IA, *params, ia_nats(params)?))
}

fn rdma_from_sums(params: &SystemParams, active: &RTransformSum, inactive: &RTransformSum) -> Result<f64> {
    let (m, k, n, _) = dims(params);
    let g = params.gamma_tilde();
    let c1 = n * k * integral(active, g)?;
    let c2 = n * k * (m - 1.0) / m * integral(inactive, g)?;
    Ok((c1 + c2) / 2.0)
}

/// RDMA: average of the two halves of the resource split.
pub fn rdma_nats(params: &SystemParams) -> Result<f64> {
    rdma_from_sums(
        params,
        &rdma_sum(params, RdmaPart::Active)?,
        &rdma_sum(params, RdmaPart::Inactive)?,
    )
}

pub fn capacity_rdma(params: &SystemParams) -> Result<ThroughputResult> {
    Ok(ThroughputResult::analytic(SchemeKind::RDMA, *params, rdma_nats(params)?))
}

/// Cochannel interference: joint decoding minus the edge interference term
/// `(K n / M) V_MP(alpha^2 n gamma, K)`.
pub fn ci_nats(params: &SystemParams) -> f64 {
    let (m, k, n, a) = dims(params);
    mjd_nats(params) - k * n / m * mp_shannon_transform(a * a * params.gamma_tilde(), k)
}

pub fn capacity_ci(params: &SystemParams) -> ThroughputResult {
    ThroughputResult::analytic(SchemeKind::CI, *params, ci_nats(params))
}

pub fn capacity(scheme: SchemeKind, params: &SystemParams) -> Result<ThroughputResult> {
    match scheme {
        SchemeKind::GlobalMJD => Ok(capacity_mjd(params)),
        SchemeKind::IA => capacity_ia(params),
        SchemeKind::RDMA => capacity_rdma(params),
        SchemeKind::CI => Ok(capacity_ci(params)),
    }
}

/// Pre-log per base-station antenna, exact.
pub fn degrees_of_freedom(scheme: SchemeKind, params: &SystemParams) -> Ratio<u64> {
    dof_exact(scheme, params.cluster_size() as u64, params.antennas() as u64)
}

/// [`degrees_of_freedom`] from raw cluster size and antenna count.
pub fn dof_exact(scheme: SchemeKind, m: u64, n: u64) -> Ratio<u64> {
    let one = Ratio::from_integer(1);
    match scheme {
        SchemeKind::GlobalMJD => one,
        SchemeKind::IA => one - Ratio::new(1, m * n),
        SchemeKind::RDMA => one - Ratio::new(1, 2 * m),
        SchemeKind::CI => one - Ratio::new(1, m),
    }
}

pub fn dof_value(scheme: SchemeKind, params: &SystemParams) -> f64 {
    let r = degrees_of_freedom(scheme, params);
    *r.numer() as f64 / *r.denom() as f64
}
