//! Finite-size ergodic throughput by averaging log-determinants over random
//! channel draws.

use rayon::prelude::*;

use crate::channel::{
    build_profile_ci_interference, build_profile_mjd, build_profile_rdma, sample_channel,
    sample_ia_system, ChannelRealization, RdmaPart, VarianceProfile,
};
use crate::error::{Error, Result};
use crate::linalg::{hermitian_eigenvalues, log_det_identity_plus_gram, small_gram, CMatrix};
use crate::params::{SchemeKind, SystemParams};
use crate::result::{Route, RunMeta, ThroughputResult};
use crate::rng::{RandomStream, StreamDomain, StreamKey};

pub const DEFAULT_ITERATIONS: usize = 1000;

/// Degenerate draws tolerated within one trial before it is abandoned.
pub const MAX_REDRAWS_PER_TRIAL: usize = 16;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MonteCarloConfig {
    pub iterations: usize,
    pub master_seed: u64,
    pub scheme: SchemeKind,
    pub params: SystemParams,
}

impl MonteCarloConfig {
    pub fn new(scheme: SchemeKind, params: SystemParams) -> Self {
        Self {
            iterations: DEFAULT_ITERATIONS,
            master_seed: 0,
            scheme,
            params,
        }
    }

    pub fn with_iterations(mut self, iterations: usize) -> Self {
        self.iterations = iterations;
        self
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.master_seed = seed;
        self
    }

    fn validate(&self) -> Result<()> {
        if self.iterations == 0 {
            return Err(Error::InvalidParams("iterations must be at least 1".into()));
        }
        Ok(())
    }
}

/// Sample mean and standard error of per-draw `(1/normalizer) ln det(I + gamma H H^H)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LogDetEstimate {
    pub mean: f64,
    pub stderr: f64,
    pub trials: usize,
    pub redraws: usize,
}

fn summarize(values: &[f64], redraws: usize) -> LogDetEstimate {
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    let stderr = if values.len() > 1 {
        let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1.0);
        (var / n).sqrt()
    } else {
        0.0
    };
    LogDetEstimate {
        mean,
        stderr,
        trials: values.len(),
        redraws,
    }
}

/// Estimate over an explicit sequence of realizations.
pub fn ergodic_logdet<I>(realizations: I, gamma: f64, normalizer: usize) -> Result<LogDetEstimate>
where
    I: IntoIterator<Item = ChannelRealization>,
{
    if normalizer == 0 {
        return Err(Error::InvalidParams("normalizer must be positive".into()));
    }
    let mut shape = None;
    let mut values = Vec::new();
    for r in realizations {
        let got = r.matrix.shape();
        match shape {
            None => shape = Some(got),
            Some(expected) if expected != got => return Err(Error::ShapeMismatch { expected, got }),
            _ => {}
        }
        values.push(log_det_identity_plus_gram(&r.matrix, gamma)? / normalizer as f64);
    }
    if values.is_empty() {
        return Err(Error::Empty("no channel realizations"));
    }
    Ok(summarize(&values, 0))
}

/// Parallel estimator: trial `t` draws from stream `t` of `key`, redrawing on
/// degenerate samples, and trials are reduced in index order.
fn estimate<F>(key: StreamKey, iterations: usize, gamma: f64, normalizer: usize, draw: F) -> Result<LogDetEstimate>
where
    F: Fn(&mut RandomStream) -> Result<(CMatrix, usize)> + Sync,
{
    let per_trial: Vec<(f64, usize)> = (0..iterations)
        .into_par_iter()
        .map(|t| {
            let mut rng = key.stream(t as u64);
            let mut redraws = 0;
            loop {
                let outcome = draw(&mut rng).and_then(|(h, inner)| {
                    log_det_identity_plus_gram(&h, gamma).map(|v| (v, inner))
                });
                match outcome {
                    Ok((v, inner)) => return Ok((v / normalizer as f64, redraws + inner)),
                    Err(Error::NonFiniteLogDet)
                    | Err(Error::IllConditionedChannel { .. })
                    | Err(Error::TooManyRedraws { .. }) => {
                        redraws += 1;
                        if redraws > MAX_REDRAWS_PER_TRIAL {
                            return Err(Error::TooManyRedraws { trial: t, redraws });
                        }
                    }
                    Err(e) => return Err(e),
                }
            }
        })
        .collect::<Result<_>>()?;
    let values: Vec<f64> = per_trial.iter().map(|p| p.0).collect();
    let redraws = per_trial.iter().map(|p| p.1).sum();
    Ok(summarize(&values, redraws))
}

fn profile_estimate(profile: &VarianceProfile, cfg: &MonteCarloConfig, domain: StreamDomain, gamma: f64) -> Result<LogDetEstimate> {
    estimate(
        StreamKey::new(cfg.master_seed, domain),
        cfg.iterations,
        gamma,
        cfg.params.cluster_size(),
        |rng| Ok((sample_channel(profile, rng).matrix, 0)),
    )
}

fn result(cfg: &MonteCarloConfig, scheme: SchemeKind, value: f64, stderr: f64, redraws: usize) -> ThroughputResult {
    ThroughputResult {
        scheme,
        params: cfg.params,
        route: Route::MonteCarlo,
        value_nats: value,
        meta: RunMeta {
            iterations: Some(cfg.iterations),
            seed: Some(cfg.master_seed),
            stderr_nats: Some(stderr),
            redraws,
            ..RunMeta::default()
        },
    }
}

pub fn simulate_mjd(cfg: &MonteCarloConfig) -> Result<ThroughputResult> {
    cfg.validate()?;
    let profile = build_profile_mjd(&cfg.params);
    let e = profile_estimate(&profile, cfg, StreamDomain::Mjd, cfg.params.gamma())?;
    Ok(result(cfg, SchemeKind::GlobalMJD, e.mean, e.stderr, e.redraws))
}

/// Worst alignment diagnostics over all IA draws.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct AlignmentStats {
    pub draws: usize,
    /// Largest filtered-interference to useful power ratio.
    pub max_residual_ratio: f64,
    /// Largest `sigma_2 / sigma_1` of the aligned interference.
    pub max_rank_ratio: f64,
}

/// IA estimate plus the alignment diagnostics of every accepted draw.
pub fn simulate_ia_detailed(cfg: &MonteCarloConfig) -> Result<(ThroughputResult, AlignmentStats)> {
    cfg.validate()?;
    let params = cfg.params;
    let key = StreamKey::new(cfg.master_seed, StreamDomain::Ia);
    let per_trial: Vec<(f64, f64, f64, usize)> = (0..cfg.iterations)
        .into_par_iter()
        .map(|t| {
            let mut rng = key.stream(t as u64);
            let mut redraws = 0;
            loop {
                let attempt = sample_ia_system(&params, &mut rng).and_then(|d| {
                    let v = log_det_identity_plus_gram(&d.realization.matrix, params.gamma())?;
                    Ok((v, d))
                });
                match attempt {
                    Ok((v, d)) => {
                        return Ok((
                            v / params.cluster_size() as f64,
                            d.residual_ratio,
                            d.alignment_rank_ratio,
                            redraws + d.redraws,
                        ))
                    }
                    Err(Error::NonFiniteLogDet)
                    | Err(Error::IllConditionedChannel { .. })
                    | Err(Error::TooManyRedraws { .. }) => {
                        redraws += 1;
                        if redraws > MAX_REDRAWS_PER_TRIAL {
                            return Err(Error::TooManyRedraws { trial: t, redraws });
                        }
                    }
                    Err(e) => return Err(e),
                }
            }
        })
        .collect::<Result<_>>()?;
    let values: Vec<f64> = per_trial.iter().map(|p| p.0).collect();
    let redraws = per_trial.iter().map(|p| p.3).sum();
    let stats = AlignmentStats {
        draws: per_trial.len(),
        max_residual_ratio: per_trial.iter().map(|p| p.1).fold(0.0, f64::max),
        max_rank_ratio: per_trial.iter().map(|p| p.2).fold(0.0, f64::max),
    };
    let e = summarize(&values, redraws);
    Ok((result(cfg, SchemeKind::IA, e.mean, e.stderr, e.redraws), stats))
}

pub fn simulate_ia(cfg: &MonteCarloConfig) -> Result<ThroughputResult> {
    simulate_ia_detailed(cfg).map(|(r, _)| r)
}

/// Average of the two resource halves, each on its own streams.
pub fn simulate_rdma(cfg: &MonteCarloConfig) -> Result<ThroughputResult> {
    cfg.validate()?;
    let g = cfg.params.gamma();
    let active = build_profile_rdma(&cfg.params, RdmaPart::Active)?;
    let inactive = build_profile_rdma(&cfg.params, RdmaPart::Inactive)?;
    let e1 = profile_estimate(&active, cfg, StreamDomain::RdmaActive, g)?;
    let e2 = profile_estimate(&inactive, cfg, StreamDomain::RdmaInactive, g)?;
    let value = (e1.mean + e2.mean) / 2.0;
    let stderr = 0.5 * (e1.stderr.powi(2) + e2.stderr.powi(2)).sqrt();
    Ok(result(cfg, SchemeKind::RDMA, value, stderr, e1.redraws + e2.redraws))
}

/// Joint decoding minus the edge-interference term, on independent streams.
pub fn simulate_ci(cfg: &MonteCarloConfig) -> Result<ThroughputResult> {
    cfg.validate()?;
    let g = cfg.params.gamma();
    let full = profile_estimate(&build_profile_mjd(&cfg.params), cfg, StreamDomain::Mjd, g)?;
    let interference = profile_estimate(
        &build_profile_ci_interference(&cfg.params),
        cfg,
        StreamDomain::CiInterference,
        g,
    )?;
    let value = full.mean - interference.mean;
    let stderr = (full.stderr.powi(2) + interference.stderr.powi(2)).sqrt();
    Ok(result(cfg, SchemeKind::CI, value, stderr, full.redraws + interference.redraws))
}

pub fn simulate(cfg: &MonteCarloConfig) -> Result<ThroughputResult> {
    match cfg.scheme {
        SchemeKind::GlobalMJD => simulate_mjd(cfg),
        SchemeKind::IA => simulate_ia(cfg),
        SchemeKind::RDMA => simulate_rdma(cfg),
        SchemeKind::CI => simulate_ci(cfg),
    }
}

/// Pooled nonzero eigenvalues of `(1/n) H^H H` over `draws` draws of
/// `profile`.
pub fn empirical_spectrum(profile: &VarianceProfile, draws: usize, seed: u64) -> Vec<f64> {
    let n = profile
        .params()
        .map_or(1.0, |p| p.antennas() as f64);
    let key = StreamKey::new(seed, StreamDomain::Spectrum);
    let per_draw: Vec<Vec<f64>> = (0..draws)
        .into_par_iter()
        .map(|t| {
            let h = sample_channel(profile, &mut key.stream(t as u64)).matrix;
            hermitian_eigenvalues(&small_gram(&h)).into_iter().map(|l| l / n).collect()
        })
        .collect();
    per_draw.into_iter().flatten().collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::CMatrix;
    use num_complex::Complex64;
    use std::f64::consts::LN_2;

    fn realization(h: CMatrix) -> ChannelRealization {
        ChannelRealization {
            matrix: h,
            kind: crate::channel::ProfileKind::Custom,
            params: None,
        }
    }

    #[test]
    fn zero_power_gives_zero() {
        let cfg = MonteCarloConfig::new(SchemeKind::GlobalMJD, SystemParams::table_defaults()).with_iterations(5);
        let profile = build_profile_mjd(&cfg.params);
        let draws = (0..5).map(|t| sample_channel(&profile, &mut StreamKey::new(1, StreamDomain::Mjd).stream(t)));
        let e = ergodic_logdet(draws, 0.0, 4).unwrap();
        assert_eq!(e.mean, 0.0);
        assert_eq!(e.stderr, 0.0);
    }

    #[test]
    fn single_unit_entry() {
        let mut h = CMatrix::zeros(3, 4);
        h[(1, 2)] = Complex64::new(1.0, 0.0);
        let e = ergodic_logdet(vec![realization(h.clone()), realization(h)], 1.0, 4).unwrap();
        assert!((e.mean - LN_2 / 4.0).abs() < 1e-15);
    }

    #[test]
    fn mismatched_shapes_and_empty_input_rejected() {
        let a = realization(CMatrix::zeros(2, 3));
        let b = realization(CMatrix::zeros(3, 3));
        assert!(matches!(ergodic_logdet(vec![a, b], 1.0, 1), Err(Error::ShapeMismatch { .. })));
        assert!(matches!(ergodic_logdet(Vec::new(), 1.0, 1), Err(Error::Empty(_))));
    }

    #[test]
    fn ci_interference_vanishes_without_alpha() {
        let params = SystemParams::with_users(4, 2, 0.0, 100.0).unwrap();
        let cfg = MonteCarloConfig::new(SchemeKind::CI, params).with_iterations(20).with_seed(3);
        let ci = simulate_ci(&cfg).unwrap();
        let mjd = simulate_mjd(&cfg.with_iterations(20)).unwrap();
        // Same MJD streams, interference exactly zero per draw.
        assert_eq!(ci.value_nats, mjd.value_nats);
    }

    #[test]
    fn block_diagonal_without_alpha() {
        // With alpha = 0 each cell is an independent MAC; the cluster average
        // equals the average of per-cell log-dets.
        let params = SystemParams::with_users(3, 1, 0.0, 10.0).unwrap();
        let profile = build_profile_mjd(&params);
        let key = StreamKey::new(8, StreamDomain::Mjd);
        let h = sample_channel(&profile, &mut key.stream(0)).matrix;
        let whole = log_det_identity_plus_gram(&h, 10.0).unwrap();
        let parts: f64 = (0..3)
            .map(|c| {
                let block = h.view((2 * c, 2 * c), (2, 2)).into_owned();
                log_det_identity_plus_gram(&block, 10.0).unwrap()
            })
            .sum();
        assert!((whole - parts).abs() < 1e-10);
    }

    #[test]
    fn zero_iterations_rejected() {
        let cfg = MonteCarloConfig::new(SchemeKind::GlobalMJD, SystemParams::table_defaults()).with_iterations(0);
        assert!(simulate(&cfg).is_err());
    }
}
