use num_complex::Complex64;
use rand::Rng;

use crate::error::{Error, Result};
use crate::linalg::{gaussian_block, CMatrix};
use crate::params::SystemParams;

use super::precoding::{build_ia_precoding, reference_vector, IAPrecodingSet};
use super::profile::ProfileKind;
use super::sample::ChannelRealization;

/// Cross-channel redraws allowed per terminal before giving up.
pub const MAX_CROSS_REDRAWS: usize = 64;

/// One draw of the equivalent IA channel plus alignment diagnostics.
#[derive(Debug, Clone)]
pub struct IaSystemDraw {
    pub realization: ChannelRealization,
    pub precoding: IAPrecodingSet,
    /// Filtered leftover interference power over useful power of the aligned group.
    pub residual_ratio: f64,
    /// `sigma_2 / sigma_1` of the stacked aligned interference columns.
    pub alignment_rank_ratio: f64,
    pub redraws: usize,
}

fn draw_cross<R: Rng + ?Sized>(rng: &mut R, n: usize, index: usize) -> Result<(CMatrix, usize)> {
    let v = reference_vector(n);
    for attempt in 0..=MAX_CROSS_REDRAWS {
        let g = gaussian_block(rng, n, n, 1.0);
        match build_ia_precoding(std::slice::from_ref(&g), &v) {
            Ok(_) => return Ok((g, attempt)),
            Err(Error::IllConditionedChannel { .. }) => continue,
            Err(e) => return Err(e),
        }
    }
    Err(Error::TooManyRedraws {
        trial: index,
        redraws: MAX_CROSS_REDRAWS + 1,
    })
}

/// Draws the `(Mn - 1) x ((M-1)Kn + K)` equivalent channel.
///
/// The first group precodes so its leakage into the previous cluster lands on
/// the all-ones direction, which that cluster's last station filters out with
/// an `(n-1) x n` projection. Every other group transmits unprecoded.
pub fn sample_ia_system<R: Rng + ?Sized>(params: &SystemParams, rng: &mut R) -> Result<IaSystemDraw> {
    let (m, k, n, alpha) = (
        params.cluster_size(),
        params.users_per_cell(),
        params.antennas(),
        params.alpha(),
    );
    if m < 3 {
        return Err(Error::ClusterTooSmall(m));
    }
    let kn = k * n;
    let mut redraws = 0;
    let mut cross = Vec::with_capacity(k);
    let mut direct = Vec::with_capacity(k);
    for j in 0..k {
        let (g, extra) = draw_cross(rng, n, j)?;
        redraws += extra;
        cross.push(g);
        direct.push(gaussian_block(rng, n, n, 1.0));
    }
    let v = reference_vector(n);
    let precoding = build_ia_precoding(&cross, &v)?;

    let rows = m * n - 1;
    let cols = (m - 1) * kn + k;
    let mut h = CMatrix::zeros(rows, cols);
    let scale = Complex64::new(alpha, 0.0);

    let mut useful = 0.0;
    for (j, (g, u)) in direct.iter().zip(&precoding.precoders).enumerate() {
        let column = g * u;
        useful += column.norm_squared();
        h.view_mut((0, j), (n, 1)).copy_from(&column);
    }

    let lead = gaussian_block(rng, n, kn, 1.0) * scale;
    h.view_mut((0, group_offset(k, kn, 1)), (n, kn)).copy_from(&lead);

    // Interior stations: own group at full gain, next group at alpha.
    for b in 1..m - 1 {
        let own = gaussian_block(rng, n, kn, 1.0);
        h.view_mut((b * n, group_offset(k, kn, b)), (n, kn))
            .copy_from(&own);
        let next = gaussian_block(rng, n, kn, 1.0) * scale;
        h.view_mut((b * n, group_offset(k, kn, b + 1)), (n, kn))
            .copy_from(&next);
    }

    let last = gaussian_block(rng, n, kn, 1.0);
    let filtered = &precoding.filter * last;
    h.view_mut(((m - 1) * n, group_offset(k, kn, m - 1)), (n - 1, kn))
        .copy_from(&filtered);

    let leaked = precoding.aligned_interference(&cross) * scale;
    let residual = (&precoding.filter * &leaked).norm_squared();
    let residual_ratio = if useful > 0.0 { residual / useful } else { 0.0 };

    let stacked = CMatrix::from_columns(
        &cross
            .iter()
            .zip(&precoding.precoders)
            .map(|(g, u)| g * u)
            .collect::<Vec<_>>(),
    );
    let alignment_rank_ratio = if k > 1 {
        let sv = stacked.singular_values();
        let mut sorted: Vec<f64> = sv.iter().copied().collect();
        sorted.sort_by(|a, b| b.total_cmp(a));
        sorted[1] / sorted[0]
    } else {
        0.0
    };

    Ok(IaSystemDraw {
        realization: ChannelRealization {
            matrix: h,
            kind: ProfileKind::Ia,
            params: Some(*params),
        },
        precoding,
        residual_ratio,
        alignment_rank_ratio,
        redraws,
    })
}

/// Column offset of group `g >= 1` (0-based) in the equivalent channel.
fn group_offset(k: usize, kn: usize, g: usize) -> usize {
    k + (g - 1) * kn
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channel::build_profile_ia;
    use crate::rng::{StreamDomain, StreamKey};

    #[test]
    fn support_matches_profile() {
        let params = SystemParams::table_defaults();
        let profile = build_profile_ia(&params).unwrap();
        let mut rng = StreamKey::new(3, StreamDomain::Ia).stream(0);
        let draw = sample_ia_system(&params, &mut rng).unwrap();
        let h = &draw.realization.matrix;
        assert_eq!(h.shape(), (profile.rows(), profile.cols()));
        for i in 0..h.nrows() {
            for j in 0..h.ncols() {
                if profile.get(i, j) == 0.0 {
                    assert_eq!(h[(i, j)].norm(), 0.0, "({i},{j})");
                } else {
                    assert!(h[(i, j)].norm() > 0.0, "({i},{j})");
                }
            }
        }
    }

    #[test]
    fn alignment_holds() {
        let params = SystemParams::table_defaults();
        let key = StreamKey::new(11, StreamDomain::Ia);
        for t in 0..20 {
            let draw = sample_ia_system(&params, &mut key.stream(t)).unwrap();
            assert!(draw.residual_ratio * params.gamma() < 1e-10);
            assert!(draw.alignment_rank_ratio < 1e-10);
            for u in &draw.precoding.precoders {
                let p = u.norm_squared() * params.gamma();
                assert!((p / params.gamma_tilde() - 1.0).abs() < 1e-9);
            }
        }
    }
}
