use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::{condition_number, CMatrix, CVector};

/// Cross channels above this condition number are redrawn.
pub const CONDITION_LIMIT: f64 = 1e8;

/// Common direction every aligned stream lands on at the neighbouring station.
pub fn reference_vector(n: usize) -> CVector {
    CVector::from_element(n, Complex64::new(1.0, 0.0))
}

/// `(n-1) x n` matrix with orthonormal rows spanning the complement of `v`.
pub fn zero_forcing_filter(v: &CVector) -> CMatrix {
    let n = v.len();
    let mut stacked = CMatrix::zeros(n, n + 1);
    stacked.set_column(0, v);
    for i in 0..n {
        stacked[(i, i + 1)] = Complex64::new(1.0, 0.0);
    }
    let q = stacked.qr().q();
    q.columns(1, n - 1).adjoint()
}

/// Transmit precoders aligning the edge group's interference onto `reference`.
#[derive(Debug, Clone)]
pub struct IAPrecodingSet {
    pub precoders: Vec<CVector>,
    pub reference: CVector,
    pub filter: CMatrix,
}

impl IAPrecodingSet {
    /// `sum_j G_j u_j`: what the neighbouring station receives from the group.
    pub fn aligned_interference(&self, cross: &[CMatrix]) -> CVector {
        let n = self.reference.len();
        cross
            .iter()
            .zip(&self.precoders)
            .fold(CVector::zeros(n), |acc, (g, u)| acc + g * u)
    }
}

/// `u_j = v_j G_j^{-1} v` with `||u_j||^2 = n`, so each precoded stream carries
/// the same power as an unprecoded `n`-antenna terminal.
///
/// `cross[j]` is the `n x n` channel from terminal `j` to the station that has
/// to null the interference.
pub fn build_ia_precoding(cross: &[CMatrix], reference: &CVector) -> Result<IAPrecodingSet> {
    let n = reference.len();
    if n < 2 {
        return Err(Error::InvalidParams(
            "alignment needs at least two antennas".into(),
        ));
    }
    let mut precoders = Vec::with_capacity(cross.len());
    for (index, g) in cross.iter().enumerate() {
        if g.shape() != (n, n) {
            return Err(Error::ShapeMismatch {
                expected: (n, n),
                got: g.shape(),
            });
        }
        let condition = condition_number(g);
        if !(condition <= CONDITION_LIMIT) {
            return Err(Error::IllConditionedChannel {
                index,
                condition,
                limit: CONDITION_LIMIT,
            });
        }
        let direction = g.clone().lu().solve(reference).ok_or(Error::IllConditionedChannel {
            index,
            condition,
            limit: CONDITION_LIMIT,
        })?;
        let scale = (n as f64).sqrt() / direction.norm();
        precoders.push(direction * Complex64::new(scale, 0.0));
    }
    Ok(IAPrecodingSet {
        precoders,
        reference: reference.clone(),
        filter: zero_forcing_filter(reference),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::gaussian_block;
    use crate::rng::{StreamDomain, StreamKey};

    #[test]
    fn filter_has_orthonormal_rows_and_nulls_reference() {
        for n in 2..8 {
            let v = reference_vector(n);
            let q = zero_forcing_filter(&v);
            assert_eq!(q.shape(), (n - 1, n));
            assert!((&q * &v).norm() < 1e-12);
            let gram = &q * q.adjoint();
            assert!((gram - CMatrix::identity(n - 1, n - 1)).norm() < 1e-12);
        }
    }

    #[test]
    fn aligned_interference_is_rank_one_and_filtered_out() {
        let n = 6;
        let mut rng = StreamKey::new(9, StreamDomain::Ia).stream(0);
        let cross: Vec<CMatrix> = (0..5).map(|_| gaussian_block(&mut rng, n, n, 1.0)).collect();
        let v = reference_vector(n);
        let set = build_ia_precoding(&cross, &v).unwrap();
        for u in &set.precoders {
            assert!((u.norm_squared() - n as f64).abs() < 1e-9);
        }
        // Every G_j u_j is a multiple of v.
        let stacked = CMatrix::from_columns(
            &cross
                .iter()
                .zip(&set.precoders)
                .map(|(g, u)| g * u)
                .collect::<Vec<_>>(),
        );
        let sv = stacked.singular_values();
        assert!(sv[1] / sv[0] < 1e-10);
        let residual = (&set.filter * set.aligned_interference(&cross)).norm_squared();
        assert!(residual < 1e-18);
    }

    #[test]
    fn singular_cross_channel_is_rejected() {
        let n = 3;
        let g = CMatrix::from_element(n, n, Complex64::new(1.0, 0.0));
        let err = build_ia_precoding(&[g], &reference_vector(n)).unwrap_err();
        assert!(matches!(err, Error::IllConditionedChannel { index: 0, .. }));
    }
}
