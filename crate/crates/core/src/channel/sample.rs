use rand::Rng;

use crate::linalg::{complex_normal, CMatrix};
use crate::params::SystemParams;

use super::profile::{ProfileKind, VarianceProfile};

/// One random channel draw shaped by a variance profile.
#[derive(Debug, Clone)]
pub struct ChannelRealization {
    pub matrix: CMatrix,
    pub kind: ProfileKind,
    pub params: Option<SystemParams>,
}

impl ChannelRealization {
    pub fn rows(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn cols(&self) -> usize {
        self.matrix.ncols()
    }
}

/// Entrywise `profile[i][j] * CN(0, 1)`; structurally zero entries consume no
/// randomness.
pub fn sample_channel<R: Rng + ?Sized>(profile: &VarianceProfile, rng: &mut R) -> ChannelRealization {
    let (rows, cols) = (profile.rows(), profile.cols());
    let mut matrix = CMatrix::zeros(rows, cols);
    for j in 0..cols {
        for i in 0..rows {
            let s = profile.get(i, j);
            if s != 0.0 {
                matrix[(i, j)] = complex_normal(rng, s);
            }
        }
    }
    ChannelRealization {
        matrix,
        kind: profile.kind(),
        params: profile.params().copied(),
    }
}
