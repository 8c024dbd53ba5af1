//! Dense complex helpers shared by the channel model and the estimators.

use nalgebra::{Cholesky, DMatrix, DVector};
use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;
use std::f64::consts::FRAC_1_SQRT_2;

use crate::error::{Error, Result};

pub type CMatrix = DMatrix<Complex64>;
pub type CVector = DVector<Complex64>;

/// One draw of CN(0, std^2): real and imaginary parts are N(0, std^2 / 2).
pub fn complex_normal<R: Rng + ?Sized>(rng: &mut R, std: f64) -> Complex64 {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    Complex64::new(re, im) * (std * FRAC_1_SQRT_2)
}

/// `rows x cols` block of i.i.d. CN(0, std^2) entries, filled column-major.
pub fn gaussian_block<R: Rng + ?Sized>(rng: &mut R, rows: usize, cols: usize, std: f64) -> CMatrix {
    DMatrix::from_fn(rows, cols, |_, _| complex_normal(rng, std))
}

fn split(h: &CMatrix) -> (DMatrix<f64>, DMatrix<f64>) {
    (h.map(|z| z.re), h.map(|z| z.im))
}

/// Gram matrix of the smaller side: `H H^H` when `H` is wide, `H^H H` when tall.
///
/// Products are formed in real arithmetic so the blocked real kernels do
/// the heavy lifting.
pub fn small_gram(h: &CMatrix) -> CMatrix {
    let (re, im) = split(h);
    let (g_re, g_im) = if h.nrows() <= h.ncols() {
        (
            &re * re.transpose() + &im * im.transpose(),
            &im * re.transpose() - &re * im.transpose(),
        )
    } else {
        (
            re.transpose() * &re + im.transpose() * &im,
            re.transpose() * &im - im.transpose() * &re,
        )
    };
    DMatrix::from_fn(g_re.nrows(), g_re.ncols(), |i, j| {
        Complex64::new(g_re[(i, j)], g_im[(i, j)])
    })
}

/// `log det(I + gamma H H^H)` in nats through a Cholesky factor.
///
/// The determinant identity `det(I + AB) = det(I + BA)` lets the smaller
/// Gram be factored.
pub fn log_det_identity_plus_gram(h: &CMatrix, gamma: f64) -> Result<f64> {
    if gamma == 0.0 || h.is_empty() {
        return Ok(0.0);
    }
    let gram = small_gram(h);
    let dim = gram.nrows();
    let mut a = gram * Complex64::new(gamma, 0.0);
    for i in 0..dim {
        // Hermitian part only; the factorization reads the lower triangle.
        a[(i, i)] = Complex64::new(1.0 + a[(i, i)].re, 0.0);
    }
    let chol = Cholesky::new(a).ok_or(Error::NonFiniteLogDet)?;
    let l = chol.l_dirty();
    let mut acc = 0.0;
    for i in 0..dim {
        let d = l[(i, i)].re;
        if !(d > 0.0 && d.is_finite()) {
            return Err(Error::NonFiniteLogDet);
        }
        acc += d.ln();
    }
    let value = 2.0 * acc;
    if value.is_finite() {
        Ok(value)
    } else {
        Err(Error::NonFiniteLogDet)
    }
}

/// Ratio of extreme singular values; infinite for a singular matrix.
pub fn condition_number(a: &CMatrix) -> f64 {
    let sv = a.clone().singular_values();
    let max = sv.iter().cloned().fold(0.0, f64::max);
    let min = sv.iter().cloned().fold(f64::INFINITY, f64::min);
    if min == 0.0 {
        f64::INFINITY
    } else {
        max / min
    }
}

/// Eigenvalues of a Hermitian matrix, ascending.
pub fn hermitian_eigenvalues(a: &CMatrix) -> Vec<f64> {
    let mut ev: Vec<f64> = a.clone().symmetric_eigenvalues().iter().cloned().collect();
    ev.sort_by(|x, y| x.total_cmp(y));
    ev
}
