use num_complex::Complex64;
use std::f64::consts::PI;

/// Shannon transform `E[ln(1 + g x)]` of the Marchenko-Pastur law with
/// ratio `beta` and unit mean, in nats per dimension.
///
/// This is the per-column limit of `ln det(I + g W^H W) / T` for an `N x T`
/// matrix `W` with i.i.d. entries of variance `1 / N` and `T / N -> beta`.
pub fn mp_shannon_transform(gamma: f64, beta: f64) -> f64 {
    if gamma == 0.0 {
        return 0.0;
    }
    let sb = beta.sqrt();
    let a = gamma * (1.0 + sb).powi(2) + 1.0;
    let b = gamma * (1.0 - sb).powi(2) + 1.0;
    // (sqrt a - sqrt b)^2 without cancellation.
    let phi = (4.0 * gamma * sb / (a.sqrt() + b.sqrt())).powi(2);
    (1.0 + gamma - phi / 4.0).ln() + (1.0 + gamma * beta - phi / 4.0).ln() / beta
        - phi / (4.0 * beta * gamma)
}

/// Mass at zero of the Marchenko-Pastur law with ratio `beta`.
pub fn mp_atom(beta: f64) -> f64 {
    (1.0 - 1.0 / beta).max(0.0)
}

/// Absolutely continuous part of the Marchenko-Pastur density with ratio
/// `beta`, scaled so that the eigenvalues are multiplied by `q`.
pub fn mp_density(x: f64, beta: f64, q: f64) -> f64 {
    let t = x / q;
    let lo = (1.0 - beta.sqrt()).powi(2);
    let hi = (1.0 + beta.sqrt()).powi(2);
    if t <= lo || t >= hi || t <= 0.0 {
        return 0.0;
    }
    ((t - lo) * (hi - t)).sqrt() / (2.0 * PI * beta * t) / q
}

/// Closed-form Stieltjes transform `int f(x) / (x - z) dx` of the scaled law,
/// for `Im z > 0`.
pub fn mp_stieltjes(z: Complex64, beta: f64, q: f64) -> Complex64 {
    // beta z s^2 + (z + beta - 1) s + 1 = 0 in unit scale.
    let w = z / q;
    let b = w + beta - 1.0;
    let disc = (b * b - 4.0 * beta * w).sqrt();
    let r1 = (-b + disc) / (2.0 * beta * w);
    let r2 = (-b - disc) / (2.0 * beta * w);
    let s = if r1.im >= r2.im { r1 } else { r2 };
    s / q
}
