use num_complex::Complex64;

use crate::error::{Error, Result};

use super::rtransform::{RTransformSum, RTransformTerm};

/// Largest accepted change of `s` between continuation steps, relative to
/// `|s|`. Larger jumps usually mean Newton switched sheets.
const MAX_RELATIVE_STEP: f64 = 0.3;

/// Tuning of the continuation solver.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolverSettings {
    /// Starting height of the path; `None` picks one from the support bound.
    pub y_start: Option<f64>,
    /// Default shrink factor for `Im z` between continuation steps.
    pub ratio: f64,
    pub newton_tol: f64,
    pub max_newton: usize,
    /// Maximum number of continuation steps, including retries.
    pub max_steps: usize,
}

impl Default for SolverSettings {
    fn default() -> Self {
        Self {
            y_start: None,
            ratio: 0.8,
            newton_tol: 1e-13,
            max_newton: 60,
            max_steps: 2000,
        }
    }
}

/// Stieltjes transform `s = int f(t) / (t - z) dt` of the sum at `z`,
/// together with the per-term subordination points `z_i`.
#[derive(Debug, Clone, PartialEq)]
pub struct StieltjesPoint {
    pub z: Complex64,
    pub s: Complex64,
    pub subordination: Vec<Complex64>,
}

impl StieltjesPoint {
    /// `Im s / pi`, clipped at zero.
    pub fn density(&self) -> f64 {
        (self.s.im / std::f64::consts::PI).max(0.0)
    }
}

/// Residual and partial derivatives `(F_i, dF_i/ds, dF_i/dz_i)` of one term's
/// subordination equation `z_i = R_i(-s) - 1/s`, cleared of denominators.
fn term_equation(term: &RTransformTerm, s: Complex64, zi: Complex64) -> (Complex64, Complex64, Complex64) {
    let (k, beta, q) = term.parts();
    let lin = q * (beta * (2.0 - k) - k);
    let a = s * (k + beta * q * s);
    if k == 1.0 {
        // The quadratic factors as z_i (a z_i + b); drop the spurious z_i = 0.
        let b = 1.0 + s * lin;
        let f = a * zi + b;
        let ds = (1.0 + 2.0 * beta * q * s) * zi + lin;
        (f, ds, a)
    } else {
        let b = k + s * lin;
        let c = q * (1.0 - k) * (beta - k);
        let f = (a * zi + b) * zi + c;
        let ds = (k + 2.0 * beta * q * s) * zi * zi + lin * zi;
        (f, ds, 2.0 * a * zi + b)
    }
}

struct State {
    s: Complex64,
    zs: Vec<Complex64>,
}

fn max_norm(xs: impl Iterator<Item = Complex64>) -> f64 {
    xs.map(|v| v.norm()).fold(0.0, f64::max)
}

/// Newton on the arrow-shaped system; the `z_i` are eliminated so each
/// iteration costs O(m).
fn newton(sum: &RTransformSum, z: Complex64, state: &mut State, settings: &SolverSettings) -> bool {
    let terms = sum.terms();
    let m = terms.len() as f64;
    let mut f = vec![Complex64::new(0.0, 0.0); terms.len()];
    let mut d = f.clone();
    let mut e = f.clone();
    for _ in 0..settings.max_newton {
        let s = state.s;
        let mut sum_z = Complex64::new(0.0, 0.0);
        for (i, term) in terms.iter().enumerate() {
            let (fi, di, ei) = term_equation(term, s, state.zs[i]);
            f[i] = fi;
            d[i] = di;
            e[i] = ei;
            sum_z += state.zs[i];
        }
        let f0 = s * z - s * sum_z - (m - 1.0);
        let g = z - sum_z;

        let mut num = -f0;
        let mut den = g;
        for i in 0..terms.len() {
            if e[i].norm() == 0.0 || !e[i].is_finite() {
                return false;
            }
            num -= s * f[i] / e[i];
            den += s * d[i] / e[i];
        }
        if den.norm() == 0.0 {
            return false;
        }
        let ds = num / den;
        let mut step = ds.norm();
        state.s += ds;
        for i in 0..terms.len() {
            let dz = (-f[i] - d[i] * ds) / e[i];
            step = step.max(dz.norm());
            state.zs[i] += dz;
        }
        if !state.s.is_finite() || state.zs.iter().any(|v| !v.is_finite()) {
            return false;
        }
        let scale = 1.0 + state.s.norm().max(max_norm(state.zs.iter().copied()));
        if step <= settings.newton_tol * scale {
            return true;
        }
    }
    false
}

fn is_physical(z: Complex64, state: &State) -> bool {
    let slack = 1e-9 * (1.0 + z.norm());
    state.s.im > 0.0 && state.zs.iter().all(|zi| zi.im >= z.im - slack)
}

/// Solves for the Stieltjes transform of the sum at `z` (`Im z > 0`).
///
/// The path starts high above the real axis where `s ~ -1/z`, then lowers
/// `Im z` geometrically, re-solving at each height from the previous
/// solution. A step whose Newton iteration fails or leaves the physical
/// sheet is retried with a smaller height change.
pub fn solve_stieltjes(sum: &RTransformSum, z: Complex64, settings: &SolverSettings) -> Result<StieltjesPoint> {
    let x = z.re;
    let y_target = z.im;
    if !(y_target > 0.0) || !x.is_finite() {
        return Err(Error::InvalidParams(format!("evaluation point {z} must lie in the upper half plane")));
    }
    let y0 = settings
        .y_start
        .unwrap_or_else(|| 4.0 * (sum.support_bound() + x.abs()) + 1.0)
        .max(y_target);

    let z0 = Complex64::new(x, y0);
    let s0 = -1.0 / z0 - sum.mean() / (z0 * z0);
    let mut state = State {
        s: s0,
        zs: sum.terms().iter().map(|t| z0 + t.mean()).collect(),
    };
    if !newton(sum, z0, &mut state, settings) || !is_physical(z0, &state) {
        return Err(Error::SolverDiverged { x });
    }

    let mut y = y0;
    let mut ratio = settings.ratio;
    let mut steps = 0;
    while y > y_target {
        steps += 1;
        if steps > settings.max_steps {
            return Err(Error::SolverDiverged { x });
        }
        let y_next = (y * ratio).max(y_target);
        let zn = Complex64::new(x, y_next);
        let mut trial = State {
            s: state.s,
            zs: state.zs.clone(),
        };
        let ok = newton(sum, zn, &mut trial, settings)
            && is_physical(zn, &trial)
            && (trial.s - state.s).norm() <= MAX_RELATIVE_STEP * state.s.norm();
        if ok {
            state = trial;
            y = y_next;
            ratio = (ratio * ratio).max(settings.ratio);
        } else {
            ratio = ratio.sqrt();
            if ratio > 1.0 - 1e-6 {
                return Err(Error::SolverDiverged { x });
            }
        }
    }

    if state.s.im <= 1e-14 {
        return Err(Error::NoPhysicalRoot { x });
    }
    Ok(StieltjesPoint {
        z,
        s: state.s,
        subordination: state.zs,
    })
}

/// Stieltjes transform at `x + iy`.
///
/// With a `seed_root` (typically the value at a neighbouring abscissa) a
/// single Newton solve is tried first and kept only if it lands on the
/// physical sheet close to the seed; otherwise the full continuation runs.
pub fn stieltjes_from_r(sum: &RTransformSum, x: f64, y: f64, seed_root: Option<Complex64>) -> Result<Complex64> {
    let z = Complex64::new(x, y);
    let settings = SolverSettings::default();
    if let Some(seed) = seed_root.filter(|s| s.im > 0.0 && s.is_finite()) {
        let zs: Option<Vec<Complex64>> = sum
            .terms()
            .iter()
            .map(|t| t.eval(-seed).ok().map(|r| r - 1.0 / seed))
            .collect();
        if let Some(zs) = zs {
            let mut state = State { s: seed, zs };
            if newton(sum, z, &mut state, &settings)
                && is_physical(z, &state)
                && state.s.im > 1e-14
                && (state.s - seed).norm() <= MAX_RELATIVE_STEP * seed.norm()
            {
                return Ok(state.s);
            }
        }
    }
    solve_stieltjes(sum, z, &settings).map(|p| p.s)
}
