use num_complex::Complex64;
use std::f64::consts::PI;
use rayon::prelude::*;

use crate::error::{Error, Result};

use super::rtransform::RTransformSum;
use super::stieltjes::{solve_stieltjes, SolverSettings};

pub const DEFAULT_GRID_POINTS: usize = 2000;

/// Height above the real axis at which densities are read off.
pub const DEFAULT_ETA: f64 = 1e-6;

/// Order in which grid points are solved. Each point is solved on its own
/// continuation path, so the order never changes the values.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum SweepOrder {
    #[default]
    Ascending,
    Descending,
}

/// Uniform grid `x_i = i * x_max / (points - 1)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridSpec {
    pub points: usize,
    pub x_max: f64,
    pub eta: f64,
    pub order: SweepOrder,
    pub solver: SolverSettings,
}

impl GridSpec {
    pub fn new(points: usize, x_max: f64) -> Self {
        Self {
            points,
            x_max,
            eta: DEFAULT_ETA,
            order: SweepOrder::Ascending,
            solver: SolverSettings::default(),
        }
    }

    /// Default grid covering the support of `sum` with a 5% margin.
    pub fn for_sum(sum: &RTransformSum) -> Self {
        Self::new(DEFAULT_GRID_POINTS, 1.05 * sum.support_bound())
    }

    pub fn with_points(mut self, points: usize) -> Self {
        self.points = points;
        self
    }

    pub fn with_order(mut self, order: SweepOrder) -> Self {
        self.order = order;
        self
    }

    pub fn step(&self) -> f64 {
        self.x_max / (self.points - 1) as f64
    }

    pub fn abscissae(&self) -> Vec<f64> {
        let h = self.step();
        (0..self.points).map(|i| i as f64 * h).collect()
    }
}

/// Sampled density of a law on `[0, x_max]` with a possible atom at zero.
///
/// `values[0]` belongs to the origin, where the continuous part is not
/// resolved; quadrature never reads it.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralDensity {
    pub grid: Vec<f64>,
    pub values: Vec<f64>,
    pub zero_mass: f64,
    pub continuous_mass: f64,
    cumulative: Vec<f64>,
}

impl SpectralDensity {
    pub fn step(&self) -> f64 {
        self.grid[1] - self.grid[0]
    }

    pub fn total_mass(&self) -> f64 {
        self.zero_mass + self.continuous_mass
    }

    /// Distribution function including the atom.
    pub fn cdf(&self, x: f64) -> f64 {
        if x < 0.0 {
            return 0.0;
        }
        self.zero_mass + self.continuous_cdf(x) * self.continuous_mass
    }

    /// Distribution function of the continuous part alone, normalised to 1.
    pub fn continuous_cdf(&self, x: f64) -> f64 {
        let last = *self.cumulative.last().unwrap_or(&0.0);
        if x <= 0.0 || last <= 0.0 {
            return 0.0;
        }
        let h = self.step();
        let pos = x / h;
        let i = pos.floor() as usize;
        if i + 1 >= self.grid.len() {
            return 1.0;
        }
        let t = pos - i as f64;
        let c = self.cumulative[i] * (1.0 - t) + self.cumulative[i + 1] * t;
        (c / last).clamp(0.0, 1.0)
    }

    /// Kolmogorov-Smirnov distance between the empirical law of `samples`
    /// and the continuous part of this density.
    pub fn ks_distance(&self, samples: &[f64]) -> f64 {
        let mut sorted: Vec<f64> = samples.to_vec();
        sorted.sort_by(f64::total_cmp);
        let n = sorted.len() as f64;
        sorted
            .iter()
            .enumerate()
            .map(|(i, &x)| {
                let c = self.continuous_cdf(x);
                (c - i as f64 / n).abs().max(((i + 1) as f64 / n - c).abs())
            })
            .fold(0.0, f64::max)
    }

    /// First moment of the law.
    pub fn mean(&self) -> f64 {
        self.integrate(|x| x)
    }

    /// `int w(x) f(x) dx` over the continuous part.
    pub fn integrate(&self, w: impl Fn(f64) -> f64) -> f64 {
        weighted_integral(&self.grid, &self.values, &w)
    }
}

// 8-point Gauss-Legendre on [-1, 1].
const GL_NODES: [f64; 4] = [
    0.183_434_642_495_649_8,
    0.525_532_409_916_329,
    0.796_666_477_413_626_7,
    0.960_289_856_497_536_3,
];
const GL_WEIGHTS: [f64; 4] = [
    0.362_683_783_378_362,
    0.313_706_645_877_887_3,
    0.222_381_034_453_374_5,
    0.101_228_536_290_376_3,
];

fn gauss(a: f64, b: f64, f: impl Fn(f64) -> f64) -> f64 {
    let mid = (a + b) / 2.0;
    let half = (b - a) / 2.0;
    GL_NODES
        .iter()
        .zip(&GL_WEIGHTS)
        .map(|(t, wt)| wt * (f(mid - half * t) + f(mid + half * t)))
        .sum::<f64>()
        * half
}

/// Square-root edge model `f(x)^2 ~ Q(x)` through three consecutive samples
/// starting at `x0`; `Q` is returned in the local coordinate `u = (x - x0) / h`.
fn edge_fit(f: [f64; 3]) -> [f64; 3] {
    let [f0, f1, f2] = f.map(|v| v * v);
    [f0, (-3.0 * f0 + 4.0 * f1 - f2) / 2.0, (f0 - 2.0 * f1 + f2) / 2.0]
}

/// Root of `c0 + c1 u + c2 u^2` inside `[lo, hi]`, if any.
fn root_in(c: [f64; 3], lo: f64, hi: f64) -> Option<f64> {
    let [c0, c1, c2] = c;
    let mut roots = Vec::with_capacity(2);
    if c2.abs() < 1e-14 * (c0.abs() + c1.abs()) {
        if c1 != 0.0 {
            roots.push(-c0 / c1);
        }
    } else {
        let disc = c1 * c1 - 4.0 * c2 * c0;
        if disc >= 0.0 {
            let q = -0.5 * (c1 + c1.signum() * disc.sqrt());
            roots.push(q / c2);
            if q != 0.0 {
                roots.push(c0 / q);
            }
        }
    }
    roots.into_iter().find(|u| (lo..=hi).contains(u))
}

/// Integral of `sqrt(Q) w` from the edge at local coordinate `edge` to the
/// sample at local coordinate `inner`, substituting `x = edge + t^2` so the
/// square root becomes smooth.
fn edge_integral(x0: f64, h: f64, q: [f64; 3], edge: f64, inner: f64, w: &dyn Fn(f64) -> f64) -> f64 {
    let sign = (inner - edge).signum();
    let span = (inner - edge).abs().sqrt();
    gauss(0.0, span, |t| {
        let u = edge + sign * t * t;
        let fq = (q[0] + q[1] * u + q[2] * u * u).max(0.0).sqrt();
        fq * w(x0 + u * h) * 2.0 * t * h
    })
}

/// `int w f` for a density sampled on a uniform grid starting at 0.
///
/// Each run of positive samples is integrated separately. Runs touching the
/// origin use the power-law first panel of [`integrate_on_grid`]; interior
/// support edges use a local square-root model; the bulk is Simpson.
fn weighted_integral(grid: &[f64], values: &[f64], w: &dyn Fn(f64) -> f64) -> f64 {
    let n = values.len();
    if n < 4 {
        return 0.0;
    }
    let h = grid[1] - grid[0];
    let peak = values.iter().skip(1).cloned().fold(0.0, f64::max);
    if peak <= 0.0 {
        return 0.0;
    }
    // Off-support samples carry an O(eta) smoothing tail; anything this far
    // below the peak is treated as outside the support.
    let floor = 1e-3 * peak;
    let product = |i: usize| w(grid[i]) * values[i];

    let mut total = 0.0;
    let mut i = 1;
    while i < n {
        if values[i] <= floor {
            i += 1;
            continue;
        }
        let left = i;
        let mut right = i;
        while right + 1 < n && values[right + 1] > floor {
            right += 1;
        }
        i = right + 1;

        let long = right >= left + 4;
        let mut start = left;
        let mut end = right;
        if left == 1 {
            let head: Vec<f64> = (0..3.min(n)).map(|j| if j == 0 { 0.0 } else { product(j) }).collect();
            total += first_panel(&head, h);
        } else if long {
            let q = edge_fit([values[left], values[left + 1], values[left + 2]]);
            match root_in(q, -2.0, 0.0) {
                Some(edge) => {
                    total += edge_integral(grid[left], h, q, edge, 2.0, w);
                    start = left + 2;
                }
                None => total += h * product(left) / 2.0,
            }
        } else {
            total += h * product(left) / 2.0;
        }
        if right + 1 < n {
            if long && end >= start + 2 {
                let q = edge_fit([values[right - 2], values[right - 1], values[right]]);
                match root_in(q, 2.0, 4.0) {
                    Some(edge) => {
                        total += edge_integral(grid[right - 2], h, q, edge, 0.0, w);
                        end = right - 2;
                    }
                    None => total += h * product(right) / 2.0,
                }
            } else {
                total += h * product(right) / 2.0;
            }
        }
        if end > start {
            let bulk: Vec<f64> = (start..=end).map(product).collect();
            total += simpson_tail(&bulk, h);
        }
    }
    total
}

/// Integral over `[0, (len - 1) h]` of a function sampled on a uniform grid.
///
/// The first panel assumes a power law `c x^p` fitted through the first two
/// interior samples, which handles inverse square-root edges and integrable
/// blow-ups at the origin; the rest is composite Simpson, closed with the
/// three-eighths rule when the interval count is odd. `values[0]` is unused.
pub fn integrate_on_grid(values: &[f64], h: f64) -> f64 {
    if values.len() < 2 {
        return 0.0;
    }
    first_panel(values, h) + simpson_tail(&values[1..], h)
}

fn first_panel(values: &[f64], h: f64) -> f64 {
    let f1 = values[1];
    match values.get(2) {
        Some(&f2) if f1 > 0.0 && f2 > 0.0 => {
            let p = (f2 / f1).log2().clamp(-0.95, 5.0);
            f1 * h / (p + 1.0)
        }
        _ => f1 * h / 2.0,
    }
}

fn simpson_tail(f: &[f64], h: f64) -> f64 {
    let intervals = f.len().saturating_sub(1);
    match intervals {
        0 => 0.0,
        1 => h * (f[0] + f[1]) / 2.0,
        2 => h / 3.0 * (f[0] + 4.0 * f[1] + f[2]),
        3 => three_eighths(f, h),
        _ if intervals % 2 == 0 => simpson_even(f, h),
        _ => {
            let split = intervals - 3;
            simpson_even(&f[..=split], h) + three_eighths(&f[split..], h)
        }
    }
}

fn simpson_even(f: &[f64], h: f64) -> f64 {
    let last = f.len() - 1;
    let mut acc = f[0] + f[last];
    for (i, v) in f.iter().enumerate().take(last).skip(1) {
        acc += if i % 2 == 1 { 4.0 * v } else { 2.0 * v };
    }
    acc * h / 3.0
}

fn three_eighths(f: &[f64], h: f64) -> f64 {
    3.0 * h / 8.0 * (f[0] + 3.0 * f[1] + 3.0 * f[2] + f[3])
}

fn cumulative(values: &[f64], h: f64) -> Vec<f64> {
    let mut out = vec![0.0; values.len()];
    if values.len() < 2 {
        return out;
    }
    out[1] = first_panel(values, h);
    for i in 2..values.len() {
        out[i] = out[i - 1] + h * (values[i - 1] + values[i]) / 2.0;
    }
    out
}

/// Density of the free sum on `grid`.
pub fn density_from_sum(sum: &RTransformSum, grid: &GridSpec) -> Result<SpectralDensity> {
    if grid.points < 4 {
        return Err(Error::InvalidParams(format!("grid needs at least 4 points, got {}", grid.points)));
    }
    if !(grid.x_max > 0.0 && grid.x_max.is_finite()) {
        return Err(Error::InvalidParams(format!("grid upper end must be positive, got {}", grid.x_max)));
    }
    let xs = grid.abscissae();
    let mut order: Vec<usize> = (1..grid.points).collect();
    if grid.order == SweepOrder::Descending {
        order.reverse();
    }
    let zero_mass = sum.zero_mass();
    let solved: Vec<(usize, f64)> = order
        .par_iter()
        .map(|&i| {
            let z = Complex64::new(xs[i], grid.eta);
            match solve_stieltjes(sum, z, &grid.solver) {
                // Remove the atom's own term -zero_mass / z so its Lorentzian
                // tail at height eta does not leak into the continuous part.
                Ok(p) => Ok((i, ((p.s + zero_mass / z).im / PI).max(0.0))),
                Err(Error::NoPhysicalRoot { .. }) => Ok((i, 0.0)),
                Err(e) => Err(e),
            }
        })
        .collect::<Result<_>>()?;
    let mut values = vec![0.0; grid.points];
    for (i, f) in solved {
        values[i] = f;
    }
    values[0] = values[1];

    let h = grid.step();
    let continuous_mass = weighted_integral(&xs, &values, &|_| 1.0);
    let cumulative = cumulative(&values, h);
    Ok(SpectralDensity {
        grid: xs,
        values,
        zero_mass,
        continuous_mass,
        cumulative,
    })
}

/// `int ln(1 + g x) f(x) dx` in nats; the atom at zero contributes nothing.
pub fn shannon_integral(density: &SpectralDensity, g: f64) -> f64 {
    density.integrate(|x| (g * x).ln_1p())
}
