//! Spectral densities of free sums of rectangular Gaussian blocks.
//!
//! A sum is described by its R-transform terms. The Stieltjes transform of
//! the sum is found per point by Newton continuation on a subordination
//! system, the density follows from its imaginary part, and throughput is an
//! integral of `ln(1 + g x)` against that density.

mod density;
mod elimination;
mod mp;
mod rtransform;
mod stieltjes;

pub use density::{
    density_from_sum, integrate_on_grid, shannon_integral, GridSpec, SpectralDensity, SweepOrder,
    DEFAULT_GRID_POINTS,
};
pub use elimination::{cleared_polynomial, polynomial_roots, stieltjes_by_elimination};
pub use mp::{mp_atom, mp_density, mp_shannon_transform, mp_stieltjes};
pub use rtransform::{RTransformSum, RTransformTerm};
pub use stieltjes::{solve_stieltjes, stieltjes_from_r, SolverSettings, StieltjesPoint};
