//! Finite-difference Green's functions of `P_rho = d/dzbar (1/rho) d/dz`
//! with Dirichlet boundary values on rectangle and annulus grids.

mod green;
mod grid;
mod operator;
mod solver;

pub use green::{
    factor, grid_mixed_derivative, rectangle_series_green, DiscreteGreen, FactoredOperator, DIRECT_LIMIT,
    ITERATIVE_TOLERANCE, SOURCE_MARGIN,
};
pub use grid::GridSpec;
pub use operator::{discretize, CsrMatrix, DiscreteOperator};
pub use solver::{bicgstab, relative_residual, BandLu, SolverStats};

use crate::error::Result;
use crate::scalar::{Cplx, Real};
use crate::weights::Weight;

/// Discretizes, factors and solves for a single source.
pub fn solve_green<T: Real>(grid: &GridSpec<T>, weight: &Weight<T>, source: Cplx<T>) -> Result<DiscreteGreen<T>> {
    factor(discretize(grid, weight)?)?.solve_green(source)
}
