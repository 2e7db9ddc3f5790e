//! Shared discretization and solver primitives.
//!
//! Everything here is deliberately dependency-free and deterministic:
//! uniform and logarithmic 1D grids with trapezoid quadrature, a symmetric
//! tridiagonal Sturm-Liouville eigensolver (bisection + inverse iteration),
//! a fourth-order integrator for radial equations `u″ = c(r)·u`, and a
//! norm-constrained projected gradient flow with backtracking line search.
//!
//! Units are `ħ = 2m = 1`: the 1D kinetic operator is `−d²/dz²` and all
//! eigenvalues/energies carry `1/length²`.

mod eigen;
mod flow;
mod grid;
mod ode;

pub use eigen::{eigs_sturm_liouville, EigenResult};
pub use flow::{gradient_flow_minimize, EnergyFunctional, FlowOptions, FlowResult};
pub use grid::{Grid1D, GridKind};
pub use ode::{integrate_radial_ode, OdeInit, OdeSolution};
