//! Gross-Pitaevskii and Thomas-Fermi ground states.
//!
//! Four layers, all in units ħ = 2m = 1:
//!
//! * [`radial`]: the 2D functional E[φ] = ∫{|∇φ|² + V|φ|² + 4πNg|φ|⁴} on
//!   radial grids, its minimizer, and the exact (N, L, g) ↦ (1, 1, Ng)
//!   rescaling.
//! * [`cylinder`]: the 3D functional for disc-shaped traps on (r, z)
//!   tensor grids, discretized so product states split exactly.
//! * [`tf`]: Thomas-Fermi closed forms and the quadrature fallback.
//! * [`selfg`]: the self-consistent effective coupling tying the 2D theory
//!   to (h, a) through the mean density.

pub mod cylinder;
pub mod radial;
pub mod selfg;
pub mod tf;

pub use cylinder::{minimize_gp3d, GpState3D};
pub use radial::{gp2d_energy, gp2d_scaled, mean_density_gp, minimize_gp2d, GpState2D};
pub use selfg::{self_consistent_g, SelfConsistentG};
pub use tf::{tf_solve, tf_solve_numeric, TfResult};
