//! Zero-energy scattering: the 3D pair problem, its reduction to an
//! effective 2D potential under tight confinement, and the 2D scattering
//! length that controls the dilute-gas coupling.
//!
//! The chain implemented here: solve u″ = ½v_a u for the 3D scattering
//! length a; renormalize the solution to a hard-wall profile f at radius R;
//! average to the effective 2D potential W; solve the 2D log-radial problem
//! for a_scatt and the boundary energy E_R = 2π/ln(R/a_scatt). The closed
//! formula a_2D = h·exp(−(∫s⁴)⁻¹h/2a) shortcuts the chain for the confined
//! problem and is carried in log domain because Region II values underflow.

mod effective;
mod threed;
mod twod;

pub use effective::{effective_w, EffectiveW};
pub use threed::{hard_wall_profile, solve_scattering_3d, HardWallProfile, ScatteringSolution3D};
pub use twod::{
    effective_a2d, perturbative_a_scatt, solve_scattering_2d, A2dResult, ScatteringSolution2D,
};
