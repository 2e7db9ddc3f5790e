//! Numerics for dilute Bose gases in strongly flattened ("disc-shaped") traps.
//!
//! The crate implements the computable layer of the 3D-to-2D dimensional
//! crossover for trapped, repulsively interacting bosons at the
//! Gross-Pitaevskii level:
//!
//! * [`transverse`] — the tight confinement direction: ground mode `s(z)` of
//!   `−d²/dz² + V⊥(z)`, its energy `e⊥`, spectral gap, and the moments of `s`
//!   that parametrize everything downstream.
//! * [`scattering`] — zero-energy two-body problems: the 3D scattering length
//!   `a`, the hard-wall-renormalized profile `f`, the effective 2D potential
//!   `W(x)` obtained by integrating out `z`, the 2D scattering length
//!   `a_scatt`, and the quasi-2D `a_2D = h·exp(−h/(2a∫s⁴))`.
//! * [`gp`] — 2D (radial) and 3D (cylindrical) Gross-Pitaevskii ground
//!   states, Thomas-Fermi profiles, mean densities, and the self-consistent
//!   2D coupling constant.
//! * [`regimes`] — the coupling `g = |ln(ρ̄h²)|⁻¹`-vs-`(∫s⁴)a/h` crossover:
//!   region classification, strong-confinement diagnostics, and the dilute
//!   homogeneous-gas reference energies.
//! * [`bounds`] — Temple lower bounds and the soft "Dyson" potentials (3D
//!   `U_R` and the 2D annulus construction with its `ν(R̃)` normalizer).
//! * [`experiments`] — deterministic parameter sweeps tying it together:
//!   the crossover ladder `(E₃D − e⊥/h²)/E₂D → 1`, scattering-length
//!   convergence, the Thomas-Fermi limit, and regime phase diagrams.
//! * [`numerics`] — shared primitives: grids, quadrature, a tridiagonal
//!   Sturm-Liouville eigensolver, a radial ODE integrator, and a projected
//!   gradient flow for constrained energy minimization.
//!
//! # Units
//!
//! `ħ = 2m = 1` throughout, so every energy is a `1/length²` and the kinetic
//! operator is `−Δ` with coefficient one. All potentials are nonnegative.
//!
//! # Determinism and parallelism
//!
//! Every solver is a pure function of its inputs; there is no randomness
//! anywhere in the crate. Parallelism (the `parallel` feature, on by
//! default) happens only across independent parameter points — sweep rows
//! and effective-potential tabulation — never inside a single solve, so
//! results are bitwise independent of thread count.

// Validation deliberately uses the negated form `!(x > 0.0)` so that NaN
// fails the check; the suggested `x <= 0.0` would silently accept it.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod bounds;
pub mod error;
pub mod experiments;
pub mod gp;
pub mod numerics;
pub mod par;
pub mod potential;
pub mod regimes;
pub mod scattering;
pub mod transverse;

pub use error::Error;
pub use potential::Potential;

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;
