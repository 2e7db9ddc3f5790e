//! 3D zero-energy scattering: u″ = ½ v_a u and the scattering length.
//!
//! The radial solution u(r) = r·f₀(r) starts at u = 0 (at the origin, or at
//! the hard-core radius where the wavefunction vanishes) and is integrated
//! outward; beyond the range of v_a it is exactly linear, u = α(r − a), and
//! the scattering length a is extracted by a least-squares line fit over the
//! outer part of the grid. The stored solution is renormalized to u = r − a
//! there, so f₀ = u/r ∈ [0, 1] with f₀ → 1 at infinity.

use crate::error::Error;
use crate::numerics::{integrate_radial_ode, Grid1D, OdeInit};
use crate::potential::Potential;
use crate::Result;

/// Relative rms residual above which the tail fit is rejected.
const FIT_RESIDUAL_GATE: f64 = 1e-6;

/// Zero-energy radial solution and the extracted 3D scattering length.
#[derive(Debug, Clone)]
pub struct ScatteringSolution3D {
    /// Radial grid from the hard-core radius (or 0) outward.
    pub grid: Grid1D,
    /// u(r) = r·f₀(r), normalized so u(r) = r − a beyond the range.
    pub u: Vec<f64>,
    /// u′(r) in the same normalization.
    pub du: Vec<f64>,
    /// Scattering length of v_a.
    pub a: f64,
    /// Relative rms residual of the linear tail fit.
    pub fit_residual: f64,
    /// Range R₀ of v_a (zero potential beyond it).
    pub range: f64,
    /// Hard-core (Dirichlet) radius of v_a; 0 for soft potentials.
    pub core: f64,
    /// Family scale: this solution is for v_a(r) = a_scale⁻² v(r/a_scale).
    pub a_scale: f64,
}

impl ScatteringSolution3D {
    /// f₀ = u/r at every grid point (continuity value u′(0) at r = 0).
    pub fn f0_values(&self) -> Vec<f64> {
        self.grid
            .points()
            .iter()
            .zip(self.u.iter().zip(&self.du))
            .map(|(&r, (&u, &du))| if r > 0.0 { u / r } else { du })
            .collect()
    }

    /// f₀′ = u′/r − u/r² at every grid point (0 at r = 0 by parity).
    pub fn df0_values(&self) -> Vec<f64> {
        self.grid
            .points()
            .iter()
            .zip(self.u.iter().zip(&self.du))
            .map(|(&r, (&u, &du))| if r > 0.0 { du / r - u / (r * r) } else { 0.0 })
            .collect()
    }
}

/// Points in the radial grid. Sized so that the single discontinuity a
/// square-barrier edge injects into the RK4 stages stays below 1e-5 in the
/// extracted scattering length.
const SOFT_POINTS: usize = 200_001;
/// Potential-free profiles (hard core, zero) are integrated exactly; a
/// coarse grid only carries the output samples.
const EXACT_POINTS: usize = 20_001;

/// Solve the zero-energy scattering equation for the scaled potential
/// v_a(r) = a_scale⁻² v(r/a_scale).
///
/// The grid spans [core, core + 2.5·(R₀ − core)] so the outer 20% of the
/// points lie strictly beyond the range, where u is exactly linear.
pub fn solve_scattering_3d(v: &Potential, a_scale: f64) -> Result<ScatteringSolution3D> {
    if !(a_scale > 0.0) {
        return Err(Error::NonPositive {
            name: "a_scale",
            value: a_scale,
        });
    }
    let base_range = v.range().ok_or(Error::NoFiniteRange)?;
    let range = a_scale * base_range;
    let core = v.core_radius_scaled(a_scale);

    let has_soft_region = range > core * (1.0 + 1e-14) && range > 0.0;
    let (r_max, n) = if has_soft_region {
        // Put the range at exactly 40% of the span: (n−1) divisible by 5.
        (core + 2.5 * (range - core), SOFT_POINTS)
    } else if core > 0.0 {
        (2.5 * core, EXACT_POINTS)
    } else {
        (1.0, EXACT_POINTS)
    };
    let grid = Grid1D::uniform(core, r_max, n)?;

    let coefficient = |r: f64| {
        if r < core || r >= range {
            0.0
        } else {
            0.5 * v.value_scaled(r, a_scale)
        }
    };
    let sol = integrate_radial_ode(coefficient, &grid, OdeInit { value: 0.0, slope: 1.0 })?;

    // Least-squares line u = α·r + β over the outer 20% of the grid, all of
    // it beyond the range by construction; a = −β/α.
    let start = (n - 1) - (n - 1) / 5;
    let rs = &grid.points()[start..];
    let us = &sol.u[start..];
    let m = rs.len() as f64;
    let r_mean = rs.iter().sum::<f64>() / m;
    let u_mean = us.iter().sum::<f64>() / m;
    let mut cov = 0.0;
    let mut var = 0.0;
    for (&r, &u) in rs.iter().zip(us) {
        cov += (r - r_mean) * (u - u_mean);
        var += (r - r_mean) * (r - r_mean);
    }
    let alpha = cov / var;
    if !(alpha > 0.0) {
        return Err(Error::FitResidual {
            residual: f64::INFINITY,
            threshold: FIT_RESIDUAL_GATE,
        });
    }
    let beta = u_mean - alpha * r_mean;
    let scale = us.iter().fold(0.0f64, |acc, &u| acc.max(u.abs())).max(1e-300);
    let residual = (rs
        .iter()
        .zip(us)
        .map(|(&r, &u)| {
            let d = u - (alpha * r + beta);
            d * d
        })
        .sum::<f64>()
        / m)
        .sqrt()
        / scale;
    if residual > FIT_RESIDUAL_GATE {
        return Err(Error::FitResidual {
            residual,
            threshold: FIT_RESIDUAL_GATE,
        });
    }
    let a = -beta / alpha;

    let inv = 1.0 / alpha;
    let u = sol.u.iter().map(|&x| x * inv).collect();
    let du = sol.du.iter().map(|&x| x * inv).collect();

    Ok(ScatteringSolution3D {
        grid,
        u,
        du,
        a,
        fit_residual: residual,
        range,
        core,
        a_scale,
    })
}

/// The profile f used in the reduction: f₀ renormalized to reach 1 at a
/// hard-wall radius R, f(r) = f₀(r)/(1 − a/R) for r ≤ R and f ≡ 1 beyond.
#[derive(Debug, Clone)]
pub struct HardWallProfile {
    r0: f64,
    dr: f64,
    u: Vec<f64>,
    du: Vec<f64>,
    a: f64,
    core: f64,
    range: f64,
    a_scale: f64,
    r_wall: f64,
    scale: f64,
}

/// Build the hard-wall profile at radius R from a scattering solution.
/// Requires R > R₀ (so f is continuous at the wall) and R > a (so the
/// normalizing prefactor is positive).
pub fn hard_wall_profile(sol: &ScatteringSolution3D, r_wall: f64) -> Result<HardWallProfile> {
    if !(r_wall > sol.range) {
        return Err(Error::HardWallRadius {
            r: r_wall,
            what: "the potential range R0",
            bound: sol.range,
        });
    }
    if !(r_wall > sol.a) {
        return Err(Error::HardWallRadius {
            r: r_wall,
            what: "the scattering length a",
            bound: sol.a,
        });
    }
    Ok(HardWallProfile {
        r0: sol.grid.first(),
        dr: sol.grid.uniform_spacing().expect("scattering grids are uniform"),
        // u is stored rather than f₀ = u/r: u is exactly linear beyond the
        // range (and everywhere for hard discs), so linear interpolation of
        // u followed by division is exact there, while interpolating the
        // curved f₀ directly would not be.
        u: sol.u.clone(),
        du: sol.du.clone(),
        a: sol.a,
        core: sol.core,
        range: sol.range,
        a_scale: sol.a_scale,
        r_wall,
        scale: 1.0 / (1.0 - sol.a / r_wall),
    })
}

impl HardWallProfile {
    /// f(r): 0 inside a hard core, f₀(r)/(1 − a/R) up to the wall, 1 beyond.
    pub fn value(&self, r: f64) -> f64 {
        if r >= self.r_wall {
            return 1.0;
        }
        if r < self.core {
            return 0.0;
        }
        self.scale * self.f0_at(r)
    }

    /// f′(r): zero inside the core and beyond the wall (f jumps to the
    /// constant 1 there; the kink is intentional).
    pub fn derivative(&self, r: f64) -> f64 {
        if r >= self.r_wall || r < self.core || r <= 0.0 {
            return 0.0; // (f′(0) = 0 by parity for soft potentials)
        }
        let last = self.r0 + self.dr * (self.u.len() - 1) as f64;
        if r >= last {
            return self.scale * self.a / (r * r);
        }
        let u = interp(&self.u, self.r0, self.dr, r);
        let du = interp(&self.du, self.r0, self.dr, r);
        self.scale * (du / r - u / (r * r))
    }

    fn f0_at(&self, r: f64) -> f64 {
        let last = self.r0 + self.dr * (self.u.len() - 1) as f64;
        if r >= last {
            1.0 - self.a / r
        } else if r > 0.0 {
            interp(&self.u, self.r0, self.dr, r) / r
        } else {
            self.du[0] // continuity value u′(0) of u/r at the origin
        }
    }

    pub fn wall(&self) -> f64 {
        self.r_wall
    }

    pub fn a(&self) -> f64 {
        self.a
    }

    pub fn core(&self) -> f64 {
        self.core
    }

    pub fn range(&self) -> f64 {
        self.range
    }

    pub fn a_scale(&self) -> f64 {
        self.a_scale
    }

    /// The normalizing prefactor (1 − a/R)⁻¹.
    pub fn prefactor(&self) -> f64 {
        self.scale
    }
}

fn interp(values: &[f64], r0: f64, dr: f64, r: f64) -> f64 {
    let x = (r - r0) / dr;
    if x <= 0.0 {
        return values[0];
    }
    let i = (x.floor() as usize).min(values.len() - 2);
    let t = x - i as f64;
    values[i] + t * (values[i + 1] - values[i])
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::{assert_abs_diff_eq, assert_relative_eq};

    #[test]
    fn hard_core_scattering_length_is_the_core_radius() {
        let v = Potential::hard_core(1.0).unwrap();
        let sol = solve_scattering_3d(&v, 1.0).unwrap();
        assert_relative_eq!(sol.a, 1.0, epsilon = 1e-12);
        assert!(sol.fit_residual < 1e-12);
        // u = r − 1 exactly outside the core.
        for (&r, &u) in sol.grid.points().iter().zip(&sol.u) {
            assert_abs_diff_eq!(u, r - 1.0, epsilon = 1e-12);
        }
        // Scaling the family scales the core.
        let scaled = solve_scattering_3d(&v, 0.25).unwrap();
        assert_relative_eq!(scaled.a, 0.25, epsilon = 1e-12);
    }

    #[test]
    fn zero_potential_has_zero_scattering_length() {
        let sol = solve_scattering_3d(&Potential::Zero, 1.0).unwrap();
        assert_abs_diff_eq!(sol.a, 0.0, epsilon = 1e-12);
    }

    #[test]
    fn square_barrier_matches_analytic_value() {
        // u″ = ½v₀u inside: a = R₀(1 − tanh(κR₀)/(κR₀)) with κ = √(v₀/2).
        let v = Potential::square_barrier(8.0, 1.0).unwrap();
        let sol = solve_scattering_3d(&v, 1.0).unwrap();
        let exact = 1.0 - 2.0f64.tanh() / 2.0;
        assert_abs_diff_eq!(sol.a, exact, epsilon = 1e-5);
        // Family scaling multiplies a by a_scale.
        let half = solve_scattering_3d(&v, 0.5).unwrap();
        assert_abs_diff_eq!(half.a, 0.5 * exact, epsilon = 1e-5);
    }

    #[test]
    fn f0_obeys_the_monotonicity_bounds() {
        for v in [
            Potential::square_barrier(8.0, 1.0).unwrap(),
            Potential::hard_core(1.0).unwrap(),
            Potential::tabulated(vec![0.0, 0.5, 1.0], vec![8.0, 4.0, 0.0]).unwrap(),
        ] {
            let sol = solve_scattering_3d(&v, 1.0).unwrap();
            let f0 = sol.f0_values();
            let df0 = sol.df0_values();
            for ((&r, &f), &df) in sol.grid.points().iter().zip(&f0).zip(&df0) {
                assert!((-1e-6..=1.0 + 1e-6).contains(&f), "f0({}) = {}", r, f);
                if r > 0.0 {
                    let cap = (1.0 / r).min(sol.a / (r * r));
                    assert!(df <= cap + 1e-6, "f0'({}) = {} > {}", r, df, cap);
                    assert!(df >= -1e-6);
                }
            }
        }
    }

    #[test]
    fn hard_wall_profile_matches_closed_form() {
        let v = Potential::hard_core(1.0).unwrap();
        let sol = solve_scattering_3d(&v, 1.0).unwrap();
        let f = hard_wall_profile(&sol, 2.0).unwrap();
        // f(r) = (1 − 1/r)/(1 − 1/2) = 2(1 − 1/r) on (1, 2], 1 beyond.
        for r in [1.2, 1.5, 1.9, 2.0] {
            assert_relative_eq!(f.value(r), 2.0 * (1.0 - 1.0 / r), epsilon = 1e-9);
        }
        assert_relative_eq!(f.value(2.0), 1.0, epsilon = 1e-12);
        assert_eq!(f.value(2.5), 1.0);
        assert_eq!(f.value(0.5), 0.0);

        // R → ∞ restores f₀.
        let wide = hard_wall_profile(&sol, 1e6).unwrap();
        for r in [1.5, 2.0, 2.4] {
            assert_abs_diff_eq!(wide.value(r), 1.0 - 1.0 / r, epsilon = 1e-5);
        }
    }

    #[test]
    fn hard_wall_radius_is_validated() {
        let v = Potential::square_barrier(8.0, 1.0).unwrap();
        let sol = solve_scattering_3d(&v, 1.0).unwrap();
        assert!(matches!(
            hard_wall_profile(&sol, 0.9),
            Err(Error::HardWallRadius { .. })
        ));
        let trap = Potential::Harmonic;
        assert!(matches!(
            solve_scattering_3d(&trap, 1.0),
            Err(Error::NoFiniteRange)
        ));
    }
}
