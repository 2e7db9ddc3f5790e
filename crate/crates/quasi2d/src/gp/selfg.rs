//! Self-consistent effective 2D coupling.
//!
//! The effective coupling of the reduced 2D theory depends on the mean
//! density, which in turn depends on the coupling through the 2D ground
//! state: the physical g solves
//!
//! ```text
//!     g = 1 / ( |ln(ρ̄_{Ng}·h²)| + (∫s⁴)⁻¹·h/a ),      ρ̄_{Ng} = N∫|φ_{Ng}|⁴/L²,
//! ```
//!
//! a scalar fixed-point problem. Raising g spreads the cloud, which lowers
//! ρ̄, which lowers the right-hand side — the map is monotone decreasing in
//! g, so the fixed point is unique and a damped iteration with a bisection
//! fallback cannot miss it or land on a spurious root. Both the fixed point
//! and the closed-form value (same formula, Thomas-Fermi mean density at
//! pair coupling 1) are reported so the two conventions can be compared.

use crate::gp::radial::{mean_density_gp, minimize_gp2d};
use crate::gp::tf::tf_solve;
use crate::numerics::Grid1D;
use crate::potential::Potential;
use crate::regimes::{classify_with, coupling_g, RegimeThresholds};
use crate::transverse::TransverseMode;
use crate::{Error, Result};

/// Result of the self-consistent coupling determination.
#[derive(Debug, Clone)]
pub struct SelfConsistentG {
    /// Fixed-point coupling.
    pub g: f64,
    /// Mean density at the fixed point, 1/length².
    pub rho_bar: f64,
    /// Closed-form coupling using the Thomas-Fermi mean density at pair
    /// coupling 1 instead of the self-consistent one.
    pub g_formula: Option<f64>,
    /// That Thomas-Fermi mean density, 1/length².
    pub rho_bar_tf: Option<f64>,
    /// Strong-confinement diagnostics at the fixed point.
    pub rho_ah: f64,
    pub rho_h2: f64,
    pub strongly_confined: bool,
    pub iterations: usize,
    pub converged: bool,
    /// Coupling iterates, in order.
    pub history: Vec<f64>,
}

/// Solve the fixed-point problem for N particles in trap V_L(x) = V(|x|/L)/L²
/// with transverse thickness h and 3D scattering length a.
///
/// `mode` is the transverse mode of the tight direction at unit thickness;
/// only its ∫s⁴ enters (the h dependence of the formula is explicit).
/// The 2D solves run on `grid` (the unit-trap radial grid) at flow
/// tolerance min(tol·1e-2, 1e-10); `tol` itself is the relative change in g
/// at which the iteration stops.
#[allow(clippy::too_many_arguments)]
pub fn self_consistent_g(
    n: f64,
    l: f64,
    h: f64,
    a: f64,
    v_l: &Potential,
    mode: &TransverseMode,
    grid: &Grid1D,
    tol: f64,
) -> Result<SelfConsistentG> {
    for (name, value) in [("N", n), ("L", l), ("h", h), ("a", a), ("tol", tol)] {
        if !(value > 0.0) || !value.is_finite() {
            return Err(Error::NonPositive { name, value });
        }
    }
    let s4 = mode.s4;
    let flow_tol = (tol * 1e-2).min(1e-10);
    let l2 = l * l;

    // ρ̄ as a function of the coupling, through the unit 2D ground state.
    let density = |g: f64| -> Result<(f64, bool)> {
        let state = minimize_gp2d(v_l, n * g, grid, flow_tol)?;
        Ok((mean_density_gp(&state, n) / l2, state.converged))
    };

    let mut history = Vec::new();
    let (rho0, mut solves_ok) = density(0.0)?;
    let mut g = coupling_g(rho0, h, a, s4)?;
    history.push(g);

    let max_iterations = 60;
    let mut converged = false;
    let mut iterations = 0;
    let mut rho_bar = rho0;
    for _ in 0..max_iterations {
        iterations += 1;
        let (rho, ok) = density(g)?;
        solves_ok &= ok;
        let mapped = coupling_g(rho, h, a, s4)?;
        let next = 0.5 * g + 0.5 * mapped;
        history.push(next);
        let done = (next - g).abs() <= tol * next.abs();
        rho_bar = rho;
        g = next;
        if done {
            converged = true;
            break;
        }
    }

    if !converged {
        // Bisection fallback on F(g) = map(g) − g. The map is positive and
        // decreasing, so F(0⁺) > 0 and F(map(0)) ≤ 0 bracket the root.
        let f = |g: f64| -> Result<f64> {
            let (rho, _) = density(g)?;
            Ok(coupling_g(rho, h, a, s4)? - g)
        };
        let mut lo = 0.0;
        let mut hi = coupling_g(rho0, h, a, s4)?;
        if f(hi)? > 0.0 {
            return Err(Error::SelfConsistencyFailed {
                iterations,
                history,
            });
        }
        for _ in 0..60 {
            let mid = 0.5 * (lo + hi);
            if mid <= lo || mid >= hi {
                break;
            }
            if f(mid)? > 0.0 {
                lo = mid;
            } else {
                hi = mid;
            }
            iterations += 1;
        }
        g = 0.5 * (lo + hi);
        history.push(g);
        let (rho, ok) = density(g)?;
        solves_ok &= ok;
        rho_bar = rho;
        let residual = (coupling_g(rho, h, a, s4)? - g).abs();
        converged = residual <= 10.0 * tol * g.abs();
        if !converged {
            return Err(Error::SelfConsistencyFailed {
                iterations,
                history,
            });
        }
    }

    let tf = tf_solve(v_l, n, 1.0).ok();
    let rho_bar_tf = tf.map(|t| t.rho_bar / l2);
    let g_formula = rho_bar_tf.and_then(|rho| coupling_g(rho, h, a, s4).ok());

    let thresholds = RegimeThresholds {
        s4,
        ..RegimeThresholds::default()
    };
    let report = classify_with(rho_bar, h, a, &thresholds, Some(n * g))?;
    Ok(SelfConsistentG {
        g,
        rho_bar,
        g_formula,
        rho_bar_tf,
        rho_ah: rho_bar * a * h,
        rho_h2: rho_bar * h * h,
        strongly_confined: report.strong_confinement.satisfied,
        iterations,
        converged: converged && solves_ok,
        history,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::transverse::solve_transverse;
    use approx::assert_relative_eq;

    fn unit_mode() -> TransverseMode {
        let grid = Grid1D::uniform(-8.0, 8.0, 3201).unwrap();
        solve_transverse(&Potential::Harmonic, &grid).unwrap()
    }

    #[test]
    fn box_density_is_drive_independent_so_one_pass_suffices() {
        let mode = unit_mode();
        let v = Potential::periodic_box(1.0).unwrap();
        let grid = Grid1D::uniform(0.0, 1.0, 9).unwrap();
        let out =
            self_consistent_g(100.0, 3.0, 0.01, 0.002, &v, &mode, &grid, 1e-12).unwrap();
        assert!(out.converged);
        // ρ̄ = N/(L·side)² exactly; g from the closed formula with that ρ̄.
        let rho = 100.0 / 9.0;
        assert_relative_eq!(out.rho_bar, rho, max_relative = 1e-12);
        let expected = coupling_g(rho, 0.01, 0.002, mode.s4).unwrap();
        assert_relative_eq!(out.g, expected, max_relative = 1e-10);
        // The TF comparison value coincides: same flat density.
        assert_relative_eq!(out.g_formula.unwrap(), expected, max_relative = 1e-12);
        assert!(out.strongly_confined);
    }

    #[test]
    fn deep_region_one_recovers_the_ratio_form() {
        // h/a = 1000 with mild 2D density: the log term is negligible
        // against (∫s⁴)⁻¹h/a, so g ≈ (∫s⁴)·a/h within 2%.
        let mode = unit_mode();
        let grid = Grid1D::uniform(0.0, 8.0, 1601).unwrap();
        let h = 1e-3;
        let a = 1e-6;
        let out = self_consistent_g(
            100.0,
            1.0,
            h,
            a,
            &Potential::Harmonic,
            &mode,
            &grid,
            1e-10,
        )
        .unwrap();
        assert!(out.converged);
        let ratio_form = mode.s4 * a / h;
        assert!(
            (out.g - ratio_form).abs() / ratio_form < 0.02,
            "g = {} vs ratio form {}",
            out.g,
            ratio_form
        );
        assert!(out.strongly_confined);
        assert!(out.rho_h2 < 1e-3);
    }

    #[test]
    fn strong_coupling_density_approaches_thomas_fermi() {
        // Parameters that land Ng ≫ 1: the self-consistent ρ̄ should sit
        // within 5% of the TF mean density at pair coupling g.
        let mode = unit_mode();
        let grid = Grid1D::uniform(0.0, 14.0, 2801).unwrap();
        let n = 15000.0;
        let (h, a) = (1e-3, 5e-4);
        let out = self_consistent_g(
            n,
            1.0,
            h,
            a,
            &Potential::Harmonic,
            &mode,
            &grid,
            1e-9,
        )
        .unwrap();
        assert!(out.converged);
        assert!(n * out.g > 100.0, "drive Ng = {} not deep enough", n * out.g);
        let tf = tf_solve(&Potential::Harmonic, n, out.g).unwrap();
        assert!(
            (out.rho_bar - tf.rho_bar).abs() / tf.rho_bar < 0.05,
            "rho_bar {} vs TF {}",
            out.rho_bar,
            tf.rho_bar
        );
    }

    #[test]
    fn iterate_history_is_recorded_and_inputs_validated() {
        let mode = unit_mode();
        let grid = Grid1D::uniform(0.0, 8.0, 1601).unwrap();
        let out = self_consistent_g(
            50.0,
            1.0,
            0.01,
            0.005,
            &Potential::Harmonic,
            &mode,
            &grid,
            1e-10,
        )
        .unwrap();
        assert!(out.history.len() >= 2);
        assert!(out.iterations >= 1);
        assert!(out.g > 0.0);
        assert!(matches!(
            self_consistent_g(
                -1.0,
                1.0,
                0.01,
                0.005,
                &Potential::Harmonic,
                &mode,
                &grid,
                1e-10
            ),
            Err(Error::NonPositive { name: "N", .. })
        ));
    }
}
