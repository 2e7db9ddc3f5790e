//! Thomas-Fermi ground states: the GP functional with the kinetic term
//! dropped.
//!
//! For N particles in trap V with pair coupling g the TF density minimizes
//! ∫{Vρ + 4πg·ρ²} d²x over ρ ≥ 0 with ∫ρ = N, giving ρ = (μ − V)₊/(8πg)
//! with μ fixed by the normalization. For homogeneous traps V = |x|^p the
//! normalization integral is elementary:
//!
//! ```text
//!     μ   = [8gN·(p+2)/p]^{p/(p+2)},
//!     ρ̄   = N⁻¹∫ρ² = p·μ / (8πg·(p+1)),
//!     e   = μ·(p+2) / (2(p+1))      (energy per particle),
//! ```
//!
//! and for a flat box of area A the density is uniform: ρ = N/A,
//! μ = 8πgN/A, e = 4πgN/A. In every case μ = e + 4πg·ρ̄. Dropping a
//! nonnegative term means e ≤ the GP energy per particle always; the two
//! agree to leading order in the strong-coupling limit.

use crate::numerics::Grid1D;
use crate::potential::Potential;
use crate::{Error, Result};

use std::f64::consts::PI;

/// Thomas-Fermi ground-state data for N particles at pair coupling g.
#[derive(Debug, Clone)]
pub struct TfResult {
    /// Radial sample points of the density profile.
    pub grid: Grid1D,
    /// ρ^TF at the grid points, 1/length².
    pub rho_tf: Vec<f64>,
    /// TF chemical potential, 1/length².
    pub mu_tf: f64,
    /// Mean density ρ̄ = N⁻¹∫(ρ^TF)², 1/length².
    pub rho_bar: f64,
    /// TF energy per particle, 1/length².
    pub e_tf: f64,
    /// True when the result came from quadrature root-finding rather than
    /// the closed forms.
    pub numeric: bool,
}

/// Closed-form Thomas-Fermi solve for homogeneous traps and boxes.
///
/// Rejects trap shapes without an analytic normalization integral; those go
/// through [`tf_solve_numeric`] on an explicit grid.
pub fn tf_solve(v: &Potential, n: f64, coupling: f64) -> Result<TfResult> {
    validate(n, coupling)?;
    if let Some(p) = v.homogeneity() {
        let mu = (8.0 * coupling * n * (p + 2.0) / p).powf(p / (p + 2.0));
        let rho_bar = p * mu / (8.0 * PI * coupling * (p + 1.0));
        let e_tf = mu * (p + 2.0) / (2.0 * (p + 1.0));
        let r_tf = mu.powf(1.0 / p); // edge of the support: V(r) = μ
        let grid = Grid1D::uniform(0.0, 1.05 * r_tf, 2001)?;
        let rho_tf = grid
            .points()
            .iter()
            .map(|&r| (mu - v.value(r)).max(0.0) / (8.0 * PI * coupling))
            .collect();
        return Ok(TfResult {
            grid,
            rho_tf,
            mu_tf: mu,
            rho_bar,
            e_tf,
            numeric: false,
        });
    }
    let (area, radius) = match v {
        Potential::PeriodicBox { side } => (side * side, 0.5 * side),
        Potential::HardBox { width } => {
            let r = 0.5 * width;
            (PI * r * r, r)
        }
        _ => return Err(Error::TfInhomogeneous),
    };
    let rho = n / area;
    let grid = Grid1D::uniform(0.0, radius, 2001)?;
    Ok(TfResult {
        rho_tf: vec![rho; grid.len()],
        grid,
        mu_tf: 8.0 * PI * coupling * rho,
        rho_bar: rho,
        e_tf: 4.0 * PI * coupling * rho,
        numeric: false,
    })
}

/// Thomas-Fermi solve by monotone root-finding on the normalization, in
/// the quadrature of the supplied radial grid. Works for any trap shape
/// that is finite on the grid; this is the path for profiles without
/// closed-form integrals.
pub fn tf_solve_numeric(
    v: &Potential,
    n: f64,
    coupling: f64,
    grid: &Grid1D,
) -> Result<TfResult> {
    validate(n, coupling)?;
    let weights = grid.trapezoid_weights();
    let rs = grid.points();
    let vs: Vec<f64> = rs.iter().map(|&r| v.value(r)).collect();
    if vs.iter().any(|&x| !x.is_finite()) {
        return Err(Error::TrapUnsupported {
            name: v.name(),
            reason: "numeric TF quadrature needs finite potential values on the grid; \
                     end the grid at the wall for hard boxes",
        });
    }
    // Ring quadrature: trapezoid in r against the measure 2πr dr.
    let ring: Vec<f64> = weights
        .iter()
        .zip(rs)
        .map(|(&w, &r)| 2.0 * PI * r * w)
        .collect();
    let mass = |mu: f64| -> f64 {
        ring.iter()
            .zip(&vs)
            .map(|(&w, &vj)| w * (mu - vj).max(0.0))
            .sum::<f64>()
            / (8.0 * PI * coupling)
    };

    let v_min = vs.iter().cloned().fold(f64::INFINITY, f64::min);
    let mut lo = v_min;
    let mut hi = v_min.abs().max(1.0);
    let mut guard = 0;
    while mass(hi) < n {
        hi = 2.0 * hi + 1.0;
        guard += 1;
        if guard > 600 {
            return Err(Error::TrapUnsupported {
                name: v.name(),
                reason: "normalization mass saturates: the grid does not cover enough of \
                         the trap to hold the requested particle number",
            });
        }
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mass(mid) < n {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let mu = 0.5 * (lo + hi);
    let rho_tf: Vec<f64> = vs
        .iter()
        .map(|&vj| (mu - vj).max(0.0) / (8.0 * PI * coupling))
        .collect();
    let int_rho_sq: f64 = ring
        .iter()
        .zip(&rho_tf)
        .map(|(&w, &rho)| w * rho * rho)
        .sum();
    let int_v_rho: f64 = ring
        .iter()
        .zip(&rho_tf)
        .zip(&vs)
        .map(|((&w, &rho), &vj)| w * rho * vj)
        .sum();
    Ok(TfResult {
        grid: grid.clone(),
        rho_tf,
        mu_tf: mu,
        rho_bar: int_rho_sq / n,
        e_tf: (int_v_rho + 4.0 * PI * coupling * int_rho_sq) / n,
        numeric: true,
    })
}

fn validate(n: f64, coupling: f64) -> Result<()> {
    if !(n > 0.0) {
        return Err(Error::NonPositive { name: "N", value: n });
    }
    if !(coupling > 0.0) {
        return Err(Error::NonPositive {
            name: "coupling",
            value: coupling,
        });
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn harmonic_closed_forms() {
        // V = |x|², coupling 1, N = 100: μ = 4√N = 40, ρ̄ = √N/(3π),
        // e = (2/3)μ.
        let tf = tf_solve(&Potential::Harmonic, 100.0, 1.0).unwrap();
        assert_relative_eq!(tf.mu_tf, 40.0, max_relative = 1e-14);
        assert_relative_eq!(tf.rho_bar, 1.0610329539459689, max_relative = 1e-13);
        assert_relative_eq!(tf.e_tf, 80.0 / 3.0, max_relative = 1e-14);
        assert!(!tf.numeric);
        assert!(tf.rho_tf.iter().all(|&r| r >= 0.0));
        // μ = e + 4πg·ρ̄ ties the three observables together.
        assert_relative_eq!(
            tf.mu_tf,
            tf.e_tf + 4.0 * PI * tf.rho_bar,
            max_relative = 1e-13
        );
        // Density at the origin: μ/(8πg); zero beyond the edge √μ.
        assert_relative_eq!(tf.rho_tf[0], 40.0 / (8.0 * PI), max_relative = 1e-12);
        assert_eq!(*tf.rho_tf.last().unwrap(), 0.0);
    }

    #[test]
    fn mean_density_scales_as_sqrt_n_for_harmonic() {
        let a = tf_solve(&Potential::Harmonic, 25.0, 0.7).unwrap();
        let b = tf_solve(&Potential::Harmonic, 100.0, 0.7).unwrap();
        assert_relative_eq!(b.rho_bar / a.rho_bar, 2.0, max_relative = 1e-6);
    }

    #[test]
    fn quartic_trap_closed_forms_hold_together() {
        // p = 4: check internal consistency rather than hand-computed
        // numbers: μ = e + 4πgρ̄ and the numeric path agrees.
        let tf = tf_solve(&Potential::power(4.0).unwrap(), 10.0, 2.0).unwrap();
        assert_relative_eq!(
            tf.mu_tf,
            tf.e_tf + 4.0 * PI * 2.0 * tf.rho_bar,
            max_relative = 1e-13
        );
        let mu = (8.0 * 2.0 * 10.0 * 6.0 / 4.0_f64).powf(4.0 / 6.0);
        assert_relative_eq!(tf.mu_tf, mu, max_relative = 1e-14);
    }

    #[test]
    fn boxes_are_flat() {
        let pb = tf_solve(&Potential::periodic_box(2.0).unwrap(), 12.0, 1.0).unwrap();
        assert_relative_eq!(pb.rho_bar, 3.0, max_relative = 1e-14);
        assert_relative_eq!(pb.mu_tf, 24.0 * PI, max_relative = 1e-14);
        assert_relative_eq!(pb.e_tf, 12.0 * PI, max_relative = 1e-14);
        assert!(pb.rho_tf.iter().all(|&r| (r - 3.0).abs() < 1e-14));

        let hb = tf_solve(&Potential::hard_box(2.0).unwrap(), 12.0, 1.0).unwrap();
        assert_relative_eq!(hb.rho_bar, 12.0 / PI, max_relative = 1e-14);
        assert_relative_eq!(hb.mu_tf, 96.0, max_relative = 1e-14);
    }

    #[test]
    fn numeric_path_matches_closed_form() {
        let exact = tf_solve(&Potential::Harmonic, 100.0, 1.0).unwrap();
        // Grid extends past the TF edge √40 ≈ 6.32.
        let grid = Grid1D::uniform(0.0, 8.0, 8001).unwrap();
        let num = tf_solve_numeric(&Potential::Harmonic, 100.0, 1.0, &grid).unwrap();
        assert!(num.numeric);
        assert_relative_eq!(num.mu_tf, exact.mu_tf, max_relative = 1e-6);
        assert_relative_eq!(num.rho_bar, exact.rho_bar, max_relative = 1e-5);
        assert_relative_eq!(num.e_tf, exact.e_tf, max_relative = 1e-5);
        // Normalization in the solver's own quadrature is exact by
        // construction of the bisection.
        let ring: Vec<f64> = grid
            .trapezoid_weights()
            .iter()
            .zip(grid.points())
            .map(|(&w, &r)| 2.0 * PI * r * w)
            .collect();
        let total: f64 = ring.iter().zip(&num.rho_tf).map(|(&w, &r)| w * r).sum();
        assert_relative_eq!(total, 100.0, max_relative = 1e-12);
    }

    #[test]
    fn inhomogeneous_traps_are_rejected_by_the_closed_form() {
        let tab = Potential::tabulated(vec![0.0, 1.0, 4.0], vec![0.0, 0.5, 9.0]).unwrap();
        assert!(matches!(
            tf_solve(&tab, 10.0, 1.0),
            Err(Error::TfInhomogeneous)
        ));
        // The numeric path accepts it.
        let grid = Grid1D::uniform(0.0, 4.0, 4001).unwrap();
        let tf = tf_solve_numeric(&tab, 0.05, 1.0, &grid).unwrap();
        assert!(tf.numeric);
        assert!(tf.mu_tf > 0.0);
        assert_relative_eq!(
            tf.mu_tf,
            tf.e_tf + 4.0 * PI * tf.rho_bar,
            max_relative = 1e-10
        );
    }

    #[test]
    fn invalid_inputs_are_rejected() {
        assert!(matches!(
            tf_solve(&Potential::Harmonic, -1.0, 1.0),
            Err(Error::NonPositive { name: "N", .. })
        ));
        assert!(matches!(
            tf_solve(&Potential::Harmonic, 10.0, 0.0),
            Err(Error::NonPositive { name: "coupling", .. })
        ));
    }
}
