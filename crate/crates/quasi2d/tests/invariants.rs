//! Structural invariants sampled over deterministic parameter grids:
//! inequalities and identities that must hold at every sampled point, not
//! just at tuned anchors.

use approx::assert_relative_eq;
use quasi2d::bounds::{temple_bound, temple_statistics, TempleInput};
use quasi2d::gp::{gp2d_scaled, minimize_gp2d, tf_solve};
use quasi2d::numerics::{eigs_sturm_liouville, Grid1D};
use quasi2d::regimes::{classify, coupling_g, S4_HARMONIC};
use quasi2d::scattering::effective_a2d;
use quasi2d::Potential;

/// Replacing h² inside the logarithm by b² with b between a and h moves the
/// coupling by at most 2·g²·|ln(h/a)|, uniformly over the sampled window.
#[test]
fn coupling_is_insensitive_to_the_log_prefactor() {
    for &rho_h2 in &[1e-12, 1e-8, 1e-4, 1e-2] {
        for &h_over_a in &[0.1, 1.0, 10.0, 1000.0] {
            let (h, a) = (1.0, 1.0 / h_over_a);
            let rho = rho_h2 / (h * h);
            let g_h = coupling_g(rho, h, a, S4_HARMONIC).unwrap();
            for b in [a, (a * h).sqrt(), h] {
                let g_b = 1.0 / (-(rho * b * b).ln() + (1.0 / S4_HARMONIC) * h / a);
                let cap = 2.000001 * g_b.max(g_h).powi(2) * (h / a).ln().abs() + 1e-15;
                assert!(
                    (g_b - g_h).abs() <= cap,
                    "prefactor swing at rho_h2 = {rho_h2}, h/a = {h_over_a}, b = {b}: \
                     |dg| = {} > {cap}",
                    (g_b - g_h).abs()
                );
            }
        }
    }
}

/// Dropping the gradient term lowers the minimum: E_TF ≤ E_GP for every
/// sampled trap and drive.
#[test]
fn thomas_fermi_energy_never_exceeds_gp() {
    let grid = Grid1D::uniform(0.0, 8.0, 1601).unwrap();
    for trap in [Potential::Harmonic, Potential::power(4.0).unwrap()] {
        for &ng in &[1.0, 10.0, 100.0] {
            let gp = minimize_gp2d(&trap, ng, &grid, 1e-10).unwrap();
            let tf = tf_solve(&trap, 1.0, ng).unwrap();
            assert!(gp.converged);
            assert!(
                tf.e_tf <= gp.energy * (1.0 + 1e-6),
                "E_TF = {} > E_GP = {} for {trap:?} at Ng = {ng}",
                tf.e_tf,
                gp.energy
            );
        }
    }
}

/// Temple's bound sandwiches the discrete ground energy at every grid
/// resolution and for every sampled trial width.
#[test]
fn temple_sandwich_holds_across_resolutions_and_trials() {
    let v = |z: f64| z * z;
    for points in [1001_usize, 2001, 4001] {
        let grid = Grid1D::uniform(-8.0, 8.0, points).unwrap();
        let eigs = eigs_sturm_liouville(v, &grid, 2).unwrap();
        let (e0, gap_floor) = (eigs[0].eigenvalue, eigs[1].eigenvalue);
        for s in [0.4, 0.5, 0.605, 0.8] {
            let trial: Vec<f64> = grid
                .points()
                .iter()
                .map(|&z| (-z * z / (4.0 * s)).exp())
                .collect();
            let stats = temple_statistics(v, &grid, &trial).unwrap();
            let bound = temple_bound(&TempleInput {
                expectation: stats.expectation,
                second_moment: stats.second_moment,
                gap_floor,
            })
            .unwrap();
            assert!(
                bound.lower_bound <= e0 + 1e-9 && e0 <= stats.expectation + 1e-9,
                "sandwich broken at {points} points, s = {s}: {} vs {} vs {}",
                bound.lower_bound,
                e0,
                stats.expectation
            );
        }
    }
}

/// The ground energy is concave in the drive Ng (the minimum of affine
/// functions of Ng), for harmonic and quartic traps alike.
#[test]
fn gp_energy_is_concave_in_the_drive() {
    let grid = Grid1D::uniform(0.0, 7.0, 1401).unwrap();
    for trap in [Potential::Harmonic, Potential::power(4.0).unwrap()] {
        let energies: Vec<f64> = (0..8)
            .map(|i| {
                minimize_gp2d(&trap, 15.0 * i as f64, &grid, 1e-10)
                    .unwrap()
                    .energy
            })
            .collect();
        for w in energies.windows(3) {
            assert!(
                w[2] - 2.0 * w[1] + w[0] <= 1e-9 * w[1].abs().max(1.0),
                "second difference positive for {trap:?}: {w:?}"
            );
        }
        // Strictly increasing as well: interactions only add energy.
        for w in energies.windows(2) {
            assert!(w[1] > w[0], "energy not increasing for {trap:?}: {w:?}");
        }
    }
}

/// E(N, L, g) = L⁻²·E(1, 1, Ng) exactly, over an (N, L, g) lattice.
#[test]
fn scaling_identity_over_a_parameter_lattice() {
    let grid = Grid1D::uniform(0.0, 6.0, 1201).unwrap();
    for &n in &[1.0, 4.0, 25.0] {
        for &l in &[0.5, 1.0, 3.0] {
            for &g in &[0.1, 2.0] {
                let scaled = gp2d_scaled(&Potential::Harmonic, n, l, g, &grid, 1e-10).unwrap();
                let unit = minimize_gp2d(&Potential::Harmonic, n * g, &grid, 1e-10).unwrap();
                assert_relative_eq!(scaled, unit.energy / (l * l), max_relative = 1e-8);
            }
        }
    }
}

/// The regime report's ln(a_2D) agrees with the scattering module's
/// quasi-2D length at every sampled (h, a): two modules, one definition.
#[test]
fn regime_and_scattering_agree_on_the_quasi_2d_length() {
    for &h in &[0.05, 0.3, 1.0] {
        for &a in &[0.01, 0.2, 5.0] {
            let report = classify(1e-3 / (h * h), h, a).unwrap();
            let a2d = effective_a2d(h, a, S4_HARMONIC).unwrap();
            assert_relative_eq!(report.ln_a2d, a2d.ln_a2d(), max_relative = 1e-12);
        }
    }
}
