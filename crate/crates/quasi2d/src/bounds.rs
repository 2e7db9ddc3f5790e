//! Rigorous two-body bounds: Temple's inequality, the softened 3D Dyson
//! potential U_R, and the modified 2D Dyson construction built from the
//! ε-weighted annulus energies E_{R,ε}.
//!
//! Units ħ = 2m = 1 throughout: energies carry 1/length², second moments
//! ⟨H²⟩ carry 1/length⁴. The Temple statistics are computed on the same
//! symmetric tridiagonal Dirichlet discretization as the eigensolver, so
//! the sandwich `temple_bound ≤ discrete ground energy ≤ Rayleigh quotient`
//! is exact linear algebra at any grid resolution, not an asymptotic claim.
//!
//! The 2D Dyson side packages three facts about the annulus energy
//! E_{R,ε} (the minimum of ∫_{B_R}(ε|∇φ|² + ½W|φ|²) + ∫_{B_{R′}∖B_R}|∇φ|²
//! over φ with φ = 1 on the outer boundary):
//!
//! - a composition law across potential-free annuli,
//!   E_{R′,ε} = 2π/(ln(R′/R) + 2π/E_{R,ε}), exact because the outer
//!   minimizer is logarithmic and the two pieces couple only through the
//!   interface value;
//! - a constant-height replacement potential Ũ = ν(R̃)⁻¹ on [R, R̃] with
//!   ν(R̃) = 2π∫_R^R̃ E_{R′,ε}⁻¹ R′ dR′, which is admissible with equality:
//!   2π∫ Ũ E⁻¹ r dr = 1 by construction;
//! - the large-R̃ diagnostic ν(R̃) ≈ ¼R̃² ln(R̃²/a_2D²), reported but never
//!   used as the value.

use std::f64::consts::PI;

use crate::numerics::Grid1D;
use crate::potential::RadialPotential2D;
use crate::scattering::solve_scattering_2d;
use crate::{Error, Result};

// ---------------------------------------------------------------------------
// Temple's inequality
// ---------------------------------------------------------------------------

/// Moments of a Hamiltonian in a normalized trial state, plus a lower bound
/// on the first eigenvalue above the ground state.
#[derive(Debug, Clone, Copy)]
pub struct TempleInput {
    /// ⟨H⟩ in the trial state (1/length²).
    pub expectation: f64,
    /// ⟨H²⟩ in the trial state (1/length⁴).
    pub second_moment: f64,
    /// Lower bound on the first excited level E₁ (1/length²). The bound is
    /// valid only when this exceeds ⟨H⟩.
    pub gap_floor: f64,
}

/// Temple lower bound on the ground energy.
#[derive(Debug, Clone, Copy)]
pub struct TempleBound {
    /// E₀ ≥ ⟨H⟩ − Var/(gap_floor − ⟨H⟩), the additive form.
    pub lower_bound: f64,
    /// Var = ⟨H²⟩ − ⟨H⟩², clamped at zero when roundoff makes it
    /// infinitesimally negative.
    pub variance: f64,
    /// The multiplicative form writes the same bound as ⟨H⟩·factor with
    /// factor = 1 − Var/(⟨H⟩(gap_floor − ⟨H⟩)); `None` when ⟨H⟩ = 0 and the
    /// factorization is degenerate.
    pub multiplicative_factor: Option<f64>,
}

/// Temple's inequality: for gap_floor ≤ E₁ and ⟨H⟩ < gap_floor,
/// E₀ ≥ ⟨H⟩ − Var/(gap_floor − ⟨H⟩).
///
/// The additive and multiplicative forms are algebraically identical; both
/// are reported. A variance more negative than the roundoff scale of the
/// inputs means ⟨H²⟩ and ⟨H⟩ were not computed in the same state and is
/// rejected rather than clamped.
pub fn temple_bound(input: &TempleInput) -> Result<TempleBound> {
    let TempleInput {
        expectation,
        second_moment,
        gap_floor,
    } = *input;
    if !(gap_floor > expectation) {
        return Err(Error::TempleNoGap {
            gap_floor,
            expectation,
        });
    }
    let mean_sq = expectation * expectation;
    let raw_variance = second_moment - mean_sq;
    if raw_variance < -1e-12 * mean_sq.max(second_moment.abs()) {
        return Err(Error::TempleNegativeVariance {
            second_moment,
            mean_sq,
        });
    }
    let variance = raw_variance.max(0.0);
    let lower_bound = expectation - variance / (gap_floor - expectation);
    let multiplicative_factor = if expectation != 0.0 {
        Some(1.0 - variance / (expectation * (gap_floor - expectation)))
    } else {
        None
    };
    Ok(TempleBound {
        lower_bound,
        variance,
        multiplicative_factor,
    })
}

/// First two moments of the discretized 1D operator −d²/dz² + V(z) in a
/// trial state.
#[derive(Debug, Clone, Copy)]
pub struct TrialStatistics {
    /// ⟨H⟩ (1/length²).
    pub expectation: f64,
    /// ⟨H²⟩ (1/length⁴).
    pub second_moment: f64,
}

/// ⟨H⟩ and ⟨H²⟩ of −d²/dz² + V(z) in the trial state, on the same uniform
/// Dirichlet discretization the eigensolver uses.
///
/// The trial is given on the full grid; its two end values sit on the
/// Dirichlet ring and act as the ghost layer of the interior operator, so
/// ⟨H²⟩ = ‖Hψ‖² needs no extrapolation beyond the grid. Because operator,
/// moments, and eigenvalues all refer to one symmetric matrix, Temple's
/// bound from these statistics sits below the discrete ground energy
/// exactly, independent of resolution.
pub fn temple_statistics(
    v: impl Fn(f64) -> f64,
    grid: &Grid1D,
    trial: &[f64],
) -> Result<TrialStatistics> {
    let Some(dz) = grid.uniform_spacing() else {
        return Err(Error::InvalidGrid {
            reason: format!(
                "operator statistics need a uniform grid; got a {} grid",
                grid.kind().name()
            ),
        });
    };
    let n = grid.len();
    if trial.len() != n {
        return Err(Error::InvalidGrid {
            reason: format!("trial has {} values for a {n}-point grid", trial.len()),
        });
    }
    if n < 5 {
        return Err(Error::InvalidGrid {
            reason: format!("operator statistics need at least 5 grid points, got {n}"),
        });
    }

    let z = grid.points();
    let psi = &trial[1..n - 1];
    let m = psi.len();
    let norm_sq: f64 = psi.iter().map(|p| p * p).sum();
    if !(norm_sq > 0.0) {
        return Err(Error::NonPositive {
            name: "trial norm",
            value: norm_sq,
        });
    }

    let inv_dz2 = 1.0 / (dz * dz);
    let mut h_psi = vec![0.0; m];
    for i in 0..m {
        let left = if i == 0 { 0.0 } else { psi[i - 1] };
        let right = if i + 1 == m { 0.0 } else { psi[i + 1] };
        h_psi[i] = (2.0 * psi[i] - left - right) * inv_dz2 + v(z[i + 1]) * psi[i];
    }
    let expectation = psi.iter().zip(&h_psi).map(|(p, h)| p * h).sum::<f64>() / norm_sq;
    let second_moment = h_psi.iter().map(|h| h * h).sum::<f64>() / norm_sq;
    if !expectation.is_finite() || !second_moment.is_finite() {
        return Err(Error::InvalidGrid {
            reason: "operator statistics are not finite (potential overflowed on the grid)"
                .to_string(),
        });
    }
    Ok(TrialStatistics {
        expectation,
        second_moment,
    })
}

// ---------------------------------------------------------------------------
// Softened 3D Dyson potential U_R
// ---------------------------------------------------------------------------

/// The softened 3D Dyson potential: constant height 24/(7R³) on the shell
/// R/2 < r < R, zero elsewhere, normalized so ∫U_R d³x = 4π exactly.
#[derive(Debug, Clone, Copy)]
pub struct DysonU3d {
    /// Outer shell radius R (length).
    pub r: f64,
    /// Shell height 24/(7R³) (1/length²... the potential carries 1/length²
    /// times the 1/length³ of the normalization; as used it multiplies a
    /// scattering length).
    pub height: f64,
}

impl DysonU3d {
    /// U_R(radius): the height on the open shell (R/2, R), zero elsewhere.
    pub fn value(&self, radius: f64) -> f64 {
        if radius > 0.5 * self.r && radius < self.r {
            self.height
        } else {
            0.0
        }
    }

    /// Closed-form ∫U_R d³x = 4π·height·(R³ − (R/2)³)/3 = 4π.
    pub fn integral(&self) -> f64 {
        let r3 = self.r * self.r * self.r;
        4.0 * PI * self.height * r3 * (7.0 / 24.0)
    }
}

/// Build the softened Dyson shell of outer radius R.
pub fn dyson_u3d(r: f64) -> Result<DysonU3d> {
    if !(r > 0.0) {
        return Err(Error::NonPositive { name: "R", value: r });
    }
    Ok(DysonU3d {
        r,
        height: 24.0 / (7.0 * r * r * r),
    })
}

// ---------------------------------------------------------------------------
// The ε-weighted annulus energy E_{R,ε} and its composition law
// ---------------------------------------------------------------------------

/// E_{R,ε}: the minimum of ∫_{supp W}(ε|∇φ|² + ½W|φ|²) + ∫_{annulus}|∇φ|²
/// over radial φ on B_R with φ(R) = 1.
///
/// The Euler equation of this functional is the ε-weighted zero-energy
/// scattering problem, so the value comes from the radial solver:
/// E = 2π/ln(R/a_scatt), exactly ε-independent for a hard disc and 0 for
/// W ≡ 0 (minimizer ≡ 1). A potential strong enough that a_scatt ≥ R has
/// no positive annulus energy and is rejected.
pub fn e_r_epsilon(w: &impl RadialPotential2D, r_boundary: f64, epsilon: f64) -> Result<f64> {
    let sol = solve_scattering_2d(w, r_boundary, epsilon)?;
    if sol.too_strong {
        return Err(Error::HardWallRadius {
            r: r_boundary,
            what: "the 2D scattering length a_scatt",
            bound: sol.a_scatt,
        });
    }
    Ok(sol.e_r)
}

/// Independent oracle for E_{R,ε}: direct minimization of the discrete
/// quadratic form on a finite-volume grid.
///
/// The functional is quadratic, so its exact discrete minimizer solves the
/// normal equations — a symmetric positive-definite tridiagonal system —
/// and the reported value is the quadratic form at that minimizer. The
/// kinetic weight is ε on faces inside the support of W and 1 outside;
/// W enters through cell midpoints, which resolves discontinuous discs
/// exactly because the support radius is a grid node. Inner region uniform,
/// outer annulus log-spaced.
pub fn e_r_epsilon_direct(
    w: &impl RadialPotential2D,
    r_boundary: f64,
    epsilon: f64,
) -> Result<f64> {
    if !(epsilon > 0.0) {
        return Err(Error::NonPositive {
            name: "epsilon",
            value: epsilon,
        });
    }
    if !(r_boundary > 0.0) {
        return Err(Error::NonPositive {
            name: "r_boundary",
            value: r_boundary,
        });
    }
    let support = w.support_radius();
    let core = w.core_radius();
    if support <= 0.0 {
        return Ok(0.0); // W ≡ 0: minimizer ≡ 1 at zero cost
    }
    if r_boundary < support * (1.0 - 1e-12) {
        return Err(Error::HardWallRadius {
            r: r_boundary,
            what: "the support radius of W",
            bound: support,
        });
    }

    // Node set: uniform on [core, support] (skipped for a pure hard disc),
    // log-spaced on (support, R].
    const INNER_INTERVALS: usize = 8192;
    const OUTER_POINTS_PER_DECADE: f64 = 256.0;
    let mut nodes: Vec<f64> = Vec::new();
    let hard_disc = core > 0.0 && support <= core * (1.0 + 1e-14);
    if hard_disc {
        nodes.push(support);
    } else {
        let lo = core; // 0 for everywhere-finite W
        for i in 0..=INNER_INTERVALS {
            nodes.push(lo + (support - lo) * i as f64 / INNER_INTERVALS as f64);
        }
    }
    if r_boundary > support * (1.0 + 1e-12) {
        let decades = (r_boundary / support).log10();
        let m = ((decades * OUTER_POINTS_PER_DECADE).ceil() as usize).max(512);
        let t0 = support.ln();
        let t1 = r_boundary.ln();
        for j in 1..=m {
            let t = t0 + (t1 - t0) * j as f64 / m as f64;
            nodes.push(if j == m { r_boundary } else { t.exp() });
        }
    }
    let last = nodes.len() - 1;

    // Quadratic form Q[φ] = Σ_faces k_j (φ_{j+1} − φ_j)²
    //                     + Σ_cells c_j ((φ_j + φ_{j+1})/2)²
    // with k_j = 2π ε_j r̄_j / Δr_j and c_j = π W(r̄_j) r̄_j Δr_j.
    let face_k: Vec<f64> = (0..last)
        .map(|j| {
            let dr = nodes[j + 1] - nodes[j];
            let mid = 0.5 * (nodes[j] + nodes[j + 1]);
            let eps = if mid < support { epsilon } else { 1.0 };
            2.0 * PI * eps * mid / dr
        })
        .collect();
    let cell_c: Vec<f64> = (0..last)
        .map(|j| {
            let dr = nodes[j + 1] - nodes[j];
            let mid = 0.5 * (nodes[j] + nodes[j + 1]);
            PI * w.value(mid) * mid * dr
        })
        .collect();

    // Pinned values: φ(R) = 1 always; φ at the inner end = 0 for hard cores.
    let pin_inner = core > 0.0;
    let i0 = if pin_inner { 1 } else { 0 };
    let m = last - i0; // unknowns are nodes i0..last
    if m == 0 {
        // Degenerate: boundary at the support edge of a pure hard disc.
        return Err(Error::HardWallRadius {
            r: r_boundary,
            what: "the hard-core radius",
            bound: core,
        });
    }

    // Assemble the SPD tridiagonal normal equations over the unknowns.
    let mut diag = vec![0.0; m];
    let mut off = vec![0.0; m.saturating_sub(1)];
    let mut rhs = vec![0.0; m];
    for j in 0..last {
        // Face j couples nodes j and j+1; Hessian [[2k, −2k], [−2k, 2k]];
        // cell j adds [[c/2, c/2], [c/2, c/2]]. Solve (½Hess)φ = rhs.
        let k = face_k[j];
        let c = cell_c[j];
        let (a, b) = (j as isize - i0 as isize, (j + 1) as isize - i0 as isize);
        let coupling = -k + 0.25 * c;
        if (0..m as isize).contains(&a) {
            diag[a as usize] += k + 0.25 * c;
        }
        if (0..m as isize).contains(&b) && (j + 1) != last {
            diag[b as usize] += k + 0.25 * c;
        }
        if (0..m as isize).contains(&a) && (0..m as isize).contains(&b) && (j + 1) != last {
            off[a as usize] = coupling;
        }
        // Pinned neighbors move their coupling to the right-hand side.
        if (j + 1) == last && (0..m as isize).contains(&a) {
            rhs[a as usize] -= coupling; // φ_last = 1
        }
        // Inner pinned value is 0 and contributes nothing.
    }
    solve_spd_tridiag(&mut diag, &off, &mut rhs);

    let mut phi = vec![0.0; nodes.len()];
    phi[last] = 1.0;
    phi[i0..last].copy_from_slice(&rhs);

    let mut energy = 0.0;
    for j in 0..last {
        let d = phi[j + 1] - phi[j];
        let avg = 0.5 * (phi[j] + phi[j + 1]);
        energy += face_k[j] * d * d + cell_c[j] * avg * avg;
    }
    Ok(energy)
}

/// LDLᵀ-style elimination for a symmetric positive-definite tridiagonal
/// system; `off[i]` couples unknowns `i` and `i+1`. Stable without pivoting
/// for SPD matrices.
fn solve_spd_tridiag(diag: &mut [f64], off: &[f64], rhs: &mut [f64]) {
    let m = diag.len();
    for i in 1..m {
        let w = off[i - 1] / diag[i - 1];
        diag[i] -= w * off[i - 1];
        rhs[i] -= w * rhs[i - 1];
    }
    rhs[m - 1] /= diag[m - 1];
    for i in (0..m - 1).rev() {
        rhs[i] = (rhs[i] - off[i] * rhs[i + 1]) / diag[i];
    }
}

/// Composition law for potential-free annuli:
/// E_{R′,ε} = 2π/(ln(R′/R) + 2π/E_{R,ε}).
///
/// Exact, because the minimizer on the annulus is c + d·ln r and the inner
/// and outer problems couple only through the interface value; minimizing
/// over that value gives the harmonic sum above. E = 0 (free case) stays 0.
pub fn dyson_recursion(e_r_eps: f64, r: f64, r_prime: f64) -> Result<f64> {
    for (name, value) in [("R", r), ("R'", r_prime)] {
        if !(value > 0.0) {
            return Err(Error::NonPositive { name, value });
        }
    }
    if r_prime < r {
        return Err(Error::DysonEmptyAnnulus {
            r,
            r_tilde: r_prime,
        });
    }
    if e_r_eps < 0.0 {
        return Err(Error::NonPositive {
            name: "E_{R,eps}",
            value: e_r_eps,
        });
    }
    if e_r_eps == 0.0 {
        return Ok(0.0);
    }
    Ok(2.0 * PI / ((r_prime / r).ln() + 2.0 * PI / e_r_eps))
}

// ---------------------------------------------------------------------------
// The admissible constant-height 2D Dyson potential Ũ
// ---------------------------------------------------------------------------

/// Constant-height replacement potential Ũ = ν(R̃)⁻¹ on [R, R̃] with
/// ν(R̃) = 2π∫_R^R̃ E_{R′,ε}⁻¹ R′ dR′, admissible with equality.
#[derive(Debug, Clone)]
pub struct DysonPotential2D {
    /// Inner radius R (length).
    pub r: f64,
    /// Outer radius R̃ (length).
    pub r_tilde: f64,
    /// Kinetic fraction ε the annulus energies were computed with.
    pub epsilon: f64,
    /// Normalizer ν(R̃) (length²).
    pub nu: f64,
    /// Height ν(R̃)⁻¹ of the profile (1/length²).
    pub height: f64,
    /// The admissibility integral 2π∫Ũ E⁻¹ r dr, recomputed on an
    /// independent node set; 1 within quadrature error by construction.
    pub admissibility: f64,
}

impl DysonPotential2D {
    /// Ũ(radius): the constant height on [R, R̃], zero elsewhere.
    pub fn value(&self, radius: f64) -> f64 {
        if radius >= self.r && radius <= self.r_tilde {
            self.height
        } else {
            0.0
        }
    }
}

/// Build the constant-height Ũ on [R, R̃] from the annulus energies.
///
/// `e_of_rprime` supplies E_{R′,ε} > 0 for R′ ∈ [R, R̃] — typically the
/// composition law seeded by one `e_r_epsilon` solve. The normalizer is a
/// composite Simpson quadrature in ln r with at least 256 log-spaced points
/// per decade; the admissibility integral is recomputed on a misaligned,
/// finer node set so the construction is checked rather than assumed.
pub fn dyson_u2d(
    r: f64,
    r_tilde: f64,
    epsilon: f64,
    e_of_rprime: impl Fn(f64) -> Result<f64>,
) -> Result<DysonPotential2D> {
    for (name, value) in [("R", r), ("epsilon", epsilon)] {
        if !(value > 0.0) {
            return Err(Error::NonPositive { name, value });
        }
    }
    if !(r_tilde > r) {
        return Err(Error::DysonEmptyAnnulus { r, r_tilde });
    }
    let integrand = |rp: f64| -> Result<f64> {
        let e = e_of_rprime(rp)?;
        if !(e > 0.0) || !e.is_finite() {
            return Err(Error::NonPositive {
                name: "E_{R',eps} on the annulus",
                value: e,
            });
        }
        Ok(2.0 * PI * rp / e)
    };

    let decades = (r_tilde / r).log10();
    let intervals = even_at_least(((decades * 256.0).ceil() as usize).max(512));
    let nu = simpson_log(r, r_tilde, intervals, &integrand)?;
    if !(nu > 0.0) || !nu.is_finite() {
        return Err(Error::InvalidGrid {
            reason: format!("Dyson normalizer quadrature failed: nu = {nu}"),
        });
    }
    let height = 1.0 / nu;

    let check = simpson_log(r, r_tilde, even_at_least(intervals * 3 / 2), &integrand)?;
    let admissibility = height * check;
    if !(admissibility <= 1.0 + 1e-8) {
        return Err(Error::InvalidGrid {
            reason: format!(
                "Dyson admissibility drifted: 2π∫Ũ E⁻¹ r dr = {admissibility}, not ≤ 1 within 1e-8"
            ),
        });
    }
    Ok(DysonPotential2D {
        r,
        r_tilde,
        epsilon,
        nu,
        height,
        admissibility,
    })
}

/// Large-R̃ diagnostic for the normalizer: ¼R̃² ln(R̃²/a_2D²), taken in log
/// domain as ½R̃²(ln R̃ − ln a_2D). Reported for comparison, never used as
/// the value of ν.
pub fn nu_asymptote(r_tilde: f64, ln_a_scatt: f64) -> f64 {
    0.5 * r_tilde * r_tilde * (r_tilde.ln() - ln_a_scatt)
}

fn even_at_least(n: usize) -> usize {
    if n.is_multiple_of(2) {
        n.max(2)
    } else {
        n + 1
    }
}

/// Composite Simpson quadrature of ∫f(r)dr over [r0, r1] in the log
/// coordinate t = ln r (uniform in t, so the nodes are log-spaced).
fn simpson_log(
    r0: f64,
    r1: f64,
    intervals: usize,
    f: &impl Fn(f64) -> Result<f64>,
) -> Result<f64> {
    debug_assert!(intervals >= 2 && intervals.is_multiple_of(2));
    let t0 = r0.ln();
    let t1 = r1.ln();
    let dt = (t1 - t0) / intervals as f64;
    let mut sum = 0.0;
    for i in 0..=intervals {
        let rp = if i == 0 {
            r0
        } else if i == intervals {
            r1
        } else {
            (t0 + dt * i as f64).exp()
        };
        let weight = if i == 0 || i == intervals {
            1.0
        } else if i % 2 == 1 {
            4.0
        } else {
            2.0
        };
        sum += weight * f(rp)? * rp; // dr = r dt
    }
    Ok(sum * dt / 3.0)
}

// ---------------------------------------------------------------------------
// Bookkeeping correction a′
// ---------------------------------------------------------------------------

/// Scattering-length correction absorbed by the many-body lower-bound
/// argument: a′ = a(1 − ε)(1 − 2R‖∂_z s²‖∞/(hδ)).
///
/// `ds2_inf` is ‖∂_z s²‖∞ of the unit-scale transverse mode (see
/// `TransverseMode::ds2_inf`) and `delta` is the threshold defining the set
/// where s² ≥ δ. This is a formula evaluator for diagnostic sweeps only: it
/// has no standalone variational meaning, and the factor drops to zero or
/// below once R‖∂s²‖∞ is comparable with hδ, which simply means those
/// parameters sit outside the regime where the correction is useful.
pub fn a_prime(a: f64, epsilon: f64, r: f64, h: f64, ds2_inf: f64, delta: f64) -> f64 {
    a * (1.0 - epsilon) * (1.0 - 2.0 * r * ds2_inf / (h * delta))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::eigs_sturm_liouville;
    use crate::potential::{HardDisc, SoftDisc};
    use crate::regimes::S4_HARMONIC;
    use approx::assert_relative_eq;

    #[test]
    fn zero_variance_bound_is_the_expectation() {
        let input = TempleInput {
            expectation: 2.5,
            second_moment: 6.25,
            gap_floor: 7.0,
        };
        let bound = temple_bound(&input).unwrap();
        assert_relative_eq!(bound.lower_bound, 2.5, epsilon = 1e-15);
        assert_eq!(bound.variance, 0.0);
        assert_relative_eq!(bound.multiplicative_factor.unwrap(), 1.0, epsilon = 1e-15);
    }

    #[test]
    fn temple_rejects_missing_gap_and_inconsistent_moments() {
        let no_gap = temple_bound(&TempleInput {
            expectation: 2.0,
            second_moment: 4.5,
            gap_floor: 2.0,
        });
        assert!(matches!(no_gap, Err(Error::TempleNoGap { .. })));
        let bad_moments = temple_bound(&TempleInput {
            expectation: 2.0,
            second_moment: 3.9,
            gap_floor: 5.0,
        });
        assert!(matches!(
            bad_moments,
            Err(Error::TempleNegativeVariance { .. })
        ));
    }

    #[test]
    fn gaussian_trial_sandwiches_the_harmonic_ground_state() {
        // Trial e^{−z²/(4s)} with ⟨z²⟩ = s = 1.21·(optimal ½) for −d²/dz² + z².
        // Analytically ⟨H⟩ = 1/(4s) + s and, with γ = 1 − 1/(4s²),
        // ⟨H²⟩ = 1/(4s²) + 2γ·(1/(2s))·s + 3γ²s².
        let s: f64 = 1.21 * 0.5;
        let grid = Grid1D::uniform(-10.0, 10.0, 8001).unwrap();
        let trial: Vec<f64> = grid
            .points()
            .iter()
            .map(|&z| (-z * z / (4.0 * s)).exp())
            .collect();
        let stats = temple_statistics(|z| z * z, &grid, &trial).unwrap();

        let gamma = 1.0 - 1.0 / (4.0 * s * s);
        let expectation_exact = 1.0 / (4.0 * s) + s;
        let second_exact = 1.0 / (4.0 * s * s) + gamma + 3.0 * gamma * gamma * s * s;
        assert_relative_eq!(stats.expectation, expectation_exact, max_relative = 1e-5);
        assert_relative_eq!(stats.second_moment, second_exact, max_relative = 1e-5);

        let eigs = eigs_sturm_liouville(|z| z * z, &grid, 2).unwrap();
        let ground = eigs[0].eigenvalue;
        let bound = temple_bound(&TempleInput {
            expectation: stats.expectation,
            second_moment: stats.second_moment,
            gap_floor: eigs[1].eigenvalue,
        })
        .unwrap();

        // The sandwich is exact linear algebra on the discretized operator.
        assert!(
            bound.lower_bound <= ground + 1e-12,
            "Temple bound {} above discrete ground energy {ground}",
            bound.lower_bound
        );
        assert!(ground <= stats.expectation + 1e-12);

        // Against the analytic reference, gap floor 3.
        let variance_exact = second_exact - expectation_exact * expectation_exact;
        let bound_exact = expectation_exact - variance_exact / (3.0 - expectation_exact);
        let analytic = temple_bound(&TempleInput {
            expectation: stats.expectation,
            second_moment: stats.second_moment,
            gap_floor: 3.0,
        })
        .unwrap();
        assert_relative_eq!(analytic.lower_bound, bound_exact, max_relative = 1e-4);

        // Multiplicative and additive forms agree algebraically.
        let factor = analytic.multiplicative_factor.unwrap();
        assert_relative_eq!(
            stats.expectation * factor,
            analytic.lower_bound,
            max_relative = 1e-12
        );
    }

    #[test]
    fn temple_error_shrinks_along_a_confinement_ladder() {
        // −d²/dz² + z²/h⁴ + A·s_h(z)² with the unperturbed mode s_h as the
        // trial: ⟨H⟩ = 1/h² + A·(∫s⁴)/h and Var = (A/h)²(∫s⁶ − (∫s⁴)²).
        // The relative Temple error then scales like h², so halving h
        // quarters it.
        let amplitude = 8.0 * PI * 0.05;
        let s6: f64 = 1.0 / (PI * 3.0f64.sqrt());
        let c_var = s6 - S4_HARMONIC * S4_HARMONIC;

        let mut errors = Vec::new();
        for &h in &[0.4f64, 0.3, 0.2] {
            let grid = Grid1D::uniform(-8.0 * h, 8.0 * h, 3001).unwrap();
            let mode = |z: f64| (-z * z / (2.0 * h * h)).exp();
            let trial: Vec<f64> = grid.points().iter().map(|&z| mode(z)).collect();
            let s_h_sq =
                |z: f64| (-z * z / (h * h)).exp() / (PI.sqrt() * h);
            let v = |z: f64| z * z / (h * h * h * h) + amplitude * s_h_sq(z);

            let stats = temple_statistics(v, &grid, &trial).unwrap();
            let expectation_exact = 1.0 / (h * h) + amplitude * S4_HARMONIC / h;
            let variance_exact = (amplitude / h) * (amplitude / h) * c_var;
            assert_relative_eq!(stats.expectation, expectation_exact, max_relative = 1e-4);
            // Var is a cancellation-prone difference of large moments; the
            // check pins the (A/h)² scaling, not the last digits.
            assert_relative_eq!(
                stats.second_moment - stats.expectation * stats.expectation,
                variance_exact,
                max_relative = 5e-3
            );

            // Discrete gap floor: second eigenvalue of the free part, which
            // the positive perturbation can only push up.
            let free = eigs_sturm_liouville(|z| z * z / (h * h * h * h), &grid, 2).unwrap();
            let bound = temple_bound(&TempleInput {
                expectation: stats.expectation,
                second_moment: stats.second_moment,
                gap_floor: free[1].eigenvalue,
            })
            .unwrap();

            let full = eigs_sturm_liouville(v, &grid, 1).unwrap();
            assert!(bound.lower_bound <= full[0].eigenvalue + 1e-9 / (h * h));
            assert!(full[0].eigenvalue <= stats.expectation + 1e-12 / (h * h));

            errors.push((stats.expectation - bound.lower_bound) / stats.expectation);
        }
        assert!(
            errors[0] > errors[1] && errors[1] > errors[2],
            "relative Temple errors not decreasing: {errors:?}"
        );
        assert!(
            errors[2] < 0.35 * errors[0],
            "error did not shrink quadratically: {errors:?}"
        );
    }

    #[test]
    fn dyson_shell_matches_closed_form() {
        let u = dyson_u3d(2.0).unwrap();
        assert_relative_eq!(u.height, 3.0 / 7.0, epsilon = 1e-15);
        assert_relative_eq!(u.value(1.5), 3.0 / 7.0, epsilon = 1e-15);
        assert_eq!(u.value(0.99), 0.0);
        assert_eq!(u.value(2.0 + 1e-9), 0.0);
        assert_relative_eq!(u.integral(), 4.0 * PI, max_relative = 1e-12);

        // Midpoint quadrature of ∫U 4πr² dr over the shell.
        let cells = 16384;
        let (lo, hi) = (1.0, 2.0);
        let dr = (hi - lo) / cells as f64;
        let quad: f64 = (0..cells)
            .map(|i| {
                let r = lo + (i as f64 + 0.5) * dr;
                4.0 * PI * r * r * u.value(r) * dr
            })
            .sum();
        assert_relative_eq!(quad, 4.0 * PI, max_relative = 1e-6);

        assert!(matches!(
            dyson_u3d(0.0),
            Err(Error::NonPositive { name: "R", .. })
        ));
    }

    #[test]
    fn hard_disc_annulus_energy_is_the_log_formula_for_any_epsilon() {
        let w = HardDisc::new(0.05).unwrap();
        let exact = 2.0 * PI / (1.0f64 / 0.05).ln();
        for &eps in &[0.3, 1.0, 2.5] {
            let e = e_r_epsilon(&w, 1.0, eps).unwrap();
            assert_relative_eq!(e, exact, max_relative = 1e-12);
        }
        // Free case: zero energy.
        let free = SoftDisc {
            strength: 0.0,
            radius: 1.0,
        };
        assert_eq!(e_r_epsilon(&free, 2.0, 0.5).unwrap(), 0.0);
        assert!(e_r_epsilon_direct(&free, 2.0, 0.5).unwrap().abs() < 1e-12);
    }

    #[test]
    fn direct_minimization_agrees_with_the_radial_solver() {
        // Soft disc, the structure the composition law is exercised with.
        let w = SoftDisc::new(0.1, 1.0).unwrap();
        for &eps in &[0.5, 1.0] {
            let ode = e_r_epsilon(&w, 3.0, eps).unwrap();
            let direct = e_r_epsilon_direct(&w, 3.0, eps).unwrap();
            assert_relative_eq!(ode, direct, max_relative = 1e-4);
        }
        // Hard disc against the closed form.
        let hard = HardDisc::new(0.05).unwrap();
        let exact = 2.0 * PI / (1.0f64 / 0.05).ln();
        let direct = e_r_epsilon_direct(&hard, 1.0, 0.7).unwrap();
        assert_relative_eq!(direct, exact, max_relative = 1e-4);
    }

    #[test]
    fn composition_law_reproduces_direct_solves() {
        // Executable annulus identity: composing the boundary-1 solve at the
        // support edge out to R′ matches both the solver and the independent
        // minimization oracle at R′.
        let w = SoftDisc::new(0.2, 1.0).unwrap();
        for &eps in &[0.3, 1.0] {
            let base = e_r_epsilon(&w, 1.0, eps).unwrap();
            let composed = dyson_recursion(base, 1.0, 3.0).unwrap();
            let solver = e_r_epsilon(&w, 3.0, eps).unwrap();
            let direct = e_r_epsilon_direct(&w, 3.0, eps).unwrap();
            assert_relative_eq!(composed, solver, max_relative = 1e-4);
            assert_relative_eq!(composed, direct, max_relative = 1e-4);
        }
    }

    #[test]
    fn annulus_energy_is_monotone_in_epsilon_and_in_w() {
        let w = SoftDisc::new(0.5, 1.0).unwrap();
        let e1 = e_r_epsilon(&w, 4.0, 0.3).unwrap();
        let e2 = e_r_epsilon(&w, 4.0, 0.6).unwrap();
        let e3 = e_r_epsilon(&w, 4.0, 1.0).unwrap();
        assert!(e1 < e2 && e2 < e3, "not monotone in epsilon: {e1} {e2} {e3}");

        let weak = SoftDisc::new(0.2, 1.0).unwrap();
        let strong = SoftDisc::new(0.4, 1.0).unwrap();
        let ew = e_r_epsilon(&weak, 4.0, 1.0).unwrap();
        let es = e_r_epsilon(&strong, 4.0, 1.0).unwrap();
        assert!(ew < es, "not monotone in W: {ew} vs {es}");

        // E_R decreasing in R at fixed potential.
        let near = e_r_epsilon(&w, 2.0, 1.0).unwrap();
        let far = e_r_epsilon(&w, 8.0, 1.0).unwrap();
        assert!(far < near);
    }

    #[test]
    fn recursion_identity_and_log_additivity() {
        // R′ = R is the identity.
        assert_relative_eq!(
            dyson_recursion(0.8, 2.0, 2.0).unwrap(),
            0.8,
            epsilon = 1e-15
        );
        // Hard-disc energies compose additively in the log.
        let a0 = 0.01;
        let e_at = |r: f64| 2.0 * PI / (r / a0).ln();
        let composed = dyson_recursion(e_at(0.5), 0.5, 7.0).unwrap();
        assert_relative_eq!(composed, e_at(7.0), max_relative = 1e-14);
        // Free case propagates as zero.
        assert_eq!(dyson_recursion(0.0, 1.0, 5.0).unwrap(), 0.0);
        // Argument validation.
        assert!(matches!(
            dyson_recursion(0.5, 2.0, 1.0),
            Err(Error::DysonEmptyAnnulus { .. })
        ));
        assert!(matches!(
            dyson_recursion(-0.1, 1.0, 2.0),
            Err(Error::NonPositive { .. })
        ));
    }

    #[test]
    fn constant_height_profile_is_admissible_and_tracks_the_asymptote() {
        // Hard disc of radius a₀: E(r) = 2π/ln(r/a₀) exactly, so the
        // normalizer has the closed form
        // ν = [½r²(ln(r/a₀) − ½)] evaluated between R and R̃.
        let a0 = 1.0;
        let r = 10.0 * a0;
        let hard = HardDisc::new(a0).unwrap();
        let base = e_r_epsilon(&hard, r, 0.7).unwrap();
        let nu_exact = |x: f64| 0.5 * x * x * ((x / a0).ln() - 0.5);

        let mut previous_nu = 0.0;
        let mut previous_dev = f64::INFINITY;
        for &ratio in &[1e2, 1e3, 1e4, 1e6] {
            let r_tilde = ratio * a0;
            let u = dyson_u2d(r, r_tilde, 0.7, |rp| dyson_recursion(base, r, rp)).unwrap();
            assert_relative_eq!(
                u.nu,
                nu_exact(r_tilde) - nu_exact(r),
                max_relative = 1e-6
            );
            assert_relative_eq!(u.admissibility, 1.0, epsilon = 1e-8);
            assert_relative_eq!(u.value(0.5 * (r + r_tilde)), u.height, epsilon = 1e-15);
            assert_eq!(u.value(0.5 * r), 0.0);
            assert_eq!(u.value(2.0 * r_tilde), 0.0);

            assert!(u.nu > previous_nu, "nu not increasing in R_tilde");
            previous_nu = u.nu;

            let asym = nu_asymptote(r_tilde, a0.ln());
            let dev = (u.nu - asym).abs() / asym;
            assert!(dev < previous_dev, "deviation not decreasing: {dev}");
            previous_dev = dev;
            if (ratio - 1e3).abs() < 0.5 {
                assert!(dev <= 0.10, "deviation {dev} at R̃/a₀ = 1e3 exceeds 10%");
            }
            if (ratio - 1e6).abs() < 0.5 {
                assert!(dev <= 0.04, "deviation {dev} at R̃/a₀ = 1e6 exceeds 4%");
            }
        }

        // Construction rejected on an empty annulus and on E ≤ 0.
        assert!(matches!(
            dyson_u2d(r, r, 0.7, |_| Ok(1.0)),
            Err(Error::DysonEmptyAnnulus { .. })
        ));
        assert!(matches!(
            dyson_u2d(r, 2.0 * r, 0.7, |_| Ok(0.0)),
            Err(Error::NonPositive { .. })
        ));
    }

    #[test]
    fn a_prime_evaluates_the_documented_formula() {
        let a = 0.01;
        let value = a_prime(a, 0.1, 0.05, 1.0, 0.4839, 0.2);
        let expected = a * 0.9 * (1.0 - 2.0 * 0.05 * 0.4839 / 0.2);
        assert_relative_eq!(value, expected, epsilon = 1e-15);
        // The correction vanishes as ε → 0 and R → 0.
        assert_relative_eq!(a_prime(a, 0.0, 0.0, 1.0, 0.4839, 0.2), a, epsilon = 1e-15);
        assert!(a_prime(a, 0.1, 0.05, 1.0, 0.4839, 0.2) < a);
    }
}
