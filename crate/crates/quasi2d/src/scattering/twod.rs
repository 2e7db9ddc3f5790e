//! 2D zero-energy scattering and the effective 2D scattering length.
//!
//! For a nonnegative compactly supported W the minimizer of the scattering
//! functional satisfies −εΔψ + ½Wψ = 0 inside the support (kinetic weight
//! ε ≤ 1 generalizes the plain case ε = 1) and is harmonic outside, so
//! ψ ∝ ln(r/a_scatt) there; a_scatt is the 2D scattering length and the
//! functional value at boundary radius R is E = 2π/ln(R/a_scatt). The
//! radial equation is integrated in the log coordinate t = ln r, where it
//! reads ψ_tt = (r²W/2ε)ψ and the outer solution is linear in t. Because
//! a_scatt is exponentially small in the physical regimes, it is carried in
//! log domain throughout.

use crate::error::Error;
use crate::numerics::{integrate_radial_ode, Grid1D, GridKind, OdeInit};
use crate::potential::RadialPotential2D;
use crate::Result;

/// Points per decade for the inner log-radial integration.
const POINTS_PER_DECADE: usize = 192;
/// Decades below the support radius at which the regular initial condition
/// is imposed for soft potentials.
const START_DECADES: f64 = 6.0;

/// Radial 2D scattering solution at boundary radius R.
#[derive(Debug, Clone)]
pub struct ScatteringSolution2D {
    /// Log-radial grid from the starting radius to R.
    pub grid: Grid1D,
    /// Minimizer normalized to ψ(R) = 1; 0 ≤ ψ ≤ 1.
    pub psi: Vec<f64>,
    /// ln a_scatt (−∞ when W ≡ 0 and the length is degenerate).
    pub ln_a_scatt: f64,
    /// a_scatt in linear domain; may underflow to 0 for very soft W.
    pub a_scatt: f64,
    /// Functional value E_{R,ε} = 2π/ln(R/a_scatt); 0 when W ≡ 0.
    pub e_r: f64,
    /// Kinetic weight inside the support.
    pub epsilon: f64,
    /// Boundary radius where ψ = 1.
    pub r_boundary: f64,
    /// Set when a_scatt ≥ R, which makes E_R non-positive.
    pub too_strong: bool,
}

/// Solve the ε-weighted 2D zero-energy scattering problem with ψ(R) = 1.
///
/// Requires R ≥ the support radius of W. The kinetic weight is ε inside
/// the support and 1 outside; at the support edge the flux εψ′ is
/// continuous, which is where ε enters the extracted length.
pub fn solve_scattering_2d(
    w: &impl RadialPotential2D,
    r_boundary: f64,
    epsilon: f64,
) -> Result<ScatteringSolution2D> {
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
    if r_boundary < support * (1.0 - 1e-12) {
        return Err(Error::HardWallRadius {
            r: r_boundary,
            what: "the support radius of W",
            bound: support,
        });
    }

    let t_support = support.ln();
    let t_boundary = r_boundary.ln();

    // ψ on the inner region in the log coordinate, un-normalized, plus the
    // outer slope α = ε ψ_t(t_support⁻) after flux matching.
    let (inner_t, inner_psi, psi_edge, alpha) = if core > 0.0 && support <= core * (1.0 + 1e-14) {
        // Pure hard disc: no soft region; ψ(core) = 0 with unit log-slope.
        (vec![t_support], vec![0.0], 0.0, epsilon)
    } else if is_zero(w, support) {
        // Free case: ψ ≡ 1 everywhere, degenerate scattering length.
        let grid = build_grid(
            (support / 1e3).max(support * 1e-3).ln(),
            t_boundary,
        )?;
        let n = grid.len();
        return Ok(ScatteringSolution2D {
            grid,
            psi: vec![1.0; n],
            ln_a_scatt: f64::NEG_INFINITY,
            a_scatt: 0.0,
            e_r: 0.0,
            epsilon,
            r_boundary,
            too_strong: false,
        });
    } else {
        let (t_start, init) = if core > 0.0 {
            (core.ln(), OdeInit { value: 0.0, slope: 1.0 })
        } else {
            // Regular solution near the origin: ψ ≈ 1 + W(0)r²/(8ε)·2, so
            // ψ_t = r ψ′ = W(0) r²/(4ε), evaluated at the tiny start radius.
            let r_start = support * 10f64.powf(-START_DECADES);
            let slope = w.value(0.0) * r_start * r_start / (4.0 * epsilon);
            (r_start.ln(), OdeInit { value: 1.0, slope })
        };
        let n = ((t_support - t_start) / std::f64::consts::LN_10 * POINTS_PER_DECADE as f64)
            .ceil() as usize
            + 1;
        let t_grid = Grid1D::uniform(t_start, t_support, n.max(16))?;
        let coefficient = |t: f64| {
            let r = t.exp();
            r * r * w.value(r) / (2.0 * epsilon)
        };
        let sol = integrate_radial_ode(coefficient, &t_grid, init)?;
        let psi_edge = *sol.u.last().unwrap();
        let slope_edge = *sol.du.last().unwrap();
        if slope_edge <= 0.0 {
            // W ≥ 0 forces a nondecreasing ψ; a vanishing edge slope means
            // the potential is numerically zero.
            let grid = build_grid(t_start, t_boundary)?;
            let n = grid.len();
            return Ok(ScatteringSolution2D {
                grid,
                psi: vec![1.0; n],
                ln_a_scatt: f64::NEG_INFINITY,
                a_scatt: 0.0,
                e_r: 0.0,
                epsilon,
                r_boundary,
                too_strong: false,
            });
        }
        (
            t_grid.points().to_vec(),
            sol.u,
            psi_edge,
            epsilon * slope_edge,
        )
    };

    // Outside the support ψ is linear in t with slope α (flux matching):
    // ψ(t) = ψ_edge + α(t − t_support), which vanishes at ln a_scatt.
    let ln_a_scatt = t_support - psi_edge / alpha;
    let a_scatt = ln_a_scatt.exp();
    let denom = t_boundary - ln_a_scatt;
    let too_strong = denom <= 0.0;
    let e_r = if too_strong {
        f64::NEG_INFINITY
    } else {
        2.0 * std::f64::consts::PI / denom
    };

    // Assemble the full profile up to R and normalize ψ(R) = 1.
    let mut ts = inner_t;
    let mut psi = inner_psi;
    if t_boundary > t_support + 1e-15 {
        let dt = std::f64::consts::LN_10 / POINTS_PER_DECADE as f64;
        let m = ((t_boundary - t_support) / dt).ceil() as usize;
        for j in 1..=m {
            let t = t_support + (t_boundary - t_support) * j as f64 / m as f64;
            ts.push(t);
            psi.push(psi_edge + alpha * (t - t_support));
        }
    }
    let z = *psi.last().unwrap();
    let points: Vec<f64> = ts.iter().map(|&t| t.exp()).collect();
    let psi: Vec<f64> = psi.iter().map(|&p| p / z).collect();
    let grid = if points.len() == 1 {
        Grid1D::from_points(vec![points[0], r_boundary.max(points[0] * (1.0 + 1e-9))], GridKind::LogRadial)?
    } else {
        Grid1D::from_points(points, GridKind::LogRadial)?
    };
    let psi = if psi.len() == 1 { vec![0.0, 1.0] } else { psi };

    Ok(ScatteringSolution2D {
        grid,
        psi,
        ln_a_scatt,
        a_scatt,
        e_r,
        epsilon,
        r_boundary,
        too_strong,
    })
}

fn build_grid(t_start: f64, t_end: f64) -> Result<Grid1D> {
    let n = (((t_end - t_start) / std::f64::consts::LN_10) * POINTS_PER_DECADE as f64).ceil()
        as usize
        + 1;
    let t = Grid1D::uniform(t_start, t_end, n.max(2))?;
    Grid1D::from_points(
        t.points().iter().map(|&x| x.exp()).collect(),
        GridKind::LogRadial,
    )
}

fn is_zero(w: &impl RadialPotential2D, support: f64) -> bool {
    (0..=256).all(|i| w.value(support * i as f64 / 256.0) == 0.0)
}

/// Leading-order scattering length of a scaled soft potential with total
/// integral λ: a_scatt = R·exp(−4π/λ). Valid as λ → 0; the deviation η(λ)
/// is what the ODE solve measures.
pub fn perturbative_a_scatt(lambda: f64, r: f64) -> f64 {
    r * (-4.0 * std::f64::consts::PI / lambda).exp()
}

/// The effective 2D scattering length of the confined 3D problem, carried
/// in log domain: ln(a_2D/h) = −(∫s⁴)⁻¹·h/(2a).
#[derive(Debug, Clone, Copy)]
pub struct A2dResult {
    /// ln(a_2D/h); always finite and negative for positive inputs.
    pub exponent: f64,
    /// Confinement width the exponent is relative to.
    pub h: f64,
    /// a_2D = h·e^{exponent}; may underflow to 0 in deep Region II.
    pub a_2d: f64,
}

impl A2dResult {
    /// ln a_2D (absolute, not relative to h).
    pub fn ln_a2d(&self) -> f64 {
        self.h.ln() + self.exponent
    }
}

/// a_2D = h·exp(−(∫s⁴)⁻¹ h/(2a)) with the exponent kept separately so
/// downstream consumers can stay in log domain.
pub fn effective_a2d(h: f64, a: f64, s4: f64) -> Result<A2dResult> {
    if !(h > 0.0) {
        return Err(Error::NonPositive { name: "h", value: h });
    }
    if !(a > 0.0) {
        return Err(Error::NonPositive { name: "a", value: a });
    }
    if !(s4 > 0.0) {
        return Err(Error::NonPositive { name: "s4", value: s4 });
    }
    let exponent = -h / (2.0 * a * s4);
    Ok(A2dResult {
        exponent,
        h,
        a_2d: h * exponent.exp(),
    })
}
