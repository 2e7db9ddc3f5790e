//! Transverse confinement: ground mode of −d²/dz² + V⊥(z).
//!
//! The transverse problem produces the normalized ground state s(z), its
//! energy e⊥ and the first level ẽ⊥ above it, and the moments of s the
//! dimensional reduction consumes: ∫s⁴ (sets the effective 2D coupling),
//! ‖s‖∞² and ‖∂_z s²‖∞ (enter proof-side correction formulas). Confinement
//! of width h is the scaled mode s_h(z) = h^{-1/2} s(z/h) with energies
//! h^{-2}·(e⊥, ẽ⊥); scaling is exact, so it is applied analytically rather
//! than by re-solving.

use crate::error::Error;
use crate::numerics::{eigs_sturm_liouville, Grid1D};
use crate::potential::Potential;
use crate::Result;

/// Ground transverse mode and the derived quantities used downstream.
/// Units: s is length^{-1/2}, energies 1/length², s4 and s_inf_sq are
/// 1/length, ds2_inf is 1/length².
#[derive(Debug, Clone)]
pub struct TransverseMode {
    /// Grid the mode lives on (uniform, Dirichlet ends).
    pub grid: Grid1D,
    /// Normalized ground state, ∫s² = 1 in the grid quadrature.
    pub s: Vec<f64>,
    /// Ground energy e⊥.
    pub e_perp: f64,
    /// First eigenvalue above the ground state, ẽ⊥ (full spectrum, not an
    /// even-parity restriction — the smaller, conservative gap).
    pub e_perp_excited: f64,
    /// ∫ s⁴ dz.
    pub s4: f64,
    /// ‖s‖∞².
    pub s_inf_sq: f64,
    /// ‖∂_z s²‖∞.
    pub ds2_inf: f64,
}

/// Ratio of boundary potential to energy required before the domain is
/// considered large enough (the truncation rule).
const CONFINEMENT_FACTOR: f64 = 50.0;
const MAX_EXTENSIONS: usize = 12;

/// Solve the transverse problem for V⊥ on (at least) the given grid.
///
/// For smooth confining traps the domain is extended symmetrically (the
/// spacing is kept) until V⊥ at both ends exceeds 50× the running energy
/// estimate, so the Dirichlet truncation error is negligible against the
/// discretization error. A hard box fixes its own domain; the grid argument
/// then only sets the resolution.
pub fn solve_transverse(v_perp: &Potential, grid: &Grid1D) -> Result<TransverseMode> {
    solve_transverse_scaled(v_perp, 1.0, grid)
}

/// Solve with the confinement scaled to width h: the potential is
/// V⊥_h(z) = h⁻² V⊥(z/h). Equivalent to `scale_mode(solve_transverse(...), h)`
/// up to discretization; exposed so that equivalence can be tested.
pub fn solve_transverse_scaled(
    v_perp: &Potential,
    h: f64,
    grid: &Grid1D,
) -> Result<TransverseMode> {
    if !(h > 0.0) {
        return Err(Error::NonPositive {
            name: "h",
            value: h,
        });
    }
    if !v_perp.is_confining() {
        return Err(Error::NotConfining {
            extensions: 0,
            v_boundary: v_perp.value(grid.last().abs().max(grid.first().abs())),
            energy: 0.0,
        });
    }
    let dz = grid.uniform_spacing().ok_or(Error::EigNonUniformGrid {
        kind: "log-radial",
    })?;

    if let Potential::HardBox { width } = v_perp {
        // Hard walls fix the domain exactly; resolution comes from the grid.
        let half = 0.5 * width * h;
        let n = ((2.0 * half / dz).round() as usize + 1).max(grid.len()).max(16);
        let box_grid = Grid1D::uniform(-half, half, n)?;
        return finalize(|_| 0.0, &box_grid);
    }

    let pot = |z: f64| v_perp.value(z / h) / (h * h);

    // Extend the domain until the boundary potential dominates the first
    // excited level; probe with a coarse solve so extension is cheap.
    let (mut lo, mut hi) = (grid.first(), grid.last());
    let mut extensions = 0usize;
    loop {
        let probe = Grid1D::uniform(lo, hi, 601)?;
        let pair = eigs_sturm_liouville(pot, &probe, 2)?;
        let estimate = pair[1].eigenvalue.max(1e-12);
        let v_boundary = pot(lo).min(pot(hi));
        if v_boundary >= CONFINEMENT_FACTOR * estimate {
            break;
        }
        if extensions >= MAX_EXTENSIONS {
            return Err(Error::NotConfining {
                extensions,
                v_boundary,
                energy: estimate,
            });
        }
        let mid = 0.5 * (lo + hi);
        let half = hi - lo; // double the width
        lo = mid - half;
        hi = mid + half;
        extensions += 1;
    }

    let n = (((hi - lo) / dz).round() as usize + 1).max(grid.len());
    let solve_grid = Grid1D::uniform(lo, hi, n)?;
    finalize(pot, &solve_grid)
}

fn finalize(pot: impl Fn(f64) -> f64, grid: &Grid1D) -> Result<TransverseMode> {
    let pair = eigs_sturm_liouville(&pot, grid, 2)?;
    let mut s = pair[0].eigenvector.clone();
    // The discrete ground state is nodeless; fix the overall sign so s > 0.
    let peak = s
        .iter()
        .cloned()
        .fold(0.0f64, |m, x| if x.abs() > m.abs() { x } else { m });
    if peak < 0.0 {
        for x in s.iter_mut() {
            *x = -*x;
        }
    }
    // Exponential tails decay below the eigensolver's roundoff floor, where
    // the iterate carries noise of arbitrary sign. The continuum ground
    // state is nonnegative, so clamp sub-roundoff negatives to zero; values
    // this small shift the normalization and the moments by O(1e-24) at most.
    let floor = 1e-12 * peak.abs();
    for x in s.iter_mut() {
        if *x < 0.0 && *x > -floor {
            *x = 0.0;
        }
    }

    let weights = grid.trapezoid_weights();
    let s4 = s
        .iter()
        .zip(&weights)
        .map(|(&si, &wi)| wi * si * si * si * si)
        .sum();
    let s_inf_sq = s.iter().fold(0.0f64, |m, &x| m.max(x * x));

    // ‖∂_z s²‖∞ by central differences (one-sided at the ends).
    let n = s.len();
    let mut ds2_inf = 0.0f64;
    for i in 0..n {
        let (j0, j1) = if i == 0 {
            (0, 1)
        } else if i == n - 1 {
            (n - 2, n - 1)
        } else {
            (i - 1, i + 1)
        };
        let num = s[j1] * s[j1] - s[j0] * s[j0];
        let den = grid.points()[j1] - grid.points()[j0];
        ds2_inf = ds2_inf.max((num / den).abs());
    }

    Ok(TransverseMode {
        grid: grid.clone(),
        s,
        e_perp: pair[0].eigenvalue,
        e_perp_excited: pair[1].eigenvalue,
        s4,
        s_inf_sq,
        ds2_inf,
    })
}

/// Rescale a mode to confinement width h: s_h(z) = h^{-1/2} s(z/h).
///
/// The grid dilates by h and every derived quantity transforms exactly:
/// energies by h⁻², ∫s⁴ and ‖s‖∞² by h⁻¹, ‖∂_z s²‖∞ by h⁻². Normalization
/// is preserved identically (the quadrature weights pick up the factor h).
pub fn scale_mode(mode: &TransverseMode, h: f64) -> Result<TransverseMode> {
    if !(h > 0.0) {
        return Err(Error::NonPositive {
            name: "h",
            value: h,
        });
    }
    let points: Vec<f64> = mode.grid.points().iter().map(|&z| h * z).collect();
    let grid = Grid1D::from_points(points, mode.grid.kind())?;
    let scale = h.sqrt().recip();
    let s = mode.s.iter().map(|&si| scale * si).collect();
    Ok(TransverseMode {
        grid,
        s,
        e_perp: mode.e_perp / (h * h),
        e_perp_excited: mode.e_perp_excited / (h * h),
        s4: mode.s4 / h,
        s_inf_sq: mode.s_inf_sq / h,
        ds2_inf: mode.ds2_inf / (h * h),
    })
}
