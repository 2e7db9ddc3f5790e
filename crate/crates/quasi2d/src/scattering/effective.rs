//! The effective 2D potential W obtained by averaging the 3D pair problem
//! over the confined direction.
//!
//! W(x) = (2∫s⁴/h) ∫ [f′(ρ)² + ½ v_a(ρ) f(ρ)²] dz with ρ = √(x² + z²),
//! where f is the hard-wall profile at radius R. W is nonnegative,
//! rotationally symmetric, and vanishes identically for |x| ≥ R; its
//! integral has the closed form ∫W d²x = 8πa·(∫s⁴)/(h(1 − a/R)), which the
//! constructor evaluates alongside the quadrature value as a cross-check.

use crate::error::Error;
use crate::par;
use crate::potential::{Potential, RadialPotential2D};
use crate::scattering::threed::HardWallProfile;
use crate::transverse::TransverseMode;
use crate::Result;

/// Number of radial sample points for W on [0, R].
const SAMPLES: usize = 1537;
/// Simpson intervals per smooth z-panel.
const PANEL_INTERVALS: usize = 512;
const MAX_PANEL_INTERVALS: usize = 32_768;

/// Tabulated effective 2D potential with its integral diagnostics.
#[derive(Debug, Clone)]
pub struct EffectiveW {
    xs: Vec<f64>,
    ws: Vec<f64>,
    dx: f64,
    r_wall: f64,
    integral: f64,
    integral_closed_form: f64,
}

impl EffectiveW {
    /// Quadrature value of ∫ W d²x.
    pub fn integral(&self) -> f64 {
        self.integral
    }

    /// Closed form 8πa·(∫s⁴)/(h(1 − a/R)).
    pub fn integral_closed_form(&self) -> f64 {
        self.integral_closed_form
    }

    /// Sample points and values (for CSV export).
    pub fn samples(&self) -> (&[f64], &[f64]) {
        (&self.xs, &self.ws)
    }
}

impl RadialPotential2D for EffectiveW {
    fn value(&self, r: f64) -> f64 {
        if r >= self.r_wall {
            return 0.0;
        }
        let x = r / self.dx;
        let i = (x.floor() as usize).min(self.ws.len() - 2);
        let t = x - i as f64;
        self.ws[i] + t * (self.ws[i + 1] - self.ws[i])
    }

    fn support_radius(&self) -> f64 {
        self.r_wall
    }
}

/// Tabulate W from a hard-wall profile and the transverse mode at width h.
///
/// `r_wall` must equal the profile's wall radius (it is part of the
/// definition of f and of W's support). The z-integral is evaluated with
/// composite Simpson on panels split at the radii where the integrand has
/// kinks: the hard core, the potential range, and the wall itself.
pub fn effective_w(
    profile: &HardWallProfile,
    v: &Potential,
    mode: &TransverseMode,
    h: f64,
    r_wall: f64,
) -> Result<EffectiveW> {
    if !(h > 0.0) {
        return Err(Error::NonPositive {
            name: "h",
            value: h,
        });
    }
    if !(r_wall.is_finite()) || (r_wall - profile.wall()).abs() > 1e-12 * profile.wall() {
        return Err(Error::HardWallRadius {
            r: r_wall,
            what: "the profile's wall radius",
            bound: profile.wall(),
        });
    }

    // Panels need enough Simpson intervals to resolve tabulated kinks.
    let intervals = match v {
        Potential::Tabulated { rs, .. } => {
            let a_scale = profile.a_scale();
            let min_gap = rs
                .windows(2)
                .map(|p| (p[1] - p[0]) * a_scale)
                .fold(f64::INFINITY, f64::min);
            let needed = (4.0 * r_wall / min_gap).ceil() as usize;
            let n = needed.next_power_of_two().max(PANEL_INTERVALS);
            if n > MAX_PANEL_INTERVALS {
                return Err(Error::CoreResolution {
                    spacing: r_wall / MAX_PANEL_INTERVALS as f64,
                    core: min_gap,
                });
            }
            n
        }
        _ => PANEL_INTERVALS,
    };

    let prefactor = 2.0 * mode.s4 / h;
    let core = profile.core();
    let range = profile.range();
    let a_scale = profile.a_scale();

    let integrand = |rho: f64| -> f64 {
        if rho >= r_wall || rho < core {
            return 0.0;
        }
        let df = profile.derivative(rho);
        let fval = profile.value(rho);
        let vval = if rho < range {
            v.value_scaled(rho, a_scale)
        } else {
            0.0
        };
        df * df + 0.5 * vval * fval * fval
    };

    let dx = r_wall / (SAMPLES - 1) as f64;
    let xs: Vec<f64> = (0..SAMPLES).map(|i| i as f64 * dx).collect();
    let ws = par::map_collect(xs.clone(), |x| {
        if x >= r_wall {
            return 0.0;
        }
        // z-breakpoints where the integrand kinks: √(r_b² − x²).
        let mut edges = vec![0.0];
        for rb in [core, range, r_wall] {
            if rb > x && rb > 0.0 {
                let z = (rb * rb - x * x).sqrt();
                if z > edges.last().unwrap() + 1e-15 * r_wall {
                    edges.push(z);
                }
            }
        }
        let mut total = 0.0;
        for pair in edges.windows(2) {
            total += simpson(
                |z| integrand((x * x + z * z).sqrt()),
                pair[0],
                pair[1],
                intervals,
            );
        }
        prefactor * 2.0 * total // both signs of z
    });

    // 2π ∫ W(x) x dx by trapezoid on the samples.
    let mut integral = 0.0;
    for i in 0..SAMPLES - 1 {
        let f0 = xs[i] * ws[i];
        let f1 = xs[i + 1] * ws[i + 1];
        integral += 0.5 * (f0 + f1) * dx;
    }
    integral *= 2.0 * std::f64::consts::PI;

    let a = profile.a();
    let integral_closed_form =
        8.0 * std::f64::consts::PI * a * mode.s4 / (h * (1.0 - a / r_wall));

    Ok(EffectiveW {
        xs,
        ws,
        dx,
        r_wall,
        integral,
        integral_closed_form,
    })
}

fn simpson(f: impl Fn(f64) -> f64, a: f64, b: f64, intervals: usize) -> f64 {
    let n = intervals.max(2) & !1; // even
    let step = (b - a) / n as f64;
    let mut acc = f(a) + f(b);
    for i in 1..n {
        let w = if i % 2 == 1 { 4.0 } else { 2.0 };
        acc += w * f(a + i as f64 * step);
    }
    acc * step / 3.0
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::Grid1D;
    use crate::scattering::threed::{hard_wall_profile, solve_scattering_3d};
    use crate::transverse::solve_transverse;
    use approx::assert_relative_eq;

    fn harmonic_mode() -> TransverseMode {
        let grid = Grid1D::uniform(-12.5, 12.5, 6001).unwrap();
        solve_transverse(&Potential::Harmonic, &grid).unwrap()
    }

    #[test]
    fn integral_matches_closed_form_for_square_barrier() {
        let v = Potential::square_barrier(8.0, 1.0).unwrap();
        let sol = solve_scattering_3d(&v, 1.0).unwrap();
        let f = hard_wall_profile(&sol, 2.0).unwrap();
        let mode = harmonic_mode();
        let w = effective_w(&f, &v, &mode, 0.5, 2.0).unwrap();
        assert_relative_eq!(
            w.integral(),
            w.integral_closed_form(),
            max_relative = 1e-3
        );
    }

    #[test]
    fn integral_matches_closed_form_for_hard_core() {
        let v = Potential::hard_core(1.0).unwrap();
        let sol = solve_scattering_3d(&v, 1.0).unwrap();
        let f = hard_wall_profile(&sol, 3.0).unwrap();
        let mode = harmonic_mode();
        let w = effective_w(&f, &v, &mode, 1.0, 3.0).unwrap();
        assert_relative_eq!(
            w.integral(),
            w.integral_closed_form(),
            max_relative = 1e-3
        );
    }

    #[test]
    fn zero_potential_gives_zero_w() {
        let sol = solve_scattering_3d(&Potential::Zero, 1.0).unwrap();
        let f = hard_wall_profile(&sol, 0.5).unwrap();
        let mode = harmonic_mode();
        let w = effective_w(&f, &Potential::Zero, &mode, 1.0, 0.5).unwrap();
        // The profile slope carries line-fit roundoff ~1e-15, entering W
        // squared; "zero" here means below 1e-18 in units of 1/length⁴.
        let (_, ws) = w.samples();
        for &wi in ws {
            assert!(wi.abs() < 1e-18, "W sample {} not zero", wi);
        }
        assert!(w.integral().abs() < 1e-18);
    }

    #[test]
    fn support_vanishes_beyond_the_wall() {
        let v = Potential::square_barrier(8.0, 1.0).unwrap();
        let sol = solve_scattering_3d(&v, 1.0).unwrap();
        let f = hard_wall_profile(&sol, 2.0).unwrap();
        let mode = harmonic_mode();
        let w = effective_w(&f, &v, &mode, 1.0, 2.0).unwrap();
        assert_eq!(w.value(2.0), 0.0);
        assert_eq!(w.value(5.0), 0.0);
        assert!(w.value(0.0) > 0.0);
        // Nonnegative everywhere.
        let (_, ws) = w.samples();
        for &wi in ws {
            assert!(wi >= 0.0);
        }
    }
}
