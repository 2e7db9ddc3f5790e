//! Potential shapes: trap potentials, interaction potentials, and the
//! scaled family v_a.
//!
//! A [`Potential`] is a radial profile with metadata the solvers need:
//! finite range R₀ for interactions, homogeneity degree for traps, hard-core
//! radius where one exists. Interaction potentials are nonnegative with
//! finite range; the scaled family is v_a(r) = a⁻² v(r/a), which multiplies
//! the scattering length of the base profile by a. Energies carry units
//! 1/length² (ħ = 2m = 1).

use crate::error::Error;
use crate::Result;

/// A radial potential profile. Trap shapes (`Harmonic`, `Power`,
/// `HardBox`, `PeriodicBox`) confine; interaction shapes (`HardCore`,
/// `SquareBarrier`, `Tabulated`, `Zero`) have finite range.
#[derive(Debug, Clone, PartialEq)]
pub enum Potential {
    /// V ≡ 0.
    Zero,
    /// V(x) = |x|².
    Harmonic,
    /// V(x) = |x|^degree, homogeneous trap of degree > 0.
    Power { degree: f64 },
    /// Infinite well of the given full width centered at the origin.
    HardBox { width: f64 },
    /// Periodic box of the given side; flat, with the constant minimizer.
    PeriodicBox { side: f64 },
    /// Hard-core interaction: infinite for r < radius, zero outside.
    HardCore { radius: f64 },
    /// v(r) = height on [0, radius), zero outside.
    SquareBarrier { height: f64, radius: f64 },
    /// Sampled radial profile, linearly interpolated, zero beyond the last
    /// sample point.
    Tabulated { rs: Vec<f64>, vs: Vec<f64> },
}

impl Potential {
    /// Homogeneous trap |x|^p. Rejects p ≤ 0.
    pub fn power(degree: f64) -> Result<Potential> {
        if !(degree > 0.0) {
            return Err(Error::NonPositive {
                name: "degree",
                value: degree,
            });
        }
        Ok(Potential::Power { degree })
    }

    /// Hard-wall well of the given full width.
    pub fn hard_box(width: f64) -> Result<Potential> {
        if !(width > 0.0) {
            return Err(Error::NonPositive {
                name: "width",
                value: width,
            });
        }
        Ok(Potential::HardBox { width })
    }

    /// Periodic box of the given side.
    pub fn periodic_box(side: f64) -> Result<Potential> {
        if !(side > 0.0) {
            return Err(Error::NonPositive {
                name: "side",
                value: side,
            });
        }
        Ok(Potential::PeriodicBox { side })
    }

    /// Hard core of the given radius.
    pub fn hard_core(radius: f64) -> Result<Potential> {
        if !(radius > 0.0) {
            return Err(Error::NonPositive {
                name: "radius",
                value: radius,
            });
        }
        Ok(Potential::HardCore { radius })
    }

    /// Square barrier of the given height on [0, radius).
    pub fn square_barrier(height: f64, radius: f64) -> Result<Potential> {
        if !(height > 0.0) {
            return Err(Error::NonPositive {
                name: "height",
                value: height,
            });
        }
        if !(radius > 0.0) {
            return Err(Error::NonPositive {
                name: "radius",
                value: radius,
            });
        }
        Ok(Potential::SquareBarrier { height, radius })
    }

    /// Tabulated nonnegative radial profile. Requires at least two samples,
    /// strictly increasing r ≥ 0, finite nonnegative values.
    pub fn tabulated(rs: Vec<f64>, vs: Vec<f64>) -> Result<Potential> {
        if rs.len() != vs.len() {
            return Err(Error::InvalidTable {
                reason: format!("{} radii but {} values", rs.len(), vs.len()),
            });
        }
        if rs.len() < 2 {
            return Err(Error::InvalidTable {
                reason: format!("need at least 2 samples, got {}", rs.len()),
            });
        }
        if rs[0] < 0.0 {
            return Err(Error::InvalidTable {
                reason: format!("first radius {} is negative", rs[0]),
            });
        }
        for pair in rs.windows(2) {
            if !(pair[1] > pair[0]) {
                return Err(Error::InvalidTable {
                    reason: format!("radii not strictly increasing at {} → {}", pair[0], pair[1]),
                });
            }
        }
        for &v in &vs {
            if !v.is_finite() || v < 0.0 {
                return Err(Error::InvalidTable {
                    reason: format!("value {} is not finite and nonnegative", v),
                });
            }
        }
        Ok(Potential::Tabulated { rs, vs })
    }

    /// Potential value at radius r ≥ 0. Hard walls return +∞.
    pub fn value(&self, r: f64) -> f64 {
        match self {
            Potential::Zero => 0.0,
            Potential::Harmonic => r * r,
            Potential::Power { degree } => r.abs().powf(*degree),
            Potential::HardBox { width } => {
                if r.abs() <= 0.5 * width {
                    0.0
                } else {
                    f64::INFINITY
                }
            }
            Potential::PeriodicBox { .. } => 0.0,
            Potential::HardCore { radius } => {
                if r < *radius {
                    f64::INFINITY
                } else {
                    0.0
                }
            }
            Potential::SquareBarrier { height, radius } => {
                if r < *radius {
                    *height
                } else {
                    0.0
                }
            }
            Potential::Tabulated { rs, vs } => {
                if r <= rs[0] {
                    vs[0]
                } else if r >= *rs.last().unwrap() {
                    0.0
                } else {
                    let i = rs.partition_point(|&x| x <= r) - 1;
                    let t = (r - rs[i]) / (rs[i + 1] - rs[i]);
                    vs[i] + t * (vs[i + 1] - vs[i])
                }
            }
        }
    }

    /// Finite range R₀ of an interaction profile (the potential vanishes
    /// beyond it); `None` for trap shapes.
    pub fn range(&self) -> Option<f64> {
        match self {
            Potential::Zero => Some(0.0),
            Potential::HardCore { radius } => Some(*radius),
            Potential::SquareBarrier { radius, .. } => Some(*radius),
            Potential::Tabulated { rs, .. } => Some(*rs.last().unwrap()),
            _ => None,
        }
    }

    /// Hard-core radius (Dirichlet radius for the scattering equation);
    /// zero when the profile is everywhere finite.
    pub fn core_radius(&self) -> f64 {
        match self {
            Potential::HardCore { radius } => *radius,
            _ => 0.0,
        }
    }

    /// Homogeneity degree p for traps with V(x) = |x|^p; `None` otherwise.
    pub fn homogeneity(&self) -> Option<f64> {
        match self {
            Potential::Harmonic => Some(2.0),
            Potential::Power { degree } => Some(*degree),
            _ => None,
        }
    }

    /// Side of a periodic box, when the shape is one.
    pub fn box_side(&self) -> Option<f64> {
        match self {
            Potential::PeriodicBox { side } => Some(*side),
            _ => None,
        }
    }

    /// Whether the shape grows without bound (confining trap). Hard walls
    /// confine by construction.
    pub fn is_confining(&self) -> bool {
        matches!(
            self,
            Potential::Harmonic | Potential::Power { .. } | Potential::HardBox { .. }
        )
    }

    /// Short human-readable shape name, for error messages.
    pub fn name(&self) -> &'static str {
        match self {
            Potential::Zero => "zero",
            Potential::Harmonic => "harmonic",
            Potential::Power { .. } => "power",
            Potential::HardBox { .. } => "hard box",
            Potential::PeriodicBox { .. } => "periodic box",
            Potential::HardCore { .. } => "hard core",
            Potential::SquareBarrier { .. } => "square barrier",
            Potential::Tabulated { .. } => "tabulated",
        }
    }

    /// Member of the scaled family: v_a(r) = a⁻² v(r/a).
    pub fn value_scaled(&self, r: f64, a: f64) -> f64 {
        self.value(r / a) / (a * a)
    }

    /// Range of v_a: a·R₀.
    pub fn range_scaled(&self, a: f64) -> Option<f64> {
        self.range().map(|r0| a * r0)
    }

    /// Hard-core radius of v_a: a times the base core radius.
    pub fn core_radius_scaled(&self, a: f64) -> f64 {
        a * self.core_radius()
    }
}

/// A rotationally symmetric 2D potential with compact support, the input
/// to the 2D zero-energy scattering problem. The finite part is `value`;
/// a hard disc is expressed through `core_radius` (Dirichlet radius), with
/// `value` zero there.
pub trait RadialPotential2D {
    /// Finite part of W(r), zero for r ≥ support_radius.
    fn value(&self, r: f64) -> f64;
    /// Radius beyond which W vanishes identically.
    fn support_radius(&self) -> f64;
    /// Hard-disc radius; 0 when the potential is everywhere finite.
    fn core_radius(&self) -> f64 {
        0.0
    }
}

/// Uniform soft disc W(r) = strength/(π·radius²) on [0, radius): the scaled
/// family member with ∫W d²x = strength and unit-normalized shape.
#[derive(Debug, Clone, Copy)]
pub struct SoftDisc {
    pub strength: f64,
    pub radius: f64,
}

impl SoftDisc {
    pub fn new(strength: f64, radius: f64) -> Result<SoftDisc> {
        if !(strength > 0.0) {
            return Err(Error::NonPositive {
                name: "strength",
                value: strength,
            });
        }
        if !(radius > 0.0) {
            return Err(Error::NonPositive {
                name: "radius",
                value: radius,
            });
        }
        Ok(SoftDisc { strength, radius })
    }

    /// Height of the disc: strength/(π·radius²).
    pub fn height(&self) -> f64 {
        self.strength / (std::f64::consts::PI * self.radius * self.radius)
    }
}

impl RadialPotential2D for SoftDisc {
    fn value(&self, r: f64) -> f64 {
        if r < self.radius {
            self.height()
        } else {
            0.0
        }
    }

    fn support_radius(&self) -> f64 {
        self.radius
    }
}

/// Hard disc of the given radius: Dirichlet condition at the edge, zero
/// potential outside.
#[derive(Debug, Clone, Copy)]
pub struct HardDisc {
    pub radius: f64,
}

impl HardDisc {
    pub fn new(radius: f64) -> Result<HardDisc> {
        if !(radius > 0.0) {
            return Err(Error::NonPositive {
                name: "radius",
                value: radius,
            });
        }
        Ok(HardDisc { radius })
    }
}

impl RadialPotential2D for HardDisc {
    fn value(&self, _r: f64) -> f64 {
        0.0
    }

    fn support_radius(&self) -> f64 {
        self.radius
    }

    fn core_radius(&self) -> f64 {
        self.radius
    }
}
