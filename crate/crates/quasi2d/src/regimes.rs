//! Parameter regimes of the squeezed gas: effective coupling, region
//! classification, and homogeneous dilute-gas reference energies.
//!
//! Units ħ = 2m = 1 throughout; energies are 1/length². The gas of N
//! particles with 3D scattering length `a`, squeezed to thickness `h` at 2D
//! mean density ρ̄, is governed by the dimensionless coupling
//!
//! ```text
//!     g = 1 / ( −ln(ρ̄h²) + (∫s⁴)⁻¹ h/a ),
//! ```
//!
//! where s is the normalized transverse ground profile at h = 1. The two
//! terms in the denominator delimit two regimes: when h/a dominates
//! (Region I) the gas keeps its 3D character and g ≈ (∫s⁴)·a/h; when the
//! logarithm dominates (Region II) the gas is genuinely 2D and
//! g ≈ |ln(ρ̄h²)|⁻¹. The same g interpolates across; the regions are labels
//! on one formula, not different formulas. All logarithmic quantities stay
//! in log domain end to end, since Region II drives ρ̄·a_2D² below the f64
//! range.

use crate::{Error, Result};

/// ∫s⁴ dz for the harmonic transverse ground profile at h = 1, (2π)^{-1/2}.
/// Used as the default transverse moment wherever no solved mode is at hand.
pub const S4_HARMONIC: f64 = 0.3989422804014327;

/// Parameter region of the squeezed gas.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Region {
    /// h/a ≫ |ln(ρ̄h²)|: 3D-flavored, g ≈ (∫s⁴)·a/h.
    RegionI,
    /// h/a ≪ |ln(ρ̄h²)|: truly 2D, g ≈ |ln(ρ̄h²)|⁻¹.
    RegionII,
    /// Neither term dominates under the declared band.
    Crossover,
}

impl Region {
    /// Stable label for CSV output.
    pub fn name(&self) -> &'static str {
        match self {
            Region::RegionI => "REGION_I",
            Region::RegionII => "REGION_II",
            Region::Crossover => "CROSSOVER",
        }
    }
}

/// Interaction-strength class of the 2D problem by its drive Ng.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NgClass {
    /// Ng ≪ 1: nearly ideal gas.
    Ideal,
    /// Ng ∼ 1: full Gross-Pitaevskii regime.
    Gp,
    /// Ng ≫ 1: Thomas-Fermi regime.
    ThomasFermi,
}

impl NgClass {
    pub fn name(&self) -> &'static str {
        match self {
            NgClass::Ideal => "IDEAL",
            NgClass::Gp => "GP",
            NgClass::ThomasFermi => "TF",
        }
    }
}

/// Declared thresholds turning the asymptotic "≫" statements into a
/// deterministic classifier. All exposed to configuration.
#[derive(Debug, Clone)]
pub struct RegimeThresholds {
    /// Region band: REGION_I for q > band, REGION_II for q < 1/band,
    /// with q = (h/a)/|ln(ρ̄h²)|.
    pub band: f64,
    /// Smallness threshold for the strong-confinement parameters
    /// (ρ̄ah in Region I, ρ̄h² in Region II).
    pub small: f64,
    /// Transverse moment ∫s⁴ entering g.
    pub s4: f64,
    /// Ng below this is classed IDEAL.
    pub ng_ideal: f64,
    /// Ng above this is classed TF.
    pub ng_tf: f64,
}

impl Default for RegimeThresholds {
    fn default() -> Self {
        RegimeThresholds {
            band: 4.0,
            small: 0.1,
            s4: S4_HARMONIC,
            ng_ideal: 0.1,
            ng_tf: 10.0,
        }
    }
}

/// The governing strong-confinement small parameter and its value.
#[derive(Debug, Clone)]
pub struct StrongConfinement {
    /// Which parameter governs in the assigned region.
    pub parameter: &'static str,
    pub value: f64,
    /// value < the declared smallness threshold.
    pub satisfied: bool,
}

/// Full classification of one (ρ̄, h, a) input.
#[derive(Debug, Clone)]
pub struct RegimeReport {
    pub rho_bar: f64,
    /// Coupling from the interpolating formula.
    pub g: f64,
    /// ln(a_2D) with a_2D = h·exp(−(∫s⁴)⁻¹ h/2a); absolute log of a length.
    pub ln_a2d: f64,
    pub region: Region,
    /// The region ratio q = (h/a)/|ln(ρ̄h²)|.
    pub q: f64,
    /// Set only when the drive Ng is known to the caller.
    pub ng_class: Option<NgClass>,
    pub strong_confinement: StrongConfinement,
}

/// The coupling g = |−ln(ρ̄h²) + (∫s⁴)⁻¹·h/a|⁻¹, computed in log domain.
///
/// Requires ρ̄h² < 1: inside the strong-confinement window both denominator
/// terms are positive, so the absolute value is redundant; outside it the
/// absolute value would silently mask a sign change, hence the hard error.
pub fn coupling_g(rho_bar: f64, h: f64, a: f64, s4: f64) -> Result<f64> {
    for (name, value) in [
        ("rho_bar", rho_bar),
        ("h", h),
        ("a", a),
        ("s4", s4),
    ] {
        if !(value > 0.0) || !value.is_finite() {
            return Err(Error::NonPositive { name, value });
        }
    }
    let ln_rho_h2 = rho_bar.ln() + 2.0 * h.ln();
    if ln_rho_h2 >= 0.0 {
        return Err(Error::CouplingOutOfRange {
            rho_h2: ln_rho_h2.exp(),
        });
    }
    Ok(1.0 / (-ln_rho_h2 + h / (a * s4)))
}

/// Classify with the default thresholds and no Ng information.
pub fn classify(rho_bar: f64, h: f64, a: f64) -> Result<RegimeReport> {
    classify_with(rho_bar, h, a, &RegimeThresholds::default(), None)
}

/// Classify (ρ̄, h, a) under explicit thresholds; `ng` fills the interaction
/// class when the caller knows the 2D drive.
pub fn classify_with(
    rho_bar: f64,
    h: f64,
    a: f64,
    thresholds: &RegimeThresholds,
    ng: Option<f64>,
) -> Result<RegimeReport> {
    let g = coupling_g(rho_bar, h, a, thresholds.s4)?;
    let ln_rho_h2 = rho_bar.ln() + 2.0 * h.ln();
    let q = (h / a) / (-ln_rho_h2);
    let region = if q > thresholds.band {
        Region::RegionI
    } else if q < 1.0 / thresholds.band {
        Region::RegionII
    } else {
        Region::Crossover
    };

    // Strong confinement: ρ̄ah ≪ 1 governs in Region I, ρ̄h² ≪ 1 in
    // Region II; in the crossover both matter and the larger one is
    // reported (conservative).
    let rho_ah = rho_bar * a * h;
    let rho_h2 = (rho_bar.ln() + 2.0 * h.ln()).exp();
    let (parameter, value) = match region {
        Region::RegionI => ("rho_bar*a*h", rho_ah),
        Region::RegionII => ("rho_bar*h^2", rho_h2),
        Region::Crossover => {
            if rho_ah >= rho_h2 {
                ("rho_bar*a*h", rho_ah)
            } else {
                ("rho_bar*h^2", rho_h2)
            }
        }
    };
    let ng_class = ng.map(|ng| {
        if ng < thresholds.ng_ideal {
            NgClass::Ideal
        } else if ng > thresholds.ng_tf {
            NgClass::ThomasFermi
        } else {
            NgClass::Gp
        }
    });

    Ok(RegimeReport {
        rho_bar,
        g,
        ln_a2d: h.ln() - h / (2.0 * a * thresholds.s4),
        region,
        q,
        ng_class,
        strong_confinement: StrongConfinement {
            parameter,
            value,
            satisfied: value < thresholds.small,
        },
    })
}

/// Homogeneous dilute 2D gas energy per particle,
/// e = 4πρ·|ln(ρ·a_2D²)|⁻¹, with `ln_a2d` the absolute ln(a_2D).
pub fn dilute_energy_2d(rho: f64, ln_a2d: f64) -> Result<f64> {
    if !(rho > 0.0) {
        return Err(Error::NonPositive {
            name: "rho",
            value: rho,
        });
    }
    let ln_product = rho.ln() + 2.0 * ln_a2d;
    if ln_product >= 0.0 {
        return Err(Error::NotDilute { ln_product });
    }
    Ok(4.0 * std::f64::consts::PI * rho / (-ln_product))
}

/// Homogeneous dilute 3D gas energy per particle, e = 4πρ₃·a. The caller is
/// expected to check the gas parameter ρ₃a³ ≪ 1; the formula itself is
/// evaluated unconditionally (a = 0 gives 0).
pub fn dilute_energy_3d(rho3: f64, a: f64) -> f64 {
    4.0 * std::f64::consts::PI * rho3 * a
}

/// Comparison of g computed with the standard prefactor h in a_2D against
/// the value with an alternative prefactor b.
#[derive(Debug, Clone)]
pub struct PrefactorComparison {
    /// g with a_2D = h·e^{−h/(2as4)}.
    pub g: f64,
    /// g with a_2D′ = b·e^{−h/(2as4)}.
    pub g_b: f64,
    /// |g/g_b − 1|.
    pub relative_shift: f64,
    /// The algebraic bound 2|ln(b/h)| / |ln(ρ̄·a_2D²)|, which the shift
    /// attains exactly; the prefactor of a_2D only matters at this order.
    pub bound: f64,
}

/// Show that replacing the prefactor h of a_2D by any comparable length b
/// shifts g by at most 2|ln(b/h)|/|ln(ρ̄a_2D²)| — relatively negligible in
/// the strong-confinement window where that logarithm is large.
pub fn prefactor_sensitivity(
    rho_bar: f64,
    h: f64,
    a: f64,
    s4: f64,
    b: f64,
) -> Result<PrefactorComparison> {
    if !(b > 0.0) {
        return Err(Error::NonPositive { name: "b", value: b });
    }
    let g = coupling_g(rho_bar, h, a, s4)?;
    // ln(ρ̄·a_2D′²) with the alternative prefactor.
    let ln_product_b = rho_bar.ln() + 2.0 * b.ln() - h / (a * s4);
    if ln_product_b >= 0.0 {
        return Err(Error::NotDilute {
            ln_product: ln_product_b,
        });
    }
    let g_b = 1.0 / (-ln_product_b);
    let bound = 2.0 * (b / h).ln().abs() * g;
    Ok(PrefactorComparison {
        g,
        g_b,
        relative_shift: (g / g_b - 1.0).abs(),
        bound,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn coupling_matches_direct_arithmetic() {
        // ρ̄=1e-4, h=1, a=0.1, ∫s⁴=(2π)^{-1/2}:
        // denominator 9.210340371976182 + 25.066282746310005.
        let g = coupling_g(1e-4, 1.0, 0.1, S4_HARMONIC).unwrap();
        assert_relative_eq!(g, 0.02917440252352372, max_relative = 1e-14);
    }

    #[test]
    fn coupling_limits_in_both_regions() {
        // h/a → ∞ at fixed ρ̄h²: g·h/(s4·a) → 1.
        let (rho, h) = (1e-3, 1.0);
        let a = 1e-8;
        let g = coupling_g(rho, h, a, S4_HARMONIC).unwrap();
        assert_relative_eq!(g * h / (S4_HARMONIC * a), 1.0, epsilon = 1e-6);
        // a/h → ∞: g·|ln ρ̄h²| → 1.
        let a = 1e9;
        let g = coupling_g(rho, h, a, S4_HARMONIC).unwrap();
        assert_relative_eq!(g * (-(rho.ln())), 1.0, epsilon = 1e-6);
    }

    #[test]
    fn coupling_rejects_weak_confinement_and_bad_inputs() {
        assert!(matches!(
            coupling_g(2.0, 1.0, 0.1, S4_HARMONIC),
            Err(Error::CouplingOutOfRange { .. })
        ));
        assert!(matches!(
            coupling_g(1e-4, -1.0, 0.1, S4_HARMONIC),
            Err(Error::NonPositive { name: "h", .. })
        ));
    }

    #[test]
    fn coupling_is_monotone_decreasing_in_h_over_a() {
        // At fixed ρ̄h², g decreases as h/a grows (denominator grows).
        let (rho, h) = (1e-4, 1.0);
        let mut last = f64::INFINITY;
        for k in 0..60 {
            let a = 10.0 * (0.8f64).powi(k);
            let g = coupling_g(rho, h, a, S4_HARMONIC).unwrap();
            assert!(g < last, "g not decreasing at a = {a}");
            last = g;
        }
    }

    #[test]
    fn classify_examples_land_in_the_right_regions() {
        // h/a = 100, |ln ρ̄h²| = ln 1e4 ≈ 9.2: q ≈ 10.9 → Region I,
        // strongly confined (ρ̄ah = 1e-4).
        let report = classify(1e-2, 1.0, 0.01).unwrap();
        assert_eq!(report.region, Region::RegionI);
        assert_eq!(report.strong_confinement.parameter, "rho_bar*a*h");
        assert_relative_eq!(report.strong_confinement.value, 1e-4, max_relative = 1e-12);
        assert!(report.strong_confinement.satisfied);

        // h/a = 5, |ln ρ̄h²| = 23: q ≈ 0.217 → Region II.
        let report = classify(1e-10, 1.0, 0.2).unwrap();
        assert_eq!(report.region, Region::RegionII);
        assert_eq!(report.strong_confinement.parameter, "rho_bar*h^2");

        // q = 1 exactly: choose a so h/a = |ln ρ̄h²|.
        let rho: f64 = 1e-4;
        let a = 1.0 / (-(rho.ln()));
        let report = classify(rho, 1.0, a).unwrap();
        assert_relative_eq!(report.q, 1.0, epsilon = 1e-12);
        assert_eq!(report.region, Region::Crossover);
    }

    #[test]
    fn classification_is_scale_invariant() {
        // (ρ̄, h, a) → (c²ρ̄, h/c, a/c) leaves ρ̄h², h/a, ρ̄ah unchanged.
        for c in [0.1, 3.0, 40.0] {
            let (rho, h, a) = (1e-3, 2.0, 0.05);
            let base = classify(rho, h, a).unwrap();
            let scaled = classify(c * c * rho, h / c, a / c).unwrap();
            assert_eq!(base.region, scaled.region);
            assert_relative_eq!(base.q, scaled.q, max_relative = 1e-12);
            assert_relative_eq!(
                base.strong_confinement.value,
                scaled.strong_confinement.value,
                max_relative = 1e-12
            );
        }
    }

    #[test]
    fn region_two_has_exponentially_dilute_points() {
        // Every input classified REGION_II satisfies ρ̄^{-1/2} ≥ h·e^{h/4a}
        // (band-adjusted form of the interparticle-distance requirement).
        for &(rho, h, a) in &[
            (1e-10f64, 1.0f64, 0.2f64),
            (1e-12, 0.5, 0.3),
            (1e-8, 2.0, 4.0),
            (1e-30, 1.0, 0.05),
        ] {
            let report = classify(rho, h, a).unwrap();
            if report.region == Region::RegionII {
                let lhs = -0.5 * rho.ln(); // ln ρ̄^{-1/2}
                let rhs = h.ln() + h / (4.0 * a);
                assert!(lhs >= rhs, "({rho}, {h}, {a}) violates the distance bound");
            }
        }
        // And the sample does contain Region II points.
        assert_eq!(classify(1e-10, 1.0, 0.2).unwrap().region, Region::RegionII);
    }

    #[test]
    fn ng_class_thresholds() {
        let t = RegimeThresholds::default();
        let class =
            |ng| classify_with(1e-4, 1.0, 0.1, &t, Some(ng)).unwrap().ng_class.unwrap();
        assert_eq!(class(0.01), NgClass::Ideal);
        assert_eq!(class(1.0), NgClass::Gp);
        assert_eq!(class(1e3), NgClass::ThomasFermi);
        assert_eq!(classify(1e-4, 1.0, 0.1).unwrap().ng_class, None);
    }

    #[test]
    fn dilute_2d_formula_and_preconditions() {
        let e = dilute_energy_2d(1.0, -5.0).unwrap();
        assert_relative_eq!(e, 1.2566370614359172, max_relative = 1e-14);
        assert!(matches!(
            dilute_energy_2d(1.0, 0.0),
            Err(Error::NotDilute { .. })
        ));
        // ρ → ρ/e at fixed a_2D: denominators differ by exactly 1.
        let (rho, ln_a): (f64, f64) = (1e-2, -8.0);
        let d = -(rho.ln() + 2.0 * ln_a);
        let ratio = dilute_energy_2d(rho / std::f64::consts::E, ln_a).unwrap()
            / dilute_energy_2d(rho, ln_a).unwrap();
        let expected = (1.0 / std::f64::consts::E) * d / (d + 1.0);
        assert_relative_eq!(ratio, expected, max_relative = 1e-10);
    }

    #[test]
    fn dilute_3d_is_linear() {
        assert_relative_eq!(
            dilute_energy_3d(1.0, 0.01),
            0.04 * std::f64::consts::PI,
            max_relative = 1e-14
        );
        assert_eq!(dilute_energy_3d(5.0, 0.0), 0.0);
    }

    #[test]
    fn prefactor_shift_attains_its_bound() {
        let (rho, h, a): (f64, f64, f64) = (1e-4, 1.0, 0.1);
        for b in [a, (a * h).sqrt(), h, 3.7 * h] {
            let cmp = prefactor_sensitivity(rho, h, a, S4_HARMONIC, b).unwrap();
            assert!(cmp.relative_shift <= cmp.bound * (1.0 + 1e-12) + 1e-15);
            // For this family the bound is attained exactly.
            assert_relative_eq!(cmp.relative_shift, cmp.bound, epsilon = 1e-12);
            if b == h {
                assert_relative_eq!(cmp.g_b, cmp.g, max_relative = 1e-14);
                assert!(cmp.bound.abs() < 1e-15);
            }
        }
    }
}
