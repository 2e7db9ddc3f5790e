//! Error type shared by all solver modules.

/// Everything that can go wrong inside the library.
///
/// Variants carry enough context to be actionable from the command line:
/// offending values, thresholds, and iteration counts are part of the
/// message, not hidden in debug output.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    /// A grid failed one of its structural invariants.
    #[error("invalid grid: {reason}")]
    InvalidGrid { reason: String },

    /// The eigensolver was asked for more states than the operator has.
    #[error("requested {requested} eigenpairs but the grid has only {interior} interior points")]
    EigTooManyStates { requested: usize, interior: usize },

    /// The eigensolver operates on uniform grids only.
    #[error("eigensolver requires a uniform grid; got a {kind} grid")]
    EigNonUniformGrid { kind: &'static str },

    /// Inverse iteration failed to lock onto an eigenvector.
    #[error(
        "eigensolver did not converge for index {index}: residual {residual:.3e} after {iterations} iterations"
    )]
    EigNoConvergence {
        index: usize,
        iterations: usize,
        residual: f64,
    },

    /// The ODE solution overflowed even after step halving.
    #[error("radial ODE overflowed near r = {r:.6e} (coefficient too stiff for this grid)")]
    OdeOverflow { r: f64 },

    /// A quantity that must be positive was not.
    #[error("{name} must be positive (got {value})")]
    NonPositive { name: &'static str, value: f64 },

    /// Scattering needs an interaction potential with finite range.
    #[error("scattering requires a finite-range interaction potential (trap shapes have none)")]
    NoFiniteRange,

    /// The transverse potential does not confine on any affordable domain.
    #[error(
        "potential is not confining: after {extensions} domain extensions V at the boundary is \
         {v_boundary:.3e}, below 50x the energy estimate {energy:.3e}"
    )]
    NotConfining {
        extensions: usize,
        v_boundary: f64,
        energy: f64,
    },

    /// Linear fit of the scattering tail failed its residual gate.
    #[error(
        "scattering-length fit residual {residual:.3e} exceeds {threshold:.3e}; \
         range metadata is inconsistent with the potential profile"
    )]
    FitResidual { residual: f64, threshold: f64 },

    /// Hard-wall radius must exceed both the potential range and a.
    #[error("hard-wall radius R = {r} must exceed {what} = {bound}")]
    HardWallRadius {
        r: f64,
        what: &'static str,
        bound: f64,
    },

    /// The z-quadrature cannot resolve the interaction core.
    #[error(
        "z-grid spacing {spacing:.3e} is coarser than the core structure {core:.3e} of the \
         scaled potential; refine the quadrature"
    )]
    CoreResolution { spacing: f64, core: f64 },

    /// Cylindrical grid too coarse for the requested confinement.
    #[error(
        "grid resolution insufficient: {axis} spacing {spacing:.3e} exceeds the rule {rule} = {limit:.3e}"
    )]
    GridResolution {
        axis: &'static str,
        spacing: f64,
        rule: &'static str,
        limit: f64,
    },

    /// The requested solver does not support this trap shape.
    #[error("trap {name} is not supported here: {reason}")]
    TrapUnsupported {
        name: &'static str,
        reason: &'static str,
    },

    /// Thomas-Fermi closed forms need a homogeneous trap or a box.
    #[error(
        "Thomas-Fermi closed form needs a homogeneous (power-law) trap or a box; \
         use tf_solve_numeric for tabulated potentials"
    )]
    TfInhomogeneous,

    /// Outside the strong-confinement window where the coupling formula applies.
    #[error("coupling formula requires rho_bar*h^2 < 1 (got {rho_h2:.6e})")]
    CouplingOutOfRange { rho_h2: f64 },

    /// Dilute-gas formula applied outside its validity range.
    #[error("dilute 2D formula requires rho*a_2D^2 < 1 (got ln(rho*a_2D^2) = {ln_product:.6e})")]
    NotDilute { ln_product: f64 },

    /// Temple's inequality needs the gap floor above the expectation value.
    #[error(
        "no Temple bound: gap floor {gap_floor:.6e} must exceed the expectation value {expectation:.6e}"
    )]
    TempleNoGap { gap_floor: f64, expectation: f64 },

    /// Second moment below squared mean signals invalid operator statistics.
    #[error("invalid operator statistics: <H^2> = {second_moment:.6e} < <H>^2 = {mean_sq:.6e}")]
    TempleNegativeVariance { second_moment: f64, mean_sq: f64 },

    /// Dyson annulus construction needs a nonempty support.
    #[error("Dyson annulus is empty: outer radius {r_tilde} must exceed inner radius {r}")]
    DysonEmptyAnnulus { r: f64, r_tilde: f64 },

    /// Self-consistent coupling iteration failed.
    #[error(
        "self-consistent coupling did not converge after {iterations} iterations; \
         last iterates: {history:?}"
    )]
    SelfConsistencyFailed {
        iterations: usize,
        history: Vec<f64>,
    },

    /// A sweep specification failed validation.
    #[error("invalid sweep specification: {reason}")]
    InvalidSweep { reason: String },

    /// A tabulated potential file or table failed validation.
    #[error("invalid tabulated potential: {reason}")]
    InvalidTable { reason: String },
}
