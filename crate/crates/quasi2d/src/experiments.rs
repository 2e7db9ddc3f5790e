//! Deterministic verification sweeps over the crossover parameters.
//!
//! Each sweep maps a parameter ladder to [`SweepRow`]s — pure, independent
//! computations fanned out over rows by [`crate::par::map_collect`] and
//! gathered in ladder order — and each row carries its own convergence flag,
//! so one degenerate input or failed solve flags only that row and never
//! poisons the sweep. Identical specs produce bit-identical CSV: iteration
//! orders are fixed, and wall times, though recorded per row, are never
//! written to the table.
//!
//! The four sweeps:
//!
//! * [`run_crossover`] — the dimensional crossover. At fixed 2D drive
//!   `g = (∫s⁴)·Na/h` the ratio `(E₃D(1,1,h,Na) − e⊥/h²)/E₂D(1,1,g)` is
//!   tabulated down a descending `h` ladder; it approaches 1 as the trap
//!   flattens. Every row also checks the product-ansatz upper bound
//!   `E₃D ≤ e⊥/h² + E₂D` exactly at the discrete level.
//! * [`run_scattering_convergence`] — the weak-coupling asymptote of the 2D
//!   scattering length. For the family `W = λ·w₁` with `∫w₁ = 1` the defect
//!   `η(λ) = λ·ln(R_shape/a_scatt) − 4π` shrinks with `λ` and does not
//!   depend on the shape radius.
//! * [`run_tf_limit`] — the Thomas-Fermi limit: `E^GP/E^TF → 1` from above
//!   as the drive `Ng` grows.
//! * [`run_phase_diagram`] — region labels and the coupling
//!   `g = |−ln(ρ̄h²) + (∫s⁴)⁻¹·h/a|⁻¹` over an `(h/a, ρ̄h²)` grid.
//!
//! Units: `ħ = 2m = 1`; all energies are `1/length²`.

use std::f64::consts::PI;
use std::time::{Duration, Instant};

use crate::gp::{minimize_gp2d, minimize_gp3d, tf_solve};
use crate::numerics::Grid1D;
use crate::par;
use crate::potential::SoftDisc;
use crate::regimes::{classify, S4_HARMONIC};
use crate::scattering::solve_scattering_2d;
use crate::{Error, Potential, Result};

/// Radial span of the crossover sweep's 3D solves (the 2D cloud at the
/// default drives decays far inside r = 7).
const CROSSOVER_R_SPAN: f64 = 7.0;
/// Radial span of the fixed 2D reference solve in the crossover sweep; wider
/// than the 3D span so its truncation error is strictly smaller.
const CROSSOVER_DEN_SPAN: f64 = 10.0;
/// Half-width of the transverse grid in units of h; the harmonic mode decays
/// like exp(−z²/2h²), so ±8h truncates at e⁻³².
const CROSSOVER_Z_HALF_WIDTH: f64 = 8.0;
/// Radial step of the Thomas-Fermi sweep's GP solves.
const TF_DR: f64 = 5e-3;

/// Parameters of a sweep: one ladder per swept quantity plus the fixed
/// values, resolution, output path, and parallelism width.
///
/// Each runner consumes the ladders it needs — `h_ladder` drives
/// [`run_crossover`], `lambda_ladder` drives [`run_scattering_convergence`],
/// `ng_ladder` drives [`run_tf_limit`], and the pair
/// (`h_over_a_ladder`, `rho_h2_ladder`) spans [`run_phase_diagram`]'s grid.
/// `r_tilde_ladder` and `epsilon` parametrize the annulus tabulation
/// (consumed by the command-line `dyson` table, which evaluates
/// [`crate::bounds::dyson_u2d`] at each `R̃`).
#[derive(Debug, Clone, PartialEq)]
pub struct SweepSpec {
    /// Confinement widths for the crossover sweep, strictly descending.
    pub h_ladder: Vec<f64>,
    /// Interaction strengths λ for the scattering sweep, strictly
    /// descending. A zero entry is carried as a degenerate row, flagged.
    pub lambda_ladder: Vec<f64>,
    /// 2D drives Ng for the Thomas-Fermi sweep, strictly ascending. A zero
    /// entry has no TF minimizer and is carried as a flagged N/A row.
    pub ng_ladder: Vec<f64>,
    /// Outer annulus radii R̃ for the `dyson` tabulation, strictly
    /// ascending.
    pub r_tilde_ladder: Vec<f64>,
    /// h/a axis of the phase diagram, strictly ascending.
    pub h_over_a_ladder: Vec<f64>,
    /// ρ̄h² axis of the phase diagram, strictly ascending.
    pub rho_h2_ladder: Vec<f64>,
    /// Fixed 2D drive g of the crossover sweep; each row solves at
    /// `Na = g·h/∫s⁴` so that `(∫s⁴)·Na/h = g` down the whole ladder.
    pub g_target: f64,
    /// Kinetic weight ε of the annulus tabulation.
    pub epsilon: f64,
    /// Support radius of the unit-integral shape w₁ in the scattering
    /// sweep.
    pub shape_radius: f64,
    /// Second, different shape radius; η must agree between the two.
    pub shape_radius_alt: f64,
    /// Radial nodes of the crossover sweep's 3D solves on [0, 7] (the 2D
    /// reference reuses the same spacing on [0, 10]). The 3D solver refuses
    /// Δr > 1/200, so 1401 nodes — the default — is the coarsest legal
    /// choice; rows violating the rule come back flagged.
    pub r_points: usize,
    /// Transverse nodes of the crossover sweep's 3D solves on [−8h, 8h].
    /// The solver refuses Δz > h/40, so 641 nodes is the floor at this
    /// span; the default resolves Δz = h/80.
    pub z_points: usize,
    /// Relative convergence tolerance handed to the minimizers.
    pub tolerance: f64,
    /// Output path for the CSV table; `None` writes to standard output
    /// (consumed by the command-line layer, not by the runners).
    pub output: Option<String>,
    /// Worker count for the row fan-out; `None` uses the default pool and
    /// `Some(1)` runs strictly sequentially.
    pub width: Option<usize>,
}

impl Default for SweepSpec {
    fn default() -> Self {
        SweepSpec {
            h_ladder: vec![0.2, 0.1, 0.05],
            lambda_ladder: vec![0.5, 0.2, 0.1, 0.05],
            ng_ladder: vec![10.0, 100.0, 1000.0, 10000.0],
            r_tilde_ladder: vec![100.0, 1000.0, 10000.0],
            h_over_a_ladder: vec![0.1, 0.3, 1.0, 3.0, 10.0, 30.0, 100.0, 300.0, 1000.0],
            rho_h2_ladder: vec![1e-12, 1e-8, 1e-4, 1e-2],
            g_target: 0.5,
            epsilon: 1.0,
            shape_radius: 1.0,
            shape_radius_alt: 2.5,
            r_points: 1401,
            z_points: 1281,
            tolerance: 1e-9,
            output: None,
            width: None,
        }
    }
}

/// One computed point of a sweep.
///
/// `inputs` and `observables` are parallel name/value lists with one fixed
/// schema per sweep; a row whose solve degenerated keeps the schema with
/// `NaN` observables, `converged = false`, and an explanatory `note`, so the
/// table stays rectangular. A ratio whose denominator vanishes is likewise
/// recorded as `NaN` with a note rather than a fabricated value. `wall_time`
/// is diagnostic only and is never written to the CSV, which must be a pure
/// function of the spec.
#[derive(Debug, Clone)]
pub struct SweepRow {
    /// Swept and fixed inputs of this row, in schema order.
    pub inputs: Vec<(&'static str, f64)>,
    /// Computed observables (energies, ratios, couplings), in schema order.
    pub observables: Vec<(&'static str, f64)>,
    /// Region label, present only in phase-diagram rows.
    pub region: Option<&'static str>,
    /// True when every solve behind the row converged and every per-row
    /// check passed.
    pub converged: bool,
    /// Explanation for a flagged row.
    pub note: Option<String>,
    /// Time spent computing the row (excluded from the CSV).
    pub wall_time: Duration,
}

impl SweepRow {
    /// Value of the named input, if the schema has it.
    pub fn input(&self, name: &str) -> Option<f64> {
        self.inputs.iter().find(|(n, _)| *n == name).map(|&(_, v)| v)
    }

    /// Value of the named observable, if the schema has it.
    pub fn observable(&self, name: &str) -> Option<f64> {
        self.observables.iter().find(|(n, _)| *n == name).map(|&(_, v)| v)
    }
}

/// Render rows as CSV: inputs, observables, the region label when any row
/// has one, the convergence flag, and the note. Values print in shortest
/// round-trip form, so the table is a pure function of the spec (wall times
/// are deliberately excluded). All rows must share one schema.
pub fn to_csv(rows: &[SweepRow]) -> Result<String> {
    let first = rows.first().ok_or_else(|| Error::InvalidTable {
        reason: "no rows to tabulate".into(),
    })?;
    let schema: Vec<&'static str> = first
        .inputs
        .iter()
        .chain(first.observables.iter())
        .map(|&(n, _)| n)
        .collect();
    let with_region = rows.iter().any(|r| r.region.is_some());

    let mut out = String::new();
    out.push_str(&schema.join(","));
    if with_region {
        out.push_str(",region");
    }
    out.push_str(",converged,note\n");

    for (i, row) in rows.iter().enumerate() {
        let names: Vec<&'static str> = row
            .inputs
            .iter()
            .chain(row.observables.iter())
            .map(|&(n, _)| n)
            .collect();
        if names != schema {
            return Err(Error::InvalidTable {
                reason: format!(
                    "row {i} has columns [{}] but the table schema is [{}]",
                    names.join(" "),
                    schema.join(" ")
                ),
            });
        }
        let mut fields: Vec<String> = row
            .inputs
            .iter()
            .chain(row.observables.iter())
            .map(|&(_, v)| format!("{v}"))
            .collect();
        if with_region {
            fields.push(row.region.unwrap_or("").to_string());
        }
        fields.push(row.converged.to_string());
        fields.push(match &row.note {
            // Keep the cell a single CSV field: no separators or line breaks.
            Some(n) => n.replace(',', ";").replace(['\n', '\r'], " "),
            None => String::new(),
        });
        out.push_str(&fields.join(","));
        out.push('\n');
    }
    Ok(out)
}

/// Geometric ladder from `first` to `last` (inclusive, endpoints exact),
/// ascending or descending with the endpoints. Needs `count ≥ 2` and
/// positive, distinct endpoints.
pub fn geometric_ladder(first: f64, last: f64, count: usize) -> Result<Vec<f64>> {
    let mut violations = Vec::new();
    if count < 2 {
        violations.push(format!("ladder needs at least 2 points (got {count})"));
    }
    for (name, v) in [("first", first), ("last", last)] {
        if !(v > 0.0) || !v.is_finite() {
            violations.push(format!("{name} must be positive and finite (got {v})"));
        }
    }
    if first == last {
        violations.push(format!("endpoints must be distinct (both {first})"));
    }
    if let Some(err) = sweep_error(violations) {
        return Err(err);
    }
    let ratio = (last / first).powf(1.0 / (count - 1) as f64);
    let mut ladder: Vec<f64> = (0..count).map(|k| first * ratio.powi(k as i32)).collect();
    ladder[0] = first;
    ladder[count - 1] = last;
    Ok(ladder)
}

#[derive(Clone, Copy)]
enum Order {
    Ascending,
    Descending,
}

/// Collect every violation of the ladder invariant (nonempty, finite,
/// nonnegative, strictly sorted). Entries of zero pass here: they are
/// degenerate inputs that flag their own row, not spec errors.
fn ladder_violations(violations: &mut Vec<String>, name: &str, ladder: &[f64], order: Order) {
    if ladder.is_empty() {
        violations.push(format!("{name} ladder is empty"));
        return;
    }
    for (i, &x) in ladder.iter().enumerate() {
        if !x.is_finite() {
            violations.push(format!("{name} ladder entry {i} is not finite ({x})"));
        } else if x < 0.0 {
            violations.push(format!("{name} ladder entry {i} is negative ({x})"));
        }
    }
    let (sorted, word) = match order {
        Order::Ascending => (ladder.windows(2).all(|w| w[1] > w[0]), "ascending"),
        Order::Descending => (ladder.windows(2).all(|w| w[1] < w[0]), "descending"),
    };
    if !sorted {
        violations.push(format!("{name} ladder is not strictly {word}"));
    }
}

fn positive_violation(violations: &mut Vec<String>, name: &str, value: f64) {
    if !(value > 0.0) || !value.is_finite() {
        violations.push(format!("{name} must be positive and finite (got {value})"));
    }
}

fn nonnegative_violation(violations: &mut Vec<String>, name: &str, value: f64) {
    if !(value >= 0.0) || !value.is_finite() {
        violations.push(format!("{name} must be nonnegative and finite (got {value})"));
    }
}

fn sweep_error(violations: Vec<String>) -> Option<Error> {
    if violations.is_empty() {
        None
    } else {
        Some(Error::InvalidSweep {
            reason: violations.join("; "),
        })
    }
}

/// Fan a row computation over the items, sequentially when `width == Some(1)`
/// and on a pool of the requested width otherwise; results keep item order.
fn run_rows<T, F>(width: Option<usize>, items: Vec<T>, f: F) -> Vec<SweepRow>
where
    T: Send,
    F: Fn(T) -> SweepRow + Send + Sync,
{
    match width {
        Some(1) => par::map_collect_seq(items, f),
        w => par::with_parallelism(w, || par::map_collect(items, f)),
    }
}

/// Build one row, timing it and demoting an error to a flagged row with the
/// same observable schema (all `NaN`) so the sweep stays rectangular.
fn timed_row<F>(
    inputs: Vec<(&'static str, f64)>,
    columns: &[&'static str],
    note_prefix: &str,
    body: F,
) -> SweepRow
where
    F: FnOnce() -> Result<(Vec<(&'static str, f64)>, Option<&'static str>, bool, Option<String>)>,
{
    let start = Instant::now();
    let mut row = match body() {
        Ok((observables, region, converged, note)) => SweepRow {
            inputs,
            observables,
            region,
            converged,
            note,
            wall_time: Duration::ZERO,
        },
        Err(err) => SweepRow {
            inputs,
            observables: columns.iter().map(|&c| (c, f64::NAN)).collect(),
            region: None,
            converged: false,
            note: Some(format!("{note_prefix}{err}")),
            wall_time: Duration::ZERO,
        },
    };
    row.wall_time = start.elapsed();
    row
}

const CROSSOVER_COLUMNS: &[&str] = &[
    "e3d",
    "e_perp_disc",
    "numerator",
    "denominator",
    "ratio",
    "upper_slack",
];

/// Crossover sweep: down a descending `h` ladder at fixed
/// `g = (∫s⁴)·Na/h`, tabulate
///
/// ```text
/// ratio(h) = (E₃D(1,1,h,Na) − e⊥/h²) / E₂D(1,1,g),
/// ```
///
/// which approaches 1 as the trap flattens. Both traps are harmonic. The
/// subtracted `e⊥/h²` is the 3D state's own discrete transverse ground
/// energy, so the finite-difference bias of the transverse direction cancels
/// instead of polluting the small numerator. The fixed 2D reference energy is
/// solved once, on a wider grid with the same radial spacing.
///
/// Each row also verifies the product-ansatz upper bound
/// `E₃D ≤ e⊥/h² + E₂D(g_row)` with `g_row = Na·∫s⁴` taken from the same
/// discretization — an exact variational inequality on the shared radial
/// grid; `upper_slack` is its margin and must be nonnegative.
pub fn run_crossover(spec: &SweepSpec) -> Result<Vec<SweepRow>> {
    let mut violations = Vec::new();
    ladder_violations(&mut violations, "h", &spec.h_ladder, Order::Descending);
    nonnegative_violation(&mut violations, "g_target", spec.g_target);
    positive_violation(&mut violations, "tolerance", spec.tolerance);
    if spec.r_points < 33 || spec.z_points < 33 {
        violations.push(format!(
            "crossover grids need at least 33 nodes per axis (got r_points={}, z_points={})",
            spec.r_points, spec.z_points
        ));
    }
    if let Some(err) = sweep_error(violations) {
        return Err(err);
    }

    // Fixed 2D reference E₂D(1,1,g): same radial spacing as the rows, wider
    // span, computed once — it does not depend on h.
    let dr = CROSSOVER_R_SPAN / (spec.r_points - 1) as f64;
    let den_points = (CROSSOVER_DEN_SPAN / dr).round() as usize + 1;
    let den_grid = Grid1D::uniform(0.0, CROSSOVER_DEN_SPAN, den_points)?;
    let den_state = minimize_gp2d(&Potential::Harmonic, spec.g_target, &den_grid, spec.tolerance)?;
    let denominator = den_state.energy;

    let rows = run_rows(spec.width, spec.h_ladder.clone(), |h| {
        let na = spec.g_target * h / S4_HARMONIC;
        let inputs = vec![("h", h), ("na", na), ("g", spec.g_target)];
        timed_row(inputs, CROSSOVER_COLUMNS, "row failed: ", || {
            let r_grid = Grid1D::uniform(0.0, CROSSOVER_R_SPAN, spec.r_points)?;
            let z_half = CROSSOVER_Z_HALF_WIDTH * h;
            let z_grid = Grid1D::uniform(-z_half, z_half, spec.z_points)?;
            let state = minimize_gp3d(
                &Potential::Harmonic,
                &Potential::Harmonic,
                h,
                na,
                &r_grid,
                &z_grid,
                spec.tolerance,
            )?;
            let numerator = state.energy - state.e_perp_discrete;
            let ratio = if denominator != 0.0 {
                numerator / denominator
            } else {
                f64::NAN
            };

            // Product-ansatz upper bound on the row's own discretization.
            let g_row = na * state.transverse_s4;
            let flat = minimize_gp2d(&Potential::Harmonic, g_row, &r_grid, spec.tolerance)?;
            let upper_slack = state.e_perp_discrete + flat.energy - state.energy;

            let mut converged = state.converged && flat.converged && den_state.converged;
            let mut note = None;
            if denominator == 0.0 {
                note = Some("ratio omitted: zero 2D reference energy".to_string());
            }
            if upper_slack < -1e-9 * state.energy.abs().max(1.0) {
                converged = false;
                note = Some(format!("upper bound violated: slack={upper_slack}"));
            }
            Ok((
                vec![
                    ("e3d", state.energy),
                    ("e_perp_disc", state.e_perp_discrete),
                    ("numerator", numerator),
                    ("denominator", denominator),
                    ("ratio", ratio),
                    ("upper_slack", upper_slack),
                ],
                None,
                converged,
                note,
            ))
        })
    });
    Ok(rows)
}

const SCATTERING_COLUMNS: &[&str] = &["eta", "eta_alt", "eta_gap"];

/// Weak-coupling scattering sweep: for `W = λ·w₁` with `w₁` a unit-integral
/// soft disc, tabulate the defect `η(λ) = λ·ln(R_shape/a_scatt) − 4π` down a
/// descending λ ladder. `|η|` shrinks with λ, and η is computed at two
/// different shape radii per row — the gap between them measures the (null)
/// radius dependence.
pub fn run_scattering_convergence(spec: &SweepSpec) -> Result<Vec<SweepRow>> {
    let mut violations = Vec::new();
    ladder_violations(&mut violations, "lambda", &spec.lambda_ladder, Order::Descending);
    positive_violation(&mut violations, "shape_radius", spec.shape_radius);
    positive_violation(&mut violations, "shape_radius_alt", spec.shape_radius_alt);
    if let Some(err) = sweep_error(violations) {
        return Err(err);
    }

    let eta_of = |lambda: f64, radius: f64| -> Result<f64> {
        let shape = SoftDisc::new(lambda, radius)?;
        let sol = solve_scattering_2d(&shape, 4.0 * radius, 1.0)?;
        Ok(lambda * (radius.ln() - sol.ln_a_scatt) - 4.0 * PI)
    };

    let rows = run_rows(spec.width, spec.lambda_ladder.clone(), |lambda| {
        let inputs = vec![("lambda", lambda)];
        timed_row(inputs, SCATTERING_COLUMNS, "row failed: ", || {
            let eta = eta_of(lambda, spec.shape_radius)?;
            let eta_alt = eta_of(lambda, spec.shape_radius_alt)?;
            Ok((
                vec![
                    ("eta", eta),
                    ("eta_alt", eta_alt),
                    ("eta_gap", (eta - eta_alt).abs()),
                ],
                None,
                true,
                None,
            ))
        })
    });
    Ok(rows)
}

const TF_COLUMNS: &[&str] = &["e_gp", "e_tf", "mu_tf", "ratio"];

/// Thomas-Fermi sweep: up an ascending `Ng` ladder in the harmonic trap,
/// tabulate `E^GP/E^TF`, which decreases toward 1 from above as the gradient
/// term loses against the interaction. Each row's radial grid follows the
/// growing TF cloud (`R_TF = √μ^TF`, `μ^TF = 4√(Ng)`). An `Ng = 0` entry has
/// no TF minimizer and comes back as a flagged N/A row.
pub fn run_tf_limit(spec: &SweepSpec) -> Result<Vec<SweepRow>> {
    let mut violations = Vec::new();
    ladder_violations(&mut violations, "ng", &spec.ng_ladder, Order::Ascending);
    positive_violation(&mut violations, "tolerance", spec.tolerance);
    if let Some(err) = sweep_error(violations) {
        return Err(err);
    }

    let rows = run_rows(spec.width, spec.ng_ladder.clone(), |ng| {
        let inputs = vec![("ng", ng)];
        timed_row(inputs, TF_COLUMNS, "N/A: ", || {
            let tf = tf_solve(&Potential::Harmonic, 1.0, ng)?;
            let r_max = 1.3 * tf.mu_tf.sqrt().max(2.0);
            let points = ((r_max / TF_DR).ceil() as usize + 1).max(401);
            let grid = Grid1D::uniform(0.0, r_max, points)?;
            let state = minimize_gp2d(&Potential::Harmonic, ng, &grid, spec.tolerance)?;
            let ratio = if tf.e_tf != 0.0 {
                state.energy / tf.e_tf
            } else {
                f64::NAN
            };
            let mut converged = state.converged;
            let mut note = None;
            if state.energy < tf.e_tf - 1e-12 * tf.e_tf.abs().max(1.0) {
                converged = false;
                note = Some(format!(
                    "lower bound violated: E_GP={} fell below E_TF={}",
                    state.energy, tf.e_tf
                ));
            }
            Ok((
                vec![
                    ("e_gp", state.energy),
                    ("e_tf", tf.e_tf),
                    ("mu_tf", tf.mu_tf),
                    ("ratio", ratio),
                ],
                None,
                converged,
                note,
            ))
        })
    });
    Ok(rows)
}

const PHASE_COLUMNS: &[&str] = &["g", "q", "ln_a2d"];

/// Phase-diagram sweep: classify every cell of the `(h/a, ρ̄h²)` grid at
/// `h = 1` and record the coupling `g`, the region ratio
/// `q = (h/a)/|ln(ρ̄h²)|`, and `ln(a_2D)`. Rows are ordered `ρ̄h²`-major
/// with `h/a` ascending inside each slice, so each density slice is
/// contiguous in the CSV. Since `q` is strictly increasing in `h/a` at fixed
/// density, the labels along a slice move monotonically through
/// REGION_II → CROSSOVER → REGION_I and the crossover band is connected.
pub fn run_phase_diagram(spec: &SweepSpec) -> Result<Vec<SweepRow>> {
    let mut violations = Vec::new();
    ladder_violations(&mut violations, "h_over_a", &spec.h_over_a_ladder, Order::Ascending);
    ladder_violations(&mut violations, "rho_h2", &spec.rho_h2_ladder, Order::Ascending);
    if let Some(err) = sweep_error(violations) {
        return Err(err);
    }

    let mut cells = Vec::with_capacity(spec.rho_h2_ladder.len() * spec.h_over_a_ladder.len());
    for &rho_h2 in &spec.rho_h2_ladder {
        for &h_over_a in &spec.h_over_a_ladder {
            cells.push((rho_h2, h_over_a));
        }
    }

    let rows = run_rows(spec.width, cells, |(rho_h2, h_over_a)| {
        let inputs = vec![("h_over_a", h_over_a), ("rho_h2", rho_h2)];
        timed_row(inputs, PHASE_COLUMNS, "row failed: ", || {
            let h = 1.0;
            let report = classify(rho_h2 / (h * h), h, h / h_over_a)?;
            Ok((
                vec![
                    ("g", report.g),
                    ("q", report.q),
                    ("ln_a2d", report.ln_a2d),
                ],
                Some(report.region.name()),
                true,
                None,
            ))
        })
    });
    Ok(rows)
}
