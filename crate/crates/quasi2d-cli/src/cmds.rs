//! The subcommands: argument structs and runners.
//!
//! Every runner follows the same shape: load the config file under a strict
//! key list, overlay the flags (flags win), collect every validation
//! violation, then solve and emit one CSV table. The returned flag is "all
//! solves converged and all per-run checks passed" — it decides between exit
//! codes 0 and 3.

use clap::Args;

use quasi2d::bounds::{
    dyson_recursion, dyson_u2d, nu_asymptote, temple_bound, temple_statistics, TempleInput,
};
use quasi2d::experiments::{self, SweepSpec};
use quasi2d::gp::{minimize_gp2d, minimize_gp3d, self_consistent_g, tf_solve};
use quasi2d::numerics::{eigs_sturm_liouville, Grid1D};
use quasi2d::potential::RadialPotential2D;
use quasi2d::regimes::{classify_with, RegimeThresholds, S4_HARMONIC};
use quasi2d::scattering::{effective_a2d, solve_scattering_2d, solve_scattering_3d};
use quasi2d::transverse::solve_transverse_scaled;
use quasi2d::Potential;

use crate::config::{sweep_failure, Ctx, Failure, W2d};
use crate::table::{render, write_out, Cell};

fn run_err(e: quasi2d::Error) -> Failure {
    Failure::Solve(e.to_string())
}

/// Ground transverse mode of V⊥ at confinement width h.
#[derive(Args)]
#[command(allow_negative_numbers = true)]
pub struct TransverseArgs {
    /// Flat key=value config file; flags override its values.
    #[arg(long)]
    pub config: Option<String>,
    /// Output CSV path (stdout when absent).
    #[arg(long)]
    pub output: Option<String>,
    /// Transverse trap: harmonic | power:<p> | box:<width>.
    #[arg(long)]
    pub trap: Option<String>,
    /// Confinement width h > 0.
    #[arg(long)]
    pub h: Option<f64>,
    /// Grid nodes on [-8h, 8h] (the domain self-extends if too small).
    #[arg(long)]
    pub points: Option<usize>,
}

const TRANSVERSE_KEYS: &[&str] = &["trap", "h", "points", "output"];

pub fn transverse(args: &TransverseArgs) -> Result<bool, Failure> {
    let mut ctx = Ctx::load(args.config.as_deref(), TRANSVERSE_KEYS);
    let trap = ctx.trap("trap", args.trap.clone(), "harmonic");
    let h = ctx.num("h", args.h).unwrap_or(1.0);
    let h = ctx.positive("h", h);
    let points = ctx.count("points", args.points).unwrap_or(4001);
    let output = ctx.text("output", args.output.clone());
    ctx.finish()?;

    let grid = Grid1D::uniform(-8.0 * h, 8.0 * h, points).map_err(run_err)?;
    let mode = solve_transverse_scaled(&trap, h, &grid).map_err(run_err)?;
    let csv = render(
        &["h", "e_perp", "e_perp_excited", "s4", "s_inf_sq", "ds2_inf"],
        &[vec![
            h.into(),
            mode.e_perp.into(),
            mode.e_perp_excited.into(),
            mode.s4.into(),
            mode.s_inf_sq.into(),
            mode.ds2_inf.into(),
        ]],
    );
    write_out(output.as_deref(), &csv)?;
    Ok(true)
}

/// 3D zero-energy scattering length of an interaction potential.
#[derive(Args)]
#[command(allow_negative_numbers = true)]
pub struct Scatter3dArgs {
    /// Flat key=value config file; flags override its values.
    #[arg(long)]
    pub config: Option<String>,
    /// Output CSV path (stdout when absent).
    #[arg(long)]
    pub output: Option<String>,
    /// Interaction: square-barrier:<v0>:<R0> | hard-core:<R> | tabulated:<path> | zero.
    #[arg(long)]
    pub potential: Option<String>,
    /// Family scale: solve for v_a(r) = a_scale^-2 v(r/a_scale).
    #[arg(long)]
    pub a_scale: Option<f64>,
}

const SCATTER3D_KEYS: &[&str] = &["potential", "a_scale", "output"];

pub fn scatter3d(args: &Scatter3dArgs) -> Result<bool, Failure> {
    let mut ctx = Ctx::load(args.config.as_deref(), SCATTER3D_KEYS);
    let potential = ctx.interaction("potential", args.potential.clone());
    if potential.is_none() {
        ctx.violation("missing required key `potential`".to_string());
    }
    let a_scale = ctx.num("a_scale", args.a_scale).unwrap_or(1.0);
    let a_scale = ctx.positive("a_scale", a_scale);
    let output = ctx.text("output", args.output.clone());
    ctx.finish()?;

    let sol = solve_scattering_3d(&potential.unwrap(), a_scale).map_err(run_err)?;
    let csv = render(
        &["a_scale", "a", "core", "range", "fit_residual"],
        &[vec![
            a_scale.into(),
            sol.a.into(),
            sol.core.into(),
            sol.range.into(),
            sol.fit_residual.into(),
        ]],
    );
    write_out(output.as_deref(), &csv)?;
    Ok(true)
}

/// 2D zero-energy scattering: a_scatt and the annulus energy E_R, or (with
/// a λ ladder) the weak-coupling convergence sweep.
#[derive(Args)]
#[command(allow_negative_numbers = true)]
pub struct Scatter2dArgs {
    /// Flat key=value config file; flags override its values.
    #[arg(long)]
    pub config: Option<String>,
    /// Output CSV path (stdout when absent).
    #[arg(long)]
    pub output: Option<String>,
    /// 2D potential: soft-disc:<strength>:<R> | hard-disc:<R> | tabulated:<path>.
    #[arg(long)]
    pub potential: Option<String>,
    /// Outer boundary radius R of the annulus energy.
    #[arg(long)]
    pub r_boundary: Option<f64>,
    /// Kinetic weight ε of the annulus functional.
    #[arg(long)]
    pub epsilon: Option<f64>,
    /// λ ladder (list or geom:<a>:<b>:<n>): runs the convergence sweep instead.
    #[arg(long)]
    pub lambda_ladder: Option<String>,
    /// Unit-integral shape radius of the sweep.
    #[arg(long)]
    pub shape_radius: Option<f64>,
    /// Second shape radius; η must agree between the two.
    #[arg(long)]
    pub shape_radius_alt: Option<f64>,
    /// Sweep worker count (1 = strictly sequential).
    #[arg(long)]
    pub width: Option<usize>,
}

const SCATTER2D_KEYS: &[&str] = &[
    "potential",
    "r_boundary",
    "epsilon",
    "lambda_ladder",
    "shape_radius",
    "shape_radius_alt",
    "width",
    "output",
];

pub fn scatter2d(args: &Scatter2dArgs) -> Result<bool, Failure> {
    let mut ctx = Ctx::load(args.config.as_deref(), SCATTER2D_KEYS);
    let sweep_mode = ctx.present("lambda_ladder", args.lambda_ladder.is_some());
    let output = ctx.text("output", args.output.clone());

    if sweep_mode {
        for (key, given) in [
            ("potential", args.potential.is_some()),
            ("r_boundary", args.r_boundary.is_some()),
            ("epsilon", args.epsilon.is_some()),
        ] {
            if ctx.present(key, given) {
                ctx.violation(format!(
                    "over-specified: `lambda_ladder` selects the convergence sweep; drop `{key}`"
                ));
            }
        }
        let mut spec = SweepSpec::default();
        if let Some(l) = ctx.ladder("lambda_ladder", args.lambda_ladder.clone()) {
            spec.lambda_ladder = l;
        }
        if let Some(r) = ctx.num("shape_radius", args.shape_radius) {
            spec.shape_radius = r;
        }
        if let Some(r) = ctx.num("shape_radius_alt", args.shape_radius_alt) {
            spec.shape_radius_alt = r;
        }
        spec.width = ctx.count("width", args.width);
        ctx.finish()?;

        let rows = experiments::run_scattering_convergence(&spec).map_err(sweep_failure)?;
        let csv = experiments::to_csv(&rows).map_err(run_err)?;
        write_out(output.as_deref(), &csv)?;
        return Ok(rows.iter().all(|r| r.converged));
    }

    let potential = ctx.radial2d("potential", args.potential.clone());
    if potential.is_none() {
        ctx.violation("missing required key `potential`".to_string());
    }
    let r_boundary = ctx.require_num("r_boundary", args.r_boundary);
    let r_boundary = ctx.positive("r_boundary", r_boundary);
    let epsilon = ctx.num("epsilon", args.epsilon).unwrap_or(1.0);
    let epsilon = ctx.positive("epsilon", epsilon);
    ctx.finish()?;

    let sol = solve_scattering_2d(&potential.unwrap(), r_boundary, epsilon).map_err(run_err)?;
    let csv = render(
        &["r_boundary", "epsilon", "a_scatt_ln", "e_r", "too_strong"],
        &[vec![
            r_boundary.into(),
            epsilon.into(),
            sol.ln_a_scatt.into(),
            sol.e_r.into(),
            sol.too_strong.into(),
        ]],
    );
    write_out(output.as_deref(), &csv)?;
    Ok(true)
}

/// Quasi-2D scattering length a_2D = h·exp(-(∫s⁴)^-1·h/2a), in log domain.
#[derive(Args)]
#[command(allow_negative_numbers = true)]
pub struct A2dArgs {
    /// Flat key=value config file; flags override its values.
    #[arg(long)]
    pub config: Option<String>,
    /// Output CSV path (stdout when absent).
    #[arg(long)]
    pub output: Option<String>,
    /// Confinement width h > 0.
    #[arg(long)]
    pub h: Option<f64>,
    /// 3D scattering length a > 0.
    #[arg(long)]
    pub a: Option<f64>,
    /// Transverse moment ∫s⁴ (defaults to the harmonic value).
    #[arg(long)]
    pub s4: Option<f64>,
}

const A2D_KEYS: &[&str] = &["h", "a", "s4", "output"];

pub fn a2d(args: &A2dArgs) -> Result<bool, Failure> {
    let mut ctx = Ctx::load(args.config.as_deref(), A2D_KEYS);
    let h = ctx.require_num("h", args.h);
    let h = ctx.positive("h", h);
    let a = ctx.require_num("a", args.a);
    let a = ctx.positive("a", a);
    let s4 = ctx.num("s4", args.s4).unwrap_or(S4_HARMONIC);
    let s4 = ctx.positive("s4", s4);
    let output = ctx.text("output", args.output.clone());
    ctx.finish()?;

    let result = effective_a2d(h, a, s4).map_err(run_err)?;
    // a2d_ln is ln(a_2D/h): the linear a_2D may underflow deep in Region II,
    // the log never does, so only the log column is emitted.
    let csv = render(
        &["h", "a", "s4", "a2d_ln"],
        &[vec![h.into(), a.into(), s4.into(), result.exponent.into()]],
    );
    write_out(output.as_deref(), &csv)?;
    Ok(true)
}

/// 2D Gross-Pitaevskii ground state at drive Ng (per-particle energy).
#[derive(Args)]
#[command(allow_negative_numbers = true)]
pub struct Gp2dArgs {
    /// Flat key=value config file; flags override its values.
    #[arg(long)]
    pub config: Option<String>,
    /// Output CSV path (stdout when absent).
    #[arg(long)]
    pub output: Option<String>,
    /// Planar trap: harmonic | power:<p> | box:<width> | periodic:<side>.
    #[arg(long)]
    pub trap: Option<String>,
    /// Dimensionless drive Ng >= 0.
    #[arg(long = "ng")]
    pub ng: Option<f64>,
    /// Particle number N (scales the reported mean density).
    #[arg(long)]
    pub n: Option<f64>,
    /// Trap length L; observables come from the unit problem via the exact
    /// scaling identity E(N, L, g) = L^-2 E(1, 1, Ng).
    #[arg(long)]
    pub l: Option<f64>,
    /// Radial grid extent (defaults to 1.3x the TF radius, at least 6).
    #[arg(long)]
    pub r_max: Option<f64>,
    /// Radial grid nodes.
    #[arg(long)]
    pub points: Option<usize>,
    /// Relative convergence tolerance of the minimizer.
    #[arg(long)]
    pub tol: Option<f64>,
}

const GP2D_KEYS: &[&str] = &[
    "trap", "ng", "n", "l", "r_max", "points", "tol", "output",
];

pub fn gp2d(args: &Gp2dArgs) -> Result<bool, Failure> {
    let mut ctx = Ctx::load(args.config.as_deref(), GP2D_KEYS);
    let trap = ctx.trap("trap", args.trap.clone(), "harmonic");
    let ng = ctx.require_num("ng", args.ng);
    let ng = ctx.nonnegative("ng", ng);
    let n = ctx.num("n", args.n).unwrap_or(1.0);
    let n = ctx.positive("n", n);
    let l = ctx.num("l", args.l).unwrap_or(1.0);
    let l = ctx.positive("l", l);
    let r_max = ctx
        .num("r_max", args.r_max)
        .unwrap_or_else(|| default_r_max(&trap, ng));
    let r_max = ctx.positive("r_max", r_max);
    let points = ctx
        .count("points", args.points)
        .unwrap_or_else(|| default_points(r_max));
    let tol = ctx.num("tol", args.tol).unwrap_or(1e-9);
    let tol = ctx.positive("tol", tol);
    let output = ctx.text("output", args.output.clone());
    ctx.finish()?;

    let grid = Grid1D::uniform(0.0, r_max, points).map_err(run_err)?;
    let state = minimize_gp2d(&trap, ng, &grid, tol).map_err(run_err)?;
    // Unit problem scaled to (N, L): energies by L^-2, density by N/L².
    let csv = render(
        &["ng", "n", "l", "energy", "mu", "rho_bar"],
        &[vec![
            ng.into(),
            n.into(),
            l.into(),
            (state.energy / (l * l)).into(),
            (state.mu / (l * l)).into(),
            (n * state.quartic_integral() / (l * l)).into(),
        ]],
    );
    write_out(output.as_deref(), &csv)?;
    Ok(state.converged)
}

/// Default radial extent: follow the Thomas-Fermi cloud in homogeneous
/// traps, the wall in boxes.
fn default_r_max(trap: &Potential, ng: f64) -> f64 {
    match trap {
        Potential::HardBox { width } => 0.5 * width,
        Potential::PeriodicBox { side } => *side,
        _ => match trap.homogeneity() {
            Some(p) if ng > 0.0 => {
                let mu = (8.0 * ng * (p + 2.0) / p).powf(p / (p + 2.0));
                (1.3 * mu.powf(1.0 / p)).max(6.0)
            }
            _ => 6.0,
        },
    }
}

fn default_points(r_max: f64) -> usize {
    ((r_max / 5e-3).ceil() as usize + 1).max(401)
}

/// 3D cylindrical Gross-Pitaevskii ground state at drive Na.
#[derive(Args)]
#[command(allow_negative_numbers = true)]
pub struct Gp3dArgs {
    /// Flat key=value config file; flags override its values.
    #[arg(long)]
    pub config: Option<String>,
    /// Output CSV path (stdout when absent).
    #[arg(long)]
    pub output: Option<String>,
    /// Planar trap: harmonic | power:<p> | box:<width>.
    #[arg(long)]
    pub trap: Option<String>,
    /// Transverse trap: harmonic | power:<p> | box:<width>.
    #[arg(long)]
    pub trap_perp: Option<String>,
    /// Confinement width h > 0.
    #[arg(long)]
    pub h: Option<f64>,
    /// Dimensionless drive Na >= 0.
    #[arg(long = "na")]
    pub na: Option<f64>,
    /// Radial grid extent.
    #[arg(long)]
    pub r_max: Option<f64>,
    /// Radial grid nodes (the solver requires spacing <= 1/200).
    #[arg(long)]
    pub r_points: Option<usize>,
    /// Transverse half-width of the grid (defaults to 8h).
    #[arg(long)]
    pub z_half: Option<f64>,
    /// Transverse grid nodes (the solver requires spacing <= h/40).
    #[arg(long)]
    pub z_points: Option<usize>,
    /// Relative convergence tolerance of the minimizer.
    #[arg(long)]
    pub tol: Option<f64>,
}

const GP3D_KEYS: &[&str] = &[
    "trap", "trap_perp", "h", "na", "r_max", "r_points", "z_half", "z_points", "tol", "output",
];

pub fn gp3d(args: &Gp3dArgs) -> Result<bool, Failure> {
    let mut ctx = Ctx::load(args.config.as_deref(), GP3D_KEYS);
    let trap = ctx.trap("trap", args.trap.clone(), "harmonic");
    let trap_perp = ctx.trap("trap_perp", args.trap_perp.clone(), "harmonic");
    let h = ctx.require_num("h", args.h);
    let h = ctx.positive("h", h);
    let na = ctx.require_num("na", args.na);
    let na = ctx.nonnegative("na", na);
    let r_max = ctx.num("r_max", args.r_max).unwrap_or(7.0);
    let r_max = ctx.positive("r_max", r_max);
    let r_points = ctx.count("r_points", args.r_points).unwrap_or(1401);
    let z_half = ctx.num("z_half", args.z_half).unwrap_or(8.0 * h);
    let z_half = ctx.positive("z_half", z_half);
    let z_points = ctx.count("z_points", args.z_points).unwrap_or(1281);
    let tol = ctx.num("tol", args.tol).unwrap_or(1e-9);
    let tol = ctx.positive("tol", tol);
    let output = ctx.text("output", args.output.clone());
    ctx.finish()?;

    let r_grid = Grid1D::uniform(0.0, r_max, r_points).map_err(run_err)?;
    let z_grid = Grid1D::uniform(-z_half, z_half, z_points).map_err(run_err)?;
    let state = minimize_gp3d(&trap, &trap_perp, h, na, &r_grid, &z_grid, tol).map_err(run_err)?;
    let csv = render(
        &["h", "na", "energy", "mu", "e_perp_disc", "s4_disc"],
        &[vec![
            h.into(),
            na.into(),
            state.energy.into(),
            state.mu.into(),
            state.e_perp_discrete.into(),
            state.transverse_s4.into(),
        ]],
    );
    write_out(output.as_deref(), &csv)?;
    Ok(state.converged)
}

/// Thomas-Fermi profile (closed form for homogeneous traps), or the TF-limit
/// sweep E^GP/E^TF with an Ng ladder.
#[derive(Args)]
#[command(allow_negative_numbers = true)]
pub struct TfArgs {
    /// Flat key=value config file; flags override its values.
    #[arg(long)]
    pub config: Option<String>,
    /// Output CSV path (stdout when absent).
    #[arg(long)]
    pub output: Option<String>,
    /// Trap: harmonic | power:<p>.
    #[arg(long)]
    pub trap: Option<String>,
    /// Particle number N.
    #[arg(long)]
    pub n: Option<f64>,
    /// Pair coupling g > 0 (single evaluation).
    #[arg(long)]
    pub g: Option<f64>,
    /// Ng ladder (list or geom:<a>:<b>:<n>): runs the TF-limit sweep instead.
    #[arg(long)]
    pub ng_ladder: Option<String>,
    /// Relative convergence tolerance of the sweep's GP solves.
    #[arg(long)]
    pub tol: Option<f64>,
    /// Sweep worker count (1 = strictly sequential).
    #[arg(long)]
    pub width: Option<usize>,
}

const TF_KEYS: &[&str] = &["trap", "n", "g", "ng_ladder", "tol", "width", "output"];

pub fn tf(args: &TfArgs) -> Result<bool, Failure> {
    let mut ctx = Ctx::load(args.config.as_deref(), TF_KEYS);
    let sweep_mode = ctx.present("ng_ladder", args.ng_ladder.is_some());
    let output = ctx.text("output", args.output.clone());

    if sweep_mode {
        for (key, given) in [
            ("g", args.g.is_some()),
            ("n", args.n.is_some()),
            ("trap", args.trap.is_some()),
        ] {
            if ctx.present(key, given) {
                ctx.violation(format!(
                    "over-specified: `ng_ladder` runs the harmonic TF-limit sweep; drop `{key}`"
                ));
            }
        }
        let mut spec = SweepSpec::default();
        if let Some(l) = ctx.ladder("ng_ladder", args.ng_ladder.clone()) {
            spec.ng_ladder = l;
        }
        if let Some(t) = ctx.num("tol", args.tol) {
            spec.tolerance = t;
        }
        spec.width = ctx.count("width", args.width);
        ctx.finish()?;

        let rows = experiments::run_tf_limit(&spec).map_err(sweep_failure)?;
        let csv = experiments::to_csv(&rows).map_err(run_err)?;
        write_out(output.as_deref(), &csv)?;
        return Ok(rows.iter().all(|r| r.converged));
    }

    let trap = ctx.trap("trap", args.trap.clone(), "harmonic");
    let n = ctx.num("n", args.n).unwrap_or(1.0);
    let n = ctx.positive("n", n);
    let g = ctx.require_num("g", args.g);
    let g = ctx.positive("g", g);
    ctx.finish()?;

    let tf = tf_solve(&trap, n, g).map_err(run_err)?;
    let csv = render(
        &["n", "g", "mu_tf", "rho_bar", "e_tf", "numeric"],
        &[vec![
            n.into(),
            g.into(),
            tf.mu_tf.into(),
            tf.rho_bar.into(),
            tf.e_tf.into(),
            tf.numeric.into(),
        ]],
    );
    write_out(output.as_deref(), &csv)?;
    Ok(true)
}

/// Self-consistent effective 2D coupling g = 1/(|ln(ρ̄h²)| + (∫s⁴)^-1 h/a).
#[derive(Args)]
#[command(allow_negative_numbers = true)]
pub struct SelfgArgs {
    /// Flat key=value config file; flags override its values.
    #[arg(long)]
    pub config: Option<String>,
    /// Output CSV path (stdout when absent).
    #[arg(long)]
    pub output: Option<String>,
    /// Particle number N.
    #[arg(long)]
    pub n: Option<f64>,
    /// Planar trap length L.
    #[arg(long)]
    pub l: Option<f64>,
    /// Confinement width h > 0.
    #[arg(long)]
    pub h: Option<f64>,
    /// 3D scattering length a > 0.
    #[arg(long)]
    pub a: Option<f64>,
    /// Planar trap: harmonic | power:<p> | box:<width> | periodic:<side>.
    #[arg(long)]
    pub trap: Option<String>,
    /// Transverse trap: harmonic | power:<p> | box:<width>.
    #[arg(long)]
    pub trap_perp: Option<String>,
    /// Unit-trap radial grid extent.
    #[arg(long)]
    pub r_max: Option<f64>,
    /// Radial grid nodes.
    #[arg(long)]
    pub points: Option<usize>,
    /// Relative change in g at which the fixed-point iteration stops.
    #[arg(long)]
    pub tol: Option<f64>,
}

const SELFG_KEYS: &[&str] = &[
    "n", "l", "h", "a", "trap", "trap_perp", "r_max", "points", "tol", "output",
];

pub fn selfg(args: &SelfgArgs) -> Result<bool, Failure> {
    let mut ctx = Ctx::load(args.config.as_deref(), SELFG_KEYS);
    let n = ctx.require_num("n", args.n);
    let n = ctx.positive("n", n);
    let l = ctx.num("l", args.l).unwrap_or(1.0);
    let l = ctx.positive("l", l);
    let h = ctx.require_num("h", args.h);
    let h = ctx.positive("h", h);
    let a = ctx.require_num("a", args.a);
    let a = ctx.positive("a", a);
    let trap = ctx.trap("trap", args.trap.clone(), "harmonic");
    let trap_perp = ctx.trap("trap_perp", args.trap_perp.clone(), "harmonic");
    let r_max = ctx.num("r_max", args.r_max).unwrap_or(8.0);
    let r_max = ctx.positive("r_max", r_max);
    let points = ctx
        .count("points", args.points)
        .unwrap_or_else(|| default_points(r_max));
    let tol = ctx.num("tol", args.tol).unwrap_or(1e-10);
    let tol = ctx.positive("tol", tol);
    let output = ctx.text("output", args.output.clone());
    ctx.finish()?;

    let z_grid = Grid1D::uniform(-8.0, 8.0, 3201).map_err(run_err)?;
    let mode = solve_transverse_scaled(&trap_perp, 1.0, &z_grid).map_err(run_err)?;
    let grid = Grid1D::uniform(0.0, r_max, points).map_err(run_err)?;
    let out = self_consistent_g(n, l, h, a, &trap, &mode, &grid, tol).map_err(run_err)?;
    let csv = render(
        &[
            "n",
            "l",
            "h",
            "a",
            "g",
            "rho_bar",
            "g_formula",
            "rho_bar_tf",
            "rho_ah",
            "rho_h2",
            "strongly_confined",
            "iterations",
        ],
        &[vec![
            n.into(),
            l.into(),
            h.into(),
            a.into(),
            out.g.into(),
            out.rho_bar.into(),
            out.g_formula.into(),
            out.rho_bar_tf.into(),
            out.rho_ah.into(),
            out.rho_h2.into(),
            out.strongly_confined.into(),
            out.iterations.into(),
        ]],
    );
    write_out(output.as_deref(), &csv)?;
    Ok(out.converged)
}

/// Region classification of (ρ̄, h, a); `a` and `ln_a2d` are mutually
/// exclusive ways to fix the interaction.
#[derive(Args)]
#[command(allow_negative_numbers = true)]
pub struct RegimeArgs {
    /// Flat key=value config file; flags override its values.
    #[arg(long)]
    pub config: Option<String>,
    /// Output CSV path (stdout when absent).
    #[arg(long)]
    pub output: Option<String>,
    /// Mean 2D density ρ̄ > 0.
    #[arg(long)]
    pub rho_bar: Option<f64>,
    /// Confinement width h > 0.
    #[arg(long)]
    pub h: Option<f64>,
    /// 3D scattering length a > 0 (exclusive with ln_a2d).
    #[arg(long)]
    pub a: Option<f64>,
    /// ln(a_2D), absolute; inverted to a (exclusive with a).
    #[arg(long)]
    pub ln_a2d: Option<f64>,
    /// Drive Ng for the interaction-strength class (optional).
    #[arg(long = "ng")]
    pub ng: Option<f64>,
    /// Region band: REGION_I for q > band, REGION_II for q < 1/band.
    #[arg(long)]
    pub band: Option<f64>,
    /// Smallness threshold of the strong-confinement parameters.
    #[arg(long)]
    pub small: Option<f64>,
    /// Transverse moment ∫s⁴ entering g.
    #[arg(long)]
    pub s4: Option<f64>,
    /// Ng below this is classed IDEAL.
    #[arg(long)]
    pub ng_ideal: Option<f64>,
    /// Ng above this is classed TF.
    #[arg(long)]
    pub ng_tf: Option<f64>,
}

const REGIME_KEYS: &[&str] = &[
    "rho_bar", "h", "a", "ln_a2d", "ng", "band", "small", "s4", "ng_ideal", "ng_tf", "output",
];

pub fn regime(args: &RegimeArgs) -> Result<bool, Failure> {
    let mut ctx = Ctx::load(args.config.as_deref(), REGIME_KEYS);
    let rho_bar = ctx.require_num("rho_bar", args.rho_bar);
    let rho_bar = ctx.positive("rho_bar", rho_bar);
    let h = ctx.require_num("h", args.h);
    let h = ctx.positive("h", h);

    let defaults = RegimeThresholds::default();
    let thresholds = RegimeThresholds {
        band: ctx.num("band", args.band).unwrap_or(defaults.band),
        small: ctx.num("small", args.small).unwrap_or(defaults.small),
        s4: ctx.num("s4", args.s4).unwrap_or(defaults.s4),
        ng_ideal: ctx.num("ng_ideal", args.ng_ideal).unwrap_or(defaults.ng_ideal),
        ng_tf: ctx.num("ng_tf", args.ng_tf).unwrap_or(defaults.ng_tf),
    };
    let s4 = ctx.positive("s4", thresholds.s4);

    let a_given = ctx.num("a", args.a);
    let ln_a2d_given = ctx.num("ln_a2d", args.ln_a2d);
    let a = match (a_given, ln_a2d_given) {
        (Some(_), Some(_)) => {
            ctx.violation(
                "over-specified: give exactly one of `a` and `ln_a2d`, not both".to_string(),
            );
            f64::NAN
        }
        (None, None) => {
            ctx.violation("missing interaction: give one of `a` or `ln_a2d`".to_string());
            f64::NAN
        }
        (Some(a), None) => ctx.positive("a", a),
        (None, Some(ln_a2d)) => {
            // Invert a_2D = h·exp(-(∫s⁴)^-1·h/2a): a = h/(2·s4·(ln h − ln a_2D)).
            if !h.is_nan() && !(ln_a2d < h.ln()) {
                ctx.violation(format!(
                    "key `ln_a2d`: must satisfy ln_a2d < ln(h) = {} (a_2D < h)",
                    h.ln()
                ));
                f64::NAN
            } else {
                h / (2.0 * s4 * (h.ln() - ln_a2d))
            }
        }
    };
    let ng = ctx.num("ng", args.ng);
    let output = ctx.text("output", args.output.clone());
    ctx.finish()?;

    let report = classify_with(rho_bar, h, a, &thresholds, ng).map_err(run_err)?;
    let csv = render(
        &[
            "rho_bar",
            "h",
            "a",
            "g",
            "q",
            "region",
            "a2d_ln",
            "sc_parameter",
            "sc_value",
            "sc_satisfied",
            "ng_class",
        ],
        &[vec![
            rho_bar.into(),
            h.into(),
            a.into(),
            report.g.into(),
            report.q.into(),
            report.region.name().into(),
            (report.ln_a2d - h.ln()).into(),
            report.strong_confinement.parameter.into(),
            report.strong_confinement.value.into(),
            report.strong_confinement.satisfied.into(),
            report.ng_class.map(|c| c.name()).unwrap_or("").into(),
        ]],
    );
    write_out(output.as_deref(), &csv)?;
    Ok(true)
}

/// Temple lower bound for -d²/dz² + V(z) with an explicit trial state,
/// sandwiched against the discrete ground energy.
#[derive(Args)]
#[command(allow_negative_numbers = true)]
pub struct TempleArgs {
    /// Flat key=value config file; flags override its values.
    #[arg(long)]
    pub config: Option<String>,
    /// Output CSV path (stdout when absent).
    #[arg(long)]
    pub output: Option<String>,
    /// Potential: harmonic | power:<p> | box:<width>.
    #[arg(long)]
    pub potential: Option<String>,
    /// Half-width of the grid (ignored for boxes, which fix their domain).
    #[arg(long)]
    pub span: Option<f64>,
    /// Grid nodes.
    #[arg(long)]
    pub points: Option<usize>,
    /// Trial state: gaussian:<s> for exp(-z²/4s), or `exact` for the
    /// discrete ground state itself (variance collapses to zero).
    #[arg(long)]
    pub trial: Option<String>,
}

const TEMPLE_KEYS: &[&str] = &["potential", "span", "points", "trial", "output"];

pub fn temple(args: &TempleArgs) -> Result<bool, Failure> {
    let mut ctx = Ctx::load(args.config.as_deref(), TEMPLE_KEYS);
    let potential = ctx.trap("potential", args.potential.clone(), "harmonic");
    let span = ctx.num("span", args.span).unwrap_or(8.0);
    let span = ctx.positive("span", span);
    let points = ctx.count("points", args.points).unwrap_or(2001);
    let trial_spec = ctx
        .text("trial", args.trial.clone())
        .unwrap_or_else(|| "gaussian:0.5".to_string());
    let output = ctx.text("output", args.output.clone());
    ctx.finish()?;

    // Hard boxes fix their own domain with V = 0 inside; everything else is
    // sampled on the requested span.
    let (grid, v): (Grid1D, Box<dyn Fn(f64) -> f64>) = match &potential {
        Potential::HardBox { width } => (
            Grid1D::uniform(-0.5 * width, 0.5 * width, points).map_err(run_err)?,
            Box::new(|_| 0.0),
        ),
        other => {
            let p = other.clone();
            (
                Grid1D::uniform(-span, span, points).map_err(run_err)?,
                Box::new(move |z| p.value(z)),
            )
        }
    };

    let eigs = eigs_sturm_liouville(&*v, &grid, 2).map_err(run_err)?;
    let e0 = eigs[0].eigenvalue;
    let gap_floor = eigs[1].eigenvalue;

    let trial = parse_trial(&trial_spec, &grid, &eigs[0].eigenvector)
        .map_err(|msg| Failure::Config(vec![format!("key `trial`: {msg}")]))?;
    let stats = temple_statistics(&*v, &grid, &trial).map_err(run_err)?;
    let bound = temple_bound(&TempleInput {
        expectation: stats.expectation,
        second_moment: stats.second_moment,
        gap_floor,
    })
    .map_err(run_err)?;

    let scale = e0.abs().max(1.0);
    let sandwich_ok =
        bound.lower_bound <= e0 + 1e-9 * scale && e0 <= stats.expectation + 1e-9 * scale;
    let csv = render(
        &[
            "expectation",
            "second_moment",
            "variance",
            "gap_floor",
            "lower_bound",
            "e0_discrete",
            "sandwich_ok",
        ],
        &[vec![
            stats.expectation.into(),
            stats.second_moment.into(),
            bound.variance.into(),
            gap_floor.into(),
            bound.lower_bound.into(),
            e0.into(),
            sandwich_ok.into(),
        ]],
    );
    write_out(output.as_deref(), &csv)?;
    Ok(sandwich_ok)
}

fn parse_trial(spec: &str, grid: &Grid1D, ground: &[f64]) -> Result<Vec<f64>, String> {
    if spec == "exact" {
        return Ok(ground.to_vec());
    }
    let Some(rest) = spec.strip_prefix("gaussian:") else {
        return Err(format!(
            "unknown trial `{spec}` (use gaussian:<s> | exact)"
        ));
    };
    let s: f64 = rest
        .parse()
        .map_err(|_| format!("cannot parse `{rest}` as a number"))?;
    if !(s > 0.0) || !s.is_finite() {
        return Err(format!("gaussian width must be positive (got {s})"));
    }
    Ok(grid
        .points()
        .iter()
        .map(|&z| (-z * z / (4.0 * s)).exp())
        .collect())
}

/// Annulus-energy normalizer ν(R̃) of the 2D soft potential construction,
/// tabulated against its hard-disc asymptote ¼R̃²·ln(R̃²/a_scatt²).
#[derive(Args)]
#[command(allow_negative_numbers = true)]
pub struct DysonArgs {
    /// Flat key=value config file; flags override its values.
    #[arg(long)]
    pub config: Option<String>,
    /// Output CSV path (stdout when absent).
    #[arg(long)]
    pub output: Option<String>,
    /// Inner 2D potential: soft-disc:<strength>:<R> | hard-disc:<R> | tabulated:<path>.
    #[arg(long)]
    pub potential: Option<String>,
    /// Tabulation base radius R (defaults to twice the support radius).
    #[arg(long)]
    pub r_boundary: Option<f64>,
    /// Kinetic weight ε of the annulus functional.
    #[arg(long)]
    pub epsilon: Option<f64>,
    /// Outer radii R̃ (list or geom:<a>:<b>:<n>), ascending, all > R.
    #[arg(long)]
    pub r_tilde_ladder: Option<String>,
}

const DYSON_KEYS: &[&str] = &[
    "potential", "r_boundary", "epsilon", "r_tilde_ladder", "output",
];

pub fn dyson(args: &DysonArgs) -> Result<bool, Failure> {
    let mut ctx = Ctx::load(args.config.as_deref(), DYSON_KEYS);
    let w = match ctx.radial2d("potential", args.potential.clone()) {
        Some(w) => w,
        None => W2d::Hard(quasi2d::potential::HardDisc::new(1.0).expect("unit disc")),
    };
    let r_boundary = ctx
        .num("r_boundary", args.r_boundary)
        .unwrap_or_else(|| 2.0 * w.support_radius().max(w.core_radius()));
    let r_boundary = ctx.positive("r_boundary", r_boundary);
    let epsilon = ctx.num("epsilon", args.epsilon).unwrap_or(1.0);
    let epsilon = ctx.positive("epsilon", epsilon);
    let ladder = ctx
        .ladder("r_tilde_ladder", args.r_tilde_ladder.clone())
        .unwrap_or(SweepSpec::default().r_tilde_ladder);
    if !ladder.windows(2).all(|p| p[1] > p[0]) {
        ctx.violation("key `r_tilde_ladder`: must be strictly ascending".to_string());
    }
    if !r_boundary.is_nan() {
        for &rt in &ladder {
            if !(rt > r_boundary) {
                ctx.violation(format!(
                    "key `r_tilde_ladder`: entry {rt} does not exceed r_boundary = {r_boundary}"
                ));
            }
        }
    }
    let output = ctx.text("output", args.output.clone());
    ctx.finish()?;

    let sol = solve_scattering_2d(&w, r_boundary, epsilon).map_err(run_err)?;
    if sol.too_strong {
        return Err(Failure::Solve(format!(
            "a_scatt = {} reaches the base radius {r_boundary}; enlarge r_boundary",
            sol.a_scatt
        )));
    }

    let mut rows = Vec::with_capacity(ladder.len());
    for &r_tilde in &ladder {
        let pot = dyson_u2d(r_boundary, r_tilde, epsilon, |rp| {
            dyson_recursion(sol.e_r, r_boundary, rp)
        })
        .map_err(run_err)?;
        let asymptote = nu_asymptote(r_tilde, sol.ln_a_scatt);
        let deviation = (pot.nu - asymptote).abs() / asymptote;
        rows.push(vec![
            Cell::from(r_tilde),
            pot.nu.into(),
            asymptote.into(),
            deviation.into(),
            pot.height.into(),
            pot.admissibility.into(),
        ]);
    }
    let csv = render(
        &["r_tilde", "nu", "asymptote", "deviation", "height", "admissibility"],
        &rows,
    );
    write_out(output.as_deref(), &csv)?;
    Ok(true)
}

/// Dimensional-crossover sweep: (E3D − e⊥/h²)/E2D down an h ladder at
/// fixed g.
#[derive(Args)]
#[command(allow_negative_numbers = true)]
pub struct CrossoverArgs {
    /// Flat key=value config file; flags override its values.
    #[arg(long)]
    pub config: Option<String>,
    /// Output CSV path (stdout when absent).
    #[arg(long)]
    pub output: Option<String>,
    /// Descending h ladder (list or geom:<a>:<b>:<n>).
    #[arg(long)]
    pub h_ladder: Option<String>,
    /// Fixed 2D drive g = (∫s⁴)·Na/h.
    #[arg(long)]
    pub g: Option<f64>,
    /// Radial nodes on [0, 7] (the solver requires spacing <= 1/200).
    #[arg(long)]
    pub r_points: Option<usize>,
    /// Transverse nodes on [-8h, 8h] (the solver requires spacing <= h/40).
    #[arg(long)]
    pub z_points: Option<usize>,
    /// Relative convergence tolerance of the minimizers.
    #[arg(long)]
    pub tol: Option<f64>,
    /// Sweep worker count (1 = strictly sequential).
    #[arg(long)]
    pub width: Option<usize>,
}

const CROSSOVER_KEYS: &[&str] = &[
    "h_ladder", "g", "r_points", "z_points", "tol", "width", "output",
];

pub fn crossover(args: &CrossoverArgs) -> Result<bool, Failure> {
    let mut ctx = Ctx::load(args.config.as_deref(), CROSSOVER_KEYS);
    let mut spec = SweepSpec::default();
    if let Some(l) = ctx.ladder("h_ladder", args.h_ladder.clone()) {
        spec.h_ladder = l;
    }
    if let Some(g) = ctx.num("g", args.g) {
        spec.g_target = g;
    }
    if let Some(r) = ctx.count("r_points", args.r_points) {
        spec.r_points = r;
    }
    if let Some(z) = ctx.count("z_points", args.z_points) {
        spec.z_points = z;
    }
    if let Some(t) = ctx.num("tol", args.tol) {
        spec.tolerance = t;
    }
    spec.width = ctx.count("width", args.width);
    let output = ctx.text("output", args.output.clone());
    ctx.finish()?;

    let rows = experiments::run_crossover(&spec).map_err(sweep_failure)?;
    let csv = experiments::to_csv(&rows).map_err(run_err)?;
    write_out(output.as_deref(), &csv)?;
    Ok(rows.iter().all(|r| r.converged))
}

/// Phase diagram: region labels and g over an (h/a, ρ̄h²) grid.
#[derive(Args)]
#[command(allow_negative_numbers = true)]
pub struct PhaseArgs {
    /// Flat key=value config file; flags override its values.
    #[arg(long)]
    pub config: Option<String>,
    /// Output CSV path (stdout when absent).
    #[arg(long)]
    pub output: Option<String>,
    /// Ascending h/a ladder (list or geom:<a>:<b>:<n>).
    #[arg(long)]
    pub h_over_a_ladder: Option<String>,
    /// Ascending ρ̄h² ladder (list or geom:<a>:<b>:<n>).
    #[arg(long)]
    pub rho_h2_ladder: Option<String>,
    /// Sweep worker count (1 = strictly sequential).
    #[arg(long)]
    pub width: Option<usize>,
}

const PHASE_KEYS: &[&str] = &["h_over_a_ladder", "rho_h2_ladder", "width", "output"];

pub fn phase(args: &PhaseArgs) -> Result<bool, Failure> {
    let mut ctx = Ctx::load(args.config.as_deref(), PHASE_KEYS);
    let mut spec = SweepSpec::default();
    if let Some(l) = ctx.ladder("h_over_a_ladder", args.h_over_a_ladder.clone()) {
        spec.h_over_a_ladder = l;
    }
    if let Some(l) = ctx.ladder("rho_h2_ladder", args.rho_h2_ladder.clone()) {
        spec.rho_h2_ladder = l;
    }
    spec.width = ctx.count("width", args.width);
    let output = ctx.text("output", args.output.clone());
    ctx.finish()?;

    let rows = experiments::run_phase_diagram(&spec).map_err(sweep_failure)?;
    let csv = experiments::to_csv(&rows).map_err(run_err)?;
    write_out(output.as_deref(), &csv)?;
    Ok(rows.iter().all(|r| r.converged))
}
