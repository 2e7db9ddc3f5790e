//! `quasi2d` — dilute trapped bosons across the 3D→2D crossover, from the
//! command line.
//!
//! Every subcommand reads an optional flat `key = value` config file
//! (`--config`), overlays its flags (flags always win), and writes one CSV
//! table to stdout or `--output`.
//!
//! Exit codes:
//! - 0: solved, all runs converged.
//! - 2: configuration rejected before any solve (unknown/missing/duplicate
//!   keys, unparseable or out-of-range values, unreadable files); every
//!   violation is listed on stderr. clap uses the same code for flag errors.
//! - 3: a solver failed or reported non-convergence; the cause is on stderr.

// Same idiom as the library: `!(x > 0.0)` rejects NaN, `x <= 0.0` would not.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

mod cmds;
mod config;
mod table;

use clap::{Parser, Subcommand};

use config::Failure;

#[derive(Parser)]
#[command(
    name = "quasi2d",
    about = "Transverse modes, scattering lengths, GP ground states, and \
             crossover sweeps for disc-shaped Bose gases (units ħ = 2m = 1)",
    version
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Ground transverse mode of V⊥ at width h: e⊥, ẽ⊥, ∫s⁴.
    #[command(name = "transverse")]
    Transverse(cmds::TransverseArgs),
    /// 3D zero-energy scattering length of an interaction potential.
    #[command(name = "scatter3d")]
    Scatter3d(cmds::Scatter3dArgs),
    /// 2D scattering length and annulus energy, or the weak-coupling sweep.
    #[command(name = "scatter2d")]
    Scatter2d(cmds::Scatter2dArgs),
    /// Quasi-2D scattering length ln(a_2D/h) from (h, a, ∫s⁴).
    #[command(name = "a2d")]
    A2d(cmds::A2dArgs),
    /// 2D Gross-Pitaevskii ground state at drive Ng.
    #[command(name = "gp2d")]
    Gp2d(cmds::Gp2dArgs),
    /// 3D cylindrical Gross-Pitaevskii ground state at drive Na.
    #[command(name = "gp3d")]
    Gp3d(cmds::Gp3dArgs),
    /// Thomas-Fermi profile, or the E_GP/E_TF limit sweep over an Ng ladder.
    #[command(name = "tf")]
    Tf(cmds::TfArgs),
    /// Self-consistent effective 2D coupling g from (N, L, h, a).
    #[command(name = "selfg")]
    Selfg(cmds::SelfgArgs),
    /// Region classification (REGION_I / CROSSOVER / REGION_II) of (ρ̄, h, a).
    #[command(name = "regime")]
    Regime(cmds::RegimeArgs),
    /// Temple lower bound for −d²/dz² + V(z), sandwiched against E₀.
    #[command(name = "temple")]
    Temple(cmds::TempleArgs),
    /// Annulus normalizer ν(R̃) against its hard-disc asymptote.
    #[command(name = "dyson")]
    Dyson(cmds::DysonArgs),
    /// Dimensional-crossover sweep (E3D − e⊥/h²)/E2D down an h ladder.
    #[command(name = "crossover")]
    Crossover(cmds::CrossoverArgs),
    /// Phase diagram: region labels over an (h/a, ρ̄h²) grid.
    #[command(name = "phase")]
    Phase(cmds::PhaseArgs),
}

fn run() -> i32 {
    let cli = Cli::parse();
    let outcome = match &cli.cmd {
        Cmd::Transverse(a) => cmds::transverse(a),
        Cmd::Scatter3d(a) => cmds::scatter3d(a),
        Cmd::Scatter2d(a) => cmds::scatter2d(a),
        Cmd::A2d(a) => cmds::a2d(a),
        Cmd::Gp2d(a) => cmds::gp2d(a),
        Cmd::Gp3d(a) => cmds::gp3d(a),
        Cmd::Tf(a) => cmds::tf(a),
        Cmd::Selfg(a) => cmds::selfg(a),
        Cmd::Regime(a) => cmds::regime(a),
        Cmd::Temple(a) => cmds::temple(a),
        Cmd::Dyson(a) => cmds::dyson(a),
        Cmd::Crossover(a) => cmds::crossover(a),
        Cmd::Phase(a) => cmds::phase(a),
    };
    match outcome {
        Ok(true) => 0,
        Ok(false) => {
            eprintln!("quasi2d: completed with non-converged runs (see the converged column)");
            3
        }
        Err(Failure::Config(violations)) => {
            for v in &violations {
                eprintln!("quasi2d: {v}");
            }
            2
        }
        Err(Failure::Solve(message)) => {
            eprintln!("quasi2d: {message}");
            3
        }
    }
}

fn main() {
    std::process::exit(run());
}
